//! Build the 216-instance benchmark bed and look around in it.
//!
//! The bed crosses six demand patterns (stationary, erratic, two
//! sinusoidals, two life cycles) with three demand coefficients of
//! variation, four setup costs, and three backorder penalties. Every
//! pattern averages 100 units per period over the 24-period horizon, so
//! cost differences come from *shape*, not volume.
//!
//! Run with: `cargo run --example generate_test_bed`

use lotlab::generate_test_bed;

fn main() {
    let bed = generate_test_bed();
    println!("{} instances", bed.len());

    // One row per pattern: how the demand shape varies around the mean.
    println!("\npattern  min   max   first..last (means)");
    for pattern in lotlab::instance::PATTERN_NAMES {
        let inst = bed
            .iter()
            .find(|i| i.pattern == pattern)
            .expect("every pattern is in the bed");
        let means = &inst.demand.means;
        let min = means.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = means.iter().cloned().fold(0.0f64, f64::max);
        println!(
            "{pattern:<8} {min:>4.0}  {max:>4.0}   {}",
            means
                .iter()
                .map(|m| format!("{m:.0}"))
                .collect::<Vec<_>>()
                .join(" ")
        );
    }

    // The factor levels, recovered from the instances themselves.
    let mut cvs: Vec<f64> = bed.iter().map(|i| i.demand.cv).collect();
    cvs.sort_by(f64::total_cmp);
    cvs.dedup();
    let mut setups: Vec<f64> = bed.iter().map(|i| i.costs.fixed_order_cost).collect();
    setups.sort_by(f64::total_cmp);
    setups.dedup();
    let mut penalties: Vec<f64> = bed.iter().map(|i| i.costs.penalty_cost).collect();
    penalties.sort_by(f64::total_cmp);
    penalties.dedup();
    println!("\ncv levels       {cvs:?}");
    println!("setup costs     {setups:?}");
    println!("penalty costs   {penalties:?}");
    println!("holding cost    1 (numeraire), start inventory 0, horizon 24");

    // Instance ids encode their cell, so any instance is easy to pull out.
    let id = "SIN1-cv0.20-K1000-b5";
    let inst = bed.iter().find(|i| i.id == id).unwrap();
    println!(
        "\n{id}: peak demand {:.0}, sigma at peak {:.1}",
        inst.demand.means.iter().cloned().fold(0.0f64, f64::max),
        inst.demand
            .means
            .iter()
            .cloned()
            .fold(0.0f64, f64::max)
            * inst.demand.cv
    );
}
