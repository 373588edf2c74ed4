//! Solve the exact stochastic dynamic program for one instance and read
//! the optimal (s, S) policy it produces.
//!
//! The solver discretizes inventory on a unit grid, sweeps the horizon
//! backwards, and returns per-period reorder points s_n and order-up-to
//! levels S_n: order up to S_n exactly when inventory is strictly below
//! s_n. The value function at the starting state is the benchmark cost
//! every heuristic is judged against.
//!
//! Run with: `cargo run --example optimal_policy`

use lotlab::{generate_test_bed, solve_sdp_default};

fn main() -> lotlab::Result<()> {
    let bed = generate_test_bed();
    let inst = bed
        .iter()
        .find(|i| i.id == "SIN1-cv0.20-K500-b5")
        .unwrap();

    let (policy, value) = solve_sdp_default(inst)?;

    println!("instance          {}", inst.id);
    println!("expected cost     {:.2}", value.optimal_cost(inst.initial_inventory));
    println!("\n n   mean   s_n     S_n     S_n - s_n");
    for n in 1..=inst.horizon() {
        println!(
            "{n:>2}  {:>5.0}  {:>6.1}  {:>6.1}  {:>6.1}",
            inst.demand.period(n).mean,
            policy.reorder[n - 1],
            policy.order_up_to[n - 1],
            policy.order_up_to[n - 1] - policy.reorder[n - 1],
        );
    }

    // The levels chase the demand shape: compare the S_n column against
    // the mean column above. A large gap S_n - s_n means the fixed order
    // cost makes small top-ups uneconomical in that period.
    Ok(())
}
