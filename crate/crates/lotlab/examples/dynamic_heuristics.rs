//! Compare the two dynamic (s, S) heuristics against the exact dynamic
//! program, period by period.
//!
//! Both heuristics produce reorder points and order-up-to levels without
//! solving the full dynamic program:
//!
//! * the cost-rate heuristic sizes each potential cycle by minimizing
//!   expected cost per period (a stochastic Silver–Meal rule), then sets
//!   the reorder point where ordering and waiting break even;
//! * the rate-matching heuristic solves a library of *stationary* problems
//!   at integer demand rates, then per period adopts the stationary policy
//!   whose rate best explains the upcoming forecast window. Near the end
//!   of the horizon (the last 8 periods) it falls back to the exact
//!   solution, which it takes as an input.
//!
//! Run with: `cargo run --example dynamic_heuristics`

use lotlab::method::{Method, SolveContext};
use lotlab::{generate_test_bed, Policy};

fn main() -> lotlab::Result<()> {
    let bed = generate_test_bed();
    let inst = bed
        .iter()
        .find(|i| i.id == "LCY1-cv0.20-K500-b5")
        .unwrap();

    let ctx = SolveContext::new();
    let unwrap_ss = |p: Policy| match p {
        Policy::Ss(p) => p,
        _ => unreachable!("these methods return (s, S) policies"),
    };
    let exact = unwrap_ss(ctx.solve(inst, Method::Sdp)?);
    let cost_rate = unwrap_ss(ctx.solve(inst, Method::Ask)?);
    let rate_match = unwrap_ss(ctx.solve(inst, Method::Bol)?);

    println!("instance {}\n", inst.id);
    println!("          exact          cost-rate      rate-match");
    println!(" n  mean    s      S       s      S       s      S");
    for n in 1..=inst.horizon() {
        println!(
            "{n:>2} {:>5.0} {:>6.0} {:>6.0}  {:>6.0} {:>6.0}  {:>6.0} {:>6.0}",
            inst.demand.period(n).mean,
            exact.reorder[n - 1],
            exact.order_up_to[n - 1],
            cost_rate.reorder[n - 1],
            cost_rate.order_up_to[n - 1],
            rate_match.reorder[n - 1],
            rate_match.order_up_to[n - 1],
        );
    }

    let tail_start = inst.horizon() - 8 + 1;
    let tail_matches = (tail_start..=inst.horizon()).all(|n| {
        rate_match.reorder[n - 1] == exact.reorder[n - 1]
            && rate_match.order_up_to[n - 1] == exact.order_up_to[n - 1]
    });
    println!(
        "\nrate-match copies the exact policy from period {tail_start} on: {tail_matches}"
    );
    Ok(())
}
