//! Exact finite-horizon optimum by stochastic dynamic programming on a
//! discretized inventory grid, with (s_n, S_n) policy extraction.
//!
//! The recursion works backward from a zero terminal value:
//!
//!   H_n(y) = period_cost(d_n, y) + E[ V_{n+1}(y - d_n) ]
//!   V_n(x) = min( H_n(x),  K + min_{y >= x} H_n(y) )
//!
//! The order-up-to level S_n is the grid argmin of H_n, and the reorder
//! level s_n is the lowest grid point where skipping the order is already
//! no worse than paying K and moving to S_n. Ties favor not ordering.

use crate::dist::{discretize, DEFAULT_K_SIGMA};
use crate::instance::Instance;
use crate::policy::SsPolicy;
use crate::{Error, Result};

/// Inventory grid for the dynamic program: points lower + i*step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub lower: f64,
    pub upper: f64,
    pub step: f64,
}

impl GridSpec {
    pub fn new(lower: f64, upper: f64, step: f64) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) || !(upper - lower > step) {
            return Err(Error::InvalidInput(format!(
                "grid needs step > 0 and upper - lower > step, got [{lower}, {upper}] step {step}"
            )));
        }
        Ok(Self { lower, upper, step })
    }

    /// Default grid for an instance. The upper bound covers ordering up to
    /// the whole remaining horizon's demand; the lower bound covers how deep
    /// backlog can rationally run before an order is placed (roughly K/b)
    /// plus several periods of drift, so the value function is constant at
    /// and below the boundary.
    pub fn for_instance(instance: &Instance) -> Self {
        let mut total_mean = 0.0;
        let mut total_var = 0.0;
        let mut max_mean: f64 = 0.0;
        let mut max_sd: f64 = 0.0;
        for n in 1..=instance.horizon() {
            let d = instance.demand.period(n);
            total_mean += d.mean;
            total_var += d.std_dev * d.std_dev;
            max_mean = max_mean.max(d.mean);
            max_sd = max_sd.max(d.std_dev);
        }
        let c = instance.costs;
        let lower = -(c.fixed_order_cost / c.penalty_cost + 8.0 * max_mean + 4.0 * max_sd) - 10.0;
        let upper = (total_mean + 4.0 * total_var.sqrt() + 10.0).max(instance.initial_inventory);
        Self {
            lower,
            upper,
            step: 1.0,
        }
    }

    fn widened(&self, factor: f64) -> Self {
        let span = self.upper - self.lower;
        Self {
            lower: self.lower - factor * span,
            upper: self.upper + factor * span,
            step: self.step,
        }
    }

    pub fn len(&self) -> usize {
        ((self.upper - self.lower) / self.step).ceil() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, i: usize) -> f64 {
        self.lower + i as f64 * self.step
    }
}

/// Optimal cost-to-go V_n(x) for every period, stored on the grid.
/// Row n (1-based) is the cost of running periods n..=N optimally from
/// inventory x; row N+1 is the zero terminal value.
#[derive(Debug, Clone)]
pub struct ValueFunction {
    grid: GridSpec,
    rows: Vec<Vec<f64>>,
}

impl ValueFunction {
    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn horizon(&self) -> usize {
        self.rows.len() - 1
    }

    /// V_n(x) by linear interpolation; constant extension outside the grid
    /// (exact below, where every state orders up to the same level).
    pub fn value(&self, n: usize, x: f64) -> f64 {
        let row = &self.rows[n - 1];
        let pos = (x - self.grid.lower) / self.grid.step;
        if pos <= 0.0 {
            return row[0];
        }
        let top = (row.len() - 1) as f64;
        if pos >= top {
            return row[row.len() - 1];
        }
        let i = pos.floor() as usize;
        let frac = pos - i as f64;
        row[i] * (1.0 - frac) + row[i + 1] * frac
    }

    /// Expected optimal cost of the whole horizon from starting inventory.
    pub fn optimal_cost(&self, initial_inventory: f64) -> f64 {
        self.value(1, initial_inventory)
    }

    pub fn row(&self, n: usize) -> &[f64] {
        &self.rows[n - 1]
    }
}

/// Solve the dynamic program on the given grid and extract the per-period
/// (s_n, S_n) policy. Fails with a grid diagnostic if an order-up-to level
/// lands on the grid boundary or the reorder region runs off the bottom.
pub fn solve_sdp(instance: &Instance, grid: GridSpec) -> Result<(SsPolicy, ValueFunction)> {
    let n_periods = instance.horizon();
    let m = grid.len();
    let k_setup = instance.costs.fixed_order_cost;

    let mut rows = vec![Vec::new(); n_periods + 1];
    rows[n_periods] = vec![0.0; m];
    let mut reorder = vec![0.0; n_periods];
    let mut order_up_to = vec![0.0; n_periods];

    let mut h_row = vec![0.0; m];
    for n in (1..=n_periods).rev() {
        let demand = discretize(instance.demand.period(n), grid.step, DEFAULT_K_SIGMA)?;
        // Interpolation offsets of y - d_j relative to y's own grid index.
        let offsets: Vec<(usize, f64, f64)> = demand
            .support
            .iter()
            .zip(&demand.probs)
            .map(|(&d, &p)| {
                let off = d / grid.step;
                let whole = off.floor();
                (whole as usize, off - whole, p)
            })
            .collect();
        let next = std::mem::take(&mut rows[n]);
        let d_n = instance.demand.period(n);
        let (h, b) = (instance.costs.holding_cost, instance.costs.penalty_cost);
        for i in 0..m {
            let y = grid.point(i);
            let stage = crate::dist::period_cost(d_n, y, h, b);
            let mut exp_next = 0.0;
            for &(whole, frac, p) in &offsets {
                // index of y - d_j is i - whole - frac grid steps
                let v = if i > whole {
                    let base = i - whole;
                    next[base] * (1.0 - frac) + next[base - 1] * frac
                } else {
                    next[0]
                };
                exp_next += p * v;
            }
            h_row[i] = stage + exp_next;
        }
        rows[n] = next;

        // Suffix minimum of H over y >= x; ties keep the lowest level.
        let mut best = f64::INFINITY;
        let mut best_idx = m - 1;
        let mut value_row = vec![0.0; m];
        let mut order_value = vec![0.0; m];
        for i in (0..m).rev() {
            if h_row[i] <= best {
                best = h_row[i];
                best_idx = i;
            }
            order_value[i] = k_setup + best;
            value_row[i] = h_row[i].min(order_value[i]);
        }
        let s_big_idx = best_idx;
        if s_big_idx == 0 || s_big_idx + 1 == m {
            return Err(Error::GridTooSmall(format!(
                "period {n}: order-up-to level {} sits on the grid boundary [{}, {}]; \
                 widen the grid and re-solve",
                grid.point(s_big_idx),
                grid.lower,
                grid.upper
            )));
        }
        let threshold = k_setup + h_row[s_big_idx];
        let s_small_idx = match h_row.iter().position(|&v| v <= threshold) {
            Some(idx) => idx,
            None => unreachable!("H(S) <= K + H(S)"),
        };
        if s_small_idx == 0 {
            return Err(Error::GridTooSmall(format!(
                "period {n}: reorder region reaches the grid floor {}; lower the grid floor \
                 and re-solve",
                grid.lower
            )));
        }
        reorder[n - 1] = grid.point(s_small_idx);
        order_up_to[n - 1] = grid.point(s_big_idx);
        rows[n - 1] = value_row;
    }

    let policy = SsPolicy::new(reorder, order_up_to)?;
    let vf = ValueFunction { grid, rows };
    Ok((policy, vf))
}

/// Solve with the instance's default grid, widening it and retrying if a
/// boundary diagnostic fires.
pub fn solve_sdp_default(instance: &Instance) -> Result<(SsPolicy, ValueFunction)> {
    solve_sdp_with_step(instance, GridSpec::for_instance(instance).step)
}

/// [`solve_sdp_default`] with an explicit grid resolution.
pub fn solve_sdp_with_step(instance: &Instance, step: f64) -> Result<(SsPolicy, ValueFunction)> {
    let base = GridSpec::for_instance(instance);
    let mut grid = GridSpec::new(base.lower, base.upper, step)?;
    for _ in 0..3 {
        match solve_sdp(instance, grid) {
            Err(Error::GridTooSmall(_)) => grid = grid.widened(1.0),
            other => return other,
        }
    }
    solve_sdp(instance, grid)
}

/// Order quantity the (s, S) policy places in period n (1-based) at
/// inventory x: up to S_n when x is strictly below s_n, otherwise nothing
/// (an exact tie keeps the order unplaced).
pub fn sdp_action(policy: &SsPolicy, n: usize, x: f64) -> f64 {
    if x < policy.reorder[n - 1] {
        policy.order_up_to[n - 1] - x
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{critical_level, period_cost};
    use crate::instance::{CostParams, DemandSpec};

    fn instance(means: Vec<f64>, cv: f64, k: f64, h: f64, b: f64, x0: f64) -> Instance {
        Instance::new(
            DemandSpec::new(means, cv).unwrap(),
            CostParams::new(k, h, b).unwrap(),
            x0,
        )
        .unwrap()
    }

    #[test]
    fn newsvendor_single_period_no_setup() {
        let inst = instance(vec![100.0], 0.1, 0.0, 1.0, 9.0, 0.0);
        let (policy, vf) = solve_sdp_default(&inst).unwrap();
        let d = inst.demand.period(1);
        let want_level = critical_level(d, 1.0, 9.0);
        // grid resolution is 1, so the argmin is the nearest grid point
        assert!(
            (policy.order_up_to[0] - want_level).abs() <= 0.5 + 1e-9,
            "S={} vs newsvendor {want_level}",
            policy.order_up_to[0]
        );
        // with K = 0 ordering is free: s = S on the grid
        assert!((policy.reorder[0] - policy.order_up_to[0]).abs() < 1e-12);
        let want_cost = period_cost(d, want_level, 1.0, 9.0);
        assert!(
            (vf.optimal_cost(0.0) - want_cost).abs() < 0.05,
            "V={} vs {want_cost}",
            vf.optimal_cost(0.0)
        );
    }

    #[test]
    fn setup_cost_separates_reorder_from_order_up_to() {
        let inst = instance(vec![100.0], 0.2, 300.0, 1.0, 5.0, 0.0);
        let (policy, vf) = solve_sdp_default(&inst).unwrap();
        let (s, s_big) = (policy.reorder[0], policy.order_up_to[0]);
        assert!(s < s_big);
        // at states below s the value is exactly K + H(S) = V(very low x)
        let low = vf.value(1, s - 50.0);
        let lower_still = vf.value(1, s - 500.0);
        assert!((low - lower_still).abs() < 1e-9);
        // just above s, not ordering is weakly better
        assert!(vf.value(1, s) <= low + 1e-9);
    }

    #[test]
    fn near_deterministic_two_periods_match_hand_solution() {
        // demands 5, 5; ordering once to 10 costs K + h*5 = 11,
        // twice costs 2K = 12, and backlogging is priced out at b = 10
        let inst = instance(vec![5.0, 5.0], 1e-9, 6.0, 1.0, 10.0, 0.0);
        let grid = GridSpec::new(-40.0, 40.0, 1.0).unwrap();
        let (policy, vf) = solve_sdp(&inst, grid).unwrap();
        assert!((vf.optimal_cost(0.0) - 11.0).abs() < 1e-6, "{}", vf.optimal_cost(0.0));
        assert!((policy.order_up_to[0] - 10.0).abs() < 1e-6);
        assert!(sdp_action(&policy, 1, 0.0) > 0.0);
    }

    #[test]
    fn action_is_strict_below_reorder_level() {
        let policy = SsPolicy::new(vec![20.0], vec![80.0]).unwrap();
        assert_eq!(sdp_action(&policy, 1, 20.0), 0.0);
        assert!((sdp_action(&policy, 1, 19.5) - 60.5).abs() < 1e-12);
        assert_eq!(sdp_action(&policy, 1, 25.0), 0.0);
    }

    #[test]
    fn boundary_argmin_reports_grid_too_small() {
        let inst = instance(vec![100.0, 100.0], 0.2, 100.0, 1.0, 5.0, 0.0);
        // upper bound of 50 cannot hold the ~100+ order-up-to level
        let grid = GridSpec::new(-50.0, 50.0, 1.0).unwrap();
        match solve_sdp(&inst, grid) {
            Err(Error::GridTooSmall(msg)) => assert!(msg.contains("widen") || msg.contains("floor")),
            other => panic!("expected grid diagnostic, got {other:?}"),
        }
    }

    #[test]
    fn value_function_is_k_convex_at_spot_checks() {
        let inst = instance(vec![100.0, 60.0, 140.0, 90.0], 0.25, 250.0, 1.0, 5.0, 0.0);
        let (_, vf) = solve_sdp_default(&inst).unwrap();
        let k = 250.0;
        for n in 1..=4 {
            for &y in &[-50.0, 0.0, 80.0, 150.0, 220.0] {
                for &(delta, z) in &[(10.0, 30.0), (25.0, 5.0), (40.0, 60.0)] {
                    let lhs = k + vf.value(n, y + z);
                    let slope = (vf.value(n, y) - vf.value(n, y - delta)) / delta;
                    let rhs = vf.value(n, y) + z * slope;
                    assert!(
                        lhs >= rhs - 1e-6 * (1.0 + rhs.abs()),
                        "K-convexity violated at n={n} y={y} delta={delta} z={z}: {lhs} < {rhs}"
                    );
                }
            }
        }
    }

    #[test]
    fn tail_subproblem_reproduces_suffix_of_full_solution() {
        let inst = instance(vec![100.0, 80.0, 120.0, 90.0], 0.2, 150.0, 1.0, 5.0, 0.0);
        let grid = GridSpec::new(-300.0, 500.0, 1.0).unwrap();
        let (full_policy, full_vf) = solve_sdp(&inst, grid).unwrap();
        let tail = inst.tail(3, 25.0);
        let (tail_policy, tail_vf) = solve_sdp(&tail, grid).unwrap();
        // periods 3..4 of the full problem are periods 1..2 of the tail
        assert_eq!(full_policy.reorder[2..], tail_policy.reorder[..]);
        assert_eq!(full_policy.order_up_to[2..], tail_policy.order_up_to[..]);
        for (a, b) in full_vf.row(3).iter().zip(tail_vf.row(1)) {
            assert_eq!(a.to_bits(), b.to_bits(), "value rows must match bit for bit");
        }
    }

    #[test]
    fn reorder_never_exceeds_order_up_to_across_the_bed_sample() {
        let inst = instance(vec![120.0, 55.4, 156.9, 83.1], 0.3, 500.0, 1.0, 2.0, 0.0);
        let (policy, _) = solve_sdp_default(&inst).unwrap();
        for n in 0..4 {
            assert!(policy.reorder[n] <= policy.order_up_to[n]);
        }
    }
}
