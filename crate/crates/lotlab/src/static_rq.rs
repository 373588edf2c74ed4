//! Static-uncertainty (R,Q) planning: order periods *and* order quantities
//! are all fixed before any demand is observed.
//!
//! With orders at t_1 < ... < t_k, the cumulative supply is a step function
//! Y_1 <= Y_2 <= ... (quantities are nonnegative), and the expected cost
//! separates over segments: periods in [t_i, t_{i+1}) cost
//! sum_t period_cost(D_{1..t}, Y_i). The solver searches schedules with a
//! shortest-path relaxation whose arc costs use each segment's
//! *unconstrained* optimal level — an admissible lower bound — and scores
//! the k best candidates exactly: monotone levels via pool-adjacent-
//! violators, then a clamp at the starting inventory. When the next
//! candidate's lower bound already exceeds the best exact cost, that best
//! is provably optimal.

use std::collections::HashMap;

use crate::cycles::{minimize, ConvexCost, CycleObjective, DemandPrefix, PooledCost};
use crate::dist::period_cost;
use crate::instance::Instance;
use crate::policy::RQPolicy;
use crate::{Error, Result};

/// How many schedule candidates the exact scorer examines by default.
pub const DEFAULT_TOP_K: usize = 50;

/// Expected cost charged to period t when cumulative supply since period 1
/// equals y: the single-period newsvendor cost against D_{1..t}.
pub fn cumulative_cost(instance: &Instance, t: usize, y: f64) -> f64 {
    let prefix = DemandPrefix::new(instance);
    period_cost(
        prefix.cumulative(1, t),
        y,
        instance.costs.holding_cost,
        instance.costs.penalty_cost,
    )
}

/// Unconstrained optimal cost of each "order at i covering i..j-1" segment,
/// for one planning origin (cumulative demand measured from `origin`).
/// Levels are not kept: the solver re-derives them, with the monotonicity
/// and starting-inventory constraints applied, when scoring a schedule.
struct ArcTable {
    origin: usize,
    /// [i - origin][j - i - 1] -> value for arcs (i, j).
    arcs: Vec<Vec<f64>>,
}

impl ArcTable {
    fn value(&self, i: usize, j: usize) -> f64 {
        self.arcs[i - self.origin][j - i - 1]
    }
}

#[derive(Clone, Copy)]
struct PathEntry {
    cost: f64,
    parent: usize,
    rank: usize,
    ordered: bool,
}

/// Static planner with memoized segment optima, reusable across re-plans
/// from any (start period, inventory) state of the same instance.
pub struct StaticPlanner {
    prefix: DemandPrefix,
    setup: f64,
    horizon: usize,
    top_k: usize,
    tables: HashMap<usize, ArcTable>,
}

impl StaticPlanner {
    pub fn new(instance: &Instance, top_k: usize) -> Self {
        Self {
            prefix: DemandPrefix::new(instance),
            setup: instance.costs.fixed_order_cost,
            horizon: instance.horizon(),
            top_k: top_k.max(1),
            tables: HashMap::new(),
        }
    }

    fn ensure_table(&mut self, origin: usize) {
        if self.tables.contains_key(&origin) {
            return;
        }
        let prefix = &self.prefix;
        let n = self.horizon;
        let arcs: Vec<Vec<f64>> = (origin..=n)
            .map(|i| {
                (i + 1..=n + 1)
                    .map(|j| minimize(&CycleObjective::new(prefix, origin, i, j - 1)).value)
                    .collect()
            })
            .collect();
        self.tables.insert(origin, ArcTable { origin, arcs });
    }

    /// Exact expected cost of a given schedule from (origin, inventory x):
    /// optimal monotone levels (pool adjacent violators on the segment
    /// objectives, then clamp at x) plus setup charges and the cost of the
    /// unordered prefix. Returns the per-order levels and the total.
    fn evaluate_schedule(&self, origin: usize, x: f64, schedule: &[usize]) -> (Vec<f64>, f64) {
        let n = self.horizon;
        if schedule.is_empty() {
            let all = CycleObjective::new(&self.prefix, origin, origin, n);
            return (Vec::new(), all.value(x));
        }
        let mut cost = self.setup * schedule.len() as f64;
        if schedule[0] > origin {
            cost += CycleObjective::new(&self.prefix, origin, origin, schedule[0] - 1).value(x);
        }
        // isotonic regression over segment objectives
        let mut blocks: Vec<(PooledCost, f64, usize)> = Vec::new(); // objective, level, #orders
        for (idx, &t) in schedule.iter().enumerate() {
            let last = schedule.get(idx + 1).map_or(n, |&next| next - 1);
            let seg = CycleObjective::new(&self.prefix, origin, t, last);
            let m = minimize(&seg);
            blocks.push((PooledCost(vec![seg]), m.arg, 1));
            while blocks.len() >= 2 && blocks[blocks.len() - 2].1 > blocks[blocks.len() - 1].1 {
                let (top_obj, _, top_n) = blocks.pop().unwrap();
                let (mut pooled, _, prev_n) = blocks.pop().unwrap();
                pooled.0.extend(top_obj.0);
                let m = minimize(&pooled);
                blocks.push((pooled, m.arg, prev_n + top_n));
            }
        }
        let mut levels = Vec::with_capacity(schedule.len());
        for (obj, level, orders) in &blocks {
            let clamped = level.max(x);
            cost += obj.value(clamped);
            levels.extend(std::iter::repeat(clamped).take(*orders));
        }
        (levels, cost)
    }

    /// Best static plan for periods start..=N from inventory x. Schedule
    /// periods in the result are absolute (1-based) period indices.
    pub fn solve(&mut self, start: usize, x: f64) -> Result<RQPolicy> {
        let n = self.horizon;
        if start < 1 || start > n {
            return Err(Error::InvalidInput(format!(
                "plan start {start} outside horizon 1..={n}"
            )));
        }
        self.ensure_table(start);
        let table = &self.tables[&start];
        let k = self.top_k;

        // k-best paths, nodes start..=n+1; node v's entries are the k
        // cheapest lower-bound paths covering periods start..v-1.
        let idx = |v: usize| v - start;
        let mut entries: Vec<Vec<PathEntry>> = vec![Vec::new(); n + 2 - start];
        entries[0].push(PathEntry {
            cost: 0.0,
            parent: start,
            rank: 0,
            ordered: false,
        });
        for v in start + 1..=n + 1 {
            let mut cands: Vec<PathEntry> = Vec::new();
            // leading unordered stretch at inventory x
            cands.push(PathEntry {
                cost: CycleObjective::new(&self.prefix, start, start, v - 1).value(x),
                parent: start,
                rank: 0,
                ordered: false,
            });
            for u in start..v {
                let arc = self.setup + table.value(u, v);
                for (rank, e) in entries[idx(u)].iter().enumerate() {
                    // the unordered stretch is only ever the leading arc
                    if u > start || e.rank == 0 {
                        cands.push(PathEntry {
                            cost: e.cost + arc,
                            parent: u,
                            rank,
                            ordered: true,
                        });
                    }
                }
            }
            cands.sort_by(|a, b| a.cost.total_cmp(&b.cost));
            cands.truncate(k);
            entries[idx(v)] = cands;
        }

        let mut best: Option<(f64, Vec<usize>, Vec<f64>)> = None;
        for final_entry in entries[idx(n + 1)].clone() {
            if let Some((best_cost, _, _)) = &best {
                if final_entry.cost >= *best_cost - 1e-12 {
                    break; // lower bound certifies optimality of `best`
                }
            }
            let mut schedule = Vec::new();
            let mut node = n + 1;
            let mut e = final_entry;
            while node != start {
                if e.ordered {
                    schedule.push(e.parent);
                }
                node = e.parent;
                if node != start {
                    e = entries[idx(node)][e.rank];
                }
            }
            schedule.reverse();
            let (levels, exact) = self.evaluate_schedule(start, x, &schedule);
            if best.as_ref().map_or(true, |(c, _, _)| exact < *c) {
                best = Some((exact, schedule, levels));
            }
        }
        let (mut cost, mut schedule, mut levels) =
            best.expect("final node always has the never-order path");

        // drop orders whose clamped quantity vanished, re-scoring exactly
        loop {
            let mut base = x;
            let keep: Vec<bool> = levels
                .iter()
                .map(|&y| {
                    let q = y - base;
                    base = y;
                    q > 1e-7
                })
                .collect();
            if keep.iter().all(|&b| b) {
                break;
            }
            let kept: Vec<usize> = schedule
                .iter()
                .zip(&keep)
                .filter_map(|(&t, &b)| b.then_some(t))
                .collect();
            schedule = kept;
            let (lv, c) = self.evaluate_schedule(start, x, &schedule);
            levels = lv;
            cost = c;
        }
        let mut base = x;
        let quantities: Vec<f64> = levels
            .iter()
            .map(|&y| {
                let q = y - base;
                base = y;
                q
            })
            .collect();
        RQPolicy::new(schedule, quantities, cost)
    }
}

/// Solve the static plan for a whole instance from its initial inventory.
pub fn solve_static(instance: &Instance) -> Result<RQPolicy> {
    StaticPlanner::new(instance, DEFAULT_TOP_K).solve(1, instance.initial_inventory)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{CostParams, DemandSpec};

    fn instance(means: Vec<f64>, cv: f64, k: f64, h: f64, b: f64, x0: f64) -> Instance {
        Instance::new(
            DemandSpec::new(means, cv).unwrap(),
            CostParams::new(k, h, b).unwrap(),
            x0,
        )
        .unwrap()
    }

    /// Every schedule over a tiny horizon, including the empty one.
    fn all_schedules(n: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            out.push((1..=n).filter(|t| mask >> (t - 1) & 1 == 1).collect());
        }
        out
    }

    #[test]
    fn dominant_setup_cost_yields_one_order() {
        // K = 1000 makes a second order (2000+) and full backordering
        // (about 5 * 600 = 3000) both worse than one order covering all
        let inst = instance(vec![100.0; 3], 0.2, 1000.0, 1.0, 5.0, 0.0);
        let policy = solve_static(&inst).unwrap();
        assert_eq!(policy.schedule, vec![1]);
        let prefix = DemandPrefix::new(&inst);
        let m = minimize(&CycleObjective::new(&prefix, 1, 1, 3));
        assert!((policy.planned_cost - (1000.0 + m.value)).abs() < 1e-6);
        assert!((policy.quantities[0] - m.arg).abs() < 1e-6);
    }

    #[test]
    fn ample_initial_stock_orders_nothing() {
        let inst = instance(vec![100.0; 3], 0.2, 250.0, 1.0, 5.0, 500.0);
        let policy = solve_static(&inst).unwrap();
        assert!(policy.schedule.is_empty());
        let prefix = DemandPrefix::new(&inst);
        let want = CycleObjective::new(&prefix, 1, 1, 3).value(500.0);
        assert!((policy.planned_cost - want).abs() < 1e-9);
    }

    #[test]
    fn matches_exhaustive_schedule_enumeration() {
        for &x0 in &[0.0, 180.0, 500.0] {
            let inst = instance(vec![100.0, 60.0, 140.0, 80.0], 0.25, 250.0, 1.0, 5.0, x0);
            let mut planner = StaticPlanner::new(&inst, DEFAULT_TOP_K);
            let policy = planner.solve(1, x0).unwrap();
            let brute = all_schedules(4)
                .iter()
                .map(|s| planner.evaluate_schedule(1, x0, s).1)
                .fold(f64::INFINITY, f64::min);
            assert!(
                (policy.planned_cost - brute).abs() < 1e-9,
                "x0={x0}: solver {} vs exhaustive {brute}",
                policy.planned_cost
            );
        }
    }

    #[test]
    fn replanning_midway_matches_exhaustive_tail_enumeration() {
        let inst = instance(vec![100.0, 60.0, 140.0, 80.0, 120.0], 0.25, 400.0, 1.0, 5.0, 0.0);
        let mut planner = StaticPlanner::new(&inst, DEFAULT_TOP_K);
        let policy = planner.solve(3, 75.0).unwrap();
        assert!(policy.schedule.iter().all(|&t| (3..=5).contains(&t)));
        let brute = [
            vec![],
            vec![3],
            vec![4],
            vec![5],
            vec![3, 4],
            vec![3, 5],
            vec![4, 5],
            vec![3, 4, 5],
        ]
        .iter()
        .map(|s| planner.evaluate_schedule(3, 75.0, s).1)
        .fold(f64::INFINITY, f64::min);
        assert!((policy.planned_cost - brute).abs() < 1e-9);
    }

    #[test]
    fn perturbing_the_chosen_schedule_never_improves() {
        let inst = instance(
            vec![120.0, 55.4, 156.9, 83.1, 36.9, 138.5, 184.5, 69.2],
            0.3,
            500.0,
            1.0,
            2.0,
            0.0,
        );
        let mut planner = StaticPlanner::new(&inst, DEFAULT_TOP_K);
        let policy = planner.solve(1, 0.0).unwrap();
        let base = policy.planned_cost;
        let sched = &policy.schedule;
        let mut variants: Vec<Vec<usize>> = Vec::new();
        for i in 0..sched.len() {
            let mut drop = sched.clone();
            drop.remove(i);
            variants.push(drop);
            for shift in [-1i64, 1] {
                let moved = sched[i] as i64 + shift;
                if moved >= 1 && moved <= 8 {
                    let mut v = sched.clone();
                    v[i] = moved as usize;
                    v.sort_unstable();
                    v.dedup();
                    variants.push(v);
                }
            }
        }
        for t in 1..=8 {
            if !sched.contains(&t) {
                let mut v = sched.clone();
                v.push(t);
                v.sort_unstable();
                variants.push(v);
            }
        }
        for v in variants {
            let (_, cost) = planner.evaluate_schedule(1, 0.0, &v);
            assert!(
                cost >= base - 1e-9,
                "perturbation {v:?} scored {cost} below planned {base}"
            );
        }
    }

    #[test]
    fn quantities_are_strictly_positive_even_with_awkward_stock() {
        // starting stock close to (but above) the first unconstrained level
        // forces the clamp; the vanished first order must be dropped
        let inst = instance(vec![100.0; 6], 0.2, 250.0, 1.0, 5.0, 230.0);
        let policy = solve_static(&inst).unwrap();
        for q in &policy.quantities {
            assert!(*q > 0.0);
        }
        assert!(!policy.schedule.is_empty(), "six periods of demand need orders");
        assert!(policy.schedule[0] > 1, "230 units cover more than period 1");
    }

    #[test]
    fn cumulative_cost_prices_against_convolved_demand() {
        let inst = instance(vec![100.0, 50.0], 0.2, 0.0, 1.0, 5.0, 0.0);
        let prefix = DemandPrefix::new(&inst);
        let want = period_cost(prefix.cumulative(1, 2), 160.0, 1.0, 5.0);
        assert!((cumulative_cost(&inst, 2, 160.0) - want).abs() < 1e-12);
    }
}
