//! Static-dynamic plans: replenishment periods are fixed in advance, but
//! each scheduled order fills up to a planned level, so quantities adapt to
//! the inventory observed on the day.
//!
//! Because an order-up-to level resets the inventory, cycles decouple and
//! the schedule is a shortest path over cycle arcs. Two cycle costings are
//! provided:
//!
//! * `Exact`: each cycle's level minimizes the true expected cost (smooth
//!   convex minimization);
//! * `PiecewiseLinear`: the standard-normal loss function is replaced by a
//!   W-segment piecewise-linear *upper* envelope: the segment-mean lower
//!   bound (tight at the segment quantiles) plus its worst-case gap, which
//!   sits at the hinge kinks. Each cycle cost is then evaluated only at
//!   the envelope's hinge levels.

use crate::cycles::{minimize, ConvexCost, CycleObjective, DemandPrefix};
use crate::dist::{std_normal_inv_cdf, std_normal_pdf, NormalDist};
use crate::instance::Instance;
use crate::policy::RSPolicy;
use crate::{Error, Result};

/// How a cycle's expected cost (and order-up-to level) is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleCosting {
    Exact,
    PiecewiseLinear { segments: usize },
}

/// Default segment count for the piecewise-linear envelope.
pub const DEFAULT_SEGMENTS: usize = 10;

/// Piecewise-linear sandwich of the standard normal loss function over
/// `w` equal-probability segments: hinge slopes change at the segment
/// conditional means m_i, and the true loss sits between the hinge bound
/// and the bound shifted up by `gap`.
#[derive(Debug, Clone)]
pub struct PiecewiseLoss {
    /// Conditional segment means m_1 < ... < m_w (hinge locations).
    pub hinges: Vec<f64>,
    /// Uniform worst-case gap e_w = max_z [loss(z) - lower_bound(z)],
    /// attained at a hinge (the bound is exact at the segment quantiles).
    pub gap: f64,
    w: usize,
}

impl PiecewiseLoss {
    pub fn new(w: usize) -> Result<Self> {
        if w < 2 {
            return Err(Error::InvalidInput(format!(
                "piecewise loss needs at least 2 segments, got {w}"
            )));
        }
        let std = NormalDist {
            mean: 0.0,
            std_dev: 1.0,
        };
        let mut hinges = Vec::with_capacity(w);
        let mut prev_pdf = 0.0; // phi at the -inf boundary
        for i in 1..=w {
            let pdf = if i == w {
                0.0
            } else {
                std_normal_pdf(std_normal_inv_cdf(i as f64 / w as f64))
            };
            hinges.push(w as f64 * (prev_pdf - pdf));
            prev_pdf = pdf;
        }
        let mut pl = Self {
            hinges,
            gap: 0.0,
            w,
        };
        // the bound touches the true loss at the segment quantiles; the
        // worst gap is at the hinge kinks, i.e. the segment means
        let mut gap: f64 = 0.0;
        for i in 0..w {
            let m = pl.hinges[i];
            gap = gap.max(std.loss(m) - pl.lower_bound(m));
        }
        pl.gap = gap;
        Ok(pl)
    }

    pub fn segments(&self) -> usize {
        self.w
    }

    /// Segment-mean (Jensen) lower bound of the standard normal loss.
    pub fn lower_bound(&self, z: f64) -> f64 {
        let mut acc = 0.0;
        for &m in &self.hinges {
            if m > z {
                acc += m - z;
            }
        }
        acc / self.w as f64
    }

    /// Conservative loss value: lower bound plus the uniform gap.
    pub fn upper_bound(&self, z: f64) -> f64 {
        self.lower_bound(z) + self.gap
    }
}

/// Expected cycle cost (periods first..=last, demand measured from first)
/// under the piecewise envelope, evaluated at order-up-to level s_big.
fn piecewise_cycle_value(
    prefix: &DemandPrefix,
    pl: &PiecewiseLoss,
    first: usize,
    last: usize,
    s_big: f64,
) -> f64 {
    let c = prefix.costs();
    let hb = c.holding_cost + c.penalty_cost;
    let mut acc = 0.0;
    for t in first..=last {
        let d = prefix.cumulative(first, t);
        let z = (s_big - d.mean) / d.std_dev;
        acc += c.holding_cost * (s_big - d.mean) + hb * d.std_dev * pl.upper_bound(z);
    }
    acc
}

/// Best order-up-to level and cost for one cycle, under either costing.
/// The piecewise objective is convex piecewise-linear in the level, so its
/// minimum sits on a hinge: level = mu_t + sigma_t * m_i for some period t
/// in the cycle and hinge i.
fn cycle_optimum(
    prefix: &DemandPrefix,
    costing: &CostingState,
    first: usize,
    last: usize,
) -> (f64, f64) {
    match costing {
        CostingState::Exact => {
            let m = minimize(&CycleObjective::new(prefix, first, first, last));
            (m.arg, m.value)
        }
        CostingState::Piecewise(pl) => {
            let mut best = (f64::NAN, f64::INFINITY);
            for t in first..=last {
                let d = prefix.cumulative(first, t);
                for &m in &pl.hinges {
                    let level = d.mean + d.std_dev * m;
                    let v = piecewise_cycle_value(prefix, pl, first, last, level);
                    if v < best.1 {
                        best = (level, v);
                    }
                }
            }
            best
        }
    }
}

enum CostingState {
    Exact,
    Piecewise(PiecewiseLoss),
}

/// Static-dynamic planner with precomputed cycle optima for every
/// (start, end) pair, reusable across re-plans from any state.
pub struct StaticDynamicPlanner {
    prefix: DemandPrefix,
    setup: f64,
    horizon: usize,
    /// [i-1][j-i-1] -> (level, value) for the cycle covering i..j-1.
    arcs: Vec<Vec<(f64, f64)>>,
}

impl StaticDynamicPlanner {
    pub fn new(instance: &Instance, costing: CycleCosting) -> Result<Self> {
        let prefix = DemandPrefix::new(instance);
        let n = instance.horizon();
        let state = match costing {
            CycleCosting::Exact => CostingState::Exact,
            CycleCosting::PiecewiseLinear { segments } => {
                CostingState::Piecewise(PiecewiseLoss::new(segments)?)
            }
        };
        let arcs = (1..=n)
            .map(|i| {
                (i + 1..=n + 1)
                    .map(|j| cycle_optimum(&prefix, &state, i, j - 1))
                    .collect()
            })
            .collect();
        Ok(Self {
            prefix,
            setup: instance.costs.fixed_order_cost,
            horizon: n,
            arcs,
        })
    }

    fn arc(&self, i: usize, j: usize) -> (f64, f64) {
        self.arcs[i - 1][j - i - 1]
    }

    /// Planned cost of a given schedule with given levels from (start, x):
    /// unordered prefix at x, then one cycle per order.
    fn plan_cost(&self, start: usize, x: f64, schedule: &[usize], levels: &[f64]) -> f64 {
        let n = self.horizon;
        if schedule.is_empty() {
            return CycleObjective::new(&self.prefix, start, start, n).value(x);
        }
        let mut cost = self.setup * schedule.len() as f64;
        if schedule[0] > start {
            cost += CycleObjective::new(&self.prefix, start, start, schedule[0] - 1).value(x);
        }
        for (idx, (&t, &level)) in schedule.iter().zip(levels).enumerate() {
            let last = schedule.get(idx + 1).map_or(n, |&next| next - 1);
            cost += CycleObjective::new(&self.prefix, t, t, last).value(level);
        }
        cost
    }

    /// Best fixed schedule and levels for periods start..=N from inventory
    /// x. Schedule periods are absolute (1-based).
    pub fn solve(&self, start: usize, x: f64) -> Result<RSPolicy> {
        let n = self.horizon;
        if start < 1 || start > n {
            return Err(Error::InvalidInput(format!(
                "plan start {start} outside horizon 1..={n}"
            )));
        }
        // shortest path over nodes start..=n+1
        let idx = |v: usize| v - start;
        let mut dist = vec![f64::INFINITY; n + 2 - start];
        let mut from: Vec<Option<usize>> = vec![None; n + 2 - start];
        dist[0] = 0.0;
        for v in start + 1..=n + 1 {
            // leading unordered stretch at inventory x
            let mut best = CycleObjective::new(&self.prefix, start, start, v - 1).value(x);
            let mut arg = None;
            for u in start..v {
                let cand = dist[idx(u)] + self.setup + self.arc(u, v).1;
                if cand < best {
                    best = cand;
                    arg = Some(u);
                }
            }
            dist[idx(v)] = best;
            from[idx(v)] = arg;
        }
        let mut schedule = Vec::new();
        let mut node = n + 1;
        while let Some(u) = from[idx(node)] {
            schedule.push(u);
            node = u;
        }
        schedule.reverse();
        let mut levels: Vec<f64> = schedule
            .iter()
            .enumerate()
            .map(|(i, &t)| {
                let next = schedule.get(i + 1).copied().unwrap_or(n + 1);
                self.arc(t, next).0
            })
            .collect();
        // repair: a cycle expected to *end* above the next cycle's level
        // would make the next order degenerate in expectation; lift the
        // level so planned levels stay consistent with expected drift
        for i in 1..levels.len() {
            let drained = levels[i - 1] - self.prefix.mean_over(schedule[i - 1], schedule[i] - 1);
            if drained > levels[i] {
                levels[i] = drained;
            }
        }
        let cost = self.plan_cost(start, x, &schedule, &levels);
        RSPolicy::new(schedule, levels, cost)
    }
}

/// Solve the static-dynamic plan for a whole instance from its initial
/// inventory.
pub fn solve_static_dynamic(instance: &Instance, costing: CycleCosting) -> Result<RSPolicy> {
    StaticDynamicPlanner::new(instance, costing)?.solve(1, instance.initial_inventory)
}

/// Order quantity a fixed-schedule order-up-to plan places in period n
/// (1-based) at inventory x: raise to the period's level when scheduled and
/// below it, otherwise nothing. Off-schedule periods never order.
pub fn rs_action(policy: &RSPolicy, n: usize, x: f64) -> f64 {
    match policy.level_at(n) {
        Some(level) => (level - x).max(0.0),
        None => 0.0,
    }
}
