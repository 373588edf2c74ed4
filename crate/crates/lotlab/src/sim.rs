//! Monte-Carlo policy evaluation under common random numbers.
//!
//! Demand realizations are *counter-based*: the draw for a given
//! (seed, replication, period) triple is a pure function of those three
//! coordinates, never of how many draws happened before it. Every policy
//! therefore consumes the identical demand tensor (common random numbers),
//! and replications can run in any order — or in parallel — without
//! changing a single bit of the output.
//!
//! Replications accumulate in batches of [`BATCH_SIZE`] until the 95%
//! confidence half-width drops to [`RELATIVE_PRECISION`] of the running
//! mean; a hard ceiling guards against non-termination and is reported via
//! [`SimReport::precision_reached`].
//!
//! Two deployment modes exist:
//!
//! * **conventional** — the precomputed policy acts on the realized
//!   inventory each period;
//! * **replanning** — at the start of each period the planner re-solves the
//!   remaining horizon from the realized inventory (demand forecasts
//!   unchanged) and only the imminent decision is implemented. This is
//!   meaningful only for plans whose parameters depend on the starting
//!   state — the static order-quantity and order-up-to planners. Reorder
//!   -level policies already condition on inventory, so re-planning them
//!   reproduces the conventional trajectory.
//!
//! Re-planning re-solves are memoized on (period, inventory rounded to the
//! nearest unit); the sub-problem is solved *at* the rounded inventory so
//! the cached decision is a pure function of the key, keeping parallel runs
//! deterministic.

use std::collections::HashMap;
use std::sync::Mutex;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::std_normal_inv_cdf;
use crate::instance::Instance;
use crate::policy::Policy;
use crate::static_dynamic::{CycleCosting, StaticDynamicPlanner};
use crate::static_rq::{StaticPlanner, DEFAULT_TOP_K};
use crate::{Error, Result};

/// Replications between stopping-rule checks.
pub const BATCH_SIZE: usize = 1_000;
/// Hard replication cap; hitting it flags `precision_reached = false`.
pub const REPLICATION_CEILING: usize = 1_000_000;
/// Target: 95% confidence half-width at or below this fraction of the mean.
pub const RELATIVE_PRECISION: f64 = 1e-3;
/// Two-sided 95% normal quantile.
const Z_95: f64 = 1.96;

/// How a policy is carried out against realized demand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Deployment {
    /// Execute the precomputed policy as planned.
    Conventional,
    /// Re-solve the remaining horizon each period; implement only the
    /// imminent decision.
    Replanning,
}

impl Deployment {
    pub fn as_str(&self) -> &'static str {
        match self {
            Deployment::Conventional => "conventional",
            Deployment::Replanning => "replanning",
        }
    }
}

impl std::fmt::Display for Deployment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Deployment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "conventional" => Ok(Deployment::Conventional),
            "replanning" => Ok(Deployment::Replanning),
            other => Err(Error::InvalidInput(format!(
                "unknown deployment '{other}' (expected 'conventional' or 'replanning')"
            ))),
        }
    }
}

/// Counter-based demand generator: `demand(instance, replication, period)`
/// depends only on (seed, replication, period).
#[derive(Debug, Clone, Copy)]
pub struct DemandStream {
    seed: u64,
}

impl DemandStream {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    /// One demand draw, addressed directly by its counter coordinates.
    pub fn demand(&self, instance: &Instance, replication: u64, period: usize) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(replication);
        // Each draw consumes exactly two 32-bit words.
        rng.set_word_pos(2 * (period as u128 - 1));
        let dist = instance.demand.period(period);
        sample(&mut rng, dist.mean, dist.std_dev)
    }

    /// All demands of one replication, bit-identical to per-period
    /// [`DemandStream::demand`] calls but with one cipher setup.
    pub fn realize_into(&self, instance: &Instance, replication: u64, out: &mut Vec<f64>) {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(replication);
        out.clear();
        let horizon = instance.horizon();
        out.reserve(horizon);
        for period in 1..=horizon {
            let dist = instance.demand.period(period);
            out.push(sample(&mut rng, dist.mean, dist.std_dev));
        }
    }

    /// Convenience wrapper allocating a fresh vector.
    pub fn realize(&self, instance: &Instance, replication: u64) -> Vec<f64> {
        let mut out = Vec::new();
        self.realize_into(instance, replication, &mut out);
        out
    }
}

/// Normal draw truncated at zero, from one 64-bit word.
fn sample(rng: &mut ChaCha8Rng, mean: f64, std_dev: f64) -> f64 {
    let bits = rng.next_u64();
    // Top 53 bits, centered in the unit interval: u is never 0 or 1.
    let u = ((bits >> 11) as f64 + 0.5) * 2f64.powi(-53);
    (mean + std_dev * std_normal_inv_cdf(u)).max(0.0)
}

/// Outcome of a simulation run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    /// Sample mean of total cost across replications.
    pub avg_cost: f64,
    /// 95% confidence half-width of the mean.
    pub ci_half_width: f64,
    /// Replications actually run.
    pub replications: usize,
    /// False when the replication ceiling stopped the run before the
    /// relative-precision target was met.
    pub precision_reached: bool,
}

/// Percentage excess of a simulated cost over the optimal benchmark cost.
pub fn optimality_gap(cost: f64, optimum: f64) -> f64 {
    100.0 * (cost - optimum) / optimum
}

/// Simulate a precomputed policy (conventional deployment) to the default
/// replication ceiling.
pub fn simulate(instance: &Instance, policy: &Policy, seed: u64) -> Result<SimReport> {
    simulate_with_ceiling(instance, policy, seed, REPLICATION_CEILING)
}

/// [`simulate`] with an explicit replication ceiling.
pub fn simulate_with_ceiling(
    instance: &Instance,
    policy: &Policy,
    seed: u64,
    ceiling: usize,
) -> Result<SimReport> {
    validate_policy(instance, policy)?;
    run_batches(instance, seed, ceiling, |demands| {
        trajectory(instance, demands, |n, x| Ok(policy.order(n, x)))
    })
}

/// Simulate a re-planned deployment to the default replication ceiling.
pub fn simulate_replanning(
    instance: &Instance,
    replanner: &Replanner,
    seed: u64,
) -> Result<SimReport> {
    simulate_replanning_with_ceiling(instance, replanner, seed, REPLICATION_CEILING)
}

/// [`simulate_replanning`] with an explicit replication ceiling.
pub fn simulate_replanning_with_ceiling(
    instance: &Instance,
    replanner: &Replanner,
    seed: u64,
    ceiling: usize,
) -> Result<SimReport> {
    run_batches(instance, seed, ceiling, |demands| {
        trajectory(instance, demands, |n, x| replanner.imminent_order(n, x))
    })
}

/// Step one replication, returning the executed orders alongside the cost.
/// Useful for hand-traced tests and per-trajectory inspection.
pub fn execute_policy(
    instance: &Instance,
    policy: &Policy,
    demands: &[f64],
) -> Result<(Vec<f64>, f64)> {
    validate_policy(instance, policy)?;
    if demands.len() != instance.horizon() {
        return Err(Error::InvalidInput(format!(
            "expected {} demand realizations, got {}",
            instance.horizon(),
            demands.len()
        )));
    }
    let mut orders = Vec::with_capacity(demands.len());
    let cost = trajectory(instance, demands, |n, x| {
        let q = policy.order(n, x);
        orders.push(q);
        Ok(q)
    })?;
    Ok((orders, cost))
}

fn validate_policy(instance: &Instance, policy: &Policy) -> Result<()> {
    let horizon = instance.horizon();
    let ok = match policy {
        Policy::Ss(p) => p.reorder.len() == horizon,
        Policy::Rq(p) => p.schedule.last().map_or(true, |&t| t <= horizon),
        Policy::Rs(p) => p.schedule.last().map_or(true, |&t| t <= horizon),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "policy does not fit a {horizon}-period instance"
        )))
    }
}

/// Accumulate one replication's cost; mirrors
/// [`crate::instance::trajectory_cost_from`] arithmetic exactly.
fn trajectory(
    instance: &Instance,
    demands: &[f64],
    mut order_at: impl FnMut(usize, f64) -> Result<f64>,
) -> Result<f64> {
    let costs = instance.costs;
    let mut x = instance.initial_inventory;
    let mut total = 0.0;
    for (i, &d) in demands.iter().enumerate() {
        let q = order_at(i + 1, x)?;
        x += q - d;
        if q > 0.0 {
            total += costs.fixed_order_cost;
        }
        total += if x >= 0.0 {
            costs.holding_cost * x
        } else {
            -costs.penalty_cost * x
        };
    }
    Ok(total)
}

fn run_batches(
    instance: &Instance,
    seed: u64,
    ceiling: usize,
    replication_cost: impl Fn(&[f64]) -> Result<f64> + Sync,
) -> Result<SimReport> {
    if ceiling == 0 {
        return Err(Error::InvalidInput(
            "replication ceiling must be positive".into(),
        ));
    }
    let stream = DemandStream::new(seed);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut done = 0usize;
    let mut precision_reached = false;
    while done < ceiling {
        let end = (done + BATCH_SIZE).min(ceiling);
        let batch: Vec<f64> = (done..end)
            .into_par_iter()
            .map_init(Vec::new, |buf, rep| {
                stream.realize_into(instance, rep as u64, buf);
                replication_cost(buf)
            })
            .collect::<Result<_>>()?;
        // Summed sequentially in replication order so results are
        // bit-stable no matter how the batch was scheduled.
        for &c in &batch {
            sum += c;
            sum_sq += c * c;
        }
        done = end;
        let (mean, half) = mean_and_half_width(sum, sum_sq, done);
        if half <= RELATIVE_PRECISION * mean.abs() {
            precision_reached = true;
            break;
        }
    }
    let (avg_cost, ci_half_width) = mean_and_half_width(sum, sum_sq, done);
    Ok(SimReport {
        avg_cost,
        ci_half_width,
        replications: done,
        precision_reached,
    })
}

fn mean_and_half_width(sum: f64, sum_sq: f64, n: usize) -> (f64, f64) {
    let mean = sum / n as f64;
    if n < 2 {
        return (mean, f64::INFINITY);
    }
    let variance = ((sum_sq - sum * mean) / (n as f64 - 1.0)).max(0.0);
    (mean, Z_95 * (variance / n as f64).sqrt())
}

/// Re-planning executor: holds the planner for the full instance and
/// re-solves the remaining horizon on demand. Only the two plan families
/// whose parameters depend on the starting state can be re-planned.
pub enum Replanner {
    /// Static order-quantity plans, re-solved from the realized inventory.
    StaticOrder {
        planner: Mutex<StaticPlanner>,
        memo: Mutex<HashMap<(usize, i64), f64>>,
    },
    /// Order-up-to plans, re-solved from the realized inventory. The memo
    /// stores the imminent order-up-to level (None when the re-solved plan
    /// does not order immediately); the order quantity itself is computed
    /// from the *actual* inventory.
    OrderUpTo {
        planner: StaticDynamicPlanner,
        memo: Mutex<HashMap<(usize, i64), Option<f64>>>,
    },
}

impl Replanner {
    /// Re-plans static order-quantity schedules.
    pub fn static_order(instance: &Instance) -> Self {
        Self::static_order_with_top_k(instance, DEFAULT_TOP_K)
    }

    /// [`Replanner::static_order`] with an explicit search width.
    pub fn static_order_with_top_k(instance: &Instance, top_k: usize) -> Self {
        Replanner::StaticOrder {
            planner: Mutex::new(StaticPlanner::new(instance, top_k)),
            memo: Mutex::new(HashMap::new()),
        }
    }

    /// Re-plans order-up-to schedules under the given cycle costing.
    pub fn order_up_to(instance: &Instance, costing: CycleCosting) -> Result<Self> {
        Ok(Replanner::OrderUpTo {
            planner: StaticDynamicPlanner::new(instance, costing)?,
            memo: Mutex::new(HashMap::new()),
        })
    }

    /// Order quantity for `period` given inventory `x`, from a re-solve of
    /// periods `period..=N`. Solutions are memoized at unit-rounded
    /// inventory; the sub-problem is solved at the rounded value so cache
    /// contents never depend on which replication filled them first.
    pub fn imminent_order(&self, period: usize, x: f64) -> Result<f64> {
        let key = (period, x.round() as i64);
        match self {
            Replanner::StaticOrder { planner, memo } => {
                if let Some(&q) = memo.lock().unwrap().get(&key) {
                    return Ok(q);
                }
                let plan = planner.lock().unwrap().solve(period, key.1 as f64)?;
                let q = if plan.schedule.first() == Some(&period) {
                    plan.quantities[0]
                } else {
                    0.0
                };
                memo.lock().unwrap().insert(key, q);
                Ok(q)
            }
            Replanner::OrderUpTo { planner, memo } => {
                let cached = memo.lock().unwrap().get(&key).copied();
                let level = match cached {
                    Some(level) => level,
                    None => {
                        let plan = planner.solve(period, key.1 as f64)?;
                        let level = if plan.schedule.first() == Some(&period) {
                            Some(plan.levels[0])
                        } else {
                            None
                        };
                        memo.lock().unwrap().insert(key, level);
                        level
                    }
                };
                Ok(level.map_or(0.0, |s| (s - x).max(0.0)))
            }
        }
    }
}
