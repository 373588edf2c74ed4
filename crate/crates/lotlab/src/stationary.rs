//! Long-run optimal (s, S) policies for a stationary demand stream, via
//! renewal-reward analysis on an integer demand lattice, plus a per-mean
//! lookup table (optionally cached on disk) for heuristics that match
//! non-stationary periods to stationary solutions.
//!
//! Between two orders the inventory starts at S and walks down through
//! S - j; m(j) is the expected number of periods spent at level S - j per
//! replenishment cycle, from the discrete renewal recursion
//!
//!   m(0) = 1 / (1 - p0),   m(j) = ( sum_{k=1..j} p_k m(j-k) ) / (1 - p0)
//!
//! With Delta = S - s, the cycle has expected length M = sum_{j<Delta} m(j)
//! and long-run average cost [K + sum_{j<Delta} m(j) G(S-j)] / M, where G
//! is the single-period expected holding/backorder cost.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dist::{discretize_to_integers, period_cost, NormalDist, DEFAULT_K_SIGMA};
use crate::instance::CostParams;
use crate::{Error, Result};

/// A stationary (s, S) policy and its exact long-run performance on the
/// demand lattice. The policy orders up to `order_up_to` whenever inventory
/// at review is at or below `reorder`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationaryPolicy {
    pub reorder: i64,
    pub order_up_to: i64,
    pub avg_cost: f64,
    /// Expected periods between consecutive orders.
    pub cycle_length: f64,
}

/// Expected visits per cycle to each level S - j, extended lazily.
#[derive(Debug)]
struct RenewalDensity {
    probs: Vec<f64>,
    m: Vec<f64>,
}

impl RenewalDensity {
    fn new(probs: Vec<f64>) -> Result<Self> {
        let p0 = probs.first().copied().unwrap_or(0.0);
        if probs.len() <= 1 || 1.0 - p0 <= 1e-12 {
            return Err(Error::InvalidInput(
                "stationary analysis needs P(demand > 0) > 0".into(),
            ));
        }
        Ok(Self {
            probs,
            m: Vec::new(),
        })
    }

    fn get(&mut self, j: usize) -> f64 {
        let scale = 1.0 / (1.0 - self.probs[0]);
        while self.m.len() <= j {
            let i = self.m.len();
            if i == 0 {
                self.m.push(scale);
                continue;
            }
            let mut acc = 0.0;
            for k in 1..=i.min(self.probs.len() - 1) {
                acc += self.probs[k] * self.m[i - k];
            }
            self.m.push(scale * acc);
        }
        self.m[j]
    }
}

const SWEEP_CAP: usize = 1_000_000;

/// Minimize the renewal-reward average cost over (s, S) for an integer
/// demand lattice `probs` (probs[d] = P(D = d)) and per-level cost `g`.
/// Returns the optimum and its expected cycle length.
fn optimize_lattice(
    probs: Vec<f64>,
    mut g: impl FnMut(i64) -> f64,
    setup: f64,
) -> Result<(i64, i64, f64, f64)> {
    let mut density = RenewalDensity::new(probs)?;

    // Integer minimizer of the convex per-level cost: walk from zero to a
    // local (= global, by convexity) integer minimum.
    let nu = {
        let mut y = 0i64;
        let mut best = g(y);
        let dir = if g(y + 1) < best { 1 } else { -1 };
        for _ in 0..SWEEP_CAP {
            let cand = g(y + dir);
            if cand < best {
                best = cand;
                y += dir;
            } else {
                break;
            }
        }
        y
    };

    let mut best: Option<(i64, i64, f64, f64)> = None;
    let mut s_level = nu;
    for _ in 0..SWEEP_CAP {
        // Sweep Delta for this S: extending the cycle by one more level is
        // an improvement exactly while the new level's cost is below the
        // running average; above the fractile minimizer it always is.
        let mut num = setup + density.get(0) * g(s_level);
        let mut den = density.get(0);
        let mut delta = 1usize;
        loop {
            let level = s_level - delta as i64;
            let g_level = g(level);
            if level < nu && g_level >= num / den {
                break;
            }
            let m = density.get(delta);
            num += m * g_level;
            den += m;
            delta += 1;
            if delta >= SWEEP_CAP {
                return Err(Error::SearchBounds(format!(
                    "reorder sweep for order-up-to level {s_level} exceeded {SWEEP_CAP} states"
                )));
            }
        }
        let avg = num / den;
        if best.map_or(true, |(_, _, b, _)| avg < b) {
            best = Some((s_level - delta as i64, s_level, avg, den));
        }
        let best_avg = best.unwrap().2;
        s_level += 1;
        if s_level > nu && g(s_level) > best_avg {
            break;
        }
        if (s_level - nu) as usize >= SWEEP_CAP {
            return Err(Error::SearchBounds(format!(
                "order-up-to sweep exceeded {SWEEP_CAP} levels above the fractile minimizer {nu}"
            )));
        }
    }
    let (s, s_big, avg, cycle) = best.expect("at least one candidate evaluated");
    Ok((s, s_big, avg, cycle))
}

/// Long-run average cost of a *given* (s, S) on the lattice; used to check
/// the optimizer against exhaustive and hand-computed baselines.
#[cfg(test)]
fn policy_average_cost(
    probs: Vec<f64>,
    mut g: impl FnMut(i64) -> f64,
    setup: f64,
    s: i64,
    s_big: i64,
) -> Result<f64> {
    let mut density = RenewalDensity::new(probs)?;
    let delta = (s_big - s) as usize;
    let mut num = setup;
    let mut den = 0.0;
    for j in 0..delta {
        let m = density.get(j);
        num += m * g(s_big - j as i64);
        den += m;
    }
    Ok(num / den)
}

/// Optimal stationary (s, S) for normal demand with the given mean and
/// coefficient of variation, costing levels by the exact normal
/// single-period expected cost.
pub fn optimize_stationary(mean: f64, cv: f64, costs: CostParams) -> Result<StationaryPolicy> {
    if !(mean > 0.0 && mean.is_finite()) || !(cv >= 0.0 && cv.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "stationary demand needs mean > 0 and cv >= 0, got mean {mean} cv {cv}"
        )));
    }
    let dist = NormalDist::new(mean, cv * mean)?;
    let probs = discretize_to_integers(dist, DEFAULT_K_SIGMA)?;
    let mut cache: HashMap<i64, f64> = HashMap::new();
    let g = |y: i64| -> f64 {
        *cache
            .entry(y)
            .or_insert_with(|| period_cost(dist, y as f64, costs.holding_cost, costs.penalty_cost))
    };
    let (s, s_big, avg, cycle) = optimize_lattice(probs, g, costs.fixed_order_cost)?;
    Ok(StationaryPolicy {
        reorder: s,
        order_up_to: s_big,
        avg_cost: avg,
        cycle_length: cycle,
    })
}

/// Stationary optima for every integer demand mean 1..=mean_max at a fixed
/// coefficient of variation and cost structure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationaryTable {
    pub cv: f64,
    pub costs: CostParams,
    pub mean_max: u32,
    rows: Vec<StationaryPolicy>,
}

impl StationaryTable {
    /// Row for an integer demand mean (1-based).
    pub fn policy_for_mean(&self, mean: u32) -> Result<&StationaryPolicy> {
        if mean == 0 {
            return Err(Error::InvalidInput("table lookup needs mean >= 1".into()));
        }
        self.rows.get(mean as usize - 1).ok_or(Error::TableCoverage {
            needed: mean,
            built: self.mean_max,
        })
    }
}

fn cache_file_name(cv: f64, costs: CostParams, mean_max: u32) -> String {
    use std::hash::{Hash, Hasher};
    let mut h = std::collections::hash_map::DefaultHasher::new();
    cv.to_bits().hash(&mut h);
    costs.fixed_order_cost.to_bits().hash(&mut h);
    costs.holding_cost.to_bits().hash(&mut h);
    costs.penalty_cost.to_bits().hash(&mut h);
    mean_max.hash(&mut h);
    format!("stationary-v1-{:016x}.toml", h.finish())
}

/// Build (or load from `cache_dir`) the per-mean stationary table.
pub fn build_table(
    cv: f64,
    costs: CostParams,
    mean_max: u32,
    cache_dir: Option<&Path>,
) -> Result<StationaryTable> {
    if mean_max == 0 {
        return Err(Error::InvalidInput("table needs mean_max >= 1".into()));
    }
    let path = cache_dir.map(|d| d.join(cache_file_name(cv, costs, mean_max)));
    if let Some(p) = &path {
        if let Ok(text) = std::fs::read_to_string(p) {
            if let Ok(table) = toml::from_str::<StationaryTable>(&text) {
                if table.cv == cv && table.costs == costs && table.mean_max == mean_max {
                    return Ok(table);
                }
            }
        }
    }
    let rows = (1..=mean_max)
        .map(|mean| optimize_stationary(mean as f64, cv, costs))
        .collect::<Result<Vec<_>>>()?;
    let table = StationaryTable {
        cv,
        costs,
        mean_max,
        rows,
    };
    if let Some(p) = &path {
        if let Some(dir) = p.parent() {
            std::fs::create_dir_all(dir)?;
        }
        let text = toml::to_string(&table).map_err(|e| Error::Format(e.to_string()))?;
        std::fs::write(p, text)?;
    }
    Ok(table)
}
