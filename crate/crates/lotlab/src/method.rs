//! Named solution methods and a caching dispatch layer.
//!
//! [`Method`] enumerates the six solvers by their command-line names;
//! [`SolveContext`] turns (instance, method) into a [`Policy`], sharing the
//! expensive intermediates across calls: dynamic-programming solutions are
//! cached per instance fingerprint, and the stationary lookup tables feeding
//! the rate-matching heuristic are cached per cost structure (optionally on
//! disk). The context also carries the numeric knobs — grid resolution,
//! piecewise segment count, and schedule-search width — so every caller
//! resolves them the same way.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::heuristics::{askin_policy, bollapragada_policy};
use crate::instance::Instance;
use crate::policy::{Policy, SsPolicy};
use crate::sdp::{solve_sdp_with_step, ValueFunction};
use crate::sim::{self, Deployment, Replanner, SimReport};
use crate::static_dynamic::{solve_static_dynamic, CycleCosting, DEFAULT_SEGMENTS};
use crate::static_rq::{StaticPlanner, DEFAULT_TOP_K};
use crate::stationary::{build_table, StationaryTable};
use crate::{Error, Result};

/// The six solution methods, named as on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Exact stochastic dynamic program (the optimality benchmark).
    Sdp,
    /// Per-period cost-rate heuristic for dynamic (s, S) levels.
    Ask,
    /// Stationary rate-matching heuristic for dynamic (s, S) levels.
    Bol,
    /// Static order-quantity plan (times and quantities fixed upfront).
    SoxVar,
    /// Order-up-to plan with piecewise-linear cycle costing.
    Tar,
    /// Order-up-to plan with exact cycle costing.
    Ros,
}

impl Method {
    /// Every method, in solve order (the benchmark first).
    pub const ALL: [Method; 6] = [
        Method::Sdp,
        Method::Ask,
        Method::Bol,
        Method::SoxVar,
        Method::Tar,
        Method::Ros,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Sdp => "sdp",
            Method::Ask => "ask",
            Method::Bol => "bol",
            Method::SoxVar => "soxvar",
            Method::Tar => "tar",
            Method::Ros => "ros",
        }
    }

    /// Whether re-planning can change this method's decisions. Reorder-level
    /// policies already react to realized inventory, so re-solving them each
    /// period reproduces the conventional trajectory; only the two plan
    /// families with state-dependent parameters benefit.
    pub fn supports_replanning(&self) -> bool {
        matches!(self, Method::SoxVar | Method::Tar | Method::Ros)
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sdp" => Ok(Method::Sdp),
            "ask" => Ok(Method::Ask),
            "bol" => Ok(Method::Bol),
            "soxvar" => Ok(Method::SoxVar),
            "tar" => Ok(Method::Tar),
            "ros" => Ok(Method::Ros),
            other => Err(Error::InvalidInput(format!(
                "unknown method '{other}' (expected one of sdp, ask, bol, soxvar, tar, ros)"
            ))),
        }
    }
}

/// Stationary tables are built in mean_max blocks of this size so different
/// demand patterns with the same cost structure share one table (and one
/// disk-cache file).
const TABLE_MEAN_BLOCK: u32 = 50;

type SdpSolution = Arc<(SsPolicy, ValueFunction)>;

/// Solver dispatch with shared caches and numeric knobs.
pub struct SolveContext {
    grid_step: f64,
    segments: usize,
    top_k: usize,
    stationary_cache_dir: Option<PathBuf>,
    sdp: Mutex<HashMap<(u64, u64), SdpSolution>>,
    stationary: Mutex<HashMap<[u64; 4], Arc<StationaryTable>>>,
}

impl Default for SolveContext {
    fn default() -> Self {
        Self::new()
    }
}

impl SolveContext {
    pub fn new() -> Self {
        Self {
            grid_step: 1.0,
            segments: DEFAULT_SEGMENTS,
            top_k: DEFAULT_TOP_K,
            stationary_cache_dir: None,
            sdp: Mutex::new(HashMap::new()),
            stationary: Mutex::new(HashMap::new()),
        }
    }

    /// Inventory-grid resolution for the dynamic program.
    pub fn with_grid_step(mut self, step: f64) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidInput(format!(
                "grid step must be positive and finite, got {step}"
            )));
        }
        self.grid_step = step;
        Ok(self)
    }

    /// Segment count for the piecewise-linear cycle costing.
    pub fn with_segments(mut self, segments: usize) -> Result<Self> {
        if segments < 2 {
            return Err(Error::InvalidInput(format!(
                "piecewise costing needs at least 2 segments, got {segments}"
            )));
        }
        self.segments = segments;
        Ok(self)
    }

    /// Candidate paths kept per node in the static schedule search.
    pub fn with_top_k(mut self, top_k: usize) -> Result<Self> {
        if top_k == 0 {
            return Err(Error::InvalidInput("top_k must be at least 1".into()));
        }
        self.top_k = top_k;
        Ok(self)
    }

    /// Directory for on-disk stationary-table caching.
    pub fn with_stationary_cache_dir(mut self, dir: PathBuf) -> Self {
        self.stationary_cache_dir = Some(dir);
        self
    }

    pub fn grid_step(&self) -> f64 {
        self.grid_step
    }

    pub fn segments(&self) -> usize {
        self.segments
    }

    pub fn top_k(&self) -> usize {
        self.top_k
    }

    /// Solve (and cache) the exact dynamic program for this instance.
    pub fn sdp_solution(&self, instance: &Instance) -> Result<SdpSolution> {
        let key = (instance.fingerprint(), self.grid_step.to_bits());
        if let Some(hit) = self.sdp.lock().unwrap().get(&key) {
            return Ok(Arc::clone(hit));
        }
        let solved = Arc::new(solve_sdp_with_step(instance, self.grid_step)?);
        let mut cache = self.sdp.lock().unwrap();
        let entry = cache.entry(key).or_insert(solved);
        Ok(Arc::clone(entry))
    }

    /// Stationary lookup table covering integer means up to at least
    /// `needed`, shared per (cv, cost structure).
    pub fn stationary_table(&self, instance: &Instance) -> Result<Arc<StationaryTable>> {
        let needed = instance
            .demand
            .means
            .iter()
            .fold(0.0f64, |a, &b| a.max(b))
            .ceil()
            .max(1.0) as u32;
        let mean_max = needed.div_ceil(TABLE_MEAN_BLOCK) * TABLE_MEAN_BLOCK;
        let c = instance.costs;
        let key = [
            instance.demand.cv.to_bits(),
            c.fixed_order_cost.to_bits(),
            c.holding_cost.to_bits(),
            c.penalty_cost.to_bits(),
        ];
        if let Some(hit) = self.stationary.lock().unwrap().get(&key) {
            if hit.mean_max >= needed {
                return Ok(Arc::clone(hit));
            }
        }
        let table = Arc::new(build_table(
            instance.demand.cv,
            c,
            mean_max,
            self.stationary_cache_dir.as_deref(),
        )?);
        let mut cache = self.stationary.lock().unwrap();
        let entry = cache
            .entry(key)
            .and_modify(|t| {
                if t.mean_max < mean_max {
                    *t = Arc::clone(&table);
                }
            })
            .or_insert(table);
        Ok(Arc::clone(entry))
    }

    /// Compute the named method's policy for an instance.
    pub fn solve(&self, instance: &Instance, method: Method) -> Result<Policy> {
        match method {
            Method::Sdp => Ok(Policy::Ss(self.sdp_solution(instance)?.0.clone())),
            Method::Ask => Ok(Policy::Ss(askin_policy(instance)?)),
            Method::Bol => {
                let table = self.stationary_table(instance)?;
                let exact = self.sdp_solution(instance)?;
                Ok(Policy::Ss(bollapragada_policy(instance, &table, &exact.0)?))
            }
            Method::SoxVar => {
                let mut planner = StaticPlanner::new(instance, self.top_k);
                Ok(Policy::Rq(planner.solve(1, instance.initial_inventory)?))
            }
            Method::Tar => Ok(Policy::Rs(solve_static_dynamic(
                instance,
                CycleCosting::PiecewiseLinear {
                    segments: self.segments,
                },
            )?)),
            Method::Ros => Ok(Policy::Rs(solve_static_dynamic(
                instance,
                CycleCosting::Exact,
            )?)),
        }
    }

    /// Build the re-planning executor for a method, or explain why the
    /// method cannot be re-planned.
    pub fn replanner(&self, instance: &Instance, method: Method) -> Result<Replanner> {
        match method {
            Method::SoxVar => Ok(Replanner::static_order_with_top_k(instance, self.top_k)),
            Method::Tar => Replanner::order_up_to(
                instance,
                CycleCosting::PiecewiseLinear {
                    segments: self.segments,
                },
            ),
            Method::Ros => Replanner::order_up_to(instance, CycleCosting::Exact),
            Method::Sdp | Method::Ask | Method::Bol => Err(Error::InvalidInput(format!(
                "re-planning '{method}' is a no-op: its reorder levels already react to \
                 inventory, so per-period re-solves cannot change any decision; \
                 deploy it conventionally instead"
            ))),
        }
    }

    /// Solve and simulate in one step, honoring the deployment mode.
    pub fn simulate(
        &self,
        instance: &Instance,
        method: Method,
        deployment: Deployment,
        seed: u64,
    ) -> Result<SimReport> {
        self.simulate_with_ceiling(instance, method, deployment, seed, sim::REPLICATION_CEILING)
    }

    /// [`SolveContext::simulate`] with an explicit replication ceiling.
    pub fn simulate_with_ceiling(
        &self,
        instance: &Instance,
        method: Method,
        deployment: Deployment,
        seed: u64,
        ceiling: usize,
    ) -> Result<SimReport> {
        match deployment {
            Deployment::Conventional => {
                let policy = self.solve(instance, method)?;
                sim::simulate_with_ceiling(instance, &policy, seed, ceiling)
            }
            Deployment::Replanning => {
                let replanner = self.replanner(instance, method)?;
                sim::simulate_replanning_with_ceiling(instance, &replanner, seed, ceiling)
            }
        }
    }
}

/// Parse a comma-separated method list; `all` expands to every method.
pub fn parse_methods(arg: &str) -> Result<Vec<Method>> {
    if arg == "all" {
        return Ok(Method::ALL.to_vec());
    }
    arg.split(',').map(|s| s.trim().parse()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{CostParams, DemandSpec};

    fn instance(means: Vec<f64>, cv: f64, k: f64, h: f64, b: f64) -> Instance {
        Instance::new(
            DemandSpec::new(means, cv).unwrap(),
            CostParams::new(k, h, b).unwrap(),
            0.0,
        )
        .unwrap()
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
        }
        assert!("zzz".parse::<Method>().is_err());
    }

    #[test]
    fn all_expands_and_lists_reject_unknown_names() {
        assert_eq!(parse_methods("all").unwrap(), Method::ALL.to_vec());
        assert_eq!(
            parse_methods("tar, ros").unwrap(),
            vec![Method::Tar, Method::Ros]
        );
        assert!(parse_methods("tar,nope").is_err());
    }

    #[test]
    fn solve_dispatches_to_the_right_policy_family() {
        let inst = instance(vec![90.0, 110.0, 70.0], 0.2, 200.0, 1.0, 5.0);
        let ctx = SolveContext::new();
        assert!(matches!(ctx.solve(&inst, Method::Sdp).unwrap(), Policy::Ss(_)));
        assert!(matches!(ctx.solve(&inst, Method::Ask).unwrap(), Policy::Ss(_)));
        assert!(matches!(
            ctx.solve(&inst, Method::SoxVar).unwrap(),
            Policy::Rq(_)
        ));
        assert!(matches!(ctx.solve(&inst, Method::Tar).unwrap(), Policy::Rs(_)));
        assert!(matches!(ctx.solve(&inst, Method::Ros).unwrap(), Policy::Rs(_)));
    }

    #[test]
    fn sdp_solutions_are_cached_per_instance() {
        let inst = instance(vec![90.0, 110.0, 70.0], 0.2, 200.0, 1.0, 5.0);
        let ctx = SolveContext::new();
        let a = ctx.sdp_solution(&inst).unwrap();
        let b = ctx.sdp_solution(&inst).unwrap();
        assert!(Arc::ptr_eq(&a, &b), "second solve must hit the cache");
    }

    #[test]
    fn replanning_rejected_for_reorder_level_methods() {
        let inst = instance(vec![90.0, 110.0, 70.0], 0.2, 200.0, 1.0, 5.0);
        let ctx = SolveContext::new();
        for m in [Method::Sdp, Method::Ask, Method::Bol] {
            assert!(matches!(
                ctx.replanner(&inst, m),
                Err(Error::InvalidInput(_))
            ));
        }
        assert!(ctx.replanner(&inst, Method::SoxVar).is_ok());
        assert!(ctx.replanner(&inst, Method::Ros).is_ok());
    }

    #[test]
    fn knob_validation() {
        assert!(SolveContext::new().with_grid_step(0.0).is_err());
        assert!(SolveContext::new().with_segments(1).is_err());
        assert!(SolveContext::new().with_top_k(0).is_err());
        let ctx = SolveContext::new().with_grid_step(0.5).unwrap();
        assert_eq!(ctx.grid_step(), 0.5);
    }
}
