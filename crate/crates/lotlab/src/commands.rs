//! Implementations behind the command-line interface: test-bed generation,
//! per-method solving, simulation sweeps, and gap reporting.
//!
//! Every command is deterministic given its inputs and seed; sweeps fan out
//! across instances on the global thread pool and assemble their output in
//! manifest order before writing, so repeated runs produce identical bytes.

use std::path::Path;

use rayon::prelude::*;

use crate::instance::generate_test_bed;
use crate::io::{self, ResultRow};
use crate::method::{parse_methods, Method, SolveContext};
use crate::policy::Policy;
use crate::report::{aggregate, boxplot, render, render_boxplot, Pivot};
use crate::sim::{self, Deployment};
use crate::{Error, Result};

/// Write the full benchmark test bed as a manifest; returns the instance
/// count. Idempotent: reruns produce identical bytes.
pub fn cmd_generate(out: &Path) -> Result<usize> {
    let bed = generate_test_bed();
    io::write_manifest(out, &bed)?;
    Ok(bed.len())
}

/// Solve one method across every instance in the manifest; returns how many
/// policies were written.
pub fn cmd_solve(
    manifest: &Path,
    method: Method,
    out: &Path,
    ctx: &SolveContext,
) -> Result<usize> {
    let instances = io::read_manifest(manifest)?;
    if instances.is_empty() {
        return Err(Error::InvalidInput("manifest lists no instances".into()));
    }
    let entries: Vec<(String, Policy)> = instances
        .par_iter()
        .map(|inst| Ok((inst.id.clone(), ctx.solve(inst, method)?)))
        .collect::<Result<_>>()?;
    io::write_policies(out, method, &entries)?;
    Ok(entries.len())
}

/// Expand `--method`/`--deployment` arguments into concrete pairs.
///
/// The literal `all` expands with the no-op combinations skipped (re-planning
/// only applies to the two state-dependent plan families); explicitly
/// requesting one of those combinations is a usage error instead.
pub fn expand_selection(
    methods_arg: &str,
    deployments_arg: &str,
) -> Result<Vec<(Method, Deployment)>> {
    let methods = parse_methods(methods_arg)?;
    let all_deployments = deployments_arg == "all";
    let deployments: Vec<Deployment> = if all_deployments {
        vec![Deployment::Conventional, Deployment::Replanning]
    } else {
        deployments_arg
            .split(',')
            .map(|s| s.trim().parse())
            .collect::<Result<_>>()?
    };
    let mut pairs: Vec<(Method, Deployment)> = Vec::new();
    for &method in &methods {
        for &deployment in &deployments {
            if deployment == Deployment::Replanning && !method.supports_replanning() {
                if all_deployments {
                    continue;
                }
                return Err(Error::InvalidInput(format!(
                    "re-planning '{method}' is a no-op: its reorder levels already react \
                     to inventory, so per-period re-solves cannot change any decision; \
                     deploy it conventionally instead"
                )));
            }
            if !pairs.contains(&(method, deployment)) {
                pairs.push((method, deployment));
            }
        }
    }
    if pairs.is_empty() {
        return Err(Error::InvalidInput("no (method, deployment) pairs selected".into()));
    }
    Ok(pairs)
}

/// Outcome counts of a simulation sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimulateSummary {
    /// Result rows written.
    pub rows: usize,
    /// Rows that hit the replication ceiling before reaching the target
    /// precision (a diagnostic condition for the caller to surface).
    pub precision_shortfalls: usize,
}

/// Simulate each selected (method, deployment) pair on every instance under
/// common random numbers, writing one result row per combination. Gaps are
/// measured against the simulated optimal-policy cost under the same seed.
pub fn cmd_simulate(
    manifest: &Path,
    selection: &[(Method, Deployment)],
    seed: u64,
    ceiling: usize,
    out: &Path,
    ctx: &SolveContext,
) -> Result<SimulateSummary> {
    let instances = io::read_manifest(manifest)?;
    if instances.is_empty() {
        return Err(Error::InvalidInput("manifest lists no instances".into()));
    }
    if selection.is_empty() {
        return Err(Error::InvalidInput("no (method, deployment) pairs selected".into()));
    }
    let per_instance: Vec<Vec<ResultRow>> = instances
        .par_iter()
        .map(|inst| {
            let baseline_policy = ctx.solve(inst, Method::Sdp)?;
            let baseline = sim::simulate_with_ceiling(inst, &baseline_policy, seed, ceiling)?;
            let mut rows = Vec::with_capacity(selection.len());
            for &(method, deployment) in selection {
                let report =
                    if method == Method::Sdp && deployment == Deployment::Conventional {
                        baseline
                    } else {
                        ctx.simulate_with_ceiling(inst, method, deployment, seed, ceiling)?
                    };
                rows.push(ResultRow {
                    instance: inst.id.clone(),
                    pattern: inst.pattern.clone(),
                    cv: inst.demand.cv,
                    setup_cost: inst.costs.fixed_order_cost,
                    penalty_cost: inst.costs.penalty_cost,
                    method,
                    deployment,
                    avg_cost: report.avg_cost,
                    ci_half_width: report.ci_half_width,
                    gap_pct: sim::optimality_gap(report.avg_cost, baseline.avg_cost),
                    replications: report.replications,
                    precision_reached: report.precision_reached,
                });
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    let rows: Vec<ResultRow> = per_instance.into_iter().flatten().collect();
    io::write_results(out, &rows)?;
    let precision_shortfalls = rows.iter().filter(|r| !r.precision_reached).count();
    Ok(SimulateSummary {
        rows: rows.len(),
        precision_shortfalls,
    })
}

/// Aggregate a results file into a gap table (optionally with per-column
/// boxplot statistics), write it to `out` when given, and return the text.
pub fn cmd_report(
    results: &Path,
    pivot: Pivot,
    out: Option<&Path>,
    with_boxplot: bool,
) -> Result<String> {
    let rows = io::read_results(results)?;
    let table = aggregate(&rows, pivot)?;
    let mut text = render(&table);
    if with_boxplot {
        text.push('\n');
        text.push_str(&render_boxplot(&boxplot(&rows)));
    }
    if let Some(path) = out {
        io::write_text(path, &text)?;
    }
    Ok(text)
}
