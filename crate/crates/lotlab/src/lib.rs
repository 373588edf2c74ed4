//! A laboratory for single-item, single-location stochastic lot sizing with
//! non-stationary demand, fixed ordering costs, and backorder penalties.
//!
//! The crate computes replenishment policies of three classic flavors and
//! measures how far each lands from the optimum:
//!
//! * **dynamic (s,S)** — the stochastic-dynamic-programming optimum
//!   ([`sdp`]) and two sequential heuristics ([`heuristics`]);
//! * **static (R,Q)** — order times and quantities all fixed up front
//!   ([`static_rq`]);
//! * **static-dynamic (R,S)** — order times fixed, quantities decided at
//!   order time via order-up-to levels ([`static_dynamic`]).
//!
//! Policies are compared by common-random-number simulation ([`sim`]),
//! either executed as planned ("conventional") or re-solved every period on
//! the remaining horizon ("replanning"). [`instance::generate_test_bed`]
//! builds the 216-instance benchmark bed the bundled report tooling
//! ([`report`]) aggregates into optimality-gap tables.
//!
//! Start with the runnable examples (`cargo run --example optimal_policy`)
//! or the `lotlab` binary (`lotlab generate|solve|simulate|report`).

pub mod commands;
pub mod cycles;
pub mod dist;
pub mod heuristics;
pub mod instance;
pub mod io;
pub mod method;
pub mod policy;
pub mod report;
pub mod sdp;
pub mod sim;
pub mod static_dynamic;
pub mod static_rq;
pub mod stationary;

pub use instance::{evaluate_trajectory, generate_test_bed, CostParams, DemandSpec, Instance};
pub use method::{Method, SolveContext};
pub use policy::{Policy, RQPolicy, RSPolicy, SsPolicy};
pub use sdp::{solve_sdp, solve_sdp_default, ValueFunction};
pub use sim::{
    optimality_gap, simulate, simulate_replanning, DemandStream, Deployment, Replanner, SimReport,
};
pub use static_dynamic::{solve_static_dynamic, CycleCosting};
pub use static_rq::solve_static;

/// Errors surfaced by solvers, simulators, and file formats.
///
/// `InvalidInput` marks caller mistakes; the remaining variants are
/// diagnostics raised when a numerical guard trips (and how to widen it).
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// The value-function grid clipped an optimizer; re-solve with wider bounds.
    #[error("inventory grid too small: {0}")]
    GridTooSmall(String),
    /// A bounded parameter search hit its cap without an interior optimum.
    #[error("search bounds exhausted: {0}")]
    SearchBounds(String),
    /// A stationary-policy table was built for fewer demand levels than needed.
    #[error("stationary table covers mean demand up to {built}, need {needed}")]
    TableCoverage { needed: u32, built: u32 },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
