//! Shared machinery for replenishment-cycle costing: closed-form cumulative
//! demand, convex expected-cost objectives over a cycle, and the bracketed
//! Newton/bisection minimizer they all use.

use crate::dist::{period_cost, NormalDist};
use crate::instance::{CostParams, Instance};

/// Prefix sums of demand means and variances, so the distribution of
/// D_{a..t} (independent normals convolve in closed form) costs O(1).
#[derive(Debug, Clone)]
pub struct DemandPrefix {
    mean: Vec<f64>,
    var: Vec<f64>,
    costs: CostParams,
}

impl DemandPrefix {
    pub fn new(instance: &Instance) -> Self {
        let n = instance.horizon();
        let mut mean = Vec::with_capacity(n + 1);
        let mut var = Vec::with_capacity(n + 1);
        mean.push(0.0);
        var.push(0.0);
        for t in 1..=n {
            let d = instance.demand.period(t);
            mean.push(mean[t - 1] + d.mean);
            var.push(var[t - 1] + d.std_dev * d.std_dev);
        }
        Self {
            mean,
            var,
            costs: instance.costs,
        }
    }

    pub fn horizon(&self) -> usize {
        self.mean.len() - 1
    }

    pub fn costs(&self) -> CostParams {
        self.costs
    }

    /// Distribution of total demand over periods from..=to (1-based, inclusive).
    pub fn cumulative(&self, from: usize, to: usize) -> NormalDist {
        debug_assert!(from >= 1 && from <= to && to <= self.horizon());
        NormalDist {
            mean: self.mean[to] - self.mean[from - 1],
            std_dev: (self.var[to] - self.var[from - 1]).sqrt(),
        }
    }

    /// Mean demand over periods from..=to.
    pub fn mean_over(&self, from: usize, to: usize) -> f64 {
        self.mean[to] - self.mean[from - 1]
    }
}

/// Expected cost of holding a constant supply level y over the periods
/// first..=last, measured against cumulative demand from `origin`:
///
///   C(y) = sum_t period_cost(D_{origin..t}, y)
///
/// Convex in y with a smooth derivative whenever any period has positive
/// variance. `origin = first` prices a cycle from its own start (order-up-to
/// levels); `origin = 1` prices cumulative supply in a static plan.
#[derive(Debug, Clone, Copy)]
pub struct CycleObjective<'a> {
    prefix: &'a DemandPrefix,
    pub origin: usize,
    pub first: usize,
    pub last: usize,
}

impl<'a> CycleObjective<'a> {
    pub fn new(prefix: &'a DemandPrefix, origin: usize, first: usize, last: usize) -> Self {
        debug_assert!(origin >= 1 && origin <= first && first <= last && last <= prefix.horizon());
        Self {
            prefix,
            origin,
            first,
            last,
        }
    }

    pub fn periods(&self) -> usize {
        self.last - self.first + 1
    }

    fn dist(&self, t: usize) -> NormalDist {
        self.prefix.cumulative(self.origin, t)
    }
}

/// A convex one-dimensional objective with derivative information and a
/// bracket guaranteed to contain its minimizer. Implemented by cycle
/// objectives and by pooled sums of them.
pub trait ConvexCost {
    fn value(&self, y: f64) -> f64;
    /// First derivative; nondecreasing in y.
    fn derivative(&self, y: f64) -> f64;
    /// Second derivative (may be 0 where the objective is kinked).
    fn curvature(&self, y: f64) -> f64;
    /// (lo, hi) with derivative(lo) <= 0 <= derivative(hi).
    fn bracket(&self) -> (f64, f64);
    /// Scale of the derivative, used for the stopping residual.
    fn derivative_scale(&self) -> f64;
}

impl ConvexCost for CycleObjective<'_> {
    fn value(&self, y: f64) -> f64 {
        let c = self.prefix.costs;
        (self.first..=self.last)
            .map(|t| period_cost(self.dist(t), y, c.holding_cost, c.penalty_cost))
            .sum()
    }

    fn derivative(&self, y: f64) -> f64 {
        // d/dy period_cost = h - (h+b) * P(D > y)
        let c = self.prefix.costs;
        let hb = c.holding_cost + c.penalty_cost;
        (self.first..=self.last)
            .map(|t| hb * self.dist(t).cdf(y) - c.penalty_cost)
            .sum()
    }

    fn curvature(&self, y: f64) -> f64 {
        let c = self.prefix.costs;
        let hb = c.holding_cost + c.penalty_cost;
        (self.first..=self.last).map(|t| hb * self.dist(t).pdf(y)).sum()
    }

    fn bracket(&self) -> (f64, f64) {
        let lo_dist = self.dist(self.first);
        let hi_dist = self.dist(self.last);
        let spread = 10.0 * hi_dist.std_dev + 1.0;
        (lo_dist.mean - spread, hi_dist.mean + spread)
    }

    fn derivative_scale(&self) -> f64 {
        let c = self.prefix.costs;
        c.holding_cost + c.penalty_cost
    }
}

/// Sum of cycle objectives sharing one decision level (a pooled block in an
/// isotonic-constrained plan).
pub struct PooledCost<'a>(pub Vec<CycleObjective<'a>>);

impl ConvexCost for PooledCost<'_> {
    fn value(&self, y: f64) -> f64 {
        self.0.iter().map(|c| c.value(y)).sum()
    }
    fn derivative(&self, y: f64) -> f64 {
        self.0.iter().map(|c| c.derivative(y)).sum()
    }
    fn curvature(&self, y: f64) -> f64 {
        self.0.iter().map(|c| c.curvature(y)).sum()
    }
    fn bracket(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for c in &self.0 {
            let (l, h) = c.bracket();
            lo = lo.min(l);
            hi = hi.max(h);
        }
        (lo, hi)
    }
    fn derivative_scale(&self) -> f64 {
        self.0
            .iter()
            .map(|c| c.derivative_scale())
            .fold(0.0, f64::max)
    }
}

/// Result of a one-dimensional convex minimization.
#[derive(Debug, Clone, Copy)]
pub struct MinResult {
    pub arg: f64,
    pub value: f64,
    /// |derivative| at the returned point (may stay large only where the
    /// objective is kinked, i.e. fully deterministic demand).
    pub residual: f64,
}

/// Minimize a convex objective by safeguarded Newton on its derivative:
/// Newton steps accelerate, a maintained sign-change bracket guarantees
/// convergence even where the derivative jumps (zero-variance demand).
pub fn minimize<C: ConvexCost>(obj: &C) -> MinResult {
    let (mut lo, mut hi) = obj.bracket();
    let tol = 1e-9 * obj.derivative_scale();
    let mut y = 0.5 * (lo + hi);
    for _ in 0..200 {
        let d1 = obj.derivative(y);
        if d1.abs() <= tol {
            break;
        }
        if d1 > 0.0 {
            hi = y;
        } else {
            lo = y;
        }
        if hi - lo <= 1e-11 * (1.0 + y.abs()) {
            break;
        }
        let d2 = obj.curvature(y);
        let newton = y - d1 / d2;
        y = if d2 > 1e-300 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    MinResult {
        arg: y,
        value: obj.value(y),
        residual: obj.derivative(y).abs(),
    }
}

/// Find x < `upper` where f(x) = 0, given f decreasing in x with
/// f(upper) < 0. Expands the bracket downward geometrically, then bisects
/// until |f| <= `tol` (or the bracket collapses). Used for reorder levels,
/// where f(x) = cost(x) - cost(S) - K.
pub fn falling_root(f: impl Fn(f64) -> f64, upper: f64, initial_step: f64, tol: f64) -> f64 {
    debug_assert!(f(upper) <= 0.0);
    let mut step = initial_step.max(1e-6);
    let mut hi = upper;
    let mut lo = upper - step;
    for _ in 0..200 {
        if f(lo) >= 0.0 {
            break;
        }
        hi = lo;
        step *= 2.0;
        lo = upper - step;
    }
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..200 {
        let v = f(mid);
        if v.abs() <= tol {
            break;
        }
        if v > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * (1.0 + mid.abs()) {
            break;
        }
        mid = 0.5 * (lo + hi);
    }
    mid
}
