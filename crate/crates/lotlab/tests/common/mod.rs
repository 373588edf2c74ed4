//! Independent oracles for the acceptance suite.
//!
//! Everything here recomputes what the library computes, by a deliberately
//! different route: normal-distribution math comes from `statrs` instead of
//! the crate's own erfc kernel, one-dimensional minima from golden-section
//! search instead of safeguarded Newton, plan optima from exhaustive
//! schedule enumeration instead of shortest-path/k-best search, and the
//! dynamic-programming optimum from a brute-force scan without the
//! suffix-minimum trick. Agreement within tight tolerances is then evidence
//! about the solvers, not about shared code paths.

use lotlab::dist::{discretize, DiscreteDemand, DEFAULT_K_SIGMA};
use lotlab::sdp::GridSpec;
use lotlab::Instance;
use statrs::distribution::{Continuous, ContinuousCDF, Normal};

/// Expected one-period holding + backorder cost at supply level `y` against
/// normal demand, built on statrs: h·E(y−D)⁺ + b·E(D−y)⁺.
pub fn o_period_cost(mean: f64, sd: f64, y: f64, h: f64, b: f64) -> f64 {
    let normal = Normal::new(0.0, 1.0).unwrap();
    let z = (y - mean) / sd;
    let shortfall = sd * (normal.pdf(z) - z * (1.0 - normal.cdf(z)));
    let overage = (y - mean) + shortfall;
    h * overage + b * shortfall
}

/// Golden-section search for the minimum of a unimodal function on [lo, hi].
pub fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut a = hi - INVPHI * (hi - lo);
    let mut b = lo + INVPHI * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    while hi - lo > 1e-9 * (1.0 + lo.abs().max(hi.abs())) {
        if fa <= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - INVPHI * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + INVPHI * (hi - lo);
            fb = f(b);
        }
    }
    let mid = 0.5 * (lo + hi);
    (mid, f(mid))
}

/// Cumulative demand distribution over periods `from..=to` (1-based).
fn cumulative(inst: &Instance, from: usize, to: usize) -> (f64, f64) {
    let mut mean = 0.0;
    let mut var = 0.0;
    for t in from..=to {
        let d = inst.demand.period(t);
        mean += d.mean;
        var += d.std_dev * d.std_dev;
    }
    (mean, var.sqrt())
}

/// Expected cost of periods `first..=last` at constant cumulative-supply
/// level `y`, demand accumulated from period `origin`.
fn span_cost(inst: &Instance, origin: usize, first: usize, last: usize, y: f64) -> f64 {
    let (h, b) = (inst.costs.holding_cost, inst.costs.penalty_cost);
    (first..=last)
        .map(|t| {
            let (m, s) = cumulative(inst, origin, t);
            o_period_cost(m, s, y, h, b)
        })
        .sum()
}

fn search_window(inst: &Instance, origin: usize, last: usize) -> (f64, f64) {
    let (m_first, s_first) = cumulative(inst, origin, origin);
    let (m_last, s_last) = cumulative(inst, origin, last);
    (m_first - 12.0 * s_first - 12.0, m_last + 12.0 * s_last + 12.0)
}

/// Every subset of {1..=n}, each sorted ascending.
pub fn all_schedules(n: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .map(|mask| (1..=n).filter(|t| mask >> (t - 1) & 1 == 1).collect())
        .collect()
}

/// Optimal expected cost over all fixed order-schedule/order-quantity plans:
/// exhaustive schedule enumeration; within a schedule, the chain-constrained
/// (cumulative supply nondecreasing, floored at the starting inventory)
/// continuous optimum found by enumerating consecutive-segment poolings and
/// taking the best feasible one.
pub fn static_plan_oracle(inst: &Instance) -> f64 {
    let n = inst.horizon();
    let x0 = inst.initial_inventory;
    let k = inst.costs.fixed_order_cost;
    let mut best = f64::INFINITY;
    for schedule in all_schedules(n) {
        let mut cost = k * schedule.len() as f64;
        if schedule.is_empty() {
            best = best.min(span_cost(inst, 1, 1, n, x0));
            continue;
        }
        if schedule[0] > 1 {
            cost += span_cost(inst, 1, 1, schedule[0] - 1, x0);
        }
        // segment i runs from schedule[i] to the period before the next order
        let m = schedule.len();
        let seg_last: Vec<usize> = (0..m)
            .map(|i| schedule.get(i + 1).map_or(n, |&next| next - 1))
            .collect();
        let mut inner = f64::INFINITY;
        for pools in 0u32..1 << (m - 1) {
            // bit i set = segments i and i+1 share one supply level
            let mut groups: Vec<(usize, usize)> = Vec::new(); // segment index range
            let mut start = 0;
            for i in 0..m - 1 {
                if pools >> i & 1 == 0 {
                    groups.push((start, i));
                    start = i + 1;
                }
            }
            groups.push((start, m - 1));
            let mut total = 0.0;
            let mut floor = x0;
            for &(a, bseg) in &groups {
                let f = |y: f64| {
                    (a..=bseg)
                        .map(|i| span_cost(inst, 1, schedule[i], seg_last[i], y))
                        .sum::<f64>()
                };
                let (wlo, whi) = search_window(inst, 1, seg_last[bseg]);
                let (arg, _) = golden_min(f, wlo.min(floor), whi.max(floor) + 1.0);
                let level = arg.max(floor);
                total += f(level);
                floor = level;
            }
            inner = inner.min(total);
        }
        best = best.min(cost + inner);
    }
    best
}

/// Optimal planned cost over all fixed-schedule order-up-to plans:
/// exhaustive schedule enumeration; each cycle's level minimized
/// independently (demand accumulated from the cycle's own start), then the
/// forward lift S_k ← max(S_k, S_{k−1} − μ(cycle k−1)) keeps expected order
/// sizes nonnegative before the plan is priced.
pub fn static_dynamic_oracle(inst: &Instance) -> f64 {
    let n = inst.horizon();
    let x0 = inst.initial_inventory;
    let k = inst.costs.fixed_order_cost;
    let mut best = f64::INFINITY;
    for schedule in all_schedules(n) {
        if schedule.is_empty() {
            best = best.min(span_cost(inst, 1, 1, n, x0));
            continue;
        }
        let mut cost = k * schedule.len() as f64;
        if schedule[0] > 1 {
            cost += span_cost(inst, 1, 1, schedule[0] - 1, x0);
        }
        let m = schedule.len();
        let mut prev_level = f64::NEG_INFINITY;
        for i in 0..m {
            let first = schedule[i];
            let last = schedule.get(i + 1).map_or(n, |&next| next - 1);
            let f = |y: f64| span_cost(inst, first, first, last, y);
            let (wlo, whi) = search_window(inst, first, last);
            let (arg, _) = golden_min(f, wlo, whi);
            let lift = if i == 0 {
                f64::NEG_INFINITY
            } else {
                let (drain, _) = cumulative(inst, schedule[i - 1], first - 1);
                prev_level - drain
            };
            let level = arg.max(lift);
            cost += f(level);
            prev_level = level;
        }
        best = best.min(cost);
    }
    best
}

/// Brute-force finite-horizon dynamic program on the same inventory grid and
/// discretized demand the library solver uses, minimizing over every
/// order-up-to point by direct scan. Returns the optimal expected cost from
/// the instance's initial inventory.
pub fn sdp_oracle(inst: &Instance, grid: GridSpec) -> f64 {
    let n_periods = inst.horizon();
    let m = grid.len();
    let (h, b) = (inst.costs.holding_cost, inst.costs.penalty_cost);
    let k = inst.costs.fixed_order_cost;
    let mut next = vec![0.0f64; m];
    let mut current = vec![0.0f64; m];
    for n in (1..=n_periods).rev() {
        let d = inst.demand.period(n);
        let pmf: DiscreteDemand = discretize(d, grid.step, DEFAULT_K_SIGMA).unwrap();
        let stage_plus_exp: Vec<f64> = (0..m)
            .map(|j| {
                let y = grid.point(j);
                let mut v = o_period_cost(d.mean, d.std_dev, y, h, b);
                for (&dv, &p) in pmf.support.iter().zip(&pmf.probs) {
                    let off = dv / grid.step;
                    let whole = off.floor() as usize;
                    let frac = off - off.floor();
                    v += p * if j > whole {
                        next[j - whole] * (1.0 - frac) + next[j - whole - 1] * frac
                    } else {
                        next[0]
                    };
                }
                v
            })
            .collect();
        for i in 0..m {
            let mut order_best = f64::INFINITY;
            for &sv in &stage_plus_exp[i..] {
                order_best = order_best.min(sv);
            }
            current[i] = stage_plus_exp[i].min(k + order_best);
        }
        std::mem::swap(&mut next, &mut current);
    }
    // interpolated read at the starting inventory, same convention as the
    // library's value function
    let pos = (inst.initial_inventory - grid.lower) / grid.step;
    if pos <= 0.0 {
        return next[0];
    }
    if pos >= (m - 1) as f64 {
        return next[m - 1];
    }
    let i = pos.floor() as usize;
    let frac = pos - pos.floor();
    next[i] * (1.0 - frac) + next[i + 1] * frac
}

/// Exact optimum of the deterministic lot-sizing problem with backordering
/// and a free terminal deficit, by an O(N³) block dynamic program: serving
/// periods i..=j with one order that arrives in period p backlogs demand
/// before p and holds the remainder after it; demand after the last served
/// period accrues backorder cost to the end of the horizon.
pub fn deterministic_optimum(means: &[f64], k: f64, h: f64, b: f64) -> f64 {
    let n = means.len();
    let mut cum = vec![0.0f64; n + 1];
    for (t, &d) in means.iter().enumerate() {
        cum[t + 1] = cum[t] + d;
    }
    let block = |i: usize, j: usize, p: usize| -> f64 {
        let mut c = k;
        for t in i..p {
            c += b * (cum[t] - cum[i - 1]);
        }
        for t in p..=j {
            c += h * (cum[j] - cum[t]);
        }
        c
    };
    let mut f = vec![f64::INFINITY; n + 1];
    f[0] = 0.0;
    for j in 1..=n {
        for i in 1..=j {
            if f[i - 1].is_finite() {
                for p in i..=j {
                    let c = f[i - 1] + block(i, j, p);
                    if c < f[j] {
                        f[j] = c;
                    }
                }
            }
        }
    }
    let mut best = f64::INFINITY;
    for served in 0..=n {
        let mut tail = 0.0;
        for t in served + 1..=n {
            tail += b * (cum[t] - cum[served]);
        }
        best = best.min(f[served] + tail);
    }
    best
}
