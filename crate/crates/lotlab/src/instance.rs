//! Problem instances: cost parameters, non-stationary normal demand, the
//! 216-instance benchmark bed, and trajectory cost accounting.

use crate::dist::NormalDist;
use crate::{Error, Result};

/// Cost structure of one instance. Units are currency; holding and penalty
/// are per unit per period.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CostParams {
    pub fixed_order_cost: f64,
    pub holding_cost: f64,
    pub penalty_cost: f64,
}

impl CostParams {
    pub fn new(fixed_order_cost: f64, holding_cost: f64, penalty_cost: f64) -> Result<Self> {
        let ok = fixed_order_cost.is_finite()
            && fixed_order_cost >= 0.0
            && holding_cost.is_finite()
            && holding_cost > 0.0
            && penalty_cost.is_finite()
            && penalty_cost > 0.0;
        if !ok {
            return Err(Error::InvalidInput(format!(
                "costs need K >= 0, h > 0, b > 0; got K={fixed_order_cost}, h={holding_cost}, b={penalty_cost}"
            )));
        }
        Ok(Self {
            fixed_order_cost,
            holding_cost,
            penalty_cost,
        })
    }
}

/// Per-period demand means with a shared coefficient of variation:
/// period n is normal with std dev cv * mean_n, independent across periods.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DemandSpec {
    pub means: Vec<f64>,
    pub cv: f64,
}

impl DemandSpec {
    pub fn new(means: Vec<f64>, cv: f64) -> Result<Self> {
        if means.is_empty() {
            return Err(Error::InvalidInput("demand needs at least one period".into()));
        }
        if means.iter().any(|m| !m.is_finite() || *m < 0.0) {
            return Err(Error::InvalidInput(
                "demand means must be finite and nonnegative".into(),
            ));
        }
        if !(cv > 0.0 && cv < 1.0) {
            return Err(Error::InvalidInput(format!(
                "coefficient of variation must lie in (0,1), got {cv}"
            )));
        }
        Ok(Self { means, cv })
    }

    pub fn horizon(&self) -> usize {
        self.means.len()
    }

    pub fn std_dev(&self, n: usize) -> f64 {
        self.cv * self.means[n - 1]
    }

    /// Demand distribution of period n (1-based).
    pub fn period(&self, n: usize) -> NormalDist {
        NormalDist {
            mean: self.means[n - 1],
            std_dev: self.std_dev(n),
        }
    }
}

/// One lot-sizing problem: demand stream, costs, and starting inventory.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Instance {
    /// Stable identifier (pattern/cv/K/b for test-bed instances).
    pub id: String,
    /// Demand-shape label; "custom" outside the benchmark bed.
    pub pattern: String,
    pub demand: DemandSpec,
    pub costs: CostParams,
    pub initial_inventory: f64,
}

impl Instance {
    pub fn new(demand: DemandSpec, costs: CostParams, initial_inventory: f64) -> Result<Self> {
        if !initial_inventory.is_finite() {
            return Err(Error::InvalidInput("initial inventory must be finite".into()));
        }
        Ok(Self {
            id: "custom".into(),
            pattern: "custom".into(),
            demand,
            costs,
            initial_inventory,
        })
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    pub fn horizon(&self) -> usize {
        self.demand.horizon()
    }

    /// Sub-problem over periods start..=N with a fresh starting inventory;
    /// used by replanning deployments. `start` is 1-based.
    pub fn tail(&self, start: usize, initial_inventory: f64) -> Instance {
        assert!(
            start >= 1 && start <= self.horizon(),
            "tail start {start} outside 1..={}",
            self.horizon()
        );
        Instance {
            id: self.id.clone(),
            pattern: self.pattern.clone(),
            demand: DemandSpec {
                means: self.demand.means[start - 1..].to_vec(),
                cv: self.demand.cv,
            },
            costs: self.costs,
            initial_inventory,
        }
    }

    /// Cheap deterministic fingerprint for cache keys.
    pub fn fingerprint(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        for m in &self.demand.means {
            m.to_bits().hash(&mut h);
        }
        self.demand.cv.to_bits().hash(&mut h);
        self.costs.fixed_order_cost.to_bits().hash(&mut h);
        self.costs.holding_cost.to_bits().hash(&mut h);
        self.costs.penalty_cost.to_bits().hash(&mut h);
        self.initial_inventory.to_bits().hash(&mut h);
        h.finish()
    }
}

/// Version tag of the pinned demand-pattern vectors below.
pub const PATTERNS_VERSION: &str = "patterns-v1";

/// Pattern names in benchmark (and report row) order.
pub const PATTERN_NAMES: [&str; 6] = ["STA", "RAND", "SIN1", "SIN2", "LCY1", "LCY2"];

/// Coefficient-of-variation levels of the benchmark bed.
pub const CV_LEVELS: [f64; 3] = [0.10, 0.20, 0.30];
/// Fixed-ordering-cost levels of the benchmark bed.
pub const SETUP_LEVELS: [f64; 4] = [250.0, 500.0, 1000.0, 2000.0];
/// Backorder-penalty levels of the benchmark bed (holding cost is 1).
pub const PENALTY_LEVELS: [f64; 3] = [2.0, 5.0, 10.0];
/// Benchmark horizon length.
pub const BED_HORIZON: usize = 24;

const STA: [f64; 24] = [100.0; 24];

// Erratic fixed vector, normalized to mean 100.
const RAND: [f64; 24] = [
    120.0, 55.4, 156.9, 83.1, 36.9, 138.5, 184.5, 69.2, 101.5, 32.3, 147.7, 78.5, 110.8, 175.4,
    46.2, 129.2, 64.6, 166.2, 87.7, 27.7, 143.1, 60.0, 115.4, 69.2,
];

// Sinusoid, period 12, amplitude 30 around 100.
const SIN1: [f64; 24] = [
    115.0, 126.0, 130.0, 126.0, 115.0, 100.0, 85.0, 74.0, 70.0, 74.0, 85.0, 100.0, 115.0, 126.0,
    130.0, 126.0, 115.0, 100.0, 85.0, 74.0, 70.0, 74.0, 85.0, 100.0,
];

// Sinusoid, period 12, amplitude 70 around 100.
const SIN2: [f64; 24] = [
    135.0, 160.6, 170.0, 160.6, 135.0, 100.0, 65.0, 39.4, 30.0, 39.4, 65.0, 100.0, 135.0, 160.6,
    170.0, 160.6, 135.0, 100.0, 65.0, 39.4, 30.0, 39.4, 65.0, 100.0,
];

// Mild life cycle: single bell, growth to mid-horizon peak then decline.
const LCY1: [f64; 24] = [
    65.7, 73.5, 81.1, 88.3, 95.1, 101.3, 106.9, 111.7, 115.6, 118.6, 120.6, 121.6, 121.6, 120.6,
    118.6, 115.6, 111.7, 106.9, 101.3, 95.1, 88.3, 81.1, 73.5, 65.7,
];

// Pronounced life cycle: same bell, much larger swing.
const LCY2: [f64; 24] = [
    14.2, 33.7, 52.7, 70.8, 87.8, 103.3, 117.2, 129.2, 139.0, 146.5, 151.6, 153.9, 154.1, 151.6,
    146.5, 139.0, 129.2, 117.2, 103.3, 87.8, 70.8, 52.7, 33.7, 14.2,
];

/// The pinned 24-period mean vector of a named pattern.
pub fn pattern_means(name: &str) -> Option<&'static [f64; 24]> {
    match name {
        "STA" => Some(&STA),
        "RAND" => Some(&RAND),
        "SIN1" => Some(&SIN1),
        "SIN2" => Some(&SIN2),
        "LCY1" => Some(&LCY1),
        "LCY2" => Some(&LCY2),
        _ => None,
    }
}

/// The full 216-instance benchmark bed: 6 demand patterns x 3 coefficients
/// of variation x 4 setup costs x 3 penalty costs, horizon 24, holding cost
/// 1, initial inventory 0. Deterministic: repeated calls are identical, in
/// identical order (pattern, then cv, then K, then b).
pub fn generate_test_bed() -> Vec<Instance> {
    let mut bed = Vec::with_capacity(216);
    for pattern in PATTERN_NAMES {
        let means = pattern_means(pattern).unwrap().to_vec();
        for cv in CV_LEVELS {
            for setup in SETUP_LEVELS {
                for penalty in PENALTY_LEVELS {
                    bed.push(Instance {
                        id: format!("{pattern}-cv{cv:.2}-K{setup:.0}-b{penalty:.0}"),
                        pattern: pattern.to_string(),
                        demand: DemandSpec {
                            means: means.clone(),
                            cv,
                        },
                        costs: CostParams {
                            fixed_order_cost: setup,
                            holding_cost: 1.0,
                            penalty_cost: penalty,
                        },
                        initial_inventory: 0.0,
                    });
                }
            }
        }
    }
    bed
}

/// Total cost of one realized trajectory: sum over periods of
/// K*1{q_n > 0} + h*max(0, x_n) + b*max(0, -x_n), with
/// x_n = x_{n-1} + q_n - d_n starting from the instance's inventory.
pub fn evaluate_trajectory(instance: &Instance, orders: &[f64], demands: &[f64]) -> Result<f64> {
    let n = instance.horizon();
    if orders.len() != n || demands.len() != n {
        return Err(Error::InvalidInput(format!(
            "trajectory needs {n} orders and demands, got {} and {}",
            orders.len(),
            demands.len()
        )));
    }
    if orders.iter().any(|q| !q.is_finite() || *q < 0.0) {
        return Err(Error::InvalidInput("orders must be finite and >= 0".into()));
    }
    Ok(trajectory_cost_from(
        instance.initial_inventory,
        instance.costs,
        orders,
        demands,
    ))
}

/// Unchecked core of [`evaluate_trajectory`], reusable mid-horizon.
pub fn trajectory_cost_from(
    start_inventory: f64,
    costs: CostParams,
    orders: &[f64],
    demands: &[f64],
) -> f64 {
    let mut x = start_inventory;
    let mut total = 0.0;
    for (q, d) in orders.iter().zip(demands) {
        x += q - d;
        if *q > 0.0 {
            total += costs.fixed_order_cost;
        }
        total += if x >= 0.0 {
            costs.holding_cost * x
        } else {
            -costs.penalty_cost * x
        };
    }
    total
}
