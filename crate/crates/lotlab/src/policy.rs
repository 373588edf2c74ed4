//! Replenishment-policy representations for the three strategy classes,
//! plus the ordering rules that turn a policy and an inventory level into
//! an order quantity.

use crate::{Error, Result};

/// Per-period (s,S) policy: order up to `order_up_to[n]` whenever inventory
/// falls strictly below `reorder[n]`. Produced by the dynamic-programming
/// solver and the two dynamic heuristics.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SsPolicy {
    /// Reorder level s_n per period, 1-based period n at index n-1.
    pub reorder: Vec<f64>,
    /// Order-up-to level S_n per period.
    pub order_up_to: Vec<f64>,
}

impl SsPolicy {
    pub fn new(reorder: Vec<f64>, order_up_to: Vec<f64>) -> Result<Self> {
        if reorder.len() != order_up_to.len() || reorder.is_empty() {
            return Err(Error::InvalidInput(
                "reorder and order-up-to vectors must be nonempty and equal-length".into(),
            ));
        }
        for (n, (s, cap_s)) in reorder.iter().zip(&order_up_to).enumerate() {
            if !(s.is_finite() && cap_s.is_finite() && s <= cap_s) {
                return Err(Error::InvalidInput(format!(
                    "period {}: needs finite s <= S, got s={s}, S={cap_s}",
                    n + 1
                )));
            }
        }
        Ok(Self {
            reorder,
            order_up_to,
        })
    }

    pub fn horizon(&self) -> usize {
        self.reorder.len()
    }
}

/// Static-uncertainty (R,Q) plan: order times and quantities all fixed
/// before any demand is observed.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RQPolicy {
    /// Scheduled order periods, 1-based, strictly increasing.
    pub schedule: Vec<usize>,
    /// Order quantity for each scheduled period (parallel to `schedule`).
    pub quantities: Vec<f64>,
    /// Expected cost of the plan under the planning model.
    pub planned_cost: f64,
}

impl RQPolicy {
    pub fn new(schedule: Vec<usize>, quantities: Vec<f64>, planned_cost: f64) -> Result<Self> {
        if schedule.len() != quantities.len() {
            return Err(Error::InvalidInput(
                "schedule and quantities must be parallel".into(),
            ));
        }
        if schedule.windows(2).any(|w| w[0] >= w[1]) || schedule.iter().any(|&r| r == 0) {
            return Err(Error::InvalidInput(
                "schedule must be strictly increasing, 1-based".into(),
            ));
        }
        if quantities.iter().any(|q| !q.is_finite() || *q <= 0.0) {
            return Err(Error::InvalidInput(
                "scheduled quantities must be strictly positive".into(),
            ));
        }
        Ok(Self {
            schedule,
            quantities,
            planned_cost,
        })
    }

    /// Quantity ordered in period n (zero off-schedule).
    pub fn order_at(&self, n: usize) -> f64 {
        match self.schedule.binary_search(&n) {
            Ok(i) => self.quantities[i],
            Err(_) => 0.0,
        }
    }
}

/// Static-dynamic (R,S) plan: order times fixed, quantities decided at
/// order time by filling up to the planned level.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RSPolicy {
    /// Scheduled order periods, 1-based, strictly increasing.
    pub schedule: Vec<usize>,
    /// Order-up-to level for each scheduled period (parallel to `schedule`).
    pub levels: Vec<f64>,
    /// Expected cost of the plan under the planning model.
    pub planned_cost: f64,
}

impl RSPolicy {
    pub fn new(schedule: Vec<usize>, levels: Vec<f64>, planned_cost: f64) -> Result<Self> {
        if schedule.len() != levels.len() {
            return Err(Error::InvalidInput(
                "schedule and levels must be parallel".into(),
            ));
        }
        if schedule.windows(2).any(|w| w[0] >= w[1]) || schedule.iter().any(|&r| r == 0) {
            return Err(Error::InvalidInput(
                "schedule must be strictly increasing, 1-based".into(),
            ));
        }
        if levels.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidInput("levels must be finite".into()));
        }
        Ok(Self {
            schedule,
            levels,
            planned_cost,
        })
    }

    /// Planned level for period n, if n is scheduled.
    pub fn level_at(&self, n: usize) -> Option<f64> {
        self.schedule.binary_search(&n).ok().map(|i| self.levels[i])
    }
}

/// Any solved policy, tagged by strategy class.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum Policy {
    Ss(SsPolicy),
    Rq(RQPolicy),
    Rs(RSPolicy),
}

impl Policy {
    /// Order quantity this policy emits in period n at inventory x.
    pub fn order(&self, n: usize, x: f64) -> f64 {
        match self {
            Policy::Ss(p) => crate::sdp::sdp_action(p, n, x),
            Policy::Rq(p) => p.order_at(n),
            Policy::Rs(p) => crate::static_dynamic::rs_action(p, n, x),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ss_policy_validates() {
        assert!(SsPolicy::new(vec![1.0], vec![2.0]).is_ok());
        assert!(SsPolicy::new(vec![3.0], vec![2.0]).is_err());
        assert!(SsPolicy::new(vec![1.0, 2.0], vec![2.0]).is_err());
        assert!(SsPolicy::new(vec![], vec![]).is_err());
    }

    #[test]
    fn rq_policy_lookup() {
        let p = RQPolicy::new(vec![1, 4], vec![10.0, 20.0], 99.0).unwrap();
        assert_eq!(p.order_at(1), 10.0);
        assert_eq!(p.order_at(2), 0.0);
        assert_eq!(p.order_at(4), 20.0);
        assert!(RQPolicy::new(vec![4, 1], vec![1.0, 1.0], 0.0).is_err());
        assert!(RQPolicy::new(vec![1], vec![0.0], 0.0).is_err());
        assert!(RQPolicy::new(vec![0], vec![1.0], 0.0).is_err());
    }

    #[test]
    fn rs_policy_lookup() {
        let p = RSPolicy::new(vec![2, 3], vec![50.0, -10.0], 0.0).unwrap();
        assert_eq!(p.level_at(2), Some(50.0));
        assert_eq!(p.level_at(1), None);
        assert!(RSPolicy::new(vec![1, 1], vec![1.0, 1.0], 0.0).is_err());
    }
}
