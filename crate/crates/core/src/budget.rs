//! Enumeration budgets.
//!
//! Every full-domain enumeration checks its point count against a budget
//! before starting, so no operation silently runs forever.

use crate::error::{Error, Result};

pub const DEFAULT_BUDGET: u128 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_points: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_points: DEFAULT_BUDGET,
        }
    }
}

impl Budget {
    pub fn new(max_points: u128) -> Self {
        Budget { max_points }
    }

    /// Fails with the required count when `points` exceeds the budget.
    pub fn check(&self, points: u128) -> Result<()> {
        if points > self.max_points {
            Err(Error::BudgetExceeded {
                required: points,
                budget: self.max_points,
            })
        } else {
            Ok(())
        }
    }
}

/// p^n as a u128, for budget checks.
pub fn pow_points(p: u32, n: usize) -> u128 {
    (p as u128).pow(n as u32)
}
