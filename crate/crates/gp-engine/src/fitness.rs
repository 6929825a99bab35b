use serde::{Deserialize, Serialize};

/// Objective value standing in for "did not converge". Finite so that it
/// survives JSON, large enough to be dominated by any real measurement.
pub const FAILED: f64 = 1e100;

/// Two minimized objectives.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fitness {
    pub objectives: [f64; 2],
}

impl Fitness {
    pub fn new(a: f64, b: f64) -> Self {
        Fitness { objectives: [a, b] }
    }

    pub fn failed() -> Self {
        Fitness { objectives: [FAILED; 2] }
    }

    pub fn is_failed(&self) -> bool {
        self.objectives.iter().any(|v| !v.is_finite() || *v >= FAILED)
    }

    /// Maps non-finite values onto the sentinel.
    pub fn sanitized(self) -> Self {
        if self.is_failed() {
            Self::failed()
        } else {
            self
        }
    }
}
