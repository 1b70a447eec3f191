use serde::{Deserialize, Serialize};

/// Numerical tolerances shared by curve construction and the checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative accuracy of the unit-speed reparametrization.
    pub reparametrization: f64,
    /// Relative closure tolerance, |G(L) - G(0)| / L.
    pub closure: f64,
    /// Slack added to quadrature error when deciding whether an inequality holds.
    pub inequality: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            reparametrization: 1e-10,
            closure: 1e-10,
            inequality: 1e-10,
        }
    }
}
