use crate::error::CoreError;

/// Numerical thresholds shared by every construction and verification
/// routine in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Relative threshold for residuals and coefficient truncation.
    pub rel_eps: f64,
    /// Relative singular-value cutoff for rank and kernel decisions.
    pub rank_eps: f64,
    /// Minimum separation below which two parameter values count as one.
    pub root_sep_eps: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rel_eps: 1e-9,
            rank_eps: 1e-10,
            root_sep_eps: 1e-7,
        }
    }
}

impl Tolerance {
    pub fn new(rel_eps: f64, rank_eps: f64, root_sep_eps: f64) -> Result<Self, CoreError> {
        let tol = Tolerance {
            rel_eps,
            rank_eps,
            root_sep_eps,
        };
        for v in [rel_eps, rank_eps, root_sep_eps] {
            if !(v.is_finite() && v > 0.0) {
                return Err(CoreError::InvalidTolerance(v));
            }
        }
        Ok(tol)
    }

    /// Replaces the residual threshold, keeping the rank and separation cuts.
    pub fn with_rel_eps(mut self, rel_eps: f64) -> Self {
        self.rel_eps = rel_eps;
        self
    }

    /// Threshold under which a Taylor coefficient counts as vanished when
    /// measuring contact orders. Chosen between coefficient noise and the
    /// smallest genuine coefficient a non-degenerate contact produces.
    pub fn vanish_eps(&self) -> f64 {
        self.rel_eps.sqrt()
    }
}
