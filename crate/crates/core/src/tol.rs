//! Numerical tolerances used throughout the crate.

use crate::error::{Error, Result};

/// Tolerance knobs for rank decisions, residual verification, and the
/// branch-cut guard of the principal matrix square root.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ToleranceConfig {
    /// Rank threshold relative to the largest singular value: a singular
    /// value is retained iff it exceeds `rank_rel_tol * sigma_max`.
    pub rank_rel_tol: f64,
    /// Relative Frobenius residual allowed when reconstructing a
    /// decomposition or verifying an inverse.
    pub residual_rel_tol: f64,
    /// Guard distance of eigenvalues from the negative real axis when taking
    /// a principal matrix square root (scaled by the spectral radius).
    pub sqrt_axis_margin: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            rank_rel_tol: 1e-12,
            residual_rel_tol: 1e-9,
            sqrt_axis_margin: 1e-10,
        }
    }
}

impl ToleranceConfig {
    pub fn new(rank_rel_tol: f64, residual_rel_tol: f64, sqrt_axis_margin: f64) -> Result<Self> {
        let cfg = ToleranceConfig {
            rank_rel_tol,
            residual_rel_tol,
            sqrt_axis_margin,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// All tolerances must be strictly positive and finite.
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("rank_rel_tol", self.rank_rel_tol),
            ("residual_rel_tol", self.residual_rel_tol),
            ("sqrt_axis_margin", self.sqrt_axis_margin),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidTolerance(format!(
                    "{name} must be strictly positive and finite, got {v}"
                )));
            }
        }
        Ok(())
    }
}
