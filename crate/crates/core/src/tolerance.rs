use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical thresholds used across the pipeline.
///
/// Exact rank and exact stochasticity are replaced by these thresholds; the
/// confidence band `[τ / gap_ratio, τ · gap_ratio]` around the rank threshold `τ`
/// marks ranks that should not be trusted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Singular values at or below `rel_rank_tol · σ_max` count as zero.
    pub rel_rank_tol: f64,
    pub gap_ratio: f64,
    /// Allowed deviation of the total mass from 1.
    pub tol_sum: f64,
    /// Entries in `[-tol_entry, 0)` are clamped to zero.
    pub tol_entry: f64,
    pub tol_stat: f64,
    /// Slack for entries and row sums of recovered stochastic parameters.
    pub tol_stochastic: f64,
    /// Minimum complex-plane distance between eigenvalues of `T0 (T0+T1)^{-1}`.
    pub eig_gap_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            rel_rank_tol: 1e-9,
            gap_ratio: 10.0,
            tol_sum: 1e-9,
            tol_entry: 1e-12,
            tol_stat: 1e-9,
            tol_stochastic: 1e-8,
            eig_gap_tol: 1e-7,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("rel_rank_tol", self.rel_rank_tol),
            ("gap_ratio", self.gap_ratio),
            ("tol_sum", self.tol_sum),
            ("tol_entry", self.tol_entry),
            ("tol_stat", self.tol_stat),
            ("tol_stochastic", self.tol_stochastic),
            ("eig_gap_tol", self.eig_gap_tol),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidTolerance(format!("{name} must be positive, got {value}")));
            }
        }
        if self.gap_ratio <= 1.0 {
            return Err(Error::InvalidTolerance(format!(
                "gap_ratio must exceed 1, got {}",
                self.gap_ratio
            )));
        }
        Ok(())
    }
}
