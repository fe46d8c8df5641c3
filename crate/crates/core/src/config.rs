use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Thresholds used by the float64 backend. The exact backend ignores them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Singular values at or below `rank_tol * σ_max` count as zero.
    pub rank_tol: f64,
    /// Eigenvalues closer than this are one cluster.
    pub eig_cluster_tol: f64,
    /// Bound on residual norms when verifying certificates.
    pub verify_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig { rank_tol: 1e-9, eig_cluster_tol: 1e-7, verify_tol: 1e-9 }
    }
}

impl ToleranceConfig {
    pub fn new(rank_tol: f64, eig_cluster_tol: f64, verify_tol: f64) -> Result<Self> {
        let cfg = ToleranceConfig { rank_tol, eig_cluster_tol, verify_tol };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("rank_tol", self.rank_tol),
            ("eig_cluster_tol", self.eig_cluster_tol),
            ("verify_tol", self.verify_tol),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Tolerance(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        Ok(())
    }
}
