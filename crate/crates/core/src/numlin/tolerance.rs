use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute and relative slack used by every approximate equality in the crate.
///
/// A residual `r` measured against operands of size `s` is accepted when
/// `r <= eps_abs * max(1, s) + eps_rel * s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub eps_abs: f64,
    pub eps_rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            eps_abs: 1e-9,
            eps_rel: 1e-9,
        }
    }
}

impl Tolerance {
    pub fn new(eps_abs: f64, eps_rel: f64) -> Result<Self> {
        if !(eps_abs > 0.0 && eps_rel > 0.0 && eps_abs.is_finite() && eps_rel.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "tolerances must be positive and finite (got {eps_abs}, {eps_rel})"
            )));
        }
        Ok(Tolerance { eps_abs, eps_rel })
    }

    /// Both components set to `eps`.
    pub fn uniform(eps: f64) -> Result<Self> {
        Self::new(eps, eps)
    }

    pub fn bound(&self, scale: f64) -> f64 {
        self.eps_abs * scale.max(1.0) + self.eps_rel * scale
    }

    pub fn accepts(&self, residual: f64, scale: f64) -> bool {
        residual <= self.bound(scale)
    }
}

/// Relative threshold below which a singular value counts as zero in rank and
/// kernel decisions.
pub const RANK_RTOL: f64 = 1e-7;
