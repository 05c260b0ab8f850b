//! Controlled-precision evaluation of `zeta`, `zeta'`, `log Gamma`, `Delta` and
//! `Delta'/Delta` on the region `-2 <= sigma <= 6`, `|t| <= 10^4`.

mod bernoulli;
mod delta;
mod gamma;
mod zeta;

use serde::{Deserialize, Serialize};

pub use delta::{delta, delta_log_deriv, delta_with_deriv};
pub use gamma::{digamma, log_gamma};
pub use zeta::{
    em_truncation, zeta, zeta_deriv, zeta_estimate, zeta_pair, Estimate, ZetaPair, MAX_ABS_T,
    NOMINAL_ABS_T,
};

use crate::error::{Error, Result};

/// A point `s = sigma + i t` of the complex plane.
pub type ComplexValue = num_complex::Complex64;

/// Shorthand constructor.
pub fn cplx(re: f64, im: f64) -> ComplexValue {
    ComplexValue::new(re, im)
}

/// Bumped whenever a default below changes; part of every cache key.
pub const PARAMS_VERSION: u32 = 1;

/// Precision and truncation controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalParams {
    /// Lower bound for the Euler–Maclaurin truncation point `N`; the
    /// evaluator raises `N` with `|s|` so the correction series converges.
    pub em_cutoff: usize,
    /// Maximum number of Bernoulli correction terms.
    pub bernoulli_order: usize,
    pub target_abs_err: f64,
    /// Quadrature nodes per unit of phase for oscillatory integrals.
    pub quadrature_panel: usize,
}

impl Default for EvalParams {
    fn default() -> Self {
        Self {
            em_cutoff: 20,
            bernoulli_order: 30,
            target_abs_err: 1e-10,
            quadrature_panel: 8,
        }
    }
}

impl EvalParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.target_abs_err > 0.0) {
            return Err(Error::InvalidParams("target_abs_err must be positive".into()));
        }
        if self.em_cutoff < 10 {
            return Err(Error::InvalidParams("em_cutoff must be at least 10".into()));
        }
        if self.bernoulli_order < 2 {
            return Err(Error::InvalidParams("bernoulli_order must be at least 2".into()));
        }
        if self.quadrature_panel == 0 {
            return Err(Error::InvalidParams("quadrature_panel must be positive".into()));
        }
        Ok(())
    }

    /// Stable textual form used in cache keys.
    pub fn fingerprint(&self) -> String {
        format!(
            "v{}:N{}:B{}:e{:e}:q{}",
            PARAMS_VERSION, self.em_cutoff, self.bernoulli_order, self.target_abs_err, self.quadrature_panel
        )
    }
}
