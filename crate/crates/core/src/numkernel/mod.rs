//! Precision context, tail-bounded summation, series acceleration and
//! semi-axis quadrature shared by the rest of the crate.

pub mod complex;
pub mod quadrature;
pub mod series;

use rug::float::Constant;
use rug::Float;
use serde::{Deserialize, Serialize};

pub use complex::{log2_abs, Complex};
pub use quadrature::{integrate_semiaxis, integrate_semiaxis_log, ExpSinhRule};
pub use series::{
    alternating_sum, cvz_terms, neville_at_zero, sum_until, sum_until_target, BoundKind,
    SeriesResult, Summand, TailModel,
};

/// Environment variable that overrides the default working precision.
pub const BITS_ENV: &str = "FERRAR_VERIFY_BITS";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrecisionContext {
    /// Working mantissa precision in bits.
    pub bits: u32,
    /// Absolute target tolerance for final results.
    pub tol: f64,
    pub max_terms: u64,
    pub quad_points: usize,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext {
            bits: 256,
            tol: 1e-25,
            max_terms: 2_000_000,
            quad_points: 2048,
        }
    }
}

impl PrecisionContext {
    pub fn new(bits: u32, tol: f64) -> Self {
        PrecisionContext {
            bits: bits.max(64),
            tol,
            ..Default::default()
        }
    }

    /// Default context with `FERRAR_VERIFY_BITS` applied when it parses.
    pub fn from_env() -> Self {
        let mut ctx = PrecisionContext::default();
        if let Some(b) = std::env::var(BITS_ENV).ok().and_then(|v| v.trim().parse::<u32>().ok()) {
            ctx.bits = b.max(64);
        }
        ctx
    }

    pub fn with_bits(&self, bits: u32) -> Self {
        PrecisionContext {
            bits: bits.max(64),
            ..self.clone()
        }
    }

    pub fn with_tol(&self, tol: f64) -> Self {
        PrecisionContext {
            tol,
            ..self.clone()
        }
    }

    /// Precision for intermediate work: a few guard bits above `bits`.
    pub fn work_prec(&self) -> u32 {
        self.bits + 32
    }

    pub fn float(&self, v: f64) -> Float {
        Float::with_val(self.work_prec(), v)
    }

    pub fn pi(&self) -> Float {
        Float::with_val(self.work_prec(), Constant::Pi)
    }

    pub fn log2_tol(&self) -> f64 {
        self.tol.log2()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_context_values() {
        let c = PrecisionContext::default();
        assert_eq!(c.bits, 256);
        assert_eq!(c.tol, 1e-25);
        assert_eq!(c.max_terms, 2_000_000);
        assert_eq!(c.quad_points, 2048);
    }

    #[test]
    fn bits_never_below_64() {
        assert_eq!(PrecisionContext::new(10, 1e-5).bits, 64);
        assert_eq!(PrecisionContext::default().with_bits(3).bits, 64);
    }
}
