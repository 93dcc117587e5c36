//! Configurable-precision scalars, complex pairs and dense polynomials.
//!
//! Everything above this module is written against the [`Real`] trait, so the
//! same recursion runs on `f64` for quick previews and on [`BigFloat`] when the
//! error sinks far below machine epsilon.

mod bigfloat;
mod complex;
mod poly;
mod scalar;

pub use bigfloat::BigFloat;
pub use complex::Complex;
pub use poly::Poly;
pub use scalar::{nth_root, Real};

use crate::error::{Error, Result};

/// Default significand width in bits.
pub const DEFAULT_BITS: u32 = 256;
/// Smallest accepted significand width.
pub const MIN_BITS: u32 = 64;

/// Working-precision configuration shared by every computation.
///
/// The context only fixes the significand width of big-float values; native
/// floats ignore it and keep their own width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecisionCtx {
    bits: u32,
}

impl PrecisionCtx {
    pub fn new(significand_bits: u32) -> Result<Self> {
        if significand_bits < MIN_BITS {
            return Err(Error::Domain(format!(
                "significand_bits must be at least {MIN_BITS}, got {significand_bits}"
            )));
        }
        Ok(Self {
            bits: significand_bits,
        })
    }

    pub fn significand_bits(&self) -> u32 {
        self.bits
    }

    /// Same context with twice the significand width.
    pub fn doubled(&self) -> Self {
        Self {
            bits: self.bits.saturating_mul(2),
        }
    }

    /// Decimal digits used when printing values computed under this context.
    pub fn decimal_digits(&self) -> usize {
        ((self.bits as f64) / 3.3).floor().max(1.0) as usize
    }
}

impl Default for PrecisionCtx {
    fn default() -> Self {
        Self { bits: DEFAULT_BITS }
    }
}
