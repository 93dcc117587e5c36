use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use super::{PrecisionCtx, Real};
use crate::error::{Error, Result};

/// MPFR-backed real with a per-value significand width.
///
/// Binary operations round to the precision of the left operand, which is the
/// context precision as long as values are created through [`Real`].
#[derive(Clone, Debug, PartialEq)]
pub struct BigFloat(Float);

impl BigFloat {
    pub fn with_prec(bits: u32, v: f64) -> Self {
        BigFloat(Float::with_val(bits, v))
    }

    pub fn inner(&self) -> &Float {
        &self.0
    }

    pub fn into_inner(self) -> Float {
        self.0
    }

    pub fn prec(&self) -> u32 {
        self.0.prec()
    }

    /// Correctly rounded `x^(1/p)` from MPFR; used to cross-check the Newton oracle.
    pub fn mpfr_root(&self, p: u32) -> Self {
        BigFloat(self.0.clone().root(p))
    }
}

impl From<Float> for BigFloat {
    fn from(f: Float) -> Self {
        BigFloat(f)
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $atr:ident, $amethod:ident) => {
        impl $tr for BigFloat {
            type Output = BigFloat;
            #[inline]
            fn $method(self, rhs: BigFloat) -> BigFloat {
                BigFloat($tr::$method(self.0, rhs.0))
            }
        }

        impl $atr for BigFloat {
            #[inline]
            fn $amethod(&mut self, rhs: BigFloat) {
                $atr::$amethod(&mut self.0, rhs.0);
            }
        }
    };
}

forward_binop!(Add, add, AddAssign, add_assign);
forward_binop!(Sub, sub, SubAssign, sub_assign);
forward_binop!(Mul, mul, MulAssign, mul_assign);
forward_binop!(Div, div, DivAssign, div_assign);

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat(-self.0)
    }
}

impl Real for BigFloat {
    fn from_f64(v: f64, ctx: &PrecisionCtx) -> Self {
        BigFloat(Float::with_val(ctx.significand_bits(), v))
    }

    fn from_i64(v: i64, ctx: &PrecisionCtx) -> Self {
        BigFloat(Float::with_val(ctx.significand_bits(), v))
    }

    fn parse_decimal(s: &str, ctx: &PrecisionCtx) -> Result<Self> {
        let parsed = Float::parse(s.trim())
            .map_err(|e| Error::Parse(format!("not a decimal number: {s:?} ({e})")))?;
        Ok(BigFloat(Float::with_val(ctx.significand_bits(), parsed)))
    }

    fn pi(ctx: &PrecisionCtx) -> Self {
        BigFloat(Float::with_val(ctx.significand_bits(), Constant::Pi))
    }

    fn exp2i(e: i32, ctx: &PrecisionCtx) -> Self {
        BigFloat(Float::with_val(ctx.significand_bits(), Float::i_exp(1, e)))
    }

    fn working_bits(ctx: &PrecisionCtx) -> u32 {
        ctx.significand_bits()
    }

    fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    fn abs(&self) -> Self {
        BigFloat(self.0.clone().abs())
    }

    fn sqrt(&self) -> Self {
        BigFloat(self.0.clone().sqrt())
    }

    fn ln(&self) -> Self {
        BigFloat(self.0.clone().ln())
    }

    fn exp(&self) -> Self {
        BigFloat(self.0.clone().exp())
    }

    fn sin_cos(&self) -> (Self, Self) {
        let cos = Float::new(self.0.prec());
        let (s, c) = self.0.clone().sin_cos(cos);
        (BigFloat(s), BigFloat(c))
    }

    fn atan2(&self, x: &Self) -> Self {
        BigFloat(self.0.clone().atan2(&x.0))
    }

    fn powi(&self, e: i32) -> Self {
        BigFloat(self.0.clone().pow(e))
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    fn root_seed(&self, p: u32) -> Self {
        let prec = self.0.prec();
        if self.0.is_zero() {
            return BigFloat(Float::new(prec));
        }
        // self = m * 2^e with m in [0.5, 1); split e = q p + r with 0 <= r < p.
        let (m, e) = self.0.to_f64_exp();
        let p_i = p as i32;
        let q = e.div_euclid(p_i);
        let r = e.rem_euclid(p_i);
        let head = (m * 2f64.powi(r)).powf(1.0 / p as f64);
        let mut seed = Float::with_val(prec, head);
        seed *= Float::with_val(prec, Float::i_exp(1, q));
        BigFloat(seed)
    }

    fn to_decimal(&self, digits: usize) -> String {
        self.0.to_string_radix(10, Some(digits.max(1)))
    }

    fn with_ctx(mut self, ctx: &PrecisionCtx) -> Self {
        self.0.set_prec(ctx.significand_bits());
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hpnum::nth_root;

    fn ctx(bits: u32) -> PrecisionCtx {
        PrecisionCtx::new(bits).unwrap()
    }

    #[test]
    fn carries_context_precision() {
        let c = ctx(300);
        let x = BigFloat::from_f64(0.1, &c);
        assert_eq!(x.prec(), 300);
        let y = x.clone() * BigFloat::from_i64(3, &c);
        assert_eq!(y.prec(), 300);
    }

    #[test]
    fn newton_root_matches_mpfr() {
        let c = ctx(512);
        for (v, p) in [("2", 3u32), ("1e-300", 31), ("0.0625", 2), ("7.5e200", 5)] {
            let x = BigFloat::parse_decimal(v, &c).unwrap();
            let ours = nth_root(&x, p, &c);
            let mpfr = x.mpfr_root(p);
            let rel = ((ours - mpfr.clone()) / mpfr).abs();
            assert!(rel < BigFloat::exp2i(-505, &c), "{v} p={p}: {rel}");
        }
    }

    #[test]
    fn seed_handles_huge_and_tiny_exponents() {
        let c = ctx(128);
        let x = BigFloat::exp2i(-3_000_000, &c);
        let s = x.root_seed(3);
        let expect = BigFloat::exp2i(-1_000_000, &c);
        let rel = ((s - expect.clone()) / expect).abs().to_f64();
        assert!(rel < 1e-14);
    }

    #[test]
    fn decimal_output_round_trips() {
        let c = ctx(256);
        let x = BigFloat::from_ratio(1, 3, &c);
        let s = x.to_decimal(c.decimal_digits());
        let back = BigFloat::parse_decimal(&s, &c).unwrap();
        let diff = (back - x).abs();
        assert!(diff < BigFloat::exp2i(-250, &c));
    }
}
