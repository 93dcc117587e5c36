use std::fmt::{Debug, LowerExp};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, Num};

use super::PrecisionCtx;
use crate::error::{Error, Result};

/// Real scalar contract used by the approximants.
///
/// Constants are always created through a [`PrecisionCtx`] so that big-float
/// values carry the configured significand width.
pub trait Real:
    Clone
    + Debug
    + PartialOrd
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
{
    fn from_f64(v: f64, ctx: &PrecisionCtx) -> Self;
    fn from_i64(v: i64, ctx: &PrecisionCtx) -> Self;
    fn parse_decimal(s: &str, ctx: &PrecisionCtx) -> Result<Self>;
    fn pi(ctx: &PrecisionCtx) -> Self;
    /// Exact power of two.
    fn exp2i(e: i32, ctx: &PrecisionCtx) -> Self;
    /// Significand bits actually carried by values built under `ctx`.
    fn working_bits(ctx: &PrecisionCtx) -> u32;

    fn to_f64(&self) -> f64;
    fn abs(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn ln(&self) -> Self;
    fn exp(&self) -> Self;
    fn sin_cos(&self) -> (Self, Self);
    fn atan2(&self, x: &Self) -> Self;
    fn powi(&self, e: i32) -> Self;
    fn is_zero(&self) -> bool;
    fn is_finite(&self) -> bool;
    /// Roughly 50-bit accurate `x^(1/p)` for `x > 0`, at the precision of `self`.
    fn root_seed(&self, p: u32) -> Self;
    /// Scientific notation with `digits` significant digits, round to nearest.
    fn to_decimal(&self, digits: usize) -> String;
    /// Rounds to the significand width of `ctx`.
    fn with_ctx(self, ctx: &PrecisionCtx) -> Self;

    fn zero(ctx: &PrecisionCtx) -> Self {
        Self::from_i64(0, ctx)
    }

    fn one(ctx: &PrecisionCtx) -> Self {
        Self::from_i64(1, ctx)
    }

    fn from_ratio(num: i64, den: i64, ctx: &PrecisionCtx) -> Self {
        Self::from_i64(num, ctx) / Self::from_i64(den, ctx)
    }

    /// `2^-working_bits`.
    fn unit_roundoff(ctx: &PrecisionCtx) -> Self {
        Self::exp2i(-(Self::working_bits(ctx) as i32), ctx)
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    fn is_sign_negative(&self) -> bool {
        let z = self.clone() - self.clone();
        *self < z
    }
}

impl<F> Real for F
where
    F: Float
        + FloatConst
        + FromPrimitive
        + Debug
        + LowerExp
        + Send
        + Sync
        + AddAssign
        + SubAssign
        + MulAssign
        + DivAssign,
{
    fn from_f64(v: f64, _ctx: &PrecisionCtx) -> Self {
        F::from_f64(v).expect("f64 converts to every float type")
    }

    fn from_i64(v: i64, _ctx: &PrecisionCtx) -> Self {
        F::from_i64(v).expect("i64 converts to every float type")
    }

    fn parse_decimal(s: &str, _ctx: &PrecisionCtx) -> Result<Self> {
        <F as Num>::from_str_radix(s.trim(), 10)
            .map_err(|_| Error::Parse(format!("not a decimal number: {s:?}")))
    }

    fn pi(_ctx: &PrecisionCtx) -> Self {
        F::PI()
    }

    fn exp2i(e: i32, _ctx: &PrecisionCtx) -> Self {
        F::from_f64(2.0).unwrap().powi(e)
    }

    fn working_bits(_ctx: &PrecisionCtx) -> u32 {
        // epsilon = 2^(1 - bits)
        let eps = <F as num_traits::ToPrimitive>::to_f64(&<F as Float>::epsilon()).unwrap_or(f64::EPSILON);
        (1.0 - eps.log2()).round() as u32
    }

    fn to_f64(&self) -> f64 {
        <F as num_traits::ToPrimitive>::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs(&self) -> Self {
        Float::abs(*self)
    }

    fn sqrt(&self) -> Self {
        Float::sqrt(*self)
    }

    fn ln(&self) -> Self {
        Float::ln(*self)
    }

    fn exp(&self) -> Self {
        Float::exp(*self)
    }

    fn sin_cos(&self) -> (Self, Self) {
        Float::sin_cos(*self)
    }

    fn atan2(&self, x: &Self) -> Self {
        Float::atan2(*self, *x)
    }

    fn powi(&self, e: i32) -> Self {
        Float::powi(*self, e)
    }

    fn is_zero(&self) -> bool {
        *self == F::zero()
    }

    fn is_finite(&self) -> bool {
        Float::is_finite(*self)
    }

    fn root_seed(&self, p: u32) -> Self {
        Float::powf(*self, F::one() / F::from_u32(p).unwrap())
    }

    fn to_decimal(&self, digits: usize) -> String {
        let digits = digits.clamp(1, 40);
        format!("{:.*e}", digits - 1, self)
    }

    fn with_ctx(self, _ctx: &PrecisionCtx) -> Self {
        self
    }
}

/// `x^(1/p)` for `x >= 0` by Newton's method on `y^p = x`.
///
/// The seed splits off the binary exponent so it is accurate for any
/// magnitude; each step then doubles the number of correct bits.
pub fn nth_root<T: Real>(x: &T, p: u32, ctx: &PrecisionCtx) -> T {
    assert!(p >= 1, "root order must be positive");
    assert!(!x.is_sign_negative(), "nth_root of a negative number");
    if x.is_zero() || p == 1 {
        return x.clone();
    }
    let target = T::working_bits(ctx) + 8;
    let mut good_bits = 45;
    let mut steps = 1;
    while good_bits < target {
        good_bits *= 2;
        steps += 1;
    }
    let pf = T::from_i64(p as i64, ctx);
    let pm1 = T::from_i64(p as i64 - 1, ctx);
    let mut y = x.root_seed(p);
    for _ in 0..steps {
        y = (pm1.clone() * y.clone() + x.clone() / y.powi(p as i32 - 1)) / pf.clone();
    }
    y
}
