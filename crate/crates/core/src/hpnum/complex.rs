use std::ops::{Add, Div, Mul, Neg, Sub};

use super::{PrecisionCtx, Real};

/// Rectangular complex number over a [`Real`] scalar.
#[derive(Clone, Debug, PartialEq)]
pub struct Complex<T> {
    pub re: T,
    pub im: T,
}

impl<T: Real> Complex<T> {
    pub fn new(re: T, im: T) -> Self {
        Self { re, im }
    }

    pub fn from_real(re: T, ctx: &PrecisionCtx) -> Self {
        Self {
            re,
            im: T::zero(ctx),
        }
    }

    pub fn i(ctx: &PrecisionCtx) -> Self {
        Self::new(T::zero(ctx), T::one(ctx))
    }

    pub fn one(ctx: &PrecisionCtx) -> Self {
        Self::new(T::one(ctx), T::zero(ctx))
    }

    /// `e^(2 pi i j / p)`.
    pub fn root_of_unity(j: u32, p: u32, ctx: &PrecisionCtx) -> Self {
        let theta = T::pi(ctx) * T::from_i64(2 * j as i64, ctx) / T::from_i64(p as i64, ctx);
        let (s, c) = theta.sin_cos();
        Self::new(c, s)
    }

    pub fn norm_sqr(&self) -> T {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }

    pub fn abs(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn arg(&self) -> T {
        self.im.atan2(&self.re)
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.re.clone() * s.clone(), self.im.clone() * s.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// `self^e` by repeated squaring.
    pub fn powu(&self, mut e: u32, ctx: &PrecisionCtx) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

impl<T: Real> Add for Complex<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl<T: Real> Sub for Complex<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl<T: Real> Mul for Complex<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let re = self.re.clone() * rhs.re.clone() - self.im.clone() * rhs.im.clone();
        let im = self.re * rhs.im + self.im * rhs.re;
        Self::new(re, im)
    }
}

impl<T: Real> Div for Complex<T> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let d = rhs.norm_sqr();
        let re = self.re.clone() * rhs.re.clone() + self.im.clone() * rhs.im.clone();
        let im = self.im * rhs.re - self.re * rhs.im;
        Self::new(re / d.clone(), im / d)
    }
}

impl<T: Real> Neg for Complex<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}
