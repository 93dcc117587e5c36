use super::{Complex, PrecisionCtx, Real};

/// Dense polynomial with ascending coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<T> {
    coeffs: Vec<T>,
    ctx: PrecisionCtx,
}

impl<T: Real> Poly<T> {
    pub fn new(coeffs: Vec<T>, ctx: &PrecisionCtx) -> Self {
        Self { coeffs, ctx: *ctx }
    }

    pub fn zero(ctx: &PrecisionCtx) -> Self {
        Self::new(Vec::new(), ctx)
    }

    pub fn constant(c: T, ctx: &PrecisionCtx) -> Self {
        Self::new(vec![c], ctx)
    }

    pub fn one(ctx: &PrecisionCtx) -> Self {
        Self::constant(T::one(ctx), ctx)
    }

    /// The monomial `x`.
    pub fn x(ctx: &PrecisionCtx) -> Self {
        Self::new(vec![T::zero(ctx), T::one(ctx)], ctx)
    }

    pub fn from_f64s(cs: &[f64], ctx: &PrecisionCtx) -> Self {
        Self::new(cs.iter().map(|&c| T::from_f64(c, ctx)).collect(), ctx)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn ctx(&self) -> &PrecisionCtx {
        &self.ctx
    }

    /// Index of the last stored coefficient; `None` for the empty polynomial.
    ///
    /// Call [`Poly::normalize`] first when trailing roundoff should not count.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs
            .iter()
            .rposition(|c| !c.is_zero())
    }

    pub fn leading(&self) -> Option<&T> {
        self.degree().map(|d| &self.coeffs[d])
    }

    /// Drops trailing coefficients that are structurally zero: exactly zero, or
    /// below `2^(-bits/2)` times the largest coefficient magnitude.
    pub fn normalize(mut self) -> Self {
        let max = self
            .coeffs
            .iter()
            .map(|c| c.abs())
            .fold(T::zero(&self.ctx), T::max_of);
        let half_bits = (T::working_bits(&self.ctx) / 2) as i32;
        let threshold = max * T::exp2i(-half_bits, &self.ctx);
        while let Some(last) = self.coeffs.last() {
            if last.is_zero() || last.abs() < threshold {
                self.coeffs.pop();
            } else {
                break;
            }
        }
        self
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => a.clone() + b.clone(),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Self::new(coeffs, &self.ctx)
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(
            self.coeffs.iter().map(|c| c.clone() * s.clone()).collect(),
            &self.ctx,
        )
    }

    /// Multiplies by `x^m`.
    pub fn shift(&self, m: usize) -> Self {
        let mut coeffs = vec![T::zero(&self.ctx); m];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new(coeffs, &self.ctx)
    }

    /// Schoolbook product.
    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero(&self.ctx);
        }
        let n = self.coeffs.len() + other.coeffs.len() - 1;
        let coeffs = (0..n)
            .map(|i| {
                let lo = i.saturating_sub(other.coeffs.len() - 1);
                let hi = i.min(self.coeffs.len() - 1);
                let mut acc = T::zero(&self.ctx);
                for j in lo..=hi {
                    acc += self.coeffs[j].clone() * other.coeffs[i - j].clone();
                }
                acc
            })
            .collect();
        Self::new(coeffs, &self.ctx)
    }

    /// `self^e`, with `self^0 = 1`.
    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::one(&self.ctx);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Horner evaluation at a real point.
    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero(&self.ctx);
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    /// Horner evaluation at a complex point.
    pub fn eval_complex(&self, z: &Complex<T>) -> Complex<T> {
        let mut acc = Complex::from_real(T::zero(&self.ctx), &self.ctx);
        for c in self.coeffs.iter().rev() {
            acc = acc * z.clone();
            acc.re += c.clone();
        }
        acc
    }
}
