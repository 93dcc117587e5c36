//! Approximants to the p-sector function `sect_p(z) = z / (z^p)^(1/p)`.
//!
//! `g_0(z) = z`, `g_{j+1} = s_hat(g_j, alpha_j)` with
//! `s_hat(x, alpha) = p x / ((p - 1) mu(alpha) + mu(alpha)^(1-p) x^p)`. The
//! rescaled `gtilde_k = 2 / (1 + alpha_k) g_k` equioscillates around 1 on
//! `[alpha0, 1]` and is equivariant under rotation by p-th roots of unity.

use crate::composite::{Approximant, RationalForm};
use crate::error::{Error, Result};
use crate::hpnum::{Complex, Poly, Real};

/// Evaluates `g_k` or `gtilde_k` for an approximant.
#[derive(Clone, Debug)]
pub struct SectorEvaluator<'a, T> {
    approx: &'a Approximant<T>,
    scaled: bool,
    factor: T,
}

impl<'a, T: Real> SectorEvaluator<'a, T> {
    pub fn new(approx: &'a Approximant<T>, scaled: bool) -> Self {
        let ctx = approx.ctx();
        let factor = if scaled {
            T::from_i64(2, ctx) / (T::one(ctx) + approx.alpha_k().clone())
        } else {
            T::one(ctx)
        };
        Self {
            approx,
            scaled,
            factor,
        }
    }

    pub fn approximant(&self) -> &Approximant<T> {
        self.approx
    }

    pub fn is_scaled(&self) -> bool {
        self.scaled
    }

    /// Value on the positive ray, `x >= 0`. Denominators are positive there.
    pub fn eval_ray(&self, x: &T) -> T {
        let mut g = x.clone();
        for step in self.approx.steps() {
            g = step.s_hat(&g);
        }
        self.factor.clone() * g
    }

    /// Value at an arbitrary complex point.
    pub fn eval(&self, z: &Complex<T>) -> Result<Complex<T>> {
        let ctx = self.approx.ctx();
        let mut g = z.clone();
        for (stage, step) in self.approx.steps().iter().enumerate() {
            g = step
                .s_hat_complex(&g, ctx)
                .ok_or(Error::Singularity { stage })?;
        }
        Ok(g.scale(&self.factor))
    }

    /// Value at `x e^(2 pi i j / p)` for `x >= 0`, via the ray and the phase.
    pub fn eval_on_ray(&self, j: u32, x: &T) -> Complex<T> {
        let ctx = self.approx.ctx();
        Complex::root_of_unity(j, self.approx.p(), ctx).scale(&self.eval_ray(x))
    }

    /// Explicit form of `g_k`: numerator of degree `p^k - p + 1`, denominator of
    /// degree `p^k` (for `k >= 1`), denominator monic.
    pub fn expand(&self, cap: u64) -> Result<RationalForm<T>> {
        let p = self.approx.p();
        let k = self.approx.k();
        let degree = (p as u64).checked_pow(k as u32).unwrap_or(u64::MAX);
        if degree > cap {
            return Err(Error::ExpansionCap { degree, cap });
        }
        let ctx = self.approx.ctx();
        let mut num = Poly::x(ctx);
        let mut den = Poly::one(ctx);
        for step in self.approx.steps() {
            // s_hat(N / D) = N D^(p-1) / (lin D^p + inv N^p)
            let den_pm1 = den.pow(p - 1);
            let next_den = den_pm1
                .mul(&den)
                .scale(&step.lin)
                .add(&num.pow(p).scale(&step.inv));
            num = num.mul(&den_pm1);
            den = next_den;
        }
        RationalForm::monic(num, den, self.factor.clone())
    }
}

/// `sect_p(z) = z / (z^p)^(1/p)` with the principal branch of the root.
pub fn sect<T: Real>(z: &Complex<T>, p: u32, ctx: &crate::PrecisionCtx) -> Result<Complex<T>> {
    if z.is_zero() {
        return Err(Error::Domain("sect_p is undefined at 0".into()));
    }
    let w = z.powu(p, ctx);
    let pf = T::from_i64(p as i64, ctx);
    let modulus = crate::nth_root(&w.abs(), p, ctx);
    let theta = w.arg() / pf;
    let (s, c) = theta.sin_cos();
    Ok(z.clone() / Complex::new(c * modulus.clone(), s * modulus))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::composite::DEFAULT_EXPANSION_CAP;
    use crate::hpnum::{BigFloat, PrecisionCtx};

    type B = BigFloat;

    fn ctx() -> PrecisionCtx {
        PrecisionCtx::default()
    }

    // decimal value of the literal, not its binary double
    fn b(v: f64) -> B {
        B::parse_decimal(&v.to_string(), &ctx()).unwrap()
    }

    fn close(a: &B, e: &B, tol: f64) -> bool {
        (a.clone() - e.clone()).abs() <= b(tol)
    }

    #[test]
    fn first_stage_hits_h_at_alpha() {
        let c = ctx();
        let a = Approximant::new(2, b(0.25), 1, &c).unwrap();
        let g = a.sector(false);
        assert_eq!(g.eval_ray(&b(0.25)), a.alphas()[1]);
        assert!(close(&g.eval_ray(&b(0.25)), &b(0.8), 1e-70));
    }

    #[test]
    fn zero_stages_is_identity() {
        let c = ctx();
        let a = Approximant::new(3, b(0.4), 0, &c).unwrap();
        let g = a.sector(false);
        let z = Complex::new(b(0.3), b(-0.7));
        assert_eq!(g.eval(&z).unwrap(), z);
        let gt = a.sector(true);
        assert!(close(&gt.eval_ray(&b(0.5)), &(b(1.0) / b(1.4)), 1e-70));
    }

    #[test]
    fn scaled_endpoint_sits_at_epsilon() {
        let c = ctx();
        let a = Approximant::new(2, b(0.25), 1, &c).unwrap();
        let v = a.sector(true).eval_ray(&b(0.25));
        assert!(close(&v, &(b(2.0) / b(1.8) * b(0.8)), 1e-70));
        assert!(close(&(b(1.0) - v), &a.rel_error_bound(), 1e-70));
    }

    #[test]
    fn rotation_equivariance() {
        let c = ctx();
        for p in [2u32, 3, 5] {
            let a = Approximant::new(p, b(0.1), 3, &c).unwrap();
            let g = a.sector(true);
            for x in [0.05, 0.3, 1.0] {
                let base = g.eval_ray(&b(x));
                for j in 0..p {
                    let w = Complex::<B>::root_of_unity(j, p, &c);
                    let lhs = g.eval(&w.scale(&b(x))).unwrap();
                    let rhs = w.scale(&base);
                    assert!((lhs - rhs).abs() < B::exp2i(-240, &c));
                }
            }
        }
    }

    #[test]
    fn singular_point_is_reported() {
        // lin + inv z^2 = 0 at z = i sqrt(lin / inv) for p = 2
        let c = ctx();
        let a = Approximant::new(2, b(0.25), 1, &c).unwrap();
        let step = &a.steps()[0];
        let y = (step.lin.clone() / step.inv.clone()).sqrt();
        let z = Complex::new(b(0.0), y);
        assert_eq!(a.sector(false).eval(&z).unwrap_err(), Error::Singularity { stage: 0 });
    }

    #[test]
    fn sector_expansion_degrees() {
        let c = ctx();
        for p in [2u32, 3] {
            for k in 1..=3usize {
                let a = Approximant::new(p, b(0.2), k, &c).unwrap();
                let form = a.sector(true).expand(DEFAULT_EXPANSION_CAP).unwrap();
                let pk = p.pow(k as u32) as usize;
                assert_eq!(form.degrees(), (pk - p as usize + 1, pk), "p={p} k={k}");
                let x = b(0.37);
                let diff = (form.eval(&x) - a.sector(true).eval_ray(&x)).abs();
                assert!(diff < B::exp2i(-200, &c));
            }
        }
    }

    #[test]
    fn sect_is_phase_on_rays() {
        let c = ctx();
        let w = Complex::<B>::root_of_unity(2, 5, &c);
        let s = sect(&w.scale(&b(0.4)), 5, &c).unwrap();
        assert!((s - w).abs() < B::exp2i(-240, &c));
        assert!(sect(&Complex::from_real(b(0.0), &c), 3, &c).is_err());
    }
}
