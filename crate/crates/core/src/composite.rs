//! The scaled Newton-type recursion for `x^(1/p)` and its explicit expansion.

use crate::error::{Error, Result};
use crate::hpnum::{nth_root, Complex, Poly, PrecisionCtx, Real};
use crate::sector::SectorEvaluator;

/// Largest numerator degree [`Approximant::expand`] will build by default.
pub const DEFAULT_EXPANSION_CAP: u64 = 4096;

fn check_order(p: u32) -> Result<()> {
    if p < 2 {
        return Err(Error::Domain(format!("root order p must be >= 2, got {p}")));
    }
    Ok(())
}

fn check_open_unit<T: Real>(alpha: &T, ctx: &PrecisionCtx) -> Result<()> {
    if !(alpha.is_finite() && *alpha > T::zero(ctx) && *alpha < T::one(ctx)) {
        return Err(Error::Domain(format!(
            "alpha must lie in (0, 1), got {}",
            alpha.to_f64()
        )));
    }
    Ok(())
}

/// `mu(alpha) = ((alpha - alpha^p) / ((p - 1)(1 - alpha)))^(1/p)`.
///
/// Evaluated as `(alpha (1 + alpha + ... + alpha^(p-2)) / (p - 1))^(1/p)`, which is
/// the same quantity without the cancellation near `alpha = 1`.
pub fn mu<T: Real>(alpha: &T, p: u32, ctx: &PrecisionCtx) -> Result<T> {
    check_order(p)?;
    check_open_unit(alpha, ctx)?;
    let alpha = &alpha.clone().with_ctx(ctx);
    let mut sum = T::one(ctx);
    let mut term = T::one(ctx);
    for _ in 1..p - 1 {
        term *= alpha.clone();
        sum += term.clone();
    }
    let radicand = alpha.clone() * sum / T::from_i64(p as i64 - 1, ctx);
    Ok(nth_root(&radicand, p, ctx))
}

/// `H(alpha) = p alpha / ((p - 1) mu(alpha) + mu(alpha)^(1-p) alpha^p)`, the next
/// interval parameter.
pub fn alpha_step<T: Real>(alpha: &T, p: u32, ctx: &PrecisionCtx) -> Result<T> {
    let m = mu(alpha, p, ctx)?;
    Ok(Step::new(&m, p, ctx).s_hat(&alpha.clone().with_ctx(ctx)))
}

/// `(1 - alpha) / (1 + alpha)`.
pub fn epsilon_of<T: Real>(alpha: &T, ctx: &PrecisionCtx) -> T {
    let one = T::one(ctx);
    (one.clone() - alpha.clone()) / (one + alpha.clone())
}

/// `alpha_0, ..., alpha_k` without building the full approximant.
pub fn alpha_sequence<T: Real>(p: u32, alpha0: &T, k: usize, ctx: &PrecisionCtx) -> Result<Vec<T>> {
    check_order(p)?;
    let mut alphas = Vec::with_capacity(k + 1);
    alphas.push(alpha0.clone().with_ctx(ctx));
    for j in 0..k {
        let next = alpha_step(&alphas[j], p, ctx).map_err(|e| saturated(e, j))?;
        check_growth(&alphas[j], &next, ctx, j)?;
        alphas.push(next);
    }
    Ok(alphas)
}

fn check_growth<T: Real>(prev: &T, next: &T, ctx: &PrecisionCtx, j: usize) -> Result<()> {
    if next <= prev || *next >= T::one(ctx) {
        return Err(saturated(Error::Domain(String::new()), j + 1));
    }
    Ok(())
}

// Once alpha_j rounds to 1 the next mu is undefined; at that point the error
// level has dropped below the working precision.
fn saturated(e: Error, j: usize) -> Error {
    match e {
        Error::Domain(_) if j > 0 => Error::PrecisionInsufficient(format!(
            "alpha_{j} stalls at 1 in working precision, the error level is below it"
        )),
        other => other,
    }
}

/// One stage of the recursion, with `mu` folded into two coefficients:
/// `f' = lin f + inv x / f^(p-1)` and `s_hat(g) = g / (lin + inv g^p)`.
#[derive(Clone, Debug)]
pub(crate) struct Step<T> {
    pub(crate) p: u32,
    /// `(p - 1) mu / p`
    pub(crate) lin: T,
    /// `1 / (p mu^(p-1))`
    pub(crate) inv: T,
}

impl<T: Real> Step<T> {
    pub(crate) fn new(mu: &T, p: u32, ctx: &PrecisionCtx) -> Self {
        let pf = T::from_i64(p as i64, ctx);
        let lin = T::from_i64(p as i64 - 1, ctx) * mu.clone() / pf.clone();
        let inv = T::one(ctx) / (pf * mu.powi(p as i32 - 1));
        Self { p, lin, inv }
    }

    pub(crate) fn f_update(&self, f: &T, x: &T) -> T {
        self.lin.clone() * f.clone() + self.inv.clone() * x.clone() / f.powi(self.p as i32 - 1)
    }

    pub(crate) fn s_hat(&self, g: &T) -> T {
        g.clone() / (self.lin.clone() + self.inv.clone() * g.powi(self.p as i32))
    }

    /// Returns `None` when the denominator vanishes.
    pub(crate) fn s_hat_complex(&self, g: &Complex<T>, ctx: &PrecisionCtx) -> Option<Complex<T>> {
        let mut den = g.powu(self.p, ctx).scale(&self.inv);
        den.re += self.lin.clone();
        if den.is_zero() {
            return None;
        }
        Some(g.clone() / den)
    }
}

/// The composite approximant `f_k` together with its interval parameters.
///
/// Immutable after construction; evaluation is pure.
#[derive(Clone, Debug)]
pub struct Approximant<T> {
    p: u32,
    alphas: Vec<T>,
    mus: Vec<T>,
    steps: Vec<Step<T>>,
    /// `2 alpha_k / (1 + alpha_k)`
    scale: T,
    ctx: PrecisionCtx,
}

impl<T: Real> Approximant<T> {
    /// Runs `k` steps of the interval recursion from `alpha0`.
    pub fn new(p: u32, alpha0: T, k: usize, ctx: &PrecisionCtx) -> Result<Self> {
        check_order(p)?;
        check_open_unit(&alpha0, ctx)?;
        let alpha0 = alpha0.with_ctx(ctx);
        let mut alphas = Vec::with_capacity(k + 1);
        let mut mus = Vec::with_capacity(k);
        let mut steps = Vec::with_capacity(k);
        alphas.push(alpha0);
        for j in 0..k {
            let m = mu(&alphas[j], p, ctx).map_err(|e| saturated(e, j))?;
            let step = Step::new(&m, p, ctx);
            let next = step.s_hat(&alphas[j]);
            check_growth(&alphas[j], &next, ctx, j)?;
            alphas.push(next);
            mus.push(m);
            steps.push(step);
        }
        let alpha_k = alphas[k].clone();
        let two = T::from_i64(2, ctx);
        let scale = two * alpha_k.clone() / (T::one(ctx) + alpha_k);
        Ok(Self {
            p,
            alphas,
            mus,
            steps,
            scale,
            ctx: *ctx,
        })
    }

    /// Parses `alpha0` from decimal text at the context precision.
    pub fn from_decimal(p: u32, alpha0: &str, k: usize, ctx: &PrecisionCtx) -> Result<Self> {
        Self::new(p, T::parse_decimal(alpha0, ctx)?, k, ctx)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> usize {
        self.mus.len()
    }

    pub fn alpha0(&self) -> &T {
        &self.alphas[0]
    }

    pub fn alpha_k(&self) -> &T {
        &self.alphas[self.k()]
    }

    pub fn alphas(&self) -> &[T] {
        &self.alphas
    }

    pub fn mus(&self) -> &[T] {
        &self.mus
    }

    pub fn ctx(&self) -> &PrecisionCtx {
        &self.ctx
    }

    /// The factor `2 alpha_k / (1 + alpha_k)` turning `f_k` into the scaled approximant.
    pub fn scale(&self) -> &T {
        &self.scale
    }

    pub(crate) fn steps(&self) -> &[Step<T>] {
        &self.steps
    }

    /// `alpha0^p`, the left end of the equioscillation interval.
    pub fn alpha0_pow_p(&self) -> T {
        self.alphas[0].powi(self.p as i32)
    }

    /// Unscaled `f_k(x)` for `x >= 0`.
    pub fn eval_f(&self, x: &T) -> T {
        debug_assert!(!x.is_sign_negative(), "f_k is evaluated on x >= 0");
        if x.is_zero() {
            return self.f_at_zero();
        }
        let mut f = T::one(&self.ctx);
        for step in &self.steps {
            f = step.f_update(&f, x);
        }
        f
    }

    /// `f_k(0) = prod_j ((p - 1) / p) mu_j`.
    pub fn f_at_zero(&self) -> T {
        self.steps
            .iter()
            .fold(T::one(&self.ctx), |acc, s| acc * s.lin.clone())
    }

    /// Scaled approximant `2 alpha_k / (1 + alpha_k) f_k(x)`.
    pub fn eval_f_scaled(&self, x: &T) -> T {
        self.scale.clone() * self.eval_f(x)
    }

    /// Equioscillation level `(1 - alpha_k) / (1 + alpha_k)` of the relative
    /// error on `[alpha0^p, 1]`.
    pub fn rel_error_bound(&self) -> T {
        epsilon_of(self.alpha_k(), &self.ctx)
    }

    /// Explicit numerator and denominator of `f_k` (or the scaled version),
    /// with the denominator normalized to be monic.
    pub fn expand(&self, scaled: bool, cap: u64) -> Result<RationalForm<T>> {
        let k = self.k();
        if k == 0 {
            return Err(Error::Domain("expansion needs k >= 1".into()));
        }
        let degree = (self.p as u64)
            .checked_pow(k as u32 - 1)
            .unwrap_or(u64::MAX);
        if degree > cap {
            return Err(Error::ExpansionCap { degree, cap });
        }
        let ctx = &self.ctx;
        let x = Poly::x(ctx);
        let mut num = Poly::one(ctx);
        let mut den = Poly::one(ctx);
        for step in &self.steps {
            // f' = (lin N^p + inv x D^p) / (N^(p-1) D)
            let num_pm1 = num.pow(self.p - 1);
            let next_num = num_pm1
                .mul(&num)
                .scale(&step.lin)
                .add(&den.pow(self.p).mul(&x).scale(&step.inv));
            den = num_pm1.mul(&den);
            num = next_num;
        }
        let scale = if scaled {
            self.scale.clone()
        } else {
            T::one(ctx)
        };
        RationalForm::monic(num, den, scale)
    }

    /// `s^(1/p) ftilde_k(x / s)`, approximating `x^(1/p)` on `[0, s]`.
    pub fn rescale_domain(&self, s: T) -> Result<DomainRescaled<'_, T>> {
        if !(s.is_finite() && s > T::zero(&self.ctx)) {
            return Err(Error::Domain(format!("domain length must be positive, got {}", s.to_f64())));
        }
        let s = s.with_ctx(&self.ctx);
        let s_root = nth_root(&s, self.p, &self.ctx);
        Ok(DomainRescaled {
            approx: self,
            s,
            s_root,
        })
    }

    /// The sector-function approximant `g_k` (or its rescaled form) sharing this
    /// interval sequence.
    pub fn sector(&self, scaled: bool) -> SectorEvaluator<'_, T> {
        SectorEvaluator::new(self, scaled)
    }
}

/// Explicit `scale * num(x) / den(x)`.
#[derive(Clone, Debug)]
pub struct RationalForm<T> {
    pub num: Poly<T>,
    pub den: Poly<T>,
    pub scale: T,
}

impl<T: Real> RationalForm<T> {
    pub(crate) fn monic(num: Poly<T>, den: Poly<T>, scale: T) -> Result<Self> {
        let den = den.normalize();
        let lead = den
            .leading()
            .cloned()
            .ok_or_else(|| Error::Domain("denominator expanded to zero".into()))?;
        let inv = T::one(den.ctx()) / lead;
        Ok(Self {
            num: num.scale(&inv).normalize(),
            den: den.scale(&inv).normalize(),
            scale,
        })
    }

    /// `(deg num, deg den)`.
    pub fn degrees(&self) -> (usize, usize) {
        (
            self.num.degree().unwrap_or(0),
            self.den.degree().unwrap_or(0),
        )
    }

    pub fn eval(&self, x: &T) -> T {
        self.scale.clone() * self.num.eval(x) / self.den.eval(x)
    }

    pub fn eval_complex(&self, z: &Complex<T>) -> Complex<T> {
        (self.num.eval_complex(z) / self.den.eval_complex(z)).scale(&self.scale)
    }
}

/// Approximant to `x^(1/p)` on `[0, s]` obtained by rescaling the argument.
#[derive(Clone, Debug)]
pub struct DomainRescaled<'a, T> {
    approx: &'a Approximant<T>,
    s: T,
    s_root: T,
}

impl<T: Real> DomainRescaled<'_, T> {
    pub fn eval(&self, x: &T) -> T {
        self.s_root.clone() * self.approx.eval_f_scaled(&(x.clone() / self.s.clone()))
    }

    /// `s^(1/p) eps`, the error level transported to `[0, s]`.
    pub fn error_scale(&self) -> &T {
        &self.s_root
    }
}
