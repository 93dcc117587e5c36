//! Rate exponents and recursion counts from the three-stage convergence argument.

use super::balance::balance_alpha;
use crate::composite::{alpha_step, epsilon_of};
use crate::error::{Error, Result};
use crate::hpnum::{PrecisionCtx, Real};

/// Grid size used when locating `alpha_star`.
pub const ALPHA_STAR_GRID: usize = 1000;

/// Calibrated `k2_tilde` for the orders the library ships numbers for; see
/// [`calibrate_k2_tilde`].
pub const K2_TILDE_TABLE: [(u32, i64); 3] = [(2, -2), (3, -2), (5, -4)];

/// The error targets `k2_tilde` is calibrated against.
pub const CALIBRATION_EPSILONS: [f64; 3] = [1e-4, 1e-8, 1e-12];

fn check_order(p: u32) -> Result<()> {
    if p < 2 {
        return Err(Error::Domain(format!("root order p must be >= 2, got {p}")));
    }
    Ok(())
}

fn check_unit<T: Real>(name: &str, v: &T, ctx: &PrecisionCtx) -> Result<()> {
    if !(*v > T::zero(ctx) && *v < T::one(ctx)) {
        return Err(Error::Domain(format!("{name} must lie in (0, 1), got {}", v.to_f64())));
    }
    Ok(())
}

/// `c = log 2 log(p/(p-1)) / (log p log(2p/(p-1)))`, the root-exponential rate in
/// the degree.
pub fn exponent_c<T: Real>(p: u32, ctx: &PrecisionCtx) -> Result<T> {
    check_order(p)?;
    let pf = T::from_i64(p as i64, ctx);
    let pm1 = T::from_i64(p as i64 - 1, ctx);
    let ln2 = T::from_i64(2, ctx).ln();
    let num = ln2.clone() * (pf.clone() / pm1.clone()).ln();
    let den = pf.ln() * (T::from_i64(2 * p as i64, ctx) / pm1).ln();
    Ok(num / den)
}

/// `c_hat = log 2 / log p`, the rate on the sector away from the origin.
pub fn exponent_c_hat<T: Real>(p: u32, ctx: &PrecisionCtx) -> Result<T> {
    check_order(p)?;
    Ok(T::from_i64(2, ctx).ln() / T::from_i64(p as i64, ctx).ln())
}

// log log(v), clamped to 0 where v <= e.
fn loglog_clamped<T: Real>(v: &T, ctx: &PrecisionCtx) -> T {
    let e = T::one(ctx).exp();
    if *v <= e {
        T::zero(ctx)
    } else {
        v.ln().ln()
    }
}

/// The three terms of the recursion count, before `k2_tilde` and rounding.
fn k_terms<T: Real>(p: u32, epsilon: &T, ctx: &PrecisionCtx) -> (T, T) {
    let pf = T::from_i64(p as i64, ctx);
    let two = T::from_i64(2, ctx);
    let stage1 = loglog_clamped(&(two.clone() / epsilon.clone()), ctx)
        / (pf.clone() / (pf.clone() - T::one(ctx))).ln();
    let stage3 = loglog_clamped(&(two.clone() / (epsilon.clone() * pf)), ctx) / two.ln();
    (stage1, stage3)
}

/// `ceil(loglog(2/eps) / log(p/(p-1)) + k2_tilde + loglog(2/(eps p)) / log 2)`,
/// a recursion count that reaches accuracy `eps` on `[0, 1]`.
///
/// Log-log terms whose argument is at most `e` are taken as 0.
pub fn predict_k<T: Real>(p: u32, epsilon: &T, k2_tilde: i64, ctx: &PrecisionCtx) -> Result<i64> {
    check_order(p)?;
    let epsilon = epsilon.clone().with_ctx(ctx);
    check_unit("epsilon", &epsilon, ctx)?;
    let (s1, s3) = k_terms(p, &epsilon, ctx);
    let total = s1 + s3 + T::from_i64(k2_tilde, ctx);
    Ok(total.to_f64().ceil() as i64)
}

/// Smallest `k` whose balanced approximant has `[0, 1]` error at most `eps`.
pub fn empirical_k<T: Real>(p: u32, epsilon: &T, ctx: &PrecisionCtx) -> Result<usize> {
    check_order(p)?;
    let epsilon = epsilon.clone().with_ctx(ctx);
    check_unit("epsilon", &epsilon, ctx)?;
    for k in 1..=64 {
        let b = balance_alpha::<T>(p, k, 1e-6, ctx)?;
        // at the balanced point the [0, 1] error is max(2 alpha, eps_k)
        let two_alpha = T::from_i64(2, ctx) * b.alpha;
        if two_alpha.max_of(b.epsilon) <= epsilon {
            return Ok(k);
        }
    }
    Err(Error::NonConvergence("needed more than 64 recursions".into()))
}

/// Smallest integer `k2_tilde` for which [`predict_k`] bounds [`empirical_k`]
/// from above at every target in `epsilons`.
pub fn calibrate_k2_tilde<T: Real>(p: u32, epsilons: &[f64], ctx: &PrecisionCtx) -> Result<i64> {
    let mut need = i64::MIN;
    for &e in epsilons {
        let eps = T::from_f64(e, ctx);
        let emp = empirical_k(p, &eps, ctx)? as i64;
        let base = predict_k(p, &eps, 0, ctx)?;
        need = need.max(emp - base);
    }
    Ok(need)
}

/// Table value of `k2_tilde`, if `p` was calibrated.
pub fn k2_tilde_for(p: u32) -> Option<i64> {
    K2_TILDE_TABLE.iter().find(|(q, _)| *q == p).map(|(_, k)| *k)
}

/// `eps(H(alpha)) / eps(alpha)^2`, which tends to `(p - 1) / 4` as `alpha -> 1`.
pub fn contraction_ratio<T: Real>(alpha: &T, p: u32, ctx: &PrecisionCtx) -> Result<T> {
    let h = alpha_step(alpha, p, ctx)?;
    let e = epsilon_of(&alpha.clone().with_ctx(ctx), ctx);
    Ok(epsilon_of(&h, ctx) / (e.clone() * e))
}

fn quadratic_contraction_holds<T: Real>(alpha: &T, p: u32, ctx: &PrecisionCtx) -> Result<bool> {
    let half_p = T::from_ratio(p as i64, 2, ctx);
    Ok(contraction_ratio(alpha, p, ctx)? <= half_p)
}

/// Smallest point of an [`ALPHA_STAR_GRID`]-point grid on
/// `(max(1/e, (p-2)/(p+2)), 1)` from which `eps(H(a)) <= (p/2) eps(a)^2` holds at
/// every remaining grid point.
pub fn alpha_star<T: Real>(p: u32, ctx: &PrecisionCtx) -> Result<T> {
    check_order(p)?;
    let inv_e = (-T::one(ctx)).exp();
    let lower = inv_e.max_of(T::from_ratio(p as i64 - 2, p as i64 + 2, ctx));
    let width = T::one(ctx) - lower.clone();
    let n = ALPHA_STAR_GRID as i64;
    let mut star = None;
    for i in (1..n).rev() {
        let a = lower.clone() + width.clone() * T::from_ratio(i, n, ctx);
        if quadratic_contraction_holds(&a, p, ctx)? {
            star = Some(a);
        } else {
            break;
        }
    }
    star.ok_or_else(|| {
        Error::NonConvergence(format!("quadratic contraction fails next to 1 for p={p}"))
    })
}

/// Recursion counts of the three stages for a start value `alpha` and target `epsilon`.
#[derive(Clone, Debug)]
pub struct StageCounts<T> {
    /// Steps until `alpha_j >= 1/e` by the a-priori bound.
    pub k1: usize,
    /// Steps of the actual sequence from `alpha_{k1}` until it passes `alpha_star`.
    pub k2: usize,
    pub alpha_star: T,
    pub k3: usize,
    /// `(p/2) eps(alpha_{k1+k2})`, the quantity that squares in stage 3.
    pub delta: T,
    pub total: usize,
}

/// Stage counts `k1`, `k2`, `k3` with `alpha_star` located numerically.
pub fn stage_counts<T: Real>(p: u32, alpha: &T, epsilon: &T, ctx: &PrecisionCtx) -> Result<StageCounts<T>> {
    check_order(p)?;
    let alpha = alpha.clone().with_ctx(ctx);
    let epsilon = epsilon.clone().with_ctx(ctx);
    check_unit("alpha", &alpha, ctx)?;
    check_unit("epsilon", &epsilon, ctx)?;
    let pf = T::from_i64(p as i64, ctx);
    let two = T::from_i64(2, ctx);
    let inner = two.clone() / (epsilon.clone() * pf.clone());
    if inner <= T::one(ctx) {
        return Err(Error::Domain(format!(
            "stage-3 count needs epsilon < 2/p, got epsilon = {} for p = {p}",
            epsilon.to_f64()
        )));
    }

    let inv_e = (-T::one(ctx)).exp();
    let k1 = if alpha < inv_e {
        let v = (T::one(ctx) / alpha.clone()).ln().ln() / (pf.clone() / (pf.clone() - T::one(ctx))).ln();
        v.to_f64().ceil().max(0.0) as usize
    } else {
        0
    };

    let star = alpha_star::<T>(p, ctx)?;
    let mut a = alpha.clone();
    for _ in 0..k1 {
        a = alpha_step(&a, p, ctx)?;
    }
    let mut k2 = 0;
    while a < star {
        a = alpha_step(&a, p, ctx)?;
        k2 += 1;
    }
    let delta = pf.clone() / two.clone() * epsilon_of(&a, ctx);

    let one = T::one(ctx);
    let star_term = (two.clone() / pf * (one.clone() + star.clone()) / (one - star.clone()))
        .ln()
        .ln();
    let v = (inner.ln().ln() - star_term) / two.ln();
    let k3 = v.to_f64().ceil().max(0.0) as usize;
    Ok(StageCounts {
        k1,
        k2,
        alpha_star: star,
        k3,
        delta,
        total: k1 + k2 + k3,
    })
}

/// The rate constants and stage quantities for one `(p, alpha, epsilon)`.
#[derive(Clone, Debug)]
pub struct TheoryParams<T> {
    pub p: u32,
    pub c: T,
    pub c_hat: T,
    pub k2_tilde: i64,
    pub alpha_star: T,
    pub k1: usize,
    pub k3: usize,
    pub delta_k: T,
}

impl<T: Real> TheoryParams<T> {
    /// Uses the calibrated `k2_tilde` when `p` is in the table, else 0.
    pub fn compute(p: u32, alpha: &T, epsilon: &T, ctx: &PrecisionCtx) -> Result<Self> {
        let s = stage_counts(p, alpha, epsilon, ctx)?;
        Ok(Self {
            p,
            c: exponent_c(p, ctx)?,
            c_hat: exponent_c_hat(p, ctx)?,
            k2_tilde: k2_tilde_for(p).unwrap_or(0),
            alpha_star: s.alpha_star,
            k1: s.k1,
            k3: s.k3,
            delta_k: s.delta,
        })
    }
}
