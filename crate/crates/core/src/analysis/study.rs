//! Error history of balanced approximants against `k`, with least-squares fits.

use super::balance::balance_alpha;
use super::scan::scan_abs_error;
use super::theory::exponent_c;
use crate::composite::Approximant;
use crate::error::{Error, Result};
use crate::hpnum::{PrecisionCtx, Real};

/// Samples per segment in a study scan.
pub const STUDY_SAMPLES: usize = 2000;
/// Balancing tolerance used by studies.
pub const STUDY_REL_TOL: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct ConvergenceRow<T> {
    pub k: usize,
    pub alpha: T,
    /// Scanned max error of the balanced approximant on `[0, 1]`.
    pub epsilon: T,
    /// Numerator degree `p^(k-1)`, saturating.
    pub degree: u128,
    /// A-priori bound `max(2 alpha, (1 - alpha_k) / (1 + alpha_k))`.
    pub bound_rhs: T,
    pub p_to_ck: f64,
    pub log_eps: f64,
}

/// Ordinary least-squares line `y = slope x + intercept`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

impl LinearFit {
    pub fn ols(xs: &[f64], ys: &[f64]) -> Result<Self> {
        if xs.len() != ys.len() || xs.len() < 2 {
            return Err(Error::Domain("a fit needs at least two points".into()));
        }
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
        if sxx == 0.0 {
            return Err(Error::Domain("fit abscissae are all equal".into()));
        }
        let slope = sxy / sxx;
        let intercept = my - slope * mx;
        let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
        Ok(Self {
            slope,
            intercept,
            r_squared,
        })
    }

    pub fn predict(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }

    /// `max |y - y_hat| / |y|` over the points.
    pub fn max_rel_residual(&self, xs: &[f64], ys: &[f64]) -> f64 {
        xs.iter()
            .zip(ys)
            .map(|(x, y)| ((y - self.predict(*x)) / y).abs())
            .fold(0.0, f64::max)
    }

    /// `max |y - y_hat|` divided by the spread `max y - min y`.
    pub fn max_range_residual(&self, xs: &[f64], ys: &[f64]) -> f64 {
        let hi = ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = ys.iter().cloned().fold(f64::INFINITY, f64::min);
        let worst = xs
            .iter()
            .zip(ys)
            .map(|(x, y)| (y - self.predict(*x)).abs())
            .fold(0.0, f64::max);
        if hi > lo {
            worst / (hi - lo)
        } else {
            0.0
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConvergenceTable<T> {
    pub p: u32,
    pub c: f64,
    pub rows: Vec<ConvergenceRow<T>>,
    /// `log eps` against `p^(ck)`.
    pub fit: LinearFit,
    /// `log log(1/eps)` against `k`.
    pub loglog_fit: LinearFit,
    /// Largest loglog residual relative to the spread of the loglog values.
    pub loglog_residual: f64,
    /// Largest loglog residual relative to the value itself.
    pub loglog_rel_residual: f64,
}

impl<T> ConvergenceTable<T> {
    pub fn loglog_points(&self) -> (Vec<f64>, Vec<f64>) {
        let xs = self.rows.iter().map(|r| r.k as f64).collect();
        let ys = self.rows.iter().map(|r| (-r.log_eps).ln()).collect();
        (xs, ys)
    }
}

/// Balances `alpha` for each `k` in `k_min..=k_max`, scans the `[0, 1]` error
/// and fits the history.
pub fn convergence_study<T: Real>(p: u32, k_min: usize, k_max: usize, ctx: &PrecisionCtx) -> Result<ConvergenceTable<T>> {
    convergence_study_with_samples(p, k_min, k_max, STUDY_SAMPLES, ctx)
}

/// [`convergence_study`] with an explicit scan grid size.
pub fn convergence_study_with_samples<T: Real>(
    p: u32,
    k_min: usize,
    k_max: usize,
    samples: usize,
    ctx: &PrecisionCtx,
) -> Result<ConvergenceTable<T>> {
    if k_min < 1 || k_max < k_min {
        return Err(Error::Domain(format!("need 1 <= k_min <= k_max, got {k_min}..{k_max}")));
    }
    let c: f64 = exponent_c::<T>(p, ctx)?.to_f64();
    let floor = T::exp2i(-(3 * T::working_bits(ctx) as i32) / 4, ctx);
    let mut rows = Vec::with_capacity(k_max - k_min + 1);
    for k in k_min..=k_max {
        let row = study_row::<T>(p, k, c, samples, ctx)?;
        if row.epsilon < floor {
            return Err(Error::PrecisionInsufficient(format!(
                "eps_{k} ~ {:.3e} is within 2^(-{}) of the working precision; raise --precision-bits above {}",
                row.epsilon.to_f64(),
                T::working_bits(ctx) / 4,
                T::working_bits(ctx)
            )));
        }
        rows.push(row);
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.p_to_ck).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.log_eps).collect();
    let (fit, loglog_fit, loglog_residual, loglog_rel_residual) = if rows.len() >= 2 {
        let fit = LinearFit::ols(&xs, &ys)?;
        let kx: Vec<f64> = rows.iter().map(|r| r.k as f64).collect();
        let ly: Vec<f64> = ys.iter().map(|y| (-y).ln()).collect();
        let ll = LinearFit::ols(&kx, &ly)?;
        (fit, ll, ll.max_range_residual(&kx, &ly), ll.max_rel_residual(&kx, &ly))
    } else {
        let flat = LinearFit {
            slope: 0.0,
            intercept: ys[0],
            r_squared: 1.0,
        };
        (flat, flat, 0.0, 0.0)
    };
    Ok(ConvergenceTable {
        p,
        c,
        rows,
        fit,
        loglog_fit,
        loglog_residual,
        loglog_rel_residual,
    })
}

fn study_row<T: Real>(p: u32, k: usize, c: f64, samples: usize, ctx: &PrecisionCtx) -> Result<ConvergenceRow<T>> {
    let bal = balance_alpha::<T>(p, k, STUDY_REL_TOL, ctx)?;
    let a = Approximant::new(p, bal.alpha.clone(), k, ctx)?;
    let split = a.alpha0_pow_p();
    let left = scan_abs_error(&a, &T::zero(ctx), &split, samples)?;
    let right = scan_abs_error(&a, &split, &T::one(ctx), samples)?;
    let epsilon = left.max_err.max_of(right.max_err);
    let two_alpha = T::from_i64(2, ctx) * bal.alpha.clone();
    let bound_rhs = two_alpha.max_of(a.rel_error_bound());
    let degree = (p as u128).checked_pow(k as u32 - 1).unwrap_or(u128::MAX);
    let p_to_ck = (p as f64).powf(c * k as f64);
    let log_eps = epsilon.ln().to_f64();
    Ok(ConvergenceRow {
        k,
        alpha: bal.alpha,
        epsilon,
        degree,
        bound_rhs,
        p_to_ck,
        log_eps,
    })
}
