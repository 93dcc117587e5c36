//! Grid scans with golden-section refinement of the largest peaks.

use rayon::prelude::*;

use crate::composite::Approximant;
use crate::error::{Error, Result};
use crate::hpnum::{nth_root, PrecisionCtx, Real};

/// Default grid size for scans.
pub const DEFAULT_SAMPLES: usize = 10_000;

/// How many of the largest grid peaks get refined.
const REFINED_PEAKS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    Absolute,
    Relative,
    Weighted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    /// Equal ratios between neighbours; needs `lo > 0`.
    Geometric,
}

/// Outcome of a maximum-error scan.
#[derive(Clone, Debug)]
pub struct ErrorReport<T> {
    pub max_err: T,
    pub arg_max: T,
    pub interval: (T, T),
    pub samples: usize,
    pub refined: bool,
    pub metric: Metric,
}

/// A signed local extremum of an error curve.
#[derive(Clone, Debug)]
pub struct Extremum<T> {
    pub x: T,
    pub value: T,
}

pub(crate) fn grid<T: Real>(lo: &T, hi: &T, n: usize, spacing: Spacing, ctx: &PrecisionCtx) -> Vec<T> {
    let last = (n - 1) as i64;
    let denom = T::from_i64(last, ctx);
    match spacing {
        Spacing::Linear => {
            let width = hi.clone() - lo.clone();
            (0..n as i64)
                .map(|i| match i {
                    0 => lo.clone(),
                    i if i == last => hi.clone(),
                    i => lo.clone() + width.clone() * T::from_i64(i, ctx) / denom.clone(),
                })
                .collect()
        }
        Spacing::Geometric => {
            let (llo, lhi) = (lo.ln(), hi.ln());
            let width = lhi - llo.clone();
            (0..n as i64)
                .map(|i| match i {
                    0 => lo.clone(),
                    i if i == last => hi.clone(),
                    i => (llo.clone() + width.clone() * T::from_i64(i, ctx) / denom.clone()).exp(),
                })
                .collect()
        }
    }
}

fn eval_all<T, F>(xs: &[T], f: &F) -> Vec<T>
where
    T: Real,
    F: Fn(&T) -> T + Sync,
{
    // collect keeps the grid order, so the reduction below is deterministic
    xs.par_iter().map(f).collect()
}

/// Golden-section search for a maximum of `f` on `[a, b]`, stopping once the
/// bracket has shrunk by `2^(-bits/4)`.
pub(crate) fn golden_max<T, F>(f: &F, a: &T, b: &T, ctx: &PrecisionCtx) -> (T, T)
where
    T: Real,
    F: Fn(&T) -> T,
{
    let inv_phi = (T::from_i64(5, ctx).sqrt() - T::one(ctx)) / T::from_i64(2, ctx);
    let quarter_bits = (T::working_bits(ctx) / 4) as i32;
    let tol = (b.clone() - a.clone()).abs() * T::exp2i(-quarter_bits, ctx);
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut c = b.clone() - inv_phi.clone() * (b.clone() - a.clone());
    let mut d = a.clone() + inv_phi.clone() * (b.clone() - a.clone());
    let mut fc = f(&c);
    let mut fd = f(&d);
    while (b.clone() - a.clone()).abs() > tol {
        if fc > fd {
            b = d;
            d = c.clone();
            fd = fc;
            c = b.clone() - inv_phi.clone() * (b.clone() - a.clone());
            fc = f(&c);
        } else {
            a = c;
            c = d.clone();
            fc = fd;
            d = a.clone() + inv_phi.clone() * (b.clone() - a.clone());
            fd = f(&d);
        }
    }
    if fc > fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

// `a` beats `b` when larger; near-ties go to the larger abscissa. Error values
// come out of differences of O(1) quantities, so the tie window is absolute
// for small values.
fn beats<T: Real>(a: &(T, T), b: &(T, T), ctx: &PrecisionCtx) -> bool {
    let scale = a.1.clone().max_of(b.1.clone()).max_of(T::one(ctx));
    let tie = T::unit_roundoff(ctx) * T::exp2i(16, ctx) * scale;
    let diff = a.1.clone() - b.1.clone();
    if diff > tie {
        true
    } else if -diff.clone() > tie {
        false
    } else {
        a.0 > b.0
    }
}

/// Maximizes a nonnegative function over a grid, then refines the best peaks.
/// Returns `(argmax, max)` in the grid parameter.
pub(crate) fn peak<T, F>(
    f: &F,
    lo: &T,
    hi: &T,
    n: usize,
    spacing: Spacing,
    ctx: &PrecisionCtx,
) -> (T, T)
where
    T: Real,
    F: Fn(&T) -> T + Sync,
{
    let xs = grid(lo, hi, n, spacing, ctx);
    let vals = eval_all(&xs, f);
    let is_peak = |i: usize| {
        (i == 0 || vals[i] >= vals[i - 1]) && (i + 1 == n || vals[i] >= vals[i + 1])
    };
    let mut peaks: Vec<usize> = (0..n).filter(|&i| is_peak(i)).collect();
    peaks.sort_by(|&i, &j| {
        vals[j]
            .partial_cmp(&vals[i])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(i.cmp(&j))
    });
    let mut best = (xs[0].clone(), vals[0].clone());
    for i in 1..n {
        let cand = (xs[i].clone(), vals[i].clone());
        if beats(&cand, &best, ctx) {
            best = cand;
        }
    }
    for &i in peaks.iter().take(REFINED_PEAKS) {
        let a = &xs[i.saturating_sub(1)];
        let b = &xs[(i + 1).min(n - 1)];
        let refined = golden_max(f, a, b, ctx);
        if beats(&refined, &best, ctx) {
            best = refined;
        }
    }
    best
}

/// Sign-alternating extrema of a signed error curve: one per run of constant
/// sign, each refined by golden section inside its run.
pub(crate) fn alternating_extrema<T, F>(
    f: &F,
    lo: &T,
    hi: &T,
    n: usize,
    spacing: Spacing,
    ctx: &PrecisionCtx,
) -> Vec<(T, T)>
where
    T: Real,
    F: Fn(&T) -> T + Sync,
{
    let xs = grid(lo, hi, n, spacing, ctx);
    let vals = eval_all(&xs, f);
    let mut out = Vec::new();
    let mut start = 0;
    while start < n {
        let neg = vals[start].is_sign_negative();
        let mut end = start;
        while end + 1 < n && vals[end + 1].is_sign_negative() == neg {
            end += 1;
        }
        let mut best = start;
        for i in start..=end {
            if vals[i].abs() > vals[best].abs() {
                best = i;
            }
        }
        let magnitude = |x: &T| f(x).abs();
        let a = &xs[best.saturating_sub(1).max(start)];
        let b = &xs[(best + 1).min(end)];
        let mut pick = (xs[best].clone(), vals[best].clone());
        if a < b {
            let (x, m) = golden_max(&magnitude, a, b, ctx);
            if m > pick.1.abs() {
                let v = f(&x);
                pick = (x, v);
            }
        }
        out.push(pick);
        start = end + 1;
    }
    out
}

fn check_samples(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain(format!("need at least 2 samples, got {n}")));
    }
    Ok(())
}

/// Largest `|ftilde_k(x) - x^(1/p)|` on `[lo, hi]`, equispaced grid plus refinement.
pub fn scan_abs_error<T: Real>(
    a: &Approximant<T>,
    lo: &T,
    hi: &T,
    n_samples: usize,
) -> Result<ErrorReport<T>> {
    check_samples(n_samples)?;
    let ctx = a.ctx();
    let (lo, hi) = (lo.clone().with_ctx(ctx), hi.clone().with_ctx(ctx));
    if !(lo >= T::zero(ctx) && lo < hi && hi <= T::one(ctx)) {
        return Err(Error::Domain(format!(
            "scan interval must satisfy 0 <= lo < hi <= 1, got [{}, {}]",
            lo.to_f64(),
            hi.to_f64()
        )));
    }
    let p = a.p();
    let err = |x: &T| (a.eval_f_scaled(x) - nth_root(x, p, ctx)).abs();
    let (arg_max, max_err) = peak(&err, &lo, &hi, n_samples, Spacing::Linear, ctx);
    Ok(ErrorReport {
        max_err,
        arg_max,
        interval: (lo, hi),
        samples: n_samples,
        refined: true,
        metric: Metric::Absolute,
    })
}

/// Signed relative error `(ftilde_k(x) - x^(1/p)) / x^(1/p)` at `x = t^p`.
pub fn signed_rel_error_at_root<T: Real>(a: &Approximant<T>, t: &T) -> T {
    let x = t.powi(a.p() as i32);
    a.eval_f_scaled(&x) / t.clone() - T::one(a.ctx())
}

/// Largest relative error on `[alpha0^p, 1]`.
///
/// The grid is geometric in `t = x^(1/p)` on `[alpha0, 1]`, so `x^(1/p)` is
/// exact and the extrema crowding towards the left end stay resolved.
pub fn scan_rel_error<T: Real>(a: &Approximant<T>, n_samples: usize) -> Result<ErrorReport<T>> {
    check_samples(n_samples)?;
    let ctx = a.ctx();
    let err = |t: &T| signed_rel_error_at_root(a, t).abs();
    let (t_max, max_err) = peak(&err, a.alpha0(), &T::one(ctx), n_samples, Spacing::Geometric, ctx);
    Ok(ErrorReport {
        max_err,
        arg_max: t_max.powi(a.p() as i32),
        interval: (a.alpha0_pow_p(), T::one(ctx)),
        samples: n_samples,
        refined: true,
        metric: Metric::Relative,
    })
}

/// Sign-alternating extrema of the relative error on `[alpha0^p, 1]`, in
/// increasing `x`.
pub fn equioscillation_points<T: Real>(a: &Approximant<T>, n_samples: usize) -> Result<Vec<Extremum<T>>> {
    check_samples(n_samples)?;
    let ctx = a.ctx();
    let err = |t: &T| signed_rel_error_at_root(a, t);
    let ext = alternating_extrema(&err, a.alpha0(), &T::one(ctx), n_samples, Spacing::Geometric, ctx);
    Ok(ext
        .into_iter()
        .map(|(t, value)| Extremum {
            x: t.powi(a.p() as i32),
            value,
        })
        .collect())
}

/// Weighted error `|z (gtilde_k(z) - sect_p(z))|` over `S_p` and unweighted
/// error `|gtilde_k - sect_p|` over `S_{p, alpha_cut}`.
///
/// Both are scanned on the positive ray; rotation equivariance carries the
/// result to the other `p - 1` rays.
pub fn sector_error_scan<T: Real>(
    a: &Approximant<T>,
    alpha_cut: &T,
    n_samples: usize,
) -> Result<(ErrorReport<T>, ErrorReport<T>)> {
    check_samples(n_samples)?;
    let ctx = a.ctx();
    let alpha_cut = alpha_cut.clone().with_ctx(ctx);
    if !(alpha_cut > T::zero(ctx) && alpha_cut < T::one(ctx)) {
        return Err(Error::Domain("alpha_cut must lie in (0, 1)".into()));
    }
    let g = a.sector(true);
    let one = T::one(ctx);
    let weighted = |t: &T| (t.clone() * (g.eval_ray(t) - one.clone())).abs();
    let unweighted = |t: &T| (g.eval_ray(t) - one.clone()).abs();
    let (wx, wmax) = peak(&weighted, &T::zero(ctx), &one, n_samples, Spacing::Linear, ctx);
    let (ux, umax) = peak(&unweighted, &alpha_cut, &one, n_samples, Spacing::Geometric, ctx);
    Ok((
        ErrorReport {
            max_err: wmax,
            arg_max: wx,
            interval: (T::zero(ctx), one.clone()),
            samples: n_samples,
            refined: true,
            metric: Metric::Weighted,
        },
        ErrorReport {
            max_err: umax,
            arg_max: ux,
            interval: (alpha_cut, one),
            samples: n_samples,
            refined: true,
            metric: Metric::Absolute,
        },
    ))
}

/// Sign-alternating extrema of `gtilde_k(r) - 1` for `r` in `[alpha_cut, 1]`.
pub fn sector_equioscillation<T: Real>(
    a: &Approximant<T>,
    alpha_cut: &T,
    n_samples: usize,
) -> Result<Vec<Extremum<T>>> {
    check_samples(n_samples)?;
    let ctx = a.ctx();
    let g = a.sector(true);
    let one = T::one(ctx);
    let err = |t: &T| g.eval_ray(t) - one.clone();
    let alpha_cut = alpha_cut.clone().with_ctx(ctx);
    Ok(alternating_extrema(&err, &alpha_cut, &one, n_samples, Spacing::Geometric, ctx)
        .into_iter()
        .map(|(x, value)| Extremum { x, value })
        .collect())
}
