//! Unscaled Newton iteration for `x^(1/p)`, the classical comparison point.

use super::scan::{peak, ErrorReport, Metric, Spacing};
use crate::error::{Error, Result};
use crate::hpnum::{nth_root, PrecisionCtx, Real};

/// `f_{j+1} = ((p - 1) f_j + x / f_j^(p-1)) / p` with `f_0 = 1`.
pub fn newton_baseline<T: Real>(p: u32, k: usize, x: &T, ctx: &PrecisionCtx) -> Result<T> {
    if p < 2 {
        return Err(Error::Domain(format!("root order p must be >= 2, got {p}")));
    }
    if x.is_sign_negative() {
        return Err(Error::Domain("newton_baseline needs x >= 0".into()));
    }
    let x = x.clone().with_ctx(ctx);
    let pf = T::from_i64(p as i64, ctx);
    let pm1 = T::from_i64(p as i64 - 1, ctx);
    let mut f = T::one(ctx);
    for _ in 0..k {
        f = (pm1.clone() * f.clone() + x.clone() / f.powi(p as i32 - 1)) / pf.clone();
    }
    Ok(f)
}

/// Largest `|f_k(x) - x^(1/p)|` of the unscaled iterate over `[0, 1]`.
pub fn scan_newton_error<T: Real>(p: u32, k: usize, n_samples: usize, ctx: &PrecisionCtx) -> Result<ErrorReport<T>> {
    if n_samples < 2 {
        return Err(Error::Domain(format!("need at least 2 samples, got {n_samples}")));
    }
    newton_baseline(p, k, &T::zero(ctx), ctx)?;
    let err = |x: &T| {
        let f = newton_baseline(p, k, x, ctx).expect("validated above");
        (f - nth_root(x, p, ctx)).abs()
    };
    let (lo, hi) = (T::zero(ctx), T::one(ctx));
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hpnum::BigFloat;

    #[test]
    fn zero_steps_is_one() {
        let ctx = PrecisionCtx::default();
        for x in [0.0, 0.3, 1.0] {
            let v = newton_baseline(3, 0, &BigFloat::from_f64(x, &ctx), &ctx).unwrap();
            assert_eq!(v, BigFloat::one(&ctx));
        }
    }

    #[test]
    fn one_is_a_fixed_point() {
        let ctx = PrecisionCtx::default();
        for k in 0..6 {
            let v = newton_baseline(2, k, &BigFloat::one(&ctx), &ctx).unwrap();
            assert_eq!(v, BigFloat::one(&ctx));
        }
    }

    #[test]
    fn value_at_zero_contracts_linearly() {
        let ctx = PrecisionCtx::default();
        let v = newton_baseline(2, 6, &BigFloat::zero(&ctx), &ctx).unwrap();
        assert_eq!(v, BigFloat::from_ratio(1, 64, &ctx));
        let r = scan_newton_error::<BigFloat>(2, 6, 500, &ctx).unwrap();
        assert_eq!(r.arg_max, BigFloat::zero(&ctx));
        assert_eq!(r.max_err, BigFloat::from_ratio(1, 64, &ctx));
    }

    #[test]
    fn matches_hand_step() {
        let ctx = PrecisionCtx::default();
        // p = 2, x = 0.25: f_1 = (1 + 0.25) / 2
        let v = newton_baseline(2, 1, &BigFloat::from_f64(0.25, &ctx), &ctx).unwrap();
        assert_eq!(v, BigFloat::from_f64(0.625, &ctx));
    }
}
