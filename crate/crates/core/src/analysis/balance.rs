//! Choosing `alpha` so that `2 alpha = (1 - alpha_k) / (1 + alpha_k)`.

use crate::composite::{alpha_sequence, epsilon_of};
use crate::error::{Error, Result};
use crate::hpnum::{PrecisionCtx, Real};

/// Largest number of halvings tried when searching for the lower bracket.
const MAX_BRACKET_DOUBLINGS: u32 = 24;
const MAX_BISECTIONS: usize = 4000;

#[derive(Clone, Debug)]
pub struct Balanced<T> {
    pub alpha: T,
    /// `(1 - alpha_k) / (1 + alpha_k)` at the returned `alpha`.
    pub epsilon: T,
    pub iterations: usize,
}

/// `eps_k(alpha)`; a sequence that reaches 1 in working precision counts as 0.
pub fn eps_k<T: Real>(p: u32, k: usize, alpha: &T, ctx: &PrecisionCtx) -> Result<T> {
    match alpha_sequence(p, alpha, k, ctx) {
        Ok(alphas) => Ok(epsilon_of(&alphas[k], ctx)),
        Err(Error::PrecisionInsufficient(_)) => Ok(T::zero(ctx)),
        Err(e) => Err(e),
    }
}

fn phi<T: Real>(p: u32, k: usize, alpha: &T, ctx: &PrecisionCtx) -> Result<T> {
    Ok(T::from_i64(2, ctx) * alpha.clone() - eps_k(p, k, alpha, ctx)?)
}

/// Bisection on `phi(alpha) = 2 alpha - eps_k(alpha)`, which is increasing in
/// `alpha`. Bisects in `log alpha` because the root shrinks doubly
/// exponentially in `k`. Stops once `|phi| <= rel_tol * 2 alpha`.
pub fn balance_alpha<T: Real>(p: u32, k: usize, rel_tol: f64, ctx: &PrecisionCtx) -> Result<Balanced<T>> {
    if p < 2 {
        return Err(Error::Domain(format!("root order p must be >= 2, got {p}")));
    }
    if k < 1 {
        return Err(Error::Domain("balancing needs k >= 1".into()));
    }
    if !(rel_tol > 0.0 && rel_tol < 1.0) {
        return Err(Error::Domain(format!("rel_tol must lie in (0, 1), got {rel_tol}")));
    }
    let tol = T::from_f64(rel_tol, ctx);
    let two = T::from_i64(2, ctx);
    let accept = |alpha: &T, f: &T| f.abs() <= tol.clone() * two.clone() * alpha.clone();

    // phi(1/2) = 1 - eps_k > 0 always
    let mut hi = T::from_ratio(1, 2, ctx).ln();
    let mut lo = None;
    let floor = -(T::working_bits(ctx) as i32) * 4;
    let mut m = 2i32;
    for _ in 0..MAX_BRACKET_DOUBLINGS {
        if -m < floor {
            break;
        }
        let a = T::exp2i(-m, ctx);
        let f = phi(p, k, &a, ctx)?;
        if accept(&a, &f) {
            return Ok(Balanced {
                epsilon: eps_k(p, k, &a, ctx)?,
                alpha: a,
                iterations: 0,
            });
        }
        if f.is_sign_negative() {
            lo = Some(a.ln());
            break;
        }
        hi = a.ln();
        m *= 2;
    }
    let mut lo = lo.ok_or_else(|| {
        Error::NonConvergence(format!(
            "no sign change of 2 alpha - eps_{k}(alpha) above 2^{floor}; raise the precision"
        ))
    })?;

    let stuck = T::exp2i(8 - T::working_bits(ctx) as i32, ctx);
    for it in 1..=MAX_BISECTIONS {
        if (hi.clone() - lo.clone()).abs() <= stuck.clone() * lo.abs() {
            return Err(Error::PrecisionInsufficient(format!(
                "eps_{k}(alpha) is too noisy at {} bits to balance to rel_tol={rel_tol}",
                T::working_bits(ctx)
            )));
        }
        let mid = (lo.clone() + hi.clone()) / two.clone();
        let a = mid.exp();
        let f = phi(p, k, &a, ctx)?;
        if accept(&a, &f) {
            let epsilon = two.clone() * a.clone() - f;
            if epsilon.is_zero() {
                return Err(Error::PrecisionInsufficient(format!(
                    "eps_{k} underflows the working precision of {} bits",
                    T::working_bits(ctx)
                )));
            }
            return Ok(Balanced {
                alpha: a,
                epsilon,
                iterations: it,
            });
        }
        if f.is_sign_negative() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NonConvergence(format!(
        "bisection for p={p}, k={k} did not reach rel_tol={rel_tol}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hpnum::BigFloat;

    // closed-form p = 2 oracle in plain f64: H(a) = 2 sqrt(a) / (1 + a)
    fn oracle_p2(k: usize) -> f64 {
        let eps = |a: f64| {
            let mut x = a;
            for _ in 0..k {
                x = 2.0 * x.sqrt() / (1.0 + x);
            }
            (1.0 - x) / (1.0 + x)
        };
        let (mut lo, mut hi) = (1e-12f64, 0.5f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if 2.0 * mid - eps(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn first_step_root() {
        let ctx = PrecisionCtx::default();
        let r = balance_alpha::<BigFloat>(2, 1, 1e-12, &ctx).unwrap();
        let expect = oracle_p2(1);
        assert!((r.alpha.to_f64() - expect).abs() < 1e-10 * expect);
        assert!((r.epsilon.to_f64() - 2.0 * expect).abs() < 1e-10);
    }

    #[test]
    fn postcondition_holds() {
        let ctx = PrecisionCtx::default();
        for (p, k) in [(2, 3), (3, 2), (5, 4)] {
            let r = balance_alpha::<BigFloat>(p, k, 1e-3, &ctx).unwrap();
            let two_a = BigFloat::from_i64(2, &ctx) * r.alpha.clone();
            let gap = (two_a.clone() - r.epsilon.clone()).abs();
            assert!(gap <= two_a * BigFloat::from_f64(1e-3, &ctx), "p={p} k={k}");
        }
    }

    #[test]
    fn epsilon_decreases_with_k() {
        let ctx = PrecisionCtx::default();
        let eps: Vec<f64> = (1..=4)
            .map(|k| balance_alpha::<BigFloat>(2, k, 1e-6, &ctx).unwrap().epsilon.to_f64())
            .collect();
        for (k, w) in eps.windows(2).enumerate() {
            assert!(w[1] < w[0]);
            assert!((w[0] - 2.0 * oracle_p2(k + 1)).abs() < 1e-5 * w[0]);
        }
    }

    #[test]
    fn phi_sign_at_extremes() {
        let ctx = PrecisionCtx::default();
        for p in [2, 3, 7] {
            for k in 1..4 {
                let tiny = BigFloat::exp2i(-60, &ctx);
                assert!(phi(p, k, &tiny, &ctx).unwrap().is_sign_negative());
                let near_one = BigFloat::from_f64(0.999, &ctx);
                assert!(!phi(p, k, &near_one, &ctx).unwrap().is_sign_negative());
            }
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let ctx = PrecisionCtx::default();
        assert!(balance_alpha::<BigFloat>(2, 0, 1e-3, &ctx).is_err());
        assert!(balance_alpha::<BigFloat>(1, 2, 1e-3, &ctx).is_err());
        assert!(balance_alpha::<BigFloat>(2, 2, 1.5, &ctx).is_err());
    }

    #[test]
    fn works_in_f64() {
        let ctx = PrecisionCtx::default();
        let r = balance_alpha::<f64>(2, 1, 1e-9, &ctx).unwrap();
        assert!((r.alpha - oracle_p2(1)).abs() < 1e-9);
    }
}
