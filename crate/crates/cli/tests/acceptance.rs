//! Acceptance checks, one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p comprat-cli --test acceptance`.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use comprat::analysis::{
    balance_alpha, convergence_study, exponent_c, exponent_c_hat, scan_abs_error, scan_newton_error,
    scan_rel_error, sector_error_scan,
};
use comprat::composite::DEFAULT_EXPANSION_CAP;
use comprat::matfun::{matrix_proot, random_spd, spectral_apply, DenseMatrix, SpectrumCheck};
use comprat::{alpha_step, nth_root, BigFloat, Complex, HpApproximant, PrecisionCtx, Real, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type B = BigFloat;

const SCAN: usize = 2000;

struct Outcome {
    pass: bool,
    detail: String,
}

fn ctx(bits: u32) -> PrecisionCtx {
    PrecisionCtx::new(bits).unwrap()
}

fn dec(s: &str, c: &PrecisionCtx) -> B {
    B::parse_decimal(s, c).unwrap()
}

fn balanced(p: u32, k: usize, c: &PrecisionCtx) -> Result<HpApproximant> {
    let bal = balance_alpha::<B>(p, k, 1e-6, c)?;
    HpApproximant::new(p, bal.alpha, k, c)
}

/// Max error of `ftilde_k` on `[0, alpha^p]` and on `[alpha^p, 1]`.
fn split_errors(a: &HpApproximant) -> Result<(B, B)> {
    let c = a.ctx();
    let split = a.alpha0_pow_p();
    let left = scan_abs_error(a, &B::zero(c), &split, SCAN)?;
    let right = scan_abs_error(a, &split, &B::one(c), SCAN)?;
    Ok((left.max_err, right.max_err))
}

fn pow_frac(x: &B, num: i64, den: i64, c: &PrecisionCtx) -> B {
    (x.ln() * B::from_ratio(num, den, c)).exp()
}

const GRID_P: [u32; 3] = [2, 3, 5];
const GRID_ALPHA: [&str; 2] = ["0.05", "0.25"];

fn criterion_1() -> Result<Outcome> {
    let c = ctx(256);
    let tol = dec("1e-20", &c);
    let (mut worst, mut pass, mut cases) = (0.0f64, true, 0);
    for p in GRID_P {
        for a0 in GRID_ALPHA {
            for k in 1..=5 {
                let a = HpApproximant::new(p, dec(a0, &c), k, &c)?;
                let r = scan_rel_error(&a, SCAN)?;
                let eps = a.rel_error_bound();
                let dev = (r.max_err.clone() - eps.clone()).abs() / eps;
                pass &= dev <= tol && r.arg_max == B::one(&c);
                worst = worst.max(dev.to_f64());
                cases += 1;
            }
        }
    }
    Ok(Outcome {
        pass,
        detail: format!("{cases} cases, worst relative deviation {worst:.2e}, argmax x=1 in every case"),
    })
}

fn criterion_2() -> Result<Outcome> {
    let c = ctx(256);
    let (mut pass, mut below_alpha, mut cases, mut worst_ratio) = (true, 0, 0, 0.0f64);
    for p in GRID_P {
        for a0 in GRID_ALPHA {
            for k in 1..=5 {
                let a = HpApproximant::new(p, dec(a0, &c), k, &c)?;
                let left = scan_abs_error(&a, &B::zero(&c), &a.alpha0_pow_p(), SCAN)?;
                let two_a = B::from_i64(2, &c) * a.alpha0().clone();
                pass &= left.max_err <= two_a;
                if left.max_err < *a.alpha0() {
                    below_alpha += 1;
                }
                worst_ratio = worst_ratio.max((left.max_err / a.alpha0().clone()).to_f64());
                cases += 1;
            }
        }
    }
    Ok(Outcome {
        pass,
        detail: format!(
            "max err on [0, alpha0^p] <= 2 alpha0 in {cases} cases; below alpha0 in {below_alpha}/{cases} (largest err/alpha0 = {worst_ratio:.4})"
        ),
    })
}

fn criterion_3() -> Result<Outcome> {
    let c = ctx(256);
    let margin = B::exp2i(-100, &c);
    // smallest lhs - rhs seen by each family of inequalities
    let mut mins = [f64::INFINITY; 4];
    let mut pass = true;
    let mut check = |slot: usize, lhs: B, rhs: B| {
        let d = lhs - rhs;
        mins[slot] = mins[slot].min(d.to_f64());
        pass &= d > margin;
    };

    let mut endpoint_ok = true;
    for p in [2u32, 3, 5, 31] {
        let expo_num = p as i64 - 1;
        for a0 in GRID_ALPHA {
            let a = HpApproximant::new(p, dec(a0, &c), 5, &c)?;
            for w in a.alphas().windows(2) {
                check(0, w[1].clone(), w[0].clone());
                check(0, w[1].clone(), pow_frac(&w[0], expo_num, p as i64, &c));
            }
        }
        for i in 1..=1000 {
            let alpha = B::from_ratio(i, 1001, &c);
            check(1, alpha_step(&alpha, p, &c)?, pow_frac(&alpha, expo_num, p as i64, &c));
        }
    }
    for p in GRID_P {
        for a0 in GRID_ALPHA {
            for k in 1..=5 {
                let a = HpApproximant::new(p, dec(a0, &c), k, &c)?;
                let g = a.sector(false);
                let alpha_k = a.alpha_k().clone();
                let n = 1000;
                let mut prev_f: Option<B> = None;
                for i in 0..=n {
                    let t = a.alpha0().clone() * B::from_ratio(i, n, &c);
                    if i < n {
                        check(2, alpha_k.clone(), g.eval_ray(&t));
                    } else {
                        // g_k(alpha0) = alpha_k is an identity, not a strict inequality
                        let d = (g.eval_ray(&t) - alpha_k.clone()).abs();
                        endpoint_ok &= d <= B::exp2i(-240, &c);
                    }
                    let f = a.eval_f_scaled(&t.powi(p as i32));
                    if let Some(pf) = prev_f {
                        check(3, f.clone(), pf);
                    }
                    prev_f = Some(f);
                }
            }
        }
    }

    // p = 31: increments of ftilde near 0 are ~(alpha0/1000)^31, far below 2^-100,
    // so only the non-strict form is checked and reported.
    let mut p31_nondecreasing = true;
    for a0 in GRID_ALPHA {
        let a = HpApproximant::new(31, dec(a0, &c), 5, &c)?;
        let mut prev = a.f_at_zero();
        for i in 1..=1000 {
            let t = a.alpha0().clone() * B::from_ratio(i, 1000, &c);
            let f = a.eval_f(&t.powi(31));
            p31_nondecreasing &= f >= prev;
            prev = f;
        }
    }
    Ok(Outcome {
        pass: pass && endpoint_ok,
        detail: format!(
            "min margins: alpha steps {:.2e}, H {:.2e}, g_k {:.2e}, ftilde increments {:.2e} (need > {:.2e}); \
             g_k(alpha0) = alpha_k {}; p=31 ftilde nondecreasing (non-strict, increments below 2^-100): {}",
            mins[0],
            mins[1],
            mins[2],
            mins[3],
            2f64.powi(-100),
            if endpoint_ok { "holds" } else { "broken" },
            p31_nondecreasing
        ),
    })
}

fn criterion_4() -> Result<Outcome> {
    let c = ctx(512);
    let start = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for p in [5u32, 31] {
        let a = balanced(p, 6, &c)?;
        let two_a = B::from_i64(2, &c) * a.alpha0().clone();
        let gap = (two_a.clone() - a.rel_error_bound()).abs();
        let (left, right) = split_errors(&a)?;
        let ok = gap <= dec("1e-3", &c) * two_a && left <= right;
        pass &= ok;
        parts.push(format!(
            "p={p}: alpha={:.4e} left={:.3e} right={:.3e}",
            a.alpha0().to_f64(),
            left.to_f64(),
            right.to_f64()
        ));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(60);
    Ok(Outcome {
        pass,
        detail: format!("{} ({:.2}s)", parts.join("; "), elapsed.as_secs_f64()),
    })
}

fn criterion_5() -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for (p, bits) in [(2u32, 512u32), (5, 1024)] {
        let t = convergence_study::<B>(p, 2, 10, &ctx(bits))?;
        let decreasing = t.rows.windows(2).all(|w| w[1].epsilon < w[0].epsilon);
        pass &= t.fit.r_squared >= 0.98 && t.loglog_residual <= 0.15 && decreasing;
        parts.push(format!(
            "p={p}: r2={:.6} loglog slope={:.4} residual={:.3} (pointwise {:.3})",
            t.fit.r_squared, t.loglog_fit.slope, t.loglog_residual, t.loglog_rel_residual
        ));
    }
    Ok(Outcome {
        pass,
        detail: parts.join("; "),
    })
}

fn criterion_6() -> Result<Outcome> {
    let c = ctx(256);
    let tol = B::exp2i(-250, &c);
    let c2 = exponent_c::<B>(2, &c)?;
    let ch2 = exponent_c_hat::<B>(2, &c)?;
    let exact = (c2 - B::from_ratio(1, 2, &c)).abs() <= tol.clone() && (ch2 - B::one(&c)).abs() <= tol;
    let mut ordered = true;
    for p in 2..=50 {
        ordered &= exponent_c_hat::<B>(p, &c)? > exponent_c::<B>(p, &c)?;
    }
    let c200 = exponent_c::<B>(200, &c)?.to_f64() * 200.0 * 200f64.ln();
    let asym = (c200 - 1.0).abs() <= 0.2;
    Ok(Outcome {
        pass: exact && ordered && asym,
        detail: format!(
            "c(2)=1/2 and c_hat(2)=1 {}; c_hat > c on 2..50 {}; c(200)*200*ln 200 = {c200:.4}",
            if exact { "exact" } else { "off" },
            if ordered { "holds" } else { "fails" }
        ),
    })
}

fn criterion_7() -> Result<Outcome> {
    let c = ctx(256);
    let a0 = dec("0.1", &c);
    let rel_tol = dec("1e-20", &c);
    let phase_tol = B::exp2i(-200, &c);
    let (mut pass, mut weighted_ok, mut worst_rel, mut worst_phase) = (true, true, 0.0f64, 0.0f64);
    for p in [2u32, 3, 31] {
        for k in 1..=4 {
            let a = HpApproximant::new(p, a0.clone(), k, &c)?;
            let eps = a.rel_error_bound();
            let (w, u) = sector_error_scan(&a, &a0, SCAN)?;
            // attained with equality at r = 1 when eps_k >= alpha0; allow rounding
            let bound = a0.clone().max_of(eps.clone()) * (B::one(&c) + B::exp2i(-240, &c));
            weighted_ok &= w.max_err <= bound;
            let rel = (u.max_err - eps.clone()).abs() / eps;
            pass &= rel <= rel_tol;
            worst_rel = worst_rel.max(rel.to_f64());

            let g = a.sector(true);
            for i in 0..=16 {
                let x = B::from_ratio(i, 16, &c);
                let base = g.eval_ray(&x);
                for j in 0..p {
                    let w = Complex::root_of_unity(j, p, &c);
                    let z = w.scale(&x);
                    let d = (g.eval(&z)? - w.scale(&base)).abs();
                    pass &= d <= phase_tol;
                    worst_phase = worst_phase.max(d.to_f64());
                }
            }
        }
    }
    Ok(Outcome {
        pass: pass && weighted_ok,
        detail: format!(
            "weighted <= max(alpha0, eps_k): {weighted_ok}; unweighted vs eps_k worst rel {worst_rel:.2e}; phase worst abs {worst_phase:.2e}"
        ),
    })
}

fn criterion_8() -> Result<Outcome> {
    let c = ctx(512);
    let tol = B::exp2i(-128, &c);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut pass, mut worst) = (true, 0.0f64);
    for p in 2u32..=5 {
        for k in 1..=4usize {
            let a = HpApproximant::new(p, dec("0.1", &c), k, &c)?;
            let d = (p as usize).pow(k as u32 - 1);
            for scaled in [false, true] {
                let form = a.expand(scaled, DEFAULT_EXPANSION_CAP)?;
                pass &= form.degrees() == (d, d - 1);
                for _ in 0..1000 {
                    let x = B::from_f64(rng.gen_range(0.0..=1.0), &c);
                    let direct = if scaled { a.eval_f_scaled(&x) } else { a.eval_f(&x) };
                    let rel = (form.eval(&x) - direct.clone()).abs() / direct.abs();
                    pass &= rel <= tol;
                    worst = worst.max(rel.to_f64());
                }
            }
        }
    }
    let mut sector_ok = true;
    for p in [2u32, 3] {
        for k in 1..=3usize {
            let a = HpApproximant::new(p, dec("0.1", &c), k, &c)?;
            let g = a.sector(false);
            let form = g.expand(DEFAULT_EXPANSION_CAP)?;
            let pk = (p as usize).pow(k as u32);
            sector_ok &= form.degrees() == (pk - p as usize + 1, pk);
            for i in 0..=20 {
                let x = B::from_ratio(i, 20, &c);
                let direct = g.eval_ray(&x);
                sector_ok &= (form.eval(&x) - direct.clone()).abs() <= tol.clone() * direct.abs().max_of(B::one(&c));
            }
        }
    }
    Ok(Outcome {
        pass: pass && sector_ok,
        detail: format!(
            "16 forms x 2 scalings x 1000 points, worst rel {worst:.2e}; sector degrees (p^k-p+1, p^k) {}",
            if sector_ok { "match" } else { "mismatch" }
        ),
    })
}

fn criterion_9() -> Result<Outcome> {
    let c = ctx(512);
    let a = balanced(2, 6, &c)?;
    let (left, right) = split_errors(&a)?;
    let composite = left.max_of(right);
    let newton = scan_newton_error::<B>(2, 6, SCAN, &c)?.max_err;
    let ratio = (newton.clone() / composite.clone()).to_f64();
    Ok(Outcome {
        pass: ratio >= 1e3,
        detail: format!(
            "composite {:.3e}, Newton {:.3e}, ratio {ratio:.3e}",
            composite.to_f64(),
            newton.to_f64()
        ),
    })
}

fn criterion_10() -> Result<Outcome> {
    let c = ctx(256);
    let slack = dec("1e-30", &c);
    let exact_tol = B::exp2i(-248, &c);
    let mut pass = true;
    let mut parts = Vec::new();
    for p in [2u32, 3] {
        let a = balanced(p, 4, &c)?;
        let (left, right) = split_errors(&a)?;
        let scalar = left.max_of(right);

        let (m, q, lambda) = random_spd::<B>(8, 10 + p as u64, &c);
        let f = matrix_proot(&a, &m, SpectrumCheck::Attested)?;
        let roots: Vec<B> = lambda.iter().map(|l| nth_root(l, p, &c)).collect();
        let dist = f.max_abs_diff(&spectral_apply(&q, &roots, &c), &c);
        pass &= dist <= scalar.clone() + slack.clone();

        let d: Vec<B> = ["0", "0.25", "0.5", "1"].iter().map(|s| dec(s, &c)).collect();
        let fd = matrix_proot(&a, &DenseMatrix::from_diag(&d, &c), SpectrumCheck::Gershgorin)?;
        let want: Vec<B> = d.iter().map(|x| a.eval_f_scaled(x)).collect();
        let diag_err = fd.max_abs_diff(&DenseMatrix::from_diag(&want, &c), &c);

        let fi = matrix_proot(&a, &DenseMatrix::identity(5, &c), SpectrumCheck::Gershgorin)?;
        let id_want = DenseMatrix::identity(5, &c).scale(&a.eval_f_scaled(&B::one(&c)));
        let id_err = fi.max_abs_diff(&id_want, &c);
        pass &= diag_err <= exact_tol && id_err <= exact_tol;
        parts.push(format!(
            "p={p}: dist {:.3e} <= {:.3e}, diagonal {:.1e}, identity {:.1e}",
            dist.to_f64(),
            scalar.to_f64(),
            diag_err.to_f64(),
            id_err.to_f64()
        ));
    }
    Ok(Outcome {
        pass,
        detail: parts.join("; "),
    })
}

fn run_cli(args: &[&str]) -> (Vec<u8>, bool) {
    let out = Command::new(env!("CARGO_BIN_EXE_comprat"))
        .args(args)
        .env_remove("COMPRAT_PRECISION_BITS")
        .output()
        .expect("spawn comprat");
    (out.stdout, out.status.success())
}

fn criterion_11() -> Result<Outcome> {
    let dir = tempfile::tempdir().expect("temp dir");
    let report = |i: usize| dir.path().join(format!("report{i}.txt"));
    let r0 = report(0).to_string_lossy().into_owned();
    let r1 = report(1).to_string_lossy().into_owned();
    let runs: Vec<Vec<&str>> = vec![
        vec!["approx", "--p", "5", "--k", "3", "--samples", "300", "--precision-bits", "192"],
        vec!["approx", "--p", "3", "--epsilon", "1e-10", "--samples", "100"],
        vec!["study", "--p", "2", "--k-max", "4", "--samples", "200"],
        vec!["sector", "--p", "3", "--k", "3", "--alpha", "0.1", "--samples", "200"],
        vec!["matrix", "--p", "2", "--k", "3", "--random", "5", "--seed", "7", "--report", &r0],
    ];
    let mut pass = true;
    for args in &runs {
        let (a, ok_a) = run_cli(args);
        let mut again = args.clone();
        if let Some(pos) = again.iter().position(|s| *s == r0) {
            again[pos] = &r1;
        }
        let (b, ok_b) = run_cli(&again);
        pass &= ok_a && ok_b && !a.is_empty() && a == b;
    }
    let ra = std::fs::read(report(0)).unwrap_or_default();
    let rb = std::fs::read(report(1)).unwrap_or_default();
    pass &= !ra.is_empty() && ra == rb;
    Ok(Outcome {
        pass,
        detail: format!("{} command lines run twice, outputs byte-identical", runs.len()),
    })
}

fn main() -> ExitCode {
    type Check = fn() -> Result<Outcome>;
    let criteria: [(&str, Check); 11] = [
        ("equioscillation identity", criterion_1),
        ("left-segment bound 2 alpha0", criterion_2),
        ("lemma chain inequalities", criterion_3),
        ("balanced construction", criterion_4),
        ("convergence study shape", criterion_5),
        ("exponent calculators", criterion_6),
        ("sector bounds", criterion_7),
        ("expanded form equivalence", criterion_8),
        ("baseline separation", criterion_9),
        ("matrix application", criterion_10),
        ("CLI determinism", criterion_11),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match check() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failures += 1;
        }
        println!(
            "{} criterion {:>2} {name}: {detail} [{:.1}s]",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64()
        );
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
