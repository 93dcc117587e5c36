use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use comprat::analysis::balance::eps_k;
use comprat::analysis::{
    balance_alpha, convergence_study_with_samples, scan_abs_error, sector_equioscillation, sector_error_scan,
};
use comprat::matfun::{jacobi_eigen, matrix_proot, random_spd, spectral_apply, SpectrumCheck};
use comprat::{nth_root, BigFloat, HpApproximant, HpMatrix, PrecisionCtx, Real, VERSION};

use crate::args::{AlphaMode, ApproxArgs, Common, MatrixArgs, SectorArgs, StudyArgs};
use crate::error::CliError;

type B = BigFloat;

const MAX_AUTO_K: usize = 64;

fn ctx_of(common: &Common) -> Result<PrecisionCtx, CliError> {
    Ok(PrecisionCtx::new(common.precision_bits)?)
}

fn num(v: &B, ctx: &PrecisionCtx) -> String {
    v.to_decimal(ctx.decimal_digits())
}

fn emit(out: &Option<std::path::PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn check_samples(common: &Common) -> Result<(), CliError> {
    if common.samples < 2 {
        return Err(CliError::Usage(format!("--samples must be at least 2, got {}", common.samples)));
    }
    Ok(())
}

struct Chosen {
    alpha: B,
    k: usize,
    mode: &'static str,
}

fn choose_alpha(p: u32, k: Option<usize>, mode: &AlphaMode, rel_tol: f64, ctx: &PrecisionCtx) -> Result<Chosen, CliError> {
    let need_k = |flag: &str| k.ok_or_else(|| CliError::Usage(format!("{flag} needs --k")));
    if let Some(a) = &mode.alpha {
        return Ok(Chosen {
            alpha: B::parse_decimal(a, ctx)?,
            k: need_k("--alpha")?,
            mode: "alpha",
        });
    }
    if let Some(e) = &mode.epsilon {
        let eps = B::parse_decimal(e, ctx)?;
        if !(eps > B::zero(ctx) && eps < B::one(ctx)) {
            return Err(comprat::Error::Domain(format!("--epsilon must lie in (0, 1), got {e}")).into());
        }
        let alpha = eps.clone() / B::from_i64(2, ctx);
        let k = match k {
            Some(k) => k,
            None => {
                let mut found = None;
                for k in 0..=MAX_AUTO_K {
                    if eps_k(p, k, &alpha, ctx)? <= eps {
                        found = Some(k);
                        break;
                    }
                }
                found.ok_or_else(|| {
                    comprat::Error::NonConvergence(format!("no k <= {MAX_AUTO_K} reaches epsilon {e}"))
                })?
            }
        };
        return Ok(Chosen {
            alpha,
            k,
            mode: "epsilon",
        });
    }
    let k = need_k("balancing")?;
    let b = balance_alpha::<B>(p, k, rel_tol, ctx)?;
    Ok(Chosen {
        alpha: b.alpha,
        k,
        mode: "balance",
    })
}

fn header(command: &str) -> String {
    format!("# comprat {VERSION} {command}\n")
}

pub fn approx(args: &ApproxArgs) -> Result<(), CliError> {
    check_samples(&args.common)?;
    let ctx = ctx_of(&args.common)?;
    let chosen = choose_alpha(args.p, args.k, &args.mode, args.rel_tol, &ctx)?;
    let a = HpApproximant::new(args.p, chosen.alpha, chosen.k, &ctx)?;
    let n = args.common.samples;
    let split = a.alpha0_pow_p();
    let left = scan_abs_error(&a, &B::zero(&ctx), &split, n)?;
    let right = scan_abs_error(&a, &split, &B::one(&ctx), n)?;

    let mut s = header("approx");
    writeln!(
        s,
        "# p={}, k={}, alpha={}, eps={}, precision_bits={}",
        a.p(),
        a.k(),
        num(a.alpha0(), &ctx),
        num(&a.rel_error_bound(), &ctx),
        ctx.significand_bits()
    )
    .unwrap();
    writeln!(
        s,
        "# mode={}, samples={}, seed={}, rel_tol={:e}",
        chosen.mode, n, args.common.seed, args.rel_tol
    )
    .unwrap();
    writeln!(
        s,
        "# max_abs_err_left={}, argmax_left={}, max_abs_err_right={}, argmax_right={}",
        num(&left.max_err, &ctx),
        num(&left.arg_max, &ctx),
        num(&right.max_err, &ctx),
        num(&right.arg_max, &ctx)
    )
    .unwrap();
    s.push_str("x,ftilde,xroot,err\n");
    let last = B::from_i64(n as i64 - 1, &ctx);
    for i in 0..n {
        let x = B::from_i64(i as i64, &ctx) / last.clone();
        let f = a.eval_f_scaled(&x);
        let r = nth_root(&x, a.p(), &ctx);
        let e = f.clone() - r.clone();
        writeln!(s, "{},{},{},{}", num(&x, &ctx), num(&f, &ctx), num(&r, &ctx), num(&e, &ctx)).unwrap();
    }
    emit(&args.common.out, &s)
}

pub fn study(args: &StudyArgs) -> Result<(), CliError> {
    check_samples(&args.common)?;
    let ctx = ctx_of(&args.common)?;
    let t = convergence_study_with_samples::<B>(args.p, args.k_min, args.k_max, args.common.samples, &ctx)?;
    let mut s = header("study");
    writeln!(
        s,
        "# p={}, k_min={}, k_max={}, precision_bits={}",
        args.p,
        args.k_min,
        args.k_max,
        ctx.significand_bits()
    )
    .unwrap();
    writeln!(s, "# samples={}, seed={}, c={:.17e}", args.common.samples, args.common.seed, t.c).unwrap();
    s.push_str("k,alpha,epsilon,n,p_to_ck,log_eps\n");
    for r in &t.rows {
        writeln!(
            s,
            "{},{},{},{},{:.17e},{}",
            r.k,
            num(&r.alpha, &ctx),
            num(&r.epsilon, &ctx),
            r.degree,
            r.p_to_ck,
            num(&r.epsilon.ln(), &ctx)
        )
        .unwrap();
    }
    writeln!(
        s,
        "# fit log_eps ~ p_to_ck: slope={:.17e}, intercept={:.17e}, r_squared={:.17e}",
        t.fit.slope, t.fit.intercept, t.fit.r_squared
    )
    .unwrap();
    writeln!(
        s,
        "# fit loglog(1/eps) ~ k: slope={:.17e}, intercept={:.17e}, range_residual={:.17e}, rel_residual={:.17e}",
        t.loglog_fit.slope, t.loglog_fit.intercept, t.loglog_residual, t.loglog_rel_residual
    )
    .unwrap();
    emit(&args.common.out, &s)
}

pub fn sector(args: &SectorArgs) -> Result<(), CliError> {
    check_samples(&args.common)?;
    let ctx = ctx_of(&args.common)?;
    let alpha = B::parse_decimal(&args.alpha, &ctx)?;
    let a = HpApproximant::new(args.p, alpha.clone(), args.k, &ctx)?;
    let n = args.common.samples;
    let (weighted, unweighted) = sector_error_scan(&a, &alpha, n)?;
    let alternations = sector_equioscillation(&a, &alpha, n)?.len();
    let eps = a.rel_error_bound();
    let bound = alpha.clone().max_of(eps.clone());

    let mut s = header("sector");
    writeln!(
        s,
        "# p={}, k={}, alpha={}, eps={}, precision_bits={}",
        a.p(),
        a.k(),
        num(&alpha, &ctx),
        num(&eps, &ctx),
        ctx.significand_bits()
    )
    .unwrap();
    writeln!(s, "# samples={}, seed={}", n, args.common.seed).unwrap();
    writeln!(
        s,
        "# unweighted_max={}, unweighted_argmax={}, weighted_max={}, weighted_argmax={}, weighted_bound={}, alternations={}",
        num(&unweighted.max_err, &ctx),
        num(&unweighted.arg_max, &ctx),
        num(&weighted.max_err, &ctx),
        num(&weighted.arg_max, &ctx),
        num(&bound, &ctx),
        alternations
    )
    .unwrap();
    s.push_str("r,abs_err\n");
    let g = a.sector(true);
    let width = B::one(&ctx) - alpha.clone();
    let last = B::from_i64(n as i64 - 1, &ctx);
    for i in 0..n {
        let r = alpha.clone() + width.clone() * B::from_i64(i as i64, &ctx) / last.clone();
        let e = (g.eval_ray(&r) - B::one(&ctx)).abs();
        writeln!(s, "{},{}", num(&r, &ctx), num(&e, &ctx)).unwrap();
    }
    emit(&args.common.out, &s)
}

pub fn matrix(args: &MatrixArgs) -> Result<(), CliError> {
    let ctx = ctx_of(&args.common)?;
    let (m, source) = match (&args.input, args.random) {
        (Some(path), _) => {
            let text = fs::read_to_string(path)?;
            (HpMatrix::parse(&text, &ctx)?, format!("file {}", path.display()))
        }
        (None, Some(n)) => {
            if n == 0 {
                return Err(CliError::Usage("--random needs a positive dimension".into()));
            }
            (random_spd::<B>(n, args.common.seed, &ctx).0, format!("random n={n}"))
        }
        (None, None) => return Err(CliError::Usage("give --input or --random".into())),
    };
    let n = m.n();
    let chosen = choose_alpha(args.p, Some(args.k), &args.mode, args.rel_tol, &ctx)?;
    let a = HpApproximant::new(args.p, chosen.alpha, chosen.k, &ctx)?;

    let (lambda, q) = jacobi_eigen(&m, &ctx)?;
    let slack = B::exp2i(-((ctx.significand_bits() / 2) as i32), &ctx) * B::from_i64(n as i64, &ctx);
    let (lo, hi) = (lambda[0].clone(), lambda[n - 1].clone());
    if lo < -slack.clone() || hi > B::one(&ctx) + slack.clone() {
        return Err(comprat::Error::Domain(format!(
            "spectrum [{:.6e}, {:.6e}] is not inside [0, 1]",
            lo.to_f64(),
            hi.to_f64()
        ))
        .into());
    }
    let f = matrix_proot(&a, &m, SpectrumCheck::Attested)?;

    let clamped: Vec<B> = lambda
        .iter()
        .map(|l| l.clone().max_of(B::zero(&ctx)).min_of(B::one(&ctx)))
        .collect();
    let f_of_eigs: Vec<B> = clamped.iter().map(|l| a.eval_f_scaled(l)).collect();
    let roots: Vec<B> = clamped.iter().map(|l| nth_root(l, a.p(), &ctx)).collect();
    let scalar_on_spectrum = f_of_eigs
        .iter()
        .zip(&roots)
        .fold(B::zero(&ctx), |m, (x, y)| m.max_of((x.clone() - y.clone()).abs()));
    let to_ftilde = f.max_abs_diff(&spectral_apply(&q, &f_of_eigs, &ctx), &ctx);
    let to_root = f.max_abs_diff(&spectral_apply(&q, &roots, &ctx), &ctx);
    let commutator = f.matmul(&m, &ctx).max_abs_diff(&m.matmul(&f, &ctx), &ctx);
    let bound = scalar_on_spectrum.clone() + slack.clone();

    let mut rep = header("matrix report");
    writeln!(
        rep,
        "p={}, k={}, alpha={}, eps={}, precision_bits={}",
        a.p(),
        a.k(),
        num(a.alpha0(), &ctx),
        num(&a.rel_error_bound(), &ctx),
        ctx.significand_bits()
    )
    .unwrap();
    writeln!(rep, "mode={}, source={}, n={}, seed={}", chosen.mode, source, n, args.common.seed).unwrap();
    writeln!(rep, "spectrum_min={}", num(&lo, &ctx)).unwrap();
    writeln!(rep, "spectrum_max={}", num(&hi, &ctx)).unwrap();
    writeln!(rep, "residual_vs_ftilde_of_spectrum={}", num(&to_ftilde, &ctx)).unwrap();
    writeln!(rep, "residual_vs_root={}", num(&to_root, &ctx)).unwrap();
    writeln!(rep, "scalar_max_err_on_spectrum={}", num(&scalar_on_spectrum, &ctx)).unwrap();
    writeln!(rep, "commutator_max={}", num(&commutator, &ctx)).unwrap();
    writeln!(rep, "within_bound={}", to_root <= bound).unwrap();

    let mut out = header("matrix");
    writeln!(
        out,
        "# p={}, k={}, alpha={}, precision_bits={}, source={}",
        a.p(),
        a.k(),
        num(a.alpha0(), &ctx),
        ctx.significand_bits(),
        source
    )
    .unwrap();
    out.push_str(&f.to_text(ctx.decimal_digits()));
    emit(&args.common.out, &out)?;
    match &args.report {
        Some(path) => write_file(path, &rep)?,
        None => eprint!("{rep}"),
    }
    Ok(())
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text)?;
    Ok(())
}
