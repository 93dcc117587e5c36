//! The composite recursion with a symmetric matrix argument.
//!
//! `F_{j+1} = lin_j F_j + inv_j M F_j^(-(p-1))`, `F_0 = I`. Every iterate is a
//! rational function of `M`, so they all commute with `M` and with each other.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::composite::Approximant;
use crate::error::{Error, Result};
use crate::hpnum::{PrecisionCtx, Real};

/// Square matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> DenseMatrix<T> {
    pub fn new(n: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::Domain(format!(
                "a {n}x{n} matrix needs {} entries, got {}",
                n * n,
                data.len()
            )));
        }
        Ok(Self { n, data })
    }

    pub fn zeros(n: usize, ctx: &PrecisionCtx) -> Self {
        Self {
            n,
            data: vec![T::zero(ctx); n * n],
        }
    }

    pub fn identity(n: usize, ctx: &PrecisionCtx) -> Self {
        Self::from_diag(&vec![T::one(ctx); n], ctx)
    }

    pub fn from_diag(d: &[T], ctx: &PrecisionCtx) -> Self {
        let mut m = Self::zeros(d.len(), ctx);
        for (i, v) in d.iter().enumerate() {
            m[(i, i)] = v.clone();
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn diag(&self) -> Vec<T> {
        (0..self.n).map(|i| self[(i, i)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(self[(j, i)].clone());
            }
        }
        Self { n, data }
    }

    pub fn matmul(&self, other: &Self, ctx: &PrecisionCtx) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        let mut out = Self::zeros(n, ctx);
        for i in 0..n {
            for l in 0..n {
                let a = &self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = a.clone() * other[(l, j)].clone();
                    out[(i, j)] += v;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.clone() - b.clone())
    }

    pub fn scale(&self, s: &T) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|v| v.clone() * s.clone()).collect(),
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    /// `max |a_ij|`.
    pub fn max_abs(&self, ctx: &PrecisionCtx) -> T {
        self.data.iter().fold(T::zero(ctx), |m, v| m.max_of(v.abs()))
    }

    /// `max |a_ij - b_ij|`.
    pub fn max_abs_diff(&self, other: &Self, ctx: &PrecisionCtx) -> T {
        self.sub(other).max_abs(ctx)
    }

    /// `(A + A^T) / 2`.
    pub fn symmetrized(&self, ctx: &PrecisionCtx) -> Self {
        let half = T::from_ratio(1, 2, ctx);
        self.add(&self.transpose()).scale(&half)
    }

    /// `|a_ij - a_ji| <= tol * max |a|` for all entries.
    pub fn is_symmetric(&self, tol: &T, ctx: &PrecisionCtx) -> bool {
        let bound = tol.clone() * self.max_abs(ctx);
        (0..self.n).all(|i| (0..i).all(|j| (self[(i, j)].clone() - self[(j, i)].clone()).abs() <= bound))
    }

    /// Interval containing every Gershgorin disc center +- radius.
    pub fn gershgorin_bounds(&self, ctx: &PrecisionCtx) -> (T, T) {
        let mut lo: Option<T> = None;
        let mut hi: Option<T> = None;
        for i in 0..self.n {
            let r = (0..self.n)
                .filter(|&j| j != i)
                .fold(T::zero(ctx), |s, j| s + self[(i, j)].abs());
            let c = self[(i, i)].clone();
            let l = c.clone() - r.clone();
            let h = c + r;
            lo = Some(lo.map_or(l.clone(), |v| v.min_of(l)));
            hi = Some(hi.map_or(h.clone(), |v| v.max_of(h)));
        }
        (lo.unwrap_or_else(|| T::zero(ctx)), hi.unwrap_or_else(|| T::zero(ctx)))
    }

    /// Text form: `n` on the first line, then one row per line.
    pub fn to_text(&self, digits: usize) -> String {
        let mut s = String::new();
        writeln!(s, "{}", self.n).unwrap();
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self[(i, j)].to_decimal(digits)).collect();
            writeln!(s, "{}", row.join(" ")).unwrap();
        }
        s
    }

    /// Parses the format written by [`DenseMatrix::to_text`]. Blank lines and
    /// lines starting with `#` are skipped.
    pub fn parse(text: &str, ctx: &PrecisionCtx) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let head = lines.next().ok_or_else(|| Error::Parse("empty matrix file".into()))?;
        let n: usize = head
            .parse()
            .map_err(|_| Error::Parse(format!("first line must be the dimension, got {head:?}")))?;
        if n == 0 {
            return Err(Error::Parse("matrix dimension must be positive".into()));
        }
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("expected {n} rows, found {i}")))?;
            let row: Vec<&str> = line.split_whitespace().collect();
            if row.len() != n {
                return Err(Error::Parse(format!(
                    "row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            for tok in row {
                data.push(T::parse_decimal(tok, ctx)?);
            }
        }
        if let Some(extra) = lines.next() {
            return Err(Error::Parse(format!("unexpected trailing line {extra:?}")));
        }
        Self::new(n, data)
    }
}

impl<T> std::ops::Index<(usize, usize)> for DenseMatrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.n + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for DenseMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.n + j]
    }
}

/// LU factorization with partial pivoting, `P A = L U`.
#[derive(Clone, Debug)]
pub struct Lu<T> {
    lu: DenseMatrix<T>,
    perm: Vec<usize>,
}

impl<T: Real> Lu<T> {
    /// Fails when a pivot is at most `n 2^-bits max|A|`.
    pub fn factor(a: &DenseMatrix<T>, ctx: &PrecisionCtx) -> Result<Self> {
        let n = a.n;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let tiny = T::unit_roundoff(ctx) * T::from_i64(n as i64, ctx) * a.max_abs(ctx);
        for col in 0..n {
            let mut piv = col;
            for r in col + 1..n {
                if lu[(r, col)].abs() > lu[(piv, col)].abs() {
                    piv = r;
                }
            }
            if lu[(piv, col)].abs() <= tiny {
                return Err(Error::SolveFailure(format!(
                    "matrix is numerically singular at column {col}"
                )));
            }
            if piv != col {
                for j in 0..n {
                    lu.data.swap(piv * n + j, col * n + j);
                }
                perm.swap(piv, col);
            }
            let d = lu[(col, col)].clone();
            for r in col + 1..n {
                let m = lu[(r, col)].clone() / d.clone();
                for j in col + 1..n {
                    let v = m.clone() * lu[(col, j)].clone();
                    lu[(r, j)] -= v;
                }
                lu[(r, col)] = m;
            }
        }
        Ok(Self { lu, perm })
    }

    /// Solves `A X = B` column by column.
    pub fn solve(&self, b: &DenseMatrix<T>, ctx: &PrecisionCtx) -> DenseMatrix<T> {
        let n = self.lu.n;
        let mut x = DenseMatrix::zeros(n, ctx);
        for c in 0..n {
            let mut y: Vec<T> = self.perm.iter().map(|&r| b[(r, c)].clone()).collect();
            for i in 0..n {
                for j in 0..i {
                    let v = self.lu[(i, j)].clone() * y[j].clone();
                    y[i] -= v;
                }
            }
            for i in (0..n).rev() {
                for j in i + 1..n {
                    let v = self.lu[(i, j)].clone() * y[j].clone();
                    y[i] -= v;
                }
                y[i] = y[i].clone() / self.lu[(i, i)].clone();
            }
            for (i, v) in y.into_iter().enumerate() {
                x[(i, c)] = v;
            }
        }
        x
    }
}

/// How the caller vouches for the spectrum lying in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectrumCheck {
    /// Require the Gershgorin discs to sit inside `[0, 1]` (up to roundoff).
    Gershgorin,
    /// Trust the caller.
    Attested,
}

/// `ftilde_k(M)`, the scaled approximant applied to a symmetric matrix with
/// spectrum in `[0, 1]`.
///
/// `F^(-(p-1)) M` is formed by `p - 1` solves against an LU of the current
/// iterate; each iterate is symmetrized to stop drift.
pub fn matrix_proot<T: Real>(
    a: &Approximant<T>,
    m: &DenseMatrix<T>,
    check: SpectrumCheck,
) -> Result<DenseMatrix<T>> {
    let ctx = a.ctx();
    let n = m.n();
    let m = DenseMatrix {
        n,
        data: m.data.iter().map(|v| v.clone().with_ctx(ctx)).collect(),
    };
    let half_bits = (T::working_bits(ctx) / 2) as i32;
    let tol = T::exp2i(-half_bits, ctx) * T::from_i64(n.max(1) as i64, ctx);
    if !m.is_symmetric(&tol, ctx) {
        return Err(Error::Domain("matrix is not symmetric".into()));
    }
    if check == SpectrumCheck::Gershgorin {
        let (lo, hi) = m.gershgorin_bounds(ctx);
        if lo < -tol.clone() || hi > T::one(ctx) + tol {
            return Err(Error::Domain(format!(
                "Gershgorin bounds [{:.3e}, {:.3e}] leave [0, 1]",
                lo.to_f64(),
                hi.to_f64()
            )));
        }
    }
    let mut f = DenseMatrix::identity(n, ctx);
    for step in a.steps() {
        let lu = Lu::factor(&f, ctx)?;
        let mut x = m.clone();
        for _ in 1..step.p {
            x = lu.solve(&x, ctx);
        }
        f = f.scale(&step.lin).add(&x.scale(&step.inv)).symmetrized(ctx);
    }
    Ok(f.scale(a.scale()))
}

/// Symmetric eigendecomposition `M = Q diag(lambda) Q^T` by cyclic Jacobi sweeps.
///
/// Eigenvalues come back in ascending order with matching columns of `Q`.
pub fn jacobi_eigen<T: Real>(m: &DenseMatrix<T>, ctx: &PrecisionCtx) -> Result<(Vec<T>, DenseMatrix<T>)> {
    const MAX_SWEEPS: usize = 60;
    let n = m.n();
    let mut a = m.symmetrized(ctx);
    let mut v = DenseMatrix::<T>::identity(n, ctx);
    let scale = a.max_abs(ctx);
    let tol = T::unit_roundoff(ctx) * T::exp2i(8, ctx) * T::from_i64(n.max(1) as i64, ctx) * scale.clone();
    let two = T::from_i64(2, ctx);
    let one = T::one(ctx);
    let mut converged = n < 2 || scale.is_zero();
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let off = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .fold(T::zero(ctx), |s, (i, j)| s.max_of(a[(i, j)].abs()));
        if off <= tol {
            converged = true;
            break;
        }
        for pp in 0..n {
            for q in pp + 1..n {
                let apq = a[(pp, q)].clone();
                if apq.abs() <= T::unit_roundoff(ctx) * scale.clone() {
                    continue;
                }
                let theta = (a[(q, q)].clone() - a[(pp, pp)].clone()) / (two.clone() * apq.clone());
                let sign = if theta.is_sign_negative() { -one.clone() } else { one.clone() };
                let t = sign / (theta.abs() + (theta.clone() * theta.clone() + one.clone()).sqrt());
                let c = one.clone() / (t.clone() * t.clone() + one.clone()).sqrt();
                let s = t.clone() * c.clone();
                for k in 0..n {
                    let akp = a[(k, pp)].clone();
                    let akq = a[(k, q)].clone();
                    a[(k, pp)] = c.clone() * akp.clone() - s.clone() * akq.clone();
                    a[(k, q)] = s.clone() * akp + c.clone() * akq;
                }
                for k in 0..n {
                    let apk = a[(pp, k)].clone();
                    let aqk = a[(q, k)].clone();
                    a[(pp, k)] = c.clone() * apk.clone() - s.clone() * aqk.clone();
                    a[(q, k)] = s.clone() * apk + c.clone() * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, pp)].clone();
                    let vkq = v[(k, q)].clone();
                    v[(k, pp)] = c.clone() * vkp.clone() - s.clone() * vkq.clone();
                    v[(k, q)] = s.clone() * vkp + c.clone() * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NonConvergence(format!("Jacobi did not converge in {MAX_SWEEPS} sweeps")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].partial_cmp(&a[(j, j)]).unwrap_or(std::cmp::Ordering::Equal));
    let lambda = order.iter().map(|&i| a[(i, i)].clone()).collect();
    let mut q = DenseMatrix::zeros(n, ctx);
    for (c, &src) in order.iter().enumerate() {
        for r in 0..n {
            q[(r, c)] = v[(r, src)].clone();
        }
    }
    Ok((lambda, q))
}

/// `Q diag(d) Q^T`.
pub fn spectral_apply<T: Real>(q: &DenseMatrix<T>, d: &[T], ctx: &PrecisionCtx) -> DenseMatrix<T> {
    let qd = q.matmul(&DenseMatrix::from_diag(d, ctx), ctx);
    qd.matmul(&q.transpose(), ctx).symmetrized(ctx)
}

/// A random symmetric matrix `Q diag(lambda) Q^T` with `lambda` uniform in
/// `[0, 1]` and `Q` orthogonal, both drawn from a seeded ChaCha stream.
pub fn random_spd<T: Real>(
    n: usize,
    seed: u64,
    ctx: &PrecisionCtx,
) -> (DenseMatrix<T>, DenseMatrix<T>, Vec<T>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lambda: Vec<T> = (0..n).map(|_| T::from_f64(rng.gen_range(0.0..=1.0), ctx)).collect();
    let mut g = DenseMatrix::zeros(n, ctx);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = T::from_f64(rng.gen_range(-1.0..1.0), ctx);
        }
    }
    let q = orthonormalize_columns(&g, ctx);
    let m = spectral_apply(&q, &lambda, ctx);
    (m, q, lambda)
}

// Modified Gram-Schmidt, run twice for full working-precision orthogonality.
fn orthonormalize_columns<T: Real>(g: &DenseMatrix<T>, ctx: &PrecisionCtx) -> DenseMatrix<T> {
    let n = g.n();
    let mut q = g.clone();
    for _ in 0..2 {
        for c in 0..n {
            for prev in 0..c {
                let dot = (0..n).fold(T::zero(ctx), |s, r| s + q[(r, c)].clone() * q[(r, prev)].clone());
                for r in 0..n {
                    let v = dot.clone() * q[(r, prev)].clone();
                    q[(r, c)] -= v;
                }
            }
            let norm = (0..n)
                .fold(T::zero(ctx), |s, r| s + q[(r, c)].clone() * q[(r, c)].clone())
                .sqrt();
            for r in 0..n {
                q[(r, c)] = q[(r, c)].clone() / norm.clone();
            }
        }
    }
    q
}
