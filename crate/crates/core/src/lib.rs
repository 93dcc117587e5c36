//! Composite rational approximants to `x^(1/p)` on `[0, 1]` and to the
//! p-sector function.
//!
//! The approximant is the scaled Newton-type recursion
//!
//! ```text
//! f_{j+1}(x) = ((p-1) mu_j f_j(x) + x / (mu_j^(p-1) f_j(x)^(p-1))) / p,   f_0 = 1
//! ```
//!
//! with `mu_j = mu(alpha_j)` and `alpha_{j+1} = H(alpha_j)`. After `k` steps it is a
//! rational function of type `(p^(k-1), p^(k-1) - 1)` built from only `O(pk)`
//! parameters, and its error on `[0, 1]` decays double-exponentially in `k`.
//!
//! All numerics are generic over [`Real`]; [`BigFloat`] (MPFR) is the
//! workhorse, `f64` works for quick looks at small `k`.

pub mod analysis;
pub mod composite;
pub mod error;
pub mod hpnum;
pub mod matfun;
pub mod sector;

pub use composite::{alpha_step, mu, Approximant, DomainRescaled, RationalForm};
pub use error::{Error, Result};
pub use hpnum::{nth_root, BigFloat, Complex, Poly, PrecisionCtx, Real};
pub use sector::SectorEvaluator;

/// Library version echoed into every CLI artifact.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Approximant over MPFR big floats.
pub type HpApproximant = Approximant<BigFloat>;
/// Approximant over native doubles.
pub type Approximant64 = Approximant<f64>;
/// Polynomial over MPFR big floats.
pub type HpPoly = Poly<BigFloat>;
/// Complex pair over MPFR big floats.
pub type HpComplex = Complex<BigFloat>;
/// Dense matrix over MPFR big floats.
pub type HpMatrix = matfun::DenseMatrix<BigFloat>;
