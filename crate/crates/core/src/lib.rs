//! Constructive normalization of hypersurface singularities in equal
//! characteristic `p > 0`.
//!
//! Given a squarefree hypersurface `f = f_1 ... f_r` in a power series ring
//! `k[[X_1, ..., X_{d+1}]]` over `k = F_p` or `k = F_p(t)`, this crate finds a
//! change of variables (shears `X_j -> X_j + X_1^n`) and a change of
//! coefficient field (twists `t -> t + delta*X_1`) after which the module-
//! finite extension `k[[X_2, ..., X_{d+1}]] -> k[[X]]/(f_i)` is generically
//! separable, and it emits per-factor separability certificates that can be
//! checked independently.
//!
//! Modules:
//! - [`fields`]: exact arithmetic in `F_p` and `F_p(t)` with p-th roots and
//!   p^e-basis decompositions.
//! - [`series`]: sparse truncated multivariate power series.
//! - [`weierstrass`]: Weierstrass preparation and division with remainder
//!   against a distinguished polynomial.
//! - [`normalize`]: the normalization driver, transformation log, and
//!   certificates.
//! - [`oracle`]: naive dense reference implementations used by the test
//!   suites.

pub mod fields;
pub mod normalize;
pub mod oracle;
pub mod series;
pub mod weierstrass;

pub use fields::{FieldDescriptor, FieldElem, FieldError, FieldKind};
pub use normalize::{
    certify_factor, replay, run, Config, DerivativeWitness, Diagnostics, HypersurfaceInput, Move,
    NormalizationResult, NormalizeError, SeparabilityCertificate, TransformationLog,
};
pub use series::{parse_series, ExpVec, SeriesError, SeriesRing, TruncatedSeries};
pub use weierstrass::{
    prepare, reduce_mod, weierstrass_order, DistinguishedPoly, WeierstrassError,
    WeierstrassFactorization,
};
