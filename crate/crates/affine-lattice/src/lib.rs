//! Exact lattice-point counting on rational polytopes and on compact spaces
//! built by gluing rational polytopes along integral affine maps.
//!
//! The library provides:
//!
//! - exact rational linear algebra and the group of integral affine maps
//!   `x ↦ Ax + b`, `A ∈ GL_n(ℤ)`, `b ∈ ℤⁿ` ([`arith`]);
//! - rational polytopes with facet descriptions, intersections, images under
//!   integral affine maps, and exact volume ([`polytope`]);
//! - enumeration and counting of the points of `m⁻¹ℤⁿ` in a polytope, and
//!   quasi-polynomial fits of the count function `L_P(m)` ([`lattice`],
//!   [`quasipoly`]);
//! - glued polytope complexes with two counting modes (union-find over
//!   identified points, and inclusion-exclusion over an overlap cover), and a
//!   checker for the identity `L_M(m) = vol(M)·mⁿ` ([`complex`]);
//! - a floating-point demonstration that for a smooth compactly supported
//!   bump `f`, the lattice sum `Σ_{x∈m⁻¹ℤⁿ} f(x)` approaches `mⁿ∫f` with
//!   rapidly decaying error ([`poisson`]).
//!
//! Everything outside [`poisson`] uses arbitrary-precision rational
//! arithmetic; counts and volumes are exact.

pub mod arith;
pub mod cli;
pub mod complex;
pub mod io;
pub mod lattice;
pub mod poisson;
pub mod polytope;
pub mod quasipoly;

pub use arith::{AffZMap, QVector, Rational, ZMatrix};
pub use complex::{AffineComplex, ComplexMode, Gluing, ManifoldPoint};

pub use lattice::{count, enumerate_points, ehrhart_fit, ehrhart_report};
pub use polytope::{HalfSpace, RationalPolytope};
pub use quasipoly::QuasiPolynomial;

/// Default cap on the ambient dimension for hull and vertex enumeration.
/// The brute-force facet machinery is exponential in the dimension.
pub const DEFAULT_DIM_CAP: usize = 4;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty point set")]
    EmptyPointSet,

    #[error("ambient dimension {dim} exceeds the cap {cap}")]
    DimCapExceeded { dim: usize, cap: usize },

    #[error("matrix is not unimodular (det must be +1 or -1)")]
    NotUnimodular,

    #[error("cannot parse rational {input:?}: {message}")]
    ParseRational { input: String, message: String },

    #[error("{context}: {source}")]
    Field {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("quasi-polynomial fit failed validation at m = {m}: predicted {predicted}, counted {counted}")]
    FitValidation {
        m: u64,
        predicted: String,
        counted: String,
    },

    #[error("complex failed validation:\n{0}")]
    InvalidComplex(String),

    #[error("gluing {gluing} maps the lattice point {point} outside m⁻¹ℤⁿ; input data is corrupted")]
    NonLatticeImage { gluing: usize, point: String },

    #[error("unknown builtin {0:?}; run `builtin list` for the available names")]
    UnknownBuiltin(String),

    #[error("quadrature did not converge within the resolution cap")]
    QuadratureDivergence,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Wraps an error with the path of the offending input field.
    pub fn in_field(self, context: impl Into<String>) -> Error {
        Error::Field {
            context: context.into(),
            source: Box::new(self),
        }
    }
}
