//! Equivariant indices of invariant polynomial vector fields on compact
//! planar domains `X_Q = {Q >= 0}`.
//!
//! The crate computes the index of a field `v` invariant under a finite
//! group `G` acting orthogonally on `ℝⁿ` (`n <= 2`) as an element of the
//! Burnside ring `A(G)`, in two independent ways:
//!
//! * locally, from the Jacobians at the zeros, induced up from stabilizers;
//! * globally, from the Euler characteristics of the boundary strata where
//!   `v` points inward and where it is tangent to the boundary, measured on
//!   every fixed set `X^H`.
//!
//! It also checks lattice-point bounds on the per-fixed-set indices and
//! the Gauss-map degree identity for nonvanishing invariant fields.
//!
//! Polynomial arithmetic is generic over [`Scalar`] (`f32`/`f64`); the
//! numerical topology runs in `f64`, whose tolerances sit far below `f32`
//! resolution. Burnside-ring arithmetic is exact in `i64`.

pub mod burnside;
pub mod config;
pub mod gauss;
pub mod group;
pub mod khovanskii;
pub mod morse;
pub mod poly;
pub mod representation;
pub mod scalar;

pub use burnside::{BurnsideElement, BurnsideError, BurnsideRing, CharacterVector};
pub use config::Tolerances;
pub use group::{FiniteGroup, GroupError, MarksTable, Permutation, Subgroup, SubgroupClass};
pub use representation::{FixedSubspace, OrthRep, RepError};
pub use scalar::Scalar;

/// Double-precision polynomial, the one the pipeline runs on.
pub type Poly = poly::Polynomial<f64>;
/// Single-precision polynomial.
pub type Poly32 = poly::Polynomial<f32>;
pub type VectorField = poly::VectorField<f64>;
pub type VectorField32 = poly::VectorField<f32>;
pub type Domain = poly::Domain<f64>;
pub type Domain32 = poly::Domain<f32>;
