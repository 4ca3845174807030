//! Boundary stratification, zeros and the two routes to the equivariant
//! index.
//!
//! For an invariant field `v` on `X = {Q >= 0}` the boundary splits into the
//! part where `v` points inward (`h = <v, ∇Q> > 0`, since `∇Q` is the
//! inward normal), the part where it points outward, and the tangency
//! points `h = 0`; a tangency is "plus" when `v` points into the inward
//! part, i.e. `<∇h, v> > 0`. The alternating sum of the Euler
//! characteristics of these strata, measured on each fixed set `X^H`, gives
//! the characters of the equivariant index; the same element is assembled
//! independently from the Jacobians at the zeros.

mod boundary;
mod index;
mod strata;
mod verify;
mod zeros;

use nalgebra::DMatrix;
use thiserror::Error;

use crate::burnside::{BurnsideError, BurnsideRing};
use crate::config::Tolerances;
use crate::poly::{PolyError, Polynomial};
use crate::representation::{check_field_invariance, check_polynomial_invariance, FixedSubspace, OrthRep, RepError};
use crate::{Domain, VectorField};

pub use boundary::{domain_euler, loop_winding, trace_boundary, BoundaryLoop};
pub use index::{index_via_strata, ClassStrata, StrataIndex};
pub use strata::{compute_strata, line_strata, strata_1d, Arc, Endpoint1d, Stratification, Strata1d, StrataChi, TangencyPoint};
pub use verify::{verify_identities, Check, IndexReport, CHECK_NAMES};
pub use zeros::{assemble_index_local, find_zeros, local_equivariant_degree, LocalDegree, Orbit, ZeroPoint};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MorseError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("{what} is not invariant: residual {residual:.3e} at group element {element}")]
    NotInvariant { what: String, element: usize, residual: f64 },
    #[error("stratification supports n <= 2 (boundary tracing needs n = 2), got n = {0}")]
    UnsupportedDimension(usize),
    #[error("boundary contour did not close near ({:.6}, {:.6}); grid too coarse", at[0], at[1])]
    OpenContour { at: [f64; 2] },
    #[error("boundary Q = 0 is not smooth near ({:.6}, {:.6}): |grad Q| = {grad:.3e}", at[0], at[1])]
    SingularBoundary { at: [f64; 2], grad: f64 },
    #[error("turning integral {value:.4} of boundary loop {loop_index} is not an integer")]
    NonIntegerTurning { loop_index: usize, value: f64 },
    #[error("genericity violated: degenerate tangency at ({:.6}, {:.6}), derivative of <v, grad Q> along v is {derivative:.3e}", at[0], at[1])]
    GenericityFailure { at: [f64; 2], derivative: f64 },
    #[error("field vanishes on the boundary near {at:?} (|v| = {norm:.3e})")]
    BoundaryZero { at: Vec<f64>, norm: f64 },
    #[error("field vanishes at the endpoint {at:?} of a fixed interval")]
    EndpointZero { at: Vec<f64> },
    #[error("non-degeneracy violated: zero at {at:?} is not simple (det J = {det:.3e})")]
    DegenerateZero { at: Vec<f64>, det: f64 },
    #[error("non-degeneracy violated: zero at {at:?} lies on the boundary Q = 0 (Q = {q:.3e})")]
    ZeroOnBoundary { at: Vec<f64>, q: f64 },
    #[error("zero at {at:?} is degenerate on the fixed space of class {class} (det = {det:.3e})")]
    RestrictedDegenerate { at: Vec<f64>, class: usize, det: f64 },
    #[error("orbit of the zero at {at:?} is inconsistent: {detail}")]
    OrbitInconsistent { at: Vec<f64>, detail: String },
    #[error("the origin lies on the boundary (Q(0) = {q:.3e}); point fixed sets are degenerate")]
    OriginOnBoundary { q: f64 },
    #[error("internal inconsistency in {stage}: {source}")]
    Inconsistent { stage: String, source: BurnsideError },
}

impl MorseError {
    /// Name of the violated input hypothesis, for refusals. `None` for
    /// internal inconsistencies.
    pub fn hypothesis(&self) -> Option<&'static str> {
        use MorseError::*;
        Some(match self {
            Poly(PolyError::NotCompact { .. }) => "compact domain",
            Poly(_) | DimensionMismatch(_) | UnsupportedDimension(_) => "well-formed input",
            Rep(_) => "orthogonal representation",
            NotInvariant { .. } => "invariance of Q and v",
            OpenContour { .. } | NonIntegerTurning { .. } => "resolvable boundary",
            SingularBoundary { .. } => "smooth boundary",
            GenericityFailure { .. } => "genericity of v along the boundary",
            BoundaryZero { .. } | EndpointZero { .. } | ZeroOnBoundary { .. } => "no zeros of v on the boundary",
            DegenerateZero { .. } | RestrictedDegenerate { .. } => "simple zeros",
            OriginOnBoundary { .. } => "origin off the boundary",
            OrbitInconsistent { .. } | Inconsistent { .. } => return None,
        })
    }
}

/// Characteristic magnitudes that the relative floors multiply.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scales {
    pub q: f64,
    pub v: f64,
    pub radius: f64,
}

/// A validated problem: group, representation, invariant field and domain,
/// with the derived polynomials used throughout.
#[derive(Debug, Clone)]
pub struct Problem {
    pub ring: BurnsideRing,
    pub rep: OrthRep,
    pub field: VectorField,
    pub domain: Domain,
    pub tol: Tolerances,
    /// Fixed subspace of each class representative, in class order.
    pub fixed: Vec<FixedSubspace>,
    pub scales: Scales,
    pub(crate) grad_q: Vec<Polynomial<f64>>,
    /// `h = <v, ∇Q>`.
    pub(crate) h: Polynomial<f64>,
    pub(crate) grad_h: Vec<Polynomial<f64>>,
    pub(crate) jac: Vec<Vec<Polynomial<f64>>>,
}

impl Problem {
    /// Checks dimensions and the invariance of `Q` and `v`.
    pub fn new(
        ring: BurnsideRing,
        rep: OrthRep,
        field: VectorField,
        domain: Domain,
        tol: Tolerances,
    ) -> Result<Self, MorseError> {
        let n = rep.dim();
        if field.dim() != n || domain.dim() != n {
            return Err(MorseError::DimensionMismatch(format!(
                "representation n = {n}, field n = {}, domain n = {}",
                field.dim(),
                domain.dim()
            )));
        }
        if n == 0 || n > 2 {
            return Err(MorseError::UnsupportedDimension(n));
        }
        if rep.order() != ring.group.order() {
            return Err(MorseError::DimensionMismatch("representation and group orders differ".into()));
        }
        let qi = check_polynomial_invariance(&rep, domain.q(), tol.invariance_rel);
        if !qi.pass {
            return Err(MorseError::NotInvariant {
                what: "Q".into(),
                element: qi.worst_element,
                residual: qi.worst_residual,
            });
        }
        let vi = check_field_invariance(&rep, &field, tol.invariance_rel);
        if !vi.pass {
            return Err(MorseError::NotInvariant {
                what: "v".into(),
                element: vi.worst_element,
                residual: vi.worst_residual,
            });
        }
        let fixed = ring
            .table
            .classes
            .iter()
            .map(|c| rep.fixed_subspace(&c.representative, tol.fixed_space_rel))
            .collect();
        let q = domain.q();
        let grad_q = q.gradient();
        let mut h = Polynomial::zero(n);
        for (p, g) in field.components().iter().zip(&grad_q) {
            h = &h + &(p * g);
        }
        let grad_h = h.gradient();
        let jac = field.jacobian_polys();
        let scales = Scales {
            q: positive_or_one(q.max_abs_coeff()),
            v: positive_or_one(field.max_abs_coeff()),
            radius: domain.bounding_radius(),
        };
        Ok(Problem {
            ring,
            rep,
            field,
            domain,
            tol,
            fixed,
            scales,
            grad_q,
            h,
            grad_h,
            jac,
        })
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    /// Same group and domain, different field (re-validated).
    pub fn with_field(&self, field: VectorField) -> Result<Self, MorseError> {
        Problem::new(self.ring.clone(), self.rep.clone(), field, self.domain.clone(), self.tol.clone())
    }

    pub fn with_tolerances(&self, tol: Tolerances) -> Result<Self, MorseError> {
        Problem::new(self.ring.clone(), self.rep.clone(), self.field.clone(), self.domain.clone(), tol)
    }

    pub(crate) fn q_at(&self, x: &[f64]) -> f64 {
        self.domain.q().eval(x)
    }

    pub(crate) fn grad_q_at(&self, x: &[f64]) -> Vec<f64> {
        self.grad_q.iter().map(|g| g.eval(x)).collect()
    }

    pub(crate) fn v_at(&self, x: &[f64]) -> Vec<f64> {
        self.field.eval(x)
    }

    pub(crate) fn h_at(&self, x: &[f64]) -> f64 {
        self.h.eval(x)
    }

    /// `<∇h, v>` at `x`.
    pub(crate) fn dvh_at(&self, x: &[f64]) -> f64 {
        let v = self.v_at(x);
        self.grad_h.iter().zip(&v).map(|(g, vi)| g.eval(x) * vi).sum()
    }

    pub(crate) fn jacobian_at(&self, x: &[f64]) -> DMatrix<f64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |i, j| self.jac[i][j].eval(x))
    }

    /// Projects `x` onto `Q = 0` by Newton steps along the gradient.
    pub(crate) fn polish_to_boundary(&self, x: &[f64]) -> Result<Vec<f64>, MorseError> {
        let mut p = x.to_vec();
        let target = self.tol.boundary_polish * self.scales.q;
        for _ in 0..60 {
            let q = self.q_at(&p);
            let g = self.grad_q_at(&p);
            let g2: f64 = g.iter().map(|c| c * c).sum();
            if g2.sqrt() < self.tol.singular_boundary * self.scales.q {
                let at = [p[0], p.get(1).copied().unwrap_or(0.0)];
                return Err(MorseError::SingularBoundary { at, grad: g2.sqrt() });
            }
            if q.abs() <= target {
                break;
            }
            for (pi, gi) in p.iter_mut().zip(&g) {
                *pi -= q * gi / g2;
            }
        }
        Ok(p)
    }
}

fn positive_or_one(x: f64) -> f64 {
    if x > 0.0 && x.is_finite() {
        x
    } else {
        1.0
    }
}

/// Averages a field over the group: `(1/|G|) Σ_g ρ(g)·w(ρ(g)⁻¹ x)`. The
/// result is invariant for any input `w`.
pub fn symmetrize_field(rep: &OrthRep, w: &VectorField) -> VectorField {
    let n = w.dim();
    let mut acc: Vec<Polynomial<f64>> = vec![Polynomial::zero(n); n];
    let weight = 1.0 / rep.order() as f64;
    for g in 0..rep.order() {
        let m = rep.matrix(g);
        let back = crate::representation::rows_of(&m.transpose());
        let pulled: Vec<Polynomial<f64>> = w
            .components()
            .iter()
            .map(|c| c.compose_linear(&back, 0.0).expect("dimension matches"))
            .collect();
        for (i, slot) in acc.iter_mut().enumerate() {
            for (j, pj) in pulled.iter().enumerate() {
                *slot = &*slot + &pj.scale(m[(i, j)] * weight);
            }
        }
    }
    let acc = acc.into_iter().map(|p| p.pruned(1e-14)).collect();
    VectorField::new(acc, Some(w.degree_bounds().to_vec())).expect("degrees do not grow under linear substitution")
}

#[cfg(test)]
mod tests;
