//! Orthogonal representations `ρ: G → O(n)` of permutation groups.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::group::{FiniteGroup, Subgroup, IDENTITY};
use crate::poly::{Polynomial, VectorField};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RepError {
    #[error("expected {expected} generator matrices, got {got}")]
    GeneratorCount { expected: usize, got: usize },
    #[error("generator matrix {index} is not square of size {dim}")]
    BadShape { index: usize, dim: usize },
    #[error("matrix for element {element} is not orthogonal (residual {residual:.3e})")]
    NotOrthogonal { element: usize, residual: f64 },
    #[error("not a homomorphism: ρ({a}·{b}) ≠ ρ({a})ρ({b}) (residual {residual:.3e})")]
    NotAHomomorphism { a: usize, b: usize, residual: f64 },
    #[error("stabilizer of {point:?} is not a subgroup; the point is too close to a fixed set for the tolerance")]
    StabilizerNotClosed { point: Vec<f64> },
}

/// One orthogonal matrix per group element, indexed like the group.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthRep {
    dim: usize,
    matrices: Vec<DMatrix<f64>>,
    tol: f64,
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a, &b| a.max(b.abs()))
}

fn orthogonality_residual(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    max_abs(&(m.transpose() * m - DMatrix::identity(n, n)))
}

/// Evaluates the generator matrices along the group's breadth-first words
/// and verifies orthogonality and the homomorphism property exhaustively.
pub fn build_representation(
    g: &FiniteGroup,
    dim: usize,
    generator_matrices: &[DMatrix<f64>],
    tol: f64,
) -> Result<OrthRep, RepError> {
    if generator_matrices.len() != g.generators().len() {
        return Err(RepError::GeneratorCount {
            expected: g.generators().len(),
            got: generator_matrices.len(),
        });
    }
    for (index, m) in generator_matrices.iter().enumerate() {
        if m.nrows() != dim || m.ncols() != dim {
            return Err(RepError::BadShape { index, dim });
        }
    }
    let mut matrices: Vec<DMatrix<f64>> = Vec::with_capacity(g.order());
    for i in 0..g.order() {
        let m = match g.word(i) {
            None => DMatrix::identity(dim, dim),
            Some((parent, gen)) => &matrices[parent] * &generator_matrices[gen],
        };
        matrices.push(m);
    }
    for (element, m) in matrices.iter().enumerate() {
        let residual = orthogonality_residual(m);
        if residual > tol {
            return Err(RepError::NotOrthogonal { element, residual });
        }
    }
    for a in 0..g.order() {
        for b in 0..g.order() {
            let residual = max_abs(&(&matrices[g.mul(a, b)] - &matrices[a] * &matrices[b]));
            if residual > 10.0 * tol {
                return Err(RepError::NotAHomomorphism { a, b, residual });
            }
        }
    }
    Ok(OrthRep { dim, matrices, tol })
}

/// 2D rotation by `2π/m`.
pub fn rotation_matrix(m: u32) -> DMatrix<f64> {
    let t = 2.0 * std::f64::consts::PI / m as f64;
    DMatrix::from_row_slice(2, 2, &[t.cos(), -t.sin(), t.sin(), t.cos()])
}

/// Reflection across the line spanned by `axis`: `2uuᵀ − I`.
pub fn reflection_matrix(axis: [f64; 2]) -> DMatrix<f64> {
    let norm = axis[0].hypot(axis[1]);
    let u = DVector::from_vec(vec![axis[0] / norm, axis[1] / norm]);
    &u * u.transpose() * 2.0 - DMatrix::identity(2, 2)
}

/// `(ℝⁿ)^H` with an orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedSubspace {
    pub basis: Vec<DVector<f64>>,
}

impl FixedSubspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Basis vectors as plain rows, for polynomial substitution.
    pub fn basis_rows(&self) -> Vec<Vec<f64>> {
        self.basis.iter().map(|b| b.iter().copied().collect()).collect()
    }

    /// `n × l` matrix whose columns are the basis vectors.
    pub fn matrix(&self, n: usize) -> DMatrix<f64> {
        if self.basis.is_empty() {
            return DMatrix::zeros(n, 0);
        }
        DMatrix::from_columns(&self.basis)
    }
}

impl OrthRep {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn matrix(&self, g: usize) -> &DMatrix<f64> {
        &self.matrices[g]
    }

    pub fn matrices(&self) -> &[DMatrix<f64>] {
        &self.matrices
    }

    pub fn order(&self) -> usize {
        self.matrices.len()
    }

    pub fn act(&self, g: usize, x: &[f64]) -> Vec<f64> {
        (&self.matrices[g] * DVector::from_column_slice(x))
            .iter()
            .copied()
            .collect()
    }

    /// Restriction to a subgroup built by `FiniteGroup::subgroup_as_group`.
    pub fn restrict(&self, embedding: &[usize]) -> OrthRep {
        OrthRep {
            dim: self.dim,
            matrices: embedding.iter().map(|&i| self.matrices[i].clone()).collect(),
            tol: self.tol,
        }
    }

    /// Elements acting as the identity.
    pub fn kernel(&self) -> Vec<usize> {
        let id = DMatrix::identity(self.dim, self.dim);
        (0..self.order())
            .filter(|&g| max_abs(&(&self.matrices[g] - &id)) <= 10.0 * self.tol)
            .collect()
    }

    pub fn is_faithful(&self) -> bool {
        self.kernel().len() == 1
    }

    /// Orthonormal basis of the common fixed space of `h`, by singular-value
    /// thresholding of the stacked system `(ρ(h) − I)x = 0`.
    pub fn fixed_subspace(&self, h: &Subgroup, rel: f64) -> FixedSubspace {
        let n = self.dim;
        let others: Vec<usize> = h.members().iter().copied().filter(|&e| e != IDENTITY).collect();
        if n == 0 {
            return FixedSubspace { basis: vec![] };
        }
        if others.is_empty() {
            return FixedSubspace {
                basis: (0..n).map(|i| DVector::from_fn(n, |j, _| if i == j { 1.0 } else { 0.0 })).collect(),
            };
        }
        // Pad to at least n rows so the thin SVD exposes all right singular vectors.
        let rows = (others.len() * n).max(n);
        let mut stacked = DMatrix::zeros(rows, n);
        let id = DMatrix::<f64>::identity(n, n);
        for (k, &e) in others.iter().enumerate() {
            let block = &self.matrices[e] - &id;
            stacked.view_mut((k * n, 0), (n, n)).copy_from(&block);
        }
        let svd = stacked.svd(false, true);
        let v_t = svd.v_t.expect("requested right singular vectors");
        let smax = svd.singular_values.max();
        let null: Vec<DVector<f64>> = svd
            .singular_values
            .iter()
            .enumerate()
            .filter(|(_, &s)| s <= rel * smax)
            .map(|(i, _)| v_t.row(i).transpose())
            .collect();
        FixedSubspace {
            basis: canonical_basis(&null, n),
        }
    }

    /// `{g : |ρ(g)x − x| <= tol · max(1, |x|)}`, verified to be a subgroup.
    pub fn stabilizer(&self, group: &FiniteGroup, x: &[f64], tol: f64) -> Result<Subgroup, RepError> {
        let xv = DVector::from_column_slice(x);
        let cut = tol * xv.norm().max(1.0);
        let members: Vec<usize> = (0..self.order())
            .filter(|&g| (&self.matrices[g] * &xv - &xv).norm() <= cut)
            .collect();
        if !group.is_subgroup(&members) {
            return Err(RepError::StabilizerNotClosed { point: x.to_vec() });
        }
        Ok(Subgroup::from_members(members))
    }
}

/// Canonical orthonormal basis of `span(vectors)`: Gram–Schmidt on the
/// projections of the standard basis vectors, first nonzero coordinate
/// positive.
fn canonical_basis(vectors: &[DVector<f64>], n: usize) -> Vec<DVector<f64>> {
    if vectors.is_empty() {
        return vec![];
    }
    let span = DMatrix::from_columns(vectors);
    let projector = &span * span.transpose();
    let mut basis: Vec<DVector<f64>> = Vec::new();
    for i in 0..n {
        if basis.len() == vectors.len() {
            break;
        }
        let mut u = projector.column(i).into_owned();
        for b in &basis {
            u -= b * b.dot(&u);
        }
        let norm = u.norm();
        if norm > 1e-6 {
            u /= norm;
            if let Some(first) = u.iter().find(|c| c.abs() > 1e-12) {
                if *first < 0.0 {
                    u = -u;
                }
            }
            basis.push(u);
        }
    }
    basis
}

/// Matrix rows as nested vectors.
pub fn rows_of(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| m.row(i).iter().copied().collect())
        .collect()
}

/// Result of an invariance check.
#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceReport {
    pub pass: bool,
    pub worst_residual: f64,
    /// The element realizing the worst residual.
    pub worst_element: usize,
}

fn finish(worst: (f64, usize), scale: f64, rel: f64) -> InvarianceReport {
    InvarianceReport {
        pass: worst.0 <= rel * scale.max(f64::MIN_POSITIVE),
        worst_residual: worst.0,
        worst_element: worst.1,
    }
}

/// Compares `Q∘ρ(g)` with `Q` coefficientwise for every `g`.
pub fn check_polynomial_invariance(rep: &OrthRep, q: &Polynomial<f64>, rel: f64) -> InvarianceReport {
    let mut worst = (0.0, IDENTITY);
    for g in 0..rep.order() {
        let moved = q
            .compose_linear(&rows_of(rep.matrix(g)), 1e-14)
            .expect("representation dimension matches the polynomial");
        let r = moved.max_coeff_diff(q);
        if r > worst.0 {
            worst = (r, g);
        }
    }
    finish(worst, q.max_abs_coeff(), rel)
}

/// Compares `ρ(g)·v(ρ(g)⁻¹ x)` with `v(x)` coefficientwise for every `g`.
pub fn check_field_invariance(rep: &OrthRep, v: &VectorField<f64>, rel: f64) -> InvarianceReport {
    let n = v.dim();
    let mut worst = (0.0, IDENTITY);
    for g in 0..rep.order() {
        let m = rep.matrix(g);
        let back = rows_of(&m.transpose());
        let pulled: Vec<Polynomial<f64>> = v
            .components()
            .iter()
            .map(|c| c.compose_linear(&back, 1e-14).expect("dimension matches"))
            .collect();
        for i in 0..n {
            let mut w = Polynomial::zero(n);
            for (j, pj) in pulled.iter().enumerate() {
                w = &w + &pj.scale(m[(i, j)]);
            }
            let r = w.max_coeff_diff(&v.components()[i]);
            if r > worst.0 {
                worst = (r, g);
            }
        }
    }
    finish(worst, v.max_abs_coeff(), rel)
}
