use nalgebra::{DMatrix, DVector};

use super::{MorseError, Problem};
use crate::burnside::{BurnsideElement, BurnsideRing};
use crate::group::Subgroup;

/// A simple zero of `v` in the interior of `X`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroPoint {
    pub location: Vec<f64>,
    pub jacobian: DMatrix<f64>,
    pub det: f64,
    pub q_value: f64,
    pub stabilizer: Subgroup,
    /// Conjugacy class of the stabilizer.
    pub stabilizer_class: usize,
}

impl ZeroPoint {
    pub fn sign(&self) -> i64 {
        if self.det > 0.0 {
            1
        } else {
            -1
        }
    }
}

fn newton(problem: &Problem, seed: &[f64]) -> Option<Vec<f64>> {
    let r = problem.scales.radius;
    let target = problem.tol.zero_residual * problem.scales.v;
    let mut x = DVector::from_column_slice(seed);
    let mut extra = 0;
    for _ in 0..80 {
        let v = DVector::from_vec(problem.v_at(x.as_slice()));
        if v.norm() <= target {
            extra += 1;
            if extra > 2 {
                return Some(x.as_slice().to_vec());
            }
        }
        let j = problem.jacobian_at(x.as_slice());
        let step = j.lu().solve(&v)?;
        if !step.iter().all(|c| c.is_finite()) {
            return None;
        }
        x -= step;
        if x.norm() > 4.0 * r {
            return None;
        }
    }
    let v = DVector::from_vec(problem.v_at(x.as_slice()));
    (v.norm() <= target).then(|| x.as_slice().to_vec())
}

fn seeds(problem: &Problem, per_side: usize, per_line: usize) -> Vec<Vec<f64>> {
    let n = problem.dim();
    let r = problem.scales.radius;
    let grid = |k: usize, count: usize| -r + (k as f64 + 0.5) * 2.0 * r / count as f64;
    let mut out = vec![vec![0.0; n]];
    if n == 1 {
        out.extend((0..per_line).map(|k| vec![grid(k, per_line)]));
        return out;
    }
    for i in 0..per_side {
        for j in 0..per_side {
            out.push(vec![grid(i, per_side), grid(j, per_side)]);
        }
    }
    for space in &problem.fixed {
        if space.dim() == 1 {
            let u = &space.basis[0];
            out.extend((0..per_line).map(|k| {
                let t = grid(k, per_line);
                vec![t * u[0], t * u[1]]
            }));
        }
    }
    out
}

/// Zeros of `v` in `X`, by Newton iteration from a seed grid plus seeds
/// along every fixed line. `density` multiplies the seed counts.
pub fn find_zeros(problem: &Problem, density: usize) -> Result<Vec<ZeroPoint>, MorseError> {
    let n = problem.dim();
    let density = density.max(1);
    let dedup = problem.tol.zero_dedup * problem.scales.radius;
    let mut found: Vec<Vec<f64>> = Vec::new();
    for seed in seeds(problem, problem.tol.zero_seeds * density, problem.tol.line_seeds * density) {
        if let Some(z) = newton(problem, &seed) {
            if !found.iter().any(|f| distance(f, &z) <= dedup) {
                found.push(z);
            }
        }
    }
    found.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let mut zeros = Vec::new();
    for z in found {
        let q = problem.q_at(&z);
        if q.abs() < problem.tol.zero_margin * problem.scales.q {
            return Err(MorseError::ZeroOnBoundary { at: z, q });
        }
        if q < 0.0 {
            continue;
        }
        let jacobian = problem.jacobian_at(&z);
        let det = jacobian.determinant();
        if det.abs() < problem.tol.simple_zero * problem.scales.v.powi(n as i32) {
            return Err(MorseError::DegenerateZero { at: z, det });
        }
        let stabilizer = problem.rep.stabilizer(&problem.ring.group, &z, problem.tol.stabilizer)?;
        let stabilizer_class = problem
            .ring
            .table
            .class_of(&stabilizer)
            .expect("every subgroup lies in a class");
        zeros.push(ZeroPoint {
            location: z,
            jacobian,
            det,
            q_value: q,
            stabilizer,
            stabilizer_class,
        });
    }
    Ok(zeros)
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// `det(Bᵀ J B)` for an orthonormal basis `B` of a subspace (1 when empty).
pub(crate) fn restricted_det(j: &DMatrix<f64>, basis: &[DVector<f64>]) -> f64 {
    if basis.is_empty() {
        return 1.0;
    }
    let b = DMatrix::from_columns(basis);
    (b.transpose() * j * &b).determinant()
}

/// The local index at a zero as an element of the stabilizer's ring.
#[derive(Debug, Clone)]
pub struct LocalDegree {
    pub ring: BurnsideRing,
    /// Embedding of the stabilizer's elements into `G`.
    pub embedding: Vec<usize>,
    pub characters: Vec<i64>,
    pub element: BurnsideElement,
}

/// Characters of the local degree at `z`: for each class `K` of `G_z`, the
/// sign of the Jacobian restricted to the fixed space of `K`.
pub fn local_equivariant_degree(problem: &Problem, z: &ZeroPoint) -> Result<LocalDegree, MorseError> {
    let (ring, embedding) = problem.ring.of_subgroup(&z.stabilizer);
    let sub_rep = problem.rep.restrict(&embedding);
    let mut characters = Vec::with_capacity(ring.table.len());
    for (class, c) in ring.table.classes.iter().enumerate() {
        let space = sub_rep.fixed_subspace(&c.representative, problem.tol.fixed_space_rel);
        let det = restricted_det(&z.jacobian, &space.basis);
        if det.abs() < problem.tol.simple_zero * problem.scales.v.powi(space.dim() as i32) {
            return Err(MorseError::RestrictedDegenerate {
                at: z.location.clone(),
                class,
                det,
            });
        }
        characters.push(if det > 0.0 { 1 } else { -1 });
    }
    let element = ring
        .from_characters(characters.clone())
        .map_err(|source| MorseError::Inconsistent {
            stage: "local degree".into(),
            source,
        })?;
    Ok(LocalDegree {
        ring,
        embedding,
        characters,
        element,
    })
}

/// One `G`-orbit of zeros.
#[derive(Debug, Clone)]
pub struct Orbit {
    /// Index into the zero list of the representative.
    pub representative: usize,
    pub members: Vec<usize>,
    pub local: BurnsideElement,
    pub induced: BurnsideElement,
}

/// Groups the zeros into orbits and sums the induced local degrees.
pub fn assemble_index_local(problem: &Problem, zeros: &[ZeroPoint]) -> Result<(BurnsideElement, Vec<Orbit>), MorseError> {
    let tol = problem.tol.orbit_match * problem.scales.radius.max(1.0);
    let order = problem.ring.group.order();
    let mut assigned = vec![false; zeros.len()];
    let mut total = BurnsideElement::zero(&problem.ring.table);
    let mut orbits = Vec::new();
    for i in 0..zeros.len() {
        if assigned[i] {
            continue;
        }
        let z = &zeros[i];
        let mut members = Vec::new();
        for g in 0..order {
            let image = problem.rep.act(g, &z.location);
            let hit = zeros
                .iter()
                .position(|w| distance(&w.location, &image) <= tol)
                .ok_or_else(|| MorseError::OrbitInconsistent {
                    at: z.location.clone(),
                    detail: format!("image {image:?} under element {g} is not among the zeros"),
                })?;
            if !members.contains(&hit) {
                members.push(hit);
            }
        }
        members.sort_unstable();
        if members.len() * z.stabilizer.order() != order {
            return Err(MorseError::OrbitInconsistent {
                at: z.location.clone(),
                detail: format!(
                    "orbit size {} times stabilizer order {} is not |G| = {order}",
                    members.len(),
                    z.stabilizer.order()
                ),
            });
        }
        for &m in &members {
            if assigned[m] {
                return Err(MorseError::OrbitInconsistent {
                    at: z.location.clone(),
                    detail: "orbits overlap".into(),
                });
            }
            assigned[m] = true;
        }
        let local = local_equivariant_degree(problem, z)?;
        let induced = problem
            .ring
            .induce_from(&local.ring, &local.embedding, &local.element)
            .map_err(|source| MorseError::Inconsistent {
                stage: "induction".into(),
                source,
            })?;
        total = &total + &induced;
        orbits.push(Orbit {
            representative: i,
            members,
            local: local.element,
            induced,
        });
    }
    Ok((total, orbits))
}
