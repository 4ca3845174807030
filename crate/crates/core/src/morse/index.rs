use super::strata::{compute_strata, strata_1d, Stratification, Strata1d, StrataChi};
use super::{trace_boundary, MorseError, Problem};
use crate::burnside::BurnsideElement;

/// Strata Euler characteristics of one fixed set `X^H`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassStrata {
    pub class: usize,
    pub fixed_dim: usize,
    pub chi: StrataChi,
    /// Present when `X^H` is an interval family on a fixed line.
    pub line: Option<Strata1d>,
}

/// The index assembled from boundary strata, with the data it came from.
#[derive(Debug, Clone)]
pub struct StrataIndex {
    pub element: BurnsideElement,
    pub classes: Vec<ClassStrata>,
    /// Full planar stratification (`n = 2` only).
    pub full: Option<Stratification>,
}

impl StrataIndex {
    pub fn characters(&self) -> Vec<i64> {
        self.classes.iter().map(|c| c.chi.index()).collect()
    }
}

/// For each class `H`, `s_H = χ(X^H) − χ(∂₁⁺X^H) + χ(∂₂⁺X^H)`; the index is
/// the Burnside element with these characters.
pub fn index_via_strata(problem: &Problem) -> Result<StrataIndex, MorseError> {
    let n = problem.dim();
    let full = if n == 2 {
        Some(compute_strata(problem, trace_boundary(problem)?)?)
    } else {
        None
    };
    let full_line = if n == 1 { Some(strata_1d(problem, &[1.0])?) } else { None };
    let mut classes = Vec::with_capacity(problem.fixed.len());
    for (class, space) in problem.fixed.iter().enumerate() {
        let d = space.dim();
        let (chi, line) = if d == n {
            match (&full, &full_line) {
                (Some(s), _) => (s.chi, None),
                (None, Some(l)) => (l.chi, Some(l.clone())),
                _ => unreachable!("n is 1 or 2"),
            }
        } else if d == 1 {
            let u: Vec<f64> = space.basis[0].iter().copied().collect();
            let l = strata_1d(problem, &u)?;
            (l.chi, Some(l))
        } else {
            (origin_chi(problem)?, None)
        };
        classes.push(ClassStrata {
            class,
            fixed_dim: d,
            chi,
            line,
        });
    }
    let characters: Vec<i64> = classes.iter().map(|c| c.chi.index()).collect();
    let element = problem
        .ring
        .from_characters(characters)
        .map_err(|source| MorseError::Inconsistent {
            stage: "strata index".into(),
            source,
        })?;
    Ok(StrataIndex { element, classes, full })
}

/// `X^H = X ∩ {0}` for a trivial fixed space.
pub(crate) fn origin_chi(problem: &Problem) -> Result<StrataChi, MorseError> {
    let q0 = problem.q_at(&vec![0.0; problem.dim()]);
    if q0.abs() < problem.tol.zero_margin * problem.scales.q {
        return Err(MorseError::OriginOnBoundary { q: q0 });
    }
    Ok(StrataChi {
        x: i64::from(q0 > 0.0),
        ..StrataChi::default()
    })
}
