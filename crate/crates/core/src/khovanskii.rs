//! Lattice-point bounds on the index of polynomial fields in `{Q >= 0}`.
//!
//! `O(d; m_1..m_n)` counts integer points of the box `0 <= x_i <= m_i - 1`
//! whose coordinate sum lies in `[(Σm - d - n)/2, (Σm - n)/2]`. The window
//! is taken literally, half-integer endpoints included.

use nalgebra::DMatrix;
use thiserror::Error;

use crate::burnside::{BurnsideElement, BurnsideRing};
use crate::config::Tolerances;
use crate::poly::{restricted_degree, Polynomial};
use crate::representation::FixedSubspace;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KhovanskiiError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("lattice count overflows u128")]
    Overflow,
    #[error("no coordinate projection is onto the subspace")]
    NoSurjectiveProjection,
}

/// `O(d; ms)` together with its inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KhovanskiiBound {
    pub d: usize,
    pub ms: Vec<usize>,
    pub value: u128,
}

/// Number of sums attained `s ↦ #{x in box : Σx = s}`, by convolving the
/// uniform distributions on `0..m_i`.
fn sum_distribution(ms: &[usize]) -> Result<Vec<u128>, KhovanskiiError> {
    let mut dist = vec![1u128];
    for &m in ms {
        let mut next = vec![0u128; dist.len() + m - 1];
        // Sliding window sum over the previous distribution.
        let mut window: u128 = 0;
        for (s, slot) in next.iter_mut().enumerate() {
            if s < dist.len() {
                window = window.checked_add(dist[s]).ok_or(KhovanskiiError::Overflow)?;
            }
            if s >= m {
                window -= dist[s - m];
            }
            *slot = window;
        }
        dist = next;
    }
    Ok(dist)
}

pub fn lattice_bound(d: usize, ms: &[usize]) -> Result<u128, KhovanskiiError> {
    if let Some(i) = ms.iter().position(|&m| m == 0) {
        return Err(KhovanskiiError::InvalidParams(format!("m_{} = 0; all m_i must be >= 1", i + 1)));
    }
    let n = ms.len() as i128;
    let total: i128 = ms.iter().map(|&m| m as i128).sum();
    let lower2 = total - d as i128 - n;
    let upper2 = total - n;
    let dist = sum_distribution(ms)?;
    let mut count: u128 = 0;
    for (s, &c) in dist.iter().enumerate() {
        let twice = 2 * s as i128;
        if lower2 <= twice && twice <= upper2 {
            count = count.checked_add(c).ok_or(KhovanskiiError::Overflow)?;
        }
    }
    Ok(count)
}

pub fn khovanskii_bound(d: usize, ms: &[usize]) -> Result<KhovanskiiBound, KhovanskiiError> {
    if ms.windows(2).any(|w| w[0] < w[1]) {
        return Err(KhovanskiiError::InvalidParams(format!("{ms:?} is not non-increasing")));
    }
    Ok(KhovanskiiBound {
        d,
        ms: ms.to_vec(),
        value: lattice_bound(d, ms)?,
    })
}

/// `O(V; d_V, ms)` with the minimizing coordinate subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceBound {
    pub value: u128,
    /// Zero-based coordinate indices `J`.
    pub subset: Vec<usize>,
    pub d_v: usize,
}

fn subsets(n: usize, l: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, l: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == l {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, l, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, l, &mut Vec::new(), &mut out);
    out
}

/// Minimum of `O(d_V; m_J)` over coordinate subspaces `U = span{e_j : j ∈ J}`
/// whose orthogonal projection restricted to `V` is onto.
pub fn subspace_bound(
    v: &FixedSubspace,
    q: &Polynomial<f64>,
    ms: &[usize],
    degree_rel: f64,
    rank_tol: f64,
) -> Result<SubspaceBound, KhovanskiiError> {
    let n = ms.len();
    let l = v.dim();
    let d_v = restricted_degree(q, &v.basis_rows(), degree_rel);
    if l == 0 {
        return Ok(SubspaceBound {
            value: 1,
            subset: vec![],
            d_v,
        });
    }
    let basis = v.matrix(n);
    let mut best: Option<SubspaceBound> = None;
    for j in subsets(n, l) {
        let rows = DMatrix::from_fn(l, l, |r, c| basis[(j[r], c)]);
        let rank = rows.singular_values().iter().filter(|&&s| s > rank_tol).count();
        if rank < l {
            continue;
        }
        let picked: Vec<usize> = j.iter().map(|&i| ms[i]).collect();
        let value = lattice_bound(d_v, &picked)?;
        if best.as_ref().is_none_or(|b| value < b.value) {
            best = Some(SubspaceBound {
                value,
                subset: j,
                d_v,
            });
        }
    }
    best.ok_or(KhovanskiiError::NoSurjectiveProjection)
}

/// One row of the per-class bound table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundEntry {
    pub class: usize,
    pub value: i64,
    pub bound: u128,
    pub subset: Vec<usize>,
    pub d_v: usize,
    /// `false` when the non-degeneracy screen at infinity failed.
    pub applicable: bool,
    pub holds: bool,
}

impl BoundEntry {
    pub fn margin(&self) -> i128 {
        self.bound as i128 - self.value.unsigned_abs() as i128
    }
}

/// Checks `|ch_H(index)| <= O((ℝⁿ)^H; d_H, ms)` for every class.
/// `fixed[k]` is the fixed subspace of class `k`.
pub fn verify_bounds(
    ring: &BurnsideRing,
    index: &BurnsideElement,
    fixed: &[FixedSubspace],
    q: &Polynomial<f64>,
    ms: &[usize],
    infinity_ok: bool,
    tol: &Tolerances,
) -> Result<Vec<BoundEntry>, KhovanskiiError> {
    let ch = ring
        .ch(index)
        .map_err(|e| KhovanskiiError::InvalidParams(e.to_string()))?;
    fixed
        .iter()
        .enumerate()
        .map(|(class, space)| {
            let b = subspace_bound(space, q, ms, tol.restricted_degree_rel, tol.rank_tol)?;
            let value = ch.values[class];
            Ok(BoundEntry {
                class,
                value,
                holds: (value.unsigned_abs() as u128) <= b.value,
                bound: b.value,
                subset: b.subset,
                d_v: b.d_v,
                applicable: infinity_ok,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DVector;

    #[test]
    fn small_counts() {
        assert_eq!(lattice_bound(2, &[2]), Ok(1));
        assert_eq!(lattice_bound(2, &[2, 2]), Ok(3));
        assert_eq!(lattice_bound(0, &[1, 1, 1, 1]), Ok(1));
        assert_eq!(lattice_bound(2, &[1, 1]), Ok(1));
        assert_eq!(lattice_bound(2, &[3]), Ok(2));
        assert_eq!(lattice_bound(2, &[1]), Ok(1));
        assert!(lattice_bound(2, &[2, 0]).is_err());
    }

    #[test]
    fn ordering_is_validated() {
        assert!(khovanskii_bound(2, &[1, 2]).is_err());
        assert_eq!(khovanskii_bound(2, &[2, 1]).unwrap().value, lattice_bound(2, &[2, 1]).unwrap());
    }

    fn line(a: f64, b: f64) -> FixedSubspace {
        let n = a.hypot(b);
        FixedSubspace {
            basis: vec![DVector::from_vec(vec![a / n, b / n])],
        }
    }

    fn q(s: &str) -> Polynomial<f64> {
        crate::poly::parse_polynomial(s, 2).unwrap()
    }

    #[test]
    fn subspace_bounds() {
        let disk = q("1 - x^2 - y^2");
        let b = subspace_bound(&line(1.0, 0.0), &disk, &[3, 2], 1e-9, 1e-8).unwrap();
        assert_eq!((b.value, b.subset.clone(), b.d_v), (2, vec![0], 2));

        let full = FixedSubspace {
            basis: vec![DVector::from_vec(vec![1.0, 0.0]), DVector::from_vec(vec![0.0, 1.0])],
        };
        let b = subspace_bound(&full, &disk, &[3, 2], 1e-9, 1e-8).unwrap();
        assert_eq!(b.subset, vec![0, 1]);
        assert_eq!(b.value, lattice_bound(2, &[3, 2]).unwrap());

        let b = subspace_bound(&line(1.0, 1.0), &disk, &[2, 2], 1e-9, 1e-8).unwrap();
        assert_eq!(b.value, 1);

        let point = FixedSubspace { basis: vec![] };
        assert_eq!(subspace_bound(&point, &disk, &[2, 2], 1e-9, 1e-8).unwrap().value, 1);
    }
}
