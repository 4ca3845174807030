//! Sparse multivariate polynomials over a floating scalar.
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors, so iteration order
//! and every derived output are deterministic.

mod parse;

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::scalar::Scalar;

pub use parse::parse_polynomial;

/// Exponent vector.
pub type Monomial = Vec<u32>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("non-finite coefficient")]
    NonFinite,
    #[error("the check at infinity supports n <= 2, got n = {0}")]
    UnsupportedDimension(usize),
    #[error("degree of component {component} is {degree}, above its bound {bound}")]
    DegreeAboveBound {
        component: usize,
        degree: usize,
        bound: usize,
    },
    #[error("domain is not compact: Q is not negative on the sphere of radius {radius} (direction {direction:?})")]
    NotCompact { radius: f64, direction: Vec<f64> },
    #[error("bounding radius must be positive and finite")]
    BadRadius,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<T> {
    nvars: usize,
    terms: BTreeMap<Monomial, T>,
}

/// Value with optional gradient and Hessian.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet<T> {
    pub value: T,
    pub gradient: Option<Vec<T>>,
    pub hessian: Option<Vec<Vec<T>>>,
}

impl<T: Scalar> Polynomial<T> {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: T) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The coordinate function `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, T::one());
        p
    }

    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, T)>,
    ) -> Result<Self, PolyError> {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(PolyError::DimensionMismatch {
                    expected: nvars,
                    got: e.len(),
                });
            }
            if !c.is_finite() {
                return Err(PolyError::NonFinite);
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Monomial, c: T) {
        if c == T::zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if *slot.get() == T::zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &T)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> T {
        self.terms.get(e).copied().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn max_abs_coeff(&self) -> T {
        self.terms
            .values()
            .fold(T::zero(), |m, c| if c.abs() > m { c.abs() } else { m })
    }

    /// Drops coefficients with `|c| <= rel * max|c|`.
    pub fn pruned(mut self, rel: T) -> Self {
        let cut = rel * self.max_abs_coeff();
        self.terms.retain(|_, c| c.abs() > cut);
        self
    }

    pub fn scale(&self, k: T) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, &c) in &self.terms {
            p.add_term(e.clone(), c * k);
        }
        p
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(self.nvars, T::one());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Homogeneous component of total degree `k`.
    pub fn homogeneous_part(&self, k: usize) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, &c) in &self.terms {
            if e.iter().sum::<u32>() as usize == k {
                p.add_term(e.clone(), c);
            }
        }
        p
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, &c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[i] -= 1;
            p.add_term(d, c * T::from_f64_lossy(e[i] as f64));
        }
        p
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.nvars).map(|i| self.derivative(i)).collect()
    }

    pub fn eval(&self, x: &[T]) -> T {
        debug_assert_eq!(x.len(), self.nvars);
        let mut sum = T::zero();
        for (e, &c) in &self.terms {
            let mut t = c;
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t *= xi.powi(k as i32);
                }
            }
            sum += t;
        }
        sum
    }

    /// Value, and for `order >= 1` the gradient, for `order >= 2` the Hessian,
    /// from symbolic derivatives of the terms.
    pub fn eval_jet(&self, x: &[T], order: usize) -> Jet<T> {
        let value = self.eval(x);
        let (gradient, hessian) = if order >= 1 {
            let grad_polys = self.gradient();
            let gradient: Vec<T> = grad_polys.iter().map(|g| g.eval(x)).collect();
            let hessian = (order >= 2).then(|| {
                grad_polys
                    .iter()
                    .map(|g| (0..self.nvars).map(|j| g.derivative(j).eval(x)).collect())
                    .collect()
            });
            (Some(gradient), hessian)
        } else {
            (None, None)
        };
        Jet {
            value,
            gradient,
            hessian,
        }
    }

    /// Substitutes `x_i = Σ_j a[i][j]·t_j`. `a` has `nvars` rows and `l`
    /// columns; the result is a polynomial in `l` variables, pruned at
    /// `prune_rel`.
    pub fn compose_linear(&self, a: &[Vec<T>], prune_rel: T) -> Result<Self, PolyError> {
        if a.len() != self.nvars {
            return Err(PolyError::DimensionMismatch {
                expected: self.nvars,
                got: a.len(),
            });
        }
        let l = a.first().map_or(0, Vec::len);
        if let Some(row) = a.iter().find(|r| r.len() != l) {
            return Err(PolyError::DimensionMismatch {
                expected: l,
                got: row.len(),
            });
        }
        let linear: Vec<Self> = a
            .iter()
            .map(|row| {
                let mut p = Self::zero(l);
                for (j, &c) in row.iter().enumerate() {
                    let mut e = vec![0; l];
                    e[j] = 1;
                    p.add_term(e, c);
                }
                p
            })
            .collect();
        let mut powers: Vec<Vec<Self>> = linear
            .iter()
            .map(|p| vec![Self::constant(l, T::one()), p.clone()])
            .collect();
        let mut out = Self::zero(l);
        for (e, &c) in &self.terms {
            let mut term = Self::constant(l, c);
            for (i, &k) in e.iter().enumerate() {
                let k = k as usize;
                while powers[i].len() <= k {
                    let next = &powers[i][powers[i].len() - 1] * &linear[i];
                    powers[i].push(next);
                }
                if k > 0 {
                    term = &term * &powers[i][k];
                }
            }
            out = &out + &term;
        }
        Ok(out.pruned(prune_rel))
    }

    /// Largest coefficient difference against `other`, over the union of
    /// supports.
    pub fn max_coeff_diff(&self, other: &Self) -> T {
        let mut worst = T::zero();
        for (e, &c) in &self.terms {
            worst = worst.max((c - other.coeff(e)).abs());
        }
        for (e, &c) in &other.terms {
            if !self.terms.contains_key(e) {
                worst = worst.max(c.abs());
            }
        }
        worst
    }
}

/// Degree of `q` restricted to the span of `basis` (orthonormal vectors of
/// length `nvars`). Returns 0 for the zero subspace.
pub fn restricted_degree<T: Scalar>(q: &Polynomial<T>, basis: &[Vec<T>], rel: T) -> usize {
    if basis.is_empty() {
        return 0;
    }
    // Parametrization matrix: row i holds the i-th coordinate of each basis vector.
    let a: Vec<Vec<T>> = (0..q.nvars())
        .map(|i| basis.iter().map(|b| b[i]).collect())
        .collect();
    q.compose_linear(&a, T::zero())
        .map(|p| p.pruned(rel).degree())
        .unwrap_or(0)
}

impl<T: Scalar> Add for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn add(self, rhs: Self) -> Polynomial<T> {
        assert_eq!(self.nvars, rhs.nvars);
        let mut p = self.clone();
        for (e, &c) in &rhs.terms {
            p.add_term(e.clone(), c);
        }
        p
    }
}

impl<T: Scalar> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn sub(self, rhs: Self) -> Polynomial<T> {
        self + &(-rhs)
    }
}

impl<T: Scalar> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn neg(self) -> Polynomial<T> {
        self.scale(-T::one())
    }
}

impl<T: Scalar> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn mul(self, rhs: Self) -> Polynomial<T> {
        assert_eq!(self.nvars, rhs.nvars);
        let mut p = Polynomial::zero(self.nvars);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &rhs.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                p.add_term(e, ca * cb);
            }
        }
        p
    }
}

impl<T: Scalar> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 3] = ["x", "y", "z"];
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = *c < T::zero();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mag = c.abs();
            let is_const = e.iter().all(|&k| k == 0);
            if is_const || mag != T::one() {
                write!(f, "{mag}")?;
            }
            let mut wrote = is_const || mag != T::one();
            for (i, &p) in e.iter().enumerate() {
                if p == 0 {
                    continue;
                }
                if wrote {
                    write!(f, "*")?;
                }
                wrote = true;
                match NAMES.get(i) {
                    Some(n) if self.nvars <= 3 => write!(f, "{n}")?,
                    _ => write!(f, "x{i}")?,
                }
                if p > 1 {
                    write!(f, "^{p}")?;
                }
            }
        }
        Ok(())
    }
}

/// `v = (P_1, .., P_n)` with degree bounds `m_1 >= .. >= m_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField<T> {
    components: Vec<Polynomial<T>>,
    degree_bounds: Vec<usize>,
}

impl<T: Scalar> VectorField<T> {
    /// Without explicit bounds, the observed degrees are lifted to the
    /// smallest non-increasing sequence dominating them.
    pub fn new(components: Vec<Polynomial<T>>, bounds: Option<Vec<usize>>) -> Result<Self, PolyError> {
        let n = components.len();
        for c in &components {
            if c.nvars() != n {
                return Err(PolyError::DimensionMismatch {
                    expected: n,
                    got: c.nvars(),
                });
            }
        }
        let degree_bounds = match bounds {
            Some(b) => {
                if b.len() != n {
                    return Err(PolyError::DimensionMismatch {
                        expected: n,
                        got: b.len(),
                    });
                }
                for (i, (c, &m)) in components.iter().zip(&b).enumerate() {
                    if c.degree() > m {
                        return Err(PolyError::DegreeAboveBound {
                            component: i,
                            degree: c.degree(),
                            bound: m,
                        });
                    }
                }
                b
            }
            None => {
                // Smallest non-increasing sequence with m_i >= deg P_i (and >= 1).
                let mut d: Vec<usize> = components.iter().map(|c| c.degree().max(1)).collect();
                for i in (0..n.saturating_sub(1)).rev() {
                    d[i] = d[i].max(d[i + 1]);
                }
                d
            }
        };
        Ok(VectorField {
            components,
            degree_bounds,
        })
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Polynomial<T>] {
        &self.components
    }

    pub fn degree_bounds(&self) -> &[usize] {
        &self.degree_bounds
    }

    pub fn eval(&self, x: &[T]) -> Vec<T> {
        self.components.iter().map(|c| c.eval(x)).collect()
    }

    /// Row-major Jacobian polynomials `∂P_i/∂x_j`.
    pub fn jacobian_polys(&self) -> Vec<Vec<Polynomial<T>>> {
        self.components.iter().map(Polynomial::gradient).collect()
    }

    pub fn max_abs_coeff(&self) -> T {
        self.components
            .iter()
            .map(Polynomial::max_abs_coeff)
            .fold(T::zero(), T::max)
    }

    pub fn add(&self, other: &Self) -> Self {
        VectorField {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
            degree_bounds: self.degree_bounds.clone(),
        }
    }
}

/// Outcome of the screen for zeros escaping to infinity.
#[derive(Debug, Clone, PartialEq)]
pub struct InfinityReport {
    pub pass: bool,
    /// Unit directions along which all top-degree forms (nearly) vanish.
    pub suspicious: Vec<Vec<f64>>,
}

/// Checks that the top-degree forms of the homogenized components (degree
/// `m_i` each) have no common nontrivial real zero. Numerical screen for
/// `n <= 2`.
pub fn infinity_check<T: Scalar>(v: &VectorField<T>) -> Result<InfinityReport, PolyError> {
    let n = v.dim();
    let tops: Vec<Polynomial<f64>> = v
        .components()
        .iter()
        .zip(v.degree_bounds())
        .map(|(p, &m)| {
            let h = p.homogeneous_part(m);
            Polynomial::from_terms(n, h.terms().map(|(e, c)| (e.clone(), c.to_f64_lossy())))
                .expect("same arity")
        })
        .collect();
    match n {
        0 => Ok(InfinityReport {
            pass: true,
            suspicious: vec![],
        }),
        1 => {
            let pass = !tops[0].is_zero();
            Ok(InfinityReport {
                pass,
                suspicious: if pass { vec![] } else { vec![vec![1.0], vec![-1.0]] },
            })
        }
        2 => Ok(infinity_check_2d(&tops)),
        _ => Err(PolyError::UnsupportedDimension(n)),
    }
}

const INFINITY_DIRECTIONS: usize = 2048;

fn infinity_check_2d(tops: &[Polynomial<f64>]) -> InfinityReport {
    let at = |p: &Polynomial<f64>, t: f64| p.eval(&[t.cos(), t.sin()]);
    let scales: Vec<f64> = tops.iter().map(|p| p.max_abs_coeff()).collect();
    if tops.iter().all(Polynomial::is_zero) {
        return InfinityReport {
            pass: false,
            suspicious: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        };
    }
    // Homogeneous forms vanish on antipodal pairs together, so half a turn
    // suffices. Roots of the first nonzero form are bracketed by sign changes
    // or located at small local minima of |form|, then tested on the others.
    let pivot = tops.iter().position(|p| !p.is_zero()).expect("some nonzero form");
    let f = |t: f64| at(&tops[pivot], t) / scales[pivot];
    let step = std::f64::consts::PI / INFINITY_DIRECTIONS as f64;
    let samples: Vec<f64> = (0..=INFINITY_DIRECTIONS).map(|k| f(k as f64 * step)).collect();
    let mut roots = Vec::new();
    for k in 0..INFINITY_DIRECTIONS {
        let (a, b) = (k as f64 * step, (k + 1) as f64 * step);
        let (fa, fb) = (samples[k], samples[k + 1]);
        if fa == 0.0 {
            roots.push(a);
        } else if fa.signum() != fb.signum() && fb != 0.0 {
            roots.push(bisect(&f, a, b, fa));
        } else if k > 0 && fa.abs() <= samples[k - 1].abs() && fa.abs() <= fb.abs() && fa.abs() < 1e-2 {
            // Even-multiplicity candidate: refine the minimum of |f|.
            let t = golden_min(&|t| f(t).abs(), a - step, b);
            if f(t).abs() < 1e-9 {
                roots.push(t);
            }
        }
    }
    let mut suspicious = Vec::new();
    for t in roots {
        let common = tops
            .iter()
            .zip(&scales)
            .all(|(p, &s)| p.is_zero() || (at(p, t) / s).abs() < 1e-6);
        if common {
            let d = vec![t.cos(), t.sin()];
            if !suspicious.iter().any(|s: &Vec<f64>| (s[0] - d[0]).hypot(s[1] - d[1]) < 1e-6) {
                suspicious.push(d);
            }
        }
    }
    InfinityReport {
        pass: suspicious.is_empty(),
        suspicious,
    }
}

fn bisect(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    for _ in 0..80 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

fn golden_min(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    for _ in 0..100 {
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - r * (b - a);
        d = a + r * (b - a);
    }
    0.5 * (a + b)
}

/// `X_Q = {Q >= 0}` with a radius outside of which `Q < 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain<T> {
    q: Polynomial<T>,
    bounding_radius: T,
}

/// Directions checked by the compactness certificate in the plane.
pub const CERTIFICATE_DIRECTIONS: usize = 720;

impl<T: Scalar> Domain<T> {
    /// Verifies the compactness certificate: `Q < 0` on sampled directions at
    /// radius `R` and `2R`.
    pub fn new(q: Polynomial<T>, bounding_radius: T) -> Result<Self, PolyError> {
        let r = bounding_radius.to_f64_lossy();
        if !(r > 0.0 && r.is_finite()) {
            return Err(PolyError::BadRadius);
        }
        let n = q.nvars();
        let directions: Vec<Vec<f64>> = match n {
            1 => vec![vec![1.0], vec![-1.0]],
            2 => (0..CERTIFICATE_DIRECTIONS)
                .map(|k| {
                    let t = 2.0 * std::f64::consts::PI * k as f64 / CERTIFICATE_DIRECTIONS as f64;
                    vec![t.cos(), t.sin()]
                })
                .collect(),
            _ => return Err(PolyError::UnsupportedDimension(n)),
        };
        for radius in [r, 2.0 * r] {
            for d in &directions {
                let x: Vec<T> = d.iter().map(|c| T::from_f64_lossy(c * radius)).collect();
                if q.eval(&x) >= T::zero() {
                    return Err(PolyError::NotCompact {
                        radius,
                        direction: d.clone(),
                    });
                }
            }
        }
        Ok(Domain { q, bounding_radius })
    }

    pub fn q(&self) -> &Polynomial<T> {
        &self.q
    }

    pub fn bounding_radius(&self) -> T {
        self.bounding_radius
    }

    pub fn dim(&self) -> usize {
        self.q.nvars()
    }

    pub fn contains(&self, x: &[T]) -> bool {
        self.q.eval(x) >= T::zero()
    }
}
