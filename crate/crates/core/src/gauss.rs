//! Degrees of the outward-normal (Gauss) map of `X^H` for every class `H`,
//! compared against the boundary strata of a nonvanishing invariant field
//! and against `χ(X^H)`, plus the total-curvature integral of planar
//! boundaries.

use std::f64::consts::TAU;

use thiserror::Error;

use crate::burnside::BurnsideElement;
use crate::morse::{find_zeros, index_via_strata, trace_boundary, BoundaryLoop, Check, MorseError, Problem};
use crate::poly::Polynomial;
use crate::Domain;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GaussError {
    #[error("the field w vanishes at {at:?}: {reason}")]
    FieldVanishes { at: Vec<f64>, reason: String },
    #[error("normal winding {value:.4} along boundary loop {loop_index} is not an integer")]
    NonIntegerWinding { loop_index: usize, value: f64 },
    #[error(transparent)]
    Morse(#[from] MorseError),
}

impl GaussError {
    pub fn hypothesis(&self) -> Option<&'static str> {
        match self {
            GaussError::FieldVanishes { .. } => Some("nonvanishing invariant field"),
            GaussError::NonIntegerWinding { .. } => Some("resolvable boundary"),
            GaussError::Morse(e) => e.hypothesis(),
        }
    }
}

/// Degree of `x ↦ −∇Q/|∇Q|` along the oriented boundary loops.
pub fn gauss_degree_2d(domain: &Domain, loops: &[BoundaryLoop], slack: f64) -> Result<i64, GaussError> {
    let grad = domain.q().gradient();
    let mut total = 0;
    for (loop_index, lp) in loops.iter().enumerate() {
        let value = crate::morse::loop_winding(lp, |p| [-grad[0].eval(&p), -grad[1].eval(&p)]);
        let k = value.round();
        if (value - k).abs() > slack {
            return Err(GaussError::NonIntegerWinding { loop_index, value });
        }
        total += k as i64;
    }
    Ok(total)
}

/// Degree on a union of intervals: one per right endpoint, where the
/// outward normal agrees with the line's orientation.
pub fn gauss_degree_1d(intervals: &[(f64, f64)]) -> i64 {
    intervals.len() as i64
}

/// Signed curvature of the level set `Q = 0` with `X` on the left:
/// `κ = −div(∇Q/|∇Q|)`.
fn level_curvature(grad: &[Polynomial<f64>], hess: &[Vec<Polynomial<f64>>], p: [f64; 2]) -> f64 {
    let (qx, qy) = (grad[0].eval(&p), grad[1].eval(&p));
    let (qxx, qxy, qyy) = (hess[0][0].eval(&p), hess[0][1].eval(&p), hess[1][1].eval(&p));
    let norm = qx.hypot(qy);
    -(qxx * qy * qy - 2.0 * qxy * qx * qy + qyy * qx * qx) / norm.powi(3)
}

/// `(1/2π) ∮ κ ds` over all loops, by the trapezoid rule on the polyline.
pub fn curvature_integral(domain: &Domain, loops: &[BoundaryLoop]) -> f64 {
    let grad = domain.q().gradient();
    let hess: Vec<Vec<Polynomial<f64>>> = grad.iter().map(Polynomial::gradient).collect();
    let mut total = 0.0;
    for lp in loops {
        let kappa: Vec<f64> = lp.points.iter().map(|&p| level_curvature(&grad, &hess, p)).collect();
        let m = lp.len();
        for k in 0..m {
            let (a, b) = (lp.point(k), lp.point(k + 1));
            let ds = (a[0] - b[0]).hypot(a[1] - b[1]);
            total += 0.5 * (kappa[k] + kappa[(k + 1) % m]) * ds;
        }
    }
    total / TAU
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureEntry {
    pub integral: f64,
    pub rhs: i64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussClass {
    pub class: usize,
    pub fixed_dim: usize,
    /// Degree of the normal map of `X^H`.
    pub direct: i64,
    /// `χ(∂₁⁺X^H) − χ(∂₂⁺X^H)` for the field.
    pub strata: i64,
    /// `χ(X^H)` minus the (vanishing) index.
    pub euler: i64,
    pub curvature: Option<CurvatureEntry>,
}

#[derive(Debug, Clone)]
pub struct GaussReport {
    pub classes: Vec<GaussClass>,
    pub deg_g: BurnsideElement,
    pub checks: Vec<Check>,
}

impl GaussReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn per_class_degree(&self) -> Vec<i64> {
        self.classes.iter().map(|c| c.direct).collect()
    }
}

/// Rejects fields with a zero in `X`: forced zeros at the origin, Newton
/// zeros, and near-zeros on a 128×128 grid and on the boundary.
fn ensure_nonvanishing(problem: &Problem, loops: &[BoundaryLoop]) -> Result<(), GaussError> {
    let n = problem.dim();
    let origin = vec![0.0; n];
    if problem.fixed.iter().any(|s| s.dim() == 0) && problem.domain.q().eval(&origin) >= 0.0 {
        return Err(GaussError::FieldVanishes {
            at: origin,
            reason: "a subgroup fixes only the origin, so every invariant field vanishes there".into(),
        });
    }
    let zeros = find_zeros(problem, 1).map_err(|e| match e {
        MorseError::ZeroOnBoundary { at, .. } | MorseError::DegenerateZero { at, .. } => GaussError::FieldVanishes {
            at,
            reason: "Newton located a zero".into(),
        },
        other => GaussError::Morse(other),
    })?;
    if let Some(z) = zeros.first() {
        return Err(GaussError::FieldVanishes {
            at: z.location.clone(),
            reason: "Newton located a zero".into(),
        });
    }
    let floor = problem.tol.boundary_zero * problem.scales.v;
    let r = problem.scales.radius;
    let norm = |p: &[f64]| problem.field.eval(p).iter().map(|c| c * c).sum::<f64>().sqrt();
    let side = 128;
    let coord = |k: usize| -r + (k as f64 + 0.5) * 2.0 * r / side as f64;
    let mut samples: Vec<Vec<f64>> = if n == 2 {
        (0..side)
            .flat_map(|i| (0..side).map(move |j| vec![coord(i), coord(j)]))
            .collect()
    } else {
        (0..side).map(|i| vec![coord(i)]).collect()
    };
    samples.retain(|p| problem.domain.q().eval(p) >= 0.0);
    samples.extend(loops.iter().flat_map(|l| l.points.iter().map(|p| p.to_vec())));
    if let Some(p) = samples.into_iter().find(|p| norm(p) < floor) {
        return Err(GaussError::FieldVanishes {
            at: p,
            reason: "|w| is below the floor".into(),
        });
    }
    Ok(())
}

/// Computes the per-class normal-map degrees for the problem's field `w`
/// and checks them against the strata of `w` and against `χ(X^H)`.
pub fn equivariant_gauss_degree(problem: &Problem) -> Result<GaussReport, GaussError> {
    let n = problem.dim();
    let loops = if n == 2 { trace_boundary(problem)? } else { vec![] };
    ensure_nonvanishing(problem, &loops)?;
    let strata = index_via_strata(problem)?;
    let planar_direct = if n == 2 {
        Some(gauss_degree_2d(&problem.domain, &loops, problem.tol.integer_slack)?)
    } else {
        None
    };
    let curvature = (n == 2).then(|| curvature_integral(&problem.domain, &loops));

    let mut classes = Vec::new();
    for cs in &strata.classes {
        let direct = match (cs.fixed_dim, &cs.line) {
            (_, Some(line)) => gauss_degree_1d(&line.intervals),
            (2, None) => planar_direct.expect("planar problem"),
            _ => 0,
        };
        let strata_value = cs.chi.plus1 - cs.chi.plus2;
        let curvature = match (cs.fixed_dim, curvature) {
            (2, Some(integral)) => Some(CurvatureEntry {
                integral,
                rhs: strata_value,
                residual: (integral - strata_value as f64).abs(),
            }),
            _ => None,
        };
        classes.push(GaussClass {
            class: cs.class,
            fixed_dim: cs.fixed_dim,
            direct,
            strata: strata_value,
            euler: cs.chi.x,
            curvature,
        });
    }

    let ring = &problem.ring;
    let element = |values: Vec<i64>, what: &str| {
        ring.from_characters(values).map_err(|source| MorseError::Inconsistent {
            stage: what.to_string(),
            source,
        })
    };
    let deg_g = element(classes.iter().map(|c| c.direct).collect(), "normal-map degree")?;
    let via_strata = element(classes.iter().map(|c| c.strata).collect(), "strata degree")?;
    let via_euler = element(classes.iter().map(|c| c.euler).collect(), "Euler characteristic")?;

    let mismatches = |f: fn(&GaussClass) -> i64| classes.iter().filter(|c| c.direct != f(c)).count();
    let strata_bad = mismatches(|c| c.strata);
    let euler_bad = mismatches(|c| c.euler);
    let round_trip = ring.ch(&deg_g).map(|c| c.values).ok() == Some(classes.iter().map(|c| c.direct).collect());
    let worst_curvature = classes
        .iter()
        .filter_map(|c| c.curvature.as_ref().map(|e| e.residual))
        .fold(0.0, f64::max);
    let checks = vec![
        Check {
            name: "degree_vs_strata".into(),
            pass: strata_bad == 0 && deg_g == via_strata,
            residual: strata_bad as f64,
            detail: format!("strata route {}", via_strata.display(&ring.table)),
        },
        Check {
            name: "degree_vs_euler".into(),
            pass: euler_bad == 0 && deg_g == via_euler && strata.element.is_zero(),
            residual: euler_bad as f64,
            detail: format!(
                "χ route {}, index {}",
                via_euler.display(&ring.table),
                strata.element.display(&ring.table)
            ),
        },
        Check {
            name: "degree_round_trip".into(),
            pass: round_trip,
            residual: if round_trip { 0.0 } else { 1.0 },
            detail: format!("Deg = {}", deg_g.display(&ring.table)),
        },
        Check {
            name: "curvature_integral".into(),
            pass: worst_curvature <= problem.tol.curvature,
            residual: worst_curvature,
            detail: format!("integral {:.6}", curvature.unwrap_or(0.0)),
        },
    ];
    Ok(GaussReport { classes, deg_g, checks })
}
