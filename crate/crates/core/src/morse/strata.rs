use super::boundary::{dist, domain_euler, BoundaryLoop};
use super::{MorseError, Problem};
use crate::poly::Polynomial;

/// A point of `∂₂X`: `h = 0` on the boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct TangencyPoint {
    pub location: [f64; 2],
    pub loop_index: usize,
    /// The tangency lies between points `segment` and `segment + 1`.
    pub segment: usize,
    /// `<∇h, v>` at the point.
    pub derivative: f64,
    pub is_plus: bool,
}

/// A maximal boundary arc on which `h` has constant sign.
#[derive(Debug, Clone, PartialEq)]
pub struct Arc {
    pub loop_index: usize,
    /// Bounding tangencies (indices into `Stratification::tangencies`);
    /// `None` for a whole loop without tangencies.
    pub start: Option<usize>,
    pub end: Option<usize>,
    /// First and last loop point index on the arc (cyclic, inclusive).
    pub first_point: usize,
    pub last_point: usize,
    pub plus: bool,
}

impl Arc {
    pub fn is_full_loop(&self) -> bool {
        self.start.is_none()
    }
}

/// Euler characteristics of the strata.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StrataChi {
    pub x: i64,
    pub plus1: i64,
    pub minus1: i64,
    pub plus2: i64,
    pub minus2: i64,
}

impl StrataChi {
    /// `χ(X) − χ(∂₁⁺) + χ(∂₂⁺)`.
    pub fn index(&self) -> i64 {
        self.x - self.plus1 + self.plus2
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stratification {
    pub loops: Vec<BoundaryLoop>,
    pub tangencies: Vec<TangencyPoint>,
    pub arcs: Vec<Arc>,
    pub chi: StrataChi,
}

impl Stratification {
    /// For each loop, whether each segment `(k, k+1)` lies on a plus arc.
    pub fn segment_signs(&self) -> Vec<Vec<bool>> {
        let mut out: Vec<Vec<bool>> = self.loops.iter().map(|l| vec![false; l.len()]).collect();
        for arc in &self.arcs {
            let m = self.loops[arc.loop_index].len();
            let signs = &mut out[arc.loop_index];
            if arc.is_full_loop() {
                signs.iter_mut().for_each(|s| *s = arc.plus);
                continue;
            }
            // Segments from the starting tangency's segment to the ending one.
            let from = self.tangencies[arc.start.expect("bounded arc")].segment;
            let to = self.tangencies[arc.end.expect("bounded arc")].segment;
            let mut k = from;
            loop {
                signs[k] = arc.plus;
                if k == to {
                    break;
                }
                k = (k + 1) % m;
            }
        }
        out
    }
}

/// Point on the chord `a + t(b - a)`, projected onto `Q = 0`.
fn chord_point(problem: &Problem, a: [f64; 2], b: [f64; 2], t: f64) -> Result<[f64; 2], MorseError> {
    let p = problem.polish_to_boundary(&[a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])])?;
    Ok([p[0], p[1]])
}

fn refine_tangency(problem: &Problem, a: [f64; 2], b: [f64; 2]) -> Result<[f64; 2], MorseError> {
    let (mut lo, mut hi) = (0.0, 1.0);
    let h_lo = problem.h_at(&chord_point(problem, a, b, lo)?);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let h_mid = problem.h_at(&chord_point(problem, a, b, mid)?);
        if (h_mid > 0.0) == (h_lo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut p = chord_point(problem, a, b, 0.5 * (lo + hi))?;
    // Joint Newton on (Q, h); kept only when it improves both residuals
    // without moving off the bracket.
    let scale = dist(a, b).max(1e-12);
    for _ in 0..3 {
        let gq = problem.grad_q_at(&p);
        let gh: Vec<f64> = problem.grad_h.iter().map(|g| g.eval(&p)).collect();
        let det = gq[0] * gh[1] - gq[1] * gh[0];
        if det.abs() < 1e-300 {
            break;
        }
        let (fq, fh) = (problem.q_at(&p), problem.h_at(&p));
        let dx = (fq * gh[1] - fh * gq[1]) / det;
        let dy = (gq[0] * fh - gh[0] * fq) / det;
        let cand = [p[0] - dx, p[1] - dy];
        let better = problem.h_at(&cand).abs() <= fh.abs() && problem.q_at(&cand).abs() <= fq.abs().max(1e-15);
        if !better || dist(cand, p) > scale {
            break;
        }
        p = cand;
    }
    Ok(p)
}

/// Rejects zeros of `v` on the loops: local minima of `|v|` along each loop
/// are refined by golden-section search over the neighbouring chords.
fn check_boundary_zeros(problem: &Problem, lp: &BoundaryLoop) -> Result<(), MorseError> {
    let floor = problem.tol.boundary_zero * problem.scales.v;
    let norm = |p: &[f64]| problem.v_at(p).iter().map(|c| c * c).sum::<f64>().sqrt();
    let m = lp.len();
    let norms: Vec<f64> = lp.points.iter().map(|p| norm(p)).collect();
    for k in 0..m {
        let here = norms[k];
        if here > norms[(k + m - 1) % m] || here > norms[(k + 1) % m] {
            continue;
        }
        let prev = lp.point(k + m - 1);
        let cur = lp.point(k);
        let next = lp.point(k + 1);
        // s in [-1, 0] walks towards prev, [0, 1] towards next.
        let at = |s: f64| -> Result<[f64; 2], MorseError> {
            if s < 0.0 {
                chord_point(problem, cur, prev, -s)
            } else {
                chord_point(problem, cur, next, s)
            }
        };
        let (mut a, mut b) = (-1.0f64, 1.0f64);
        let ratio = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..60 {
            let c = b - ratio * (b - a);
            let d = a + ratio * (b - a);
            if norm(&at(c)?) < norm(&at(d)?) {
                b = d;
            } else {
                a = c;
            }
        }
        let best = at(0.5 * (a + b))?;
        let value = norm(&best).min(here);
        if value < floor {
            return Err(MorseError::BoundaryZero {
                at: best.to_vec(),
                norm: value,
            });
        }
    }
    Ok(())
}

/// Finds the tangencies and arcs on the traced boundary.
pub fn compute_strata(problem: &Problem, loops: Vec<BoundaryLoop>) -> Result<Stratification, MorseError> {
    let floor = problem.tol.genericity * problem.scales.q * problem.scales.v * problem.scales.v;
    let mut tangencies = Vec::new();
    let mut arcs = Vec::new();
    for (li, lp) in loops.iter().enumerate() {
        check_boundary_zeros(problem, lp)?;
        let m = lp.len();
        let signs: Vec<bool> = lp.points.iter().map(|p| problem.h_at(p) > 0.0).collect();
        let first = tangencies.len();
        for k in 0..m {
            if signs[k] == signs[(k + 1) % m] {
                continue;
            }
            let location = refine_tangency(problem, lp.point(k), lp.point(k + 1))?;
            let derivative = problem.dvh_at(&location);
            if derivative.abs() < floor {
                return Err(MorseError::GenericityFailure { at: location, derivative });
            }
            tangencies.push(TangencyPoint {
                location,
                loop_index: li,
                segment: k,
                derivative,
                is_plus: derivative > 0.0,
            });
        }
        let count = tangencies.len() - first;
        if count == 0 {
            arcs.push(Arc {
                loop_index: li,
                start: None,
                end: None,
                first_point: 0,
                last_point: m - 1,
                plus: signs[0],
            });
            continue;
        }
        for t in 0..count {
            let a = first + t;
            let b = first + (t + 1) % count;
            let first_point = (tangencies[a].segment + 1) % m;
            arcs.push(Arc {
                loop_index: li,
                start: Some(a),
                end: Some(b),
                first_point,
                last_point: tangencies[b].segment,
                plus: signs[first_point],
            });
        }
    }
    let plus1 = arcs.iter().filter(|a| a.plus && !a.is_full_loop()).count() as i64;
    let minus1 = arcs.iter().filter(|a| !a.plus && !a.is_full_loop()).count() as i64;
    let plus2 = tangencies.iter().filter(|t| t.is_plus).count() as i64;
    let minus2 = tangencies.len() as i64 - plus2;
    let chi = StrataChi {
        x: domain_euler(&loops),
        plus1,
        minus1,
        plus2,
        minus2,
    };
    Ok(Stratification {
        loops,
        tangencies,
        arcs,
        chi,
    })
}

/// An endpoint of a component of `X ∩ ℝu`.
#[derive(Debug, Clone, PartialEq)]
pub struct Endpoint1d {
    pub t: f64,
    pub point: Vec<f64>,
    pub is_left: bool,
    /// `v` points into the interval.
    pub inward: bool,
}

/// Strata of the one-dimensional set `X ∩ ℝu`.
#[derive(Debug, Clone, PartialEq)]
pub struct Strata1d {
    pub direction: Vec<f64>,
    pub intervals: Vec<(f64, f64)>,
    pub endpoints: Vec<Endpoint1d>,
    pub chi: StrataChi,
}

/// Restriction of `Q` and of `<v, u>` to the line `t ↦ t·u`.
pub(crate) fn line_polys(problem: &Problem, u: &[f64]) -> Result<(Polynomial<f64>, Polynomial<f64>), MorseError> {
    let a: Vec<Vec<f64>> = u.iter().map(|&c| vec![c]).collect();
    let q1 = problem.domain.q().compose_linear(&a, 0.0)?;
    let mut f = Polynomial::zero(1);
    for (p, &c) in problem.field.components().iter().zip(u) {
        f = &f + &p.compose_linear(&a, 0.0)?.scale(c);
    }
    Ok((q1, f))
}

/// Sign changes of `f` on `[-r, r]`, refined by bisection.
pub(crate) fn roots_on(f: &Polynomial<f64>, r: f64, samples: usize) -> Vec<f64> {
    let samples = samples.max(8);
    let step = 2.0 * r / samples as f64;
    let mut roots = Vec::new();
    let mut prev_t = -r;
    let mut prev = f.eval(&[prev_t]);
    for k in 1..=samples {
        let t = -r + k as f64 * step;
        let val = f.eval(&[t]);
        if (val > 0.0) != (prev > 0.0) {
            let (mut lo, mut hi, flo) = (prev_t, t, prev);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if (f.eval(&[mid]) > 0.0) == (flo > 0.0) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        prev_t = t;
        prev = val;
    }
    roots
}

/// Intervals of `X ∩ ℝu` for a unit vector `u` and the direction of `v` at
/// their endpoints. With `n = 1`, `u = [1]` gives the strata of `X` itself.
pub fn strata_1d(problem: &Problem, u: &[f64]) -> Result<Strata1d, MorseError> {
    let (q1, f) = line_polys(problem, u)?;
    let r = problem.scales.radius;
    let roots = roots_on(&q1, r, problem.tol.line_scan);
    let mut intervals = Vec::new();
    let mut endpoints = Vec::new();
    let floor = problem.tol.boundary_zero * problem.scales.v;
    for pair in roots.chunks(2) {
        if pair.len() < 2 {
            // Q < 0 at both ends of [-R, R], so roots pair up.
            break;
        }
        let (a, b) = (pair[0], pair[1]);
        intervals.push((a, b));
        for (t, is_left) in [(a, true), (b, false)] {
            let point: Vec<f64> = u.iter().map(|c| c * t).collect();
            let val = f.eval(&[t]);
            let full = problem.v_at(&point).iter().map(|c| c * c).sum::<f64>().sqrt();
            if val.abs() < floor || full < floor {
                return Err(MorseError::EndpointZero { at: point });
            }
            let inward = if is_left { val > 0.0 } else { val < 0.0 };
            endpoints.push(Endpoint1d { t, point, is_left, inward });
        }
    }
    let plus1 = endpoints.iter().filter(|e| e.inward).count() as i64;
    let chi = StrataChi {
        x: intervals.len() as i64,
        plus1,
        minus1: endpoints.len() as i64 - plus1,
        plus2: 0,
        minus2: 0,
    };
    Ok(Strata1d {
        direction: u.to_vec(),
        intervals,
        endpoints,
        chi,
    })
}

/// Crossings of the traced boundary with the line `ℝu`, polished onto the
/// curve along the line, each tagged with the sign of its arc.
pub fn line_strata(problem: &Problem, strat: &Stratification, u: &[f64]) -> Result<Vec<([f64; 2], bool)>, MorseError> {
    let (q1, _) = line_polys(problem, u)?;
    let dq1 = q1.derivative(0);
    let side = |p: [f64; 2]| u[0] * p[1] - u[1] * p[0];
    let signs = strat.segment_signs();
    let mut out = Vec::new();
    for (lp, loop_signs) in strat.loops.iter().zip(&signs) {
        for (k, &plus) in loop_signs.iter().enumerate() {
            let (a, b) = (lp.point(k), lp.point(k + 1));
            let (sa, sb) = (side(a), side(b));
            if (sa > 0.0) == (sb > 0.0) {
                continue;
            }
            let w = sa / (sa - sb);
            let p = [a[0] + w * (b[0] - a[0]), a[1] + w * (b[1] - a[1])];
            let mut t = p[0] * u[0] + p[1] * u[1];
            for _ in 0..20 {
                let d = dq1.eval(&[t]);
                if d == 0.0 {
                    break;
                }
                let step = q1.eval(&[t]) / d;
                t -= step;
                if step.abs() < 1e-15 * (1.0 + t.abs()) {
                    break;
                }
            }
            out.push(([t * u[0], t * u[1]], plus));
        }
    }
    Ok(out)
}
