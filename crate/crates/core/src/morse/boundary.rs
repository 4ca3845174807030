use std::collections::HashMap;
use std::f64::consts::TAU;

use super::{MorseError, Problem};

/// A closed component of `Q = 0`, oriented so that `X_Q` lies on the left.
/// The closing segment from the last point back to the first is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryLoop {
    pub points: Vec<[f64; 2]>,
    /// Total turning of the tangent divided by `2π`, before rounding.
    pub turning_integral: f64,
    pub turning_number: i64,
}

impl BoundaryLoop {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, k: usize) -> [f64; 2] {
        self.points[k % self.points.len()]
    }

    pub fn length(&self) -> f64 {
        (0..self.len())
            .map(|k| dist(self.point(k), self.point(k + 1)))
            .sum()
    }
}

pub(crate) fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Edge of the sampling grid: `(i, j, vertical)` joins vertex `(i, j)` to
/// `(i+1, j)` or, when vertical, to `(i, j+1)`.
type EdgeId = (usize, usize, bool);

/// Traces `Q = 0` inside `[-R, R]²` by marching squares, polishing every
/// crossing onto the curve.
pub fn trace_boundary(problem: &Problem) -> Result<Vec<BoundaryLoop>, MorseError> {
    if problem.dim() != 2 {
        return Err(MorseError::UnsupportedDimension(problem.dim()));
    }
    let n = problem.tol.grid_resolution.max(4);
    let r = problem.scales.radius;
    let step = 2.0 * r / n as f64;
    let coord = |i: usize| -r + i as f64 * step;
    let q = problem.domain.q();
    let mut values = vec![vec![0.0; n + 1]; n + 1];
    for (i, col) in values.iter_mut().enumerate() {
        for (j, slot) in col.iter_mut().enumerate() {
            *slot = q.eval(&[coord(i), coord(j)]);
        }
    }
    let inside = |i: usize, j: usize| values[i][j] > 0.0;

    let mut links: HashMap<EdgeId, Vec<EdgeId>> = HashMap::new();
    let mut link = |a: EdgeId, b: EdgeId| {
        links.entry(a).or_default().push(b);
        links.entry(b).or_default().push(a);
    };
    for i in 0..n {
        for j in 0..n {
            let c = [inside(i, j), inside(i + 1, j), inside(i + 1, j + 1), inside(i, j + 1)];
            // bottom, right, top, left
            let edges: [EdgeId; 4] = [(i, j, false), (i + 1, j, true), (i, j + 1, false), (i, j, true)];
            let crossed = [c[0] != c[1], c[1] != c[2], c[3] != c[2], c[0] != c[3]];
            let hits: Vec<usize> = (0..4).filter(|&k| crossed[k]).collect();
            match hits.len() {
                0 => {}
                2 => link(edges[hits[0]], edges[hits[1]]),
                4 => {
                    let centre = q.eval(&[coord(i) + step / 2.0, coord(j) + step / 2.0]) > 0.0;
                    if centre == c[0] {
                        // c0 and c2 connect through the centre; cut off c1 and c3.
                        link(edges[0], edges[1]);
                        link(edges[2], edges[3]);
                    } else {
                        link(edges[3], edges[0]);
                        link(edges[1], edges[2]);
                    }
                }
                _ => unreachable!("a square has an even number of sign changes"),
            }
        }
    }

    let crossing = |e: EdgeId| -> [f64; 2] {
        let (i, j, vertical) = e;
        let (i2, j2) = if vertical { (i, j + 1) } else { (i + 1, j) };
        let (a, b) = (values[i][j], values[i2][j2]);
        let t = a / (a - b);
        [coord(i) + t * (coord(i2) - coord(i)), coord(j) + t * (coord(j2) - coord(j))]
    };

    let mut keys: Vec<EdgeId> = links.keys().copied().collect();
    keys.sort_unstable();
    for e in &keys {
        if links[e].len() != 2 {
            return Err(MorseError::OpenContour { at: crossing(*e) });
        }
    }
    let mut visited: HashMap<EdgeId, bool> = keys.iter().map(|&e| (e, false)).collect();
    let mut loops = Vec::new();
    for &start in &keys {
        if visited[&start] {
            continue;
        }
        let mut chain = vec![start];
        visited.insert(start, true);
        let mut prev = start;
        let mut cur = links[&start][0];
        while cur != start {
            if visited[&cur] {
                return Err(MorseError::OpenContour { at: crossing(cur) });
            }
            visited.insert(cur, true);
            chain.push(cur);
            let nb = &links[&cur];
            let next = if nb[0] == prev { nb[1] } else { nb[0] };
            prev = cur;
            cur = next;
        }
        let mut points: Vec<[f64; 2]> = Vec::with_capacity(chain.len());
        for e in chain {
            let p = problem.polish_to_boundary(&crossing(e))?;
            let p = [p[0], p[1]];
            if points.last().is_none_or(|&last| dist(last, p) > 1e-3 * step) {
                points.push(p);
            }
        }
        while points.len() > 1 && dist(points[0], *points.last().expect("nonempty")) <= 1e-3 * step {
            points.pop();
        }
        if points.len() < 3 {
            continue;
        }
        orient(problem, &mut points);
        let turning_integral = turning(&points);
        let turning_number = turning_integral.round() as i64;
        if (turning_integral - turning_number as f64).abs() > problem.tol.integer_slack {
            return Err(MorseError::NonIntegerTurning {
                loop_index: loops.len(),
                value: turning_integral,
            });
        }
        loops.push(BoundaryLoop {
            points,
            turning_integral,
            turning_number,
        });
    }
    Ok(loops)
}

/// Majority vote on whether `∇Q` (the inward normal) is the left normal.
fn orient(problem: &Problem, points: &mut [[f64; 2]]) {
    let m = points.len();
    let mut vote = 0i64;
    for k in 0..m {
        let a = points[(k + m - 1) % m];
        let b = points[(k + 1) % m];
        let t = [b[0] - a[0], b[1] - a[1]];
        let g = problem.grad_q_at(&points[k]);
        let left = -t[1] * g[0] + t[0] * g[1];
        vote += if left > 0.0 { 1 } else { -1 };
    }
    if vote < 0 {
        points.reverse();
    }
}

/// Sum of exterior angles over `2π`.
fn turning(points: &[[f64; 2]]) -> f64 {
    let m = points.len();
    let mut total = 0.0;
    for k in 0..m {
        let p0 = points[(k + m - 1) % m];
        let p1 = points[k];
        let p2 = points[(k + 1) % m];
        let d0 = [p1[0] - p0[0], p1[1] - p0[1]];
        let d1 = [p2[0] - p1[0], p2[1] - p1[1]];
        let cross = d0[0] * d1[1] - d0[1] * d1[0];
        let dot = d0[0] * d1[0] + d0[1] * d1[1];
        total += cross.atan2(dot);
    }
    total / TAU
}

/// `χ(X_Q)` as the sum of turning numbers of the oriented boundary loops.
pub fn domain_euler(loops: &[BoundaryLoop]) -> i64 {
    loops.iter().map(|l| l.turning_number).sum()
}

/// Winding number of `f` along a loop, over `2π`, unrounded. `f` must not
/// vanish on the loop.
pub fn loop_winding(lp: &BoundaryLoop, f: impl Fn([f64; 2]) -> [f64; 2]) -> f64 {
    let m = lp.len();
    let vals: Vec<[f64; 2]> = lp.points.iter().map(|&p| f(p)).collect();
    let mut total = 0.0;
    for k in 0..m {
        let a = vals[k];
        let b = vals[(k + 1) % m];
        total += (a[0] * b[1] - a[1] * b[0]).atan2(a[0] * b[0] + a[1] * b[1]);
    }
    total / TAU
}
