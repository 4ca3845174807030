use super::boundary::{dist, loop_winding};
use super::index::{index_via_strata, StrataIndex};
use super::strata::line_strata;
use super::zeros::{assemble_index_local, find_zeros, restricted_det, Orbit, ZeroPoint};
use super::{MorseError, Problem};
use crate::burnside::BurnsideElement;

/// Names of the identity checks, in report order.
pub const CHECK_NAMES: [&str; 6] = [
    "morse_equality",
    "character_consistency",
    "fixed_set_strata",
    "tangency_divisibility",
    "euler_split",
    "boundary_degree",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub residual: f64,
    pub detail: String,
}

impl Check {
    fn new(name: &str, pass: bool, residual: f64, detail: impl Into<String>) -> Self {
        Check {
            name: name.to_string(),
            pass,
            residual,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct IndexReport {
    pub zeros: Vec<ZeroPoint>,
    pub orbits: Vec<Orbit>,
    pub index_local: BurnsideElement,
    pub strata: StrataIndex,
    /// `Σ sign det J` over the zeros in `X`.
    pub zero_degree: i64,
    /// Degree of `v` on `∂X` (winding for `n = 2`).
    pub boundary_degree: i64,
    pub checks: Vec<Check>,
}

impl IndexReport {
    pub fn index_strata(&self) -> &BurnsideElement {
        &self.strata.element
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Degree of `v` on the boundary of `X`, unrounded.
fn boundary_degree(problem: &Problem, strata: &StrataIndex) -> f64 {
    if let Some(full) = &strata.full {
        return full
            .loops
            .iter()
            .map(|lp| {
                loop_winding(lp, |p| {
                    let v = problem.v_at(&p);
                    [v[0], v[1]]
                })
            })
            .sum();
    }
    let line = strata.classes[0].line.as_ref().expect("n = 1 strata are a line");
    let sign = |t: f64| problem.v_at(&[t])[0].signum();
    line.intervals.iter().map(|&(a, b)| 0.5 * (sign(b) - sign(a))).sum()
}

fn hausdorff(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    if a.is_empty() || b.is_empty() {
        return f64::INFINITY;
    }
    let one_way = |x: &[[f64; 2]], y: &[[f64; 2]]| {
        x.iter()
            .map(|p| y.iter().map(|q| dist(*p, *q)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

/// Computes the index both ways and checks the identities relating them.
pub fn verify_identities(problem: &Problem) -> Result<IndexReport, MorseError> {
    let strata = index_via_strata(problem)?;
    let boundary_raw = boundary_degree(problem, &strata);
    let boundary = boundary_raw.round() as i64;

    let mut zeros = find_zeros(problem, 1)?;
    let degree_of = |zs: &[ZeroPoint]| zs.iter().map(ZeroPoint::sign).sum::<i64>();
    if degree_of(&zeros) != boundary {
        // A missed zero shows up as a degree mismatch: reseed densely.
        zeros = find_zeros(problem, 4)?;
    }
    let zero_degree = degree_of(&zeros);
    let (index_local, orbits) = assemble_index_local(problem, &zeros)?;

    let ring = &problem.ring;
    let table = &ring.table;
    let mut checks = Vec::new();

    let equal = index_local == strata.element;
    checks.push(Check::new(
        "morse_equality",
        equal,
        if equal { 0.0 } else { 1.0 },
        format!(
            "local {} vs strata {}",
            index_local.display(table),
            strata.element.display(table)
        ),
    ));

    let local_ch = ring.ch(&index_local).map_err(|source| MorseError::Inconsistent {
        stage: "character map".into(),
        source,
    })?;
    let mut worst = 0i64;
    for (class, space) in problem.fixed.iter().enumerate() {
        let h = &table.classes[class].representative;
        let direct: i64 = zeros
            .iter()
            .filter(|z| h.is_subset_of(&z.stabilizer))
            .map(|z| restricted_det(&z.jacobian, &space.basis).signum() as i64)
            .sum();
        worst = worst.max((direct - local_ch.values[class]).abs());
    }
    checks.push(Check::new(
        "character_consistency",
        worst == 0,
        worst as f64,
        format!("characters {:?}", local_ch.values),
    ));

    checks.push(fixed_set_check(problem, &strata)?);

    let tangencies = strata.full.as_ref().map_or(0, |s| s.tangencies.len());
    let effective = ring.group.order() / problem.rep.kernel().len();
    let modulus = if effective.is_multiple_of(2) { effective } else { 2 * effective };
    checks.push(Check::new(
        "tangency_divisibility",
        tangencies % modulus == 0,
        (tangencies % modulus) as f64,
        format!("{tangencies} tangencies, modulus {modulus}"),
    ));

    checks.push(euler_split_check(problem, &strata, &index_local));

    let slack = (boundary_raw - boundary as f64).abs();
    checks.push(Check::new(
        "boundary_degree",
        boundary == zero_degree && slack <= problem.tol.integer_slack,
        (boundary - zero_degree).abs() as f64 + slack,
        format!("boundary degree {boundary_raw:.4}, zero signs sum {zero_degree}"),
    ));

    Ok(IndexReport {
        zeros,
        orbits,
        index_local,
        strata,
        zero_degree,
        boundary_degree: boundary,
        checks,
    })
}

/// On every fixed line, the interval endpoints must be where the line meets
/// the planar boundary, the inward ones exactly those on plus arcs, and no
/// tangency may lie on the line.
fn fixed_set_check(problem: &Problem, strata: &StrataIndex) -> Result<Check, MorseError> {
    let Some(full) = &strata.full else {
        return Ok(Check::new("fixed_set_strata", true, 0.0, "one-dimensional"));
    };
    let tol = problem.tol.hausdorff * problem.scales.radius;
    let mut residual: f64 = 0.0;
    let mut pass = true;
    let mut lines = 0;
    for cs in &strata.classes {
        let Some(line) = &cs.line else { continue };
        lines += 1;
        let u = &line.direction;
        let crossings = line_strata(problem, full, u)?;
        let on_line: Vec<[f64; 2]> = line.endpoints.iter().map(|e| [e.point[0], e.point[1]]).collect();
        let inward: Vec<[f64; 2]> = line
            .endpoints
            .iter()
            .filter(|e| e.inward)
            .map(|e| [e.point[0], e.point[1]])
            .collect();
        let all_cross: Vec<[f64; 2]> = crossings.iter().map(|c| c.0).collect();
        let plus_cross: Vec<[f64; 2]> = crossings.iter().filter(|c| c.1).map(|c| c.0).collect();
        let d_all = hausdorff(&on_line, &all_cross);
        let d_plus = hausdorff(&inward, &plus_cross);
        let near_tangency = full
            .tangencies
            .iter()
            .any(|t| (u[0] * t.location[1] - u[1] * t.location[0]).abs() <= tol);
        residual = residual.max(d_all).max(d_plus);
        pass &= d_all <= tol && d_plus <= tol && !near_tangency;
    }
    Ok(Check::new(
        "fixed_set_strata",
        pass,
        residual,
        format!("{lines} fixed lines, Hausdorff residual {residual:.3e}"),
    ))
}

/// `χ^G(X) = index + χ^G(∂₁⁺X) − χ^G(∂₂⁺X)` in the Burnside ring.
fn euler_split_check(problem: &Problem, strata: &StrataIndex, index: &BurnsideElement) -> Check {
    let ring = &problem.ring;
    let pick = |f: fn(&super::StrataChi) -> i64| strata.classes.iter().map(|c| f(&c.chi)).collect::<Vec<i64>>();
    let parts = (
        ring.from_characters(pick(|c| c.x)),
        ring.from_characters(pick(|c| c.plus1)),
        ring.from_characters(pick(|c| c.plus2)),
    );
    match parts {
        (Ok(x), Ok(p1), Ok(p2)) => {
            let rhs = &(index + &p1) - &p2;
            let pass = x == rhs;
            Check::new(
                "euler_split",
                pass,
                if pass { 0.0 } else { 1.0 },
                format!("χ(X) = {}", x.display(&ring.table)),
            )
        }
        (x, p1, p2) => {
            let err = [x.err(), p1.err(), p2.err()].into_iter().flatten().next().expect("one failed");
            Check::new("euler_split", false, 1.0, format!("strata characters not realisable: {err}"))
        }
    }
}
