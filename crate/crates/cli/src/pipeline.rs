use std::collections::BTreeMap;
use std::time::Instant;

use eqmorse::gauss::{equivariant_gauss_degree, GaussError, GaussReport};
use eqmorse::khovanskii::verify_bounds;
use eqmorse::morse::{symmetrize_field, verify_identities, Check, IndexReport, MorseError, Problem};
use eqmorse::poly::{infinity_check, Polynomial};
use eqmorse::{BurnsideElement, BurnsideRing, Tolerances, VectorField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::problem::{Built, ProblemSpec};
use crate::report::*;
use crate::CliError;

/// Which part of the pipeline to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Index by both routes, identity checks, bounds, and the optional extras.
    Verify,
    /// Index plus lattice bounds.
    Bounds,
    /// Group, subgroup classes and marks only.
    Marks,
    /// Normal-map degrees with the field as the nonvanishing `w`.
    Gauss,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Verify => "verify",
            Mode::Bounds => "bounds",
            Mode::Marks => "marks",
            Mode::Gauss => "gauss",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub mode: Mode,
    pub tol_profile: Option<String>,
    pub grid: Option<usize>,
    pub seed: u64,
    /// Force the stability reruns regardless of the problem options.
    pub stability: bool,
    pub timings: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mode: Mode::Verify,
            tol_profile: None,
            grid: None,
            seed: 0,
            stability: false,
            timings: false,
        }
    }
}

/// Magnitude of the invariant perturbation in the stability rerun,
/// relative to the largest field coefficient.
pub const PERTURBATION: f64 = 1e-6;

struct Clock {
    enabled: bool,
    start: Instant,
    marks: BTreeMap<String, f64>,
}

impl Clock {
    fn lap(&mut self, stage: &str) {
        if self.enabled {
            let now = Instant::now();
            self.marks.insert(stage.to_string(), (now - self.start).as_secs_f64());
            self.start = now;
        }
    }
}

fn morse_refusal(stage: &str, e: &MorseError) -> (Verdict, Refusal) {
    let verdict = if e.hypothesis().is_some() {
        Verdict::Refused
    } else {
        Verdict::Internal
    };
    (
        verdict,
        Refusal {
            stage: stage.into(),
            hypothesis: e.hypothesis().map(str::to_string),
            message: e.to_string(),
        },
    )
}

fn cli_refusal(e: &CliError) -> (Verdict, Refusal) {
    let (stage, hypothesis) = match e {
        CliError::Refusal { stage, hypothesis, .. } => (stage.clone(), Some(hypothesis.clone())),
        CliError::Internal { stage, .. } => (stage.clone(), None),
        CliError::Validation { field, .. } => (format!("input ({field})"), Some("well-formed input".into())),
        _ => ("input".into(), Some("well-formed input".into())),
    };
    let verdict = if e.exit_code() == crate::exit::INTERNAL {
        Verdict::Internal
    } else {
        Verdict::Refused
    };
    (
        verdict,
        Refusal {
            stage,
            hypothesis,
            message: match e {
                CliError::Refusal { message, .. } | CliError::Internal { message, .. } => message.clone(),
                other => other.to_string(),
            },
        },
    )
}

pub(crate) fn element_summary(ring: &BurnsideRing, e: &BurnsideElement) -> ElementSummary {
    ElementSummary {
        coefficients: e.coefficients().to_vec(),
        characters: ring.ch(e).map(|c| c.values).unwrap_or_default(),
        display: e.display(&ring.table),
    }
}

fn check_rows(checks: &[Check]) -> Vec<CheckRow> {
    checks
        .iter()
        .map(|c| CheckRow {
            name: c.name.clone(),
            pass: c.pass,
            residual: c.residual.is_finite().then_some(c.residual),
            detail: c.detail.clone(),
        })
        .collect()
}

fn group_summary(built: &Built, ring: &BurnsideRing, tol: &Tolerances) -> GroupSummary {
    let classes = ring
        .table
        .classes
        .iter()
        .enumerate()
        .map(|(i, c)| ClassRow {
            label: ring.table.label(i),
            order: c.order(),
            representative: c
                .representative
                .members()
                .iter()
                .map(|&m| ring.group.elements()[m].to_string())
                .collect(),
            conjugates: c.conjugates.len(),
            weyl_order: c.weyl_order,
            fixed_dim: built.rep.fixed_subspace(&c.representative, tol.fixed_space_rel).dim(),
        })
        .collect();
    GroupSummary {
        order: ring.group.order(),
        faithful: built.rep.is_faithful(),
        classes,
        marks: ring.table.marks.clone(),
    }
}

pub fn index_summary(problem: &Problem, r: &IndexReport) -> IndexSummary {
    let ring = &problem.ring;
    let label = |z: usize| ring.table.label(r.zeros[z].stabilizer_class);
    let (loops, tangencies) = match &r.strata.full {
        Some(s) => (
            s.loops.len(),
            s.tangencies
                .iter()
                .map(|t| TangencyRow {
                    location: t.location,
                    derivative: t.derivative,
                    plus: t.is_plus,
                })
                .collect(),
        ),
        None => (0, vec![]),
    };
    IndexSummary {
        local: element_summary(ring, &r.index_local),
        strata: element_summary(ring, &r.strata.element),
        per_class: strata_rows(problem, r),
        zeros: r
            .zeros
            .iter()
            .enumerate()
            .map(|(i, z)| ZeroRow {
                location: z.location.clone(),
                det: z.det,
                stabilizer: label(i),
                q_value: z.q_value,
            })
            .collect(),
        orbits: r
            .orbits
            .iter()
            .map(|o| OrbitRow {
                representative: o.representative,
                size: o.members.len(),
                stabilizer: label(o.representative),
                local: format!("{:?}", o.local.coefficients()),
                induced: o.induced.coefficients().to_vec(),
            })
            .collect(),
        loops,
        tangencies,
        checks: check_rows(&r.checks),
    }
}

fn strata_rows(problem: &Problem, r: &IndexReport) -> Vec<StrataRow> {
    r.strata
        .classes
        .iter()
        .map(|c| StrataRow {
            label: problem.ring.table.label(c.class),
            fixed_dim: c.fixed_dim,
            chi_x: c.chi.x,
            chi_plus1: c.chi.plus1,
            chi_minus1: c.chi.minus1,
            chi_plus2: c.chi.plus2,
            chi_minus2: c.chi.minus2,
            alternating_sum: c.chi.index(),
        })
        .collect()
}

pub fn fingerprint(problem: &Problem, r: &IndexReport) -> Fingerprint {
    Fingerprint {
        index: r.index_local.coefficients().to_vec(),
        strata: strata_rows(problem, r),
        zeros: r.zeros.len(),
        tangencies: r.strata.full.as_ref().map_or(0, |s| s.tangencies.len()),
    }
}

fn gauss_summary(problem: &Problem, g: &GaussReport) -> GaussSummary {
    GaussSummary {
        per_class: g
            .classes
            .iter()
            .map(|c| GaussRow {
                label: problem.ring.table.label(c.class),
                fixed_dim: c.fixed_dim,
                direct: c.direct,
                strata: c.strata,
                euler: c.euler,
                curvature_integral: c.curvature.as_ref().map(|e| e.integral),
            })
            .collect(),
        degree: element_summary(&problem.ring, &g.deg_g),
        checks: check_rows(&g.checks),
    }
}

/// A random field with component degrees within the bounds, averaged over
/// the group and scaled so that its largest coefficient is `size`.
pub fn invariant_perturbation(problem: &Problem, seed: u64, size: f64) -> VectorField {
    let n = problem.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bounds = problem.field.degree_bounds().to_vec();
    let components: Vec<Polynomial<f64>> = bounds
        .iter()
        .map(|&m| {
            let mut terms = Vec::new();
            for a in 0..=m as u32 {
                if n == 1 {
                    terms.push((vec![a], rng.gen_range(-1.0..1.0)));
                    continue;
                }
                for b in 0..=(m as u32 - a) {
                    terms.push((vec![a, b], rng.gen_range(-1.0..1.0)));
                }
            }
            Polynomial::from_terms(n, terms).expect("finite coefficients")
        })
        .collect();
    let raw = VectorField::new(components, Some(bounds.clone())).expect("degrees within bounds");
    let sym = symmetrize_field(&problem.rep, &raw);
    let scale = size / sym.max_abs_coeff().max(f64::MIN_POSITIVE);
    let scaled = sym.components().iter().map(|c| c.scale(scale)).collect();
    VectorField::new(scaled, Some(bounds)).expect("degrees within bounds")
}

fn stability(problem: &Problem, base: &IndexReport, seed: u64) -> StabilitySummary {
    let base_fp = fingerprint(problem, base);
    let mut variants = Vec::new();
    let mut run = |name: &str, p: Result<Problem, MorseError>| {
        let outcome = p.and_then(|p| verify_identities(&p).map(|r| (fingerprint(&p, &r), r.passed())));
        let variant = match outcome {
            Ok((fp, passed)) => Variant {
                name: name.into(),
                matches: fp == base_fp && passed,
                detail: if passed { "checks pass".into() } else { "identity checks fail".into() },
                fingerprint: Some(fp),
            },
            Err(e) => Variant {
                name: name.into(),
                fingerprint: None,
                matches: false,
                detail: e.to_string(),
            },
        };
        variants.push(variant);
    };
    let mut fine = problem.tol.clone();
    fine.grid_resolution *= 2;
    run("grid_doubled", problem.with_tolerances(fine));
    let delta = invariant_perturbation(problem, seed, PERTURBATION * problem.scales.v);
    run("perturbed", problem.with_field(problem.field.add(&delta)));
    StabilitySummary {
        pass: variants.iter().all(|v| v.matches),
        seed,
        base: base_fp,
        variants,
    }
}

/// Runs the requested stages. Refusals and internal errors are recorded in
/// the report rather than returned.
pub fn run_pipeline(spec: &ProblemSpec, cfg: &RunConfig) -> Report {
    let mut clock = Clock {
        enabled: cfg.timings,
        start: Instant::now(),
        marks: BTreeMap::new(),
    };
    let mut report = Report {
        schema: crate::problem::SCHEMA,
        mode: cfg.mode.name().into(),
        problem: spec.clone(),
        tolerances: BTreeMap::new(),
        group: None,
        infinity: None,
        index: None,
        bounds: None,
        gauss: None,
        stability: None,
        refusal: None,
        verdict: Verdict::Pass,
        timings: None,
    };
    let outcome = stages(spec, cfg, &mut report, &mut clock);
    if let Err((verdict, refusal)) = outcome {
        report.verdict = verdict;
        report.refusal = Some(refusal);
    }
    if cfg.timings {
        report.timings = Some(clock.marks);
    }
    report
}

fn stages(spec: &ProblemSpec, cfg: &RunConfig, report: &mut Report, clock: &mut Clock) -> Result<(), (Verdict, Refusal)> {
    let tol = spec
        .tolerances(cfg.tol_profile.as_deref(), cfg.grid)
        .map_err(|e| cli_refusal(&e))?;
    report.tolerances = tol.entries().into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    let built = spec.build(tol.clone()).map_err(|e| cli_refusal(&e))?;
    let ring = BurnsideRing::new(built.group.clone());
    report.group = Some(group_summary(&built, &ring, &tol));
    clock.lap("group");
    if cfg.mode == Mode::Marks {
        return Ok(());
    }

    let problem = Problem::new(ring, built.rep, built.field, built.domain, tol.clone())
        .map_err(|e| morse_refusal("invariance", &e))?;
    let infinity = infinity_check(&problem.field).map_err(|e| morse_refusal("infinity screen", &e.into()))?;
    report.infinity = Some(InfinitySummary {
        pass: infinity.pass,
        detail: if infinity.pass {
            "top-degree forms have no common real zero".into()
        } else {
            format!("top-degree forms nearly vanish along {:?}", infinity.suspicious)
        },
    });
    clock.lap("setup");

    let mut pass = true;
    if cfg.mode == Mode::Gauss {
        let g = run_gauss(&problem)?;
        pass &= g.passed();
        report.gauss = Some(gauss_summary(&problem, &g));
        clock.lap("gauss");
        report.verdict = if pass { Verdict::Pass } else { Verdict::Fail };
        return Ok(());
    }

    let index = verify_identities(&problem).map_err(|e| morse_refusal("index", &e))?;
    pass &= index.passed();
    report.index = Some(index_summary(&problem, &index));
    clock.lap("index");

    let entries = verify_bounds(
        &problem.ring,
        &index.index_local,
        &problem.fixed,
        problem.domain.q(),
        problem.field.degree_bounds(),
        infinity.pass,
        &tol,
    )
    .map_err(|e| {
        (
            Verdict::Internal,
            Refusal {
                stage: "bounds".into(),
                hypothesis: None,
                message: e.to_string(),
            },
        )
    })?;
    pass &= entries.iter().all(|e| e.holds || !e.applicable);
    report.bounds = Some(
        entries
            .iter()
            .map(|e| BoundRow {
                label: problem.ring.table.label(e.class),
                value: e.value,
                bound: e.bound.to_string(),
                subset: e.subset.clone(),
                restricted_degree: e.d_v,
                applicable: e.applicable,
                holds: e.holds,
            })
            .collect(),
    );
    clock.lap("bounds");
    if cfg.mode == Mode::Bounds {
        report.verdict = if pass { Verdict::Pass } else { Verdict::Fail };
        return Ok(());
    }

    if spec.options.gauss {
        let g = run_gauss(&problem)?;
        pass &= g.passed();
        report.gauss = Some(gauss_summary(&problem, &g));
        clock.lap("gauss");
    }
    if cfg.stability || spec.options.stability {
        let s = stability(&problem, &index, cfg.seed);
        pass &= s.pass;
        report.stability = Some(s);
        clock.lap("stability");
    }
    report.verdict = if pass { Verdict::Pass } else { Verdict::Fail };
    Ok(())
}

fn run_gauss(problem: &Problem) -> Result<GaussReport, (Verdict, Refusal)> {
    equivariant_gauss_degree(problem).map_err(|e| match e {
        GaussError::Morse(m) => morse_refusal("gauss", &m),
        other => (
            Verdict::Refused,
            Refusal {
                stage: "gauss".into(),
                hypothesis: other.hypothesis().map(str::to_string),
                message: other.to_string(),
            },
        ),
    })
}

/// Builds the validated problem for callers that need the library objects
/// directly (rendering).
pub fn build_problem(spec: &ProblemSpec, cfg: &RunConfig) -> Result<Problem, CliError> {
    let tol = spec.tolerances(cfg.tol_profile.as_deref(), cfg.grid)?;
    let built = spec.build(tol.clone())?;
    Problem::new(BurnsideRing::new(built.group), built.rep, built.field, built.domain, tol).map_err(|e| match e.hypothesis() {
        Some(h) => CliError::Refusal {
            stage: "invariance".into(),
            hypothesis: h.into(),
            message: e.to_string(),
        },
        None => CliError::Internal {
            stage: "invariance".into(),
            message: e.to_string(),
        },
    })
}
