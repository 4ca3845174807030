//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.
//!
//! Run with `cargo test -p eqmorse-cli --test acceptance`.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use eqmorse::group::group_closure;
use eqmorse::khovanskii::{lattice_bound, verify_bounds};
use eqmorse::morse::verify_identities;
use eqmorse::{BurnsideElement, BurnsideRing, FiniteGroup, Permutation, Tolerances};
use eqmorse_cli::pipeline::build_problem;
use eqmorse_cli::report::{GaussSummary, IndexSummary, Report};
use eqmorse_cli::{parse_problem, parse_problem_str, run_pipeline, Mode, RunConfig, Verdict};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random integer vectors per group for the character round trip.
const ROUND_TRIPS: usize = 1000;
/// Random triples per group for the ring axioms.
const AXIOM_TRIPLES: usize = 200;
/// Wall-clock limits for the algebraic criteria.
const BURNSIDE_LIMIT: Duration = Duration::from_secs(5);
const BOUNDS_LIMIT: Duration = Duration::from_secs(10);
/// Exhaustive range for the lattice count.
const MAX_TOTAL_DEGREE: usize = 24;
const MAX_Q_DEGREE: usize = 10;
const MAX_VARIABLES: usize = 3;
/// Curvature integrals against their integer targets.
const CURVATURE_TOL: f64 = 1e-3;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn problems_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("problems")
}

fn load(name: &str) -> eqmorse_cli::ProblemSpec {
    parse_problem(&problems_dir().join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn run(name: &str, mode: Mode) -> Report {
    let cfg = RunConfig {
        mode,
        ..RunConfig::default()
    };
    run_pipeline(&load(name), &cfg)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------------------
// 1. Burnside algebra

fn group(cycles: &[&str], degree: usize) -> FiniteGroup {
    let gens: Vec<Permutation> = cycles.iter().map(|c| Permutation::from_cycles(c, degree).unwrap()).collect();
    group_closure(&gens).unwrap()
}

fn zoo() -> Vec<(&'static str, FiniteGroup)> {
    vec![
        ("Z2", group(&["(0 1)"], 2)),
        ("Z3", group(&["(0 1 2)"], 3)),
        ("Z4", group(&["(0 1 2 3)"], 4)),
        ("Z2xZ2", group(&["(0 1)", "(2 3)"], 4)),
        ("S3", group(&["(0 1 2)", "(1 2)"], 3)),
        ("D4", group(&["(0 1 2 3)", "(1 3)"], 4)),
    ]
}

/// `|N(H)| / |H|` by testing every element.
fn weyl_by_enumeration(g: &FiniteGroup, h: &[usize]) -> usize {
    let normalizes = |x: usize| h.iter().all(|&y| h.contains(&g.mul(g.mul(x, y), g.inv(x))));
    (0..g.order()).filter(|&x| normalizes(x)).count() / h.len()
}

/// `|(G/K)^H|` as the number of `g` with `g⁻¹Hg ⊆ K`, divided by `|K|`.
fn mark_by_enumeration(g: &FiniteGroup, k: &[usize], h: &[usize]) -> i64 {
    let inside = |x: usize| h.iter().all(|&y| k.contains(&g.mul(g.mul(g.inv(x), y), x)));
    ((0..g.order()).filter(|&x| inside(x)).count() / k.len()) as i64
}

fn random_element(ring: &BurnsideRing, rng: &mut ChaCha8Rng, span: i64) -> BurnsideElement {
    let coeffs = (0..ring.table.len()).map(|_| rng.gen_range(-span..=span)).collect();
    BurnsideElement::new(&ring.table, coeffs).unwrap()
}

fn burnside() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut counts = Vec::new();
    for (name, g) in zoo() {
        let ring = BurnsideRing::new(g);
        let t = &ring.table;
        let n = t.len();
        counts.push(format!("{name}:{n}"));
        for k in 0..n {
            let kk = t.classes[k].representative.members();
            for h in 0..n {
                let hh = t.classes[h].representative.members();
                let m = mark_by_enumeration(&ring.group, kk, hh);
                ensure(t.marks[k][h] == m, || format!("{name}: mark[{k}][{h}] = {} != {m}", t.marks[k][h]))?;
                ensure(h <= k || m == 0, || format!("{name}: not triangular at [{k}][{h}]"))?;
            }
            let w = weyl_by_enumeration(&ring.group, kk) as i64;
            ensure(t.marks[k][k] == w, || format!("{name}: diagonal {k} is {} not |W| = {w}", t.marks[k][k]))?;
        }
        for _ in 0..ROUND_TRIPS {
            let a = random_element(&ring, &mut rng, 1000);
            let back = ring.from_characters(ring.ch(&a).unwrap().values).unwrap();
            ensure(back == a, || format!("{name}: round trip {:?} -> {:?}", a.coefficients(), back.coefficients()))?;
        }
        let one = BurnsideElement::one(&ring.table);
        ensure(one == BurnsideElement::orbit(&ring.table, t.whole_class()), || format!("{name}: identity is not [G/G]"))?;
        for _ in 0..AXIOM_TRIPLES {
            let a = random_element(&ring, &mut rng, 6);
            let b = random_element(&ring, &mut rng, 6);
            let c = random_element(&ring, &mut rng, 6);
            let mul = |x: &BurnsideElement, y: &BurnsideElement| ring.multiply(x, y).unwrap();
            ensure(mul(&mul(&a, &b), &c) == mul(&a, &mul(&b, &c)), || format!("{name}: associativity"))?;
            ensure(mul(&one, &a) == a && mul(&a, &one) == a, || format!("{name}: [G/G] is not the identity"))?;
            ensure(mul(&a, &b) == mul(&b, &a), || format!("{name}: commutativity"))?;
            // The character map turns products into pointwise products.
            let (ca, cb) = (ring.ch(&a).unwrap().values, ring.ch(&b).unwrap().values);
            let cab = ring.ch(&mul(&a, &b)).unwrap().values;
            let pointwise: Vec<i64> = ca.iter().zip(&cb).map(|(x, y)| x * y).collect();
            ensure(cab == pointwise, || format!("{name}: ch is not multiplicative"))?;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < BURNSIDE_LIMIT, || format!("took {elapsed:?}, limit {BURNSIDE_LIMIT:?}"))?;
    Ok(format!("classes {}; {ROUND_TRIPS} round trips per group; {elapsed:.2?}", counts.join(" ")))
}

// ---------------------------------------------------------------------------
// 2. Index by both routes

struct Scenario {
    file: &'static str,
    /// Coefficients on the orbit basis, trivial class first.
    expected: &'static [i64],
    tangencies: Option<usize>,
}

const SCENARIOS: [Scenario; 4] = [
    Scenario {
        file: "z2_saddle.json",
        expected: &[-1, 1],
        tangencies: Some(4),
    },
    Scenario {
        file: "z3_sink.json",
        expected: &[0, 1],
        tangencies: None,
    },
    Scenario {
        file: "trivial_constant.json",
        expected: &[0],
        tangencies: Some(2),
    },
    Scenario {
        file: "z2_annulus.json",
        expected: &[0, 0],
        tangencies: Some(4),
    },
];

fn index_of(report: &Report) -> Result<&IndexSummary, String> {
    match (&report.index, &report.refusal) {
        (Some(i), _) => Ok(i),
        (None, Some(r)) => Err(format!("refused at {}: {}", r.stage, r.message)),
        _ => Err("no index in report".into()),
    }
}

fn morse_formula() -> Outcome {
    let mut lines = Vec::new();
    for s in &SCENARIOS {
        let report = run(s.file, Mode::Verify);
        let index = index_of(&report).map_err(|e| format!("{}: {e}", s.file))?;
        ensure(index.local.coefficients == s.expected, || {
            format!("{}: local route gives {:?}, expected {:?}", s.file, index.local.coefficients, s.expected)
        })?;
        ensure(index.strata == index.local, || {
            format!("{}: strata route gives {:?}", s.file, index.strata.coefficients)
        })?;
        for c in &index.checks {
            ensure(c.pass, || format!("{}: check {} fails: {}", s.file, c.name, c.detail))?;
        }
        if let Some(t) = s.tangencies {
            ensure(index.tangencies.len() == t, || format!("{}: {} tangencies, expected {t}", s.file, index.tangencies.len()))?;
        }
        // Alternating strata sums are the characters of the index.
        for (row, ch) in index.per_class.iter().zip(&index.local.characters) {
            ensure(row.alternating_sum == *ch, || format!("{}: {} strata sum {} != ch {ch}", s.file, row.label, row.alternating_sum))?;
        }
        lines.push(format!("{} = {}", s.file.trim_end_matches(".json"), index.local.display));
    }
    Ok(lines.join("; "))
}

// ---------------------------------------------------------------------------
// 3. Stability

fn stability() -> Outcome {
    let mut lines = Vec::new();
    for s in &SCENARIOS {
        let cfg = RunConfig {
            stability: true,
            seed: 7,
            ..RunConfig::default()
        };
        let report = run_pipeline(&load(s.file), &cfg);
        let st = report.stability.as_ref().ok_or_else(|| format!("{}: no stability section", s.file))?;
        for v in &st.variants {
            let fp = v.fingerprint.as_ref().ok_or_else(|| format!("{} {}: {}", s.file, v.name, v.detail))?;
            ensure(*fp == st.base, || format!("{} {}: {:?} vs {:?}", s.file, v.name, fp, st.base))?;
            ensure(v.matches, || format!("{} {}: {}", s.file, v.name, v.detail))?;
        }
        lines.push(format!("{} ok", s.file.trim_end_matches(".json")));
    }
    Ok(format!("grid doubled and 1e-6 invariant perturbation: {}", lines.join(", ")))
}

// ---------------------------------------------------------------------------
// 4. Lattice bounds

/// Box points with `Σm − d − n ≤ 2s ≤ Σm − n`, by enumeration.
fn brute_lattice(d: usize, ms: &[usize]) -> u128 {
    let n = ms.len() as i64;
    let total: i64 = ms.iter().map(|&m| m as i64).sum();
    let (lo, hi) = (total - d as i64 - n, total - n);
    let mut x = vec![0usize; ms.len()];
    let mut count = 0;
    loop {
        let s2 = 2 * x.iter().sum::<usize>() as i64;
        if lo <= s2 && s2 <= hi {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == ms.len() {
                return count;
            }
            x[i] += 1;
            if x[i] < ms[i] {
                break;
            }
            x[i] = 0;
            i += 1;
        }
    }
}

fn non_increasing(len: usize, max_first: usize, budget: usize, out: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>) {
    if cur.len() == len {
        out.push(cur.clone());
        return;
    }
    for m in 1..=max_first.min(budget) {
        cur.push(m);
        non_increasing(len, m, budget - m, out, cur);
        cur.pop();
    }
}

fn check_bounds(file: &str, ms: &[usize], tol: &Tolerances) -> Result<String, String> {
    let spec = load(file);
    let problem = build_problem(&spec, &RunConfig::default()).map_err(|e| e.to_string())?;
    let report = verify_identities(&problem).map_err(|e| e.to_string())?;
    let ch = problem.ring.ch(&report.index_local).unwrap().values;
    let entries = verify_bounds(&problem.ring, &report.index_local, &problem.fixed, problem.domain.q(), ms, true, tol)
        .map_err(|e| e.to_string())?;
    for e in &entries {
        let picked: Vec<usize> = e.subset.iter().map(|&j| ms[j]).collect();
        let oracle = if picked.is_empty() { 1 } else { brute_lattice(e.d_v, &picked) };
        ensure(e.bound == oracle, || format!("{file}: class {} bound {} != oracle {oracle}", e.class, e.bound))?;
        ensure(e.value == ch[e.class], || format!("{file}: class {} value {} != ch {}", e.class, e.value, ch[e.class]))?;
        ensure(e.value.unsigned_abs() as u128 <= e.bound && e.holds, || {
            format!("{file}: |ch| = {} exceeds {}", e.value.abs(), e.bound)
        })?;
    }
    Ok(format!("{file} {:?} <= {:?}", ch, entries.iter().map(|e| e.bound).collect::<Vec<_>>()))
}

/// The ball case: the index characters equal the alternating strata sums
/// and are bounded with `d = 2`.
fn ball_case(r: f64, field: [&str; 2], group: &str, ms: &[usize]) -> Result<String, String> {
    let text = format!(
        r#"{{"schema": 1, "group": {group}, "field": ["{}", "{}"],
            "domain": {{"q": "{r}^2 - x^2 - y^2", "bounding_radius": {}}},
            "degree_bounds": {ms:?}}}"#,
        field[0],
        field[1],
        r + 1.0
    );
    let spec = parse_problem_str(&text).map_err(|e| e.to_string())?;
    let problem = build_problem(&spec, &RunConfig::default()).map_err(|e| e.to_string())?;
    ensure(problem.domain.q().degree() == 2, || "ball is not quadric".into())?;
    let report = verify_identities(&problem).map_err(|e| e.to_string())?;
    ensure(report.passed(), || format!("ball r = {r}: identity checks fail"))?;
    let ch = problem.ring.ch(&report.index_local).unwrap().values;
    let entries = verify_bounds(&problem.ring, &report.index_local, &problem.fixed, problem.domain.q(), ms, true, &problem.tol)
        .map_err(|e| e.to_string())?;
    for (e, c) in entries.iter().zip(&report.strata.classes) {
        ensure(c.chi.index() == ch[e.class], || format!("ball r = {r}: strata sum {} != ch {}", c.chi.index(), ch[e.class]))?;
        let dim = problem.fixed[e.class].dim();
        let oracle = if dim == 0 {
            1
        } else {
            brute_lattice(2, &e.subset.iter().map(|&j| ms[j]).collect::<Vec<_>>())
        };
        ensure(e.d_v == if dim == 0 { 0 } else { 2 }, || format!("ball r = {r}: restricted degree {}", e.d_v))?;
        ensure(e.bound == oracle && e.value.unsigned_abs() as u128 <= oracle, || {
            format!("ball r = {r}: |{}| vs bound {} (oracle {oracle})", e.value, e.bound)
        })?;
    }
    Ok(format!("ball r={r} {ch:?}"))
}

fn khovanskii() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    for n in 1..=MAX_VARIABLES {
        let mut all = Vec::new();
        non_increasing(n, MAX_TOTAL_DEGREE, MAX_TOTAL_DEGREE, &mut all, &mut Vec::new());
        for ms in &all {
            for d in 0..=MAX_Q_DEGREE {
                let got = lattice_bound(d, ms).map_err(|e| e.to_string())?;
                let want = brute_lattice(d, ms);
                ensure(got == want, || format!("O({d}; {ms:?}) = {got}, oracle {want}"))?;
                cases += 1;
            }
        }
    }
    let tol = Tolerances::default();
    let mut lines = vec![format!("{cases} lattice cases")];
    lines.push(check_bounds("z2_saddle.json", &[1, 1], &tol)?);
    lines.push(check_bounds("z3_sink.json", &[1, 1], &tol)?);
    let reflection = r#"{"generators": ["(0 1)"]}, "representation": {"generators": [[[1, 0], [0, -1]]]}"#;
    let square = r#"{"generators": ["(0 1 2 3)", "(1 3)"]}, "representation": {"generators": [{"rotation": 4}, [[1, 0], [0, -1]]]}"#;
    for r in [0.8, 1.0, 1.3] {
        lines.push(ball_case(r, ["x", "-y"], reflection, &[1, 1])?);
    }
    lines.push(ball_case(1.5, ["2x - 2x^3", "2y - 2y^3"], square, &[3, 3])?);
    let elapsed = start.elapsed();
    ensure(elapsed < BOUNDS_LIMIT, || format!("took {elapsed:?}, limit {BOUNDS_LIMIT:?}"))?;
    lines.push(format!("{elapsed:.2?}"));
    Ok(lines.join("; "))
}

// ---------------------------------------------------------------------------
// 5. Normal-map degree

fn gauss_of(report: &Report) -> Result<&GaussSummary, String> {
    match (&report.gauss, &report.refusal) {
        (Some(g), _) => Ok(g),
        (None, Some(r)) => Err(format!("refused at {}: {}", r.stage, r.message)),
        _ => Err("no gauss section".into()),
    }
}

fn gauss_case(file: &str, curvature: f64) -> Result<Vec<i64>, String> {
    let report = run(file, Mode::Verify);
    ensure(report.verdict == Verdict::Pass, || format!("{file}: verdict {:?}", report.verdict))?;
    let index = index_of(&report)?;
    let gauss = gauss_of(&report)?;
    for (row, strata) in gauss.per_class.iter().zip(&index.per_class) {
        // Euler characteristic of the fixed set minus the index character,
        // from the independent index computation.
        let euler = strata.chi_x - strata.alternating_sum;
        ensure(row.direct == euler && row.strata == euler && row.euler == euler, || {
            format!("{file} {}: direct {} strata {} euler {} expected {euler}", row.label, row.direct, row.strata, row.euler)
        })?;
        if let Some(k) = row.curvature_integral {
            ensure((k - curvature).abs() < CURVATURE_TOL, || format!("{file} {}: curvature {k} vs {curvature}", row.label))?;
        } else if row.fixed_dim == 2 {
            return Err(format!("{file}: no curvature integral for the full plane"));
        }
    }
    for c in &gauss.checks {
        ensure(c.pass, || format!("{file}: {} fails: {}", c.name, c.detail))?;
    }
    Ok(gauss.degree.coefficients.clone())
}

fn gauss() -> Outcome {
    let disk = gauss_case("z2_disk_constant.json", 1.0)?;
    let annulus = gauss_case("z2_annulus.json", 0.0)?;
    // A second nonvanishing invariant field on the annulus.
    let mut spec = load("z2_annulus.json");
    spec.field = vec![
        eqmorse_cli::problem::PolySpec::Text("1 + y^2".into()),
        eqmorse_cli::problem::PolySpec::Text("x*y".into()),
    ];
    let cfg = RunConfig {
        mode: Mode::Gauss,
        ..RunConfig::default()
    };
    let other = run_pipeline(&spec, &cfg);
    let other = gauss_of(&other)?.degree.coefficients.clone();
    ensure(other == annulus, || format!("annulus degree depends on the field: {annulus:?} vs {other:?}"))?;
    Ok(format!("disk {disk:?}, annulus {annulus:?} for both fields, curvature within {CURVATURE_TOL}"))
}

// ---------------------------------------------------------------------------
// 6. Refusals through the binary

fn refusals() -> Outcome {
    let cases = [
        ("verify", "refuse_boundary_zero.json", "no zeros of v on the boundary"),
        ("verify", "refuse_degenerate_tangency.json", "genericity of v along the boundary"),
        ("verify", "refuse_not_invariant.json", "invariance of Q and v"),
        ("verify", "refuse_unbounded.json", "compact domain"),
        ("gauss", "z3_sink.json", "nonvanishing invariant field"),
    ];
    let mut names = Vec::new();
    for (cmd, file, hypothesis) in cases {
        let out = Command::new(env!("CARGO_BIN_EXE_eqmorse"))
            .arg(cmd)
            .arg(problems_dir().join(file))
            .output()
            .map_err(|e| e.to_string())?;
        let code = out.status.code();
        let stderr = String::from_utf8_lossy(&out.stderr);
        ensure(code == Some(2), || format!("{file}: exit {code:?}, stderr {stderr}"))?;
        ensure(stderr.contains(hypothesis), || format!("{file}: stderr does not name \"{hypothesis}\": {stderr}"))?;
        let report: Report = serde_json::from_slice(&out.stdout).map_err(|e| format!("{file}: {e}"))?;
        let named = report.refusal.as_ref().and_then(|r| r.hypothesis.as_deref());
        ensure(named == Some(hypothesis), || format!("{file}: report names {named:?}"))?;
        names.push(hypothesis);
    }
    Ok(format!("exit 2 naming: {}", names.join(", ")))
}

fn main() {
    let criteria: [Criterion; 6] = [
        ("burnside algebra exactness", burnside),
        ("index by local degrees equals index by strata", morse_formula),
        ("stability under refinement and perturbation", stability),
        ("lattice-point bounds", khovanskii),
        ("normal-map degree identities", gauss),
        ("hypothesis enforcement", refusals),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} ({secs:.1}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({secs:.1}s): {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
