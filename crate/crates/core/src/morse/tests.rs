use nalgebra::DMatrix;

use super::*;
use crate::burnside::BurnsideElement;
use crate::group::{group_closure, Permutation};
use crate::poly::parse_polynomial;
use crate::representation::{build_representation, reflection_matrix, rotation_matrix};

fn problem(cycles: &[&str], degree: usize, mats: Vec<DMatrix<f64>>, field: [&str; 2], q: &str, r: f64) -> Problem {
    let gens: Vec<Permutation> = cycles
        .iter()
        .map(|c| Permutation::from_cycles(c, degree).unwrap())
        .collect();
    let g = group_closure(&gens).unwrap();
    let rep = build_representation(&g, 2, &mats, 1e-9).unwrap();
    let ring = BurnsideRing::new(g);
    let v = VectorField::new(
        field.iter().map(|s| parse_polynomial(s, 2).unwrap()).collect(),
        None,
    )
    .unwrap();
    let dom = Domain::new(parse_polynomial(q, 2).unwrap(), r).unwrap();
    Problem::new(ring, rep, v, dom, Tolerances::default()).unwrap()
}

fn z2(field: [&str; 2], q: &str, r: f64) -> Problem {
    problem(&["(0 1)"], 2, vec![DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, -1.0]))], field, q, r)
}

const DISK: &str = "1 - x^2 - y^2";
const ANNULUS: &str = "-(x^2 + y^2 - 0.25)(x^2 + y^2 - 4)";

#[test]
fn disk_boundary() {
    let p = z2(["x", "-y"], DISK, 1.5);
    let loops = trace_boundary(&p).unwrap();
    assert_eq!(loops.len(), 1);
    assert_eq!(loops[0].turning_number, 1);
    assert!((loops[0].length() - std::f64::consts::TAU).abs() < 1e-4);
    for pt in &loops[0].points {
        assert!((pt[0].hypot(pt[1]) - 1.0).abs() < 1e-9);
    }
}

#[test]
fn annulus_boundary() {
    let p = z2(["1", "0"], ANNULUS, 2.5);
    let loops = trace_boundary(&p).unwrap();
    let mut turning: Vec<i64> = loops.iter().map(|l| l.turning_number).collect();
    turning.sort();
    assert_eq!(turning, vec![-1, 1]);
    assert_eq!(domain_euler(&loops), 0);
}

#[test]
fn saddle_on_disk() {
    let p = z2(["x", "-y"], DISK, 1.5);
    let report = verify_identities(&p).unwrap();
    let table = &p.ring.table;
    let expected = &BurnsideElement::one(table) - &BurnsideElement::orbit(table, 0);
    assert_eq!(report.index_local, expected);
    assert_eq!(report.index_strata(), &expected);
    let full = report.strata.full.as_ref().unwrap();
    assert_eq!(full.tangencies.len(), 4);
    for t in &full.tangencies {
        assert!((t.derivative + 4.0).abs() < 1e-6, "{t:?}");
    }
    assert_eq!((full.chi.x, full.chi.plus1, full.chi.plus2), (1, 2, 0));
    assert!(report.passed(), "{:?}", report.checks);
}

#[test]
fn rotation_sink() {
    let p = problem(&["(0 1 2)"], 3, vec![rotation_matrix(3)], ["-x", "-y"], DISK, 1.5);
    let report = verify_identities(&p).unwrap();
    assert_eq!(report.index_local, BurnsideElement::one(&p.ring.table));
    assert!(report.passed(), "{:?}", report.checks);
}

#[test]
fn constant_field_on_annulus() {
    let p = z2(["1", "0"], ANNULUS, 2.5);
    let report = verify_identities(&p).unwrap();
    assert!(report.index_local.is_zero());
    let full = report.strata.full.as_ref().unwrap();
    assert_eq!((full.chi.plus1, full.chi.plus2), (2, 2));
    let inner_plus: Vec<f64> = full
        .tangencies
        .iter()
        .filter(|t| t.location[0].hypot(t.location[1]) < 1.0)
        .map(|t| t.derivative)
        .collect();
    assert_eq!(inner_plus.len(), 2);
    assert!(inner_plus.iter().all(|d| (d - 7.5).abs() < 1e-6), "{inner_plus:?}");
    assert!(report.passed(), "{:?}", report.checks);
}

#[test]
fn free_saddle_pair() {
    // A saddle at the origin and two sinks swapped by the reflection.
    let p = z2(["-x", "-(y^3 - 0.25y)"], DISK, 1.5);
    let report = verify_identities(&p).unwrap();
    let table = &p.ring.table;
    let expected = &BurnsideElement::orbit(table, 0) - &BurnsideElement::one(table);
    assert_eq!(report.index_local, expected);
    assert_eq!(report.zeros.len(), 3);
    assert!(report.passed(), "{:?}", report.checks);
}

#[test]
fn dihedral_three() {
    let p = problem(
        &["(0 1 2)", "(1 2)"],
        3,
        vec![rotation_matrix(3), reflection_matrix([1.0, 0.0])],
        ["x^2 - y^2 - 0.5x", "-2xy - 0.5y"],
        DISK,
        1.5,
    );
    let report = verify_identities(&p).unwrap();
    assert_eq!(report.zeros.len(), 4);
    assert_eq!(report.orbits.len(), 2);
    assert!(report.passed(), "{:?}", report.checks);
}

#[test]
fn refusals() {
    let trivial = problem(&[], 1, vec![], ["1", "-x"], DISK, 1.5);
    let err = index_via_strata(&trivial).unwrap_err();
    assert!(matches!(err, MorseError::GenericityFailure { .. }), "{err}");
    assert_eq!(err.hypothesis(), Some("genericity of v along the boundary"));

    let boundary_zero = problem(&[], 1, vec![], ["x - 1", "y"], DISK, 1.5);
    let err = index_via_strata(&boundary_zero).unwrap_err();
    assert!(matches!(err, MorseError::BoundaryZero { .. }), "{err}");

    let gens = [Permutation::from_cycles("(0 1)", 2).unwrap()];
    let g = group_closure(&gens).unwrap();
    let rep = build_representation(&g, 2, &[reflection_matrix([1.0, 0.0])], 1e-9).unwrap();
    let v = VectorField::new(vec![parse_polynomial("y", 2).unwrap(), parse_polynomial("1", 2).unwrap()], None).unwrap();
    let dom = Domain::new(parse_polynomial(DISK, 2).unwrap(), 1.5).unwrap();
    let err = Problem::new(BurnsideRing::new(g), rep, v, dom, Tolerances::default()).unwrap_err();
    assert!(matches!(err, MorseError::NotInvariant { .. }));
}

#[test]
fn degenerate_zero_is_refused() {
    let p = problem(&[], 1, vec![], ["x^2 - y^2", "2xy"], DISK, 1.5);
    let err = find_zeros(&p, 1).unwrap_err();
    assert!(matches!(err, MorseError::DegenerateZero { .. }), "{err}");
}

#[test]
fn symmetrized_field_is_invariant() {
    let p = problem(&["(0 1 2)"], 3, vec![rotation_matrix(3)], ["-x", "-y"], DISK, 1.5);
    let w = VectorField::new(
        vec![parse_polynomial("x + 0.3y^2 + 1", 2).unwrap(), parse_polynomial("xy - 2", 2).unwrap()],
        None,
    )
    .unwrap();
    let s = symmetrize_field(&p.rep, &w);
    assert!(crate::representation::check_field_invariance(&p.rep, &s, 1e-10).pass);
}
