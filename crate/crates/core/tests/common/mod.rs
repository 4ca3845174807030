#![allow(dead_code)]

use eqmorse::group::group_closure;
use eqmorse::morse::Problem;
use eqmorse::poly::parse_polynomial;
use eqmorse::representation::{build_representation, reflection_matrix, rotation_matrix};
use eqmorse::{BurnsideRing, Domain, FiniteGroup, Permutation, Tolerances, VectorField};
use nalgebra::{DMatrix, DVector};

pub fn group(cycles: &[&str], degree: usize) -> FiniteGroup {
    let gens: Vec<Permutation> = cycles
        .iter()
        .map(|c| Permutation::from_cycles(c, degree).unwrap())
        .collect();
    group_closure(&gens).unwrap()
}

/// The test groups with a faithful planar representation where one exists.
pub fn zoo() -> Vec<(&'static str, FiniteGroup)> {
    vec![
        ("Z2", group(&["(0 1)"], 2)),
        ("Z3", group(&["(0 1 2)"], 3)),
        ("Z4", group(&["(0 1 2 3)"], 4)),
        ("Z2xZ2", group(&["(0 1)", "(2 3)"], 4)),
        ("S3", group(&["(0 1 2)", "(1 2)"], 3)),
        ("D4", group(&["(0 1 2 3)", "(1 3)"], 4)),
    ]
}

pub fn flip() -> DMatrix<f64> {
    DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, -1.0]))
}

pub fn dihedral(m: usize) -> (FiniteGroup, Vec<DMatrix<f64>>) {
    let cycle = format!("({})", (0..m).map(|i| i.to_string()).collect::<Vec<_>>().join(" "));
    let reflection: String = (1..=(m - 1) / 2).map(|i| format!("({} {})", i, m - i)).collect();
    let g = group(&[&cycle, &reflection], m);
    (g, vec![rotation_matrix(m as u32), reflection_matrix([1.0, 0.0])])
}

pub fn problem(g: FiniteGroup, mats: Vec<DMatrix<f64>>, field: [&str; 2], q: &str, r: f64) -> Problem {
    let rep = build_representation(&g, 2, &mats, 1e-9).unwrap();
    let v = VectorField::new(field.iter().map(|s| parse_polynomial(s, 2).unwrap()).collect(), None).unwrap();
    let dom = Domain::new(parse_polynomial(q, 2).unwrap(), r).unwrap();
    Problem::new(BurnsideRing::new(g), rep, v, dom, Tolerances::default()).unwrap()
}
