mod common;

use eqmorse::burnside::{ch_map, from_characters, ring_multiply};
use eqmorse::{BurnsideElement, BurnsideRing, MarksTable};
use proptest::prelude::*;

/// Fraction-free Gaussian elimination; independent of the triangular
/// structure the library relies on.
fn bareiss_det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else { return 0 };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn tables() -> Vec<(&'static str, BurnsideRing)> {
    common::zoo().into_iter().map(|(n, g)| (n, BurnsideRing::new(g))).collect()
}

#[test]
fn marks_determinant_is_product_of_weyl_orders() {
    for (name, ring) in tables() {
        let t = &ring.table;
        let diag: i128 = (0..t.len()).map(|i| t.marks[i][i] as i128).product();
        let weyl: i128 = t.classes.iter().map(|c| c.weyl_order as i128).product();
        assert_eq!(bareiss_det(&t.marks), diag, "{name}");
        assert_eq!(diag, weyl, "{name}");
    }
}

#[test]
fn weyl_order_is_normalizer_index() {
    for (name, ring) in tables() {
        for c in &ring.table.classes {
            let n = ring.group.normalizer(&c.representative);
            assert_eq!(c.weyl_order, n.order() / c.order(), "{name}");
        }
    }
}

#[test]
fn group_axioms() {
    for (name, g) in common::zoo() {
        let n = g.order();
        for a in 0..n {
            assert_eq!(g.mul(0, a), a, "{name}");
            assert_eq!(g.mul(a, g.inv(a)), 0, "{name}");
            for b in 0..n {
                for c in 0..n {
                    assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)), "{name}");
                }
            }
        }
    }
}

#[test]
fn class_counts() {
    let counts: Vec<usize> = tables().iter().map(|(_, r)| r.table.len()).collect();
    // Z2, Z3, Z4, Z2xZ2, S3, D4
    assert_eq!(counts, vec![2, 2, 3, 5, 4, 8]);
}

fn element(t: &MarksTable, coeffs: &[i64]) -> BurnsideElement {
    BurnsideElement::new(t, coeffs[..t.len()].to_vec()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn characters_round_trip(which in 0usize..6, coeffs in prop::collection::vec(-50i64..50, 8)) {
        let (_, ring) = &tables()[which];
        let e = element(&ring.table, &coeffs);
        let ch = ch_map(&e, &ring.table).unwrap();
        prop_assert_eq!(from_characters(&ch, &ring.table).unwrap(), e);
    }

    #[test]
    fn characters_are_additive_and_multiplicative(
        which in 0usize..6,
        a in prop::collection::vec(-9i64..9, 8),
        b in prop::collection::vec(-9i64..9, 8),
    ) {
        let (_, ring) = &tables()[which];
        let t = &ring.table;
        let (x, y) = (element(t, &a), element(t, &b));
        let cx = ch_map(&x, t).unwrap().values;
        let cy = ch_map(&y, t).unwrap().values;
        let sum = ch_map(&(&x + &y), t).unwrap().values;
        let prod = ch_map(&ring_multiply(&x, &y, t).unwrap(), t).unwrap().values;
        for i in 0..t.len() {
            prop_assert_eq!(sum[i], cx[i] + cy[i]);
            prop_assert_eq!(prod[i], cx[i] * cy[i]);
        }
    }

    #[test]
    fn ring_axioms(
        which in 0usize..6,
        a in prop::collection::vec(-5i64..5, 8),
        b in prop::collection::vec(-5i64..5, 8),
        c in prop::collection::vec(-5i64..5, 8),
    ) {
        let (_, ring) = &tables()[which];
        let t = &ring.table;
        let (x, y, z) = (element(t, &a), element(t, &b), element(t, &c));
        let m = |p: &BurnsideElement, q: &BurnsideElement| ring.multiply(p, q).unwrap();
        prop_assert_eq!(m(&m(&x, &y), &z), m(&x, &m(&y, &z)));
        prop_assert_eq!(m(&x, &y), m(&y, &x));
        prop_assert_eq!(m(&x, &BurnsideElement::one(t)), x.clone());
        prop_assert_eq!(m(&x, &(&y + &z)), &m(&x, &y) + &m(&x, &z));
    }
}
