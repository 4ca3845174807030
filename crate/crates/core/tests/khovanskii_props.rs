mod common;

use eqmorse::khovanskii::{lattice_bound, verify_bounds};
use eqmorse::morse::verify_identities;
use eqmorse::Tolerances;
use proptest::prelude::*;

/// Counts box points with `lo2 <= 2·Σx <= hi2` by walking the whole box.
fn brute(ms: &[usize], lo2: i64, hi2: i64) -> u128 {
    let mut x = vec![0usize; ms.len()];
    let mut count = 0;
    loop {
        let s2 = 2 * x.iter().sum::<usize>() as i64;
        if lo2 <= s2 && s2 <= hi2 {
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

fn window(d: usize, ms: &[usize]) -> (i64, i64) {
    let total = ms.iter().sum::<usize>() as i64;
    let n = ms.len() as i64;
    (total - d as i64 - n, total - n)
}

proptest! {
    #[test]
    fn matches_enumeration(ms in prop::collection::vec(1usize..6, 1..5), d in 0usize..12) {
        let (lo, hi) = window(d, &ms);
        prop_assert_eq!(lattice_bound(d, &ms).unwrap(), brute(&ms, lo, hi));
    }

    #[test]
    fn reflected_window_has_the_same_count(ms in prop::collection::vec(1usize..6, 1..5), d in 0usize..12) {
        // x -> m - 1 - x maps the window onto its mirror image about Σ(m-1)/2.
        let (lo, hi) = window(d, &ms);
        let centre2 = ms.iter().map(|m| m - 1).sum::<usize>() as i64;
        prop_assert_eq!(lattice_bound(d, &ms).unwrap(), brute(&ms, 2 * centre2 - hi, 2 * centre2 - lo));
    }

    #[test]
    fn monotone_in_degree(ms in prop::collection::vec(1usize..6, 1..5), d in 0usize..20) {
        let a = lattice_bound(d, &ms).unwrap();
        let b = lattice_bound(d + 1, &ms).unwrap();
        let full: u128 = ms.iter().map(|&m| m as u128).product();
        prop_assert!(a <= b && b <= full);
    }

    #[test]
    fn order_of_degrees_does_not_matter(mut ms in prop::collection::vec(1usize..6, 1..5), d in 0usize..12) {
        let before = lattice_bound(d, &ms).unwrap();
        ms.reverse();
        prop_assert_eq!(lattice_bound(d, &ms).unwrap(), before);
    }
}

#[test]
fn ball_bounds_hold_for_several_radii() {
    for r in ["0.8", "1", "1.3"] {
        let q = format!("{r}^2 - x^2 - y^2");
        let p = common::problem(common::group(&["(0 1)"], 2), vec![common::flip()], ["x", "-y"], &q, 2.0);
        let report = verify_identities(&p).unwrap();
        assert!(report.passed(), "r = {r}");
        let entries =
            verify_bounds(&p.ring, &report.index_local, &p.fixed, p.domain.q(), &[1, 1], true, &Tolerances::default())
                .unwrap();
        for e in &entries {
            assert!(e.holds, "r = {r}: {e:?}");
            let expected_degree = if p.fixed[e.class].dim() == 0 { 0 } else { 2 };
            assert_eq!(e.d_v, expected_degree);
        }
        assert_eq!(entries.iter().map(|e| e.value).collect::<Vec<_>>(), vec![-1, 1]);
        assert_eq!(entries.iter().map(|e| e.bound).collect::<Vec<_>>(), vec![1, 1]);
    }
}
