use std::collections::BTreeSet;

use mono_core::{Error, FiniteGroup};
use proptest::prelude::*;

fn brute_associative(t: &[Vec<usize>]) -> bool {
    let n = t.len();
    (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| t[t[a][b]][c] == t[a][t[b][c]])))
}

fn is_latin(t: &[Vec<usize>]) -> bool {
    let n = t.len();
    let full: BTreeSet<usize> = (0..n).collect();
    (0..n).all(|i| t[i].iter().copied().collect::<BTreeSet<_>>() == full)
        && (0..n).all(|j| (0..n).map(|i| t[i][j]).collect::<BTreeSet<_>>() == full)
}

#[test]
fn trivial_and_c2_tables() {
    let g = FiniteGroup::from_cayley_table(&[vec![0]], "1").unwrap();
    assert_eq!(g.order(), 1);
    let c2 = FiniteGroup::from_cayley_table(&[vec![0, 1], vec![1, 0]], "c2").unwrap();
    assert_eq!(c2.order(), 2);
    assert_eq!(c2.mul(1, 1), 0);
}

#[test]
fn non_associative_tables_are_rejected() {
    // x∘y = −x−y mod 3
    let quasi: Vec<Vec<usize>> = (0..3).map(|a| (0..3).map(|b| (6 - a - b) % 3).collect()).collect();
    assert!(is_latin(&quasi));
    assert!(!brute_associative(&quasi));
    let err = FiniteGroup::from_cayley_table(&quasi, "q").unwrap_err();
    assert!(matches!(err, Error::NotAGroup(_)));

    // a loop of order 5 with an identity row
    let lp = vec![
        vec![0, 1, 2, 3, 4],
        vec![1, 0, 3, 4, 2],
        vec![2, 4, 0, 1, 3],
        vec![3, 2, 4, 0, 1],
        vec![4, 3, 1, 2, 0],
    ];
    assert!(is_latin(&lp));
    assert!(!brute_associative(&lp));
    let err = FiniteGroup::from_cayley_table(&lp, "loop").unwrap_err();
    assert_eq!(err.kind(), "NotAGroup");
}

#[test]
fn non_latin_tables_are_rejected() {
    let t = vec![vec![0, 1], vec![1, 1]];
    assert!(FiniteGroup::from_cayley_table(&t, "bad").is_err());
}

#[test]
fn builtin_orders_and_centres() {
    let d8 = FiniteGroup::builtin("d8").unwrap();
    assert_eq!(d8.order(), 8);
    assert_eq!(d8.center().elements(), &[0, 2]);
    assert_eq!(d8.mul(1, 1), 2);

    assert_eq!(FiniteGroup::builtin("c2").unwrap().order(), 2);

    let s3 = FiniteGroup::builtin("s3").unwrap();
    assert_eq!(s3.order(), 6);
    let brute: Vec<usize> = (0..6)
        .filter(|&z| (0..6).all(|g| s3.mul(z, g) == s3.mul(g, z)))
        .collect();
    assert_eq!(brute, vec![0]);
    assert_eq!(s3.center().elements(), &brute[..]);

    assert!(matches!(FiniteGroup::builtin("nope"), Err(Error::UnknownGroup(_))));
}

#[test]
fn abelian_centre_is_everything() {
    for name in ["c4", "c6", "c12"] {
        let g = FiniteGroup::builtin(name).unwrap();
        assert!(g.is_abelian());
        assert_eq!(g.center().order(), g.order());
    }
}

#[test]
fn d8_subgroups_over_the_centre() {
    let g = FiniteGroup::builtin("d8").unwrap();
    let z = g.center();
    let found: BTreeSet<Vec<usize>> = g
        .subgroups_containing(&z)
        .unwrap()
        .iter()
        .map(|h| h.elements().to_vec())
        .collect();
    // x = 1, y = 4, x^a y^b = a + 4b
    let expected: BTreeSet<Vec<usize>> = [
        (0..8).collect::<Vec<_>>(),
        vec![0, 1, 2, 3],
        vec![0, 2, 4, 6],
        vec![0, 2, 5, 7],
        vec![0, 2],
    ]
    .into_iter()
    .collect();
    assert_eq!(found, expected);

    let whole = g.whole();
    assert_eq!(g.subgroups_containing(&whole).unwrap(), vec![whole]);
}

#[test]
fn s3_has_six_subgroups() {
    let g = FiniteGroup::builtin("s3").unwrap();
    let n = g.order();
    let mut brute = 0;
    for mask in 1u32..(1 << n) {
        let s: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        if s.contains(&0) && s.iter().all(|&a| s.iter().all(|&b| s.contains(&g.mul(a, b)))) {
            brute += 1;
        }
    }
    assert_eq!(brute, 6);
    assert_eq!(g.all_subgroups().unwrap().len(), 6);
}

#[test]
fn double_coset_examples() {
    let g = FiniteGroup::builtin("s3").unwrap();
    let whole = g.whole();
    let one = g.double_cosets(&whole, &whole);
    assert_eq!(one.len(), 1);
    assert_eq!(one[0].rep, 0);

    let triv = g.trivial_subgroup();
    let singles = g.double_cosets(&triv, &triv);
    assert_eq!(singles.len(), 6);
    assert!(singles.iter().all(|d| d.elements.len() == 1));

    let t = (0..6).find(|&a| g.element_order(a) == 2).unwrap();
    let h = g.generate(&[t]);
    let mut sizes: Vec<usize> = g.double_cosets(&h, &h).iter().map(|d| d.elements.len()).collect();
    sizes.sort();
    assert_eq!(sizes, vec![2, 4]);
    let brute: BTreeSet<BTreeSet<usize>> = (0..6)
        .map(|x| {
            h.elements()
                .iter()
                .flat_map(|&a| h.elements().iter().map(move |&b| (a, b)))
                .map(|(a, b)| g.mul(g.mul(a, x), b))
                .collect()
        })
        .collect();
    assert_eq!(brute.len(), 2);
}

#[test]
fn json_table_round_trip() {
    let g = FiniteGroup::builtin("q8").unwrap();
    let text = serde_json::json!({ "name": "q8", "order": 8, "table": g.table() }).to_string();
    let h = FiniteGroup::from_json_str(&text).unwrap();
    assert_eq!(h.table(), g.table());
}

fn catalog() -> Vec<FiniteGroup> {
    FiniteGroup::builtin_names()
        .iter()
        .map(|n| FiniteGroup::builtin(n).unwrap())
        .collect()
}

#[test]
fn catalog_tables_are_groups() {
    for g in catalog() {
        let t = g.table();
        assert!(is_latin(&t), "{}", g.name());
        assert!((0..g.order()).all(|j| t[0][j] == j && t[j][0] == j));
        assert!(brute_associative(&t), "{}", g.name());
    }
}

#[test]
fn subgroup_lattice_brute_force_small_groups() {
    for name in ["c4", "q8", "d8", "c6"] {
        let g = FiniteGroup::builtin(name).unwrap();
        let n = g.order();
        let mut brute = 0;
        for mask in 1u32..(1 << n) {
            if mask & 1 == 0 {
                continue;
            }
            let s: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            if s.iter().all(|&a| s.iter().all(|&b| mask >> g.mul(a, b) & 1 == 1)) {
                brute += 1;
            }
        }
        assert_eq!(g.all_subgroups().unwrap().len(), brute, "{name}");
    }
}

proptest! {
    #[test]
    fn inverse_and_power_laws(gi in 0usize..23, a in 0usize..1000, b in 0usize..1000, k in -20i64..20) {
        let names = FiniteGroup::builtin_names();
        let g = FiniteGroup::builtin(&names[gi % names.len()]).unwrap();
        let (a, b) = (a % g.order(), b % g.order());
        prop_assert_eq!(g.mul(a, g.inv(a)), 0);
        prop_assert_eq!(g.inv(g.mul(a, b)), g.mul(g.inv(b), g.inv(a)));
        prop_assert_eq!(g.pow(a, k + 1), g.mul(g.pow(a, k), a));
        prop_assert_eq!(g.pow(a, g.element_order(a) as i64), 0);
        prop_assert_eq!(g.exponent() % g.element_order(a), 0);
    }

    #[test]
    fn cosets_partition_the_group(gi in 0usize..23, a in 0usize..1000) {
        let names = FiniteGroup::builtin_names();
        let g = FiniteGroup::builtin(&names[gi % names.len()]).unwrap();
        let h = g.generate(&[a % g.order()]);
        let cosets = g.left_cosets(&h);
        prop_assert_eq!(cosets.len() * h.order(), g.order());
        for x in 0..g.order() {
            let (i, k) = cosets.split(x);
            prop_assert!(h.contains(k));
            prop_assert_eq!(g.mul(cosets.reps()[i], k), x);
        }
    }
}
