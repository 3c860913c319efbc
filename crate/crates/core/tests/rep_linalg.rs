use std::sync::Arc;

use mono_core::character::{central_characters, characters};
use mono_core::linalg::{ChainComplex, Matrix};
use mono_core::monomial::MonomialModule;
use mono_core::rep::{frobenius_reciprocity_check, irreducibles, MatrixRep};
use mono_core::{CharPair, CycloScalar, FiniteGroup, PairPoset};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn group(name: &str) -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::builtin(name).unwrap())
}

fn int(n: u32, v: i64) -> CycloScalar {
    CycloScalar::from_integer(n, v)
}

fn mat(rows: &[&[CycloScalar]], n: u32) -> Matrix {
    Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect(), rows[0].len(), n).unwrap()
}

// columns of `a` lie in the span of the columns of `b`
fn span_within(a: &Matrix, b: &Matrix) -> bool {
    let joined = b.transpose().vstack(&a.transpose()).unwrap();
    joined.rank() == b.rank()
}

// ρ(r) = diag(ω, ω²), ρ(s) = swap
fn s3_explicit(g: &Arc<FiniteGroup>) -> MatrixRep {
    let r = (0..6).find(|&a| g.element_order(a) == 3).unwrap();
    let s = (0..6).find(|&a| g.element_order(a) == 2).unwrap();
    let w = CycloScalar::root_of_unity(3, 1);
    let (o, l) = (int(3, 0), int(3, 1));
    let rr = mat(&[&[w.clone(), o.clone()], &[o.clone(), w.mul_ref(&w)]], 3);
    let ss = mat(&[&[o.clone(), l.clone()], &[l, o]], 3);
    MatrixRep::from_generators(g, 2, &[(r, rr), (s, ss)]).unwrap()
}

#[test]
fn fixed_point_examples() {
    let c2 = group("c2");
    let sign = CharPair::new(characters(&c2, &c2.whole())[1].clone());
    assert!(!sign.character().is_trivial());
    let reg = MatrixRep::from_monomial(&MonomialModule::induced(
        &c2,
        &CharPair::new(mono_core::Character::trivial(c2.trivial_subgroup(), 2)),
    ))
    .unwrap();
    assert_eq!(reg.fixed_points(&sign).cols(), 1);

    let d8 = group("d8");
    for c in central_characters(&d8) {
        let v = MatrixRep::regular_isotypic(&d8, &c).unwrap();
        assert!(v.has_central_character(&c));
        let line = MatrixRep::from_monomial(&MonomialModule::induced(&d8, &CharPair::new(c.clone()))).unwrap();
        assert_eq!(line.dim(), 4);
    }
    let c4 = group("c4");
    for c in central_characters(&c4) {
        let v = MatrixRep::one_dim(&c4, &c).unwrap();
        assert_eq!(v.fixed_points(&CharPair::new(c)).cols(), 1);
    }

    let s3 = group("s3");
    let v = s3_explicit(&s3);
    v.check_homomorphism().unwrap();
    assert!(v.is_irreducible());
    let r = (0..6).find(|&a| s3.element_order(a) == 3).unwrap();
    let c3 = s3.generate(&[r]);
    for chi in characters(&s3, &c3) {
        let want = if chi.is_trivial() { 0 } else { 1 };
        assert_eq!(v.fixed_points(&CharPair::new(chi)).cols(), want);
    }
    let catalog = irreducibles(&s3).unwrap();
    assert_eq!(catalog.iter().map(MatrixRep::dim).collect::<Vec<_>>(), vec![1, 1, 2]);
    assert_eq!(catalog[2].intertwiner_dim(&v).unwrap(), 1);
}

#[test]
fn rank_examples() {
    for n in 1..6 {
        assert_eq!(Matrix::identity(n, 4).rank(), n);
    }
    let i = CycloScalar::root_of_unity(4, 1);
    let row: Vec<CycloScalar> = vec![int(4, 1), i.clone(), int(4, 3)];
    let m = Matrix::from_rows(vec![row.clone(), vec![int(4, 0), int(4, 1), i.clone()], row], 3, 4).unwrap();
    assert_eq!(m.rank(), 2);
    assert_eq!(m.kernel().cols(), 1);
    let b = vec![int(4, 1), int(4, 0), int(4, 2)];
    assert_eq!(m.solve(&b).unwrap_err().kind(), "Inconsistent");
}

#[test]
fn exactness_report_examples() {
    let zero = ChainComplex::new(vec![0, 0, 0], vec![Matrix::zero(0, 0, 1), Matrix::zero(0, 0, 1)], None).unwrap();
    assert!(zero.exactness_report(2).exact);

    let id = ChainComplex::new(vec![1, 1], vec![Matrix::identity(1, 1)], None).unwrap();
    let r = id.exactness_report(1);
    assert!(r.exact);
    assert_eq!(r.degrees[0].rank_in, 1);
    assert_eq!(r.degrees[1].kernel_dim, 0);

    let broken = ChainComplex::new(vec![1, 1], vec![Matrix::zero(1, 1, 1)], Some(Matrix::identity(1, 1))).unwrap();
    let r = broken.exactness_report(1);
    assert!(!r.exact);
    assert!(!r.degrees[1].exact);
    assert_eq!(r.augmentation_surjective, Some(true));

    let bad = ChainComplex::new(vec![1, 1], vec![Matrix::identity(1, 1)], Some(Matrix::identity(1, 1)));
    assert_eq!(bad.unwrap_err().kind(), "InvariantViolation");
}

#[test]
fn frobenius_examples() {
    let s3 = group("s3");
    let v = s3_explicit(&s3);
    let r = (0..6).find(|&a| s3.element_order(a) == 3).unwrap();
    let c3 = s3.generate(&[r]);
    let omega = characters(&s3, &c3).into_iter().find(|c| !c.is_trivial()).unwrap();
    assert_eq!(frobenius_reciprocity_check(&CharPair::new(omega), &v).unwrap(), (1, 1));

    let d8 = group("d8");
    let p = PairPoset::new(d8.clone(), central_characters(&d8)[1].clone()).unwrap();
    for q in p.pairs() {
        if q.subgroup().order() == 4 {
            let ind = MatrixRep::from_monomial(&MonomialModule::induced(&d8, q)).unwrap();
            let (a, b) = frobenius_reciprocity_check(q, &ind).unwrap();
            assert_eq!(a, b);
            assert!(a >= 1);
        }
    }
    let trivial = MatrixRep::trivial(&d8);
    let err = frobenius_reciprocity_check(p.pair(p.bottom()), &trivial).unwrap_err();
    assert_eq!(err.kind(), "CentralCharacterMismatch");
}

#[test]
fn fixed_point_inclusions_and_translation() {
    for (name, central) in [("d8", 0), ("d8", 1), ("q8", 1), ("s3", 0)] {
        let g = group(name);
        let p = PairPoset::new(g.clone(), central_characters(&g)[central].clone()).unwrap();
        let v = MatrixRep::regular_isotypic(&g, p.central()).unwrap();
        let fixed: Vec<Matrix> = p.pairs().iter().map(|q| v.fixed_points(q)).collect();
        for i in 0..p.len() {
            for j in 0..p.len() {
                if p.leq(j, i) {
                    assert!(span_within(&fixed[i], &fixed[j]), "{name}: V^{i} ⊄ V^{j}");
                }
            }
            for a in 0..g.order() {
                let moved = v.image(a).mul(&fixed[i]).unwrap();
                let target = &fixed[p.act(a, i)];
                assert_eq!(moved.rank(), target.cols());
                assert!(span_within(&moved, target));
            }
        }
    }
}

#[test]
fn lineable_fixed_points_lie_in_module_fixed_points() {
    let g = group("d8");
    for c in central_characters(&g) {
        let p = PairPoset::new(g.clone(), c).unwrap();
        let modules: Vec<MonomialModule> = p.pairs().iter().map(|q| MonomialModule::induced(&g, q)).collect();
        let m = MonomialModule::direct_sum(&modules).unwrap();
        let v = MatrixRep::from_monomial(&m).unwrap();
        for q in p.pairs() {
            let fixed = v.fixed_points(q);
            for l in m.lineable_fixed_points(q) {
                let mut e = Matrix::zero(m.len(), 1, m.modulus());
                e.set(l, 0, CycloScalar::one(m.modulus()));
                assert!(span_within(&e, &fixed));
            }
        }
    }
}

#[test]
fn contragredient_is_an_involution() {
    for name in ["s3", "d8", "q8", "c4", "a4"] {
        let g = group(name);
        for v in irreducibles(&g).unwrap() {
            let dual = v.contragredient();
            dual.check_homomorphism().unwrap();
            for x in 0..g.order() {
                assert_eq!(dual.contragredient().image(x), v.image(x));
                assert_eq!(dual.character(x), v.character(x).conj());
            }
        }
    }
}

fn gaussian(c: &[(i64, i64)]) -> Vec<CycloScalar> {
    let i = CycloScalar::root_of_unity(4, 1);
    c.iter()
        .map(|&(a, b)| int(4, a).add_ref(&i.mul_ref(&int(4, b))))
        .collect()
}

// a + bi ↦ [[a, −b], [b, a]]
fn realify(rows: &[Vec<(i64, i64)>]) -> Matrix {
    let n = rows.len();
    let m = rows[0].len();
    let mut out = Matrix::zero(2 * n, 2 * m, 1);
    for (r, row) in rows.iter().enumerate() {
        for (c, &(a, b)) in row.iter().enumerate() {
            out.set(2 * r, 2 * c, int(1, a));
            out.set(2 * r, 2 * c + 1, int(1, -b));
            out.set(2 * r + 1, 2 * c, int(1, b));
            out.set(2 * r + 1, 2 * c + 1, int(1, a));
        }
    }
    out
}

fn entries() -> impl Strategy<Value = Vec<Vec<(i64, i64)>>> {
    // low rank is forced half the time by repeating rows
    (prop::collection::vec(prop::collection::vec((-3i64..4, -3i64..4), 6), 6), any::<bool>()).prop_map(|(mut rows, dup)| {
        if dup {
            rows[5] = rows[0].clone();
            rows[4] = rows[1].iter().zip(&rows[2]).map(|(x, y)| (x.0 + y.0, x.1 + y.1)).collect();
        }
        rows
    })
}

proptest! {
    #[test]
    fn gaussian_rank_matches_rational_embedding(rows in entries()) {
        let m = Matrix::from_rows(rows.iter().map(|r| gaussian(r)).collect(), 6, 4).unwrap();
        prop_assert_eq!(2 * m.rank(), realify(&rows).rank());
    }

    #[test]
    fn rank_nullity_and_kernels(rows in entries()) {
        let m = Matrix::from_rows(rows.iter().map(|r| gaussian(r)).collect(), 6, 4).unwrap();
        let k = m.kernel();
        prop_assert_eq!(m.rank() + k.cols(), 6);
        prop_assert!(m.mul(&k).unwrap().is_zero());
        prop_assert_eq!(k.rank(), k.cols());
        prop_assert_eq!(m.transpose().rank(), m.rank());
    }

    #[test]
    fn solve_returns_solutions(rows in entries(), x in prop::collection::vec((-3i64..4, -3i64..4), 6)) {
        let m = Matrix::from_rows(rows.iter().map(|r| gaussian(r)).collect(), 6, 4).unwrap();
        let x = gaussian(&x);
        let b = m.apply(&x);
        let y = m.solve(&b).unwrap();
        prop_assert_eq!(m.apply(&y), b);
    }

    #[test]
    fn scalar_rows_do_not_change_rank(rows in entries(), num in 1i64..7, den in 1i64..7) {
        let m = Matrix::from_rows(rows.iter().map(|r| gaussian(r)).collect(), 6, 4).unwrap();
        let c = CycloScalar::from_rational(4, BigRational::new(BigInt::from(num), BigInt::from(den)));
        prop_assert_eq!(m.scale(&c).rank(), m.rank());
    }
}
