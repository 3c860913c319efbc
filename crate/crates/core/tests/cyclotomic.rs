use mono_core::CycloScalar;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn z(n: u32, j: i64) -> CycloScalar {
    CycloScalar::root_of_unity(n, j)
}

#[test]
fn small_roots() {
    assert!(z(1, 0).is_one());
    assert_eq!(z(2, 1), CycloScalar::from_integer(2, -1));
    let i = z(4, 1);
    assert_eq!(i.mul_ref(&i), CycloScalar::from_integer(4, -1));
}

#[test]
fn field_examples() {
    assert_eq!(z(4, 1).mul_ref(&z(4, 1)), CycloScalar::from_integer(1, -1));
    assert_eq!(z(3, 1).add_ref(&z(3, 2)), CycloScalar::from_integer(3, -1));
    assert_eq!(z(8, 1).inv().unwrap(), z(8, 7));
    assert!(CycloScalar::zero(5).inv().is_err());
}

#[test]
fn roots_of_unity_sum_to_zero() {
    for n in 1..=24u32 {
        let w = z(n, 1);
        assert!(w.pow(n as u64).is_one(), "ζ_{n}^{n}");
        let mut s = CycloScalar::zero(n);
        for j in 0..n as i64 {
            s += &z(n, j);
        }
        assert_eq!(s.is_zero(), n > 1, "n = {n}");
    }
}

#[test]
fn equality_across_conductors() {
    assert_eq!(z(4, 2), z(2, 1));
    assert_eq!(z(12, 4), z(3, 1));
    assert_eq!(z(3, 1).lift(12), z(12, 4));
    assert_ne!(z(8, 2), z(8, 6));
    // √2 = ζ8 + ζ8⁷
    let r2 = z(8, 1).add_ref(&z(8, 7));
    assert_eq!(r2.mul_ref(&r2), CycloScalar::from_integer(8, 2));
    assert!(r2.conj() == r2);
}

#[test]
fn conjugation_inverts_roots() {
    for n in [3u32, 5, 8, 12] {
        for j in 0..n as i64 {
            assert_eq!(z(n, j).conj(), z(n, -j));
            assert_eq!(z(n, j).as_root_of_unity().map(|(m, k)| z(m, k as i64)), Some(z(n, j)));
        }
    }
}

#[test]
fn json_round_trip() {
    let x = z(12, 5).add_ref(&CycloScalar::from_rational(12, BigRational::new(3.into(), 7.into())));
    let back = CycloScalar::from_json(&x.to_json(), 12).unwrap();
    assert_eq!(back, x);
}

const CONDUCTORS: [u32; 8] = [1, 2, 3, 4, 5, 6, 8, 12];

fn scalar() -> impl Strategy<Value = CycloScalar> {
    (0usize..CONDUCTORS.len(), prop::collection::vec((-6i64..7, 1i64..5), 1..6)).prop_map(|(ci, terms)| {
        let n = CONDUCTORS[ci];
        let mut acc = CycloScalar::zero(n);
        for (j, (num, den)) in terms.into_iter().enumerate() {
            let c = BigRational::new(BigInt::from(num), BigInt::from(den));
            acc += &z(n, j as i64).scale(&c);
        }
        acc
    })
}

fn lcm(a: u32, b: u32) -> u32 {
    let mut x = a;
    while x % b != 0 {
        x += a;
    }
    x
}

fn at(a: &CycloScalar, n: u32) -> CycloScalar {
    a.lift(n)
}

// complex embedding ζ_N ↦ e^{2πi/N}
fn embed(a: &CycloScalar) -> (f64, f64) {
    let n = a.conductor() as f64;
    a.coeffs().iter().enumerate().fold((0.0, 0.0), |(re, im), (k, c)| {
        let c = c.to_f64().unwrap();
        let t = 2.0 * std::f64::consts::PI * k as f64 / n;
        (re + c * t.cos(), im + c * t.sin())
    })
}

fn close(a: (f64, f64), b: (f64, f64)) -> bool {
    (a.0 - b.0).abs() < 1e-9 && (a.1 - b.1).abs() < 1e-9
}

proptest! {
    #[test]
    fn ring_axioms(a in scalar(), b in scalar(), c in scalar()) {
        let n = lcm(lcm(a.conductor(), b.conductor()), c.conductor());
        let (a, b, c) = (at(&a, n), at(&b, n), at(&c, n));
        prop_assert_eq!(a.add_ref(&b), b.add_ref(&a));
        prop_assert_eq!(a.mul_ref(&b), b.mul_ref(&a));
        prop_assert_eq!(a.mul_ref(&b).mul_ref(&c), a.mul_ref(&b.mul_ref(&c)));
        prop_assert_eq!(a.mul_ref(&b.add_ref(&c)), a.mul_ref(&b).add_ref(&a.mul_ref(&c)));
        prop_assert!(a.sub_ref(&a).is_zero());
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!(a.mul_ref(&b).conj(), a.conj().mul_ref(&b.conj()));
    }

    #[test]
    fn inverses(a in scalar()) {
        prop_assume!(!a.is_zero());
        let inv = a.inv().unwrap();
        prop_assert!(a.mul_ref(&inv).is_one());
        prop_assert_eq!(a.div_ref(&a).unwrap(), CycloScalar::one(1));
    }

    #[test]
    fn mixed_conductor_arithmetic(a in scalar(), b in scalar()) {
        let n = lcm(a.conductor(), b.conductor());
        prop_assert_eq!(a.add_ref(&b), at(&a, n).add_ref(&at(&b, n)));
        prop_assert_eq!(a.mul_ref(&b), at(&a, n).mul_ref(&at(&b, n)));
    }

    #[test]
    fn agrees_with_complex_embedding(a in scalar(), b in scalar()) {
        let (x, y) = (embed(&a), embed(&b));
        prop_assert!(close(embed(&a.add_ref(&b)), (x.0 + y.0, x.1 + y.1)));
        prop_assert!(close(embed(&a.mul_ref(&b)), (x.0 * y.0 - x.1 * y.1, x.0 * y.1 + x.1 * y.0)));
        prop_assert!(close(embed(&a.conj()), (x.0, -x.1)));
    }
}
