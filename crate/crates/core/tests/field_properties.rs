use proptest::prelude::*;

use hypercomp::finite_field::{prime_power, FieldSpec};

fn orders() -> Vec<u64> {
    (2..=512).filter(|&q| prime_power(q).is_some()).collect()
}

#[test]
fn every_prime_power_up_to_512() {
    let qs = orders();
    assert_eq!(qs.len(), 97 + 20);
    for q in qs {
        let f = FieldSpec::from_order(q).unwrap();
        assert_eq!(f.q(), q);
        let els = f.elements();
        assert_eq!(els.len() as u64, q);
        assert_eq!(els.iter().filter(|a| !a.is_zero()).count() as u64, q - 1);
        for &a in &els {
            assert_eq!(f.pow(a, q), a, "x^q = x in GF({q})");
        }
        let squares = els.iter().filter(|&&a| f.is_square(a)).count() as u64;
        let mut image: Vec<_> = els.iter().map(|&a| f.mul(a, a)).collect();
        image.sort();
        image.dedup();
        if q % 2 == 0 {
            assert_eq!(image.len() as u64, q);
            assert_eq!(squares, q);
        } else {
            assert_eq!(image.len() as u64, (q + 1) / 2);
            assert_eq!(squares, (q + 1) / 2);
        }
    }
}

#[test]
fn non_prime_powers_are_rejected() {
    for q in [0u64, 1, 6, 10, 12, 100] {
        assert!(FieldSpec::from_order(q).is_err(), "q = {q}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn frobenius_is_a_ring_map(qi in 0usize..117, a in any::<u32>(), b in any::<u32>()) {
        let q = orders()[qi];
        let f = FieldSpec::from_order(q).unwrap();
        let (a, b) = (f.element(a % q as u32), f.element(b % q as u32));
        prop_assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
        prop_assert_eq!(f.frobenius(f.mul(a, b)), f.mul(f.frobenius(a), f.frobenius(b)));
        prop_assert_eq!(f.mul(a, f.add(a, b)), f.add(f.mul(a, a), f.mul(a, b)));
        if !b.is_zero() {
            prop_assert_eq!(f.mul(f.mul(a, b), f.inv(b).unwrap()), a);
        }
    }
}
