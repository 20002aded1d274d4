use std::collections::BTreeSet;

use num_bigint::BigInt;
use proptest::prelude::*;

use hypercomp::groth_ring::{
    interpolate_count_polynomial, lookup_record, nonnormal_cubics, Interpolation, MotivicClass,
};
use hypercomp::poly::{compose, Monomial, Polynomial};
use hypercomp::quadrics::{classify_quadric, matrix_rank, QuadricKind, QuadricNormalForm};
use hypercomp::{Rational, Scalar};

const NV: usize = 4;

fn quadratic_form() -> impl Strategy<Value = Polynomial<Rational>> {
    prop::collection::vec((0..NV, 0..NV, -3i64..=3), 1..=6)
        .prop_map(|terms| {
            Polynomial::from_terms(
                NV,
                terms
                    .into_iter()
                    .map(|(i, j, c)| (Monomial::var(i, NV).mul(&Monomial::var(j, NV)), Rational::from_i64(c))),
            )
        })
        .prop_filter("nonzero", |p| !p.is_zero())
}

fn invertible() -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-2i64..=2, NV), NV).prop_filter("singular", |a| {
        let m: Vec<Vec<Rational>> = a.iter().map(|r| r.iter().map(|&c| Rational::from_i64(c)).collect()).collect();
        matrix_rank(m).unwrap() == NV
    })
}

fn class() -> impl Strategy<Value = MotivicClass> {
    prop::collection::vec(-20i64..=20, 0..5).prop_map(|c| MotivicClass::from_i64s(&c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn quadric_class_is_invariant_under_linear_change(f in quadratic_form(), a in invertible()) {
        let linear: Vec<Polynomial<Rational>> = a
            .iter()
            .map(|row| Polynomial::from_terms(NV, row.iter().enumerate().map(|(j, &c)| (Monomial::var(j, NV), Rational::from_i64(c)))))
            .collect();
        let g = compose(&f, &linear);
        prop_assert_eq!(classify_quadric(&f).unwrap(), classify_quadric(&g).unwrap());
    }

    #[test]
    fn chi_and_counts_are_ring_maps(a in class(), b in class(), q in 2u64..50) {
        prop_assert_eq!((&a + &b).chi(), a.chi() + b.chi());
        prop_assert_eq!((&a * &b).chi(), a.chi() * b.chi());
        prop_assert_eq!((&a * &b).predicted_count(q), a.predicted_count(q) * b.predicted_count(q));
        prop_assert_eq!((&a - &b).predicted_count(q), a.predicted_count(q) - b.predicted_count(q));
    }

    #[test]
    fn interpolation_recovers_integer_polynomials(c in class(), extra in 1usize..3) {
        let qs = [2u64, 3, 4, 5, 7, 8, 9, 11];
        let bound = 4;
        let counts: Vec<(u64, BigInt)> = qs[..bound + 1 + extra].iter().map(|&q| (q, c.predicted_count(q))).collect();
        prop_assert_eq!(interpolate_count_polynomial(&counts, bound).unwrap(), Interpolation::Polynomial(c));
    }

    #[test]
    fn interpolation_detects_a_perturbed_count(c in class(), at in 5usize..7, delta in prop::sample::select(vec![-2i64, -1, 1, 2])) {
        let qs = [2u64, 3, 4, 5, 7, 8, 9];
        let mut counts: Vec<(u64, BigInt)> = qs.iter().map(|&q| (q, c.predicted_count(q))).collect();
        counts[at].1 += delta;
        let detected = matches!(interpolate_count_polynomial(&counts, 4).unwrap(), Interpolation::NonPolynomialDetected { .. });
        prop_assert!(detected);
    }
}

#[test]
fn counts_separate_forms_within_each_kind_for_even_q() {
    for q in [2u64, 4, 8] {
        for kind in [QuadricKind::X, QuadricKind::Y] {
            for n in 1..=6 {
                let forms: Vec<_> =
                    QuadricNormalForm::all_up_to(6).into_iter().filter(|f| f.kind == kind && f.n == n).collect();
                let counts: BTreeSet<_> = forms.iter().map(|f| f.closed_form_count(q).predicted_regular).collect();
                assert_eq!(counts.len(), forms.len(), "{kind:?}, n = {n}, q = {q}");
            }
        }
    }
}

#[test]
fn euler_characteristics_of_cubic_surfaces() {
    assert_eq!(lookup_record("smooth-cubic").unwrap().chi(), BigInt::from(9));
    for r in 1..=6 {
        assert_eq!(lookup_record(&format!("normal-cubic:r={r}")).unwrap().chi(), BigInt::from(9 - r));
    }
    let chis: BTreeSet<BigInt> = nonnormal_cubics().iter().map(|r| r.chi()).collect();
    assert_eq!(chis, [2, 3, 4].into_iter().map(BigInt::from).collect());
    for r in nonnormal_cubics() {
        assert_eq!(r.class().unwrap().chi(), r.chi());
    }
}
