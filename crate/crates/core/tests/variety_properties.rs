use proptest::prelude::*;

use hypercomp::finite_field::FieldSpec;
use hypercomp::poly::{compose, Monomial, Polynomial};
use hypercomp::quadrics::matrix_rank;
use hypercomp::varieties::{
    count_points, count_points_bounded, count_split, enumerate_points, multiplicity_at_fq, FieldPoly, Hypersurface,
};
use hypercomp::{Fp, Rational, Scalar};

const NV: usize = 3;

fn poly(max_terms: usize, max_exp: u32) -> impl Strategy<Value = Polynomial<Rational>> {
    prop::collection::vec((prop::collection::vec(0..=max_exp, NV), -4i64..=4), 1..=max_terms)
        .prop_map(|terms| {
            Polynomial::from_terms(NV, terms.into_iter().map(|(e, c)| (Monomial::new(e), Rational::from_i64(c))))
        })
        .prop_filter("nonzero", |p| !p.is_zero())
}

fn form(degree: u32) -> impl Strategy<Value = Polynomial<Rational>> {
    poly(8, degree).prop_filter_map("no terms of that degree", move |p| {
        p.homogeneous_components().remove(&degree).filter(|c| !c.is_zero())
    })
}

fn invertible_mod_5() -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(0i64..5, NV), NV).prop_filter("singular", |a| {
        let m: Vec<Vec<Fp<5>>> = a.iter().map(|r| r.iter().map(|&c| Fp::<5>::from_i64(c)).collect()).collect();
        matrix_rank(m).unwrap() == NV
    })
}

fn field(p: u64) -> FieldSpec {
    FieldSpec::prime(p).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn split_counts_add_up(f in poly(5, 3), var in 0..NV, p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let h = Hypersurface::affine(f).unwrap();
        let k = field(p);
        let all = count_points(&h, &k).unwrap();
        let (on, off) = count_split(&h, &Polynomial::var(var, NV), &k, u64::MAX).unwrap();
        prop_assert_eq!(on.total + off.total, all.total);
        prop_assert_eq!(on.singular + off.singular, all.singular);
        prop_assert_eq!(all.regular + all.singular, all.total);
    }

    #[test]
    fn projective_count_from_the_cone(f in form(3), q in prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9])) {
        let k = FieldSpec::from_order(q).unwrap();
        let proj = count_points(&Hypersurface::projective(f.clone()).unwrap(), &k).unwrap().total;
        let cone = count_points(&Hypersurface::affine(f).unwrap(), &k).unwrap().total;
        prop_assert_eq!((cone - 1) % (q - 1), 0);
        prop_assert_eq!(proj, (cone - 1) / (q - 1));
    }

    #[test]
    fn multiplicity_two_iff_jacobian_vanishes(f in form(3), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let h = Hypersurface::projective(f).unwrap();
        let k = field(p);
        let counts = count_points(&h, &k).unwrap();
        let pts = enumerate_points(&h, &k, u64::MAX).unwrap();
        prop_assert_eq!(pts.len() as u64, counts.total);
        let multiple = pts.iter().filter(|pt| multiplicity_at_fq(&h, &k, pt).unwrap().multiplicity >= 2).count() as u64;
        prop_assert_eq!(multiple, counts.singular);
    }

    #[test]
    fn multiplicity_is_linearly_invariant(f in form(3), a in invertible_mod_5()) {
        let k = field(5);
        let linear: Vec<Polynomial<Rational>> = a
            .iter()
            .map(|row| {
                Polynomial::from_terms(NV, row.iter().enumerate().map(|(j, &c)| (Monomial::var(j, NV), Rational::from_i64(c))))
            })
            .collect();
        let g = compose(&f, &linear);
        prop_assume!(!g.is_zero());
        let hf = Hypersurface::projective(f).unwrap();
        let hg = Hypersurface::projective(g).unwrap();
        let maps: Vec<FieldPoly> = linear.iter().map(|l| FieldPoly::new(l, &k).unwrap()).collect();
        let pts = enumerate_points(&hg, &k, u64::MAX).unwrap();
        prop_assert_eq!(pts.len(), enumerate_points(&hf, &k, u64::MAX).unwrap().len());
        for pt in pts {
            let image: Vec<_> = maps.iter().map(|m| m.eval(&k, &pt)).collect();
            prop_assert_eq!(
                multiplicity_at_fq(&hg, &k, &pt).unwrap().multiplicity,
                multiplicity_at_fq(&hf, &k, &image).unwrap().multiplicity
            );
        }
    }
}

#[test]
fn point_bound_is_enforced() {
    let h = Hypersurface::affine(Polynomial::<Rational>::var(0, NV)).unwrap();
    assert!(count_points_bounded(&h, &field(7), 100).is_err());
    assert!(count_points_bounded(&h, &field(7), 343).is_ok());
}
