//! Affine quadric normal forms, their closed-form point counts, and classification.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::finite_field::FieldSpec;
use crate::poly::{Monomial, Polynomial};
use crate::scalar::Scalar;
use crate::varieties::{count_points_bounded, Hypersurface, PointCount, VarietyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuadricError {
    #[error("invalid parameters {kind:?} m={m} n={n}")]
    InvalidParameters { kind: QuadricKind, m: u32, n: u32 },
    #[error("expected a nonzero homogeneous quadratic form")]
    NotQuadratic,
    #[error("the Gram matrix is undefined in characteristic 2")]
    CharacteristicTwo,
    #[error("coefficients must lie in a field")]
    NotAField,
    #[error(transparent)]
    Variety(#[from] VarietyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum QuadricKind {
    X,
    Y,
}

/// `X_{m,n}`: `sum_{i<m} x_{2i} x_{2i+1}`; `Y_{m,n}` adds `x_{2m}^2`. Coordinates are
/// `x_0..x_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QuadricNormalForm {
    pub kind: QuadricKind,
    pub m: u32,
    pub n: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CountFormulaResult {
    pub predicted_total: u64,
    pub predicted_regular: u64,
    pub predicted_singular: u64,
}

impl QuadricNormalForm {
    pub fn new(kind: QuadricKind, m: u32, n: u32) -> Result<Self, QuadricError> {
        let ok = match kind {
            QuadricKind::X => m >= 1 && 2 * m - 1 <= n,
            QuadricKind::Y => 2 * m <= n,
        };
        if !ok {
            return Err(QuadricError::InvalidParameters { kind, m, n });
        }
        Ok(QuadricNormalForm { kind, m, n })
    }

    pub fn x(m: u32, n: u32) -> Result<Self, QuadricError> {
        Self::new(QuadricKind::X, m, n)
    }

    pub fn y(m: u32, n: u32) -> Result<Self, QuadricError> {
        Self::new(QuadricKind::Y, m, n)
    }

    /// All forms with `n <= nmax`, excluding `Y_{0,n}`.
    pub fn all_up_to(nmax: u32) -> Vec<Self> {
        let mut out = Vec::new();
        for n in 1..=nmax {
            for m in 1..=n {
                if let Ok(f) = Self::x(m, n) {
                    out.push(f);
                }
                if let Ok(f) = Self::y(m, n) {
                    out.push(f);
                }
            }
        }
        out.sort();
        out
    }

    pub fn nvars(&self) -> usize {
        self.n as usize + 1
    }

    pub fn form<C: Scalar>(&self) -> Polynomial<C> {
        let nv = self.nvars();
        let mut terms = Vec::new();
        for i in 0..self.m as usize {
            let m = Monomial::one(nv).with_exp(2 * i, 1).with_exp(2 * i + 1, 1);
            terms.push((m, C::one()));
        }
        if self.kind == QuadricKind::Y {
            terms.push((Monomial::var(2 * self.m as usize, nv).pow(2), C::one()));
        }
        Polynomial::from_terms(nv, terms)
    }

    /// The affine model `form = 1`.
    pub fn affine_polynomial<C: Scalar>(&self) -> Polynomial<C> {
        &self.form::<C>() - &Polynomial::one(self.nvars())
    }

    pub fn closed_form_count(&self, q: u64) -> CountFormulaResult {
        let (m, n) = (self.m, self.n);
        let (total, regular) = match self.kind {
            QuadricKind::X => {
                let t = q.pow(n - m) * (q.pow(m) - 1);
                (t, t)
            }
            QuadricKind::Y if q % 2 == 1 => {
                let t = q.pow(n - m) * (q.pow(m) + 1);
                (t, t)
            }
            QuadricKind::Y => (q.pow(n), q.pow(n - 2 * m) * (q.pow(2 * m) - 1)),
        };
        CountFormulaResult { predicted_total: total, predicted_regular: regular, predicted_singular: total - regular }
    }
}

impl fmt::Display for QuadricNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}_{{{},{}}}", self.kind, self.m, self.n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadricCheck {
    pub form: QuadricNormalForm,
    pub q: u64,
    pub predicted: CountFormulaResult,
    pub observed: PointCount,
    pub agrees: bool,
}

pub fn verify_against_bruteforce(
    form: &QuadricNormalForm,
    fields: &[FieldSpec],
    bound: u64,
) -> Result<Vec<QuadricCheck>, QuadricError> {
    let h = Hypersurface::affine(form.affine_polynomial::<crate::Rational>())?;
    fields
        .par_iter()
        .map(|field| {
            let observed = count_points_bounded(&h, field, bound)?;
            let predicted = form.closed_form_count(field.q());
            let agrees = observed.total == predicted.predicted_total
                && observed.regular == predicted.predicted_regular
                && observed.singular == predicted.predicted_singular;
            Ok(QuadricCheck { form: *form, q: field.q(), predicted, observed, agrees })
        })
        .collect()
}

/// Pairs of distinct forms whose regular counts over `F_q` coincide.
pub fn regular_count_collisions(forms: &[QuadricNormalForm], q: u64) -> Vec<(QuadricNormalForm, QuadricNormalForm)> {
    let mut out = Vec::new();
    for (i, a) in forms.iter().enumerate() {
        for b in &forms[i + 1..] {
            if a.closed_form_count(q).predicted_regular == b.closed_form_count(q).predicted_regular {
                out.push((*a, *b));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadricClass {
    pub kind: QuadricKind,
    pub m: u32,
    pub rank: usize,
    /// Rank one: the zero set is a doubled hyperplane.
    pub non_reduced: bool,
}

/// Symmetric Gram matrix of a quadratic form, cross terms halved.
pub fn gram_matrix<C: Scalar>(f: &Polynomial<C>) -> Result<Vec<Vec<C>>, QuadricError> {
    if f.is_zero() || !f.is_homogeneous() || f.total_degree() != Some(2) {
        return Err(QuadricError::NotQuadratic);
    }
    if C::characteristic() == 2 {
        return Err(QuadricError::CharacteristicTwo);
    }
    let n = f.nvars();
    let half = C::from_ratio(&1.into(), &2.into()).ok_or(QuadricError::NotAField)?;
    let mut g = vec![vec![C::zero(); n]; n];
    for (m, c) in f.terms() {
        let idx: Vec<usize> = (0..n).filter(|&i| m.exp(i) > 0).collect();
        match idx.as_slice() {
            [i] => g[*i][*i] = c.clone(),
            [i, j] => {
                let h = c.clone() * &half;
                g[*i][*j] = h.clone();
                g[*j][*i] = h;
            }
            _ => unreachable!("degree-2 monomial"),
        }
    }
    Ok(g)
}

pub fn matrix_rank<C: Scalar>(mut a: Vec<Vec<C>>) -> Result<usize, QuadricError> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(rank, piv);
        let inv = a[rank][col].try_inverse().ok_or(QuadricError::NotAField)?;
        for r in 0..rows {
            if r != rank && !a[r][col].is_zero() {
                let factor = a[r][col].clone() * &inv;
                for c in col..cols {
                    let v = factor.clone() * &a[rank][c];
                    a[r][c] -= &v;
                }
            }
        }
        rank += 1;
    }
    Ok(rank)
}

/// Class over the algebraic closure, read off from the rank.
pub fn classify_quadric<C: Scalar>(f: &Polynomial<C>) -> Result<QuadricClass, QuadricError> {
    let g = gram_matrix(f)?;
    let rank = matrix_rank(g)?;
    let (kind, m) =
        if rank % 2 == 0 { (QuadricKind::X, (rank / 2) as u32) } else { (QuadricKind::Y, ((rank - 1) / 2) as u32) };
    Ok(QuadricClass { kind, m, rank, non_reduced: rank == 1 })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmpiricalClass {
    /// Normal forms (same number of variables) whose counts agree with the input
    /// over every field tried.
    pub candidates: Vec<QuadricNormalForm>,
    pub fields: Vec<u64>,
}

/// Characteristic-2 fallback: compares point counts of `f = 1` against the
/// normal-form table. The result is empirical, not a proof of equivalence.
pub fn classify_by_counts<C: Scalar>(
    f: &Polynomial<C>,
    fields: &[FieldSpec],
    bound: u64,
) -> Result<EmpiricalClass, QuadricError> {
    if f.is_zero() || !f.is_homogeneous() || f.total_degree() != Some(2) {
        return Err(QuadricError::NotQuadratic);
    }
    let n = f.nvars() as u32 - 1;
    let h = Hypersurface::affine(f - &Polynomial::one(f.nvars()))?;
    let observed: Vec<PointCount> =
        fields.iter().map(|fs| count_points_bounded(&h, fs, bound)).collect::<Result<_, _>>()?;
    let mut table: Vec<QuadricNormalForm> =
        (0..=n).flat_map(|m| [QuadricNormalForm::x(m, n), QuadricNormalForm::y(m, n)]).filter_map(Result::ok).collect();
    table.retain(|form| {
        fields.iter().zip(&observed).all(|(fs, obs)| {
            let pred = form.closed_form_count(fs.q());
            pred.predicted_total == obs.total && pred.predicted_regular == obs.regular
        })
    });
    Ok(EmpiricalClass { candidates: table, fields: fields.iter().map(FieldSpec::q).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;
    use crate::scalar::{Fp, Rational};

    #[test]
    fn closed_forms_match_examples() {
        assert_eq!(QuadricNormalForm::x(2, 3).unwrap().closed_form_count(3).predicted_total, 24);
        let y = QuadricNormalForm::y(1, 2).unwrap().closed_form_count(2);
        assert_eq!((y.predicted_total, y.predicted_regular, y.predicted_singular), (4, 3, 1));
        assert_eq!(QuadricNormalForm::y(0, 2).unwrap().closed_form_count(3).predicted_total, 18);
        assert!(QuadricNormalForm::x(2, 2).is_err());
        assert!(QuadricNormalForm::y(2, 3).is_err());
    }

    #[test]
    fn small_forms_agree_with_enumeration() {
        let fields: Vec<FieldSpec> = [2u64, 3, 4].iter().map(|&q| FieldSpec::from_order(q).unwrap()).collect();
        for form in QuadricNormalForm::all_up_to(3) {
            for check in verify_against_bruteforce(&form, &fields, 1 << 20).unwrap() {
                assert!(check.agrees, "{check:?}");
            }
        }
        let y0 = QuadricNormalForm::y(0, 2).unwrap();
        for check in verify_against_bruteforce(&y0, &fields, 1 << 20).unwrap() {
            assert!(check.agrees, "{check:?}");
        }
    }

    #[test]
    fn normal_form_polynomials() {
        let names = ["x0", "x1", "x2", "x3", "x4"];
        let y = QuadricNormalForm::y(2, 4).unwrap();
        assert_eq!(y.form::<Rational>().display_with(&names), "x0*x1 + x2*x3 + x4^2");
        let x = QuadricNormalForm::x(1, 2).unwrap();
        assert_eq!(x.affine_polynomial::<Rational>().display_with(&names[..3]), "x0*x1 - 1");
    }

    #[test]
    fn rank_classification() {
        let v = ["x0", "x1", "x2", "x3"];
        let p = |s: &str| parse_polynomial::<Rational>(s, &v).unwrap();
        let c = classify_quadric(&p("x0*x1 + x2^2")).unwrap();
        assert_eq!((c.kind, c.m, c.rank), (QuadricKind::Y, 1, 3));
        let c = classify_quadric(&p("x0^2 + x1^2 + x2^2 + x3^2")).unwrap();
        assert_eq!((c.kind, c.m), (QuadricKind::X, 2));
        let c = classify_quadric(&p("x0^2")).unwrap();
        assert_eq!((c.kind, c.m, c.non_reduced), (QuadricKind::Y, 0, true));
        let c = classify_quadric(&p("(x0 + x1)^2 - (x0 - x1)^2")).unwrap();
        assert_eq!((c.kind, c.m), (QuadricKind::X, 1));
        assert_eq!(classify_quadric(&p("x0^3")), Err(QuadricError::NotQuadratic));
        assert_eq!(classify_quadric(&p("x0*x1 + 1")), Err(QuadricError::NotQuadratic));
        let f2 = parse_polynomial::<Fp<2>>("x0*x1", &v).unwrap();
        assert_eq!(classify_quadric(&f2), Err(QuadricError::CharacteristicTwo));
    }

    #[test]
    fn sum_of_squares_counts_like_split_form_when_minus_one_is_square() {
        let v = ["x0", "x1", "x2", "x3"];
        let f = parse_polynomial::<Rational>("x0^2 + x1^2 + x2^2 + x3^2", &v).unwrap();
        let h = Hypersurface::affine(&f - &Polynomial::one(4)).unwrap();
        let form = QuadricNormalForm::x(2, 3).unwrap();
        for q in [5u64, 13] {
            let field = FieldSpec::prime(q).unwrap();
            let c = count_points_bounded(&h, &field, 1 << 20).unwrap();
            assert_eq!(c.total, form.closed_form_count(q).predicted_total);
        }
    }

    #[test]
    fn char_two_fingerprint() {
        let v = ["x0", "x1", "x2"];
        let fields: Vec<FieldSpec> = [2u64, 4].iter().map(|&q| FieldSpec::from_order(q).unwrap()).collect();
        let f = parse_polynomial::<Rational>("x0*x1 + x2^2 + x0^2", &v).unwrap();
        let e = classify_by_counts(&f, &fields, 1 << 20).unwrap();
        assert_eq!(e.candidates, vec![QuadricNormalForm::y(1, 2).unwrap()]);
        let f = parse_polynomial::<Rational>("x0*x1 + x0*x2", &v).unwrap();
        let e = classify_by_counts(&f, &fields, 1 << 20).unwrap();
        assert_eq!(e.candidates, vec![QuadricNormalForm::x(1, 2).unwrap()]);
    }
}
