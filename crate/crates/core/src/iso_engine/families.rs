use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::data::{CheckResult, DanielewskiData, PolynomialMap};
use super::lemma::check_lemma_iso_hypotheses;
use super::IsoError;
use crate::poly::{parse_polynomial, Polynomial};
use crate::scalar::Scalar;

/// The two built-in families: `f = x^{d-1} y + z^d` against
/// `g = f + d x^{d-2} z^2` (`Cone`, since `V(f)` is a cone) and
/// `g = f + d x0^{d-2} x1^2` (`Line`, where `V(g)` is singular along a line).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    Cone,
    Line,
}

impl Family {
    pub fn min_degree(self) -> u32 {
        match self {
            Family::Cone => 4,
            Family::Line => 3,
        }
    }

    pub fn data<C: Scalar>(self, d: u32) -> Result<DanielewskiData<C>, IsoError> {
        match self {
            Family::Cone => family_cone(d),
            Family::Line => family_line(d),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Cone => "cone",
            Family::Line => "line",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = IsoError;
    fn from_str(s: &str) -> Result<Self, IsoError> {
        match s {
            "cone" => Ok(Family::Cone),
            "line" => Ok(Family::Line),
            _ => Err(IsoError::OutOfRange(format!("unknown family {s:?}; expected cone or line"))),
        }
    }
}

fn check_degree<C: Scalar>(d: u32, min: u32) -> Result<(), IsoError> {
    if d < min {
        return Err(IsoError::OutOfRange(format!("d = {d} but the family needs d >= {min}")));
    }
    let p = C::characteristic();
    if p != 0 && d as u64 % p == 0 {
        return Err(IsoError::CharacteristicDividesDegree { p, d });
    }
    Ok(())
}

fn build<C: Scalar>(
    s: usize,
    d: u32,
    p: String,
    q: String,
    a: String,
    b: String,
) -> Result<DanielewskiData<C>, IsoError> {
    let shell = DanielewskiData {
        s,
        m: d,
        n: d - 1,
        p: Polynomial::zero(s + 4),
        q: Polynomial::zero(s + 4),
        a: Polynomial::zero(s + 4),
        b: Polynomial::zero(s + 4),
    };
    Ok(DanielewskiData { p: shell.parse(&p)?, q: shell.parse(&q)?, a: shell.parse(&a)?, b: shell.parse(&b)?, ..shell })
}

/// `P = 1 - z^d`, `Q = P - d x^{d-2} z^2`, `A = z - x^{d-2} z^3`, `B = z + x^{d-2} z^3`,
/// `m = d`, `n = d - 1`, in variables `x, y, z, w`.
pub fn family_cone<C: Scalar>(d: u32) -> Result<DanielewskiData<C>, IsoError> {
    check_degree::<C>(d, 4)?;
    let e = d - 2;
    build(
        0,
        d,
        format!("1 - z^{d}"),
        format!("1 - z^{d} - {d}*x^{e}*z^2"),
        format!("z - x^{e}*z^3"),
        format!("z + x^{e}*z^3"),
    )
}

/// With `D = x0^{d-2} x1^2`: `P = 1 - z^d`, `Q = P - d D`, `A = z (1 - D + D^2)`,
/// `B = z (1 + D)`, `m = d`, `n = d - 1`, in variables `x0, x1, y, z, w`.
pub fn family_line<C: Scalar>(d: u32) -> Result<DanielewskiData<C>, IsoError> {
    check_degree::<C>(d, 3)?;
    let delta = format!("(x0^{}*x1^2)", d - 2);
    build(
        1,
        d,
        format!("1 - z^{d}"),
        format!("1 - z^{d} - {d}*{delta}"),
        format!("z*(1 - {delta} + {delta}^2)"),
        format!("z*(1 + {delta})"),
    )
}

/// The nodal cubic `xyz + x^3 + y^3`.
pub fn involution_deg8_cubic<C: Scalar>() -> Polynomial<C> {
    parse_polynomial("x*y*z + x^3 + y^3", &["x", "y", "z"]).expect("valid")
}

/// A degree-8 birational involution of `P^2` restricting to an automorphism of
/// the complement of the nodal cubic.
pub fn involution_deg8<C: Scalar>() -> PolynomialMap<C> {
    let v = ["x", "y", "z"];
    let f = "(x*y*z + x^3 + y^3)";
    let comps = [
        format!("(-x^4*z + 2*x^3*y^2 - 2*x^2*y*z^2 + 2*x*y^3*z + y^5 - y^2*z^3)*{f}"),
        format!("(x^2 + y*z)*{f}^2"),
        "x^7*y - x^6*z^2 + 6*x^5*y^2*z - x^4*y^4 - 3*x^4*y*z^3 + 9*x^3*y^3*z^2 + x^2*y^5*z \
         - 3*x^2*y^2*z^4 - x*y^7 + 4*x*y^4*z^3 + 2*y^6*z^2 - y^3*z^5"
            .to_string(),
    ];
    PolynomialMap::new(
        v.iter().map(|s| s.to_string()).collect(),
        comps.iter().map(|c| parse_polynomial(c, &v).expect("valid")).collect(),
    )
    .expect("three components")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OpenQuestionReport {
    pub f: String,
    pub g: String,
    /// Per naive data choice: its description and the checks it fails.
    pub attempts: Vec<(String, Vec<CheckResult>)>,
    pub conclusion: String,
}

/// `f = x^2 y + z^3` against `g = f + x w^2` in `P^3`: whether the complements are
/// isomorphic is not decided here. Reports how naive data choices fail.
pub fn open_question_instance<C: Scalar>() -> OpenQuestionReport {
    let v = ["x", "y", "z", "w"];
    let g: Polynomial<C> = parse_polynomial("x^2*y + z^3 + x*w^2", &v).expect("valid");
    let mut attempts = Vec::new();
    // g - 1 = x^2 y - Q would force Q = 1 - z^3 - x w^2, which involves w.
    for (label, q, a, b, m) in [
        ("Q = 1 - z^3 - x*w^2, A = B = z, m = 1", "1 - z^3 - x*w^2", "z", "z", 1),
        ("Q = 1 - z^3 - x*w^2, A = B = z, m = 2", "1 - z^3 - x*w^2", "z", "z", 2),
        ("Q = 1 - z^3 (w dropped), A = z - x*z^2, B = z + x*z^2, m = 2", "1 - z^3", "z - x*z^2", "z + x*z^2", 2),
    ] {
        let shell = DanielewskiData {
            s: 0,
            m,
            n: 2,
            p: Polynomial::zero(4),
            q: Polynomial::zero(4),
            a: Polynomial::zero(4),
            b: Polynomial::zero(4),
        };
        let data = DanielewskiData {
            p: shell.parse("1 - z^3").expect("valid"),
            q: shell.parse(q).expect("valid"),
            a: shell.parse(a).expect("valid"),
            b: shell.parse(b).expect("valid"),
            ..shell
        };
        let mut checks = match check_lemma_iso_hypotheses(&data) {
            Ok(r) => r.checks,
            Err(e) => vec![CheckResult::new("hypotheses evaluable", false, e.to_string())],
        };
        let g_matches = data.g().map(|gg| gg == g).unwrap_or(false);
        checks.push(CheckResult::new("data reproduces g", g_matches, ""));
        attempts.push((label.to_string(), checks));
    }
    OpenQuestionReport {
        f: "x^2*y + z^3".into(),
        g: "x^2*y + z^3 + x*w^2".into(),
        attempts,
        conclusion: "undecided: no naive data choice satisfies the hypotheses and reproduces g".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Fp, Rational};

    #[test]
    fn family_data_matches_formulas() {
        let d: DanielewskiData<Rational> = family_cone(4).unwrap();
        assert_eq!(d.show(&d.p), "-z^4 + 1");
        assert_eq!(d.show(&d.q), "-4*x^2*z^2 - z^4 + 1");
        assert_eq!(d.show(&d.f().unwrap()), "x^3*y + z^4");
        assert_eq!(d.show(&d.g().unwrap()), "x^3*y + 4*x^2*z^2 + z^4");
        let ab = d.a.substitute(d.z(), &d.b);
        assert_eq!(ab, d.parse("z - 3*x^4*z^5 - 3*x^6*z^7 - x^8*z^9").unwrap());

        let l: DanielewskiData<Rational> = family_line(3).unwrap();
        let ab = l.a.substitute(l.z(), &l.b);
        assert_eq!(ab, l.parse("z*(1 + (x0*x1^2)^3)").unwrap());
        assert_eq!(l.show(&l.g().unwrap()), "x0^2*y + 3*x0*x1^2 + z^3");
    }

    #[test]
    fn degree_range_and_characteristic() {
        assert!(matches!(family_cone::<Rational>(3), Err(IsoError::OutOfRange(_))));
        assert!(matches!(family_line::<Rational>(2), Err(IsoError::OutOfRange(_))));
        assert!(matches!(family_line::<Fp<3>>(3), Err(IsoError::CharacteristicDividesDegree { .. })));
        assert!(family_cone::<Fp<5>>(4).is_ok());
        assert_eq!("line".parse::<Family>().unwrap(), Family::Line);
        assert!("nope".parse::<Family>().is_err());
    }

    #[test]
    fn hypotheses_hold_for_small_members() {
        for d in 4..=6 {
            let data: DanielewskiData<Rational> = family_cone(d).unwrap();
            assert!(check_lemma_iso_hypotheses(&data).unwrap().passed(), "cone d={d}");
        }
        for d in 3..=5 {
            let data: DanielewskiData<Rational> = family_line(d).unwrap();
            assert!(check_lemma_iso_hypotheses(&data).unwrap().passed(), "line d={d}");
        }
    }

    #[test]
    fn open_question_is_not_answered() {
        let rep = open_question_instance::<Rational>();
        assert!(rep.attempts.iter().all(|(_, checks)| checks.iter().any(|c| !c.passed)));
        assert!(rep.conclusion.starts_with("undecided"));
    }
}
