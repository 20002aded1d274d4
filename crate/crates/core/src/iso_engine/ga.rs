//! Additive group actions given by substitutions, possibly involving `1/f`.

use serde::Serialize;

use super::data::CheckResult;
use crate::poly::{compose, parse_polynomial, Polynomial};
use crate::scalar::Scalar;

/// Rational invariant `numerator / denominator`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invariant<C: Scalar> {
    pub numerator: Polynomial<C>,
    pub denominator: Polynomial<C>,
}

/// `rho(t, x)` on coordinates `x_0..x_{k-1}`. The ring has variables
/// `x_0..x_{k-1}, t`, and optionally a last variable standing for `1/f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaAction<C: Scalar> {
    pub name: String,
    pub vars: Vec<String>,
    /// Number of coordinates acted on.
    pub coords: usize,
    pub components: Vec<Polynomial<C>>,
    /// `f` such that the last variable is `1/f`; `f` only involves coordinates.
    pub inverse_of: Option<Polynomial<C>>,
    pub invariants: Vec<Invariant<C>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GaReport {
    pub name: String,
    pub checks: Vec<CheckResult>,
}

impl GaReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl<C: Scalar> GaAction<C> {
    fn t(&self) -> usize {
        self.coords
    }

    fn inv_var(&self) -> Option<usize> {
        self.inverse_of.as_ref().map(|_| self.coords + 1)
    }

    /// Ring with one more parameter `t'` appended at the end.
    fn widen(&self, p: &Polynomial<C>) -> Polynomial<C> {
        p.extend_vars(p.nvars() + 1)
    }

    /// Zero test in `k[x, t, t'][1/f]`: clears powers of the inverse variable.
    fn is_zero_localized(&self, p: &Polynomial<C>) -> bool {
        let (Some(v), Some(f)) = (self.inv_var(), &self.inverse_of) else { return p.is_zero() };
        let f = f.extend_vars(p.nvars());
        let coeffs = p.coefficients_in(v);
        let Some(k) = coeffs.len().checked_sub(1) else { return true };
        let mut acc = Polynomial::zero(p.nvars());
        let mut fp = Polynomial::one(p.nvars());
        for i in (0..=k).rev() {
            acc = &acc + &(&coeffs[i] * &fp);
            fp = &fp * &f;
        }
        acc.is_zero()
    }
}

/// `rho(0) = id`, `rho(t) o rho(t') = rho(t + t')`, and invariance of each invariant.
pub fn verify_ga_action<C: Scalar>(action: &GaAction<C>) -> GaReport {
    let nv = action.vars.len();
    let k = action.coords;
    let t = action.t();
    let mut checks = Vec::new();

    // rho(0) = id
    let at_zero: Vec<Polynomial<C>> = action.components.iter().map(|c| c.substitute_constant(t, &C::zero())).collect();
    let id_ok = at_zero.iter().enumerate().all(|(i, c)| action.is_zero_localized(&(c - &Polynomial::var(i, nv))));
    checks.push(CheckResult::new("rho(0) = id", id_ok, ""));

    // Invariance of f itself is needed before 1/f may be carried through a substitution.
    let mut inverse_ok = true;
    if let Some(f) = &action.inverse_of {
        let mut subs: Vec<Polynomial<C>> = action.components.clone();
        subs.extend((k..nv).map(|i| Polynomial::var(i, nv)));
        let moved = compose(&f.extend_vars(nv), &subs);
        inverse_ok = action.is_zero_localized(&(&moved - &f.extend_vars(nv)));
        checks.push(CheckResult::new("f o rho = f", inverse_ok, ""));
    }

    // rho(t)(rho(t')(x)) = rho(t + t')(x), in variables (x, t, [1/f], t').
    let wide = nv + 1;
    let tp = nv;
    let inner: Vec<Polynomial<C>> = action
        .components
        .iter()
        .map(|c| {
            let w = action.widen(c);
            let mut subs: Vec<Polynomial<C>> = (0..wide).map(|i| Polynomial::var(i, wide)).collect();
            subs[t] = Polynomial::var(tp, wide);
            compose(&w, &subs)
        })
        .collect();
    let mut outer_subs = inner.clone();
    outer_subs.extend((k..wide).map(|i| Polynomial::var(i, wide)));
    let sum_t = &Polynomial::var(t, wide) + &Polynomial::var(tp, wide);
    let mut cocycle_ok = inverse_ok;
    if inverse_ok {
        for c in &action.components {
            let w = action.widen(c);
            let lhs = compose(&w, &outer_subs);
            let rhs = w.substitute(t, &sum_t);
            if !action.is_zero_localized(&(&lhs - &rhs)) {
                cocycle_ok = false;
            }
        }
    }
    checks.push(CheckResult::new(
        "rho(t) o rho(t') = rho(t + t')",
        cocycle_ok,
        if inverse_ok { "" } else { "not evaluated: f is not invariant" },
    ));

    for (idx, inv) in action.invariants.iter().enumerate() {
        let mut subs: Vec<Polynomial<C>> = action.components.clone();
        subs.extend((k..nv).map(|i| Polynomial::var(i, nv)));
        let num = inv.numerator.extend_vars(nv);
        let den = inv.denominator.extend_vars(nv);
        let lhs = &compose(&num, &subs) * &den;
        let rhs = &num * &compose(&den, &subs);
        checks.push(CheckResult::new(
            format!("invariant {idx} preserved"),
            action.is_zero_localized(&(&lhs - &rhs)),
            "",
        ));
    }
    GaReport { name: action.name.clone(), checks }
}

fn parse_all<C: Scalar>(vars: &[&str], exprs: &[&str]) -> Vec<Polynomial<C>> {
    exprs.iter().map(|e| parse_polynomial(e, vars).expect("valid built-in expression")).collect()
}

fn invariant<C: Scalar>(vars: &[&str], num: &str, den: &str) -> Invariant<C> {
    let [numerator, denominator]: [Polynomial<C>; 2] = parse_all(vars, &[num, den]).try_into().expect("two");
    Invariant { numerator, denominator }
}

/// Built-in actions: two on quadric complements in `P^4`, one on the complement
/// of a cubic of multiplicity 2 along a line in `P^3`, and translation on `A^1`.
pub fn ga_examples<C: Scalar>() -> Vec<GaAction<C>> {
    let names = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let q1 = ["x0", "x1", "x2", "x3", "x4", "t"];
    let f1 = "x0*x1 + x2^2 + x3*x4";
    let q2 = ["x0", "x1", "x2", "x3", "x4", "t"];
    let f2 = "x0*x1 + x2*x3 + x4^2";
    let l = ["x0", "x1", "x2", "x3", "t", "finv"];
    let lf = "x0*x2^2 + x1*x3^2 + x2^3";
    let tr = ["x", "t"];
    vec![
        GaAction {
            name: "quadric x0*x1 + x2^2 + f".into(),
            vars: names(&q1),
            coords: 5,
            components: parse_all(&q1, &["x0", "x1 - 2*t*x2 - t^2*x0", "x2 + t*x0", "x3", "x4"]),
            inverse_of: None,
            invariants: vec![invariant(&q1, f1, "1"), invariant(&q1, "x0^2", f1)],
        },
        GaAction {
            name: "quadric x0*x1 + x2*x3 + g".into(),
            vars: names(&q2),
            coords: 5,
            components: parse_all(&q2, &["x0", "x1 - t*x3", "x2 + t*x0", "x3", "x4"]),
            inverse_of: None,
            invariants: vec![invariant(&q2, f2, "1"), invariant(&q2, "x0^2", f2)],
        },
        GaAction {
            name: "cubic with a double line".into(),
            vars: names(&l),
            coords: 4,
            // f = x0 a0 + x1 a1 + b with a0 = x2^2, a1 = x3^2, b = x2^3.
            components: parse_all(&l, &["x0 + t*x3^2*x3^2*finv", "x1 - t*x2^2*x3^2*finv", "x2", "x3"]),
            inverse_of: Some(parse_polynomial(lf, &l[..4]).expect("valid")),
            invariants: vec![invariant(&l, lf, "1")],
        },
        GaAction {
            name: "translation on A^1".into(),
            vars: names(&tr),
            coords: 1,
            components: parse_all(&tr, &["x + t"]),
            inverse_of: None,
            invariants: Vec::new(),
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn built_in_actions_pass() {
        for a in ga_examples::<Rational>() {
            let r = verify_ga_action(&a);
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn broken_actions_fail() {
        let mut acts = ga_examples::<Rational>();
        let v = ["x0", "x1", "x2", "x3", "x4", "t"];
        acts[0].components[1] = parse_polynomial("x1 - 2*t*x2 - 2*t^2*x0", &v).unwrap();
        let r = verify_ga_action(&acts[0]);
        assert!(!r.passed());
        let l = ["x0", "x1", "x2", "x3", "t", "finv"];
        acts[2].components[1] = parse_polynomial("x1 - t*x2^2*x2^2*finv", &l).unwrap();
        let r = verify_ga_action(&acts[2]);
        assert!(!r.checks.iter().find(|c| c.name == "f o rho = f").unwrap().passed);
        let tr = ["x", "t"];
        acts[3].components[0] = parse_polynomial("x + t^2", &tr).unwrap();
        assert!(!verify_ga_action(&acts[3]).passed());
    }
}
