use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::One;

use super::monomial::Monomial;
use super::PolyError;
use crate::scalar::Scalar;

/// Sparse multivariate polynomial. Terms are kept sorted in decreasing
/// graded-lex order with no zero coefficients, so structural equality is
/// mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Polynomial<C: Scalar> {
    nvars: usize,
    terms: Vec<(Monomial, C)>,
}

impl<C: Scalar> Polynomial<C> {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: Vec::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        if c.is_zero() {
            return Self::zero(nvars);
        }
        Polynomial { nvars, terms: vec![(Monomial::one(nvars), c)] }
    }

    pub fn from_i64(nvars: usize, v: i64) -> Self {
        Self::constant(nvars, C::from_i64(v))
    }

    pub fn var(i: usize, nvars: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        Polynomial { nvars, terms: vec![(Monomial::var(i, nvars), C::one())] }
    }

    pub fn monomial(m: Monomial, c: C) -> Self {
        let nvars = m.nvars();
        if c.is_zero() {
            return Self::zero(nvars);
        }
        Polynomial { nvars, terms: vec![(m, c)] }
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut acc: HashMap<Monomial, C> = HashMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), nvars);
            match acc.get_mut(&m) {
                Some(v) => *v += &c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Self::from_map(nvars, acc)
    }

    fn from_map(nvars: usize, acc: HashMap<Monomial, C>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Polynomial { nvars, terms }
    }

    /// Terms already sorted decreasingly and free of zeros and duplicates.
    fn from_sorted(nvars: usize, terms: Vec<(Monomial, C)>) -> Self {
        Polynomial { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Monomial, C)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, C)> {
        self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    /// Value of a constant polynomial.
    pub fn constant_value(&self) -> Option<C> {
        match self.terms.as_slice() {
            [] => Some(C::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn constant_term(&self) -> C {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => C::zero(),
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> C {
        match self.terms.binary_search_by(|(t, _)| m.cmp(t)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => C::zero(),
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    /// Lowest total degree of a term (order of vanishing at the origin).
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).min()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.exp(var)).max()
    }

    pub fn min_degree_in(&self, var: usize) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.exp(var)).min()
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exp(var) > 0)
    }

    pub fn leading_term(&self) -> Option<&(Monomial, C)> {
        self.terms.first()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m, _)) => self.terms.iter().all(|(t, _)| t.degree() == m.degree()),
        }
    }

    pub fn homogeneous_components(&self) -> BTreeMap<u32, Polynomial<C>> {
        let mut out: BTreeMap<u32, Vec<(Monomial, C)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree()).or_default().push((m.clone(), c.clone()));
        }
        out.into_iter().map(|(d, t)| (d, Self::from_sorted(self.nvars, t))).collect()
    }

    /// Set of residues of term degrees modulo `d`.
    pub fn degree_residues_mod(&self, d: u32) -> BTreeSet<u32> {
        assert!(d > 0);
        self.terms.iter().map(|(m, _)| m.degree() % d).collect()
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        let terms: Vec<_> = self
            .terms
            .iter()
            .filter_map(|(m, a)| {
                let v = a.clone() * c;
                (!v.is_zero()).then(|| (m.clone(), v))
            })
            .collect();
        Self::from_sorted(self.nvars, terms)
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &C) -> Self {
        let terms: Vec<_> = self
            .terms
            .iter()
            .filter_map(|(t, a)| {
                let v = a.clone() * c;
                (!v.is_zero()).then(|| (t.mul(m), v))
            })
            .collect();
        Self::from_sorted(self.nvars, terms)
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.nvars);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn map_coeffs<D: Scalar>(&self, mut f: impl FnMut(&C) -> D) -> Polynomial<D> {
        Polynomial::from_terms(self.nvars, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    pub fn try_map_coeffs<D: Scalar>(&self, mut f: impl FnMut(&C) -> Option<D>) -> Option<Polynomial<D>> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            terms.push((m.clone(), f(c)?));
        }
        Some(Polynomial::from_terms(self.nvars, terms))
    }

    /// Image in another coefficient domain via exact reduction of integer numerators
    /// and denominators (e.g. `Q -> GF(p)`).
    pub fn reduce_into<D: Scalar>(&self) -> Option<Polynomial<D>>
    where
        C: IntoRatio,
    {
        self.try_map_coeffs(|c| {
            let (n, d) = c.to_ratio();
            D::from_ratio(&n, &d)
        })
    }

    /// Formal partial derivative.
    pub fn derivative(&self, var: usize) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| m.exp(var) > 0).map(|(m, c)| {
            let e = m.exp(var);
            (m.with_exp(var, e - 1), c.clone() * &C::from_i64(e as i64))
        });
        Self::from_terms(self.nvars, terms)
    }

    pub fn eval(&self, point: &[C]) -> C {
        assert_eq!(point.len(), self.nvars);
        let mut acc = C::zero();
        let mut powers: Vec<Vec<C>> = point.iter().map(|p| vec![C::one(), p.clone()]).collect();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = &mut powers[i];
                while pw.len() <= e as usize {
                    let next = pw[pw.len() - 1].clone() * &pw[1];
                    pw.push(next);
                }
                v = v * &pw[e as usize];
            }
            acc += &v;
        }
        acc
    }

    /// Coefficients with respect to `var`: `self = sum_e out[e] * var^e`, where
    /// each `out[e]` no longer involves `var`.
    pub fn coefficients_in(&self, var: usize) -> Vec<Polynomial<C>> {
        let deg = match self.degree_in(var) {
            None => return Vec::new(),
            Some(d) => d as usize,
        };
        let mut buckets: Vec<Vec<(Monomial, C)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            buckets[m.exp(var) as usize].push((m.with_exp(var, 0), c.clone()));
        }
        buckets.into_iter().map(|t| Self::from_terms(self.nvars, t)).collect()
    }

    pub fn from_coefficients_in(var: usize, nvars: usize, coeffs: &[Polynomial<C>]) -> Self {
        let mut terms = Vec::new();
        for (e, p) in coeffs.iter().enumerate() {
            for (m, c) in &p.terms {
                terms.push((m.with_exp(var, m.exp(var) + e as u32), c.clone()));
            }
        }
        Self::from_terms(nvars, terms)
    }

    /// Drops every term divisible by `var^power`.
    pub fn truncate_mod_var(&self, var: usize, power: u32) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| m.exp(var) < power).cloned().collect();
        Self::from_sorted(self.nvars, terms)
    }

    /// Residue modulo `x0^power`.
    pub fn truncate_mod_x0(&self, power: u32) -> Self {
        self.truncate_mod_var(0, power)
    }

    /// Divides every term by `var^k`; `None` if some term is not divisible.
    pub fn divide_by_var_power(&self, var: usize, k: u32) -> Option<Self> {
        if k == 0 {
            return Some(self.clone());
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let e = m.exp(var);
            if e < k {
                return None;
            }
            terms.push((m.with_exp(var, e - k), c.clone()));
        }
        Some(Self::from_terms(self.nvars, terms))
    }

    /// Appends variables so the result lives in `nvars` variables.
    pub fn extend_vars(&self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars);
        let map: Vec<usize> = (0..self.nvars).collect();
        self.remap_vars(&map, nvars)
    }

    /// Renames variable `i` to `map[i]` inside a ring of `nvars` variables.
    pub fn remap_vars(&self, map: &[usize], nvars: usize) -> Self {
        assert_eq!(map.len(), self.nvars);
        let terms = self.terms.iter().map(|(m, c)| (m.remap(map, nvars), c.clone()));
        Self::from_terms(nvars, terms)
    }

    /// Substitutes the constant `value` for `var`; the variable slot remains.
    pub fn substitute_constant(&self, var: usize, value: &C) -> Self {
        let mut powers = vec![C::one()];
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let e = m.exp(var) as usize;
                while powers.len() <= e {
                    let next = powers[powers.len() - 1].clone() * value;
                    powers.push(next);
                }
                (m.with_exp(var, 0), c.clone() * &powers[e])
            })
            .collect();
        Self::from_terms(self.nvars, terms)
    }

    /// Replaces `var` by the polynomial `value` (same ring).
    pub fn substitute(&self, var: usize, value: &Polynomial<C>) -> Self {
        let mut subs: Vec<Polynomial<C>> = (0..self.nvars).map(|i| Self::var(i, self.nvars)).collect();
        subs[var] = value.clone();
        super::compose(self, &subs)
    }

    /// `self(x + point)`: the expansion of `self` around `point`.
    pub fn taylor_shift(&self, point: &[C]) -> Self {
        assert_eq!(point.len(), self.nvars);
        let subs: Vec<Polynomial<C>> = point
            .iter()
            .enumerate()
            .map(|(i, c)| &Self::var(i, self.nvars) + &Self::constant(self.nvars, c.clone()))
            .collect();
        super::compose(self, &subs)
    }

    /// Multiplies each homogeneous component of degree `e` by `h^((target - e)/step)`,
    /// where `step = deg h`.
    pub fn homogenize_with(&self, h: &Polynomial<C>, target: u32) -> Result<Self, PolyError> {
        let step = h.total_degree().ok_or(PolyError::DivisionByZero)?;
        if !h.is_homogeneous() || step == 0 {
            return Err(PolyError::NotHomogeneous);
        }
        let mut acc = Self::zero(self.nvars);
        let mut powers = vec![Self::one(self.nvars)];
        for (e, comp) in self.homogeneous_components() {
            if e > target || (target - e) % step != 0 {
                return Err(PolyError::DegreeMismatch { degree: e, target, step });
            }
            let k = ((target - e) / step) as usize;
            while powers.len() <= k {
                let next = &powers[powers.len() - 1] * h;
                powers.push(next);
            }
            acc = &acc + &(&comp * &powers[k]);
        }
        Ok(acc)
    }

    /// Exact quotient `self / divisor`, by leading-term reduction in grlex order.
    pub fn divide_exact(&self, divisor: &Polynomial<C>) -> Result<Self, PolyError> {
        self.check_arity(divisor)?;
        let (lm, lc) = divisor.leading_term().ok_or(PolyError::DivisionByZero)?.clone();
        let rest = &divisor.terms[1..];
        let mut rem: BTreeMap<Monomial, C> = self.terms.iter().cloned().collect();
        let mut quotient = Vec::new();
        while let Some((m, c)) = rem.pop_last() {
            if !lm.divides(&m) {
                return Err(PolyError::NotDivisible);
            }
            let qc = c.try_div(&lc).ok_or(PolyError::NotDivisible)?;
            let qm = lm.quotient_of(&m);
            for (t, a) in rest {
                let key = t.mul(&qm);
                let v = a.clone() * &qc;
                match rem.get_mut(&key) {
                    Some(e) => {
                        *e -= &v;
                        if e.is_zero() {
                            rem.remove(&key);
                        }
                    }
                    None => {
                        rem.insert(key, -v);
                    }
                }
            }
            quotient.push((qm, qc));
        }
        Ok(Self::from_sorted(self.nvars, quotient))
    }

    /// Division by `divisor`, viewed as a polynomial in `var` whose leading
    /// coefficient is a unit constant. Returns `(quotient, remainder)` with
    /// `deg_var(remainder) < deg_var(divisor)`.
    pub fn divide_monic_in_var(&self, divisor: &Polynomial<C>, var: usize) -> Result<(Self, Self), PolyError> {
        self.check_arity(divisor)?;
        let dcoeffs = divisor.coefficients_in(var);
        let dd = dcoeffs.len().checked_sub(1).ok_or(PolyError::DivisionByZero)?;
        let lead = dcoeffs[dd].constant_value().filter(|c| !c.is_zero());
        let lead_inv = lead.and_then(|c| c.try_inverse()).ok_or(PolyError::NonUnitLeadingCoefficient)?;
        let mut r = self.coefficients_in(var);
        if r.len() <= dd {
            return Ok((Self::zero(self.nvars), self.clone()));
        }
        let mut q = vec![Self::zero(self.nvars); r.len() - dd];
        for e in (dd..r.len()).rev() {
            if r[e].is_zero() {
                continue;
            }
            let qe = r[e].scale(&lead_inv);
            for (j, dj) in dcoeffs.iter().enumerate().take(dd) {
                if !dj.is_zero() {
                    let idx = e - dd + j;
                    r[idx] = &r[idx] - &(&qe * dj);
                }
            }
            r[e] = Self::zero(self.nvars);
            q[e - dd] = qe;
        }
        r.truncate(dd);
        Ok((Self::from_coefficients_in(var, self.nvars, &q), Self::from_coefficients_in(var, self.nvars, &r)))
    }

    fn check_arity(&self, other: &Polynomial<C>) -> Result<(), PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::ArityMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(())
    }

    /// Formats with the given variable names.
    pub fn display_with(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let mut cs = c.to_string();
            let neg = cs.starts_with('-');
            if neg {
                cs.remove(0);
            }
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = format_monomial(m, names);
            if mono.is_empty() {
                out.push_str(&cs);
            } else if cs == "1" {
                out.push_str(&mono);
            } else {
                out.push_str(&cs);
                out.push('*');
                out.push_str(&mono);
            }
        }
        out
    }

    pub fn default_var_names(nvars: usize) -> Vec<String> {
        (0..nvars).map(|i| format!("x{i}")).collect()
    }
}

fn format_monomial(m: &Monomial, names: &[&str]) -> String {
    let parts: Vec<String> = m
        .exps()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { names[i].to_string() } else { format!("{}^{}", names[i], e) })
        .collect();
    parts.join("*")
}

impl<C: Scalar> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = Self::default_var_names(self.nvars);
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        f.write_str(&self.display_with(&refs))
    }
}

/// Coefficients that can be written as a ratio of integers.
pub trait IntoRatio {
    fn to_ratio(&self) -> (num_bigint::BigInt, num_bigint::BigInt);
}

impl IntoRatio for num_rational::BigRational {
    fn to_ratio(&self) -> (num_bigint::BigInt, num_bigint::BigInt) {
        (self.numer().clone(), self.denom().clone())
    }
}

impl IntoRatio for num_bigint::BigInt {
    fn to_ratio(&self) -> (num_bigint::BigInt, num_bigint::BigInt) {
        (self.clone(), num_bigint::BigInt::one())
    }
}

fn merge<C: Scalar>(a: &[(Monomial, C)], b: &[(Monomial, C)], negate_b: bool) -> Vec<(Monomial, C)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Less => {
                let c = if negate_b { -b[j].1.clone() } else { b[j].1.clone() };
                out.push((b[j].0.clone(), c));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let mut c = a[i].1.clone();
                if negate_b {
                    c -= &b[j].1;
                } else {
                    c += &b[j].1;
                }
                if !c.is_zero() {
                    out.push((a[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    for t in &b[j..] {
        let c = if negate_b { -t.1.clone() } else { t.1.clone() };
        out.push((t.0.clone(), c));
    }
    out
}

impl<'a, C: Scalar> Add<&'a Polynomial<C>> for &'a Polynomial<C> {
    type Output = Polynomial<C>;
    fn add(self, rhs: &'a Polynomial<C>) -> Polynomial<C> {
        assert_eq!(self.nvars, rhs.nvars, "arity mismatch in addition");
        Polynomial::from_sorted(self.nvars, merge(&self.terms, &rhs.terms, false))
    }
}

impl<'a, C: Scalar> Sub<&'a Polynomial<C>> for &'a Polynomial<C> {
    type Output = Polynomial<C>;
    fn sub(self, rhs: &'a Polynomial<C>) -> Polynomial<C> {
        assert_eq!(self.nvars, rhs.nvars, "arity mismatch in subtraction");
        Polynomial::from_sorted(self.nvars, merge(&self.terms, &rhs.terms, true))
    }
}

impl<'a, C: Scalar> Mul<&'a Polynomial<C>> for &'a Polynomial<C> {
    type Output = Polynomial<C>;
    fn mul(self, rhs: &'a Polynomial<C>) -> Polynomial<C> {
        assert_eq!(self.nvars, rhs.nvars, "arity mismatch in multiplication");
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        if rhs.terms.len() == 1 {
            return self.mul_monomial(&rhs.terms[0].0, &rhs.terms[0].1);
        }
        if self.terms.len() == 1 {
            return rhs.mul_monomial(&self.terms[0].0, &self.terms[0].1);
        }
        let mut acc: HashMap<Monomial, C> = HashMap::with_capacity(self.terms.len() * 2);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = ma.mul(mb);
                let v = ca.clone() * cb;
                match acc.get_mut(&m) {
                    Some(e) => *e += &v,
                    None => {
                        acc.insert(m, v);
                    }
                }
            }
        }
        Polynomial::from_map(self.nvars, acc)
    }
}

impl<'a, C: Scalar> Neg for &'a Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect();
        Polynomial::from_sorted(self.nvars, terms)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl<C: Scalar> $tr for Polynomial<C> {
            type Output = Polynomial<C>;
            fn $method(self, rhs: Polynomial<C>) -> Polynomial<C> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<C: Scalar> Neg for Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;
    use crate::scalar::{Fp, Rational};

    fn q(s: &str, vars: &[&str]) -> Polynomial<Rational> {
        parse_polynomial(s, vars).unwrap()
    }

    #[test]
    fn arithmetic_and_display() {
        let v = ["x", "y"];
        let a = q("x + y", &v);
        let b = q("x - y", &v);
        assert_eq!(&a * &b, q("x^2 - y^2", &v));
        assert_eq!((&a * &b).display_with(&v), "x^2 - y^2");
        assert_eq!(&a + &b, q("2*x", &v));
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn exact_division() {
        let v = ["x", "y", "z"];
        let f = q("x*y*z + x^3 + y^3", &v);
        let g = q("x^2 - 3*y*z + 1/2", &v);
        let prod = &f * &g;
        assert_eq!(prod.divide_exact(&f).unwrap(), g);
        assert_eq!(prod.divide_exact(&g).unwrap(), f);
        assert_eq!((&prod + &Polynomial::one(3)).divide_exact(&f), Err(PolyError::NotDivisible));
    }

    #[test]
    fn integer_division_respects_content() {
        let v = ["x"];
        let a: Polynomial<num_bigint::BigInt> = parse_polynomial("2*x + 2", &v).unwrap();
        let b: Polynomial<num_bigint::BigInt> = parse_polynomial("2*x", &v).unwrap();
        assert_eq!(a.divide_exact(&b), Err(PolyError::NotDivisible));
        let c: Polynomial<num_bigint::BigInt> = parse_polynomial("x + 1", &v).unwrap();
        assert_eq!(a.divide_exact(&c).unwrap(), Polynomial::from_i64(1, 2));
    }

    #[test]
    fn monic_division_in_one_variable() {
        let v = ["x", "y", "z"];
        let a = q("x^2*y^3 + z*y^2 - y + x", &v);
        let d = q("y^2 - x*z", &v);
        let (quo, rem) = a.divide_monic_in_var(&d, 1).unwrap();
        assert!(rem.degree_in(1).unwrap_or(0) < 2);
        assert_eq!(&(&quo * &d) + &rem, a);
        let bad = q("x*y^2 + 1", &v);
        assert_eq!(a.divide_monic_in_var(&bad, 1), Err(PolyError::NonUnitLeadingCoefficient));
    }

    #[test]
    fn taylor_shift_recovers_local_order() {
        let v = ["x", "y"];
        let cusp = q("(y-1)^2 - (x-2)^3", &v);
        let shifted = cusp.taylor_shift(&[Rational::from_i64(2), Rational::from_i64(1)]);
        assert_eq!(shifted.min_degree(), Some(2));
        assert_eq!(shifted, q("y^2 - x^3", &v));
    }

    #[test]
    fn homogeneous_helpers() {
        let v = ["x", "y"];
        let p = q("x^3 + x*y + y + 1", &v);
        let comps = p.homogeneous_components();
        assert_eq!(comps.keys().copied().collect::<Vec<_>>(), vec![0, 1, 2, 3]);
        assert_eq!(p.degree_residues_mod(2), [0, 1].into_iter().collect());
        assert!(!p.is_homogeneous());
        let h = q("x^2 + y^2", &v);
        let hom = q("x^3 + x*y", &v).homogenize_with(&h, 5);
        assert!(matches!(hom, Err(PolyError::DegreeMismatch { .. })));
        let hom = q("x^3 + x", &v).homogenize_with(&h, 5).unwrap();
        assert!(hom.is_homogeneous());
        assert_eq!(hom.total_degree(), Some(5));
    }

    #[test]
    fn truncation() {
        let v = ["x0", "y"];
        let p = q("x0^3*y + x0*y^2 + y + x0^2", &v);
        assert_eq!(p.truncate_mod_x0(2), q("x0*y^2 + y", &v));
    }

    #[test]
    fn mod_p_reduction() {
        let v = ["x", "y"];
        let p = q("1/2*x + 3*y", &v);
        let r: Polynomial<Fp<3>> = p.reduce_into().unwrap();
        assert_eq!(r, parse_polynomial("2*x", &v).unwrap());
        assert!(p.reduce_into::<Fp<2>>().is_none());
    }

    #[test]
    fn evaluation_and_derivative() {
        let v = ["x", "y"];
        let p = q("x^2*y - 3*y + 2", &v);
        let pt = [Rational::from_i64(2), Rational::from_i64(-1)];
        assert_eq!(p.eval(&pt), Rational::from_i64(1));
        assert_eq!(p.derivative(0), q("2*x*y", &v));
        assert_eq!(p.derivative(1), q("x^2 - 3", &v));
    }
}
