use std::fmt;

use num_traits::Zero;

use super::compose::{compose_into, CompositionTarget};
use super::polynomial::Polynomial;
use crate::scalar::Scalar;

/// Element `numerator / x^power` of `R[x^-1]`, where `x` is the variable with
/// index `var`. Canonical: `power == 0` or `x` does not divide the numerator.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LaurentAtX0<C: Scalar> {
    numerator: Polynomial<C>,
    power: u32,
    var: usize,
}

impl<C: Scalar> LaurentAtX0<C> {
    pub fn new(numerator: Polynomial<C>, power: u32, var: usize) -> Self {
        let mut out = LaurentAtX0 { numerator, power, var };
        out.canonicalize();
        out
    }

    pub fn from_poly(p: Polynomial<C>, var: usize) -> Self {
        LaurentAtX0 { numerator: p, power: 0, var }
    }

    fn canonicalize(&mut self) {
        if self.numerator.is_zero() {
            self.power = 0;
            return;
        }
        let k = self.numerator.min_degree_in(self.var).unwrap_or(0).min(self.power);
        if k > 0 {
            self.numerator = self.numerator.divide_by_var_power(self.var, k).expect("divisible");
            self.power -= k;
        }
    }

    pub fn numerator(&self) -> &Polynomial<C> {
        &self.numerator
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    pub fn var(&self) -> usize {
        self.var
    }

    pub fn nvars(&self) -> usize {
        self.numerator.nvars()
    }

    pub fn is_polynomial(&self) -> bool {
        self.power == 0
    }

    pub fn to_polynomial(&self) -> Option<Polynomial<C>> {
        (self.power == 0).then(|| self.numerator.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    fn lift(&self, power: u32) -> Polynomial<C> {
        let k = power - self.power;
        if k == 0 {
            return self.numerator.clone();
        }
        let mut m = super::Monomial::one(self.nvars());
        m = m.with_exp(self.var, k);
        self.numerator.mul_monomial(&m, &C::one())
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.var, other.var);
        let p = self.power.max(other.power);
        Self::new(&self.lift(p) + &other.lift(p), p, self.var)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = self.power.max(other.power);
        Self::new(&self.lift(p) - &other.lift(p), p, self.var)
    }

    pub fn neg(&self) -> Self {
        LaurentAtX0 { numerator: -&self.numerator, power: self.power, var: self.var }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(&self.numerator * &other.numerator, self.power + other.power, self.var)
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::new(self.numerator.scale(c), self.power, self.var)
    }

    pub fn mul_poly(&self, p: &Polynomial<C>) -> Self {
        Self::new(&self.numerator * p, self.power, self.var)
    }

    /// Division by `x^k`.
    pub fn div_var_power(&self, k: u32) -> Self {
        Self::new(self.numerator.clone(), self.power + k, self.var)
    }

    /// If `self = c * x^e` for a unit `c` and integer `e`, returns `(c, e)`.
    pub fn as_unit_monomial(&self) -> Option<(C, i64)> {
        let [(m, c)] = self.numerator.terms() else { return None };
        if m.degree() != m.exp(self.var) || !c.is_unit() {
            return None;
        }
        Some((c.clone(), m.exp(self.var) as i64 - self.power as i64))
    }

    /// Substitutes `subs` (one Laurent element per variable, all localized at the
    /// same variable) into `self`. Fails when the image of `x` is not a unit
    /// monomial in the localized variable.
    pub fn compose(&self, subs: &[LaurentAtX0<C>]) -> Option<LaurentAtX0<C>> {
        let top = compose_into(&self.numerator, subs);
        if self.power == 0 {
            return Some(top);
        }
        let (c, e) = subs[self.var].as_unit_monomial()?;
        let cinv = c.try_inverse()?;
        let mut scale = C::one();
        for _ in 0..self.power {
            scale = scale * &cinv;
        }
        let shift = e * self.power as i64;
        let scaled = top.scale(&scale);
        Some(if shift >= 0 {
            scaled.div_var_power(shift as u32)
        } else {
            let mut m = super::Monomial::one(scaled.nvars());
            m = m.with_exp(scaled.var, (-shift) as u32);
            LaurentAtX0::new(scaled.numerator.mul_monomial(&m, &C::one()), scaled.power, scaled.var)
        })
    }

    pub fn display_with(&self, names: &[&str]) -> String {
        let num = self.numerator.display_with(names);
        match self.power {
            0 => num,
            1 => format!("({num})/{}", names[self.var]),
            k => format!("({num})/{}^{k}", names[self.var]),
        }
    }
}

impl<C: Scalar> fmt::Display for LaurentAtX0<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = Polynomial::<C>::default_var_names(self.nvars());
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        f.write_str(&self.display_with(&refs))
    }
}

impl<C: Scalar> CompositionTarget for LaurentAtX0<C> {
    type Coeff = C;
    fn zero_like(&self) -> Self {
        LaurentAtX0::from_poly(Polynomial::zero(self.nvars()), self.var)
    }
    fn scalar_like(&self, c: &C) -> Self {
        LaurentAtX0::from_poly(Polynomial::constant(self.nvars(), c.clone()), self.var)
    }
    fn add(&self, other: &Self) -> Self {
        LaurentAtX0::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        LaurentAtX0::mul(self, other)
    }
    fn is_zero(&self) -> bool {
        self.numerator.is_zero() && self.power.is_zero()
    }
}
