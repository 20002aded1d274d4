use num_traits::Zero;

use super::monomial::Monomial;
use super::polynomial::Polynomial;
use crate::scalar::Scalar;

/// A commutative ring receiving polynomial substitutions.
pub trait CompositionTarget: Clone {
    type Coeff: Scalar;
    fn zero_like(&self) -> Self;
    fn scalar_like(&self, c: &Self::Coeff) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn is_zero(&self) -> bool;
}

impl<C: Scalar> CompositionTarget for Polynomial<C> {
    type Coeff = C;
    fn zero_like(&self) -> Self {
        Polynomial::zero(self.nvars())
    }
    fn scalar_like(&self, c: &C) -> Self {
        Polynomial::constant(self.nvars(), c.clone())
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn is_zero(&self) -> bool {
        Polynomial::is_zero(self)
    }
}

/// `target(subs[0], ..., subs[n-1])`, computed by nested Horner schemes.
pub fn compose<C: Scalar>(target: &Polynomial<C>, subs: &[Polynomial<C>]) -> Polynomial<C> {
    compose_into(target, subs)
}

/// Composition into any ring implementing [`CompositionTarget`].
pub fn compose_into<T: CompositionTarget>(target: &Polynomial<T::Coeff>, subs: &[T]) -> T {
    assert_eq!(target.nvars(), subs.len(), "one substitution per variable is required");
    assert!(!subs.is_empty() || target.is_constant());
    let proto = match subs.first() {
        Some(s) => s.clone(),
        None => panic!("composition of a 0-variable polynomial needs a prototype"),
    };
    let terms: Vec<&(Monomial, T::Coeff)> = target.terms().iter().collect();
    let mut powers: Vec<Vec<T>> = subs.iter().map(|s| vec![s.clone()]).collect();
    horner(&terms, 0, subs, &proto, &mut powers)
}

/// `s^k` for `k >= 1`, cached.
fn power<T: CompositionTarget>(powers: &mut [Vec<T>], var: usize, k: usize) -> T {
    let cache = &mut powers[var];
    while cache.len() < k {
        let next = cache[cache.len() - 1].mul(&cache[0]);
        cache.push(next);
    }
    cache[k - 1].clone()
}

fn horner<T: CompositionTarget>(
    terms: &[&(Monomial, T::Coeff)],
    var: usize,
    subs: &[T],
    proto: &T,
    powers: &mut [Vec<T>],
) -> T {
    if terms.is_empty() {
        return proto.zero_like();
    }
    if var == subs.len() {
        let mut c = T::Coeff::zero();
        for (_, v) in terms {
            c += v;
        }
        return proto.scalar_like(&c);
    }
    if terms.iter().all(|(m, _)| m.exp(var) == 0) {
        return horner(terms, var + 1, subs, proto, powers);
    }
    let mut sorted: Vec<&(Monomial, T::Coeff)> = terms.to_vec();
    sorted.sort_by(|a, b| b.0.exp(var).cmp(&a.0.exp(var)));
    let mut acc: Option<T> = None;
    let mut prev = 0u32;
    let mut start = 0;
    while start < sorted.len() {
        let e = sorted[start].0.exp(var);
        let mut end = start;
        while end < sorted.len() && sorted[end].0.exp(var) == e {
            end += 1;
        }
        let inner = horner(&sorted[start..end], var + 1, subs, proto, powers);
        acc = Some(match acc {
            None => inner,
            Some(a) => {
                let shifted = a.mul(&power(powers, var, (prev - e) as usize));
                shifted.add(&inner)
            }
        });
        prev = e;
        start = end;
    }
    let acc = acc.expect("nonempty");
    if prev > 0 {
        acc.mul(&power(powers, var, prev as usize))
    } else {
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;
    use crate::scalar::Rational;

    #[test]
    fn composition_matches_expansion() {
        let v = ["x", "y"];
        let f: Polynomial<Rational> = parse_polynomial("x^3*y + 2*x*y^2 - y^4 + 7", &v).unwrap();
        let a = parse_polynomial("x + y^2", &v).unwrap();
        let b = parse_polynomial("x*y - 1", &v).unwrap();
        let expected = parse_polynomial("(x + y^2)^3*(x*y - 1) + 2*(x + y^2)*(x*y - 1)^2 - (x*y-1)^4 + 7", &v).unwrap();
        assert_eq!(compose(&f, &[a, b]), expected);
    }

    #[test]
    fn composition_changes_arity() {
        let f: Polynomial<Rational> = parse_polynomial("x*y", &["x", "y"]).unwrap();
        let t = ["t"];
        let g = compose(&f, &[parse_polynomial("t^2", &t).unwrap(), parse_polynomial("t + 1", &t).unwrap()]);
        assert_eq!(g, parse_polynomial("t^3 + t^2", &t).unwrap());
    }
}
