//! Seeded coefficient perturbations of family data and of certified maps, used
//! to confirm that the checks reject broken inputs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::certify::{certify_projective_iso, CertifyOptions};
use super::data::{DanielewskiData, IsoCertificate, PolynomialMap};
use super::lemma::run_pipeline;
use crate::poly::{Monomial, Polynomial};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum MutationTarget {
    P,
    Q,
    A,
    B,
    /// Component `i` of the homogeneous forward map.
    Forward(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mutation {
    pub target: MutationTarget,
    /// The monomial whose coefficient is shifted.
    pub term: String,
    pub delta: i64,
    #[serde(skip)]
    pub monomial: Monomial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MutationOutcome {
    pub mutation: Mutation,
    pub rejected: bool,
    /// First failing check, or the error that stopped the run.
    pub stage: String,
}

/// Candidate `(target, monomial)` pairs. Terms of `A` or `B` divisible by
/// `x0^m` are left out: they vanish modulo `x0^m` and every check is blind to
/// them, so perturbing one yields another valid isomorphism.
pub fn mutation_pool<C: Scalar>(
    data: &DanielewskiData<C>,
    cert: &IsoCertificate<C>,
) -> Vec<(MutationTarget, Monomial)> {
    let mut pool = Vec::new();
    for (t, p) in [
        (MutationTarget::P, &data.p),
        (MutationTarget::Q, &data.q),
        (MutationTarget::A, &data.a),
        (MutationTarget::B, &data.b),
    ] {
        for (m, _) in p.terms() {
            let invisible = matches!(t, MutationTarget::A | MutationTarget::B) && m.exp(0) >= data.m;
            if !invisible {
                pool.push((t, m.clone()));
            }
        }
    }
    for (i, c) in cert.forward.components.iter().enumerate() {
        pool.extend(c.terms().iter().map(|(m, _)| (MutationTarget::Forward(i), m.clone())));
    }
    pool
}

fn perturb<C: Scalar>(p: &Polynomial<C>, m: &Monomial, delta: i64) -> Polynomial<C> {
    p + &Polynomial::monomial(m.clone(), C::from_i64(delta))
}

/// Draws `count` distinct pool entries (cycling if the pool is smaller) with
/// `delta` uniform in `[-3, 3] \ {0}` and reruns the pipeline or the certifier.
pub fn run_mutations<C: Scalar>(
    data: &DanielewskiData<C>,
    cert: &IsoCertificate<C>,
    count: usize,
    seed: u64,
    options: &CertifyOptions,
) -> Vec<MutationOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = mutation_pool(data, cert);
    if pool.is_empty() {
        return Vec::new();
    }
    let mut order: Vec<usize> = Vec::with_capacity(count);
    while order.len() < count {
        let mut idx: Vec<usize> = (0..pool.len()).collect();
        idx.shuffle(&mut rng);
        order.extend(idx.into_iter().take(count - order.len()));
    }
    let mut out = Vec::with_capacity(count);
    for i in order {
        let (target, monomial) = pool[i].clone();
        let mut delta = rng.gen_range(-3..=2);
        if delta >= 0 {
            delta += 1;
        }
        let names = data.var_names();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let term = Polynomial::<C>::monomial(monomial.clone(), C::one()).display_with(&refs);
        let mutation = Mutation { target, term, delta, monomial: monomial.clone() };
        let (rejected, stage) = match target {
            MutationTarget::Forward(k) => {
                let mut comps = cert.forward.components.clone();
                comps[k] = perturb(&comps[k], &monomial, delta);
                let fwd = PolynomialMap { vars: cert.forward.vars.clone(), components: comps };
                match certify_projective_iso(&cert.f, &cert.g, &fwd, &cert.backward, options) {
                    Ok(_) => (false, "certified".to_string()),
                    Err(fail) => {
                        let first = fail.checks.iter().find(|c| !c.passed).map(|c| c.name.clone());
                        (true, first.unwrap_or_else(|| fail.reason.to_string()))
                    }
                }
            }
            _ => {
                let mut d = data.clone();
                let slot = match target {
                    MutationTarget::P => &mut d.p,
                    MutationTarget::Q => &mut d.q,
                    MutationTarget::A => &mut d.a,
                    _ => &mut d.b,
                };
                *slot = perturb(slot, &monomial, delta);
                let rep = run_pipeline(&d, options, None);
                if rep.passed() {
                    (false, "certified".to_string())
                } else {
                    (true, rep.failed_checks().into_iter().next().unwrap_or_default())
                }
            }
        };
        out.push(MutationOutcome { mutation, rejected, stage });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso_engine::families::{family_cone, family_line};
    use crate::scalar::Rational;

    #[test]
    fn mutations_are_rejected() {
        let data: DanielewskiData<Rational> = family_cone(4).unwrap();
        let rep = run_pipeline(&data, &CertifyOptions::default(), None);
        let cert = rep.certificate.expect("baseline certifies");
        let outcomes = run_mutations(&data, &cert, 12, 7, &CertifyOptions::default());
        assert_eq!(outcomes.len(), 12);
        for o in &outcomes {
            assert!(o.rejected, "{o:?}");
        }
        let again = run_mutations(&data, &cert, 12, 7, &CertifyOptions::default());
        assert_eq!(outcomes, again);
    }

    #[test]
    fn terms_divisible_by_x0_m_are_invisible() {
        // For d = 4 the D^2 term of A is divisible by x0^4: dropping it still certifies.
        let mut data: DanielewskiData<Rational> = family_line(4).unwrap();
        data.a = data.parse("z*(1 - x0^2*x1^2)").unwrap();
        let rep = run_pipeline(&data, &CertifyOptions::default(), None);
        assert!(rep.passed(), "{:?}", rep.failed_checks());
        let orig: DanielewskiData<Rational> = family_line(4).unwrap();
        let cert = run_pipeline(&orig, &CertifyOptions::default(), None).certificate.unwrap();
        let pool = mutation_pool(&orig, &cert);
        assert!(pool.iter().all(|(t, m)| !matches!(t, MutationTarget::A | MutationTarget::B) || m.exp(0) < 4));
    }
}
