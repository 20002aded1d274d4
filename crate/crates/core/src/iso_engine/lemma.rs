use std::collections::BTreeSet;

use serde::Serialize;

use super::certify::{certify_projective_iso, stabilize, CertifyOptions};
use super::data::{CheckResult, DanielewskiData, IsoCertificate, PolynomialMap};
use super::IsoError;
use crate::poly::{LaurentAtX0, Monomial, Polynomial};
use crate::scalar::Scalar;

/// Components in `S[x_0^-1][y, z, w]`.
pub type LaurentMap<C> = Vec<LaurentAtX0<C>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    pub checks: Vec<CheckResult>,
}

impl HypothesisReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn x0_power<C: Scalar>(nv: usize, k: u32) -> Polynomial<C> {
    Polynomial::monomial(Monomial::var(0, nv).pow(k), C::one())
}

fn only_s_and_z<C: Scalar>(data: &DanielewskiData<C>, p: &Polynomial<C>) -> bool {
    !p.involves(data.y()) && !p.involves(data.w())
}

fn unit_leading_in_z<C: Scalar>(data: &DanielewskiData<C>, p: &Polynomial<C>) -> bool {
    p.coefficients_in(data.z()).last().and_then(Polynomial::constant_value).is_some_and(|c| c.is_unit())
}

/// `z - A(B(z)), z - B(A(z)) in (x_0^m)` and
/// `Q(A(z) + x_0^m w) in (x_0^n, P(z))`, `P(B(z) + x_0^m w) in (x_0^n, Q(z))`.
pub fn check_lemma_iso_hypotheses<C: Scalar>(data: &DanielewskiData<C>) -> Result<HypothesisReport, IsoError> {
    if !unit_leading_in_z(data, &data.p) {
        return Err(IsoError::NonUnitLeading("P"));
    }
    if !unit_leading_in_z(data, &data.q) {
        return Err(IsoError::NonUnitLeading("Q"));
    }
    let nv = data.nvars();
    let z = Polynomial::var(data.z(), nv);
    let mut checks = Vec::new();
    let in_s_z = [&data.p, &data.q, &data.a, &data.b].iter().all(|p| only_s_and_z(data, p));
    checks.push(CheckResult::new(
        "data lies in S[z]",
        in_s_z,
        if in_s_z { "" } else { "P, Q, A or B involves y or w" },
    ));

    for (name, outer, inner) in
        [("H1: z - A(B(z)) in (x0^m)", &data.a, &data.b), ("H1: z - B(A(z)) in (x0^m)", &data.b, &data.a)]
    {
        let diff = &z - &outer.substitute(data.z(), inner);
        let residue = diff.truncate_mod_x0(data.m);
        let detail = if residue.is_zero() {
            format!("quotient by x0^m has {} terms", diff.num_terms())
        } else {
            format!("residue mod x0^m: {}", data.show(&residue))
        };
        checks.push(CheckResult::new(name, residue.is_zero(), detail));
    }

    let shift = x0_power::<C>(nv, data.m) * Polynomial::var(data.w(), nv);
    for (name, target, inner, modulus) in [
        ("H2: Q(A(z) + x0^m w) in (x0^n, P)", &data.q, &data.a, &data.p),
        ("H2: P(B(z) + x0^m w) in (x0^n, Q)", &data.p, &data.b, &data.q),
    ] {
        let num = target.substitute(data.z(), &(inner + &shift));
        let (quot, rem) = num.divide_monic_in_var(modulus, data.z())?;
        let residue = rem.truncate_mod_x0(data.n);
        let detail = if residue.is_zero() {
            format!("quotient {} terms, remainder {} terms", quot.num_terms(), rem.num_terms())
        } else {
            format!("remainder mod x0^n: {}", data.show(&residue))
        };
        checks.push(CheckResult::new(name, residue.is_zero(), detail));
    }
    Ok(HypothesisReport { checks })
}

/// The explicit inverse pair on `x_0^n y = P` and `x_0^n y = Q`, with
/// denominators kept as powers of `x_0`.
pub fn build_lemma_iso_maps<C: Scalar>(data: &DanielewskiData<C>) -> Result<(LaurentMap<C>, LaurentMap<C>), IsoError> {
    let report = check_lemma_iso_hypotheses(data)?;
    if !report.passed() {
        let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        return Err(IsoError::HypothesesFailed(failed.join("; ")));
    }
    Ok((one_side(data, &data.q, &data.a, &data.b), one_side(data, &data.p, &data.b, &data.a)))
}

fn one_side<C: Scalar>(
    data: &DanielewskiData<C>,
    target: &Polynomial<C>,
    inner: &Polynomial<C>,
    other: &Polynomial<C>,
) -> LaurentMap<C> {
    let nv = data.nvars();
    let lift = |p: Polynomial<C>, k: u32| LaurentAtX0::new(p, k, 0);
    let u = inner + &(x0_power::<C>(nv, data.m) * Polynomial::var(data.w(), nv));
    let mut out: LaurentMap<C> = (0..=data.s).map(|i| lift(Polynomial::var(i, nv), 0)).collect();
    out.push(lift(target.substitute(data.z(), &u), data.n));
    out.push(lift(u.clone(), 0));
    out.push(lift(&Polynomial::var(data.z(), nv) - &other.substitute(data.z(), &u), data.m));
    out
}

/// Composition of the two Laurent maps in both orders, compared with
/// `(x, P(z)/x0^n, z, w)` and `(x, Q(z)/x0^n, z, w)`.
pub fn verify_inverse_pair<C: Scalar>(
    data: &DanielewskiData<C>,
    forward: &LaurentMap<C>,
    backward: &LaurentMap<C>,
) -> Vec<CheckResult> {
    let nv = data.nvars();
    let y_free = forward.iter().chain(backward).all(|c| !c.numerator().involves(data.y()));
    let mut checks = vec![CheckResult::new(
        "components do not involve y",
        y_free,
        if y_free { "" } else { "a component involves y; composition in the localization is not valid" },
    )];
    if !y_free {
        return checks;
    }
    for (name, first, second, rel) in [
        ("backward after forward = (x, P(z)/x0^n, z, w)", forward, backward, &data.p),
        ("forward after backward = (x, Q(z)/x0^n, z, w)", backward, forward, &data.q),
    ] {
        let mut expected: LaurentMap<C> = (0..nv).map(|i| LaurentAtX0::from_poly(Polynomial::var(i, nv), 0)).collect();
        expected[data.y()] = LaurentAtX0::new(rel.clone(), data.n, 0);
        let mut residual_terms = 0usize;
        let mut bad = Vec::new();
        for (i, comp) in second.iter().enumerate() {
            match comp.compose(first) {
                Some(v) => {
                    let r = v.sub(&expected[i]);
                    if !r.is_zero() {
                        residual_terms += r.numerator().num_terms();
                        bad.push(i);
                    }
                }
                None => bad.push(i),
            }
        }
        let detail = if bad.is_empty() {
            String::new()
        } else {
            format!("components {bad:?} differ; residual has {residual_terms} terms")
        };
        checks.push(CheckResult::new(name, bad.is_empty(), detail));
    }
    checks
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomialized<C: Scalar> {
    pub map: PolynomialMap<C>,
    /// Degree residues modulo `d` of each component.
    pub residues: Vec<BTreeSet<u32>>,
    /// Recursion depth used per component.
    pub depths: Vec<u32>,
}

const MAX_DEPTH: u32 = 4;

fn polynomialize_one<C: Scalar>(
    num: &Polynomial<C>,
    k: u32,
    n: u32,
    rel: &Polynomial<C>,
    y: usize,
    z: usize,
    depth: u32,
) -> Result<(Polynomial<C>, u32), String> {
    if k == 0 {
        return Ok((num.clone(), depth));
    }
    if let Some(q) = num.divide_by_var_power(0, k) {
        return Ok((q, depth));
    }
    if depth == MAX_DEPTH {
        return Err(format!("depth bound {MAX_DEPTH} reached"));
    }
    let nv = num.nvars();
    let (h, r) = num.divide_monic_in_var(rel, z).map_err(|e| e.to_string())?;
    let r = r
        .divide_by_var_power(0, k)
        .ok_or_else(|| format!("remainder modulo the relation is not divisible by x0^{k}"))?;
    let yv = Polynomial::var(y, nv);
    if k <= n {
        Ok((&(&(&yv * &h) * &x0_power(nv, n - k)) + &r, depth + 1))
    } else {
        let (inner, dep) = polynomialize_one(&h, k - n, n, rel, y, z, depth + 1)?;
        Ok((&(&yv * &inner) + &r, dep))
    }
}

/// Rewrites each `N / x0^k` as a polynomial using `x0^n y = rel` (valid on the
/// hypersurface `x0^n y = rel`).
pub fn polynomialize_components<C: Scalar>(
    data: &DanielewskiData<C>,
    map: &LaurentMap<C>,
    rel: &Polynomial<C>,
) -> Result<Polynomialized<C>, IsoError> {
    let d = data.degree();
    let mut comps = Vec::new();
    let mut depths = Vec::new();
    for (i, c) in map.iter().enumerate() {
        let (p, dep) = polynomialize_one(c.numerator(), c.power(), data.n, rel, data.y(), data.z(), 0)
            .map_err(|reason| IsoError::Polynomialization { component: i, reason })?;
        comps.push(p);
        depths.push(dep);
    }
    let residues = comps.iter().map(|c| c.degree_residues_mod(d)).collect();
    Ok(Polynomialized { map: PolynomialMap::new(data.var_names(), comps)?, residues, depths })
}

/// Multiplies monomials by powers of `f` so that every component becomes
/// homogeneous of a common degree `ell`, the least admissible one.
pub fn homogenize_map<C: Scalar>(
    map: &PolynomialMap<C>,
    f: &Polynomial<C>,
) -> Result<(PolynomialMap<C>, u32), IsoError> {
    let d = f.total_degree().filter(|_| f.is_homogeneous()).ok_or(crate::poly::PolyError::NotHomogeneous)?;
    let mut residues = BTreeSet::new();
    let mut top = 0;
    for c in &map.components {
        if c.is_zero() {
            return Err(IsoError::Malformed("zero component".into()));
        }
        residues.extend(c.degree_residues_mod(d));
        top = top.max(c.total_degree().unwrap_or(0));
    }
    if residues.len() != 1 {
        return Err(IsoError::MixedResidues(residues.into_iter().collect()));
    }
    let e = *residues.iter().next().unwrap();
    let ell = top + (e + d - top % d) % d;
    let comps = map.components.iter().map(|c| c.homogenize_with(f, ell)).collect::<Result<_, _>>()?;
    Ok((PolynomialMap::new(map.vars.clone(), comps)?, ell))
}

/// Checks that a polynomialized component agrees with its Laurent original after
/// eliminating `y` through the relation.
fn agrees_on_hypersurface<C: Scalar>(
    data: &DanielewskiData<C>,
    poly: &Polynomial<C>,
    laurent: &LaurentAtX0<C>,
    rel: &Polynomial<C>,
) -> bool {
    let nv = data.nvars();
    let mut subs: Vec<LaurentAtX0<C>> = (0..nv).map(|i| LaurentAtX0::from_poly(Polynomial::var(i, nv), 0)).collect();
    subs[data.y()] = LaurentAtX0::new(rel.clone(), data.n, 0);
    crate::poly::compose_into(poly, &subs) == *laurent
}

#[derive(Debug, Clone)]
pub struct PipelineReport<C: Scalar> {
    pub checks: Vec<CheckResult>,
    pub forward_laurent: Option<LaurentMap<C>>,
    pub backward_laurent: Option<LaurentMap<C>>,
    pub forward_affine: Option<Polynomialized<C>>,
    pub backward_affine: Option<Polynomialized<C>>,
    pub certificate: Option<IsoCertificate<C>>,
    pub stabilized: Vec<IsoCertificate<C>>,
    pub failure: Option<String>,
    /// Set when certification stopped at a resource bound rather than a failed identity.
    pub aborted: bool,
}

impl<C: Scalar> PipelineReport<C> {
    fn new() -> Self {
        PipelineReport {
            checks: Vec::new(),
            forward_laurent: None,
            backward_laurent: None,
            forward_affine: None,
            backward_affine: None,
            certificate: None,
            stabilized: Vec::new(),
            failure: None,
            aborted: false,
        }
    }

    pub fn passed(&self) -> bool {
        self.failure.is_none() && self.checks.iter().all(|c| c.passed) && self.certificate.is_some()
    }

    pub fn failed_checks(&self) -> Vec<String> {
        let mut out: Vec<String> = self.checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
        if let Some(f) = &self.failure {
            if out.is_empty() {
                out.push(f.clone());
            }
        }
        out
    }

    fn fail(mut self, why: String) -> Self {
        self.failure = Some(why);
        self
    }
}

/// Full chain: hypotheses, inverse pair, polynomialization, homogenization,
/// certification, and optional stabilization up to projective dimension
/// `stabilize_to`.
pub fn run_pipeline<C: Scalar>(
    data: &DanielewskiData<C>,
    options: &CertifyOptions,
    stabilize_to: Option<usize>,
) -> PipelineReport<C> {
    let mut rep = PipelineReport::new();
    let (f, g) = match (data.f(), data.g()) {
        (Ok(f), Ok(g)) => (f, g),
        (Err(e), _) | (_, Err(e)) => {
            rep.checks.push(CheckResult::new("f and g are homogeneous of degree n+1", false, e.to_string()));
            return rep.fail(e.to_string());
        }
    };
    rep.checks.push(CheckResult::new("f and g are homogeneous of degree n+1", true, ""));
    let hyp = match check_lemma_iso_hypotheses(data) {
        Ok(h) => h,
        Err(e) => return rep.fail(e.to_string()),
    };
    let ok = hyp.passed();
    rep.checks.extend(hyp.checks);
    if !ok {
        return rep.fail("hypotheses failed".into());
    }
    let (fwd, bwd) = match build_lemma_iso_maps(data) {
        Ok(m) => m,
        Err(e) => return rep.fail(e.to_string()),
    };
    let inv = verify_inverse_pair(data, &fwd, &bwd);
    let ok = inv.iter().all(|c| c.passed);
    rep.checks.extend(inv);
    if !ok {
        return rep.fail("inverse pair check failed".into());
    }
    let d = data.degree();
    let mut homs = Vec::new();
    for (label, laurent, rel, h) in [("forward", &fwd, &data.p, &f), ("backward", &bwd, &data.q, &g)] {
        let poly = match polynomialize_components(data, laurent, rel) {
            Ok(p) => p,
            Err(e) => {
                rep.checks.push(CheckResult::new(format!("{label} components polynomialize"), false, e.to_string()));
                return rep.fail(e.to_string());
            }
        };
        let agrees = poly.map.components.iter().zip(laurent).all(|(p, l)| agrees_on_hypersurface(data, p, l, rel));
        rep.checks.push(CheckResult::new(
            format!("{label} components polynomialize"),
            agrees,
            format!("depths {:?}", poly.depths),
        ));
        let all: BTreeSet<u32> = poly.residues.iter().flatten().copied().collect();
        rep.checks.push(CheckResult::new(
            format!("{label} components have degree residue 1 mod d"),
            all == BTreeSet::from([1 % d]),
            format!("residues {all:?}"),
        ));
        match homogenize_map(&poly.map, h) {
            Ok((m, ell)) => {
                rep.checks.push(CheckResult::new(
                    format!("{label} map homogenizes"),
                    m.homogeneous_degree() == Some(ell),
                    format!("degree {ell}"),
                ));
                homs.push(m);
            }
            Err(e) => {
                rep.checks.push(CheckResult::new(format!("{label} map homogenizes"), false, e.to_string()));
                return rep.fail(e.to_string());
            }
        }
        if label == "forward" {
            rep.forward_affine = Some(poly);
        } else {
            rep.backward_affine = Some(poly);
        }
    }
    rep.forward_laurent = Some(fwd);
    rep.backward_laurent = Some(bwd);
    if rep.checks.iter().any(|c| !c.passed) {
        return rep.fail("construction checks failed".into());
    }
    let mut opts = options.clone();
    opts.assumptions.push("f and g irreducible".into());
    let cert = match certify_projective_iso(&f, &g, &homs[0], &homs[1], &opts) {
        Ok(c) => c,
        Err(fail) => {
            rep.checks.extend(fail.checks);
            rep.aborted = matches!(fail.reason, IsoError::ResourceBound(_));
            return rep.fail(fail.reason.to_string());
        }
    };
    rep.checks.extend(cert.checks.iter().cloned());
    if let Some(target) = stabilize_to {
        let mut current = cert.clone();
        for dim in current.forward.nvars()..=target {
            match stabilize(&current, dim, &opts) {
                Ok(c) => {
                    rep.checks.push(CheckResult::new(format!("stabilized certificate in dimension {dim}"), true, ""));
                    rep.stabilized.push(c.clone());
                    current = c;
                }
                Err(fail) => {
                    rep.aborted = matches!(fail.reason, IsoError::ResourceBound(_));
                    rep.checks.push(CheckResult::new(
                        format!("stabilized certificate in dimension {dim}"),
                        false,
                        fail.reason.to_string(),
                    ));
                    rep.certificate = Some(cert);
                    return rep.fail(fail.reason.to_string());
                }
            }
        }
    }
    rep.certificate = Some(cert);
    rep
}
