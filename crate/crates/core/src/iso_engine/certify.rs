//! Verification of the identities
//!   g(F) = mu f^t,  f(G) = mu' g^t',
//!   G_i(F) = lambda f^s x_i,  F_i(G) = lambda' g^s x_i,  d s = l l' - 1
//! for homogeneous maps `F` of degree `l` and `G` of degree `l'`.
//!
//! The direct route expands the compositions and strips factors by exact
//! division. The chart route works in `k[x_j^{+-1}, ...]` after eliminating a
//! variable `y` that occurs linearly in `f` and `g` with coefficient `c x_j^a`:
//! a homogeneous polynomial vanishing on `f = 1` is zero, so each identity can
//! be checked on the affine chart `f = 1` (resp. `g = 1`).

use num_integer::Integer;
use serde::Serialize;

use super::data::{CheckResult, IsoCertificate, PolynomialMap};
use super::IsoError;
use crate::poly::{compose, compose_into, LaurentAtX0, Monomial, Polynomial};
use crate::scalar::Scalar;

pub const DEFAULT_TERM_CEILING: u128 = 10_000_000;
/// Auto routing expands directly when the worst-case monomial count is below this.
const DIRECT_PREFERENCE: u128 = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Route {
    Auto,
    Direct,
    Chart,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifyOptions {
    pub route: Route,
    pub term_ceiling: u128,
    pub assumptions: Vec<String>,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { route: Route::Auto, term_ceiling: DEFAULT_TERM_CEILING, assumptions: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifyFailure {
    pub reason: IsoError,
    pub checks: Vec<CheckResult>,
}

fn monomial_count(degree: u32, nvars: usize) -> u128 {
    // C(degree + nvars - 1, nvars - 1)
    let k = nvars.saturating_sub(1) as u128;
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = acc.saturating_mul(degree as u128 + i) / i;
    }
    acc
}

struct Ctx {
    checks: Vec<CheckResult>,
}

impl Ctx {
    fn push(&mut self, name: &str, passed: bool, detail: impl Into<String>) -> bool {
        self.checks.push(CheckResult::new(name, passed, detail));
        passed
    }

    fn fail(self, reason: IsoError) -> CertifyFailure {
        CertifyFailure { reason, checks: self.checks }
    }
}

const CHECK_SHAPE: &str = "f, g homogeneous of equal degree; maps homogeneous";
const CHECK_EXPONENT: &str = "d s = l l' - 1";
const CHECK_GCD: &str = "gcd(l, d) = 1";
const CHECK_G_OF_F: &str = "g(forward) = mu f^t";
const CHECK_F_OF_G: &str = "f(backward) = mu' g^t'";
const CHECK_BF: &str = "backward_i(forward) = lambda f^s x_i";
const CHECK_FB: &str = "forward_i(backward) = lambda' g^s x_i";

pub fn certify_projective_iso<C: Scalar>(
    f: &Polynomial<C>,
    g: &Polynomial<C>,
    forward: &PolynomialMap<C>,
    backward: &PolynomialMap<C>,
    options: &CertifyOptions,
) -> Result<IsoCertificate<C>, CertifyFailure> {
    let mut ctx = Ctx { checks: Vec::new() };
    let nv = f.nvars();
    let d = f.total_degree().unwrap_or(0);
    let ell = forward.homogeneous_degree();
    let ell_prime = backward.homogeneous_degree();
    let shape_ok = f.is_homogeneous()
        && g.is_homogeneous()
        && d > 0
        && g.total_degree() == Some(d)
        && g.nvars() == nv
        && forward.nvars() == nv
        && backward.nvars() == nv
        && ell.is_some()
        && ell_prime.is_some();
    let detail = format!("d = {d}, l = {ell:?}, l' = {ell_prime:?}");
    if !ctx.push(CHECK_SHAPE, shape_ok, detail.clone()) {
        return Err(ctx.fail(IsoError::CheckFailed(format!("{CHECK_SHAPE}: {detail}"))));
    }
    let (ell, ell_prime) = (ell.unwrap(), ell_prime.unwrap());
    let prod = ell * ell_prime;
    let s_ok = (prod - 1) % d == 0;
    let s = (prod - 1) / d;
    ctx.push(CHECK_EXPONENT, s_ok, format!("l l' - 1 = {}, d = {d}", prod - 1));
    ctx.push(CHECK_GCD, ell.gcd(&d) == 1, format!("l = {ell}"));
    if !s_ok || ell.gcd(&d) != 1 {
        return Err(ctx.fail(IsoError::CheckFailed(CHECK_EXPONENT.into())));
    }

    let worst = monomial_count(prod, nv).max(monomial_count(d * ell.max(ell_prime), nv));
    let chart = find_chart(f, g);
    let route = match options.route {
        Route::Auto if worst <= DIRECT_PREFERENCE || chart.is_none() => Route::Direct,
        Route::Auto => Route::Chart,
        r => r,
    };
    let mut out = Partial::default();
    match route {
        Route::Direct => {
            if worst > options.term_ceiling {
                return Err(ctx.fail(IsoError::ResourceBound(format!(
                    "direct expansion may reach {worst} terms (ceiling {})",
                    options.term_ceiling
                ))));
            }
            direct(&mut ctx, &mut out, f, g, forward, backward, s)?;
        }
        Route::Chart => {
            let Some(chart) = chart else {
                return Err(ctx.fail(IsoError::Malformed(
                    "no variable occurs linearly in f and g with a monomial coefficient".into(),
                )));
            };
            chart_route(&mut ctx, &mut out, &chart, f, g, forward, backward)?;
        }
        Route::Auto => unreachable!(),
    }
    Ok(IsoCertificate {
        f: f.clone(),
        g: g.clone(),
        forward: forward.clone(),
        backward: backward.clone(),
        mu: out.mu.unwrap(),
        mu_prime: out.mu_prime.unwrap(),
        lambda: out.lambda.unwrap(),
        lambda_prime: out.lambda_prime.unwrap(),
        s_exponent: s,
        t_exponent: ell,
        t_prime_exponent: ell_prime,
        ell,
        ell_prime,
        route,
        checks: ctx.checks,
        assumptions: options.assumptions.clone(),
    })
}

struct Partial<C> {
    mu: Option<C>,
    mu_prime: Option<C>,
    lambda: Option<C>,
    lambda_prime: Option<C>,
}

impl<C> Default for Partial<C> {
    fn default() -> Self {
        Partial { mu: None, mu_prime: None, lambda: None, lambda_prime: None }
    }
}

/// Divides out `x_var` (if given) and then `h` as often as possible; succeeds when
/// the rest is a nonzero constant. Returns the constant and the power of `h`.
fn strip<C: Scalar>(mut p: Polynomial<C>, var: Option<usize>, h: &Polynomial<C>) -> Result<(C, u32), String> {
    if let Some(v) = var {
        p = p.divide_by_var_power(v, 1).ok_or("not divisible by the coordinate")?;
    }
    let mut k = 0;
    while !p.is_constant() {
        p = p.divide_exact(h).map_err(|_| format!("not divisible after {k} factors"))?;
        k += 1;
    }
    let c = p.constant_value().filter(|c| !c.is_zero()).ok_or("zero")?;
    Ok((c, k))
}

fn direct<C: Scalar>(
    ctx: &mut Ctx,
    out: &mut Partial<C>,
    f: &Polynomial<C>,
    g: &Polynomial<C>,
    forward: &PolynomialMap<C>,
    backward: &PolynomialMap<C>,
    s: u32,
) -> Result<(), CertifyFailure> {
    let failure = |ctx: &mut Ctx, name: &str, detail: String| {
        ctx.push(name, false, detail.clone());
        CertifyFailure {
            reason: IsoError::CheckFailed(format!("{name}: {detail}")),
            checks: std::mem::take(&mut ctx.checks),
        }
    };
    for (name, outer, inner, h, ell, slot) in [
        (CHECK_G_OF_F, g, forward, f, forward.homogeneous_degree().unwrap(), &mut out.mu),
        (CHECK_F_OF_G, f, backward, g, backward.homogeneous_degree().unwrap(), &mut out.mu_prime),
    ] {
        match strip(compose(outer, &inner.components), None, h) {
            Ok((c, t)) if t == ell => {
                ctx.push(name, true, format!("mu = {c}, t = {t}"));
                *slot = Some(c);
            }
            Ok((c, t)) => return Err(failure(ctx, name, format!("constant {c} with t = {t}, expected {ell}"))),
            Err(e) => return Err(failure(ctx, name, e)),
        }
    }
    for (name, outer, inner, h, slot) in
        [(CHECK_BF, backward, forward, f, &mut out.lambda), (CHECK_FB, forward, backward, g, &mut out.lambda_prime)]
    {
        let mut lambda: Option<C> = None;
        for (i, comp) in outer.components.iter().enumerate() {
            let r = strip(compose(comp, &inner.components), Some(i), h);
            match r {
                Ok((c, k)) if k == s && lambda.as_ref().is_none_or(|l| *l == c) => lambda = Some(c),
                Ok((c, k)) => {
                    return Err(failure(
                        ctx,
                        name,
                        format!("component {i}: constant {c}, power {k}, expected power {s}"),
                    ))
                }
                Err(e) => return Err(failure(ctx, name, format!("component {i}: {e}"))),
            }
        }
        let l = lambda.expect("nonempty map");
        ctx.push(name, true, format!("lambda = {l}, s = {s}"));
        *slot = Some(l);
    }
    Ok(())
}

/// `h = c x_j^a y + rest` with `rest` free of `y`.
#[derive(Debug, Clone)]
struct Elim<C: Scalar> {
    c: C,
    a: u32,
    rest: Polynomial<C>,
}

#[derive(Debug, Clone)]
struct Chart<C: Scalar> {
    y: usize,
    j: usize,
    f: Elim<C>,
    g: Elim<C>,
}

fn elim_data<C: Scalar>(h: &Polynomial<C>, y: usize) -> Option<(Elim<C>, Option<usize>)> {
    let coeffs = h.coefficients_in(y);
    if coeffs.len() != 2 {
        return None;
    }
    let [(m, c)] = coeffs[1].terms() else { return None };
    if !c.is_unit() {
        return None;
    }
    let support: Vec<usize> = (0..m.nvars()).filter(|&i| m.exp(i) > 0).collect();
    let (j, a) = match support.as_slice() {
        [] => (None, 0),
        [j] => (Some(*j), m.exp(*j)),
        _ => return None,
    };
    Some((Elim { c: c.clone(), a, rest: coeffs[0].clone() }, j))
}

fn find_chart<C: Scalar>(f: &Polynomial<C>, g: &Polynomial<C>) -> Option<Chart<C>> {
    let nv = f.nvars();
    for y in 0..nv {
        let (Some((ef, jf)), Some((eg, jg))) = (elim_data(f, y), elim_data(g, y)) else { continue };
        let j = match (jf, jg) {
            (Some(a), Some(b)) if a != b => continue,
            (Some(a), _) | (_, Some(a)) => a,
            (None, None) => (0..nv).find(|&i| i != y)?,
        };
        return Some(Chart { y, j, f: ef, g: eg });
    }
    None
}

/// Image of `p` in `k[x_j^{+-1}][vars without y]` under `y -> (mu - rest) / (c x_j^a)`.
fn kappa<C: Scalar>(p: &Polynomial<C>, y: usize, j: usize, e: &Elim<C>, mu: &C) -> LaurentAtX0<C> {
    let nv = p.nvars();
    let coeffs = p.coefficients_in(y);
    if coeffs.len() <= 1 {
        return LaurentAtX0::from_poly(p.clone(), j);
    }
    let cinv = e.c.try_inverse().expect("unit");
    let u = (&Polynomial::constant(nv, mu.clone()) - &e.rest).scale(&cinv);
    let k = coeffs.len() - 1;
    let xj = Monomial::var(j, nv);
    // Horner: sum_i coeffs[i] u^i x_j^{a (k - i)}
    let mut acc = coeffs[k].clone();
    for i in (0..k).rev() {
        acc = &(&acc * &u) + &coeffs[i].mul_monomial(&xj.pow(e.a * (k - i) as u32), &C::one());
    }
    LaurentAtX0::new(acc, e.a * k as u32, j)
}

fn chart_images<C: Scalar>(map: &PolynomialMap<C>, ch: &Chart<C>, e: &Elim<C>, mu: &C) -> Vec<LaurentAtX0<C>> {
    use rayon::prelude::*;
    map.components.par_iter().map(|c| kappa(c, ch.y, ch.j, e, mu)).collect()
}

#[allow(clippy::too_many_arguments)]
fn chart_direction<C: Scalar>(
    ctx: &mut Ctx,
    ch: &Chart<C>,
    src: &Elim<C>,
    dst: &Elim<C>,
    dst_poly: &Polynomial<C>,
    first: &PolynomialMap<C>,
    second: &PolynomialMap<C>,
    names: (&str, &str),
) -> Result<(C, C), String> {
    use rayon::prelude::*;
    let nv = dst_poly.nvars();
    let one = C::one();
    let theta = chart_images(first, ch, src, &one);
    let image = compose_into(dst_poly, &theta);
    let mu = match image.to_polynomial().and_then(|p| p.constant_value()).filter(|c| !c.is_zero()) {
        Some(mu) => mu,
        None => {
            let detail = format!("not a nonzero constant on the chart ({} terms)", image.numerator().num_terms());
            ctx.push(names.0, false, detail.clone());
            return Err(format!("{}: {detail}", names.0));
        }
    };
    ctx.push(names.0, true, format!("mu = {mu}"));
    if theta[ch.j].as_unit_monomial().is_none() {
        let detail = "image of the chart coordinate is not a unit monomial".to_string();
        ctx.push(names.1, false, detail.clone());
        return Err(format!("{}: {detail}", names.1));
    }
    let pulled = chart_images(second, ch, dst, &mu);
    let composed: Vec<Option<LaurentAtX0<C>>> = pulled.par_iter().map(|p| p.compose(&theta)).collect();
    let expected: Vec<LaurentAtX0<C>> = (0..nv)
        .map(|i| {
            if i == ch.y {
                kappa(&Polynomial::var(i, nv), ch.y, ch.j, src, &one)
            } else {
                LaurentAtX0::from_poly(Polynomial::var(i, nv), ch.j)
            }
        })
        .collect();
    let lambda = composed[ch.j].as_ref().and_then(|v| v.as_unit_monomial()).filter(|(_, e)| *e == 1).map(|(c, _)| c);
    let Some(lambda) = lambda else {
        let detail = "chart coordinate is not mapped to a multiple of itself".to_string();
        ctx.push(names.1, false, detail.clone());
        return Err(format!("{}: {detail}", names.1));
    };
    let bad: Vec<usize> = (0..nv).filter(|&i| composed[i].as_ref() != Some(&expected[i].scale(&lambda))).collect();
    if !bad.is_empty() {
        let detail = format!("components {bad:?} differ from lambda x_i");
        ctx.push(names.1, false, detail.clone());
        return Err(format!("{}: {detail}", names.1));
    }
    ctx.push(names.1, true, format!("lambda = {lambda}"));
    Ok((mu, lambda))
}

fn chart_route<C: Scalar>(
    ctx: &mut Ctx,
    out: &mut Partial<C>,
    ch: &Chart<C>,
    f: &Polynomial<C>,
    g: &Polynomial<C>,
    forward: &PolynomialMap<C>,
    backward: &PolynomialMap<C>,
) -> Result<(), CertifyFailure> {
    let to_failure = |ctx: &mut Ctx, e: String| CertifyFailure {
        reason: IsoError::CheckFailed(e),
        checks: std::mem::take(&mut ctx.checks),
    };
    match chart_direction(ctx, ch, &ch.f, &ch.g, g, forward, backward, (CHECK_G_OF_F, CHECK_BF)) {
        Ok((mu, lambda)) => {
            out.mu = Some(mu);
            out.lambda = Some(lambda);
        }
        Err(e) => return Err(to_failure(ctx, e)),
    }
    match chart_direction(ctx, ch, &ch.g, &ch.f, f, backward, forward, (CHECK_F_OF_G, CHECK_FB)) {
        Ok((mu, lambda)) => {
            out.mu_prime = Some(mu);
            out.lambda_prime = Some(lambda);
        }
        Err(e) => return Err(to_failure(ctx, e)),
    }
    Ok(())
}

/// Appends `x_j f^r` (resp. `x_j g^r'`) for new coordinates up to projective
/// dimension `target` and certifies again.
pub fn stabilize<C: Scalar>(
    cert: &IsoCertificate<C>,
    target: usize,
    options: &CertifyOptions,
) -> Result<IsoCertificate<C>, CertifyFailure> {
    let d = cert.degree();
    let nv = cert.forward.nvars();
    if cert.ell % d != 1 % d || cert.ell_prime % d != 1 % d {
        return Err(CertifyFailure {
            reason: IsoError::Malformed(format!("l = {} and l' = {} must be 1 mod {d}", cert.ell, cert.ell_prime)),
            checks: Vec::new(),
        });
    }
    if target + 1 <= nv {
        return Err(CertifyFailure {
            reason: IsoError::OutOfRange(format!("target dimension {target} is not above {}", nv - 1)),
            checks: Vec::new(),
        });
    }
    let new_nv = target + 1;
    let mut vars = cert.forward.vars.clone();
    for j in nv..new_nv {
        let mut name = format!("x{j}");
        while vars.contains(&name) {
            name.push('\'');
        }
        vars.push(name);
    }
    let f = cert.f.extend_vars(new_nv);
    let g = cert.g.extend_vars(new_nv);
    let extend = |map: &PolynomialMap<C>, h: &Polynomial<C>, ell: u32| {
        let hr = h.pow((ell - 1) / d);
        let mut comps: Vec<Polynomial<C>> = map.components.iter().map(|c| c.extend_vars(new_nv)).collect();
        for j in nv..new_nv {
            comps.push(&Polynomial::var(j, new_nv) * &hr);
        }
        PolynomialMap { vars: vars.clone(), components: comps }
    };
    let forward = extend(&cert.forward, &f, cert.ell);
    let backward = extend(&cert.backward, &g, cert.ell_prime);
    certify_projective_iso(&f, &g, &forward, &backward, options)
}
