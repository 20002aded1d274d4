//! Hypersurfaces, brute-force point counts over finite fields, and multiplicities.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::finite_field::{FieldElement, FieldError, FieldSpec};
use crate::poly::{compose, Monomial, Polynomial};
use crate::scalar::{Rational, Scalar};

pub const DEFAULT_POINT_BOUND: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VarietyError {
    #[error("the defining polynomial is zero")]
    ZeroPolynomial,
    #[error("a projective hypersurface needs a homogeneous polynomial")]
    NotHomogeneous,
    #[error("search space of {needed} points exceeds the bound {bound}")]
    BoundExceeded { needed: u128, bound: u64 },
    #[error("coefficient {0} has no image in the field")]
    NotEmbeddable(String),
    #[error("the point does not lie on the hypersurface")]
    PointNotOnHypersurface,
    #[error("the zero vector is not a projective point")]
    ZeroPoint,
    #[error("expected {expected} coordinates, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("the line has no coordinate that is a nonzero constant")]
    NoConstantChart,
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Ambient {
    Affine,
    Projective,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypersurface<C: Scalar> {
    defining: Polynomial<C>,
    ambient: Ambient,
    degree: u32,
}

impl<C: Scalar> Hypersurface<C> {
    pub fn new(defining: Polynomial<C>, ambient: Ambient) -> Result<Self, VarietyError> {
        let degree = defining.total_degree().ok_or(VarietyError::ZeroPolynomial)?;
        if ambient == Ambient::Projective && !defining.is_homogeneous() {
            return Err(VarietyError::NotHomogeneous);
        }
        Ok(Hypersurface { defining, ambient, degree })
    }

    pub fn affine(defining: Polynomial<C>) -> Result<Self, VarietyError> {
        Self::new(defining, Ambient::Affine)
    }

    pub fn projective(defining: Polynomial<C>) -> Result<Self, VarietyError> {
        Self::new(defining, Ambient::Projective)
    }

    pub fn defining(&self) -> &Polynomial<C> {
        &self.defining
    }
    pub fn ambient(&self) -> Ambient {
        self.ambient
    }
    pub fn degree(&self) -> u32 {
        self.degree
    }
    pub fn nvars(&self) -> usize {
        self.defining.nvars()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PointCount {
    pub total: u64,
    pub regular: u64,
    pub singular: u64,
    pub q: u64,
}

impl PointCount {
    fn merge(self, other: PointCount) -> PointCount {
        PointCount {
            total: self.total + other.total,
            regular: self.regular + other.regular,
            singular: self.singular + other.singular,
            q: self.q,
        }
    }
}

/// A polynomial with coefficients embedded in a finite field, ready for fast evaluation.
#[derive(Debug, Clone)]
pub struct FieldPoly {
    nvars: usize,
    terms: Vec<(FieldElement, Vec<(usize, u32)>)>,
}

impl FieldPoly {
    pub fn new<C: Scalar>(p: &Polynomial<C>, field: &FieldSpec) -> Result<Self, VarietyError> {
        let mut terms = Vec::with_capacity(p.num_terms());
        for (m, c) in p.terms() {
            let r = c.reduce_mod(field.p()).ok_or_else(|| VarietyError::NotEmbeddable(c.to_string()))?;
            if r == 0 {
                continue;
            }
            let exps = m.exps().iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i, e)).collect();
            terms.push((field.from_i64(r as i64), exps));
        }
        Ok(FieldPoly { nvars: p.nvars(), terms })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn eval(&self, field: &FieldSpec, point: &[FieldElement]) -> FieldElement {
        let mut acc = field.zero();
        for (c, exps) in &self.terms {
            let mut v = *c;
            for &(i, e) in exps {
                v = field.mul(v, field.pow(point[i], e as u64));
                if v.is_zero() {
                    break;
                }
            }
            acc = field.add(acc, v);
        }
        acc
    }
}

struct Compiled {
    f: FieldPoly,
    partials: Vec<FieldPoly>,
}

impl Compiled {
    fn new<C: Scalar>(h: &Hypersurface<C>, field: &FieldSpec) -> Result<Self, VarietyError> {
        let f = FieldPoly::new(&h.defining, field)?;
        let partials =
            (0..h.nvars()).map(|i| FieldPoly::new(&h.defining.derivative(i), field)).collect::<Result<_, _>>()?;
        Ok(Compiled { f, partials })
    }

    fn classify(&self, field: &FieldSpec, pt: &[FieldElement]) -> Option<bool> {
        if !self.f.eval(field, pt).is_zero() {
            return None;
        }
        Some(self.partials.iter().all(|d| d.eval(field, pt).is_zero()))
    }
}

fn search_space(ambient: Ambient, nvars: usize, q: u64) -> u128 {
    let n = nvars as u32;
    match ambient {
        Ambient::Affine => (q as u128).pow(n),
        Ambient::Projective => (0..n).map(|i| (q as u128).pow(i)).sum(),
    }
}

/// Calls `visit` on every point of the ambient space, in parallel over chunks.
/// Projective points use the representative whose first nonzero coordinate is 1.
fn fold_points<T, F, G>(ambient: Ambient, nvars: usize, field: &FieldSpec, init: T, visit: F, combine: G) -> T
where
    T: Send + Sync + Clone,
    F: Fn(&mut T, &[FieldElement]) + Sync + Send,
    G: Fn(T, T) -> T + Sync + Send,
{
    let q = field.q();
    // Blocks: (index of the leading 1 or None for affine, number of free coordinates).
    let blocks: Vec<(Option<usize>, usize)> = match ambient {
        Ambient::Affine => vec![(None, nvars)],
        Ambient::Projective => (0..nvars).map(|i| (Some(i), nvars - i - 1)).collect(),
    };
    let mut tasks = Vec::new();
    for (lead, free) in blocks {
        // Split on up to two free coordinates to produce parallel tasks.
        let split = free.min(2);
        let chunks = q.pow(split as u32);
        for c in 0..chunks {
            tasks.push((lead, free, split, c));
        }
    }
    tasks
        .into_par_iter()
        .map(|(lead, free, split, chunk)| {
            let mut acc = init.clone();
            let mut pt = vec![field.zero(); nvars];
            let start = match lead {
                Some(i) => {
                    pt[i] = field.one();
                    i + 1
                }
                None => 0,
            };
            let mut c = chunk;
            for j in 0..split {
                pt[start + j] = field.element((c % q) as u32);
                c /= q;
            }
            let inner = start + split;
            let inner_len = free - split;
            loop {
                visit(&mut acc, &pt);
                // odometer on pt[inner..inner+inner_len]
                let mut k = 0;
                loop {
                    if k == inner_len {
                        return acc;
                    }
                    let idx = inner + k;
                    let next = pt[idx].rep() + 1;
                    if (next as u64) < q {
                        pt[idx] = field.element(next);
                        break;
                    }
                    pt[idx] = field.zero();
                    k += 1;
                }
            }
        })
        .reduce(|| init.clone(), &combine)
}

fn check_bound(ambient: Ambient, nvars: usize, q: u64, bound: u64) -> Result<(), VarietyError> {
    let needed = search_space(ambient, nvars, q);
    if needed > bound as u128 {
        return Err(VarietyError::BoundExceeded { needed, bound });
    }
    Ok(())
}

pub fn count_points<C: Scalar>(h: &Hypersurface<C>, field: &FieldSpec) -> Result<PointCount, VarietyError> {
    count_points_bounded(h, field, DEFAULT_POINT_BOUND)
}

pub fn count_points_bounded<C: Scalar>(
    h: &Hypersurface<C>,
    field: &FieldSpec,
    bound: u64,
) -> Result<PointCount, VarietyError> {
    count_points_where(h, field, bound, |_| true)
}

/// Count restricted to points satisfying `keep`.
pub fn count_points_where<C: Scalar, F>(
    h: &Hypersurface<C>,
    field: &FieldSpec,
    bound: u64,
    keep: F,
) -> Result<PointCount, VarietyError>
where
    F: Fn(&[FieldElement]) -> bool + Sync + Send,
{
    check_bound(h.ambient, h.nvars(), field.q(), bound)?;
    let compiled = Compiled::new(h, field)?;
    let zero = PointCount { total: 0, regular: 0, singular: 0, q: field.q() };
    Ok(fold_points(
        h.ambient,
        h.nvars(),
        field,
        zero,
        |acc, pt| {
            if let Some(singular) = compiled.classify(field, pt) {
                if keep(pt) {
                    acc.total += 1;
                    if singular {
                        acc.singular += 1;
                    } else {
                        acc.regular += 1;
                    }
                }
            }
        },
        PointCount::merge,
    ))
}

/// Counts on `{s = 0}` and on `{s != 0}`.
pub fn count_split<C: Scalar>(
    h: &Hypersurface<C>,
    s: &Polynomial<C>,
    field: &FieldSpec,
    bound: u64,
) -> Result<(PointCount, PointCount), VarietyError> {
    let sf = FieldPoly::new(s, field)?;
    let on = count_points_where(h, field, bound, |pt| sf.eval(field, pt).is_zero())?;
    let off = count_points_where(h, field, bound, |pt| !sf.eval(field, pt).is_zero())?;
    Ok((on, off))
}

/// All points of the hypersurface (normalized for projective ones).
pub fn enumerate_points<C: Scalar>(
    h: &Hypersurface<C>,
    field: &FieldSpec,
    bound: u64,
) -> Result<Vec<Vec<FieldElement>>, VarietyError> {
    check_bound(h.ambient, h.nvars(), field.q(), bound)?;
    let f = FieldPoly::new(&h.defining, field)?;
    let mut pts = fold_points(
        h.ambient,
        h.nvars(),
        field,
        Vec::new(),
        |acc: &mut Vec<Vec<FieldElement>>, pt| {
            if f.eval(field, pt).is_zero() {
                acc.push(pt.to_vec());
            }
        },
        |mut a, b| {
            a.extend(b);
            a
        },
    );
    pts.sort();
    Ok(pts)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiplicityReport<P> {
    pub point: Vec<P>,
    pub multiplicity: u32,
    pub is_max_possible: bool,
}

/// Multiplicity over an exact field by translating the point to the origin of an
/// affine chart and taking the lowest degree of the expansion.
pub fn multiplicity_at<C: Scalar>(h: &Hypersurface<C>, point: &[C]) -> Result<MultiplicityReport<C>, VarietyError> {
    let n = h.nvars();
    if point.len() != n {
        return Err(VarietyError::WrongLength { expected: n, got: point.len() });
    }
    let (poly, shift) = match h.ambient {
        Ambient::Affine => (h.defining.clone(), point.to_vec()),
        Ambient::Projective => {
            let j = point.iter().position(|c| !c.is_zero()).ok_or(VarietyError::ZeroPoint)?;
            let inv = point[j].try_inverse().ok_or(VarietyError::ZeroPoint)?;
            let normalized: Vec<C> = point.iter().map(|c| c.clone() * &inv).collect();
            let dehom = h.defining.substitute_constant(j, &C::one());
            let mut shift = normalized;
            shift[j] = C::zero();
            (dehom, shift)
        }
    };
    let local = poly.taylor_shift(&shift);
    let mult = local.min_degree().unwrap_or(u32::MAX);
    if mult == 0 {
        return Err(VarietyError::PointNotOnHypersurface);
    }
    Ok(MultiplicityReport { point: point.to_vec(), multiplicity: mult, is_max_possible: mult == h.degree })
}

/// `C(n, k) mod p` by Lucas' theorem.
fn binom_mod(mut n: u64, mut k: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while n > 0 || k > 0 {
        let (nd, kd) = (n % p, k % p);
        if kd > nd {
            return 0;
        }
        let (mut num, mut den) = (1u128, 1u128);
        for i in 0..kd {
            num = num * ((nd - i) as u128) % p as u128;
            den = den * ((i + 1) as u128) % p as u128;
        }
        let inv = crate::scalar::invmod(den as u64, p).expect("p prime");
        acc = (acc as u128 * num % p as u128 * inv as u128 % p as u128) as u64;
        n /= p;
        k /= p;
    }
    acc
}

/// Multiplicity at a finite-field point via Hasse derivatives: the least `|a|` with
/// `D^a f (point) != 0`.
pub fn multiplicity_at_fq<C: Scalar>(
    h: &Hypersurface<C>,
    field: &FieldSpec,
    point: &[FieldElement],
) -> Result<MultiplicityReport<FieldElement>, VarietyError> {
    let n = h.nvars();
    if point.len() != n {
        return Err(VarietyError::WrongLength { expected: n, got: point.len() });
    }
    let (terms, at): (Vec<(FieldElement, Vec<u32>)>, Vec<FieldElement>) = {
        let compiled = FieldPoly::new(&h.defining, field)?;
        let mut terms: Vec<(FieldElement, Vec<u32>)> = compiled
            .terms
            .iter()
            .map(|(c, exps)| {
                let mut v = vec![0u32; n];
                for &(i, e) in exps {
                    v[i] = e;
                }
                (*c, v)
            })
            .collect();
        let mut at = point.to_vec();
        if h.ambient == Ambient::Projective {
            let j = point.iter().position(|c| !c.is_zero()).ok_or(VarietyError::ZeroPoint)?;
            let inv = field.inv(point[j])?;
            at = point.iter().map(|&c| field.mul(c, inv)).collect();
            for t in terms.iter_mut() {
                t.1[j] = 0;
            }
            at[j] = field.zero();
        }
        (terms, at)
    };
    let p = field.p();
    let d = h.degree;
    let eval_hasse = |alpha: &[u32]| -> FieldElement {
        let mut acc = field.zero();
        for (c, beta) in &terms {
            if beta.iter().zip(alpha).any(|(b, a)| b < a) {
                continue;
            }
            let mut coef = 1u64;
            for (b, a) in beta.iter().zip(alpha) {
                coef = coef * binom_mod(*b as u64, *a as u64, p) % p;
                if coef == 0 {
                    break;
                }
            }
            if coef == 0 {
                continue;
            }
            let mut v = field.mul(*c, field.from_i64(coef as i64));
            for ((b, a), x) in beta.iter().zip(alpha).zip(&at) {
                v = field.mul(v, field.pow(*x, (b - a) as u64));
            }
            acc = field.add(acc, v);
        }
        acc
    };
    if !eval_hasse(&vec![0; n]).is_zero() {
        return Err(VarietyError::PointNotOnHypersurface);
    }
    for r in 1..=d {
        let mut found = false;
        for_each_composition(n, r, &mut |alpha| {
            if !found && !eval_hasse(alpha).is_zero() {
                found = true;
            }
        });
        if found {
            return Ok(MultiplicityReport { point: point.to_vec(), multiplicity: r, is_max_possible: r == d });
        }
    }
    // A nonzero form of degree d cannot vanish to order > d; reaching this means the
    // dehomogenized polynomial is identically zero in the chart.
    Ok(MultiplicityReport { point: point.to_vec(), multiplicity: d, is_max_possible: true })
}

/// Visits all exponent vectors of length `n` with total `r`.
fn for_each_composition(n: usize, r: u32, f: &mut dyn FnMut(&[u32])) {
    fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, f: &mut dyn FnMut(&[u32])) {
        if pos + 1 == cur.len() {
            cur[pos] = left;
            f(cur);
            return;
        }
        for e in 0..=left {
            cur[pos] = e;
            rec(pos + 1, left - e, cur, f);
        }
        cur[pos] = 0;
    }
    if n == 0 {
        return;
    }
    let mut cur = vec![0u32; n];
    rec(0, r, &mut cur, f);
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxMultiplicityLocus {
    pub points: Vec<Vec<FieldElement>>,
    pub linear: bool,
    /// A pair of points whose joining line leaves the locus, if any.
    pub violation: Option<(Vec<FieldElement>, Vec<FieldElement>)>,
}

fn normalize(field: &FieldSpec, pt: &[FieldElement]) -> Option<Vec<FieldElement>> {
    let j = pt.iter().position(|c| !c.is_zero())?;
    let inv = field.inv(pt[j]).ok()?;
    Some(pt.iter().map(|&c| field.mul(c, inv)).collect())
}

/// All `F_q`-points of multiplicity `d` on a projective hypersurface, together
/// with the check that every line through two of them stays inside the set.
pub fn max_multiplicity_locus<C: Scalar>(
    h: &Hypersurface<C>,
    field: &FieldSpec,
    bound: u64,
) -> Result<MaxMultiplicityLocus, VarietyError> {
    if h.ambient != Ambient::Projective {
        return Err(VarietyError::NotHomogeneous);
    }
    let pts = enumerate_points(h, field, bound)?;
    let mut locus = Vec::new();
    for pt in pts {
        if multiplicity_at_fq(h, field, &pt)?.is_max_possible {
            locus.push(pt);
        }
    }
    let set: HashSet<Vec<FieldElement>> = locus.iter().cloned().collect();
    let mut violation = None;
    'outer: for (i, a) in locus.iter().enumerate() {
        for b in &locus[i + 1..] {
            for lam in field.elements() {
                let comb: Vec<FieldElement> = a.iter().zip(b).map(|(&x, &y)| field.add(field.mul(lam, x), y)).collect();
                let Some(norm) = normalize(field, &comb) else { continue };
                if !set.contains(&norm) {
                    violation = Some((a.clone(), b.clone()));
                    break 'outer;
                }
            }
        }
    }
    Ok(MaxMultiplicityLocus { linear: violation.is_none(), points: locus, violation })
}

/// A projective line (or curve) `t -> [L_0(t) : ... : L_n(t)]`, entries univariate in `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamLine<C: Scalar> {
    pub entries: Vec<Polynomial<C>>,
}

impl<C: Scalar> ParamLine<C> {
    /// `t -> base + t * direction`.
    pub fn through(base: &[C], direction: &[C]) -> Self {
        let entries = base
            .iter()
            .zip(direction)
            .map(|(b, d)| &Polynomial::constant(1, b.clone()) + &Polynomial::var(0, 1).scale(d))
            .collect();
        ParamLine { entries }
    }

    fn max_degree(&self) -> u32 {
        self.entries.iter().filter_map(|e| e.total_degree()).max().unwrap_or(0)
    }

    /// Limit point as `t -> infinity`.
    pub fn point_at_infinity(&self) -> Option<Vec<C>> {
        let d = self.max_degree();
        if d == 0 {
            return None;
        }
        Some(self.entries.iter().map(|e| e.coefficient(&Monomial::new(vec![d]))).collect())
    }

    pub fn at(&self, t: &C) -> Vec<C> {
        self.entries.iter().map(|e| e.eval(std::slice::from_ref(t))).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineScan {
    pub generic_multiplicity: u32,
    /// `(t, multiplicity)` for parameter values with multiplicity above the generic one.
    pub exceptional: Vec<(String, u32)>,
    pub at_infinity: Option<u32>,
    /// Set when common roots outside the scanned set may exist.
    pub unresolved_roots: bool,
}

impl LineScan {
    pub fn max_multiplicity(&self) -> u32 {
        self.exceptional
            .iter()
            .map(|e| e.1)
            .chain(self.at_infinity)
            .chain(std::iter::once(self.generic_multiplicity))
            .max()
            .unwrap_or(0)
    }
}

fn multiplicity_or_zero<C: Scalar>(h: &Hypersurface<C>, pt: &[C]) -> Result<u32, VarietyError> {
    match multiplicity_at(h, pt) {
        Ok(r) => Ok(r.multiplicity),
        Err(VarietyError::PointNotOnHypersurface) => Ok(0),
        Err(e) => Err(e),
    }
}

/// Generic and exceptional multiplicities of a projective hypersurface along a
/// parametrized line over `Q`. Exceptional parameters are searched among the
/// rational roots of the gcd of the relevant coefficient polynomials.
pub fn multiplicity_along_line(
    h: &Hypersurface<Rational>,
    line: &ParamLine<Rational>,
) -> Result<LineScan, VarietyError> {
    let n = h.nvars();
    if line.entries.len() != n {
        return Err(VarietyError::WrongLength { expected: n, got: line.entries.len() });
    }
    let j = line.entries.iter().position(|e| e.is_constant() && !e.is_zero()).ok_or(VarietyError::NoConstantChart)?;
    let c = line.entries[j].constant_value().unwrap();
    let cinv = c.recip();
    // Variables: X_0..X_{n-1} (X_j unused), then t at index n.
    let nv = n + 1;
    let subs: Vec<Polynomial<Rational>> = (0..n)
        .map(|i| {
            if i == j {
                Polynomial::one(nv)
            } else {
                let lifted = line.entries[i].remap_vars(&[n], nv).scale(&cinv);
                &Polynomial::var(i, nv) + &lifted
            }
        })
        .collect();
    let expanded = compose(h.defining(), &subs);
    // Group by degree in the X variables.
    let mut by_x: std::collections::BTreeMap<(u32, Vec<u32>), Vec<(u32, Rational)>> = Default::default();
    for (m, coef) in expanded.terms() {
        let xs: Vec<u32> = m.exps()[..n].to_vec();
        let deg: u32 = xs.iter().sum();
        by_x.entry((deg, xs)).or_default().push((m.exp(n), coef.clone()));
    }
    let generic = by_x.keys().map(|k| k.0).min().unwrap_or(u32::MAX);
    let mut exceptional = Vec::new();
    let mut unresolved = false;
    if generic != u32::MAX {
        let coeff_polys: Vec<Vec<Rational>> = by_x
            .iter()
            .filter(|(k, _)| k.0 == generic)
            .map(|(_, ts)| {
                let deg = ts.iter().map(|t| t.0).max().unwrap_or(0) as usize;
                let mut v = vec![Rational::zero(); deg + 1];
                for (e, c) in ts {
                    v[*e as usize] = c.clone();
                }
                v
            })
            .collect();
        let mut g = coeff_polys[0].clone();
        for p in &coeff_polys[1..] {
            g = upoly_gcd(&g, p);
        }
        let (roots, resolved) = rational_roots(&g);
        unresolved = !resolved;
        for t in roots {
            let pt = line.at(&t);
            let mult = multiplicity_or_zero(h, &pt)?;
            if mult > generic {
                exceptional.push((t.to_string(), mult));
            }
        }
    }
    let at_infinity = match line.point_at_infinity() {
        Some(pt) if pt.iter().any(|c| !c.is_zero()) => Some(multiplicity_or_zero(h, &pt)?),
        _ => None,
    };
    Ok(LineScan {
        generic_multiplicity: if generic == u32::MAX { h.degree } else { generic },
        exceptional,
        at_infinity,
        unresolved_roots: unresolved,
    })
}

/// Pointwise scan of a parametrized line over a finite field: every `t` in `F_q`
/// and the point at infinity.
pub fn multiplicity_along_line_fq<C: Scalar>(
    h: &Hypersurface<C>,
    line: &ParamLine<C>,
    field: &FieldSpec,
) -> Result<LineScan, VarietyError> {
    let n = h.nvars();
    let entries: Vec<FieldPoly> = line.entries.iter().map(|e| FieldPoly::new(e, field)).collect::<Result<_, _>>()?;
    let mut mults = Vec::new();
    for t in field.elements() {
        let pt: Vec<FieldElement> = entries.iter().map(|e| e.eval(field, &[t])).collect();
        if pt.iter().all(|c| c.is_zero()) {
            continue;
        }
        let m = match multiplicity_at_fq(h, field, &pt) {
            Ok(r) => r.multiplicity,
            Err(VarietyError::PointNotOnHypersurface) => 0,
            Err(e) => return Err(e),
        };
        mults.push((field.format(t), m));
    }
    let generic = mults.iter().map(|m| m.1).min().unwrap_or(0);
    let at_infinity = match line.point_at_infinity() {
        Some(pt) => {
            let fp: Vec<FieldElement> = pt
                .iter()
                .map(|c| c.reduce_mod(field.p()).map(|r| field.from_i64(r as i64)))
                .collect::<Option<_>>()
                .ok_or_else(|| VarietyError::NotEmbeddable("line coefficient".into()))?;
            if fp.iter().all(|c| c.is_zero()) || fp.len() != n {
                None
            } else {
                Some(match multiplicity_at_fq(h, field, &fp) {
                    Ok(r) => r.multiplicity,
                    Err(VarietyError::PointNotOnHypersurface) => 0,
                    Err(e) => return Err(e),
                })
            }
        }
        None => None,
    };
    Ok(LineScan {
        generic_multiplicity: generic,
        exceptional: mults.into_iter().filter(|m| m.1 > generic).collect(),
        at_infinity,
        unresolved_roots: false,
    })
}

// Dense univariate polynomials over Q, lowest degree first.

fn utrim(mut a: Vec<Rational>) -> Vec<Rational> {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn upoly_rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = utrim(a.to_vec());
    let b = utrim(b.to_vec());
    let db = b.len() - 1;
    let lead = b[db].clone();
    while r.len() > db && !r.is_empty() {
        let top = r.len() - 1;
        let c = &r[top] / &lead;
        for (i, bi) in b.iter().enumerate() {
            let idx = top - db + i;
            r[idx] = &r[idx] - &(&c * bi);
        }
        r = utrim(r);
    }
    r
}

fn upoly_gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let (mut a, mut b) = (utrim(a.to_vec()), utrim(b.to_vec()));
    while !b.is_empty() {
        let r = upoly_rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs();
    let v = n.to_u64()?;
    if v > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= v {
        if v % d == 0 {
            out.push(BigInt::from(d));
            if d * d != v {
                out.push(BigInt::from(v / d));
            }
        }
        d += 1;
    }
    Some(out)
}

/// Distinct rational roots of a univariate polynomial over `Q`, and whether the
/// search was exhaustive (all roots are rational, counted with multiplicity).
pub fn rational_roots(p: &[Rational]) -> (Vec<Rational>, bool) {
    let mut p = utrim(p.to_vec());
    if p.is_empty() {
        return (Vec::new(), false);
    }
    let total_degree = p.len() - 1;
    let mut roots = Vec::new();
    let mut found = 0usize;
    while p.len() > 1 && p[0].is_zero() {
        p.remove(0);
        found += 1;
        if !roots.contains(&Rational::zero()) {
            roots.push(Rational::zero());
        }
    }
    // Clear denominators.
    let lcm = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let (Some(num_divs), Some(den_divs)) = (divisors(&ints[0]), divisors(&ints[ints.len() - 1])) else {
        return (roots, false);
    };
    let mut cur: Vec<Rational> = ints.iter().map(|c| BigRational::from_integer(c.clone())).collect();
    for a in &num_divs {
        for b in &den_divs {
            for sign in [1i64, -1] {
                let cand = BigRational::new(a * sign, b.clone());
                loop {
                    if cur.len() < 2 {
                        break;
                    }
                    let val = cur.iter().rev().fold(Rational::zero(), |acc, c| acc * &cand + c);
                    if !val.is_zero() {
                        break;
                    }
                    // Deflate by (t - cand).
                    let deg = cur.len() - 1;
                    let mut quo = vec![Rational::zero(); deg];
                    let mut carry = Rational::zero();
                    for i in (0..deg).rev() {
                        carry = &cur[i + 1] + &(&carry * &cand);
                        quo[i] = carry.clone();
                    }
                    cur = quo;
                    found += 1;
                    if !roots.contains(&cand) {
                        roots.push(cand.clone());
                    }
                }
            }
        }
    }
    roots.sort();
    (roots, found == total_degree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn hyp(s: &str, vars: &[&str], ambient: Ambient) -> Hypersurface<Rational> {
        Hypersurface::new(parse_polynomial(s, vars).unwrap(), ambient).unwrap()
    }

    fn r(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    #[test]
    fn affine_quadric_counts() {
        let v = ["x0", "x1", "x2"];
        let x = hyp("x0*x1 - 1", &v, Ambient::Affine);
        let f3 = FieldSpec::prime(3).unwrap();
        assert_eq!(count_points(&x, &f3).unwrap().total, 6);
        let y = hyp("x0*x1 + x2^2 - 1", &v, Ambient::Affine);
        assert_eq!(count_points(&y, &f3).unwrap().total, 12);
        let f2 = FieldSpec::prime(2).unwrap();
        let c = count_points(&y, &f2).unwrap();
        assert_eq!((c.total, c.regular, c.singular), (4, 3, 1));
    }

    #[test]
    fn projective_count_matches_cone() {
        let v = ["w", "x", "y", "z"];
        let proj = hyp("x*y*w + x^3 + y^3", &v, Ambient::Projective);
        let aff = hyp("x*y*w + x^3 + y^3", &v, Ambient::Affine);
        for q in [2u64, 3, 4, 5] {
            let f = FieldSpec::from_order(q).unwrap();
            let p = count_points(&proj, &f).unwrap();
            let a = count_points(&aff, &f).unwrap();
            assert_eq!(p.total, q * q + 1);
            assert_eq!((a.total - 1) / (q - 1), p.total);
            assert_eq!((a.total - 1) % (q - 1), 0);
        }
    }

    #[test]
    fn splits_are_additive() {
        let v = ["w", "x", "y", "z"];
        let h = hyp("x^2*w + y^2*z", &v, Ambient::Projective);
        let f = FieldSpec::prime(5).unwrap();
        let total = count_points(&h, &f).unwrap();
        for i in 0..4 {
            let (on, off) = count_split(&h, &Polynomial::var(i, 4), &f, DEFAULT_POINT_BOUND).unwrap();
            assert_eq!(on.merge(off), total);
        }
    }

    #[test]
    fn bound_and_embedding_errors() {
        let v = ["x", "y"];
        let h = hyp("1/5*x - y", &v, Ambient::Affine);
        let f5 = FieldSpec::prime(5).unwrap();
        assert!(matches!(count_points(&h, &f5), Err(VarietyError::NotEmbeddable(_))));
        let f7 = FieldSpec::prime(7).unwrap();
        assert!(matches!(count_points_bounded(&h, &f7, 10), Err(VarietyError::BoundExceeded { .. })));
    }

    #[test]
    fn multiplicities_of_the_cone_family() {
        let v = ["w", "x", "y", "z"];
        for d in [4i64, 5] {
            let f = hyp(&format!("x^{}*y + z^{}", d - 1, d), &v, Ambient::Projective);
            let vertex = multiplicity_at(&f, &[r(1), r(0), r(0), r(0)]).unwrap();
            assert_eq!(vertex.multiplicity, d as u32);
            assert!(vertex.is_max_possible);
            let ypt = multiplicity_at(&f, &[r(0), r(0), r(1), r(0)]).unwrap();
            assert_eq!(ypt.multiplicity, d as u32 - 1);
        }
        let cone = hyp("x^3 + y^3 + z^3", &v, Ambient::Projective);
        assert_eq!(multiplicity_at(&cone, &[r(1), r(0), r(0), r(0)]).unwrap().multiplicity, 3);
        let smooth = hyp("x0*x1 - 1", &["x0", "x1"], Ambient::Affine);
        assert_eq!(multiplicity_at(&smooth, &[r(1), r(1)]).unwrap().multiplicity, 1);
        assert_eq!(multiplicity_at(&smooth, &[r(0), r(1)]), Err(VarietyError::PointNotOnHypersurface));
    }

    #[test]
    fn hasse_route_agrees_with_taylor_route() {
        let v = ["w", "x", "y", "z"];
        let h = hyp("x^3*y + z^4 + 4*x^2*z^2*w^0 + x*y*z*w", &v, Ambient::Projective);
        let field = FieldSpec::prime(7).unwrap();
        let hp: Hypersurface<crate::scalar::Fp<7>> =
            Hypersurface::projective(h.defining().reduce_into().unwrap()).unwrap();
        for pt in enumerate_points(&h, &field, DEFAULT_POINT_BOUND).unwrap() {
            let a = multiplicity_at_fq(&h, &field, &pt).unwrap().multiplicity;
            let fp_pt: Vec<crate::scalar::Fp<7>> = pt.iter().map(|e| crate::scalar::Fp::new(e.rep() as u64)).collect();
            let b = multiplicity_at(&hp, &fp_pt).unwrap().multiplicity;
            assert_eq!(a, b);
        }
    }

    #[test]
    fn singular_points_have_multiplicity_two_or_more() {
        let v = ["w", "x", "y", "z"];
        let h = hyp("x^2*w + y^2*z", &v, Ambient::Projective);
        for q in [3u64, 4, 5] {
            let field = FieldSpec::from_order(q).unwrap();
            let f = FieldPoly::new(h.defining(), &field).unwrap();
            let partials: Vec<FieldPoly> =
                (0..4).map(|i| FieldPoly::new(&h.defining().derivative(i), &field).unwrap()).collect();
            for pt in enumerate_points(&h, &field, DEFAULT_POINT_BOUND).unwrap() {
                assert!(f.eval(&field, &pt).is_zero());
                let singular = partials.iter().all(|d| d.eval(&field, &pt).is_zero());
                let m = multiplicity_at_fq(&h, &field, &pt).unwrap().multiplicity;
                assert_eq!(singular, m >= 2);
            }
        }
    }

    #[test]
    fn max_multiplicity_loci() {
        let v = ["w", "x", "y", "z"];
        let f5 = FieldSpec::prime(5).unwrap();
        let f = hyp("x^3*y + z^4", &v, Ambient::Projective);
        let loc = max_multiplicity_locus(&f, &f5, DEFAULT_POINT_BOUND).unwrap();
        assert_eq!(loc.points, vec![vec![f5.one(), f5.zero(), f5.zero(), f5.zero()]]);
        assert!(loc.linear);
        let quadric = hyp("w*x + y*z", &v, Ambient::Projective);
        assert!(max_multiplicity_locus(&quadric, &f5, DEFAULT_POINT_BOUND).unwrap().points.is_empty());
        // A form in w, x only: the line w = x = 0 consists of multiplicity-d points.
        let bin = hyp("w^3 + 2*x^3 + w*x^2", &v, Ambient::Projective);
        let loc = max_multiplicity_locus(&bin, &f5, DEFAULT_POINT_BOUND).unwrap();
        assert_eq!(loc.points.len(), 6);
        assert!(loc.linear);
    }

    #[test]
    fn line_scans() {
        let v = ["x0", "x1", "y", "z"];
        for d in [3i64, 4] {
            let g = hyp(&format!("x0^{}*y + z^{} + {}*x0^{}*x1^2", d - 1, d, d, d - 2), &v, Ambient::Projective);
            let line = ParamLine::through(&[r(0), r(0), r(1), r(0)], &[r(0), r(1), r(0), r(0)]);
            let scan = multiplicity_along_line(&g, &line).unwrap();
            assert!(scan.max_multiplicity() < d as u32, "{scan:?}");
            assert!(!scan.unresolved_roots);
            let field = FieldSpec::prime(5).unwrap();
            let scan = multiplicity_along_line_fq(&g, &line, &field).unwrap();
            assert!(scan.max_multiplicity() < d as u32);
        }
        // The plane curve x^{d-1} y + z^d has multiplicity d-1 at [0:1:0].
        let c = hyp("x^3*y + z^4", &["x", "y", "z"], Ambient::Projective);
        let line = ParamLine::through(&[r(0), r(1), r(0)], &[r(1), r(0), r(0)]);
        let scan = multiplicity_along_line(&c, &line).unwrap();
        assert_eq!(scan.generic_multiplicity, 0);
        assert_eq!(scan.exceptional, vec![("0".to_string(), 3)]);
    }

    #[test]
    fn root_finding() {
        // (t - 1/2)^2 (t + 3) (t^2 + 1)
        let p: Polynomial<Rational> = parse_polynomial("(t - 1/2)^2*(t + 3)*(t^2 + 1)", &["t"]).unwrap();
        let dense: Vec<Rational> = (0..=5).map(|e| p.coefficient(&Monomial::new(vec![e]))).collect();
        let (roots, complete) = rational_roots(&dense);
        assert_eq!(roots, vec![r(-3), Rational::new(1.into(), 2.into())]);
        assert!(!complete);
    }

    #[test]
    fn binomials_mod_p() {
        assert_eq!(binom_mod(10, 3, 7), 120 % 7);
        assert_eq!(binom_mod(4, 2, 2), 0);
        assert_eq!(binom_mod(5, 1, 5), 0);
    }
}
