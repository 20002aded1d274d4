//! GF(p^k) with table-driven arithmetic.
//!
//! An element is packed as the integer `sum c_i p^i`, where `c_0 + c_1 u + ...`
//! is its representative modulo the field's modulus. Enumeration order is the
//! order of these integers.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::poly::{parse_polynomial, Polynomial};
use crate::scalar::{invmod, mulmod};

pub const DEFAULT_ENUMERATION_BOUND: u64 = 1 << 14;
const MAX_TABLE_SIZE: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of order {0} is too large")]
    TooLarge(u128),
    #[error("modulus must be monic of degree {expected}")]
    BadModulus { expected: u32 },
    #[error("modulus is reducible over GF({0})")]
    Reducible(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field order {q} exceeds the enumeration bound {bound}")]
    EnumerationBound { q: u64, bound: u64 },
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("invalid field syntax: {0}")]
    Syntax(String),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct FieldElement(u32);

impl FieldElement {
    pub fn rep(self) -> u32 {
        self.0
    }
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug)]
struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct FieldSpec {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    tables: Arc<Tables>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `q = p^k` decomposition.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let (mut r, mut k) = (q, 0);
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

// Dense univariate polynomials over GF(p), lowest degree first.
type UPoly = Vec<u64>;

fn trim(mut a: UPoly) -> UPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn umul(a: &[u64], b: &[u64], p: u64) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
        }
    }
    trim(out)
}

fn urem(a: &[u64], m: &[u64], p: u64) -> UPoly {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = invmod(m[dm], p).expect("nonzero lead");
    while r.len() > dm {
        let top = r.len() - 1;
        let c = mulmod(r[top], lead_inv, p);
        for (j, &mj) in m.iter().enumerate() {
            let idx = top - dm + j;
            r[idx] = (r[idx] + p - mulmod(c, mj, p)) % p;
        }
        r = trim(r);
    }
    r
}

fn usub(a: &[u64], b: &[u64], p: u64) -> UPoly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

fn ugcd(a: &[u64], b: &[u64], p: u64) -> UPoly {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = urem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// `x^(p^e) mod m`.
fn frobenius_power(m: &[u64], p: u64, e: u32) -> UPoly {
    let mut cur = urem(&[0, 1], m, p);
    for _ in 0..e {
        // cur <- cur^p
        let mut acc: UPoly = vec![1];
        let mut base = cur.clone();
        let mut n = p;
        while n > 0 {
            if n & 1 == 1 {
                acc = urem(&umul(&acc, &base, p), m, p);
            }
            base = urem(&umul(&base, &base, p), m, p);
            n >>= 1;
        }
        cur = acc;
    }
    cur
}

/// Irreducibility of a monic `m` of degree `k` over GF(p): root absence for
/// `k <= 3`, Rabin's test otherwise.
pub fn is_irreducible(m: &[u64], p: u64) -> bool {
    let k = m.len() - 1;
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    if k <= 3 {
        return (0..p).all(|x| {
            let mut v = 0u64;
            for &c in m.iter().rev() {
                v = (mulmod(v, x, p) + c) % p;
            }
            v != 0
        });
    }
    let x = vec![0, 1];
    if usub(&frobenius_power(m, p, k as u32), &x, p) != Vec::<u64>::new() {
        return false;
    }
    let mut primes = Vec::new();
    let mut r = k;
    let mut d = 2;
    while r > 1 {
        if r % d == 0 {
            primes.push(d);
            while r % d == 0 {
                r /= d;
            }
        }
        d += 1;
    }
    primes.iter().all(|&r| {
        let h = usub(&frobenius_power(m, p, (k / r) as u32), &x, p);
        ugcd(m, &h, p).len() == 1
    })
}

/// Smallest monic irreducible of degree `k`, ordered by `sum c_i p^i`.
pub fn builtin_modulus(p: u64, k: u32) -> Vec<u64> {
    let count = p.pow(k);
    for v in 0..count {
        let mut m: Vec<u64> = Vec::with_capacity(k as usize + 1);
        let mut r = v;
        for _ in 0..k {
            m.push(r % p);
            r /= p;
        }
        m.push(1);
        if is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FieldSpec {
    /// GF(p^k) with the built-in modulus.
    pub fn new(p: u64, k: u32) -> Result<Self, FieldError> {
        Self::check_size(p, k)?;
        Self::with_modulus(p, k, &builtin_modulus(p, k))
    }

    pub fn prime(p: u64) -> Result<Self, FieldError> {
        Self::new(p, 1)
    }

    pub fn from_order(q: u64) -> Result<Self, FieldError> {
        let (p, k) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        Self::new(p, k)
    }

    fn check_size(p: u64, k: u32) -> Result<(), FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = (p as u128).checked_pow(k).unwrap_or(u128::MAX);
        if q > MAX_TABLE_SIZE as u128 {
            return Err(FieldError::TooLarge(q));
        }
        Ok(())
    }

    /// GF(p^k) defined by an explicit monic irreducible modulus (lowest degree first).
    pub fn with_modulus(p: u64, k: u32, modulus: &[u64]) -> Result<Self, FieldError> {
        Self::check_size(p, k)?;
        let m = trim(modulus.iter().map(|c| c % p).collect());
        if m.len() != k as usize + 1 || m[k as usize] != 1 {
            return Err(FieldError::BadModulus { expected: k });
        }
        if !is_irreducible(&m, p) {
            return Err(FieldError::Reducible(p));
        }
        let q = p.pow(k);
        let tables = build_tables(p, k, q, &m);
        Ok(FieldSpec {
            p: p as u32,
            k,
            q: q as u32,
            modulus: m.iter().map(|&c| c as u32).collect(),
            tables: Arc::new(tables),
        })
    }

    pub fn p(&self) -> u64 {
        self.p as u64
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn q(&self) -> u64 {
        self.q as u64
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn modulus_string(&self) -> String {
        let terms: Vec<String> = self
            .modulus
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| {
                let mono = match i {
                    0 => String::new(),
                    1 => "u".into(),
                    _ => format!("u^{i}"),
                };
                match (c, mono.is_empty()) {
                    (_, true) => c.to_string(),
                    (1, false) => mono,
                    _ => format!("{c}*{mono}"),
                }
            })
            .collect();
        terms.join(" + ")
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    /// The class of `u`, a root of the modulus.
    pub fn generator_u(&self) -> FieldElement {
        if self.k == 1 {
            FieldElement(((self.p as u64 - self.modulus[0] as u64) % self.p as u64) as u32)
        } else {
            FieldElement(self.p)
        }
    }

    pub fn from_i64(&self, v: i64) -> FieldElement {
        FieldElement(v.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_bigint(&self, v: &BigInt) -> FieldElement {
        let p = BigInt::from(self.p);
        let r = ((v % &p) + &p) % &p;
        FieldElement(r.to_u32().expect("small residue"))
    }

    pub fn from_coords(&self, coords: &[u32]) -> FieldElement {
        assert!(coords.len() <= self.k as usize);
        let mut v = 0u32;
        for &c in coords.iter().rev() {
            v = v * self.p + c % self.p;
        }
        FieldElement(v)
    }

    pub fn coords(&self, a: FieldElement) -> Vec<u32> {
        let mut v = a.0;
        (0..self.k)
            .map(|_| {
                let c = v % self.p;
                v /= self.p;
                c
            })
            .collect()
    }

    /// Element with this packed representation.
    pub fn element(&self, rep: u32) -> FieldElement {
        assert!(rep < self.q, "representation out of range");
        FieldElement(rep)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.k == 1 {
            let s = a.0 + b.0;
            return FieldElement(if s >= self.p { s - self.p } else { s });
        }
        if self.p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0u32, 1u32);
        while x > 0 || y > 0 {
            let d = (x % self.p + y % self.p) % self.p;
            out += d * place;
            place *= self.p;
            x /= self.p;
            y /= self.p;
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.k == 1 {
            return FieldElement(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        if self.p == 2 {
            return a;
        }
        let (mut x, mut out, mut place) = (a.0, 0u32, 1u32);
        while x > 0 {
            let d = (self.p - x % self.p) % self.p;
            out += d * place;
            place *= self.p;
            x /= self.p;
        }
        FieldElement(out)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement(0);
        }
        let t = &self.tables;
        let s = t.log[a.0 as usize] as u64 + t.log[b.0 as usize] as u64;
        FieldElement(t.exp[(s % (self.q as u64 - 1)) as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::ZeroInverse);
        }
        let t = &self.tables;
        let l = t.log[a.0 as usize];
        let n = self.q - 1;
        Ok(FieldElement(t.exp[((n - l) % n) as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement(1);
        }
        if a.0 == 0 {
            return FieldElement(0);
        }
        let t = &self.tables;
        let n = self.q as u64 - 1;
        let l = (t.log[a.0 as usize] as u64 * (e % n)) % n;
        FieldElement(t.exp[l as usize])
    }

    pub fn frobenius(&self, a: FieldElement) -> FieldElement {
        self.pow(a, self.p as u64)
    }

    pub fn is_square(&self, a: FieldElement) -> bool {
        a.0 == 0 || self.p == 2 || self.tables.log[a.0 as usize] % 2 == 0
    }

    /// All elements in packed-integer order, subject to `bound`.
    pub fn enumerate(&self, bound: u64) -> Result<Vec<FieldElement>, FieldError> {
        if self.q as u64 > bound {
            return Err(FieldError::EnumerationBound { q: self.q as u64, bound });
        }
        Ok(self.elements())
    }

    pub fn elements(&self) -> Vec<FieldElement> {
        (0..self.q).map(FieldElement).collect()
    }

    /// Image of a rational `num/den`, or `None` if `p | den`.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Option<FieldElement> {
        let d = self.from_bigint(den);
        let inv = self.inv(d).ok()?;
        Some(self.mul(self.from_bigint(num), inv))
    }

    pub fn format(&self, a: FieldElement) -> String {
        if self.k == 1 {
            return a.0.to_string();
        }
        let coords = self.coords(a);
        let terms: Vec<String> = coords
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, _) => c.to_string(),
                (1, 1) => "u".into(),
                (1, _) => format!("{c}*u"),
                (_, 1) => format!("u^{i}"),
                _ => format!("{c}*u^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

fn slow_mul(a: u64, b: u64, p: u64, k: u32, m: &[u64]) -> u64 {
    let unpack = |mut v: u64| -> UPoly {
        let out = (0..k)
            .map(|_| {
                let c = v % p;
                v /= p;
                c
            })
            .collect();
        trim(out)
    };
    let r = urem(&umul(&unpack(a), &unpack(b), p), m, p);
    r.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn build_tables(p: u64, k: u32, q: u64, m: &[u64]) -> Tables {
    let n = (q - 1) as usize;
    let mut exp = vec![0u32; n];
    let mut log = vec![0u32; q as usize];
    for g in 1..q {
        let mut cur = 1u64;
        let mut ok = true;
        for (i, slot) in exp.iter_mut().enumerate() {
            if cur == 1 && i > 0 {
                ok = false;
                break;
            }
            *slot = cur as u32;
            cur = if k == 1 { mulmod(cur, g, p) } else { slow_mul(cur, g, p, k, m) };
        }
        if ok && cur == 1 {
            for (i, &e) in exp.iter().enumerate() {
                log[e as usize] = i as u32;
            }
            return Tables { exp, log };
        }
    }
    unreachable!("the multiplicative group of a finite field is cyclic")
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "GF({})", self.p)
        } else {
            write!(f, "GF({}^{}) mod {}", self.p, self.k, self.modulus_string())
        }
    }
}

/// Parses `q=9`, `p=5`, or `p=3,k=2,mod=u^2+1`.
impl FromStr for FieldSpec {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, FieldError> {
        let mut q = None;
        let mut p = None;
        let mut k = None;
        let mut modulus = None;
        for part in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let (key, val) =
                part.split_once('=').ok_or_else(|| FieldError::Syntax(format!("expected key=value, got {part:?}")))?;
            let num = || val.trim().parse::<u64>().map_err(|_| FieldError::Syntax(format!("bad number {val:?}")));
            match key.trim() {
                "q" => q = Some(num()?),
                "p" => p = Some(num()?),
                "k" => k = Some(num()? as u32),
                "mod" => modulus = Some(val.trim().to_string()),
                other => return Err(FieldError::Syntax(format!("unknown key {other:?}"))),
            }
        }
        match (q, p) {
            (Some(q), None) if k.is_none() && modulus.is_none() => FieldSpec::from_order(q),
            (None, Some(p)) => {
                let k = k.unwrap_or(1);
                match modulus {
                    None => FieldSpec::new(p, k),
                    Some(text) => {
                        let poly: Polynomial<BigInt> =
                            parse_polynomial(&text, &["u"]).map_err(|e| FieldError::Syntax(e.to_string()))?;
                        let deg = poly.total_degree().unwrap_or(0) as usize;
                        let mut coeffs = vec![0u64; deg + 1];
                        let bp = BigInt::from(p);
                        for (m, c) in poly.terms() {
                            let r = ((c % &bp) + &bp) % &bp;
                            coeffs[m.exp(0) as usize] = r.to_u64().expect("small");
                        }
                        FieldSpec::with_modulus(p, k, &coeffs)
                    }
                }
            }
            _ => Err(FieldError::Syntax(s.to_string())),
        }
    }
}
