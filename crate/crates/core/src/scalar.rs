//! Exact coefficient domains.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A commutative ring with exact arithmetic, usable as polynomial coefficients.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + Eq
    + Hash
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    /// Zero for characteristic-zero domains.
    fn characteristic() -> u64;

    /// True when every nonzero element is a unit.
    fn is_field() -> bool;

    fn from_i64(v: i64) -> Self;

    fn from_bigint(v: &BigInt) -> Self;

    /// Image of `num/den`, or `None` if `den` is not invertible (or the quotient is not in the ring).
    fn from_ratio(num: &BigInt, den: &BigInt) -> Option<Self>;

    fn try_inverse(&self) -> Option<Self>;

    /// Exact quotient `self / other` if it exists in the ring.
    fn try_div(&self, other: &Self) -> Option<Self>;

    /// Residue modulo the prime `p`, or `None` when the element has no image in `Z/p`.
    fn reduce_mod(&self, p: u64) -> Option<u64>;

    fn is_unit(&self) -> bool {
        self.try_inverse().is_some()
    }

    /// Name used in reports.
    fn domain_name() -> String;
}

pub type Rational = BigRational;

fn bigint_mod(v: &BigInt, p: u64) -> u64 {
    let r = v.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits in u64")
}

impl Scalar for BigRational {
    fn characteristic() -> u64 {
        0
    }
    fn is_field() -> bool {
        true
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }
    fn from_ratio(num: &BigInt, den: &BigInt) -> Option<Self> {
        if den.is_zero() {
            None
        } else {
            Some(BigRational::new(num.clone(), den.clone()))
        }
    }
    fn try_inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
    fn try_div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            None
        } else {
            Some(self / other)
        }
    }
    fn reduce_mod(&self, p: u64) -> Option<u64> {
        let n = bigint_mod(self.numer(), p);
        let d = bigint_mod(self.denom(), p);
        if d == 0 {
            return None;
        }
        Some(mulmod(n, invmod(d, p)?, p))
    }
    fn domain_name() -> String {
        "Q".into()
    }
}

impl Scalar for BigInt {
    fn characteristic() -> u64 {
        0
    }
    fn is_field() -> bool {
        false
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn from_bigint(v: &BigInt) -> Self {
        v.clone()
    }
    fn from_ratio(num: &BigInt, den: &BigInt) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        let (q, r) = num.div_rem(den);
        r.is_zero().then_some(q)
    }
    fn try_inverse(&self) -> Option<Self> {
        if self.abs().is_one() {
            Some(self.clone())
        } else {
            None
        }
    }
    fn try_div(&self, other: &Self) -> Option<Self> {
        Self::from_ratio(self, other)
    }
    fn reduce_mod(&self, p: u64) -> Option<u64> {
        Some(bigint_mod(self, p))
    }
    fn domain_name() -> String {
        "Z".into()
    }
}

pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Inverse modulo `p` via the extended Euclidean algorithm.
pub(crate) fn invmod(a: u64, p: u64) -> Option<u64> {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, (a % p) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(p as i128) as u64)
}

/// The prime field `Z/P`. `P` must be prime.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    pub fn new(v: u64) -> Self {
        Fp(v % P)
    }
    pub fn value(self) -> u64 {
        self.0
    }
}

impl<const P: u64> Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let s = self.0 + o.0;
        Fp(if s >= P { s - P } else { s })
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Fp(if self.0 >= o.0 { self.0 - o.0 } else { self.0 + P - o.0 })
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Fp(mulmod(self.0, o.0, P))
    }
}

impl<'a, const P: u64> Mul<&'a Fp<P>> for Fp<P> {
    type Output = Self;
    fn mul(self, o: &'a Self) -> Self {
        self * *o
    }
}

impl<'a, const P: u64> AddAssign<&'a Fp<P>> for Fp<P> {
    fn add_assign(&mut self, o: &'a Self) {
        *self = *self + *o;
    }
}

impl<'a, const P: u64> SubAssign<&'a Fp<P>> for Fp<P> {
    fn sub_assign(&mut self, o: &'a Self) {
        *self = *self - *o;
    }
}

impl<const P: u64> MulAssign for Fp<P> {
    fn mul_assign(&mut self, o: Self) {
        *self = *self * o;
    }
}

impl<const P: u64> Scalar for Fp<P> {
    fn characteristic() -> u64 {
        P
    }
    fn is_field() -> bool {
        true
    }
    fn from_i64(v: i64) -> Self {
        Fp(v.rem_euclid(P as i64) as u64)
    }
    fn from_bigint(v: &BigInt) -> Self {
        Fp(bigint_mod(v, P))
    }
    fn from_ratio(num: &BigInt, den: &BigInt) -> Option<Self> {
        let d = bigint_mod(den, P);
        let inv = invmod(d, P)?;
        Some(Fp(mulmod(bigint_mod(num, P), inv, P)))
    }
    fn try_inverse(&self) -> Option<Self> {
        invmod(self.0, P).map(Fp)
    }
    fn try_div(&self, other: &Self) -> Option<Self> {
        other.try_inverse().map(|i| *self * i)
    }
    fn reduce_mod(&self, p: u64) -> Option<u64> {
        (p == P).then_some(self.0)
    }
    fn domain_name() -> String {
        format!("GF({P})")
    }
}
