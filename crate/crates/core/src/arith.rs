//! Exact scalars: rationals, p-adic valuations and the quadratic extension
//! `Q(sqrt q)` that half-integral powers of `q` live in.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let d = denom.into();
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(numer.into(), d)))
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    /// Shorthand for small fractions in tests and generators. Panics on a zero denominator.
    pub fn frac(numer: i64, denom: i64) -> Self {
        Rational::new(numer, denom).expect("nonzero denominator")
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(self.0.recip()))
    }

    /// Integer power; negative exponents need a nonzero base.
    pub fn pow(&self, exp: i64) -> Result<Self> {
        if exp < 0 && self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let e = i32::try_from(exp).map_err(|_| Error::Internal(format!("exponent {exp} too large")))?;
        Ok(Rational(num_traits::Pow::pow(&self.0, e)))
    }

    /// `p^k` for an integer base.
    pub fn int_pow(base: u64, exp: i64) -> Self {
        Rational::from_int(base)
            .pow(exp)
            .expect("nonzero base or nonnegative exponent")
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseRational(s.to_string());
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Rational(BigRational::new(n, d)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Str(String),
            Int(i64),
        }
        match Repr::deserialize(d)? {
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Int(n) => Ok(Rational::from_int(n)),
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0 $op rhs.0)
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0 $op &rhs.0)
            }
        }
        impl<'a> $tr<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(&self.0 $op rhs.0)
            }
        }
        impl<'a, 'b> $tr<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                Rational(&self.0 $op &rhs.0)
            }
        }
    };
}

forward_binop!(Add, add, +);
forward_binop!(Sub, sub, -);
forward_binop!(Mul, mul, *);
// Division panics on a zero divisor like the underlying BigRational; use
// `recip` where the divisor is not known to be nonzero.
forward_binop!(Div, div, /);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

impl<'a> Product<&'a Rational> for Rational {
    fn product<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// `Some(k)` when `n = p^k` for a prime `p` with `k >= 1`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|d| n.is_multiple_of(*d))?;
    let mut m = n;
    let mut k = 0;
    while m.is_multiple_of(p) {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}

/// A p-adic valuation; zero has valuation `Infinity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PAdicValuation {
    Finite(i64),
    Infinity,
}

impl PAdicValuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            PAdicValuation::Finite(v) => Some(v),
            PAdicValuation::Infinity => None,
        }
    }

    pub fn scale(self, e: i64) -> Self {
        match self {
            PAdicValuation::Finite(v) => PAdicValuation::Finite(v * e),
            inf => inf,
        }
    }
}

impl Add for PAdicValuation {
    type Output = PAdicValuation;
    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (PAdicValuation::Finite(a), PAdicValuation::Finite(b)) => PAdicValuation::Finite(a + b),
            _ => PAdicValuation::Infinity,
        }
    }
}

impl fmt::Display for PAdicValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PAdicValuation::Finite(v) => write!(f, "{v}"),
            PAdicValuation::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for PAdicValuation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PAdicValuation::Finite(v) => s.serialize_i64(*v),
            PAdicValuation::Infinity => s.serialize_str("inf"),
        }
    }
}

fn int_val(n: &BigInt, p: &BigInt) -> i64 {
    let mut m = n.clone();
    let mut k = 0;
    loop {
        let (quot, rem) = m.div_rem(p);
        if !rem.is_zero() {
            return k;
        }
        m = quot;
        k += 1;
    }
}

/// Exact p-adic valuation of `x`, normalized so that `val(p) = 1`.
pub fn padic_val(x: &Rational, p: u64) -> Result<PAdicValuation> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(padic_val_unchecked(x, p))
}

pub(crate) fn padic_val_unchecked(x: &Rational, p: u64) -> PAdicValuation {
    if x.is_zero() {
        return PAdicValuation::Infinity;
    }
    let pb = BigInt::from(p);
    PAdicValuation::Finite(int_val(x.numer(), &pb) - int_val(x.denom(), &pb))
}

/// `a + b*sqrt(q)` with rational `a`, `b`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QExtScalar {
    a: Rational,
    b: Rational,
    q: u64,
}

impl QExtScalar {
    /// When `q` is a perfect square the irrational part is folded into `a`.
    pub fn new(a: Rational, b: Rational, q: u64) -> Self {
        let s = q.sqrt();
        if s * s == q {
            QExtScalar {
                a: a + b * Rational::from_int(s),
                b: Rational::zero(),
                q,
            }
        } else {
            QExtScalar { a, b, q }
        }
    }

    pub fn rational(a: Rational, q: u64) -> Self {
        QExtScalar::new(a, Rational::zero(), q)
    }

    pub fn zero(q: u64) -> Self {
        QExtScalar::rational(Rational::zero(), q)
    }

    pub fn one(q: u64) -> Self {
        QExtScalar::rational(Rational::one(), q)
    }

    /// `q^(k/2)` for any integer `k`.
    pub fn sqrt_q_pow(k: i64, q: u64) -> Self {
        let half = k.div_euclid(2);
        let coeff = Rational::int_pow(q, half);
        if k.rem_euclid(2) == 0 {
            QExtScalar::rational(coeff, q)
        } else {
            QExtScalar::new(Rational::zero(), coeff, q)
        }
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.b.is_zero().then(|| self.a.clone())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.q != other.q {
            return Err(Error::ExtensionMismatch(self.q, other.q));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(QExtScalar::new(&self.a + &other.a, &self.b + &other.b, self.q))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(QExtScalar::new(&self.a - &other.a, &self.b - &other.b, self.q))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let q = Rational::from_int(self.q);
        let a = &self.a * &other.a + &self.b * &other.b * q;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(QExtScalar::new(a, b, self.q))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        QExtScalar::new(&self.a * c, &self.b * c, self.q)
    }
}

/// Exact product in `Q(sqrt q)`.
pub fn qext_mul(x: &QExtScalar, y: &QExtScalar) -> Result<QExtScalar> {
    x.checked_mul(y)
}

impl fmt::Display for QExtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}*sqrt({})", self.b, self.q),
            (false, false) => write!(f, "{} + {}*sqrt({})", self.a, self.b, self.q),
        }
    }
}

impl fmt::Debug for QExtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
