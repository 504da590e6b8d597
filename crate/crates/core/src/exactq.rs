//! Exact rationals, classes in ℚ/ℤ and the bracket section `[-]_ℚ : ℚ/ℤ → ℚ ∩ [0,1)`.
//!
//! Rationals are backed by arbitrary-precision integers so that no input
//! can overflow a strict inequality decision.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A reduced fraction with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(numer.into(), denom.into())))
    }

    pub fn from_integer<T: Into<BigInt>>(n: T) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// Largest integer not exceeding `self`.
    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Denominator as a machine integer.
    pub fn denom_u64(&self) -> Result<u64> {
        self.denom()
            .to_u64()
            .ok_or_else(|| Error::Overflow(format!("denominator of {self}")))
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    pub fn max(self, other: Rational) -> Rational {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn mul_int(&self, k: i64) -> Rational {
        Rational(&self.0 * BigRational::from_integer(k.into()))
    }

    pub fn div_int(&self, k: i64) -> Result<Rational> {
        if k == 0 {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(&self.0 / BigRational::from_integer(k.into())))
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
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

fn strip_sign(x: &str) -> &str {
    x.strip_prefix('-')
        .or_else(|| x.strip_prefix('+'))
        .unwrap_or(x)
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
        if strip_sign(n).is_empty() || !strip_sign(n).bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        if strip_sign(d).is_empty() || !strip_sign(d).bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
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
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational(self.0.$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $m(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$m(&rhs.0))
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$m(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

// Division by zero panics, exactly as for the primitive integer types.
impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        Rational(self.0 / rhs.0)
    }
}

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

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// The canonical representative of `x mod ℤ` in `[0, 1)`.
pub fn bracket_q(x: &Rational) -> Rational {
    let fl = Rational::from_integer(x.floor());
    x - &fl
}

/// Smallest `n ≥ 1` with `n·x ∈ ℤ` for every `x` in `xs`.
pub fn lcm_denominators(xs: &[Rational]) -> Result<u64> {
    if xs.is_empty() {
        return Err(Error::EmptyDenominatorSet);
    }
    let mut acc = BigInt::one();
    for x in xs {
        acc = acc.lcm(x.denom());
    }
    acc.to_u64()
        .ok_or_else(|| Error::Overflow("lcm of denominators".into()))
}

/// A class in ℚ/ℤ, stored as its representative in `[0, 1)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct QModZ(Rational);

impl QModZ {
    pub fn new(x: Rational) -> Self {
        QModZ(bracket_q(&x))
    }

    pub fn zero() -> Self {
        QModZ(Rational::zero())
    }

    pub fn representative(&self) -> &Rational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Smallest `e ≥ 1` with `e·self ≡ 0`.
    pub fn order(&self) -> Result<u64> {
        self.0.denom_u64()
    }

    /// `k·self` in ℚ/ℤ.
    pub fn scale(&self, k: i64) -> QModZ {
        QModZ::new(self.0.mul_int(k))
    }
}

impl Add for QModZ {
    type Output = QModZ;
    fn add(self, rhs: QModZ) -> QModZ {
        QModZ::new(self.0 + rhs.0)
    }
}

impl Sub for QModZ {
    type Output = QModZ;
    fn sub(self, rhs: QModZ) -> QModZ {
        QModZ::new(self.0 - rhs.0)
    }
}

impl Sum for QModZ {
    fn sum<I: Iterator<Item = QModZ>>(iter: I) -> QModZ {
        iter.fold(QModZ::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for QModZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for QModZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0)
    }
}

impl FromStr for QModZ {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(QModZ::new(s.parse()?))
    }
}

impl Serialize for QModZ {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QModZ {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(QModZ::new(Rational::deserialize(d)?))
    }
}

/// Least common multiple of machine integers, failing on overflow.
pub fn lcm_u64<I: IntoIterator<Item = u64>>(xs: I) -> Result<u64> {
    let mut acc: u64 = 1;
    for x in xs {
        let g = acc.gcd(&x);
        acc = (acc / g)
            .checked_mul(x)
            .ok_or_else(|| Error::Overflow("lcm".into()))?;
    }
    Ok(acc)
}
