//! Prime-field and exact rational arithmetic.
//!
//! Everything downstream works on raw `u32` residues through a [`PrimeField`]
//! context; [`FieldElement`] is the self-describing value type used at API
//! boundaries where the modulus has to travel with the value.
//! [`Rational`] carries weights, potentials and probabilities exactly.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Largest modulus accepted: residues must multiply inside a `u64`.
pub const MAX_MODULUS: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u32, right: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is out of range (need 2 <= q < 2^31)")]
    ModulusOutOfRange(u64),
    #[error("value {value} is not reduced modulo {modulus}")]
    Unreduced { value: u64, modulus: u32 },
    #[error("rational division by zero")]
    DivisionByZero,
    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),
}

pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    if q < 4 {
        return true;
    }
    if q % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d * d <= q {
        if q % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors by trial division, ascending.
pub fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            out.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Arithmetic context for F_q with q prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PrimeField {
    q: u32,
}

impl PrimeField {
    pub fn new(q: u64) -> Result<Self, GfError> {
        if !(2..MAX_MODULUS).contains(&q) {
            return Err(GfError::ModulusOutOfRange(q));
        }
        if !is_prime(q) {
            return Err(GfError::NotPrime(q));
        }
        Ok(Self { q: q as u32 })
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn reduce(&self, v: u64) -> u32 {
        (v % self.q as u64) as u32
    }

    /// Reduces a signed integer into `[0, q)`.
    pub fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.q as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        if s >= self.q as u64 {
            (s - self.q as u64) as u32
        } else {
            s as u32
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            (a as u64 + self.q as u64 - b as u64) as u32
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.q as u64) as u32
    }

    /// `a + c * b`, the elimination workhorse.
    #[inline]
    pub fn mul_add(&self, a: u32, c: u32, b: u32) -> u32 {
        ((a as u64 + c as u64 * b as u64) % self.q as u64) as u32
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a as u64 % self.q as u64;
        let mut acc = 1u64 % self.q as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.q as u64;
            }
            base = base * base % self.q as u64;
            e >>= 1;
        }
        acc as u32
    }

    pub fn inv(&self, a: u32) -> Result<u32, GfError> {
        if a % self.q == 0 {
            return Err(GfError::ZeroInverse);
        }
        // Fermat: a^(q-2) = a^-1.
        Ok(self.pow(a, self.q as u64 - 2))
    }

    /// Smallest generator of the multiplicative group.
    pub fn primitive_root(&self) -> u32 {
        if self.q == 2 {
            return 1;
        }
        let order = self.q as u64 - 1;
        let factors = prime_factors(order);
        (2..self.q)
            .find(|&g| factors.iter().all(|&p| self.pow(g, order / p) != 1))
            .expect("every prime field has a primitive root")
    }

    pub fn element(&self, value: u64) -> FieldElement {
        FieldElement {
            value: self.reduce(value),
            modulus: self.q,
        }
    }
}

/// A residue together with its (prime) modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldElement {
    value: u32,
    modulus: u32,
}

impl FieldElement {
    pub fn new(value: u64, q: u64) -> Result<Self, GfError> {
        let field = PrimeField::new(q)?;
        if value >= q {
            return Err(GfError::Unreduced {
                value,
                modulus: field.q,
            });
        }
        Ok(field.element(value))
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn field(&self) -> PrimeField {
        PrimeField { q: self.modulus }
    }

    fn same_field(&self, other: &Self) -> Result<PrimeField, GfError> {
        if self.modulus != other.modulus {
            return Err(GfError::ModulusMismatch {
                left: self.modulus,
                right: other.modulus,
            });
        }
        Ok(self.field())
    }

    pub fn add(&self, other: &Self) -> Result<Self, GfError> {
        let f = self.same_field(other)?;
        Ok(f.element(f.add(self.value, other.value) as u64))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, GfError> {
        let f = self.same_field(other)?;
        Ok(f.element(f.sub(self.value, other.value) as u64))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, GfError> {
        let f = self.same_field(other)?;
        Ok(f.element(f.mul(self.value, other.value) as u64))
    }

    pub fn inv(&self) -> Result<Self, GfError> {
        let f = self.field();
        Ok(f.element(f.inv(self.value)? as u64))
    }

    pub fn pow(&self, e: u64) -> Self {
        let f = self.field();
        f.element(f.pow(self.value, e) as u64)
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}

/// Smallest primitive root of F_q.
pub fn find_primitive_root(q: u64) -> Result<FieldElement, GfError> {
    let field = PrimeField::new(q)?;
    Ok(field.element(field.primitive_root() as u64))
}

/// Exact rational number, always normalized (`gcd(|num|, den) = 1`, `den > 0`).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Result<Self, GfError> {
        if denom == 0 {
            return Err(GfError::DivisionByZero);
        }
        Ok(Self(BigRational::new(numer.into(), denom.into())))
    }

    pub fn from_integer(v: i64) -> Self {
        Self(BigRational::from_integer(v.into()))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
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

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, GfError> {
        if other.is_zero() {
            return Err(GfError::DivisionByZero);
        }
        Ok(Self(&self.0 / &other.0))
    }

    pub fn recip(&self) -> Result<Self, GfError> {
        Self::one().checked_div(self)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Self::from_integer(v)
    }
}

impl From<usize> for Rational {
    fn from(v: usize) -> Self {
        Self(BigRational::from_integer(BigInt::from(v)))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
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
    type Err = GfError;

    /// Accepts `a`, `a/b`, or a finite decimal such as `0.25`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GfError::ParseRational(s.to_string());
        let t = s.trim();
        if let Some((n, d)) = t.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(GfError::DivisionByZero);
            }
            return Ok(Self(BigRational::new(n, d)));
        }
        if let Some((int, frac)) = t.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let negative = int.starts_with('-');
            let int: BigInt = if int.is_empty() || int == "-" {
                BigInt::zero()
            } else {
                int.parse().map_err(|_| bad())?
            };
            let frac_val: BigInt = frac.parse().map_err(|_| bad())?;
            let scale = num_traits::pow(BigInt::from(10), frac.len());
            let mag = int.abs() * &scale + frac_val;
            let numer = if negative { -mag } else { mag };
            return Ok(Self(BigRational::new(numer, scale)));
        }
        let n: BigInt = t.parse().map_err(|_| bad())?;
        Ok(Self(BigRational::from_integer(n)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Total order on rationals.
pub fn rcmp(a: &Rational, b: &Rational) -> Ordering {
    a.cmp(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn small_field_examples() {
        let a = FieldElement::new(3, 7).unwrap();
        let b = FieldElement::new(5, 7).unwrap();
        assert_eq!(a.add(&b).unwrap().value(), 1);
        assert_eq!(a.mul(&b).unwrap().value(), 1);
        assert_eq!(a.inv().unwrap().value(), 5);
        let six = FieldElement::new(6, 7).unwrap();
        let one = FieldElement::new(1, 7).unwrap();
        assert_eq!(six.add(&one).unwrap().value(), 0);
        assert_eq!(one.inv().unwrap(), one);
        assert_eq!(
            FieldElement::new(0, 7).unwrap().inv(),
            Err(GfError::ZeroInverse)
        );
    }

    #[test]
    fn modulus_mismatch_is_an_error() {
        let a = FieldElement::new(1, 7).unwrap();
        let b = FieldElement::new(1, 11).unwrap();
        assert!(matches!(a.add(&b), Err(GfError::ModulusMismatch { .. })));
        assert!(matches!(a.mul(&b), Err(GfError::ModulusMismatch { .. })));
    }

    #[test]
    fn rejects_bad_moduli() {
        assert_eq!(PrimeField::new(15), Err(GfError::NotPrime(15)));
        assert!(matches!(PrimeField::new(1), Err(GfError::ModulusOutOfRange(1))));
        assert!(PrimeField::new(1 << 31).is_err());
        assert!(FieldElement::new(7, 7).is_err());
    }

    #[test]
    fn pow_examples() {
        let f = PrimeField::new(13).unwrap();
        assert_eq!(f.pow(2, 4), 3);
        assert_eq!(f.pow(9, 0), 1);
        let g = PrimeField::new(37).unwrap();
        // repeated multiplication as the oracle
        let mut acc = 1u32;
        for _ in 0..36 {
            acc = g.mul(acc, 2);
        }
        assert_eq!(acc, 1);
        assert_eq!(g.pow(2, 36), acc);
    }

    #[test]
    fn primitive_root_examples() {
        assert_eq!(find_primitive_root(7).unwrap().value(), 3);
        assert_eq!(find_primitive_root(13).unwrap().value(), 2);
        assert_eq!(find_primitive_root(37).unwrap().value(), 2);
    }

    fn brute_order(f: &PrimeField, g: u32) -> u32 {
        let mut x = g;
        let mut k = 1;
        while x != 1 {
            x = f.mul(x, g);
            k += 1;
        }
        k
    }

    #[test]
    fn primitive_roots_have_full_order_up_to_200() {
        for q in (3..=200u64).filter(|&q| is_prime(q)) {
            let f = PrimeField::new(q).unwrap();
            let g = f.primitive_root();
            assert_eq!(brute_order(&f, g), q as u32 - 1, "q = {q}");
            // smallest: every smaller candidate has a short order
            for h in 2..g {
                assert!(brute_order(&f, h) < q as u32 - 1);
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for q in [2u64, 3, 5, 7, 11, 13] {
            let f = PrimeField::new(q).unwrap();
            let q = q as u32;
            for a in 0..q {
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                assert_eq!(f.add(a, f.neg(a)), 0);
                for b in 0..q {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.sub(f.add(a, b), b), a);
                    for c in 0..q {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.mul_add(a, b, c), f.add(a, f.mul(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn field_axioms_random_large() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let f = PrimeField::new(2_147_483_629).unwrap();
        let q = f.modulus();
        for _ in 0..10_000 {
            let (a, b, c) = (rng.gen_range(0..q), rng.gen_range(0..q), rng.gen_range(0..q));
            assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
        }
    }

    #[test]
    fn rational_examples() {
        assert_eq!(r(1, 2) + r(1, 3), r(5, 6));
        assert_eq!(rcmp(&r(3, 4), &r(6, 8)), Ordering::Equal);
        assert_eq!(r(1, 4) * r(2, 3), r(1, 6));
        assert_eq!(Rational::new(1, 0), Err(GfError::DivisionByZero));
        assert_eq!(r(1, 2).checked_div(&Rational::zero()), Err(GfError::DivisionByZero));
        assert_eq!(r(-2, -4), r(1, 2));
        assert_eq!(r(3, -6).to_string(), "-1/2");
    }

    #[test]
    fn rational_parsing() {
        assert_eq!("1/4".parse::<Rational>().unwrap(), r(1, 4));
        assert_eq!("0.25".parse::<Rational>().unwrap(), r(1, 4));
        assert_eq!("-0.5".parse::<Rational>().unwrap(), r(-1, 2));
        assert_eq!("3".parse::<Rational>().unwrap(), r(3, 1));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("abc".parse::<Rational>().is_err());
        let json = serde_json::to_string(&r(9, 8)).unwrap();
        assert_eq!(json, "\"9/8\"");
        assert_eq!(serde_json::from_str::<Rational>(&json).unwrap(), r(9, 8));
    }

    proptest::proptest! {
        #[test]
        fn rationals_stay_normalized(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
            use num_integer::Integer;
            for x in [r(a, b) + r(c, d), r(a, b) * r(c, d), r(a, b) - r(c, d)] {
                proptest::prop_assert!(x.denom().is_positive());
                proptest::prop_assert!(x.numer().gcd(x.denom()).is_one());
            }
        }
    }
}
