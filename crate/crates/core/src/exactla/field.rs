use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Largest supported characteristic. Keeps products of residues inside `u64`.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

/// The ground field: a prime field F_p or the rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroundField {
    Prime(u64),
    Rationals,
}

/// A field element in canonical form.
///
/// Residues are kept in `0..p`; rationals are normalized fractions. Two
/// scalars of the same field are equal iff they are structurally equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Mod(u64),
    Rat(Box<BigRational>),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Mod(v) => *v == 0,
            Scalar::Rat(r) => r.is_zero(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Mod(v) => write!(f, "{v}"),
            Scalar::Rat(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

impl GroundField {
    pub fn prime(p: u64) -> Result<Self> {
        if p > MAX_PRIME {
            return Err(Error::Unsupported(format!(
                "characteristic {p} exceeds {MAX_PRIME}"
            )));
        }
        if !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        Ok(GroundField::Prime(p))
    }

    pub fn is_prime_field(&self) -> bool {
        matches!(self, GroundField::Prime(_))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            GroundField::Prime(p) => *p,
            GroundField::Rationals => 0,
        }
    }

    /// Number of elements, `None` for the rationals.
    pub fn order(&self) -> Option<u64> {
        match self {
            GroundField::Prime(p) => Some(*p),
            GroundField::Rationals => None,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            GroundField::Prime(_) => Scalar::Mod(0),
            GroundField::Rationals => Scalar::Rat(Box::new(BigRational::zero())),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            GroundField::Prime(_) => Scalar::Mod(1),
            GroundField::Rationals => Scalar::Rat(Box::new(BigRational::one())),
        }
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            GroundField::Prime(p) => Scalar::Mod(v.rem_euclid(*p as i64) as u64),
            GroundField::Rationals => Scalar::Rat(Box::new(BigRational::from_integer(v.into()))),
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match self {
            GroundField::Prime(p) => {
                let r = v.mod_floor_u64(*p);
                Scalar::Mod(r)
            }
            GroundField::Rationals => Scalar::Rat(Box::new(BigRational::from_integer(v.clone()))),
        }
    }

    /// `num / den` in this field; fails when `den` vanishes in the field.
    pub fn from_fraction(&self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        let n = self.from_bigint(num);
        let d = self.from_bigint(den);
        let inv = self
            .inv(&d)
            .ok_or_else(|| Error::invalid(format!("denominator {den} vanishes in the field")))?;
        Ok(self.mul(&n, &inv))
    }

    /// Element with index `i` in the canonical enumeration `0, 1, ..., p-1`.
    pub fn element(&self, i: u64) -> Scalar {
        match self {
            GroundField::Prime(p) => Scalar::Mod(i % p),
            GroundField::Rationals => self.from_i64(i as i64),
        }
    }

    /// Inverse of [`GroundField::element`] on prime fields.
    pub fn index_of(&self, s: &Scalar) -> u64 {
        match s {
            Scalar::Mod(v) => *v,
            Scalar::Rat(_) => panic!("index_of on a rational scalar"),
        }
    }

    pub fn is_zero(&self, s: &Scalar) -> bool {
        match s {
            Scalar::Mod(v) => *v == 0,
            Scalar::Rat(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self, s: &Scalar) -> bool {
        match s {
            Scalar::Mod(v) => *v == 1,
            Scalar::Rat(q) => q.is_one(),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (GroundField::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod((x + y) % p),
            (GroundField::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => {
                Scalar::Rat(Box::new(x.as_ref() + y.as_ref()))
            }
            _ => panic!("scalar from a different field"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (GroundField::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => {
                Scalar::Mod((x + p - y) % p)
            }
            (GroundField::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => {
                Scalar::Rat(Box::new(x.as_ref() - y.as_ref()))
            }
            _ => panic!("scalar from a different field"),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (GroundField::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod(x * y % p),
            (GroundField::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => {
                Scalar::Rat(Box::new(x.as_ref() * y.as_ref()))
            }
            _ => panic!("scalar from a different field"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (GroundField::Prime(p), Scalar::Mod(x)) => Scalar::Mod((p - x) % p),
            (GroundField::Rationals, Scalar::Rat(x)) => Scalar::Rat(Box::new(-x.as_ref())),
            _ => panic!("scalar from a different field"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if self.is_zero(a) {
            return None;
        }
        Some(match (self, a) {
            (GroundField::Prime(p), Scalar::Mod(x)) => Scalar::Mod(pow_mod(*x, p - 2, *p)),
            (GroundField::Rationals, Scalar::Rat(x)) => Scalar::Rat(Box::new(x.recip())),
            _ => panic!("scalar from a different field"),
        })
    }

    /// `(-1)^k`.
    pub fn sign(&self, k: i64) -> Scalar {
        if k.rem_euclid(2) == 0 {
            self.one()
        } else {
            self.from_i64(-1)
        }
    }

    pub fn zero_vec(&self, n: usize) -> Vec<Scalar> {
        vec![self.zero(); n]
    }

    pub fn unit_vec(&self, n: usize, i: usize) -> Vec<Scalar> {
        let mut v = self.zero_vec(n);
        v[i] = self.one();
        v
    }

    pub fn is_zero_vec(&self, v: &[Scalar]) -> bool {
        v.iter().all(|s| self.is_zero(s))
    }

    /// `y += a * x`.
    pub fn axpy(&self, y: &mut [Scalar], a: &Scalar, x: &[Scalar]) {
        assert_eq!(y.len(), x.len());
        if self.is_zero(a) {
            return;
        }
        for (yi, xi) in y.iter_mut().zip(x) {
            if !self.is_zero(xi) {
                *yi = self.add(yi, &self.mul(a, xi));
            }
        }
    }

    pub fn add_vec(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        x.iter().zip(y).map(|(a, b)| self.add(a, b)).collect()
    }

    pub fn sub_vec(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        x.iter().zip(y).map(|(a, b)| self.sub(a, b)).collect()
    }

    pub fn scale_vec(&self, a: &Scalar, x: &[Scalar]) -> Vec<Scalar> {
        x.iter().map(|b| self.mul(a, b)).collect()
    }

    /// Whether `s` is a canonical element of this field.
    pub fn check(&self, s: &Scalar) -> bool {
        match (self, s) {
            (GroundField::Prime(p), Scalar::Mod(v)) => v < p,
            (GroundField::Rationals, Scalar::Rat(_)) => true,
            _ => false,
        }
    }

    /// Parses `"a"` or `"a/b"` with integer `a`, `b`.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar> {
        let text = text.trim();
        let parse_int = |t: &str| -> Result<BigInt> {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::invalid(format!("bad scalar literal {text:?}")))
        };
        match text.split_once('/') {
            Some((n, d)) => self.from_fraction(&parse_int(n)?, &parse_int(d)?),
            None => Ok(self.from_bigint(&parse_int(text)?)),
        }
    }
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, p: u64) -> u64;
}

impl ModFloorU64 for BigInt {
    fn mod_floor_u64(&self, p: u64) -> u64 {
        let m = BigInt::from(p);
        let mut r = self % &m;
        if r.is_negative() {
            r += &m;
        }
        r.to_string().parse().expect("residue fits in u64")
    }
}

impl fmt::Display for GroundField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroundField::Prime(p) => write!(f, "F_{p}"),
            GroundField::Rationals => write!(f, "Q"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = GroundField::prime(7).unwrap();
        let a = f.from_i64(-3);
        assert_eq!(a, Scalar::Mod(4));
        assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
        assert_eq!(f.neg(&f.zero()), f.zero());
    }

    #[test]
    fn rejects_composite() {
        assert!(GroundField::prime(9).is_err());
        assert!(GroundField::prime(1).is_err());
    }

    #[test]
    fn rational_parsing_normalizes() {
        let q = GroundField::Rationals;
        assert_eq!(q.parse_scalar("6/4").unwrap(), q.parse_scalar("3/2").unwrap());
        assert_eq!(q.parse_scalar("-6/-4").unwrap().to_string(), "3/2");
        let f3 = GroundField::prime(3).unwrap();
        assert_eq!(f3.parse_scalar("1/2").unwrap(), Scalar::Mod(2));
        assert!(f3.parse_scalar("1/3").is_err());
    }
}
