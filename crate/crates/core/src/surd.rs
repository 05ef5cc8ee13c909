//! Exact numbers of the form `a + b sqrt(d)` with rational `a`, `b`.
//!
//! Enough to state the second-order counterexamples (scaled Fibonacci, the
//! `2 G_{n-1} + 4 G_{n-2}` sequence) exactly, and to round their powers
//! without guessing a precision.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::enclosure::RealEnclosure;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSurd {
    rational: BigRational,
    surd: BigRational,
    radicand: u64,
}

fn is_square(d: u64) -> bool {
    let r = (d as f64).sqrt() as u64;
    (r.saturating_sub(1)..=r + 1).any(|s| s * s == d)
}

impl QuadraticSurd {
    /// `a + b sqrt(d)`.
    pub fn new(rational: BigRational, surd: BigRational, radicand: u64) -> Self {
        if surd.is_zero() || radicand == 0 {
            return Self::from_rational(rational);
        }
        QuadraticSurd {
            rational,
            surd,
            radicand,
        }
    }

    pub fn from_rational(r: BigRational) -> Self {
        QuadraticSurd {
            rational: r,
            surd: BigRational::zero(),
            radicand: 1,
        }
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_rational(BigRational::from_integer(v.into()))
    }

    /// Parse a plain decimal such as `-0.7236067977` or `12` exactly.
    pub fn parse_decimal(s: &str) -> Option<Self> {
        let s = s.trim();
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
            return None;
        }
        let digits = format!("{int_part}{frac_part}");
        let numer: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
        let denom = num_traits::pow(BigInt::from(10), frac_part.len());
        let r = BigRational::new(if neg { -numer } else { numer }, denom);
        Some(Self::from_rational(r))
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    pub fn surd_part(&self) -> &BigRational {
        &self.surd
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    /// Rational-valued (no irrational part, or a square radicand).
    pub fn is_rational(&self) -> bool {
        self.surd.is_zero() || is_square(self.radicand)
    }

    fn as_rational(&self) -> Option<BigRational> {
        if self.surd.is_zero() {
            Some(self.rational.clone())
        } else if is_square(self.radicand) {
            let r = (self.radicand as f64).sqrt().round() as i64;
            Some(&self.rational + &self.surd * BigRational::from_integer(r.into()))
        } else {
            None
        }
    }

    fn field(&self, other: &Self) -> Result<u64> {
        match (self.surd.is_zero(), other.surd.is_zero()) {
            (true, true) => Ok(1),
            (true, false) => Ok(other.radicand),
            (false, true) => Ok(self.radicand),
            (false, false) if self.radicand == other.radicand => Ok(self.radicand),
            _ => Err(Error::IncompatibleSurds(self.radicand, other.radicand)),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let d = self.field(other)?;
        let dr = BigRational::from_integer(d.into());
        let rational = &self.rational * &other.rational + &self.surd * &other.surd * dr;
        let surd = &self.rational * &other.surd + &self.surd * &other.rational;
        Ok(Self::new(rational, surd, d))
    }

    /// `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        // (a + b s)^-1 = (a - b s) / (a^2 - b^2 d)
        let norm = &self.rational * &self.rational
            - &self.surd * &self.surd * BigRational::from_integer(self.radicand.into());
        if norm.is_zero() {
            return self.as_rational().filter(|r| !r.is_zero()).map(|r| Self::from_rational(r.recip()));
        }
        Some(Self::new(
            &self.rational / &norm,
            -(&self.surd / &norm),
            self.radicand,
        ))
    }

    pub fn powi(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut result = Self::from_int(1);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&b).expect("same field");
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b).expect("same field");
            }
        }
        Some(result)
    }

    pub fn enclose(&self, precision_bits: u32) -> RealEnclosure {
        let a = RealEnclosure::from_rational(&self.rational, precision_bits);
        if self.surd.is_zero() {
            return a;
        }
        let b = RealEnclosure::from_rational(&self.surd, precision_bits);
        a.add(&b.mul(&RealEnclosure::sqrt_of_int(self.radicand, precision_bits)))
    }

    pub fn to_f64(&self) -> f64 {
        self.enclose(64).to_f64()
    }

    /// `floor(x + 1/2)`, exactly.
    ///
    /// Rational values are rounded in rational arithmetic; irrational ones can
    /// never sit on a half-integer, so an enclosure of increasing precision
    /// eventually decides.
    pub fn round_half_up(&self) -> BigInt {
        if let Some(r) = self.as_rational() {
            return (r + BigRational::new(BigInt::one(), BigInt::from(2))).floor().to_integer();
        }
        let magnitude = self.rational.abs() + self.surd.abs() * BigRational::from_integer(self.radicand.into());
        let bits = magnitude.numer().bits().saturating_sub(magnitude.denom().bits()) as u32;
        let mut prec = bits + 64;
        loop {
            if let Some(v) = self.enclose(prec).round_half_up() {
                return v;
            }
            prec *= 2;
        }
    }

    pub fn is_greater_than_one(&self) -> bool {
        if let Some(r) = self.as_rational() {
            return r > BigRational::one();
        }
        let mut prec = 64;
        loop {
            let e = self.enclose(prec);
            if e.is_above_rational(&BigRational::one()) {
                return true;
            }
            if e.is_below_rational(&BigRational::one()) {
                return false;
            }
            prec *= 2;
        }
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.surd.is_zero() {
            write!(f, "{}", self.rational)
        } else if self.rational.is_zero() {
            write!(f, "{}*sqrt({})", self.surd, self.radicand)
        } else {
            write!(f, "{} + {}*sqrt({})", self.rational, self.surd, self.radicand)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn phi() -> QuadraticSurd {
        QuadraticSurd::new(q(1, 2), q(1, 2), 5)
    }

    #[test]
    fn golden_ratio_powers_are_lucas_halves() {
        // phi^n = (L_n + F_n sqrt 5) / 2
        let p = phi().powi(10).unwrap();
        assert_eq!(p.rational_part(), &q(123, 2));
        assert_eq!(p.surd_part(), &q(55, 2));
        let inv = phi().powi(-1).unwrap();
        assert_eq!(inv, QuadraticSurd::new(q(-1, 2), q(1, 2), 5));
    }

    #[test]
    fn rounding() {
        assert_eq!(QuadraticSurd::from_rational(q(5, 2)).round_half_up(), BigInt::from(3));
        assert_eq!(QuadraticSurd::from_rational(q(-5, 2)).round_half_up(), BigInt::from(-2));
        // sqrt(5)/5 * phi^20 is within 1e-4 of F_20 = 6765.
        let c = QuadraticSurd::new(q(0, 1), q(1, 5), 5);
        let v = c.mul(&phi().powi(20).unwrap()).unwrap();
        assert_eq!(v.round_half_up(), BigInt::from(6765));
        // A square radicand is rational.
        assert_eq!(QuadraticSurd::new(q(1, 2), q(1, 1), 4).round_half_up(), BigInt::from(3));
    }

    #[test]
    fn parse_decimals() {
        let v = QuadraticSurd::parse_decimal("0.7236067977").unwrap();
        assert_eq!(v.rational_part(), &q(7236067977, 10_000_000_000));
        assert_eq!(QuadraticSurd::parse_decimal("-12").unwrap(), QuadraticSurd::from_int(-12));
        assert_eq!(QuadraticSurd::parse_decimal(".5").unwrap().rational_part(), &q(1, 2));
        assert!(QuadraticSurd::parse_decimal("1e5").is_none());
        assert!(QuadraticSurd::parse_decimal("").is_none());
        assert!(QuadraticSurd::parse_decimal("-").is_none());
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let a = QuadraticSurd::new(q(0, 1), q(1, 1), 2);
        let b = QuadraticSurd::new(q(0, 1), q(1, 1), 3);
        assert_eq!(a.mul(&b), Err(Error::IncompatibleSurds(2, 3)));
    }

    #[test]
    fn comparison_with_one() {
        assert!(phi().is_greater_than_one());
        assert!(!QuadraticSurd::new(q(1, 2), q(-1, 2), 5).is_greater_than_one());
        assert!(!QuadraticSurd::from_int(1).is_greater_than_one());
    }
}
