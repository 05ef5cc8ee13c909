//! Rigorous real intervals with outward rounding.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::dyadic::{Dyadic, Rounding};
use crate::error::{Error, Result};

/// A closed interval `[lo, hi]` guaranteed to contain some real value.
///
/// Every operation rounds `lo` down and `hi` up at `precision_bits`
/// significant bits, so an enclosure of the inputs yields an enclosure of the
/// exact result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealEnclosure {
    lo: Dyadic,
    hi: Dyadic,
    precision_bits: u32,
}

impl RealEnclosure {
    /// # Panics
    ///
    /// Panics if `lo > hi`.
    pub fn new(lo: Dyadic, hi: Dyadic, precision_bits: u32) -> Self {
        assert!(lo <= hi, "enclosure with lo > hi");
        RealEnclosure {
            lo,
            hi,
            precision_bits,
        }
    }

    /// The degenerate interval holding exactly `v`.
    pub fn point(v: Dyadic, precision_bits: u32) -> Self {
        RealEnclosure {
            lo: v.clone(),
            hi: v,
            precision_bits,
        }
    }

    pub fn from_int(v: i64, precision_bits: u32) -> Self {
        Self::point(Dyadic::from_int(v), precision_bits)
    }

    pub fn from_bigint(v: &BigInt, precision_bits: u32) -> Self {
        Self::point(Dyadic::from_bigint(v.clone()), precision_bits)
    }

    pub fn from_rational(r: &BigRational, precision_bits: u32) -> Self {
        RealEnclosure {
            lo: Dyadic::from_rational(r, precision_bits, Rounding::Down),
            hi: Dyadic::from_rational(r, precision_bits, Rounding::Up),
            precision_bits,
        }
    }

    /// Enclosure of `sqrt(v)` for a non-negative integer `v`.
    pub fn sqrt_of_int(v: u64, precision_bits: u32) -> Self {
        let d = Dyadic::from_bigint(BigInt::from(v));
        RealEnclosure {
            lo: d.sqrt(precision_bits, Rounding::Down),
            hi: d.sqrt(precision_bits, Rounding::Up),
            precision_bits,
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn with_precision(mut self, precision_bits: u32) -> Self {
        self.precision_bits = precision_bits;
        self
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    /// Midpoint, exact.
    pub fn midpoint(&self) -> Dyadic {
        (&self.lo + &self.hi).mul_pow2(-1)
    }

    /// Half the width, exact.
    pub fn radius(&self) -> Dyadic {
        self.width().mul_pow2(-1)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, v: &Dyadic) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        &self.lo.to_rational() <= r && r <= &self.hi.to_rational()
    }

    /// `other` lies entirely inside `self`.
    pub fn encloses(&self, other: &RealEnclosure) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_strictly_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// Certainly `> v`.
    pub fn is_above(&self, v: &Dyadic) -> bool {
        &self.lo > v
    }

    /// Certainly `< v`.
    pub fn is_below(&self, v: &Dyadic) -> bool {
        &self.hi < v
    }

    /// Certainly `> r` for a rational `r`.
    pub fn is_above_rational(&self, r: &BigRational) -> bool {
        &self.lo.to_rational() > r
    }

    /// Certainly `< r` for a rational `r`.
    pub fn is_below_rational(&self, r: &BigRational) -> bool {
        &self.hi.to_rational() < r
    }

    /// Certainly `< other`.
    pub fn is_less_than(&self, other: &RealEnclosure) -> bool {
        self.hi < other.lo
    }

    /// Intersection, `None` when disjoint.
    pub fn intersect(&self, other: &RealEnclosure) -> Option<RealEnclosure> {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        (lo <= hi).then(|| RealEnclosure {
            lo,
            hi,
            precision_bits: self.precision_bits.max(other.precision_bits),
        })
    }

    /// Enclosure of `|x|`.
    pub fn abs(&self) -> RealEnclosure {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            -self
        } else {
            RealEnclosure {
                lo: Dyadic::zero(),
                hi: (&self.lo.abs()).max(&self.hi).clone(),
                precision_bits: self.precision_bits,
            }
        }
    }

    /// Largest absolute value in the interval.
    pub fn magnitude(&self) -> Dyadic {
        (&self.lo.abs()).max(&self.hi.abs()).clone()
    }

    fn prec_with(&self, other: &RealEnclosure) -> u32 {
        self.precision_bits.max(other.precision_bits)
    }

    fn rounded(lo: Dyadic, hi: Dyadic, prec: u32) -> RealEnclosure {
        RealEnclosure {
            lo: lo.round(prec, Rounding::Down),
            hi: hi.round(prec, Rounding::Up),
            precision_bits: prec,
        }
    }

    pub fn add(&self, other: &RealEnclosure) -> RealEnclosure {
        Self::rounded(
            &self.lo + &other.lo,
            &self.hi + &other.hi,
            self.prec_with(other),
        )
    }

    pub fn sub(&self, other: &RealEnclosure) -> RealEnclosure {
        Self::rounded(
            &self.lo - &other.hi,
            &self.hi - &other.lo,
            self.prec_with(other),
        )
    }

    pub fn mul(&self, other: &RealEnclosure) -> RealEnclosure {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().expect("four products").clone();
        let hi = products.iter().max().expect("four products").clone();
        Self::rounded(lo, hi, self.prec_with(other))
    }

    /// Multiply by an exact integer.
    pub fn scale(&self, factor: i64) -> RealEnclosure {
        self.mul(&RealEnclosure::from_int(factor, self.precision_bits))
    }

    pub fn add_int(&self, v: i64) -> RealEnclosure {
        self.add(&RealEnclosure::from_int(v, self.precision_bits))
    }

    /// Interval quotient; fails when the divisor interval touches zero.
    pub fn div(&self, other: &RealEnclosure) -> Result<RealEnclosure> {
        if other.contains_zero() {
            return Err(Error::DivisionByZeroInterval);
        }
        let prec = self.prec_with(other);
        let pairs = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let lo = pairs
            .iter()
            .map(|(a, b)| a.div(b, prec, Rounding::Down))
            .min()
            .expect("four quotients");
        let hi = pairs
            .iter()
            .map(|(a, b)| a.div(b, prec, Rounding::Up))
            .max()
            .expect("four quotients");
        Ok(RealEnclosure {
            lo,
            hi,
            precision_bits: prec,
        })
    }

    pub fn recip(&self) -> Result<RealEnclosure> {
        RealEnclosure::from_int(1, self.precision_bits).div(self)
    }

    /// Enclosure of `x^e` for a non-negative integer exponent.
    pub fn powu(&self, e: u64) -> RealEnclosure {
        let prec = self.precision_bits;
        if e == 0 {
            return RealEnclosure::from_int(1, prec);
        }
        if !self.lo.is_negative() {
            return RealEnclosure {
                lo: self.lo.pow_nonneg(e, prec, Rounding::Down),
                hi: self.hi.pow_nonneg(e, prec, Rounding::Up),
                precision_bits: prec,
            };
        }
        if !self.hi.is_positive() {
            let p = (-self).powu(e);
            return if e % 2 == 0 { p } else { -&p };
        }
        // Interval straddles zero.
        let top = self.magnitude().pow_nonneg(e, prec, Rounding::Up);
        if e % 2 == 0 {
            RealEnclosure {
                lo: Dyadic::zero(),
                hi: top,
                precision_bits: prec,
            }
        } else {
            RealEnclosure {
                lo: -self.lo.abs().pow_nonneg(e, prec, Rounding::Up),
                hi: self.hi.pow_nonneg(e, prec, Rounding::Up),
                precision_bits: prec,
            }
        }
    }

    /// Enclosure of `x^e` for any integer exponent.
    pub fn powi(&self, e: i64) -> Result<RealEnclosure> {
        if e >= 0 {
            Ok(self.powu(e as u64))
        } else {
            self.powu(e.unsigned_abs()).recip()
        }
    }

    /// The unique integer `v` with `x + 1/2` in `[v, v + 1)` for every `x` in
    /// the interval, if the interval does not straddle a half-integer.
    pub fn round_half_up(&self) -> Option<BigInt> {
        let half = Dyadic::pow2(-1);
        let lo = (&self.lo + &half).floor();
        let hi = (&self.hi + &half).floor();
        (lo == hi).then_some(lo)
    }

    /// Distance from the interval to the nearest of `v - 1/2` and `v + 1/2`;
    /// positive exactly when both boundaries are excluded.
    pub fn half_integer_gap(&self, v: &BigInt) -> Dyadic {
        let half = Dyadic::pow2(-1);
        let center = Dyadic::from_bigint(v.clone());
        let below = &self.lo - &(&center - &half);
        let above = &(&center + &half) - &self.hi;
        below.min(above)
    }

    pub fn to_f64(&self) -> f64 {
        self.midpoint().to_f64()
    }

    pub fn to_rational_bounds(&self) -> (BigRational, BigRational) {
        (self.lo.to_rational(), self.hi.to_rational())
    }

    /// True if the enclosure holds exactly the rational `r` as a single point.
    pub fn is_exactly(&self, r: &BigRational) -> bool {
        self.is_point() && &self.lo.to_rational() == r
    }
}

impl std::ops::Neg for &RealEnclosure {
    type Output = RealEnclosure;
    fn neg(self) -> RealEnclosure {
        RealEnclosure {
            lo: -&self.hi,
            hi: -&self.lo,
            precision_bits: self.precision_bits,
        }
    }
}

impl fmt::Display for RealEnclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let decimals = f.precision().unwrap_or(6);
        write!(
            f,
            "{}±{}",
            self.midpoint().to_decimal_string(decimals),
            format_radius(&self.radius())
        )
    }
}

/// Render a non-negative bound as one significant digit, rounded up, in
/// `de±x` form (`0` for an exact value).
pub fn format_radius(r: &Dyadic) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let r = r.abs().to_rational();
    let ten = BigRational::from_integer(BigInt::from(10));
    // Estimate the decimal exponent from the binary one, then correct.
    let bits = r.numer().bits() as i64 - r.denom().bits() as i64;
    let mut e = ((bits as f64) * std::f64::consts::LOG10_2).floor() as i64 - 1;
    let pow10 = |e: i64| -> BigRational {
        if e >= 0 {
            num_traits::pow(ten.clone(), e as usize)
        } else {
            num_traits::pow(ten.clone(), (-e) as usize).recip()
        }
    };
    while pow10(e + 1) <= r {
        e += 1;
    }
    while pow10(e) > r {
        e -= 1;
    }
    let scaled = &r / pow10(e);
    let mut digit = scaled.ceil().to_integer();
    if digit > BigInt::from(9) {
        digit = BigInt::one();
        e += 1;
    }
    format!("{digit}e{e}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn iv(lo: f64, hi: f64) -> RealEnclosure {
        RealEnclosure::new(
            Dyadic::from_f64(lo).unwrap(),
            Dyadic::from_f64(hi).unwrap(),
            64,
        )
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_enclosure_contains_value() {
        let third = q(1, 3);
        let e = RealEnclosure::from_rational(&third, 80);
        assert!(e.contains_rational(&third));
        assert!(!e.is_point());
        assert!(e.width() <= Dyadic::pow2(-80));
    }

    #[test]
    fn division_by_interval_containing_zero_fails() {
        assert!(matches!(
            iv(1.0, 2.0).div(&iv(-1.0, 1.0)),
            Err(Error::DivisionByZeroInterval)
        ));
    }

    #[test]
    fn even_power_of_straddling_interval() {
        let p = iv(-3.0, 2.0).powu(2);
        assert_eq!(p.lo(), &Dyadic::zero());
        assert_eq!(p.hi(), &Dyadic::from_int(9));
        let p = iv(-3.0, -2.0).powu(3);
        assert_eq!(p, iv(-27.0, -8.0));
    }

    #[test]
    fn rounding_certification() {
        let e = iv(31.7, 31.8);
        assert_eq!(e.round_half_up(), Some(BigInt::from(32)));
        let gap = e.half_integer_gap(&BigInt::from(32));
        assert!(gap.is_positive());
        assert_eq!(iv(2.4, 2.6).round_half_up(), None);
    }

    #[test]
    fn radius_formatting() {
        assert_eq!(format_radius(&Dyadic::zero()), "0");
        assert_eq!(format_radius(&Dyadic::from_f64(0.00031).unwrap()), "4e-4");
        assert_eq!(format_radius(&Dyadic::from_int(1)), "1e0");
        assert_eq!(format_radius(&Dyadic::from_f64(9.5).unwrap()), "1e1");
        assert_eq!(format_radius(&Dyadic::pow2(-200)), "7e-61");
    }

    fn arb_interval() -> impl Strategy<Value = (f64, f64)> {
        (-100.0f64..100.0, 0.0f64..10.0).prop_map(|(a, w)| (a, a + w))
    }

    proptest! {
        // Every sample from the operand intervals maps into the result.
        #[test]
        fn arithmetic_is_inclusion_monotone(
            (alo, ahi) in arb_interval(),
            (blo, bhi) in arb_interval(),
            s in 0.0f64..1.0,
            t in 0.0f64..1.0,
        ) {
            let (a, b) = (iv(alo, ahi), iv(blo, bhi));
            let x = Dyadic::from_f64(alo + s * (ahi - alo)).unwrap();
            let y = Dyadic::from_f64(blo + t * (bhi - blo)).unwrap();
            prop_assume!(a.contains(&x) && b.contains(&y));
            prop_assert!(a.add(&b).contains(&(&x + &y)));
            prop_assert!(a.sub(&b).contains(&(&x - &y)));
            prop_assert!(a.mul(&b).contains(&(&x * &y)));
            prop_assert!(a.powu(3).contains(&(&(&x * &x) * &x)));
            if let Ok(quot) = a.div(&b) {
                let exact = x.to_rational() / y.to_rational();
                prop_assert!(quot.contains_rational(&exact));
            }
        }
    }
}
