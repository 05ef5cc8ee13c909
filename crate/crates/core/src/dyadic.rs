//! Arbitrary-precision dyadic numbers `mantissa * 2^exponent`.
//!
//! Addition, subtraction and multiplication are exact. Everything that can
//! produce a non-dyadic result (division, square roots, conversion from
//! rationals) takes an explicit precision and a [`Rounding`] direction, which
//! is what the interval layer builds its outward-rounding discipline on.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rounding direction for inexact operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    /// Toward negative infinity.
    Down,
    /// Toward positive infinity.
    Up,
    /// To nearest.
    Nearest,
}

impl Rounding {
    /// The direction that bounds from the other side.
    pub fn reversed(self) -> Self {
        match self {
            Rounding::Down => Rounding::Up,
            Rounding::Up => Rounding::Down,
            Rounding::Nearest => Rounding::Nearest,
        }
    }
}

/// A binary floating-point number with unbounded mantissa and exponent.
///
/// The representation is normalized: the mantissa is odd, or the value is
/// zero with exponent 0. Structural equality is therefore numeric equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

/// Divide `m` by `2^shift` with the requested rounding.
fn shift_right_rounded(m: &BigInt, shift: u64, rounding: Rounding) -> BigInt {
    if shift == 0 {
        return m.clone();
    }
    match rounding {
        // BigInt's `>>` rounds toward negative infinity.
        Rounding::Down => m >> shift,
        Rounding::Up => -((-m) >> shift),
        Rounding::Nearest => {
            let half = BigInt::one() << (shift - 1);
            if m.is_negative() {
                -((-m + half) >> shift)
            } else {
                (m + half) >> shift
            }
        }
    }
}

fn div_rounded(num: &BigInt, den: &BigInt, rounding: Rounding) -> BigInt {
    let (q, r) = num.div_mod_floor(den);
    if r.is_zero() {
        return q;
    }
    match rounding {
        Rounding::Down => q,
        Rounding::Up => q + 1,
        // floor(num/den + 1/2)
        Rounding::Nearest => (BigInt::from(2) * num + den).div_floor(&(BigInt::from(2) * den)),
    }
}

impl Dyadic {
    /// Build `mantissa * 2^exponent`.
    pub fn new(mantissa: BigInt, exponent: i64) -> Self {
        if mantissa.is_zero() {
            return Self::zero();
        }
        let tz = mantissa.trailing_zeros().unwrap_or(0);
        if tz == 0 {
            Dyadic { mantissa, exponent }
        } else {
            Dyadic {
                mantissa: mantissa >> tz,
                exponent: exponent + tz as i64,
            }
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mantissa: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        Self::new(BigInt::from(v), 0)
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Self::new(v, 0)
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Self {
        Dyadic {
            mantissa: BigInt::one(),
            exponent: e,
        }
    }

    /// Exact conversion; every finite `f64` is dyadic. Returns `None` for
    /// NaN and infinities.
    pub fn from_f64(v: f64) -> Option<Self> {
        if !v.is_finite() {
            return None;
        }
        if v == 0.0 {
            return Some(Self::zero());
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Some(Self::new(BigInt::from(m) * sign, e))
    }

    /// Round a rational to `prec` significant bits.
    pub fn from_rational(r: &BigRational, prec: u32, rounding: Rounding) -> Self {
        Self::from_bigint(r.numer().clone()).div(
            &Self::from_bigint(r.denom().clone()),
            prec,
            rounding,
        )
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa.is_positive()
    }

    pub fn signum(&self) -> i32 {
        match self.mantissa.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
        }
    }

    /// Multiply by `2^e` (exact).
    pub fn mul_pow2(&self, e: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Dyadic {
            mantissa: self.mantissa.clone(),
            exponent: self.exponent + e,
        }
    }

    /// Number of significant bits in the mantissa.
    pub fn significant_bits(&self) -> u64 {
        self.mantissa.bits()
    }

    /// An exponent `e` with `|self| < 2^e`. Zero reports `i64::MIN`.
    pub fn magnitude_bound(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.mantissa.bits() as i64 + self.exponent
        }
    }

    /// Round to at most `prec` significant bits.
    pub fn round(&self, prec: u32, rounding: Rounding) -> Self {
        let bits = self.mantissa.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let shift = bits - prec as u64;
        let m = shift_right_rounded(&self.mantissa, shift, rounding);
        Self::new(m, self.exponent + shift as i64)
    }

    /// `self / other` rounded to `prec` significant bits.
    ///
    /// # Panics
    ///
    /// Panics on division by zero.
    pub fn div(&self, other: &Self, prec: u32, rounding: Rounding) -> Self {
        assert!(!other.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Self::zero();
        }
        // Enough extra bits that the integer quotient carries prec + 2 bits.
        let shift = (prec as i64 + 2 + other.mantissa.bits() as i64
            - self.mantissa.bits() as i64)
            .max(0);
        let num = &self.mantissa << shift as u64;
        let q = div_rounded(&num, &other.mantissa, rounding);
        Self::new(q, self.exponent - other.exponent - shift).round(prec, rounding)
    }

    /// Square root rounded to `prec` significant bits.
    ///
    /// # Panics
    ///
    /// Panics on negative input.
    pub fn sqrt(&self, prec: u32, rounding: Rounding) -> Self {
        assert!(!self.is_negative(), "square root of a negative dyadic");
        if self.is_zero() {
            return Self::zero();
        }
        let want = 2 * (prec as i64 + 2);
        let mut shift = (want - self.mantissa.bits() as i64).max(0);
        if (self.exponent - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let n = (&self.mantissa << shift as u64)
            .to_biguint()
            .expect("non-negative");
        let r = n.sqrt();
        let exact = &r * &r == n;
        let r = BigInt::from(r);
        let r = match rounding {
            Rounding::Down => r,
            Rounding::Up if exact => r,
            Rounding::Up => r + 1,
            Rounding::Nearest => {
                // (r + 1/2)^2 <= n  <=>  (2r + 1)^2 <= 4n
                let twice = BigInt::from(2) * &r + 1;
                if &twice * &twice <= BigInt::from(n) * 4 {
                    r + 1
                } else {
                    r
                }
            }
        };
        Self::new(r, (self.exponent - shift) / 2).round(prec, rounding)
    }

    /// `self^e` for a non-negative value, every intermediate rounded in the
    /// given direction. Monotonicity of multiplication on non-negative
    /// operands makes the result a one-sided bound.
    pub fn pow_nonneg(&self, e: u64, prec: u32, rounding: Rounding) -> Self {
        debug_assert!(!self.is_negative());
        let mut result = Self::one();
        let mut base = self.round(prec, rounding);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = (&result * &base).round(prec, rounding);
            }
            e >>= 1;
            if e > 0 {
                base = (&base * &base).round(prec, rounding);
            }
        }
        result
    }

    /// Largest integer not above `self`.
    pub fn floor(&self) -> BigInt {
        if self.exponent >= 0 {
            &self.mantissa << self.exponent as u64
        } else {
            shift_right_rounded(&self.mantissa, (-self.exponent) as u64, Rounding::Down)
        }
    }

    /// Smallest integer not below `self`.
    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exponent >= 0 {
            BigRational::from_integer(&self.mantissa << self.exponent as u64)
        } else {
            BigRational::new(
                self.mantissa.clone(),
                BigInt::one() << (-self.exponent) as u64,
            )
        }
    }

    /// Nearest `f64` (saturating to infinity, flushing tiny values to zero).
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let r = self.round(53, Rounding::Nearest);
        let m = r.mantissa.to_f64().unwrap_or(f64::NAN);
        let e = r.exponent.clamp(-2000, 2000) as i32;
        // Split the scaling so subnormal-range exponents do not underflow early.
        let half = e / 2;
        m * 2f64.powi(half) * 2f64.powi(e - half)
    }

    /// Decimal rendering with exactly `decimals` digits after the point,
    /// rounded to nearest.
    pub fn to_decimal_string(&self, decimals: usize) -> String {
        let scale = num_traits::pow(BigInt::from(10), decimals);
        let scaled = &self.mantissa * scale;
        let v = if self.exponent >= 0 {
            scaled << self.exponent as u64
        } else {
            shift_right_rounded(&scaled, (-self.exponent) as u64, Rounding::Nearest)
        };
        format_scaled_decimal(&v, decimals)
    }
}

/// Render the integer `v / 10^decimals` in plain positional notation.
pub(crate) fn format_scaled_decimal(v: &BigInt, decimals: usize) -> String {
    let neg = v.is_negative();
    let digits = v.abs().to_string();
    let body = if decimals == 0 {
        digits
    } else {
        let padded = if digits.len() <= decimals {
            format!("{}{}", "0".repeat(decimals + 1 - digits.len()), digits)
        } else {
            digits
        };
        let (int_part, frac_part) = padded.split_at(padded.len() - decimals);
        format!("{int_part}.{frac_part}")
    };
    if neg && body.chars().any(|c| c != '0' && c != '.') {
        format!("-{body}")
    } else {
        body
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for Dyadic {
    fn from(v: i64) -> Self {
        Self::from_int(v)
    }
}

impl From<BigInt> for Dyadic {
    fn from(v: BigInt) -> Self {
        Self::from_bigint(v)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let decimals = f.precision().unwrap_or(6);
        f.write_str(&self.to_decimal_string(decimals))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        // Same sign: a cheap magnitude test first, then align exactly.
        let (ma, mb) = (self.magnitude_bound(), other.magnitude_bound());
        if ma != mb {
            let mag = ma.cmp(&mb);
            return if sa > 0 { mag } else { mag.reverse() };
        }
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - e) as u64;
        let b = &other.mantissa << (other.exponent - e) as u64;
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &'a Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exponent.min(rhs.exponent);
        let a = &self.mantissa << (self.exponent - e) as u64;
        let b = &rhs.mantissa << (rhs.exponent - e) as u64;
        Dyadic::new(a + b, e)
    }
}

impl<'a> Sub<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &'a Dyadic) -> Dyadic {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &'a Dyadic) -> Dyadic {
        Dyadic::new(&self.mantissa * &rhs.mantissa, self.exponent + rhs.exponent)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mantissa: -&self.mantissa,
            exponent: self.exponent,
        }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -&self
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $method(self, rhs: Dyadic) -> Dyadic {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);
