//! Multi-precision complex numbers, rounded to nearest.
//!
//! Unlike [`RealEnclosure`](crate::RealEnclosure) these carry no rigorous
//! bounds. They back the non-dominant roots, where accuracy is tracked through
//! polynomial residuals instead.

use std::fmt;

use num_complex::Complex64;

use crate::dyadic::{Dyadic, Rounding};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigComplex {
    pub re: Dyadic,
    pub im: Dyadic,
    prec: u32,
}

impl BigComplex {
    pub fn new(re: Dyadic, im: Dyadic, prec: u32) -> Self {
        BigComplex {
            re: re.round(prec, Rounding::Nearest),
            im: im.round(prec, Rounding::Nearest),
            prec,
        }
    }

    pub fn real(re: Dyadic, prec: u32) -> Self {
        Self::new(re, Dyadic::zero(), prec)
    }

    pub fn from_int(v: i64, prec: u32) -> Self {
        Self::real(Dyadic::from_int(v), prec)
    }

    pub fn from_complex64(z: Complex64, prec: u32) -> Self {
        Self::new(
            Dyadic::from_f64(z.re).unwrap_or_default(),
            Dyadic::from_f64(z.im).unwrap_or_default(),
            prec,
        )
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn with_precision(&self, prec: u32) -> Self {
        Self::new(self.re.clone(), self.im.clone(), prec)
    }

    pub fn conj(&self) -> Self {
        BigComplex {
            re: self.re.clone(),
            im: -&self.im,
            prec: self.prec,
        }
    }

    pub fn neg(&self) -> Self {
        BigComplex {
            re: -&self.re,
            im: -&self.im,
            prec: self.prec,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(&self.re + &o.re, &self.im + &o.im, self.prec.max(o.prec))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(&self.re - &o.re, &self.im - &o.im, self.prec.max(o.prec))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let re = &(&self.re * &o.re) - &(&self.im * &o.im);
        let im = &(&self.re * &o.im) + &(&self.im * &o.re);
        Self::new(re, im, self.prec.max(o.prec))
    }

    pub fn scale(&self, v: i64) -> Self {
        let f = Dyadic::from_int(v);
        Self::new(&self.re * &f, &self.im * &f, self.prec)
    }

    pub fn norm_sqr(&self) -> Dyadic {
        (&(&self.re * &self.re) + &(&self.im * &self.im)).round(self.prec, Rounding::Nearest)
    }

    pub fn abs(&self) -> Dyadic {
        self.norm_sqr().sqrt(self.prec, Rounding::Nearest)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// `None` when dividing by zero.
    pub fn div(&self, o: &Self) -> Option<Self> {
        let prec = self.prec.max(o.prec);
        let den = &(&o.re * &o.re) + &(&o.im * &o.im);
        if den.is_zero() {
            return None;
        }
        let num = self.mul(&o.conj());
        Some(BigComplex {
            re: num.re.div(&den, prec, Rounding::Nearest),
            im: num.im.div(&den, prec, Rounding::Nearest),
            prec,
        })
    }

    pub fn recip(&self) -> Option<Self> {
        Self::from_int(1, self.prec).div(self)
    }

    pub fn powu(&self, e: u64) -> Self {
        let mut result = Self::from_int(1, self.prec);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn powi(&self, e: i64) -> Option<Self> {
        if e >= 0 {
            Some(self.powu(e as u64))
        } else {
            self.powu(e.unsigned_abs()).recip()
        }
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = f.precision().unwrap_or(6);
        let im = self.im.to_decimal_string(d);
        if let Some(mag) = im.strip_prefix('-') {
            write!(f, "{}-{}i", self.re.to_decimal_string(d), mag)
        } else {
            write!(f, "{}+{}i", self.re.to_decimal_string(d), im)
        }
    }
}

/// A complex approximation together with a bound on how far it may be from
/// the quantity it stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexApprox {
    pub value: BigComplex,
    pub residual_bound: Dyadic,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> BigComplex {
        BigComplex::from_complex64(Complex64::new(re, im), 128)
    }

    #[test]
    fn field_operations_match_f64() {
        let (a, b) = (c(1.5, -2.0), c(0.25, 3.0));
        let za = Complex64::new(1.5, -2.0);
        let zb = Complex64::new(0.25, 3.0);
        assert!((a.mul(&b).to_complex64() - za * zb).norm() < 1e-14);
        assert!((a.div(&b).unwrap().to_complex64() - za / zb).norm() < 1e-14);
        assert!((a.powi(-3).unwrap().to_complex64() - za.powi(-3)).norm() < 1e-14);
        assert!((a.abs().to_f64() - za.norm()).abs() < 1e-14);
    }

    #[test]
    fn division_by_zero_is_none() {
        assert!(c(1.0, 1.0).div(&c(0.0, 0.0)).is_none());
    }

    #[test]
    fn display_signs() {
        assert_eq!(format!("{:.2}", c(1.0, -0.5)), "1.00-0.50i");
        assert_eq!(format!("{:.1}", c(-1.0, 0.25)), "-1.0+0.3i");
    }
}
