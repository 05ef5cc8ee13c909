//! Binet-style evaluation: the coefficient function, the full root sum and
//! the certified single-term rounding.

use num_bigint::{BigInt, BigUint};

use crate::charpoly::{all_roots, char_poly, check_order, check_precision, dominant_root, ComplexRootSet};
use crate::complex::{BigComplex, ComplexApprox};
use crate::dyadic::{Dyadic, Rounding};
use crate::enclosure::RealEnclosure;
use crate::error::{Error, Result};
use crate::exact::check_index;

/// Certified rounding gives up beyond this many bits.
pub const PRECISION_CAP: u32 = 1 << 20;

/// Bits added on top of `n` for the first certification attempt.
pub const START_PRECISION_MARGIN: u32 = 64;

/// Which closed form a coefficient was computed from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoefficientForm {
    /// `(x - 1) / (2 + (k + 1)(x - 2))`
    M,
    /// `(x^(k+1) - x^k) / (2 x^k - (k + 1))`
    SpickermanJoyner,
    /// `a^2 / ((a - s)(a - conj s))`, cubic case only.
    SpickermanK3,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoefficientEstimate {
    /// Rigorous, for the real dominant root.
    Certified(RealEnclosure),
    /// Approximate, for complex roots.
    Approximate(ComplexApprox),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientValue {
    pub k: usize,
    pub form: CoefficientForm,
    pub value: CoefficientEstimate,
    pub at_root: BigComplex,
}

/// A rounded value with its certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedInteger {
    pub value: BigUint,
    /// Distance from the enclosure to the nearer of `value ± 1/2`; always
    /// positive.
    pub proof_gap: Dyadic,
    pub precision_used: u32,
}

fn m_denominator(k: usize, x: &RealEnclosure) -> RealEnclosure {
    // 2 + (k+1)(x - 2) = (k+1) x - 2k
    x.scale(k as i64 + 1).add_int(-2 * k as i64)
}

/// Rigorous enclosure of `m(x) = (x - 1) / (2 + (k + 1)(x - 2))`.
pub fn coefficient_m(k: usize, x: &RealEnclosure) -> Result<RealEnclosure> {
    check_order(k)?;
    let den = m_denominator(k, x);
    if den.contains_zero() {
        return Err(Error::PoleProximity { k });
    }
    x.add_int(-1).div(&den)
}

/// `m(z)` at a complex point, rounded to nearest.
pub fn coefficient_m_complex(k: usize, z: &BigComplex) -> Result<BigComplex> {
    check_order(k)?;
    let prec = z.precision();
    let den = z.scale(k as i64 + 1).sub(&BigComplex::from_int(2 * k as i64, prec));
    z.sub(&BigComplex::from_int(1, prec))
        .div(&den)
        .ok_or(Error::PoleProximity { k })
}

/// `(z^(k+1) - z^k) / (2 z^k - (k + 1))` at an approximate root.
///
/// Fails when the denominator is below `2^-(prec/2)` in modulus.
pub fn coefficient_sj(k: usize, root: &BigComplex) -> Result<ComplexApprox> {
    check_order(k)?;
    let prec = root.precision();
    let zk = root.powu(k as u64);
    let num = zk.mul(root).sub(&zk);
    let den = zk.scale(2).sub(&BigComplex::from_int(k as i64 + 1, prec));
    if den.abs() < Dyadic::pow2(-(prec as i64) / 2) {
        return Err(Error::DegenerateDenominator { k });
    }
    let value = num.div(&den).ok_or(Error::DegenerateDenominator { k })?;
    let residual_bound = (&value.abs() * &Dyadic::from_int(2 * k as i64 + 8))
        .mul_pow2(-(prec as i64))
        .round(64, Rounding::Up);
    Ok(ComplexApprox {
        value,
        residual_bound,
    })
}

/// `a^2 / ((a - s)(a - conj s))` for the cubic, from its root set.
///
/// The conjugate pair makes the denominator real. The returned interval is
/// centred on the computed value with a radius covering the leftover
/// imaginary part and the root residuals; it is not a rigorous bound.
pub fn coefficient_spickerman_k3(roots: &ComplexRootSet) -> Result<RealEnclosure> {
    if roots.k != 3 || roots.others.len() != 2 {
        return Err(Error::WrongOrder {
            expected: 3,
            found: roots.k,
        });
    }
    let values = roots.values();
    let (alpha, sigma, sigma_bar) = (&values[0], &values[1], &values[2]);
    let prec = alpha.precision();
    let den = alpha.sub(sigma).mul(&alpha.sub(sigma_bar));
    let value = alpha
        .mul(alpha)
        .div(&den)
        .ok_or(Error::DegenerateDenominator { k: 3 })?;

    let poly = char_poly(3)?;
    // Root error ~ residual / |p'|, amplified by 1/|a - s| in the quotient.
    let mut radius = value.im.abs();
    for r in &roots.others {
        let (_, dp) = poly.eval_complex(&r.value);
        let sep = alpha.sub(&r.value).abs();
        let dp_abs = dp.abs();
        if dp_abs.is_zero() || sep.is_zero() {
            return Err(Error::DegenerateDenominator { k: 3 });
        }
        let shift = r.residual_bound.div(&dp_abs, 64, Rounding::Up);
        let term = (&(&value.re.abs() * &shift) * &Dyadic::from_int(4)).div(&sep, 64, Rounding::Up);
        radius = &radius + &term;
    }
    radius = &radius + &roots.dominant.width();
    radius = &radius + &Dyadic::pow2(-(prec as i64) + 8);
    let radius = radius.round(64, Rounding::Up);
    Ok(RealEnclosure::new(
        (&value.re - &radius).round(prec, Rounding::Down),
        (&value.re + &radius).round(prec, Rounding::Up),
        prec,
    ))
}

/// The certified coefficient `m(alpha)` at the dominant root.
pub fn dominant_coefficient(k: usize, precision_bits: u32) -> Result<CoefficientValue> {
    let alpha = dominant_root(k, precision_bits)?;
    let value = coefficient_m(k, &alpha)?;
    Ok(CoefficientValue {
        k,
        form: CoefficientForm::M,
        at_root: BigComplex::real(alpha.midpoint(), alpha.precision_bits()),
        value: CoefficientEstimate::Certified(value),
    })
}

/// `sum_i m(a_i) a_i^(n-1)` over all `k` roots.
///
/// Computed in rounded (non-interval) complex arithmetic. `value.re` should
/// be the integer `F_n`; `value.im` is rounding noise; `residual_bound` is a
/// first-order estimate of the error propagated from the root residuals.
pub fn binet_full(k: usize, n: i64, precision_bits: u32) -> Result<ComplexApprox> {
    check_index(k, n)?;
    check_precision(precision_bits)?;
    let roots = all_roots(k, precision_bits)?;
    binet_full_from_roots(&roots, n)
}

/// [`binet_full`] with a precomputed root set.
pub fn binet_full_from_roots(roots: &ComplexRootSet, n: i64) -> Result<ComplexApprox> {
    let k = roots.k;
    check_index(k, n)?;
    let poly = char_poly(k)?;
    let values = roots.values();
    let prec = values[0].precision();
    let mut sum = BigComplex::from_int(0, prec);
    let mut bound = Dyadic::zero();
    let amplification = Dyadic::from_int((n - 1).abs() + k as i64 + 2);
    for (i, z) in values.iter().enumerate() {
        let power = z.powi(n - 1).ok_or(Error::DegenerateDenominator { k })?;
        let term = coefficient_m_complex(k, z)?.mul(&power);
        let shift = if i == 0 {
            roots.dominant.width()
        } else {
            let (_, dp) = poly.eval_complex(z);
            roots.others[i - 1]
                .residual_bound
                .div(&dp.abs(), 64, Rounding::Up)
        };
        let rel = &shift.div(&z.abs(), 64, Rounding::Up) * &amplification;
        let rel = &rel + &Dyadic::pow2(-(prec as i64) + 8);
        bound = (&bound + &(&term.abs() * &rel)).round(64, Rounding::Up);
        sum = sum.add(&term);
    }
    Ok(ComplexApprox {
        value: sum,
        residual_bound: bound,
    })
}

/// Rigorous enclosure of the single dominant term `m(alpha) alpha^(n-1)`.
///
/// Defined for every integer `n`, including indices before the start of the
/// sequence.
pub fn dominant_term(k: usize, n: i64, precision_bits: u32) -> Result<RealEnclosure> {
    let alpha = dominant_root(k, precision_bits)?;
    dominant_term_from_root(k, n, &alpha)
}

/// [`dominant_term`] with a precomputed enclosure of `alpha`.
pub fn dominant_term_from_root(k: usize, n: i64, alpha: &RealEnclosure) -> Result<RealEnclosure> {
    let m = coefficient_m(k, alpha)?;
    Ok(m.mul(&alpha.powi(n - 1)?))
}

/// Starting precision for certifying `Round(m(alpha) alpha^(n-1))`.
pub fn start_precision(n: i64) -> u32 {
    let n = n.clamp(0, PRECISION_CAP as i64) as u32;
    START_PRECISION_MARGIN.max(n.saturating_add(START_PRECISION_MARGIN))
}

/// `F_n^(k)` as the nearest integer to the dominant term, certified.
pub fn binet_round(k: usize, n: i64) -> Result<CertifiedInteger> {
    binet_round_from(k, n, start_precision(n))
}

/// [`binet_round`] starting the precision ladder at `start_bits`; the
/// precision doubles until both neighbouring half-integers are excluded.
pub fn binet_round_from(k: usize, n: i64, start_bits: u32) -> Result<CertifiedInteger> {
    check_index(k, n)?;
    let mut prec = start_bits.max(crate::charpoly::MIN_PRECISION);
    loop {
        let term = dominant_term(k, n, prec)?;
        if let Some(v) = term.round_half_up() {
            let gap = term.half_integer_gap(&v);
            if gap.is_positive() {
                let value = v
                    .to_biguint()
                    .ok_or(Error::CertificationFailure { k, n, cap: PRECISION_CAP })?;
                return Ok(CertifiedInteger {
                    value,
                    proof_gap: gap,
                    precision_used: prec,
                });
            }
        }
        if prec >= PRECISION_CAP {
            return Err(Error::CertificationFailure {
                k,
                n,
                cap: PRECISION_CAP,
            });
        }
        prec = (prec * 2).min(PRECISION_CAP);
    }
}

/// Difference `F_n - m(alpha) alpha^(n-1)` as an enclosure.
pub(crate) fn error_enclosure(exact: &BigUint, approx: &RealEnclosure) -> RealEnclosure {
    RealEnclosure::from_bigint(&BigInt::from(exact.clone()), approx.precision_bits()).sub(approx)
}
