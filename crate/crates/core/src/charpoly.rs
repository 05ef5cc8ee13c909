//! The characteristic polynomial `x^k - x^(k-1) - ... - x - 1` and its roots.
//!
//! The dominant root is isolated rigorously through the auxiliary form
//! `f(x) = (x - 1) p(x) = x^k (x - 2) + 1`, which has exactly one zero in
//! `[2 - 1/k, 2]`. The remaining roots come from a simultaneous (Aberth)
//! iteration and carry residual bounds only.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;

use crate::complex::{BigComplex, ComplexApprox};
use crate::dyadic::{Dyadic, Rounding};
use crate::enclosure::RealEnclosure;
use crate::error::{Error, Result};

/// Smallest accepted working precision.
pub const MIN_PRECISION: u32 = 32;

/// Extra bits carried internally beyond the requested precision.
pub const GUARD_BITS: u32 = 64;

/// Precision levels below this are isolated from scratch; above it the
/// enclosure of half the precision is refined.
const BASE_LEVEL: u32 = 64;

/// Newton steps allowed per precision level.
const NEWTON_CAP: usize = 64;

/// Aberth iteration caps (double precision, then multi-precision polish).
const ABERTH_CAP_F64: usize = 1000;
const ABERTH_CAP_POLISH: usize = 200;

pub(crate) fn check_order(k: usize) -> Result<()> {
    if k < 2 {
        Err(Error::OrderOutOfRange { k: k as i64 })
    } else {
        Ok(())
    }
}

pub(crate) fn check_precision(bits: u32) -> Result<()> {
    if bits < MIN_PRECISION {
        Err(Error::PrecisionTooLow {
            bits,
            min: MIN_PRECISION,
        })
    } else {
        Ok(())
    }
}

/// Monic polynomial `x^k - x^(k-1) - ... - x - 1`, coefficients in
/// degree-descending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPoly {
    k: usize,
    coeffs: Vec<i64>,
}

pub fn char_poly(k: usize) -> Result<CharPoly> {
    check_order(k)?;
    let mut coeffs = vec![-1; k + 1];
    coeffs[0] = 1;
    Ok(CharPoly { k, coeffs })
}

impl CharPoly {
    pub fn order(&self) -> usize {
        self.k
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Exact value at an integer point.
    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::from(0), |acc, &c| acc * x + c)
    }

    /// Exact value at a rational point.
    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().fold(BigRational::from_integer(0.into()), |acc, &c| {
            acc * x + BigRational::from_integer(c.into())
        })
    }

    /// Enclosure of the value over an interval (Horner form).
    pub fn eval_enclosure(&self, x: &RealEnclosure) -> RealEnclosure {
        let prec = x.precision_bits();
        self.coeffs
            .iter()
            .fold(RealEnclosure::from_int(0, prec), |acc, &c| {
                acc.mul(x).add_int(c)
            })
    }

    /// Value and derivative at a complex point (Horner form).
    pub fn eval_complex(&self, z: &BigComplex) -> (BigComplex, BigComplex) {
        let prec = z.precision();
        let mut p = BigComplex::from_int(0, prec);
        let mut dp = BigComplex::from_int(0, prec);
        for &c in &self.coeffs {
            dp = dp.mul(z).add(&p);
            p = p.mul(z).add(&BigComplex::from_int(c, prec));
        }
        (p, dp)
    }

    fn eval_f64(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in &self.coeffs {
            dp = dp * z + p;
            p = p * z + c as f64;
        }
        (p, dp)
    }
}

/// Enclosure of the auxiliary form `f(x) = x^k (x - 2) + 1`.
///
/// The factored shape keeps the evaluation stable near `x = 2`, where the
/// expanded `x^(k+1) - 2 x^k + 1` would cancel catastrophically.
pub fn eval_aux(k: usize, x: &RealEnclosure, precision_bits: u32) -> Result<RealEnclosure> {
    check_order(k)?;
    check_precision(precision_bits)?;
    Ok(aux(k, &x.clone().with_precision(precision_bits)))
}

fn aux(k: usize, x: &RealEnclosure) -> RealEnclosure {
    x.powu(k as u64).mul(&x.add_int(-2)).add_int(1)
}

/// Enclosure of `f'(x) = x^(k-1) ((k + 1) x - 2k)`.
fn aux_derivative(k: usize, x: &RealEnclosure) -> RealEnclosure {
    x.powu(k as u64 - 1)
        .mul(&x.scale(k as i64 + 1).add_int(-2 * k as i64))
}

/// Certified sign of `f` at a dyadic point, `None` if undecided.
fn aux_sign(k: usize, x: &Dyadic, prec: u32) -> Option<i32> {
    let v = aux(k, &RealEnclosure::point(x.clone(), prec));
    if v.is_strictly_positive() {
        Some(1)
    } else if v.is_strictly_negative() {
        Some(-1)
    } else {
        None
    }
}

/// Rigorous enclosure of the dominant root `alpha`, of width at most
/// `2^-precision_bits`.
///
/// Enclosures are nested across precisions: the result at `2p` bits is
/// obtained by contracting the result at `p` bits, so doubling the precision
/// never widens the interval or moves it outside the previous one.
pub fn dominant_root(k: usize, precision_bits: u32) -> Result<RealEnclosure> {
    check_order(k)?;
    check_precision(precision_bits)?;
    let start = if precision_bits < BASE_LEVEL {
        isolate(k, precision_bits)?
    } else {
        dominant_root(k, precision_bits / 2)?
    };
    refine(k, start, precision_bits)
}

/// Initial bracket by sign-change bisection on `[2 - 1/k, 2]` down to width
/// below 1/16.
fn isolate(k: usize, prec: u32) -> Result<RealEnclosure> {
    let work = prec + GUARD_BITS;
    let lower = BigRational::from_integer(2.into())
        - BigRational::new(BigInt::one(), BigInt::from(k));
    let mut lo = Dyadic::from_rational(&lower, work, Rounding::Down);
    let mut hi = Dyadic::from_int(2);
    if aux_sign(k, &lo, work) != Some(-1) || aux_sign(k, &hi, work) != Some(1) {
        return Err(Error::RootIsolation { k });
    }
    let sixteenth = Dyadic::pow2(-4);
    while &hi - &lo >= sixteenth {
        let mid = (&lo + &hi).mul_pow2(-1);
        match aux_sign(k, &mid, work) {
            Some(1) => hi = mid,
            Some(_) => lo = mid,
            // Midpoint indistinguishable from the root; Newton takes over.
            None => break,
        }
    }
    Ok(RealEnclosure::new(lo, hi, work))
}

/// Interval-Newton contraction of a bracket known to hold `alpha`, followed by
/// bisection if Newton stalls above the target width.
fn refine(k: usize, start: RealEnclosure, prec: u32) -> Result<RealEnclosure> {
    let work = prec + GUARD_BITS;
    let target = Dyadic::pow2(-(prec as i64));
    let mut x = start.with_precision(work);

    for _ in 0..NEWTON_CAP {
        let slope = aux_derivative(k, &x);
        if slope.contains_zero() {
            break;
        }
        let mid = RealEnclosure::point(x.midpoint(), work);
        let step = aux(k, &mid).div(&slope)?;
        let newton = mid.sub(&step);
        let next = x.intersect(&newton).ok_or(Error::RootIsolation { k })?;
        let (old_w, new_w) = (x.width(), next.width());
        x = next;
        // Stop once within target and progress has flattened out.
        if new_w <= target && new_w.mul_pow2(2) > old_w.mul_pow2(1) + old_w.clone() {
            break;
        }
        if new_w.is_zero() || new_w == old_w {
            break;
        }
    }

    let (mut lo, mut hi) = (x.lo().clone(), x.hi().clone());
    while &hi - &lo > target {
        let mid = (&lo + &hi).mul_pow2(-1);
        match aux_sign(k, &mid, work) {
            Some(1) => hi = mid,
            Some(_) => lo = mid,
            None => return Err(Error::RootIsolation { k }),
        }
    }
    Ok(RealEnclosure::new(lo, hi, work))
}

/// Rational bounds on `alpha`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootBounds {
    /// `2 - 1/k`
    pub lower: BigRational,
    /// `2`
    pub upper: BigRational,
    /// The sharper of `2 - 1/(3k)` (only valid for `k >= 4`) and
    /// `2 (1 - 2^-k)`.
    pub tight_lower: BigRational,
}

pub fn root_bounds(k: usize) -> Result<RootBounds> {
    check_order(k)?;
    let two = BigRational::from_integer(2.into());
    let kk = BigInt::from(k);
    let lower = &two - BigRational::new(BigInt::one(), kk.clone());
    let power_bound = &two * (BigRational::one() - BigRational::new(BigInt::one(), BigInt::one() << k));
    let tight_lower = if k >= 4 {
        let third = &two - BigRational::new(BigInt::one(), kk * 3);
        third.max(power_bound)
    } else {
        power_bound
    };
    Ok(RootBounds {
        lower,
        upper: two,
        tight_lower,
    })
}

/// All `k` roots: the certified dominant root plus `k - 1` approximations.
#[derive(Clone, Debug)]
pub struct ComplexRootSet {
    pub k: usize,
    pub dominant: RealEnclosure,
    /// Non-dominant roots, sorted by decreasing imaginary part, then real part.
    pub others: Vec<ComplexApprox>,
}

impl ComplexRootSet {
    /// Every root as a complex number, dominant first (its enclosure midpoint).
    pub fn values(&self) -> Vec<BigComplex> {
        let prec = self
            .others
            .first()
            .map(|r| r.value.precision())
            .unwrap_or(self.dominant.precision_bits());
        std::iter::once(BigComplex::real(self.dominant.midpoint(), prec))
            .chain(self.others.iter().map(|r| r.value.clone()))
            .collect()
    }

    pub fn worst_residual(&self) -> Dyadic {
        self.others
            .iter()
            .map(|r| r.residual_bound.clone())
            .max()
            .unwrap_or_default()
    }
}

fn aberth_f64(poly: &CharPoly) -> Vec<Complex64> {
    let k = poly.order();
    let mut z: Vec<Complex64> = (0..k)
        .map(|j| {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / k as f64 + 0.4;
            Complex64::from_polar(1.2, theta)
        })
        .collect();
    for _ in 0..ABERTH_CAP_F64 {
        let mut worst: f64 = 0.0;
        for j in 0..k {
            let (p, dp) = poly.eval_f64(z[j]);
            let w = p / dp;
            let repulsion: Complex64 = (0..k)
                .filter(|&i| i != j)
                .map(|i| (z[j] - z[i]).inv())
                .sum();
            let step = w / (Complex64::new(1.0, 0.0) - w * repulsion);
            z[j] -= step;
            worst = worst.max(step.norm() / z[j].norm().max(1.0));
        }
        if worst < 1e-15 {
            break;
        }
    }
    z
}

fn aberth_polish(poly: &CharPoly, start: &[Complex64], work: u32) -> (Vec<BigComplex>, bool) {
    let k = poly.order();
    let mut z: Vec<BigComplex> = start
        .iter()
        .map(|&c| BigComplex::from_complex64(c, work))
        .collect();
    let tolerance = Dyadic::pow2(-(work as i64) + 8);
    for _ in 0..ABERTH_CAP_POLISH {
        let mut converged = true;
        for j in 0..k {
            let (p, dp) = poly.eval_complex(&z[j]);
            let Some(w) = p.div(&dp) else { continue };
            let mut repulsion = BigComplex::from_int(0, work);
            for i in (0..k).filter(|&i| i != j) {
                if let Some(r) = z[j].sub(&z[i]).recip() {
                    repulsion = repulsion.add(&r);
                }
            }
            let denom = BigComplex::from_int(1, work).sub(&w.mul(&repulsion));
            let step = w.div(&denom).unwrap_or(w);
            if step.abs() > tolerance {
                converged = false;
            }
            z[j] = z[j].sub(&step);
        }
        if converged {
            return (z, true);
        }
    }
    (z, false)
}

/// Residual bound `|p(z)|` plus an allowance for rounding in the evaluation.
fn residual_bound(poly: &CharPoly, z: &BigComplex) -> Dyadic {
    let (p, _) = poly.eval_complex(z);
    let work = z.precision();
    let modulus = z.abs().max(Dyadic::one());
    let growth = modulus.pow_nonneg(poly.order() as u64, 64, Rounding::Up);
    let allowance = (&growth * &Dyadic::from_int(poly.order() as i64 + 1))
        .mul_pow2(-(work as i64) + 4);
    (&p.abs().round(64, Rounding::Up) + &allowance).round(64, Rounding::Up)
}

/// All `k` roots of the characteristic polynomial.
///
/// The dominant root comes from [`dominant_root`]; the others are polished
/// until the iteration settles at the working precision, and must end with a
/// residual below `2^-(precision_bits/2)` and modulus below one.
pub fn all_roots(k: usize, precision_bits: u32) -> Result<ComplexRootSet> {
    check_order(k)?;
    check_precision(precision_bits)?;
    let poly = char_poly(k)?;
    let dominant = dominant_root(k, precision_bits)?;
    let work = precision_bits + GUARD_BITS;

    let seeds = aberth_f64(&poly);
    let (roots, converged) = aberth_polish(&poly, &seeds, work);

    let dominant_index = roots
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm_sqr().cmp(&b.1.norm_sqr()))
        .map(|(i, _)| i)
        .expect("k >= 2 roots");

    let residual_limit = Dyadic::pow2(-(precision_bits as i64 / 2));
    let one = Dyadic::one();
    let mut others = Vec::with_capacity(k - 1);
    let mut worst = Dyadic::zero();
    for (i, z) in roots.into_iter().enumerate() {
        let bound = residual_bound(&poly, &z);
        worst = worst.max(bound.clone());
        if i == dominant_index {
            // The iterate must agree with the certified enclosure.
            let gap = (&z.re - &dominant.midpoint()).abs();
            if gap > residual_limit || z.im.abs() > residual_limit {
                return Err(Error::RootIsolation { k });
            }
            continue;
        }
        if &z.norm_sqr() + &residual_limit >= one {
            return Err(Error::UnitCircle { k, index: others.len() });
        }
        others.push(ComplexApprox {
            value: z,
            residual_bound: bound,
        });
    }
    if !converged || worst > residual_limit {
        return Err(Error::RootConvergence {
            k,
            worst_residual: worst.to_f64(),
        });
    }
    others.sort_by(|a, b| {
        b.value
            .im
            .cmp(&a.value.im)
            .then_with(|| b.value.re.cmp(&a.value.re))
    });
    Ok(ComplexRootSet { k, dominant, others })
}

/// `|(z - 2) + z^-k|`, which vanishes at every root since
/// `z^(k+1) - 2 z^k = -1`.
pub fn reciprocal_power_identity_residual(k: usize, z: &BigComplex) -> Option<Dyadic> {
    let inv = z.powi(-(k as i64))?;
    Some(z.sub(&BigComplex::from_int(2, z.precision())).add(&inv).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn char_poly_coefficients() {
        assert_eq!(char_poly(2).unwrap().coeffs(), &[1, -1, -1]);
        assert_eq!(char_poly(3).unwrap().coeffs(), &[1, -1, -1, -1]);
        assert_eq!(char_poly(5).unwrap().coeffs(), &[1, -1, -1, -1, -1, -1]);
        assert_eq!(char_poly(1), Err(Error::OrderOutOfRange { k: 1 }));
        assert_eq!(char_poly(0), Err(Error::OrderOutOfRange { k: 0 }));
    }

    #[test]
    fn char_poly_is_one_at_two() {
        for k in 2..=40 {
            let p = char_poly(k).unwrap();
            assert_eq!(p.eval_int(&BigInt::from(2)), BigInt::one());
            assert_eq!(p.coeffs().len(), k + 1);
        }
    }

    #[test]
    fn aux_at_two_is_exactly_one() {
        for k in [2, 3, 7, 30] {
            let v = eval_aux(k, &RealEnclosure::from_int(2, 64), 64).unwrap();
            assert!(v.is_exactly(&BigRational::one()));
        }
    }

    #[test]
    fn aux_vanishes_at_one() {
        let v = eval_aux(2, &RealEnclosure::from_int(1, 64), 64).unwrap();
        assert!(v.contains_zero());
    }

    #[test]
    fn aux_negative_below_tight_bound_for_k6() {
        // f(2 - 1/18) = (35/18)^6 (-1/18) + 1, evaluated exactly.
        let x = q(35, 18);
        let exact = num_traits::pow(x.clone(), 6) * q(-1, 18) + BigRational::one();
        assert!(exact < BigRational::from_integer(0.into()));
        let v = eval_aux(6, &RealEnclosure::from_rational(&x, 128), 128).unwrap();
        assert!(v.is_strictly_negative());
        assert!(v.contains_rational(&exact));
    }

    #[test]
    fn aux_rejects_low_precision() {
        assert!(matches!(
            eval_aux(3, &RealEnclosure::from_int(2, 64), 16),
            Err(Error::PrecisionTooLow { .. })
        ));
    }

    #[test]
    fn dominant_root_chart_values() {
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        let a2 = dominant_root(2, 64).unwrap();
        assert!((a2.to_f64() - golden).abs() < 1e-15);
        assert!((dominant_root(3, 64).unwrap().to_f64() - 1.839286755214161).abs() < 1e-14);
        assert!((dominant_root(5, 64).unwrap().to_f64() - 1.965948236645485).abs() < 1e-14);
    }

    #[test]
    fn dominant_root_width_and_bracket() {
        for k in [2, 3, 4, 9, 33, 64] {
            for prec in [32, 64, 100, 256] {
                let a = dominant_root(k, prec).unwrap();
                assert!(a.width() <= Dyadic::pow2(-(prec as i64)), "k={k} prec={prec}");
                let lo = eval_aux(k, &RealEnclosure::point(a.lo().clone(), 600), 600).unwrap();
                let hi = eval_aux(k, &RealEnclosure::point(a.hi().clone(), 600), 600).unwrap();
                assert!(!lo.is_strictly_positive() && !hi.is_strictly_negative());
            }
        }
    }

    #[test]
    fn golden_ratio_is_enclosed() {
        // phi = (1 + sqrt 5)/2 lies in [lo, hi] iff (2 lo - 1)^2 <= 5 <= (2 hi - 1)^2.
        let a = dominant_root(2, 200).unwrap();
        let five = Dyadic::from_int(5);
        let t = |d: &Dyadic| {
            let s = &d.mul_pow2(1) - &Dyadic::one();
            &s * &s
        };
        assert!(t(a.lo()) <= five && five <= t(a.hi()));
    }

    #[test]
    fn doubling_precision_nests() {
        for k in [2, 5, 12] {
            let mut prev = dominant_root(k, 40).unwrap();
            for prec in [80, 160, 320, 640] {
                let next = dominant_root(k, prec).unwrap();
                assert!(prev.encloses(&next), "k={k} prec={prec}");
                assert!(next.width() <= prev.width());
                prev = next;
            }
        }
    }

    #[test]
    fn root_bounds_examples() {
        let b = root_bounds(2).unwrap();
        assert_eq!((b.lower, b.upper, b.tight_lower), (q(3, 2), q(2, 1), q(3, 2)));
        let b = root_bounds(4).unwrap();
        assert_eq!((b.lower, b.tight_lower), (q(7, 4), q(23, 12)));
        let b = root_bounds(10).unwrap();
        assert_eq!(b.lower, q(19, 10));
        // 59/30 < 2046/1024, so the power bound wins.
        assert_eq!(b.tight_lower, q(2046, 1024));
    }

    #[test]
    fn all_roots_quadratic() {
        let roots = all_roots(2, 128).unwrap();
        assert_eq!(roots.others.len(), 1);
        let psi = (1.0 - 5f64.sqrt()) / 2.0;
        let z = roots.others[0].value.to_complex64();
        assert!((z.re - psi).abs() < 1e-15 && z.im.abs() < 1e-30);
    }

    #[test]
    fn all_roots_cubic_has_conjugate_pair() {
        let roots = all_roots(3, 128).unwrap();
        let [a, b] = [&roots.others[0].value, &roots.others[1].value];
        assert!(a.im.is_positive());
        assert_eq!(a.conj().with_precision(64), b.with_precision(64));
        assert!(a.abs() < Dyadic::one());
    }

    #[test]
    fn vieta_sum_and_product() {
        for k in [2, 3, 6, 11, 20] {
            let set = all_roots(k, 128).unwrap();
            let values = set.values();
            let prec = values[0].precision();
            let sum = values
                .iter()
                .fold(BigComplex::from_int(0, prec), |acc, z| acc.add(z));
            let prod = values
                .iter()
                .fold(BigComplex::from_int(1, prec), |acc, z| acc.mul(z));
            let tol = Dyadic::pow2(-100);
            assert!(sum.sub(&BigComplex::from_int(1, prec)).abs() < tol, "k={k}");
            let sign = if k % 2 == 1 { 1 } else { -1 };
            assert!(prod.sub(&BigComplex::from_int(sign, prec)).abs() < tol, "k={k}");
        }
    }

    #[test]
    fn reciprocal_power_identity_holds_at_roots() {
        for k in 2..=10 {
            let set = all_roots(k, 128).unwrap();
            for z in set.values() {
                let r = reciprocal_power_identity_residual(k, &z).unwrap();
                assert!(r < Dyadic::pow2(-100), "k={k}");
            }
        }
    }

    #[test]
    fn non_dominant_roots_inside_unit_circle() {
        // all_roots errors if any root is not clear of the unit circle.
        for k in 2..=64 {
            let set = all_roots(k, 96).unwrap();
            assert_eq!(set.others.len(), k - 1);
        }
    }

    #[test]
    fn roots_for_large_order() {
        let set = all_roots(64, 128).unwrap();
        assert_eq!(set.others.len(), 63);
        assert!(set.worst_residual() < Dyadic::pow2(-64));
    }
}
