//! Error-sequence analysis around the single-term formula.
//!
//! `E_n = F_n - m(alpha) alpha^(n-1)` obeys the same k-step recurrence as
//! `F_n` from `n = 2` on, and stays strictly inside `(-1/2, 1/2)`. This
//! module tabulates it with certified enclosures, checks the recurrence
//! residuals, checks the properties of `m` that the bound rests on, and
//! measures from which index rounding a single power reproduces a sequence.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::binet::{coefficient_m, dominant_term_from_root, error_enclosure};
use crate::charpoly::{check_order, dominant_root};
use crate::dyadic::Dyadic;
use crate::enclosure::RealEnclosure;
use crate::error::{Error, Result};
use crate::exact::{check_index, kbonacci_range};
use crate::surd::QuadraticSurd;

/// Grid resolution used by the inequality checks unless told otherwise.
pub const DEFAULT_GRID: usize = 1024;

/// Working precision for grid checks on `m`.
const GRID_PRECISION: u32 = 128;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorRow {
    pub n: i64,
    pub exact: BigUint,
    /// Enclosure of `m(alpha) alpha^(n-1)`.
    pub approx: RealEnclosure,
    /// Enclosure of `exact - approx`.
    pub error: RealEnclosure,
}

impl ErrorRow {
    /// `|E_n| < 1/2`, certified.
    pub fn is_certified(&self) -> bool {
        let half = Dyadic::pow2(-1);
        self.error.is_above(&-&half) && self.error.is_below(&half)
    }
}

/// Rows `n_lo..=n_hi` with certified `|E_n| < 1/2`.
///
/// Fails with [`Error::Uncertified`] if the precision is too low to certify
/// some row; roughly `n_hi + 64` bits always suffice.
pub fn error_table(k: usize, n_lo: i64, n_hi: i64, precision_bits: u32) -> Result<Vec<ErrorRow>> {
    check_index(k, n_lo)?;
    if n_hi < n_lo {
        return Err(Error::MalformedRange(format!("{n_lo}..{n_hi} is empty")));
    }
    let alpha = dominant_root(k, precision_bits)?;
    let exact = kbonacci_range(k, n_lo, n_hi)?;
    (n_lo..=n_hi)
        .zip(exact)
        .map(|(n, exact)| {
            let approx = dominant_term_from_root(k, n, &alpha)?;
            let error = error_enclosure(&exact, &approx);
            let row = ErrorRow {
                n,
                exact,
                approx,
                error,
            };
            if row.is_certified() {
                Ok(row)
            } else {
                Err(Error::Uncertified { n })
            }
        })
        .collect()
}

/// An identity residual at index `n`; the identity holds when it contains 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residual {
    pub n: i64,
    pub value: RealEnclosure,
}

impl Residual {
    pub fn is_consistent(&self, max_width: &Dyadic) -> bool {
        self.value.contains_zero() && &self.value.width() < max_width
    }
}

fn check_contiguous(rows: &[ErrorRow], k: usize) -> Result<()> {
    check_order(k)?;
    if rows.len() <= k {
        return Err(Error::MalformedRange(format!(
            "need more than k = {k} rows, got {}",
            rows.len()
        )));
    }
    let first = rows[0].n;
    if let Some((i, r)) = rows
        .iter()
        .enumerate()
        .find(|(i, r)| r.n != first + *i as i64)
    {
        return Err(Error::MalformedRange(format!(
            "row {i} has index {} but {} was expected",
            r.n,
            first + i as i64
        )));
    }
    Ok(())
}

/// Residuals `E_n - (E_{n-1} + ... + E_{n-k})` for every `n >= 2` whose
/// predecessors are all present.
pub fn check_error_recurrence(rows: &[ErrorRow], k: usize) -> Result<Vec<Residual>> {
    check_contiguous(rows, k)?;
    let first = rows[0].n;
    let start = (first + k as i64).max(2) - first;
    Ok((start as usize..rows.len())
        .map(|i| {
            let sum = rows[i - k..i]
                .iter()
                .skip(1)
                .fold(rows[i - k].error.clone(), |acc, r| acc.add(&r.error));
            Residual {
                n: rows[i].n,
                value: rows[i].error.sub(&sum),
            }
        })
        .collect())
}

/// Residuals `E_{n+1} - (2 E_n - E_{n-k})` for every `n >= 2` with both
/// neighbours present; reported at index `n`.
pub fn check_two_step_identity(rows: &[ErrorRow], k: usize) -> Result<Vec<Residual>> {
    check_contiguous(rows, k)?;
    let first = rows[0].n;
    let start = (first + k as i64).max(2) - first;
    Ok((start as usize..rows.len().saturating_sub(1))
        .map(|i| {
            let doubled = rows[i].error.scale(2).sub(&rows[i - k].error);
            Residual {
                n: rows[i].n,
                value: rows[i + 1].error.sub(&doubled),
            }
        })
        .collect())
}

/// Exact `m(x)` for rational `x`, `None` at the pole.
pub fn m_rational(k: usize, x: &BigRational) -> Option<BigRational> {
    let kk = BigRational::from_integer(BigInt::from(k));
    let two = BigRational::from_integer(2.into());
    let den = &two + (&kk + BigRational::one()) * (x - &two);
    (!den.is_zero()).then(|| (x - BigRational::one()) / den)
}

/// Outcome of checking the properties of `m` on `[2 - 1/k, 2]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPropertyReport {
    pub k: usize,
    pub samples: usize,
    /// `m(2 - 1/k) = 1`, exactly.
    pub one_at_left_end: bool,
    /// `m(2) = 1/2`, exactly.
    pub half_at_two: bool,
    /// The pole `2 - 2/(k+1)` lies left of the interval, so `m` is continuous.
    pub pole_left_of_interval: bool,
    /// Grid steps where `m` was not certified to strictly decrease.
    pub decreasing_violations: usize,
    /// Interior grid points where `m(x) > 1/x` was not certified.
    pub reciprocal_violations: usize,
    /// Rational solutions of `1/x = m(x)`, ascending.
    pub intersections: Vec<BigRational>,
    /// The solutions are exactly `{2, k}`.
    pub intersections_ok: bool,
}

impl MPropertyReport {
    pub fn passed(&self) -> bool {
        self.one_at_left_end
            && self.half_at_two
            && self.pole_left_of_interval
            && self.decreasing_violations == 0
            && self.reciprocal_violations == 0
            && self.intersections_ok
    }
}

/// Rational roots of `a x^2 + b x + c` with integer coefficients.
fn rational_quadratic_roots(a: &BigInt, b: &BigInt, c: &BigInt) -> Vec<BigRational> {
    let disc = b * b - BigInt::from(4) * a * c;
    if disc.is_negative() {
        return Vec::new();
    }
    let s = disc.sqrt();
    if &s * &s != disc {
        return Vec::new();
    }
    let two_a = BigInt::from(2) * a;
    let mut roots = vec![
        BigRational::new(-b - &s, two_a.clone()),
        BigRational::new(-b + &s, two_a),
    ];
    roots.sort();
    roots.dedup();
    roots
}

/// Check the four properties of `m` used by the error bound, plus the
/// intersection structure of `1/x` and `m(x)`.
///
/// Endpoint values and intersections are checked in exact rationals; the
/// monotonicity and `m(x) > 1/x` inequalities on a `samples`-point grid with
/// enclosure arithmetic.
pub fn check_m_properties(k: usize, samples: usize) -> Result<MPropertyReport> {
    check_order(k)?;
    if samples < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 samples, got {samples}")));
    }
    let kk = BigInt::from(k);
    let one = BigRational::one();
    let two = BigRational::from_integer(2.into());
    let left = &two - BigRational::new(BigInt::one(), kk.clone());
    let pole = &two - BigRational::new(BigInt::from(2), &kk + 1);

    let one_at_left_end = m_rational(k, &left) == Some(one.clone());
    let half_at_two = m_rational(k, &two) == Some(BigRational::new(1.into(), 2.into()));
    let pole_left_of_interval = pole < left;

    // 1/x = N(x)/D(x) with N = x - 1, D = (k+1) x - 2k clears to x N(x) - D(x) = 0.
    // Coefficients ascending.
    let numer = [BigInt::from(-1), BigInt::one()];
    let denom = [-(BigInt::from(2) * &kk), &kk + 1];
    let mut quad = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
    for (i, c) in numer.iter().enumerate() {
        quad[i + 1] += c;
    }
    for (i, c) in denom.iter().enumerate() {
        quad[i] -= c;
    }
    let intersections = rational_quadratic_roots(&quad[2], &quad[1], &quad[0]);
    let mut expected = vec![two.clone(), BigRational::from_integer(kk.clone())];
    expected.sort();
    expected.dedup();
    let intersections_ok = intersections == expected
        && intersections
            .iter()
            .all(|x| m_rational(k, x) == Some(x.recip()));

    let step = (&two - &left) / BigRational::from_integer(BigInt::from(samples - 1));
    let grid: Vec<BigRational> = (0..samples)
        .map(|j| &left + &step * BigRational::from_integer(BigInt::from(j)))
        .collect();
    let values: Vec<RealEnclosure> = grid
        .iter()
        .map(|x| coefficient_m(k, &RealEnclosure::from_rational(x, GRID_PRECISION)))
        .collect::<Result<_>>()?;
    let decreasing_violations = values
        .windows(2)
        .filter(|w| !w[1].is_less_than(&w[0]))
        .count();
    let reciprocal_violations = grid[1..samples - 1]
        .iter()
        .zip(&values[1..samples - 1])
        .filter(|(x, m)| {
            let recip = RealEnclosure::from_rational(&x.recip(), GRID_PRECISION);
            !recip.is_less_than(m)
        })
        .count();

    Ok(MPropertyReport {
        k,
        samples,
        one_at_left_end,
        half_at_two,
        pole_left_of_interval,
        decreasing_violations,
        reciprocal_violations,
        intersections,
        intersections_ok,
    })
}

/// Result of matching `Round(coefficient * base^n)` against a sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdReport {
    pub coefficient: QuadraticSurd,
    pub base: QuadraticSurd,
    pub target: Vec<BigInt>,
    pub n_start: i64,
    /// Smallest index from which every tested index matches.
    pub threshold: Option<i64>,
    /// Last tested index.
    pub verified_up_to: i64,
    /// Tested indices where rounding disagrees with the target.
    pub mismatches: Vec<i64>,
}

/// Scan `n = n_start, n_start + 1, ...` over `target` and find the minimal
/// index from which `Round(coefficient * base^n)` equals the target at every
/// later tested index.
pub fn rounding_threshold(
    coefficient: &QuadraticSurd,
    base: &QuadraticSurd,
    target: &[BigInt],
    n_start: i64,
) -> Result<ThresholdReport> {
    if target.is_empty() {
        return Err(Error::InvalidInput("target sequence is empty".into()));
    }
    if !base.is_greater_than_one() {
        return Err(Error::InvalidInput(format!("base {base} must exceed 1")));
    }
    // Validate the field once so the loop below cannot fail halfway.
    coefficient.mul(base)?;

    let mut power = base
        .powi(n_start)
        .ok_or_else(|| Error::InvalidInput("base is zero".into()))?;
    let mut mismatches = Vec::new();
    for (i, want) in target.iter().enumerate() {
        let n = n_start + i as i64;
        if &coefficient.mul(&power)?.round_half_up() != want {
            mismatches.push(n);
        }
        power = power.mul(base)?;
    }
    let verified_up_to = n_start + target.len() as i64 - 1;
    let threshold = match mismatches.last() {
        None => Some(n_start),
        Some(&last) if last < verified_up_to => Some(last + 1),
        Some(_) => None,
    };
    Ok(ThresholdReport {
        coefficient: coefficient.clone(),
        base: base.clone(),
        target: target.to_vec(),
        n_start,
        threshold,
        verified_up_to,
        mismatches,
    })
}

/// The second-order counterexamples, as exact inputs to [`rounding_threshold`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThresholdPreset {
    /// `10, 10, 20, 30, 50, ...` against `(10/sqrt 5) phi^n`, from `n = 1`.
    ScaledFibonacci,
    /// `G_n = 2 G_{n-1} + 4 G_{n-2}`, `1, 2, 8, 24, 80, ...`, against
    /// `(1 + sqrt 5)^n / (2 sqrt 5)`, from `n = 1`.
    SecondOrderG,
    /// `F_n` against `phi^n / sqrt 5`, from `n = 0`.
    Fibonacci,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdProblem {
    pub coefficient: QuadraticSurd,
    pub base: QuadraticSurd,
    pub target: Vec<BigInt>,
    pub n_start: i64,
}

impl ThresholdProblem {
    pub fn solve(&self) -> Result<ThresholdReport> {
        rounding_threshold(&self.coefficient, &self.base, &self.target, self.n_start)
    }
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

impl ThresholdPreset {
    pub fn problem(self, terms: usize) -> ThresholdProblem {
        let fib = |from: i64| -> Vec<BigInt> {
            kbonacci_range(2, from, from + terms as i64 - 1)
                .map(|v| v.into_iter().map(BigInt::from).collect())
                .unwrap_or_default()
        };
        match self {
            ThresholdPreset::ScaledFibonacci => ThresholdProblem {
                // 10 / sqrt 5 = 2 sqrt 5
                coefficient: QuadraticSurd::new(q(0, 1), q(2, 1), 5),
                base: QuadraticSurd::new(q(1, 2), q(1, 2), 5),
                target: fib(1).into_iter().map(|v| v * 10).collect(),
                n_start: 1,
            },
            ThresholdPreset::SecondOrderG => {
                let mut target: Vec<BigInt> = Vec::with_capacity(terms);
                for i in 0..terms {
                    let next = match i {
                        0 => BigInt::one(),
                        1 => BigInt::from(2),
                        _ => &target[i - 1] * 2 + &target[i - 2] * 4,
                    };
                    target.push(next);
                }
                ThresholdProblem {
                    // 1 / (2 sqrt 5) = sqrt 5 / 10
                    coefficient: QuadraticSurd::new(q(0, 1), q(1, 10), 5),
                    base: QuadraticSurd::new(q(1, 1), q(1, 1), 5),
                    target,
                    n_start: 1,
                }
            }
            ThresholdPreset::Fibonacci => ThresholdProblem {
                coefficient: QuadraticSurd::new(q(0, 1), q(1, 5), 5),
                base: QuadraticSurd::new(q(1, 2), q(1, 2), 5),
                target: fib(0),
                n_start: 0,
            },
        }
    }
}

/// `max |E_n|` (upper bound) over the rows.
pub fn max_abs_error(rows: &[ErrorRow]) -> Dyadic {
    rows.iter()
        .map(|r| r.error.magnitude())
        .max()
        .unwrap_or_else(Dyadic::zero)
}
