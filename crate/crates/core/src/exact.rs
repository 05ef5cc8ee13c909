//! Exact k-generalized Fibonacci numbers.
//!
//! Indexing starts at `n = 2 - k`: the sequence opens with `k - 1` zeros,
//! then `F_1 = 1`, and each later term is the sum of the previous `k`.

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::charpoly::check_order;
use crate::error::{Error, Result};

/// First valid index for order `k`.
pub fn first_index(k: usize) -> i64 {
    2 - k as i64
}

pub(crate) fn check_index(k: usize, n: i64) -> Result<()> {
    check_order(k)?;
    let min = first_index(k);
    if n < min {
        Err(Error::IndexOutOfRange { k, n, min })
    } else {
        Ok(())
    }
}

/// The most recent `k` terms of the sequence, oldest first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceWindow {
    k: usize,
    terms: VecDeque<BigUint>,
    sum: BigUint,
    n_head: i64,
}

impl SequenceWindow {
    /// Window ending at `F_1`: `F_{2-k}, ..., F_0, F_1 = 0, ..., 0, 1`.
    pub fn new(k: usize) -> Result<Self> {
        check_order(k)?;
        let mut terms: VecDeque<BigUint> = std::iter::repeat_with(BigUint::zero).take(k - 1).collect();
        terms.push_back(BigUint::one());
        Ok(SequenceWindow {
            k,
            terms,
            sum: BigUint::one(),
            n_head: 1,
        })
    }

    pub fn order(&self) -> usize {
        self.k
    }

    /// Index of the newest term.
    pub fn n_head(&self) -> i64 {
        self.n_head
    }

    pub fn head(&self) -> &BigUint {
        self.terms.back().expect("window is never empty")
    }

    /// Terms oldest first; `terms()[i]` is `F_{n_head - k + 1 + i}`.
    pub fn terms(&self) -> impl Iterator<Item = &BigUint> {
        self.terms.iter()
    }

    /// Term `F_n` if it is still in the window.
    pub fn get(&self, n: i64) -> Option<&BigUint> {
        let offset = n - (self.n_head - self.k as i64 + 1);
        usize::try_from(offset).ok().and_then(|i| self.terms.get(i))
    }

    /// Append the next term (the sum of the current window) and drop the
    /// oldest one.
    pub fn advance(&mut self) {
        let next = self.sum.clone();
        let dropped = self.terms.pop_front().expect("window is never empty");
        self.sum = &self.sum + &next - dropped;
        self.terms.push_back(next);
        self.n_head += 1;
    }
}

/// `F_n^(k)` by sliding-window iteration, `O(n)` big-integer additions.
pub fn kbonacci(k: usize, n: i64) -> Result<BigUint> {
    check_index(k, n)?;
    if n <= 0 {
        return Ok(BigUint::zero());
    }
    let mut w = SequenceWindow::new(k)?;
    while w.n_head() < n {
        w.advance();
    }
    Ok(w.head().clone())
}

/// `[F_lo, ..., F_hi]` in a single pass.
pub fn kbonacci_range(k: usize, n_lo: i64, n_hi: i64) -> Result<Vec<BigUint>> {
    check_index(k, n_lo)?;
    if n_hi < n_lo {
        return Err(Error::MalformedRange(format!("{n_lo}..{n_hi} is empty")));
    }
    let mut out = Vec::with_capacity((n_hi - n_lo + 1) as usize);
    let mut w = SequenceWindow::new(k)?;
    for n in n_lo..=n_hi {
        while w.n_head() < n {
            w.advance();
        }
        out.push(w.get(n).cloned().unwrap_or_default());
    }
    Ok(out)
}

/// The `k x k` companion matrix: top row all ones, identity on the
/// subdiagonal. It maps `(F_{n-1}, ..., F_{n-k})` to `(F_n, ..., F_{n-k+1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompanionMatrix {
    k: usize,
    entries: Vec<BigUint>,
}

impl CompanionMatrix {
    pub fn new(k: usize) -> Result<Self> {
        check_order(k)?;
        let mut m = Self::zeros(k);
        for j in 0..k {
            m.entries[j] = BigUint::one();
        }
        for i in 1..k {
            m.entries[i * k + i - 1] = BigUint::one();
        }
        Ok(m)
    }

    fn zeros(k: usize) -> Self {
        CompanionMatrix {
            k,
            entries: vec![BigUint::zero(); k * k],
        }
    }

    fn identity(k: usize) -> Self {
        let mut m = Self::zeros(k);
        for i in 0..k {
            m.entries[i * k + i] = BigUint::one();
        }
        m
    }

    pub fn order(&self) -> usize {
        self.k
    }

    pub fn get(&self, row: usize, col: usize) -> &BigUint {
        &self.entries[row * self.k + col]
    }

    pub fn mul(&self, other: &Self) -> Self {
        let k = self.k;
        let mut out = Self::zeros(k);
        for i in 0..k {
            for l in 0..k {
                let a = &self.entries[i * k + l];
                if a.is_zero() {
                    continue;
                }
                for j in 0..k {
                    let b = &other.entries[l * k + j];
                    if !b.is_zero() {
                        out.entries[i * k + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[BigUint]) -> Vec<BigUint> {
        let k = self.k;
        (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| &self.entries[i * k + j] * &v[j])
                    .sum::<BigUint>()
            })
            .collect()
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut result = Self::identity(self.k);
        let mut base = self.clone();
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
}

/// `F_n^(k)` by binary powering of the companion matrix.
///
/// Starting from the state `(F_1, F_0, ..., F_{2-k}) = (1, 0, ..., 0)`,
/// `M^(n-1)` applied to it has `F_n` on top, so the answer is the top-left
/// entry of `M^(n-1)`.
pub fn kbonacci_matrix(k: usize, n: i64) -> Result<BigUint> {
    check_index(k, n)?;
    if n <= 1 {
        return Ok(if n == 1 { BigUint::one() } else { BigUint::zero() });
    }
    let m = CompanionMatrix::new(k)?;
    Ok(m.pow((n - 1) as u64).get(0, 0).clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn row(vals: &[u64]) -> Vec<BigUint> {
        vals.iter().map(|&v| u(v)).collect()
    }

    #[test]
    fn chart_rows() {
        assert_eq!(kbonacci_range(2, 1, 9).unwrap(), row(&[1, 1, 2, 3, 5, 8, 13, 21, 34]));
        assert_eq!(kbonacci_range(3, 1, 9).unwrap(), row(&[1, 1, 2, 4, 7, 13, 24, 44, 81]));
        assert_eq!(kbonacci_range(4, 1, 9).unwrap(), row(&[1, 1, 2, 4, 8, 15, 29, 56, 108]));
        assert_eq!(kbonacci_range(5, 1, 9).unwrap(), row(&[1, 1, 2, 4, 8, 16, 31, 61, 120]));
        assert_eq!(kbonacci_range(6, 0, 7).unwrap(), row(&[0, 1, 1, 2, 4, 8, 16, 32]));
        assert_eq!(kbonacci_range(2, 0, 0).unwrap(), row(&[0]));
    }

    #[test]
    fn single_values() {
        assert_eq!(kbonacci(3, 8).unwrap(), u(44));
        assert_eq!(kbonacci(4, 9).unwrap(), u(108));
        assert_eq!(kbonacci(5, -3).unwrap(), u(0));
        assert_eq!(kbonacci_matrix(2, 40).unwrap(), u(102334155));
        assert_eq!(kbonacci_matrix(3, 8).unwrap(), u(44));
        for k in 2..8 {
            assert_eq!(kbonacci_matrix(k, 1).unwrap(), u(1));
        }
    }

    #[test]
    fn domain_errors() {
        assert_eq!(
            kbonacci(5, -4),
            Err(Error::IndexOutOfRange { k: 5, n: -4, min: -3 })
        );
        assert!(matches!(kbonacci_matrix(2, -1), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(kbonacci_range(3, -2, 4), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(kbonacci_range(3, 4, 2), Err(Error::MalformedRange(_))));
        assert_eq!(kbonacci(1, 3), Err(Error::OrderOutOfRange { k: 1 }));
    }

    #[test]
    fn leading_terms_double() {
        for k in 2..=12 {
            for n in 2..=(k as i64 + 1) {
                assert_eq!(kbonacci(k, n).unwrap(), BigUint::one() << (n - 2) as u32);
            }
        }
    }

    #[test]
    fn window_advance_preserves_recurrence() {
        let k = 4;
        let mut w = SequenceWindow::new(k).unwrap();
        for _ in 0..50 {
            let expected: BigUint = w.terms().sum();
            w.advance();
            assert_eq!(w.head(), &expected);
            assert_eq!(w.terms().count(), k);
        }
        assert_eq!(w.n_head(), 51);
        assert_eq!(w.get(48), Some(&kbonacci(k, 48).unwrap()));
        assert_eq!(w.get(47), None);
    }

    #[test]
    fn companion_matrix_steps_state() {
        let k = 5;
        let m = CompanionMatrix::new(k).unwrap();
        let state: Vec<BigUint> = (0..k as i64).map(|i| kbonacci(k, 20 - i).unwrap()).collect();
        let next = m.apply(&state);
        let expected: Vec<BigUint> = (0..k as i64).map(|i| kbonacci(k, 21 - i).unwrap()).collect();
        assert_eq!(next, expected);
    }

    #[test]
    fn doubling_identity_matches_window() {
        // F_n = 2 F_{n-1} - F_{n-1-k} once the window is past the seed.
        for k in 2..=7 {
            let lo = first_index(k);
            let seq = kbonacci_range(k, lo, 120).unwrap();
            let at = |n: i64| &seq[(n - lo) as usize];
            for n in (lo + k as i64 + 1)..=120 {
                if n < 3 {
                    continue;
                }
                assert_eq!(at(n) + at(n - 1 - k as i64), at(n - 1) * 2u32, "k={k} n={n}");
            }
        }
    }
}
