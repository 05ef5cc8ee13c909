//! k-generalized Fibonacci numbers.
//!
//! `F_n^(k)` starts with `k - 1` zeros and a one at `n = 1`, and every later
//! term is the sum of the previous `k`. This crate computes it three ways:
//!
//! * exactly, by recurrence ([`exact::kbonacci`]) or by companion-matrix
//!   powering ([`exact::kbonacci_matrix`]);
//! * as the sum over all roots of the characteristic polynomial
//!   ([`binet::binet_full`]);
//! * as the nearest integer to the single dominant term
//!   `m(alpha) alpha^(n-1)` with `m(x) = (x - 1)/(2 + (k + 1)(x - 2))`
//!   ([`binet::binet_round`]), with a rigorous certificate that the rounding
//!   is correct.
//!
//! [`analysis`] checks the error sequence and the properties of `m` that make
//! the rounding work.

pub mod analysis;
pub mod binet;
pub mod charpoly;
pub mod complex;
pub mod dyadic;
pub mod enclosure;
pub mod error;
pub mod exact;
pub mod surd;

pub use analysis::{
    check_error_recurrence, check_m_properties, check_two_step_identity, error_table,
    rounding_threshold, ErrorRow, MPropertyReport, Residual, ThresholdPreset, ThresholdReport,
};
pub use binet::{
    binet_full, binet_round, coefficient_m, coefficient_sj, coefficient_spickerman_k3,
    dominant_term, CertifiedInteger,
};
pub use charpoly::{
    all_roots, char_poly, dominant_root, eval_aux, root_bounds, CharPoly, ComplexRootSet,
    RootBounds,
};
pub use complex::{BigComplex, ComplexApprox};
pub use dyadic::{Dyadic, Rounding};
pub use enclosure::RealEnclosure;
pub use error::{Error, Result};
pub use exact::{kbonacci, kbonacci_matrix, kbonacci_range, CompanionMatrix, SequenceWindow};
pub use surd::QuadraticSurd;
