//! Overflow-checked arithmetic on sequence terms.
//!
//! Terms are plain `u64`. Every operation that could leave the 64-bit range
//! goes through these helpers so that overflow surfaces as
//! [`Error::Overflow`] instead of wrapping.

use crate::{Error, Result};

/// A nonnegative sequence value or index.
pub type Term = u64;

#[inline]
pub fn add(a: Term, b: Term) -> Result<Term> {
    a.checked_add(b)
        .ok_or_else(|| Error::Overflow(format!("{a} + {b}")))
}

#[inline]
pub fn sub(a: Term, b: Term) -> Result<Term> {
    a.checked_sub(b)
        .ok_or_else(|| Error::Overflow(format!("{a} - {b}")))
}

#[inline]
pub fn mul(a: Term, b: Term) -> Result<Term> {
    a.checked_mul(b)
        .ok_or_else(|| Error::Overflow(format!("{a} * {b}")))
}

/// `y * n + z` for a possibly negative offset `z`; a negative result is an
/// overflow of the nonnegative range.
#[inline]
pub fn affine(y: Term, n: Term, z: i64) -> Result<Term> {
    let v = i128::from(y) * i128::from(n) + i128::from(z);
    Term::try_from(v).map_err(|_| Error::Overflow(format!("{y} * {n} + {z}")))
}

/// Narrow an `i128` intermediate back to a term.
#[inline]
pub fn from_wide(v: i128) -> Result<Term> {
    Term::try_from(v).map_err(|_| Error::Overflow(format!("{v} out of range")))
}

/// `base^exp`, checked.
pub fn pow(base: Term, exp: u32) -> Result<Term> {
    base.checked_pow(exp)
        .ok_or_else(|| Error::Overflow(format!("{base}^{exp}")))
}

/// `floor(n * phi)` where `phi` is the golden ratio, computed exactly.
///
/// Uses `floor(n * phi) = n + floor(n * (sqrt(5) - 1) / 2)` and the fact that
/// `n * sqrt(5)` is irrational for `n > 0`, so `floor(n * sqrt(5)) = isqrt(5 n^2)`.
pub fn floor_mul_phi(n: Term) -> Result<Term> {
    add(n, floor_div_phi(n))
}

/// `floor(n / phi) = floor(n * (sqrt(5) - 1) / 2)`, exact.
pub fn floor_div_phi(n: Term) -> Term {
    let n = u128::from(n);
    let root = (5 * n * n).isqrt();
    // root >= 2n > n, and (root - n) / 2 floors correctly because the true
    // value n*sqrt(5) lies strictly inside (root, root + 1).
    ((root - n) / 2) as Term
}

/// `floor(n * sqrt(2) + 1/2)` style rounding of `sqrt(m)`: the nearest integer
/// to the square root of `m`. Ties are impossible for integer `m`.
pub fn round_sqrt(m: Term) -> Term {
    let r = m.isqrt();
    // sqrt(m) < r + 1/2  <=>  m < r^2 + r + 1/4  <=>  m <= r^2 + r
    if u128::from(m) <= u128::from(r) * u128::from(r) + u128::from(r) {
        r
    } else {
        r + 1
    }
}
