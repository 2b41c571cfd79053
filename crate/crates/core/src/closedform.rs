//! Direct formulas for several of the sequences, evaluated in exact integer
//! arithmetic. They serve as independent checks on the generators.
//!
//! Most of them share one shape: the indices split into segments `k`, each
//! centred on some index `c_k`, and for an offset `j` from the centre the
//! value is `v_k + (3j + |j|)/2` (slope 1 left of the centre, 2 right of it).

use crate::sequence::GeneratedSequence;
use crate::term::{self, Term};
use crate::{Error, Result};

/// Position of an index inside its segment: segment number `k` and signed
/// offset `j` from the segment's centre.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SegmentIndex {
    pub k: u32,
    pub j: i64,
}

/// A family of segments `[centre(k) - half(k), centre(k) + half(k))`.
struct Segments<C, H> {
    centre: C,
    half: H,
}

impl<C, H> Segments<C, H>
where
    C: Fn(u32) -> Option<i128>,
    H: Fn(u32) -> Option<i128>,
{
    fn locate(&self, n: Term) -> Result<SegmentIndex> {
        let n = i128::from(n);
        for k in 0..128 {
            let c = (self.centre)(k).ok_or_else(|| overflow(n))?;
            let h = (self.half)(k).ok_or_else(|| overflow(n))?;
            if n < c - h {
                break;
            }
            if n < c + h {
                let j = i64::try_from(n - c).map_err(|_| overflow(n))?;
                return Ok(SegmentIndex { k, j });
            }
        }
        Err(Error::InvalidParameters(format!("{n} lies in no segment")))
    }
}

fn overflow(n: i128) -> Error {
    Error::Overflow(format!("segment search for {n}"))
}

fn pow2(k: u32) -> Option<i128> {
    1i128.checked_shl(k).filter(|&p| p > 0 && k < 120)
}

fn pow_i(base: i128, k: u32) -> Option<i128> {
    base.checked_pow(k).filter(|&p| p < i128::MAX / 1024)
}

/// `(3j + |j|) / 2`: `j` for `j <= 0`, `2j` for `j > 0`.
fn bent(j: i128) -> i128 {
    let num = 3 * j + j.abs();
    debug_assert_eq!(num % 2, 0);
    num / 2
}

/// Segment of `n >= 3` for sequence a: centre `9*2^k - 3`, half-width `3*2^k`.
pub fn a_segment(n: Term) -> Result<SegmentIndex> {
    if n < 3 {
        return Err(Error::InvalidParameters(format!(
            "a has no segment for n = {n}"
        )));
    }
    Segments {
        centre: |k| pow2(k).map(|p| 9 * p - 3),
        half: |k| pow2(k).map(|p| 3 * p),
    }
    .locate(n)
}

/// Indices `[start, end)` of segment `k` of sequence a.
pub fn a_segment_bounds(k: u32) -> Result<(Term, Term)> {
    let p = pow2(k).ok_or_else(|| Error::Overflow(format!("2^{k}")))?;
    Ok((term::from_wide(6 * p - 3)?, term::from_wide(12 * p - 3)?))
}

/// Centre index `9*2^k - 3` of segment `k` of sequence a.
pub fn a_segment_midpoint(k: u32) -> Result<Term> {
    let p = pow2(k).ok_or_else(|| Error::Overflow(format!("2^{k}")))?;
    term::from_wide(9 * p - 3)
}

/// Aronson's sequence: `a(9*2^k - 3 + j) = 12*2^k - 3 + (3j + |j|)/2`.
pub fn a_closed(n: Term) -> Result<Term> {
    match n {
        0 => Err(Error::InvalidParameters("a is indexed from 1".into())),
        1 => Ok(1),
        2 => Ok(4),
        _ => {
            let SegmentIndex { k, j } = a_segment(n)?;
            term::from_wide(12 * pow2(k).expect("located") - 3 + bent(j.into()))
        }
    }
}

/// The variant seeded only by `a'(1) = 1`:
/// `a'(6*2^k - 3 + j) = 8*2^k - 3 + (3j + |j|)/2`, `-2^(k+1) <= j < 2^(k+1)`.
pub fn a_prime_closed(n: Term) -> Result<Term> {
    match n {
        0 => Err(Error::InvalidParameters("a' is indexed from 1".into())),
        1 => Ok(1),
        _ => {
            let SegmentIndex { k, j } = Segments {
                centre: |k| pow2(k).map(|p| 6 * p - 3),
                half: |k| pow2(k).map(|p| 2 * p),
            }
            .locate(n)?;
            term::from_wide(8 * pow2(k).expect("located") - 3 + bent(j.into()))
        }
    }
}

/// `e(2*3^k + j) = 3^(k+1) + 2j + |j|`, `-3^k <= j < 3^k`.
pub fn e_closed(n: Term) -> Result<Term> {
    if n == 0 {
        return Err(Error::InvalidParameters("e is indexed from 1".into()));
    }
    let SegmentIndex { k, j } = Segments {
        centre: |k| pow_i(3, k).map(|p| 2 * p),
        half: |k| pow_i(3, k),
    }
    .locate(n)?;
    let j = i128::from(j);
    term::from_wide(pow_i(3, k + 1).ok_or_else(|| overflow(n.into()))? + 2 * j + j.abs())
}

/// `g(3*2^k - 1 + j) = 2*2^(k+1) - 1 + (3j + |j|)/2`, `-2^k <= j < 2^k`.
pub fn g_closed(n: Term) -> Result<Term> {
    if n == 0 {
        return Err(Error::InvalidParameters("g is indexed from 1".into()));
    }
    let SegmentIndex { k, j } = Segments {
        centre: |k| pow2(k).map(|p| 3 * p - 1),
        half: pow2,
    }
    .locate(n)?;
    term::from_wide(4 * pow2(k).expect("located") - 1 + bent(j.into()))
}

/// Checks the hypotheses under which `f(f(n)) = y n + z` has the regular
/// solution: `y >= 2`, `y + z >= 1`, `2y + z >= 4`, `y` and `z` of opposite
/// parity.
pub fn check_theorem1_params(y: Term, z: i64) -> Result<()> {
    let (yi, zi) = (i128::from(y), i128::from(z));
    if y < 2 || yi + zi < 1 || 2 * yi + zi < 4 {
        return Err(Error::InvalidParameters(format!(
            "need y >= 2, y + z >= 1, 2y + z >= 4 (y = {y}, z = {z})"
        )));
    }
    if (yi + zi) % 2 == 0 {
        return Err(Error::InvalidParameters(format!(
            "y = {y} and z = {z} must have opposite parity"
        )));
    }
    Ok(())
}

/// The regular solution of `f(f(n)) = y n + z` with `f(1) = (y + z + 1)/2`.
///
/// With `D = 2(y - 1)` and `h = (y + z - 1)/2`, segment `k` is centred on
/// `((y+1)(y+z-1) y^k - 2z) / D` with half-width `h y^k`, and
/// `D f(centre + j) = 2(y+z-1) y^(k+1) - 2z + (y^2 - 1) j + (y - 1)^2 |j|`.
pub fn f_closed(n: Term, y: Term, z: i64) -> Result<Term> {
    check_theorem1_params(y, z)?;
    let (yi, zi) = (i128::from(y), i128::from(z));
    if n == 0 {
        return Err(Error::InvalidParameters("f is indexed from 1".into()));
    }
    if n == 1 {
        return term::from_wide((yi + zi + 1) / 2);
    }
    if yi + zi == 1 {
        // every segment is empty; f(n) = u(n-1) + 1 with u(u(m)) = y m
        return Err(Error::InvalidParameters(format!(
            "no segment formula when y + z = 1 (y = {y}, z = {z})"
        )));
    }
    let d = 2 * (yi - 1);
    let h = (yi + zi - 1) / 2;
    let exact = |num: i128| {
        assert_eq!(num % d, 0, "segment formula is integral");
        num / d
    };
    let SegmentIndex { k, j } = Segments {
        centre: |k| {
            let p = pow_i(yi, k)?;
            Some(exact((yi + 1) * (yi + zi - 1) * p - 2 * zi))
        },
        half: |k| pow_i(yi, k).map(|p| h * p),
    }
    .locate(n)?;
    let j = i128::from(j);
    let p = pow_i(yi, k + 1).ok_or_else(|| overflow(n.into()))?;
    let num = 2 * (yi + zi - 1) * p - 2 * zi + (yi * yi - 1) * j + (yi - 1) * (yi - 1) * j.abs();
    term::from_wide(exact(num))
}

/// The non-monotone sequence b: `b(1..4) = 1, 3, 5, 2`, then
/// `b(4t-2) = 4t`, `b(4t-1) = 6t-3`, `b(4t) = 6t-1`, `b(4t+1) = 6t+1`.
pub fn b_closed(n: Term) -> Result<Term> {
    let six = |t: Term| term::mul(6, t);
    match n {
        0 => Err(Error::InvalidParameters("b is indexed from 1".into())),
        1..=4 => Ok([1, 3, 5, 2][n as usize - 1]),
        _ => match n % 4 {
            2 => term::add(n, 2),
            3 => term::sub(six(n.div_ceil(4))?, 3),
            0 => term::sub(six(n / 4)?, 1),
            _ => term::add(six((n - 1) / 4)?, 1),
        },
    }
}

/// `d'(n) = n + round(sqrt(2n))`, the complement of the triangular numbers.
/// `sqrt(2n)` is never a half-integer, so rounding is unambiguous.
pub fn dprime_closed(n: Term) -> Result<Term> {
    term::add(n, term::round_sqrt(term::mul(2, n)?))
}

/// Golomb's sequence: `G(n)` is the number of times `n` occurs, via
/// `G(1) = 1`, `G(n) = 1 + G(n - G(G(n - 1)))`.
pub fn golomb(count: usize) -> Result<GeneratedSequence> {
    let mut g: Vec<Term> = Vec::with_capacity(count + 1);
    g.push(0); // g[0] unused
    for n in 1..=count {
        let v = if n == 1 {
            1
        } else {
            let inner = g[g[n - 1] as usize] as usize;
            1 + g[n - inner]
        };
        g.push(v);
    }
    g.remove(0);
    GeneratedSequence::new(1, g, crate::sequence::Provenance::new("golomb", false))
}

/// `phi^(2 - phi) * n^(phi - 1)`, the asymptotic size of `G(n)`.
pub fn golomb_estimate(n: Term) -> f64 {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    phi.powf(2.0 - phi) * (n as f64).powf(phi - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE_A: [Term; 12] = [1, 4, 6, 7, 8, 9, 11, 13, 15, 16, 17, 18];

    #[test]
    fn a_examples() {
        for (i, &v) in TABLE_A.iter().enumerate() {
            assert_eq!(a_closed(i as Term + 1).unwrap(), v);
        }
        assert_eq!(a_closed(44).unwrap(), 67);
        assert_eq!(a_segment(3).unwrap(), SegmentIndex { k: 0, j: -3 });
        assert!(a_closed(0).is_err());
    }

    #[test]
    fn a_segments_tile_the_indices() {
        let mut expected_start = 3;
        for k in 0..40 {
            let (s, e) = a_segment_bounds(k).unwrap();
            assert_eq!(s, expected_start);
            assert_eq!(
                a_segment(s).unwrap(),
                SegmentIndex {
                    k,
                    j: -3 * (1 << k)
                }
            );
            assert_eq!(a_segment(e - 1).unwrap().k, k);
            expected_start = e;
        }
        for n in 3..5000 {
            let SegmentIndex { k, j } = a_segment(n).unwrap();
            assert_eq!(9 * (1i64 << k) - 3 + j, n as i64);
        }
    }

    #[test]
    fn a_prime_examples() {
        let want = [1, 4, 5, 7, 9, 10, 11, 12, 13, 15, 17, 19, 21, 22];
        for (i, &v) in want.iter().enumerate() {
            assert_eq!(a_prime_closed(i as Term + 1).unwrap(), v);
        }
    }

    #[test]
    fn e_examples() {
        let want = [2, 3, 6, 7, 8, 9, 12, 15, 18, 19];
        for (i, &v) in want.iter().enumerate() {
            assert_eq!(e_closed(i as Term + 1).unwrap(), v);
        }
    }

    #[test]
    fn g_examples() {
        let want = [2, 3, 5, 6, 7, 9, 11, 12, 13, 14];
        for (i, &v) in want.iter().enumerate() {
            assert_eq!(g_closed(i as Term + 1).unwrap(), v);
        }
    }

    #[test]
    fn f_matches_e_and_g() {
        for n in 1..20_000 {
            assert_eq!(f_closed(n, 3, 0).unwrap(), e_closed(n).unwrap());
            assert_eq!(f_closed(n, 2, 1).unwrap(), g_closed(n).unwrap());
        }
        assert_eq!(f_closed(1, 5, 2).unwrap(), 4);
    }

    #[test]
    fn f_rejects_bad_parameters() {
        for (y, z) in [(1, 0), (2, 0), (3, -3), (2, -1), (4, 0)] {
            assert!(
                matches!(f_closed(5, y, z), Err(Error::InvalidParameters(_))),
                "{y} {z}"
            );
        }
    }

    #[test]
    fn f_composes_to_the_affine_map() {
        for y in 2..10u64 {
            for z in -(y as i64) + 2..10 {
                if check_theorem1_params(y, z).is_err() {
                    continue;
                }
                let f: Vec<Term> = (1..3000).map(|n| f_closed(n, y, z).unwrap()).collect();
                assert!(f.windows(2).all(|w| w[0] < w[1]));
                for n in 1..200u64 {
                    let inner = f[n as usize - 1];
                    let outer = f_closed(inner, y, z).unwrap();
                    assert_eq!(outer as i64, y as i64 * n as i64 + z, "y={y} z={z} n={n}");
                }
            }
        }
    }

    #[test]
    fn b_examples() {
        let want = [
            1, 3, 5, 2, 7, 8, 9, 11, 13, 12, 15, 17, 19, 16, 21, 23, 25, 20, 27, 29,
        ];
        for (i, &v) in want.iter().enumerate() {
            assert_eq!(b_closed(i as Term + 1).unwrap(), v);
        }
    }

    #[test]
    fn dprime_examples() {
        let want = [2, 4, 5, 7, 8, 9, 11, 12, 13, 14, 16];
        for (i, &v) in want.iter().enumerate() {
            assert_eq!(dprime_closed(i as Term + 1).unwrap(), v);
        }
    }

    #[test]
    fn golomb_describes_itself() {
        let g = golomb(5000).unwrap();
        assert_eq!(
            &g.terms()[..20],
            &[1, 2, 2, 3, 3, 4, 4, 4, 5, 5, 5, 6, 6, 6, 6, 7, 7, 7, 7, 8]
        );
        // run-length self-description
        let t = g.terms();
        let mut runs: Vec<(Term, Term)> = Vec::new();
        for &v in t {
            match runs.last_mut() {
                Some((x, c)) if *x == v => *c += 1,
                _ => runs.push((v, 1)),
            }
        }
        runs.pop(); // last run may be cut short
        for (v, c) in runs {
            assert_eq!(t[v as usize - 1], c, "value {v}");
        }
    }

    #[test]
    fn golomb_estimate_is_close() {
        let g = golomb(10_000).unwrap();
        for n in 1000..=10_000u64 {
            let diff = (g.get(n).unwrap() as f64 - golomb_estimate(n)).abs();
            assert!(diff < 1.0, "n={n} diff={diff}");
        }
    }
}
