//! Density of Aronson's sequence, the doubling-gap lemma, and finite-horizon checks of
//! identities that tie the generators together.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use num_rational::Ratio;
use rayon::prelude::*;

use crate::closedform::{self, a_segment_bounds};
use crate::engine;
use crate::oracle::MembershipOracle;
use crate::registry::{self, registry_lookup};
use crate::sequence::GeneratedSequence;
use crate::squares::{self, SquareConstraint};
use crate::term::Term;
use crate::transform::{self, aronson_transform, inverse_table};
use crate::words;
use crate::{Error, Result};

/// Statistics of `n / a(n)` over one segment of Aronson's sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityProfile {
    pub k: u32,
    pub min_ratio: Ratio<u64>,
    pub max_ratio: Ratio<u64>,
    pub argmin: Term,
    pub argmax: Term,
    pub mean_ratio: f64,
    /// Step between sampled indices in the mean; 1 means every index.
    pub stride: Term,
}

/// Segments up to this one are averaged over every index.
pub const EXACT_MEAN_SEGMENTS: u32 = 18;

/// `3/4 - ln(32/27)/4`, the limiting mean of `n / a(n)` within a segment.
/// The logarithm is natural; base 10 would give 0.7315.
pub fn average_density_constant() -> f64 {
    0.75 - (32.0f64 / 27.0).ln() / 4.0
}

/// `n / a(n)` over segment `k` of a materialized prefix of `a`.
pub fn density_profile(seq: &GeneratedSequence, k: u32) -> Result<DensityProfile> {
    let (_, end) = a_segment_bounds(k)?;
    if seq.try_get(end - 1).is_none() {
        return Err(Error::HorizonExceeded {
            query: end - 1,
            horizon: seq.end().saturating_sub(1),
        });
    }
    profile(k, |n| seq.get(n))
}

/// As [`density_profile`], evaluating `a` by its closed form.
pub fn density_profile_closed(k: u32) -> Result<DensityProfile> {
    profile(k, closedform::a_closed)
}

fn less(a: (Term, Term), b: (Term, Term)) -> bool {
    (u128::from(a.0) * u128::from(b.1)).cmp(&(u128::from(b.0) * u128::from(a.1))) == Ordering::Less
}

fn profile(k: u32, a: impl Fn(Term) -> Result<Term>) -> Result<DensityProfile> {
    let (start, end) = a_segment_bounds(k)?;
    let stride: Term = 1 << k.saturating_sub(EXACT_MEAN_SEGMENTS);
    let first = (start, a(start)?);
    let (mut lo, mut hi) = (first, first);
    let (mut sum, mut samples) = (0.0f64, 0u64);
    for n in start..end {
        let r = (n, a(n)?);
        if less(r, lo) {
            lo = r;
        }
        if less(hi, r) {
            hi = r;
        }
        if (n - start) % stride == 0 {
            sum += n as f64 / r.1 as f64;
            samples += 1;
        }
    }
    Ok(DensityProfile {
        k,
        min_ratio: Ratio::new(lo.0, lo.1),
        max_ratio: Ratio::new(hi.0, hi.1),
        argmin: lo.0,
        argmax: hi.0,
        mean_ratio: sum / samples as f64,
        stride,
    })
}

/// First `n` of the prefix where "`n` is a value of `s` iff `s(n)` is a
/// value of `s(s(.))`" fails, over the range where both sides are known.
pub fn lemma1_counterexample(s: &GeneratedSequence) -> Result<Option<Term>> {
    let sq = transform::sequence_square(s)?;
    let Some(top) = sq.last() else {
        return Ok(None);
    };
    let sq_values: HashSet<Term> = sq.terms().iter().copied().collect();
    for (n, v) in s.indexed() {
        if v > top {
            break;
        }
        let lhs = s.value_membership(n).expect("n <= s(n) <= top");
        if lhs != sq_values.contains(&v) {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Outcome of one identity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub name: String,
    pub horizon: Term,
    pub first_failure: Option<Term>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.first_failure {
            None => write!(f, "{}, {}, PASS", self.name, self.horizon),
            Some(n) => write!(f, "{}, {}, FAIL@{n}", self.name, self.horizon),
        }
    }
}

type Check = fn(Term) -> Result<Option<Term>>;

fn gen(name: &str, count: Term) -> Result<GeneratedSequence> {
    registry_lookup(name)?.generate(count as usize)
}

fn first_bad(
    range: impl IntoIterator<Item = Term>,
    mut ok: impl FnMut(Term) -> Result<bool>,
) -> Result<Option<Term>> {
    for n in range {
        if !ok(n)? {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// First index of `x` where `y` differs or has run out.
fn same_terms(x: &GeneratedSequence, y: &GeneratedSequence) -> Option<Term> {
    x.indexed()
        .find(|&(n, v)| y.try_get(n) != Some(v))
        .map(|(n, _)| n)
}

fn same_as(s: &GeneratedSequence, f: impl Fn(Term) -> Result<Term>) -> Result<Option<Term>> {
    first_bad(s.indexed().map(|(n, _)| n), |n| Ok(s.get(n)? == f(n)?))
}

/// `s(s(n)) = y*n + z` wherever `s(n)` is inside the prefix, for `n >= from`.
fn square_holds(s: &GeneratedSequence, y: Term, z: i64, from: Term) -> Option<Term> {
    squares::square_violations(s, y, z, from).first().copied()
}

/// Values `<= top` classified by `member`, against the actual values.
fn values_match(
    values: &HashSet<Term>,
    range: impl IntoIterator<Item = Term>,
    member: impl Fn(Term) -> bool,
) -> Option<Term> {
    range.into_iter().find(|v| values.contains(v) != member(*v))
}

fn c_shift(h: Term) -> Result<Option<Term>> {
    let c = gen("c", h + 1)?;
    let a = gen("a", h + 2)?;
    first_bad(0..=h, |n| Ok(c.get(n)? + 1 == a.get(n + 1)?))
}

fn somos_e(h: Term) -> Result<Option<Term>> {
    let e = gen("e", h)?;
    let at = |n| e.get(n);
    first_bad(3..=h, |m| {
        let n = m / 3;
        Ok(match m % 3 {
            0 => at(m)? == 3 * at(n)?,
            1 => at(m)? == 2 * at(n)? + at(n + 1)?,
            _ => at(m)? == at(n)? + 2 * at(n + 1)?,
        })
    })
}

fn e_closed(h: Term) -> Result<Option<Term>> {
    same_as(&gen("e", h)?, closedform::e_closed)
}

fn e_square(h: Term) -> Result<Option<Term>> {
    Ok(square_holds(&gen("e", h)?, 3, 0, 1))
}

fn e_solver(h: Term) -> Result<Option<Term>> {
    let solved = squares::solve_square(&SquareConstraint::new(3, 0, 1), h as usize)?;
    Ok(same_terms(&gen("e", h)?, &solved))
}

fn e_prime(h: Term) -> Result<Option<Term>> {
    let e = engine::generate(&registry::e_rule(), h as usize)?;
    let e1 = gen("e'", h)?;
    first_bad(1..=h, |n| Ok(e1.get(n)? + n == e.get(n)?))
}

fn a_closed(h: Term) -> Result<Option<Term>> {
    same_as(&gen("a", h)?, closedform::a_closed)
}

fn a_square(h: Term) -> Result<Option<Term>> {
    let a = gen("a", h)?;
    if a.get(a.get(1)?)? != 1 {
        return Ok(Some(1));
    }
    Ok(square_holds(&a, 2, 3, 2))
}

/// The square solver for `a(a(n)) = 2n + 3` with the three forced terms
/// that rule out the earlier solutions.
pub fn a_by_square(count: usize) -> Result<GeneratedSequence> {
    let c = SquareConstraint::new(2, 3, 1)
        .applies_from(2)
        .with_seed(1, 1)
        .with_seed(2, 4)
        .with_seed(3, 6);
    squares::solve_square(&c, count)
}

fn a_solver(h: Term) -> Result<Option<Term>> {
    Ok(same_terms(&gen("a", h)?, &a_by_square(h as usize)?))
}

fn a_prime_closed(h: Term) -> Result<Option<Term>> {
    same_as(&gen("a'", h)?, closedform::a_prime_closed)
}

fn a_prime_square(h: Term) -> Result<Option<Term>> {
    Ok(square_holds(&gen("a'", h)?, 2, 3, 2))
}

fn value_set(s: &GeneratedSequence) -> HashSet<Term> {
    s.terms().iter().copied().collect()
}

fn a_even_member(v: Term) -> bool {
    if matches!(v, 4 | 6 | 8) {
        return true;
    }
    let m = v / 2;
    (1..60).any(|k| {
        let p: Term = 1 << k;
        9 * (p / 2) - 1 <= m && m <= 6 * p - 2
    })
}

fn a_odd_membership(h: Term) -> Result<Option<Term>> {
    let a = gen("a", h)?;
    let top = a.last().unwrap_or(0);
    let vals = value_set(&a);
    Ok(values_match(&vals, (1..=top).step_by(2), |v| {
        v != 3 && v != 5
    }))
}

fn a_even_membership(h: Term) -> Result<Option<Term>> {
    let a = gen("a", h)?;
    let top = a.last().unwrap_or(0);
    let vals = value_set(&a);
    Ok(values_match(&vals, (2..=top).step_by(2), a_even_member))
}

fn b_closed(h: Term) -> Result<Option<Term>> {
    same_as(&gen("b", h)?, closedform::b_closed)
}

fn b_membership(h: Term) -> Result<Option<Term>> {
    // b(n) >= n for n >= 4, so every value <= h has appeared by index h
    let b = gen("b", h)?;
    let vals = value_set(&b);
    Ok(values_match(&vals, 1..=h, |v| {
        v % 2 == 1 || v == 2 || (v % 4 == 0 && v >= 8)
    }))
}

fn g_closed(h: Term) -> Result<Option<Term>> {
    same_as(&gen("g", h)?, closedform::g_closed)
}

fn g_solver(h: Term) -> Result<Option<Term>> {
    let solved = squares::theorem1_sequence(2, 1, h as usize)?;
    Ok(same_terms(&gen("g", h)?, &solved))
}

fn g_square(h: Term) -> Result<Option<Term>> {
    Ok(square_holds(&gen("g", h)?, 2, 1, 1))
}

fn g_membership(h: Term) -> Result<Option<Term>> {
    let g = gen("g", h)?;
    let top = g.last().unwrap_or(0);
    first_bad(1..=h.min(top), |n| {
        let v = g.get(n)?;
        Ok(g.value_membership(n) == Some(v % 2 == 1 && v >= 3))
    })
}

fn g_differences(h: Term) -> Result<Option<Term>> {
    let g = gen("g", h)?;
    let mut model = words::Word::new();
    let mut k = 0;
    while model.len() + 1 < h {
        model.push_run(1, 1 << k);
        model.push_run(2, 1 << k);
        k += 1;
    }
    let computed = words::difference_word(&g)?;
    Ok(model.first_mismatch(&computed).map(|p| p + 1))
}

fn g_recurrence(h: Term) -> Result<Option<Term>> {
    let g = gen("g", h)?;
    let at = |n: Term| if n == 0 { Ok(0) } else { g.get(n) };
    first_bad(2..=h, |m| {
        let n = m / 2;
        Ok(if m % 2 == 0 {
            at(m)? == at(n)? + at(n - 1)? + 1
        } else {
            at(m)? == 2 * at(n)? + 1
        })
    })
}

fn a_from_g(h: Term) -> Result<Option<Term>> {
    let a = gen("a", h)?;
    let g = gen("g", h / 3 + 2)?;
    first_bad(3..=h, |m| {
        let n = m / 3;
        let (gn, gn1) = (g.get(n)?, g.get(n + 1)?);
        Ok(a.get(m)?
            == match m % 3 {
                0 => 3 * gn,
                1 => 2 * gn + gn1,
                _ => gn + 2 * gn1,
            })
    })
}

fn d_from_g(h: Term) -> Result<Option<Term>> {
    let d = gen("d", h)?;
    let g = gen("g", h + 1)?;
    first_bad(1..=h, |n| Ok(d.get(n)? + 1 == g.get(n + 1)?))
}

fn g_prime_shift(h: Term) -> Result<Option<Term>> {
    let gp = gen("g'", h - 1)?;
    let g = gen("g", h)?;
    first_bad(2..=h, |n| Ok(gp.get(n)? == g.get(n - 1)? + 1))
}

fn g_prime_square(h: Term) -> Result<Option<Term>> {
    Ok(square_holds(&gen("g'", h - 1)?, 2, 0, 2))
}

fn g_prime_solver(h: Term) -> Result<Option<Term>> {
    let c = SquareConstraint::new(2, 0, 2).with_seed(2, 3);
    let solved = squares::solve_square(&c, h as usize - 1)?;
    Ok(same_terms(&gen("g'", h - 1)?, &solved))
}

fn d_one_directional(h: Term) -> Result<Option<Term>> {
    // d prefixed by d(0) = 0 is "n in d only if d(n) is even" from n = 0
    let rule = engine::RuleSpec::new(MembershipOracle::evens(0), engine::Mode::OnlyIf, 0);
    let d0 = engine::generate(&rule, h as usize + 1)?;
    let d = gen("d", h)?;
    if d0.get(0)? != 0 {
        return Ok(Some(0));
    }
    first_bad(1..=h, |n| Ok(d0.get(n)? == d.get(n)?))
}

fn dprime_closed(h: Term) -> Result<Option<Term>> {
    let d = gen("d'", h)?;
    let top = d.last().unwrap_or(0);
    let vals = value_set(&d);
    let tri = MembershipOracle::triangular(1);
    Ok(values_match(&vals, 1..=top, |v| {
        !tri.contains(v).expect("unbounded")
    }))
}

fn dprime_parity(h: Term) -> Result<Option<Term>> {
    let d = gen("d'", h)?;
    first_bad(2..=h, |n| match d.try_get(d.get(n)?) {
        Some(w) => Ok(w % 2 != n % 2),
        None => Ok(true),
    })
}

fn i_prime_shift(h: Term) -> Result<Option<Term>> {
    let i = gen("i", h + 2)?;
    let ip = gen("i'", h + 1)?;
    first_bad(0..=h, |n| Ok(ip.get(n)? + 1 == i.get(n + 1)?))
}

fn i_square(h: Term) -> Result<Option<Term>> {
    Ok(square_holds(&gen("i", h + 1)?, 4, 0, 0).or(square_holds(&gen("i'", h + 1)?, 4, 3, 0)))
}

fn a_language(h: Term) -> Result<Option<Term>> {
    let computed = words::difference_word(&gen("a", h)?)?;
    let mut segments = 2;
    let mut model = words::a_difference_language(segments)?;
    while model.len() < computed.len() {
        segments += 1;
        model = words::a_difference_language(segments)?;
    }
    Ok(model.first_mismatch(&computed).map(|p| p + 1))
}

fn h_language(h: Term) -> Result<Option<Term>> {
    let computed = words::difference_word(&gen("h", h)?)?;
    let mut segments = 1;
    let mut model = words::h_difference_language(segments)?;
    while model.len() < computed.len() {
        segments += 1;
        model = words::h_difference_language(segments)?;
    }
    Ok(model.first_mismatch(&computed).map(|p| p + 1))
}

fn fake_even_language(h: Term) -> Result<Option<Term>> {
    let computed = words::difference_word(&gen("i", h + 1)?)?;
    let mut segments = 1;
    let mut model = words::fake_even_segments(segments)?;
    while model.len() < computed.len() {
        segments += 1;
        model = words::fake_even_segments(segments)?;
    }
    Ok(model.first_mismatch(&computed))
}

fn inverse_a_is_odd(h: Term) -> Result<Option<Term>> {
    let beta = gen("inverse-a", h)?;
    first_bad(1..=h, |n| Ok(beta.get(n)? == 2 * n - 1))
}

fn inverse_squares_segments(h: Term) -> Result<Option<Term>> {
    let beta = gen("inverse-squares", h)?;
    let mut model = Vec::with_capacity(h as usize);
    let mut k: Term = 1;
    while (model.len() as Term) < h {
        let r = k.isqrt();
        if k == 2 {
            model.push(3);
        } else if r * r == k {
            model.push(k * k);
        } else {
            model.extend((k - 1) * (k - 1) + 1..k * k);
        }
        k += 1;
    }
    first_bad(1..=h, |n| Ok(beta.get(n)? == model[n as usize - 1]))
}

fn inverse_wythoff_formula(h: Term) -> Result<Option<Term>> {
    let beta = gen("inverse-wythoff", h)?;
    let mut model = Vec::new();
    for k in 1..=h {
        let f = crate::term::floor_mul_phi(k)?;
        model.push(f + k - 1);
        if k >= 2 {
            model.push(2 * f + k - 1);
        }
    }
    model.sort_unstable();
    first_bad(1..=h, |n| Ok(beta.get(n)? == model[n as usize - 1]))
}

/// `alpha` -> its inverse table's hot row -> transform, against `alpha`.
pub fn round_trip_counterexample(alpha: &GeneratedSequence) -> Result<Option<Term>> {
    let beta = inverse_table(alpha)?.hot_oracle(alpha.n0())?;
    let back = aronson_transform(&beta, alpha.n0(), alpha.len())?;
    Ok(same_terms(alpha, &back))
}

fn round_trip(h: Term) -> Result<Option<Term>> {
    let sets = [
        MembershipOracle::squares(1),
        MembershipOracle::primes(1),
        MembershipOracle::triangular(1),
        MembershipOracle::lower_wythoff(1),
    ];
    for beta in &sets {
        if let Some(n) = round_trip_counterexample(&beta.enumerate(h as usize)?)? {
            return Ok(Some(n));
        }
    }
    round_trip_counterexample(&gen("a", h)?)
}

fn golomb_self_describing(h: Term) -> Result<Option<Term>> {
    let g = gen("golomb", h)?;
    let mut counts = vec![0 as Term; h as usize + 2];
    for &v in g.terms() {
        if let Some(c) = counts.get_mut(v as usize) {
            *c += 1;
        }
    }
    // values below the last one have all their occurrences inside the prefix
    let last = g.last().unwrap_or(0);
    first_bad(1..last, |n| Ok(counts[n as usize] == g.get(n)?))
}

fn lemma1_a(h: Term) -> Result<Option<Term>> {
    lemma1_counterexample(&gen("a", h)?)
}

const IDENTITIES: &[(&str, Check)] = &[
    ("c_shift", c_shift),
    ("somos_e", somos_e),
    ("e_closed", e_closed),
    ("e_square", e_square),
    ("e_solver", e_solver),
    ("e_prime", e_prime),
    ("a_closed", a_closed),
    ("a_square", a_square),
    ("a_solver", a_solver),
    ("a_prime_closed", a_prime_closed),
    ("a_prime_square", a_prime_square),
    ("a_odd_membership", a_odd_membership),
    ("a_even_membership", a_even_membership),
    ("b_closed", b_closed),
    ("b_membership", b_membership),
    ("g_closed", g_closed),
    ("g_solver", g_solver),
    ("g_square", g_square),
    ("g_membership", g_membership),
    ("g_differences", g_differences),
    ("g_recurrence", g_recurrence),
    ("a_from_g", a_from_g),
    ("d_from_g", d_from_g),
    ("d_one_directional", d_one_directional),
    ("g_prime_shift", g_prime_shift),
    ("g_prime_square", g_prime_square),
    ("g_prime_solver", g_prime_solver),
    ("dprime_closed", dprime_closed),
    ("dprime_parity", dprime_parity),
    ("i_prime_shift", i_prime_shift),
    ("i_square", i_square),
    ("a_language", a_language),
    ("h_language", h_language),
    ("fake_even_language", fake_even_language),
    ("inverse_a_is_odd", inverse_a_is_odd),
    ("inverse_squares_segments", inverse_squares_segments),
    ("inverse_wythoff_formula", inverse_wythoff_formula),
    ("round_trip", round_trip),
    ("golomb_self_describing", golomb_self_describing),
    ("lemma1_a", lemma1_a),
];

/// Names accepted by [`verify_identity`].
pub fn identity_names() -> impl Iterator<Item = &'static str> {
    IDENTITIES.iter().map(|&(name, _)| name)
}

/// Checks the named identity for indices up to `horizon`.
pub fn verify_identity(name: &str, horizon: Term) -> Result<IdentityReport> {
    let &(name, check) = IDENTITIES
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::UnknownIdentity(name.to_string()))?;
    if horizon < 4 {
        return Err(Error::InvalidParameters(format!(
            "horizon {horizon} is below 4"
        )));
    }
    Ok(IdentityReport {
        name: name.to_string(),
        horizon,
        first_failure: check(horizon)?,
    })
}

/// Every identity at `horizon` and every registry prefix, checked in
/// parallel; reports come back in a fixed order.
pub fn verify_all(horizon: Term) -> Vec<Result<IdentityReport>> {
    let identities = IDENTITIES
        .par_iter()
        .map(|&(name, _)| verify_identity(name, horizon));
    let truths = registry::registry().into_par_iter().map(|e| {
        Ok(IdentityReport {
            name: format!("prefix:{}", e.name),
            horizon: e.ground_truth.last().map_or(0, |&(n, _)| n),
            first_failure: e.check_ground_truth()?,
        })
    });
    identities.chain(truths).collect()
}
