//! Words over small integer alphabets, D0L morphisms, and the difference
//! words of several sequences.
//!
//! Words are stored run-length encoded, since the blocks involved double or
//! quadruple in length from one segment to the next.

use std::collections::BTreeMap;
use std::fmt;

use crate::sequence::GeneratedSequence;
use crate::{Error, Result};

pub type Letter = u32;

/// A finite word, kept as maximal runs `(letter, count)` with `count > 0`.
/// Two words are equal iff their expansions are equal.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word {
    runs: Vec<(Letter, u64)>,
}

impl Word {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_letters(letters: &[Letter]) -> Self {
        let mut w = Word::new();
        for &l in letters {
            w.push_run(l, 1);
        }
        w
    }

    pub fn from_runs(runs: &[(Letter, u64)]) -> Self {
        let mut w = Word::new();
        for &(l, c) in runs {
            w.push_run(l, c);
        }
        w
    }

    pub fn push_run(&mut self, letter: Letter, count: u64) {
        if count == 0 {
            return;
        }
        match self.runs.last_mut() {
            Some((l, c)) if *l == letter => *c += count,
            _ => self.runs.push((letter, count)),
        }
    }

    pub fn push(&mut self, letter: Letter) {
        self.push_run(letter, 1);
    }

    pub fn append(&mut self, other: &Word) {
        for &(l, c) in &other.runs {
            self.push_run(l, c);
        }
    }

    pub fn runs(&self) -> &[(Letter, u64)] {
        &self.runs
    }

    pub fn len(&self) -> u64 {
        self.runs.iter().map(|&(_, c)| c).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.runs
            .iter()
            .flat_map(|&(l, c)| std::iter::repeat_n(l, c as usize))
    }

    pub fn to_letters(&self) -> Vec<Letter> {
        self.letters().collect()
    }

    pub fn reversed(&self) -> Word {
        Word {
            runs: self.runs.iter().rev().copied().collect(),
        }
    }

    /// The first `len` letters.
    pub fn prefix(&self, len: u64) -> Word {
        let mut w = Word::new();
        let mut left = len;
        for &(l, c) in &self.runs {
            if left == 0 {
                break;
            }
            let take = c.min(left);
            w.push_run(l, take);
            left -= take;
        }
        w
    }

    /// Position of the first letter where the two words differ, comparing
    /// only their common length.
    pub fn first_mismatch(&self, other: &Word) -> Option<u64> {
        self.letters()
            .zip(other.letters())
            .position(|(a, b)| a != b)
            .map(|p| p as u64)
    }
}

impl fmt::Display for Word {
    /// Runs longer than one letter print as `letter^count`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &(l, c)) in self.runs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            if c == 1 {
                write!(f, "{l}")?;
            } else {
                write!(f, "{l}^{c}")?;
            }
        }
        Ok(())
    }
}

/// A letter-to-word substitution applied to every letter in parallel.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Morphism {
    rules: BTreeMap<Letter, Word>,
}

impl Morphism {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rule(mut self, letter: Letter, image: &[Letter]) -> Self {
        self.rules.insert(letter, Word::from_letters(image));
        self
    }

    pub fn image(&self, letter: Letter) -> Option<&Word> {
        self.rules.get(&letter)
    }

    /// Applies the morphism to `w`.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        let mut out = Word::new();
        for &(l, c) in w.runs() {
            let image = self.rules.get(&l).ok_or(Error::MissingRule(l))?;
            if let [(m, k)] = image.runs() {
                out.push_run(*m, k * c);
            } else {
                for _ in 0..c {
                    out.append(image);
                }
            }
        }
        Ok(out)
    }
}

pub fn apply_morphism(m: &Morphism, w: &Word) -> Result<Word> {
    m.apply(w)
}

/// First differences `s(n+1) - s(n)` of an increasing prefix.
pub fn difference_word(s: &GeneratedSequence) -> Result<Word> {
    if !s.is_monotone() {
        return Err(Error::NonMonotoneInput { index: s.n0() });
    }
    let mut w = Word::new();
    for p in s.terms().windows(2) {
        let d = Letter::try_from(p[1] - p[0])
            .map_err(|_| Error::Overflow(format!("difference {}", p[1] - p[0])))?;
        w.push(d);
    }
    Ok(w)
}

/// `1 -> 2`, `2 -> 1 1`.
pub fn theta_a() -> Morphism {
    Morphism::new().rule(1, &[2]).rule(2, &[1, 1])
}

/// `i -> 1^(i-1) (7 - i)` on the letters 1..=6.
pub fn theta_h() -> Morphism {
    (1..=6).fold(Morphism::new(), |m, i| {
        let mut image = vec![1; i as usize - 1];
        image.push(7 - i);
        m.rule(i, &image)
    })
}

/// Iterates `theta` from `start`, returning `start, theta(start), ...`
/// (`count` words).
pub fn d0l_orbit(theta: &Morphism, start: Word, count: usize) -> Result<Vec<Word>> {
    let mut out = vec![start];
    while out.len() < count {
        let next = theta.apply(out.last().expect("nonempty"))?;
        out.push(next);
    }
    out.truncate(count);
    Ok(out)
}

/// Differences of Aronson's sequence: `3 2`, then `S_0 = 1 1 1` and
/// `S_(k+1) = theta_a(S_k)`; `num_segments` words counting `3 2` as the first.
pub fn a_difference_language(num_segments: usize) -> Result<Word> {
    let mut w = Word::from_letters(&[3, 2]);
    if num_segments > 1 {
        for s in d0l_orbit(&theta_a(), Word::from_letters(&[1, 1, 1]), num_segments - 1)? {
            w.append(&s);
        }
    }
    Ok(w)
}

/// Differences of the multiples-of-6 sequence: `S_0 = 4`, `S_(k+1) = theta_h(S_k)`.
pub fn h_difference_language(num_segments: usize) -> Result<Word> {
    let mut w = Word::new();
    for s in d0l_orbit(&theta_h(), Word::from_letters(&[4]), num_segments)? {
        w.append(&s);
    }
    Ok(w)
}

/// Letters preceding the first segment of the fake-even differences.
pub fn fake_even_prefix() -> Word {
    Word::from_letters(&[2, 2, 1])
}

/// Segment `k >= 1` of the fake-even differences: `3 S_k 2 T_k`, with
/// `S_k` the reversal of `1^(2^1) 4^(2^0) 1^(2^3) 4^(2^2) ... 1^(2^(2k-1)) 4^(2^(2k-2))`
/// and `T_k` the reversal of `1^(2^0) 4^(2^1) 1^(2^2) ... 4^(2^(2k-1)) 1^(2^(2k))`.
pub fn fake_even_segment(k: u32) -> Result<Word> {
    if k == 0 || k > 30 {
        return Err(Error::InvalidParameters(format!(
            "segment {k} outside 1..=30"
        )));
    }
    let mut s = Word::new();
    for i in 1..=k {
        s.push_run(1, 1 << (2 * i - 1));
        s.push_run(4, 1 << (2 * i - 2));
    }
    let mut t = Word::new();
    for e in 0..=2 * k {
        t.push_run(if e % 2 == 0 { 1 } else { 4 }, 1 << e);
    }
    let mut w = Word::from_letters(&[3]);
    w.append(&s.reversed());
    w.push(2);
    w.append(&t.reversed());
    Ok(w)
}

/// The prefix `2 2 1` followed by segments `1..=num_segments`.
pub fn fake_even_segments(num_segments: u32) -> Result<Word> {
    let mut w = fake_even_prefix();
    for k in 1..=num_segments {
        w.append(&fake_even_segment(k)?);
    }
    Ok(w)
}

/// Compares a model word against a computed difference word on their
/// common length, reporting the first disagreement as an error.
pub fn check_model(name: &str, model: &Word, computed: &Word) -> Result<()> {
    match model.first_mismatch(computed) {
        None => Ok(()),
        Some(p) => Err(Error::Contradiction(format!(
            "{name}: model and computed differences disagree at letter {p}"
        ))),
    }
}
