//! Lexicographically least increasing solutions of `s(s(n)) = y n + z`.
//!
//! The solver keeps a partial assignment `index -> value` and closes it under
//! the consequences of the constraint after every commitment:
//!
//! * `s(i) = v` with `i >= from` forces `s(v) = y i + z`;
//! * `v = y k + z` with `k >= from` forces `s(k) = i` (s is injective);
//! * two known points with no slack between them force every index between;
//! * two adjacent indices may not skip a value `y k + z`, since every such
//!   value must be taken.
//!
//! Free indices are filled left to right with the smallest consistent value,
//! backtracking chronologically on contradiction.

use std::collections::BTreeMap;

use crate::closedform::check_theorem1_params;
use crate::sequence::{GeneratedSequence, Provenance};
use crate::term::Term;
use crate::{Error, Result};

/// `s(s(n)) = y n + z` for all `n >= applies_from`, over an increasing
/// sequence indexed from `n0` with values `>= n0`, plus forced terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareConstraint {
    pub y: Term,
    pub z: i64,
    pub n0: Term,
    pub applies_from: Term,
    pub forced: Vec<(Term, Term)>,
}

/// Parameter pairs of equal parity accepted without seeds.
const WHITELIST: [(Term, i64); 4] = [(4, 0), (4, 3), (2, 0), (2, 3)];

impl SquareConstraint {
    pub fn new(y: Term, z: i64, n0: Term) -> Self {
        SquareConstraint {
            y,
            z,
            n0,
            applies_from: n0,
            forced: Vec::new(),
        }
    }

    pub fn with_seed(mut self, index: Term, value: Term) -> Self {
        self.forced.push((index, value));
        self
    }

    pub fn applies_from(mut self, from: Term) -> Self {
        self.applies_from = from;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.y < 2 {
            return Err(Error::InvalidParameters(format!(
                "y = {} must be >= 2",
                self.y
            )));
        }
        let equal_parity = (i128::from(self.y) + i128::from(self.z)) % 2 == 0;
        if equal_parity && self.forced.is_empty() && !WHITELIST.contains(&(self.y, self.z)) {
            return Err(Error::InvalidParameters(format!(
                "y = {} and z = {} have equal parity; supply seed terms",
                self.y, self.z
            )));
        }
        let mut seeds = self.forced.clone();
        seeds.sort_unstable();
        for w in seeds.windows(2) {
            if w[0].0 == w[1].0 || w[1].1 <= w[0].1 {
                return Err(Error::Contradiction(format!(
                    "seeds {:?} and {:?} are not increasing",
                    w[0], w[1]
                )));
            }
        }
        if let Some(&(i, v)) = seeds.iter().find(|&&(i, v)| i < self.n0 || v < self.n0) {
            return Err(Error::Contradiction(format!(
                "seed s({i}) = {v} lies below n0"
            )));
        }
        Ok(())
    }

    fn provenance(&self) -> Provenance {
        let mut p = Provenance::new("square", true)
            .param("y", self.y)
            .param("z", self.z)
            .param("n0", self.n0);
        if self.applies_from != self.n0 {
            p = p.param("from", self.applies_from);
        }
        for (i, v) in &self.forced {
            p = p.param(format!("s({i})"), v);
        }
        p
    }
}

struct Conflict;

struct Solver<'a> {
    c: &'a SquareConstraint,
    known: BTreeMap<Term, Term>,
    trail: Vec<Term>,
    queue: Vec<(Term, Term)>,
    /// Indices above this are not tracked.
    horizon: Term,
}

impl Solver<'_> {
    fn target(&self, k: Term) -> i128 {
        i128::from(self.c.y) * i128::from(k) + i128::from(self.c.z)
    }

    /// Smallest `y k + z > lo` with `k >= applies_from`.
    fn first_target_above(&self, lo: Term) -> i128 {
        let y = i128::from(self.c.y);
        let base = self.target(self.c.applies_from);
        let lo = i128::from(lo) + 1;
        if lo <= base {
            base
        } else {
            base + (lo - base + y - 1) / y * y
        }
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let i = self.trail.pop().expect("trail");
            self.known.remove(&i);
        }
        self.queue.clear();
    }

    /// Adds `s(i) = v` and everything it implies; the caller undoes on error.
    fn insert(&mut self, i: Term, v: Term) -> Result<(), Conflict> {
        self.queue.push((i, v));
        while let Some((i, v)) = self.queue.pop() {
            if i > self.horizon {
                continue;
            }
            match self.known.get(&i) {
                Some(&w) if w == v => continue,
                Some(_) => return Err(Conflict),
                None => {}
            }
            if v < self.c.n0 || v < i {
                return Err(Conflict);
            }
            let pred = self.known.range(..i).next_back().map(|(&a, &b)| (a, b));
            let succ = self.known.range(i + 1..).next().map(|(&a, &b)| (a, b));
            if let Some((pi, pv)) = pred {
                if v < pv || v - pv < i - pi {
                    return Err(Conflict);
                }
                if pi + 1 == i && self.first_target_above(pv) < i128::from(v) {
                    return Err(Conflict);
                }
                // a tight gap fills one step at a time; each step re-triggers
                if v - pv == i - pi && i - pi > 1 {
                    self.queue.push((i - 1, v - 1));
                }
            }
            if let Some((si, sv)) = succ {
                if sv < v || sv - v < si - i {
                    return Err(Conflict);
                }
                if i + 1 == si && self.first_target_above(v) < i128::from(sv) {
                    return Err(Conflict);
                }
                if sv - v == si - i && si - i > 1 {
                    self.queue.push((i + 1, v + 1));
                }
            }
            self.known.insert(i, v);
            self.trail.push(i);

            if i >= self.c.applies_from {
                let t = self.target(i);
                if t < i128::from(self.c.n0) {
                    return Err(Conflict);
                }
                let t = Term::try_from(t).map_err(|_| Conflict)?;
                self.queue.push((v, t));
            }
            let y = i128::from(self.c.y);
            let back = i128::from(v) - i128::from(self.c.z);
            if back >= 0 && back % y == 0 {
                let k = (back / y) as Term;
                if k >= self.c.applies_from {
                    self.queue.push((k, i));
                }
            }
        }
        Ok(())
    }
}

/// Candidate values tried beyond `y n + |z|` before giving up on an index.
const SLACK: Term = 64;

/// Solves the constraint for the first `count` terms.
pub fn solve_square(constraint: &SquareConstraint, count: usize) -> Result<GeneratedSequence> {
    constraint.validate()?;
    let c = constraint;
    let z_abs = c.z.unsigned_abs();
    let end = c.n0 + count as Term;
    let horizon = (end + 2)
        .checked_mul(c.y + 1)
        .and_then(|h| h.checked_add(z_abs + SLACK))
        .ok_or_else(|| Error::Overflow(format!("horizon for {count} terms")))?;
    let mut s = Solver {
        c,
        known: BTreeMap::new(),
        trail: Vec::new(),
        queue: Vec::new(),
        horizon,
    };
    for &(i, v) in &c.forced {
        if s.insert(i, v).is_err() {
            return Err(Error::Contradiction(format!(
                "seed s({i}) = {v} is inconsistent"
            )));
        }
    }

    // (index, value chosen, trail mark before the choice)
    let mut decisions: Vec<(Term, Term, usize)> = Vec::new();
    let mut n = c.n0;
    let mut resume: Option<Term> = None;
    while n < end {
        if resume.is_none() && s.known.contains_key(&n) {
            n += 1;
            continue;
        }
        let lower = match n.checked_sub(1).and_then(|p| s.known.get(&p)) {
            Some(&p) if n > c.n0 => p + 1,
            _ => c.n0,
        };
        let lower = resume.take().unwrap_or(lower).max(n);
        let upper = match s.known.range(n + 1..).next() {
            Some((&si, &sv)) => sv.saturating_sub(si - n),
            None => c.y.saturating_mul(n + 1).saturating_add(z_abs + SLACK),
        };
        let mut chosen = None;
        let mut v = lower;
        while v <= upper {
            let mark = s.trail.len();
            if s.insert(n, v).is_ok() {
                chosen = Some((v, mark));
                break;
            }
            s.undo(mark);
            v += 1;
        }
        match chosen {
            Some((v, mark)) => {
                decisions.push((n, v, mark));
                n += 1;
            }
            None => {
                let (dn, dv, mark) = decisions.pop().ok_or_else(|| {
                    Error::Contradiction(format!(
                        "no increasing solution reaches index {n} (y = {}, z = {})",
                        c.y, c.z
                    ))
                })?;
                s.undo(mark);
                n = dn;
                resume = Some(dv + 1);
            }
        }
    }
    let terms: Vec<Term> = (c.n0..end).map(|i| s.known[&i]).collect();
    GeneratedSequence::new(c.n0, terms, c.provenance())
}

/// `f` with `f(f(n)) = y n + z` and `f(1) = (y + z + 1)/2`, under the
/// hypotheses of [`check_theorem1_params`].
pub fn theorem1_sequence(y: Term, z: i64, count: usize) -> Result<GeneratedSequence> {
    check_theorem1_params(y, z)?;
    let f1 = Term::try_from((i128::from(y) + i128::from(z) + 1) / 2)
        .map_err(|_| Error::InvalidParameters(format!("f(1) for y = {y}, z = {z}")))?;
    let c = SquareConstraint::new(y, z, 1).with_seed(1, f1);
    solve_square(&c, count)
}

/// Indices `n >= from` of the prefix where `s(s(n))` is known and differs
/// from `y n + z`.
pub fn square_violations(s: &GeneratedSequence, y: Term, z: i64, from: Term) -> Vec<Term> {
    s.indexed()
        .filter(|&(n, _)| n >= from)
        .filter_map(|(n, v)| {
            let w = s.try_get(v)?;
            let want = i128::from(y) * i128::from(n) + i128::from(z);
            (i128::from(w) != want).then_some(n)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a_constraint() -> SquareConstraint {
        SquareConstraint::new(2, 3, 1)
            .applies_from(2)
            .with_seed(1, 1)
            .with_seed(2, 4)
            .with_seed(3, 6)
    }

    #[test]
    fn aronson_from_seeds() {
        let s = solve_square(&a_constraint(), 20).unwrap();
        assert_eq!(
            s.terms(),
            &[1, 4, 6, 7, 8, 9, 11, 13, 15, 16, 17, 18, 19, 20, 21, 23, 25, 27, 29, 31]
        );
    }

    #[test]
    fn aronson_variant_with_one_seed() {
        let c = SquareConstraint::new(2, 3, 1)
            .applies_from(2)
            .with_seed(1, 1);
        let s = solve_square(&c, 10).unwrap();
        assert_eq!(s.terms(), &[1, 4, 5, 7, 9, 10, 11, 12, 13, 15]);
    }

    #[test]
    fn propp_sequence() {
        let s = solve_square(&SquareConstraint::new(3, 0, 1), 10).unwrap();
        assert_eq!(s.terms(), &[2, 3, 6, 7, 8, 9, 12, 15, 18, 19]);
    }

    #[test]
    fn fake_evens_and_odds() {
        let s = solve_square(&SquareConstraint::new(4, 0, 0), 10).unwrap();
        assert_eq!(s.terms(), &[0, 2, 4, 5, 8, 12, 13, 14, 16, 17]);
        let s = solve_square(&SquareConstraint::new(4, 3, 0), 10).unwrap();
        assert_eq!(s.terms(), &[1, 3, 4, 7, 11, 12, 13, 15, 16, 17]);
    }

    #[test]
    fn doubling_from_two() {
        let c = SquareConstraint::new(2, 0, 2).with_seed(2, 3);
        let s = solve_square(&c, 6).unwrap();
        assert_eq!(s.terms(), &[3, 4, 6, 7, 8, 10]);
    }

    #[test]
    fn theorem1_examples() {
        assert_eq!(
            theorem1_sequence(2, 1, 10).unwrap().terms(),
            &[2, 3, 5, 6, 7, 9, 11, 12, 13, 14]
        );
        assert_eq!(
            theorem1_sequence(3, 0, 10).unwrap().terms(),
            &[2, 3, 6, 7, 8, 9, 12, 15, 18, 19]
        );
        assert_eq!(theorem1_sequence(5, 2, 1).unwrap().terms(), &[4]);
        assert!(matches!(
            theorem1_sequence(3, 1, 5),
            Err(Error::InvalidParameters(_))
        ));
    }

    #[test]
    fn parameter_checks() {
        let bad = SquareConstraint::new(1, 2, 1);
        assert!(matches!(
            solve_square(&bad, 3),
            Err(Error::InvalidParameters(_))
        ));
        let even = SquareConstraint::new(3, 1, 1);
        assert!(matches!(
            solve_square(&even, 3),
            Err(Error::InvalidParameters(_))
        ));
        let seeds = SquareConstraint::new(3, 0, 1)
            .with_seed(2, 5)
            .with_seed(3, 4);
        assert!(matches!(
            solve_square(&seeds, 3),
            Err(Error::Contradiction(_))
        ));
    }

    #[test]
    fn inconsistent_seed_is_a_contradiction() {
        // s(1) = 1 would need s(1) = 3
        let c = SquareConstraint::new(3, 0, 1).with_seed(1, 1);
        assert!(matches!(solve_square(&c, 5), Err(Error::Contradiction(_))));
    }

    #[test]
    fn outputs_satisfy_the_constraint() {
        let s = solve_square(&a_constraint(), 5000).unwrap();
        assert!(square_violations(&s, 2, 3, 2).is_empty());
        let s = solve_square(&SquareConstraint::new(4, 0, 0), 5000).unwrap();
        assert!(square_violations(&s, 4, 0, 0).is_empty());
    }

    /// Smallest increasing sequence on indices `0..len` with values `<= max`
    /// satisfying every instance of `s(s(n)) = 4n` that lies inside the
    /// window, by exhaustive depth-first search.
    fn brute_force_fake_evens(len: usize, max: Term) -> Vec<Term> {
        fn ok(s: &[Term]) -> bool {
            s.iter().enumerate().all(|(n, &v)| match s.get(v as usize) {
                Some(&w) => w == 4 * n as Term,
                None => true,
            }) && s.iter().enumerate().all(|(n, _)| {
                // a value 4n inside the covered range must be taken
                let t = 4 * n as Term;
                t > *s.last().unwrap() || s.contains(&t)
            })
        }
        fn go(s: &mut Vec<Term>, len: usize, max: Term) -> bool {
            if s.len() == len {
                return true;
            }
            let lo = s.last().map_or(0, |&p| p + 1);
            for v in lo..=max {
                s.push(v);
                if ok(s) && go(s, len, max) {
                    return true;
                }
                s.pop();
            }
            false
        }
        let mut s = Vec::new();
        assert!(go(&mut s, len, max));
        s
    }

    #[test]
    fn fake_evens_are_lexicographically_least() {
        let solver = solve_square(&SquareConstraint::new(4, 0, 0), 12).unwrap();
        assert_eq!(brute_force_fake_evens(12, 60), solver.terms());
    }
}
