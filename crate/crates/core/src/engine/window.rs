//! Rules whose condition involves two neighbouring terms, e.g.
//! "n is in q iff q(n) is odd and q(n-1) is even".
//!
//! Each index `n` carries a window of two literals over the positions
//! `n` and `n +- 1`. For a member `n` both literals must hold; for a
//! non-member at least one must fail. Positions may be forced true or false
//! before their value is chosen, so the solver keeps a per-position truth
//! table with an undo trail and searches depth first, backtracking
//! chronologically, until the requested prefix extends `MARGIN` terms further.

use std::fmt;

use super::{RuleSpec, CANDIDATE_GAP};
use crate::oracle::MembershipOracle;
use crate::sequence::GeneratedSequence;
use crate::term::{self, Term};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowSide {
    Previous,
    Next,
}

/// `n in q  <=>  [q(n) in beta] == current  and  [q(n +- 1) in beta] == neighbor`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowCondition {
    pub side: WindowSide,
    pub current: bool,
    pub neighbor: bool,
}

impl WindowCondition {
    /// `q(n)` in beta and `q(n-1)` not in beta.
    pub fn after_nonmember() -> Self {
        WindowCondition {
            side: WindowSide::Previous,
            current: true,
            neighbor: false,
        }
    }

    /// `q(n)` in beta and `q(n+1)` not in beta.
    pub fn before_nonmember() -> Self {
        WindowCondition {
            side: WindowSide::Next,
            current: true,
            neighbor: false,
        }
    }

    /// `q(n)` and `q(n+1)` both in beta.
    pub fn with_next_member() -> Self {
        WindowCondition {
            side: WindowSide::Next,
            current: true,
            neighbor: true,
        }
    }
}

impl fmt::Display for WindowCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lit = |b: bool| if b { "in" } else { "out" };
        let side = match self.side {
            WindowSide::Previous => "prev",
            WindowSide::Next => "next",
        };
        write!(f, "{}:{}:{}", lit(self.current), side, lit(self.neighbor))
    }
}

/// Extra terms that must be consistently extendable before a prefix is
/// returned.
const MARGIN: usize = 256;

/// Candidate trials allowed before the search gives up.
const BUDGET: u64 = 50_000_000;

struct Conflict;

struct Solver<'a> {
    beta: &'a MembershipOracle,
    cond: WindowCondition,
    n0: Term,
    /// Absolute position of `truth[0]`.
    base: Term,
    values: Vec<Term>,
    truth: Vec<Option<bool>>,
    trail: Vec<usize>,
    queue: Vec<Term>,
}

impl<'a> Solver<'a> {
    fn new(beta: &'a MembershipOracle, cond: WindowCondition, n0: Term) -> Result<Self> {
        let mut s = Solver {
            beta,
            cond,
            n0,
            base: n0,
            values: Vec::new(),
            truth: Vec::new(),
            trail: Vec::new(),
            queue: Vec::new(),
        };
        if cond.side == WindowSide::Previous {
            if n0 == 0 {
                return Err(Error::InvalidRule(
                    "a previous-term window needs n0 >= 1".into(),
                ));
            }
            // q(n0 - 1) is taken to be 0
            s.base = n0 - 1;
            s.truth.push(Some(beta.contains(0)?));
        }
        Ok(s)
    }

    fn slot(&mut self, pos: Term) -> usize {
        let i = (pos - self.base) as usize;
        if i >= self.truth.len() {
            self.truth.resize(i + 1, None);
        }
        i
    }

    fn neighbor(&self, n: Term) -> Term {
        match self.cond.side {
            WindowSide::Previous => n - 1,
            WindowSide::Next => n + 1,
        }
    }

    /// Indices whose window contains position `pos`.
    fn watchers(&self, pos: Term) -> [Option<Term>; 2] {
        let other = match self.cond.side {
            WindowSide::Previous => pos.checked_add(1),
            WindowSide::Next => pos.checked_sub(1),
        };
        [Some(pos), other]
    }

    fn frontier(&self) -> Option<Term> {
        self.values.last().copied()
    }

    fn decided(&self, n: Term) -> bool {
        n >= self.n0 && self.frontier().is_some_and(|f| n <= f)
    }

    fn is_member(&self, n: Term) -> bool {
        self.values.binary_search(&n).is_ok()
    }

    fn set(&mut self, pos: Term, value: bool) -> Result<(), Conflict> {
        let i = self.slot(pos);
        match self.truth[i] {
            Some(t) if t == value => Ok(()),
            Some(_) => Err(Conflict),
            None => {
                self.truth[i] = Some(value);
                self.trail.push(i);
                for w in self.watchers(pos).into_iter().flatten() {
                    self.queue.push(w);
                }
                Ok(())
            }
        }
    }

    fn check(&mut self, n: Term) -> Result<(), Conflict> {
        if !self.decided(n) {
            return Ok(());
        }
        let lits = [
            (n, self.cond.current),
            (self.neighbor(n), self.cond.neighbor),
        ];
        if self.is_member(n) {
            for (pos, want) in lits {
                self.set(pos, want)?;
            }
            return Ok(());
        }
        let state: Vec<Option<bool>> = lits
            .iter()
            .map(|&(pos, want)| {
                let i = self.slot(pos);
                self.truth[i].map(|t| t == want)
            })
            .collect();
        match (state[0], state[1]) {
            (Some(true), Some(true)) => Err(Conflict),
            (Some(true), None) => self.set(lits[1].0, !lits[1].1),
            (None, Some(true)) => self.set(lits[0].0, !lits[0].1),
            _ => Ok(()),
        }
    }

    fn undo(&mut self, trail_len: usize, values_len: usize) {
        while self.trail.len() > trail_len {
            let i = self.trail.pop().expect("trail");
            self.truth[i] = None;
        }
        self.values.truncate(values_len);
        self.queue.clear();
    }

    /// Tries `q(n) = c`; leaves the state untouched on failure.
    fn assign(&mut self, n: Term, c: Term) -> Result<bool> {
        let mark = (self.trail.len(), self.values.len());
        let old_frontier = self.frontier();
        let truth = self.beta.contains(c)?;
        self.values.push(c);
        // the neighbor slot must exist before the first check of n
        let nb = self.neighbor(n);
        self.slot(nb);
        let first_new = old_frontier.map_or(self.n0, |f| f + 1).max(self.n0);
        self.queue.extend(first_new..=c);
        let ok = self.set(n, truth).is_ok() && self.propagate().is_ok();
        if !ok {
            self.undo(mark.0, mark.1);
        }
        Ok(ok)
    }

    fn propagate(&mut self) -> Result<(), Conflict> {
        while let Some(n) = self.queue.pop() {
            self.check(n)?;
        }
        Ok(())
    }

    fn first_candidate(&self) -> Term {
        match self.values.last() {
            Some(&p) => p + 1,
            None => self.n0.max(1),
        }
    }
}

/// Builds the increasing sequence for a rule with a [`WindowCondition`].
pub fn generate_windowed(rule: &RuleSpec, count: usize) -> Result<GeneratedSequence> {
    let cond = rule
        .window
        .ok_or_else(|| Error::InvalidRule("generate_windowed needs a window condition".into()))?;
    rule.expect(
        "generate_windowed",
        rule.monotone && rule.mode == super::Mode::Iff,
    )?;
    rule.validate_seeds()?;
    let mut solver = Solver::new(&rule.oracle, cond, rule.n0)?;
    for (i, &seed) in rule.seeds.iter().take(count).enumerate() {
        let n = rule.n0 + i as Term;
        let truth = rule.oracle.contains(seed)?;
        if !solver.assign(n, seed)? {
            return Err(Error::ContradictionAtStart(format!(
                "seed {seed} at index {n} (in beta: {truth})"
            )));
        }
    }
    let fixed = solver.values.len();
    let target = count + MARGIN;
    // trail/value marks and the value chosen, per searched index
    let mut frames: Vec<(usize, usize, Term)> = Vec::new();
    let mut next_start = solver.first_candidate();
    let mut trials = 0u64;
    while solver.values.len() < target {
        let n = rule.n0 + solver.values.len() as Term;
        let end = term::add(solver.first_candidate(), CANDIDATE_GAP)?;
        let mark = (solver.trail.len(), solver.values.len());
        let mut chosen = None;
        for c in next_start..=end {
            trials += 1;
            if solver.assign(n, c)? {
                chosen = Some(c);
                break;
            }
        }
        if trials > BUDGET {
            return Err(Error::BacktrackExhausted { index: n });
        }
        match chosen {
            Some(c) => {
                frames.push((mark.0, mark.1, c));
                next_start = solver.first_candidate();
            }
            None => {
                let (t, v, c) = frames.pop().ok_or(Error::BacktrackExhausted { index: n })?;
                if v < fixed {
                    return Err(Error::BacktrackExhausted { index: n });
                }
                solver.undo(t, v);
                next_start = c + 1;
            }
        }
    }
    solver.values.truncate(count);
    GeneratedSequence::new(rule.n0, solver.values, rule.provenance("windowed"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn odd_rule(cond: WindowCondition) -> RuleSpec {
        RuleSpec::iff(MembershipOracle::odds(1), 1).with_window(cond)
    }

    #[test]
    fn odd_before_even() {
        let s = generate_windowed(&odd_rule(WindowCondition::before_nonmember()), 11).unwrap();
        assert_eq!(s.terms(), &[1, 4, 6, 9, 12, 15, 18, 20, 23, 26, 28]);
        let gaps = s.terms().windows(2).map(|w| w[1] - w[0]);
        assert!(gaps.clone().all(|g| g == 2 || g == 3));
    }

    #[test]
    fn odd_after_even() {
        // 15 and 17 may both be members: 16 is out and q(16) is even
        let s = generate_windowed(&odd_rule(WindowCondition::after_nonmember()), 11).unwrap();
        assert_eq!(s.terms(), &[1, 4, 6, 9, 12, 15, 17, 20, 23, 25, 28]);
    }

    #[test]
    fn adjacent_members_are_rejected() {
        // 6 and 7 as members would need q(6) both odd and even
        let s = generate_windowed(&odd_rule(WindowCondition::after_nonmember()), 4).unwrap();
        assert_eq!(s.terms()[3], 9);
    }

    #[test]
    fn odd_followed_by_odd() {
        let s = generate_windowed(&odd_rule(WindowCondition::with_next_member()), 10).unwrap();
        assert_eq!(s.terms(), &[1, 5, 6, 10, 11, 15, 19, 20, 24, 25]);
    }

    /// Direct check of the window rule on every index whose status and
    /// window are both known.
    fn violations(cond: WindowCondition, s: &GeneratedSequence) -> Vec<Term> {
        let last = s.last().unwrap();
        let odd = |x: Term| x % 2 == 1;
        let mut bad = Vec::new();
        for n in 1..=last {
            let neighbor = match cond.side {
                WindowSide::Previous if n == 1 => Some(0),
                WindowSide::Previous => s.try_get(n - 1),
                WindowSide::Next => s.try_get(n + 1),
            };
            let (Some(cur), Some(nb)) = (s.try_get(n), neighbor) else {
                continue;
            };
            let holds = odd(cur) == cond.current && odd(nb) == cond.neighbor;
            if holds != s.value_membership(n).unwrap() {
                bad.push(n);
            }
        }
        bad
    }

    #[test]
    fn long_prefixes_satisfy_the_rule() {
        for cond in [
            WindowCondition::after_nonmember(),
            WindowCondition::before_nonmember(),
            WindowCondition::with_next_member(),
        ] {
            let s = generate_windowed(&odd_rule(cond), 3000).unwrap();
            assert!(violations(cond, &s).is_empty(), "{cond}");
        }
    }

    #[test]
    fn previous_window_needs_positive_start() {
        let rule = RuleSpec::iff(MembershipOracle::evens(0), 0)
            .with_window(WindowCondition::after_nonmember());
        assert!(matches!(
            generate_windowed(&rule, 3),
            Err(Error::InvalidRule(_))
        ));
    }

    #[test]
    fn every_polarity_yields_a_consistent_prefix() {
        for side in [WindowSide::Previous, WindowSide::Next] {
            for current in [false, true] {
                for neighbor in [false, true] {
                    let cond = WindowCondition {
                        side,
                        current,
                        neighbor,
                    };
                    let s = generate_windowed(&odd_rule(cond), 500).unwrap();
                    assert!(violations(cond, &s).is_empty(), "{cond}");
                }
            }
        }
    }
}
