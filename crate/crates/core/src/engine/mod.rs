//! Greedy generators for self-referential rules of the form
//! "n is in the sequence (iff / if / only if) s(n) is in beta".

mod ledger;
mod window;

pub use ledger::{generate_nonmonotone, Status, StatusLedger, CANDIDATE_GAP};
pub use window::{generate_windowed, WindowCondition, WindowSide};

use std::fmt;

use crate::oracle::MembershipOracle;
use crate::sequence::{GeneratedSequence, Provenance};
use crate::term::{self, Term};
use crate::{Error, Result};

/// How membership of the index is tied to membership of the value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// n in s  <=>  s(n) in beta
    Iff,
    /// n in s  =>  s(n) in beta
    OnlyIf,
    /// s(n) in beta  =>  n in s
    If,
    /// the iff statement is false: n in s  <=>  s(n) not in beta
    NegatedIff,
}

impl Mode {
    /// Required membership of the value in beta, given the index's status.
    /// `None` means unconstrained.
    pub fn value_requirement(self, index_in_sequence: bool) -> Option<bool> {
        match (self, index_in_sequence) {
            (Mode::Iff, m) => Some(m),
            (Mode::NegatedIff, m) => Some(!m),
            (Mode::OnlyIf, true) => Some(true),
            (Mode::OnlyIf, false) => None,
            (Mode::If, true) => None,
            (Mode::If, false) => Some(false),
        }
    }

    /// Required status of the index, given whether the value is in beta.
    pub fn index_requirement(self, value_in_beta: bool) -> Option<bool> {
        match (self, value_in_beta) {
            (Mode::Iff, b) => Some(b),
            (Mode::NegatedIff, b) => Some(!b),
            (Mode::OnlyIf, true) => None,
            (Mode::OnlyIf, false) => Some(false),
            (Mode::If, true) => Some(true),
            (Mode::If, false) => None,
        }
    }

    pub fn holds(self, index_in_sequence: bool, value_in_beta: bool) -> bool {
        self.value_requirement(index_in_sequence)
            .is_none_or(|want| want == value_in_beta)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Iff => "iff",
            Mode::OnlyIf => "onlyif",
            Mode::If => "if",
            Mode::NegatedIff => "negated",
        })
    }
}

/// A self-referential rule together with its starting point.
#[derive(Debug, Clone)]
pub struct RuleSpec {
    pub oracle: MembershipOracle,
    pub mode: Mode,
    pub monotone: bool,
    /// Index of the first term; values are also drawn from integers `>= n0`.
    pub n0: Term,
    /// Forced initial terms `s(n0), s(n0+1), ...`. The rule is imposed on
    /// the indices that follow them.
    pub seeds: Vec<Term>,
    pub window: Option<WindowCondition>,
}

impl RuleSpec {
    pub fn new(oracle: MembershipOracle, mode: Mode, n0: Term) -> Self {
        RuleSpec {
            oracle,
            mode,
            monotone: true,
            n0,
            seeds: Vec::new(),
            window: None,
        }
    }

    pub fn iff(oracle: MembershipOracle, n0: Term) -> Self {
        Self::new(oracle, Mode::Iff, n0)
    }

    pub fn with_seeds(mut self, seeds: impl Into<Vec<Term>>) -> Self {
        self.seeds = seeds.into();
        self
    }

    pub fn non_monotone(mut self) -> Self {
        self.monotone = false;
        self
    }

    pub fn with_window(mut self, window: WindowCondition) -> Self {
        self.window = Some(window);
        self
    }

    pub(crate) fn provenance(&self, generator: &str) -> Provenance {
        let mut p = Provenance::new(generator, self.monotone)
            .param("oracle", &self.oracle)
            .param("mode", self.mode)
            .param("n0", self.n0);
        if !self.seeds.is_empty() {
            let seeds: Vec<String> = self.seeds.iter().map(|s| s.to_string()).collect();
            p = p.param("seeds", seeds.join(";"));
        }
        if let Some(w) = &self.window {
            p = p.param("window", w);
        }
        p
    }

    fn validate_seeds(&self) -> Result<()> {
        if let Some(&first) = self.seeds.first() {
            if first < self.n0 {
                return Err(Error::ContradictionAtStart(format!(
                    "seed {first} lies below n0 = {}",
                    self.n0
                )));
            }
        }
        if self.monotone {
            if let Some(i) = self.seeds.windows(2).position(|w| w[1] <= w[0]) {
                return Err(Error::ContradictionAtStart(format!(
                    "seeds not strictly increasing at index {}",
                    self.n0 + i as Term + 1
                )));
            }
        }
        Ok(())
    }

    fn expect(&self, what: &str, ok: bool) -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidRule(format!(
                "{what} does not accept mode={}, monotone={}, window={}",
                self.mode,
                self.monotone,
                self.window.is_some()
            )))
        }
    }
}

/// Runs whichever generator the rule calls for.
pub fn generate(rule: &RuleSpec, count: usize) -> Result<GeneratedSequence> {
    if rule.window.is_some() {
        generate_windowed(rule, count)
    } else if !rule.monotone {
        generate_nonmonotone(rule, count)
    } else {
        match rule.mode {
            Mode::Iff => generate_monotone_iff(rule, count),
            Mode::NegatedIff => generate_negated(rule, count),
            Mode::If | Mode::OnlyIf => generate_one_directional(rule, count),
        }
    }
}

/// Tracks whether the next index to be examined appears among the values
/// chosen so far. Indices are visited in increasing order.
struct ValueCursor {
    pos: usize,
}

impl ValueCursor {
    fn contains(&mut self, values: &[Term], x: Term) -> bool {
        while self.pos < values.len() && values[self.pos] < x {
            self.pos += 1;
        }
        self.pos < values.len() && values[self.pos] == x
    }
}

/// The increasing "n in s iff s(n) in beta" sequence, built by the case
/// analysis that proves the Aronson transform exists:
///
/// * `s(n) = n`: `s(n+1)` is `n+1` when that is hot, else the first cold
///   number `>= n+2`;
/// * `s(n) = k > n`: `n+1` is already decided (it is a value iff it was
///   chosen), so `s(n+1)` is the first hot (resp. cold) number `>= k+1`.
pub fn generate_monotone_iff(rule: &RuleSpec, count: usize) -> Result<GeneratedSequence> {
    rule.expect(
        "generate_monotone_iff",
        rule.mode == Mode::Iff && rule.monotone && rule.window.is_none(),
    )?;
    let terms = iff_terms(&rule.oracle, rule.n0, &rule.seeds, count)?;
    GeneratedSequence::new(rule.n0, terms, rule.provenance("monotone_iff"))
}

pub(crate) fn iff_terms(
    beta: &MembershipOracle,
    n0: Term,
    seeds: &[Term],
    count: usize,
) -> Result<Vec<Term>> {
    RuleSpec::iff(beta.clone(), n0)
        .with_seeds(seeds)
        .validate_seeds()?;
    let hot = |x: Term| beta.contains(x);
    let next_hot = |x: Term| beta.next_member(x);
    let next_cold = |x: Term| beta.next_nonmember(x);

    let mut values: Vec<Term> = seeds.iter().copied().take(count).collect();
    if values.is_empty() && count > 0 {
        let first = if hot(n0)? {
            n0
        } else {
            next_cold(term::add(n0, 1)?)?
        };
        values.push(first);
    }
    values.reserve(count.saturating_sub(values.len()));
    let mut cursor = ValueCursor { pos: 0 };
    while values.len() < count {
        let n = n0 + values.len() as Term - 1;
        let k = *values.last().expect("nonempty");
        let n1 = term::add(n, 1)?;
        let next = if k == n {
            if hot(n1)? {
                n1
            } else {
                next_cold(term::add(n, 2)?)?
            }
        } else if k == n1 {
            next_hot(term::add(n, 2)?)?
        } else if cursor.contains(&values, n1) {
            next_hot(term::add(k, 1)?)?
        } else {
            next_cold(term::add(k, 1)?)?
        };
        values.push(next);
    }
    Ok(values)
}

/// `a(n) = a(n-1) + eps`, with `eps` read off the parity of `a(n-1)` and the
/// membership of `n`: 1 when (even, in) or (odd, out), 2 otherwise.
/// Only meaningful once `a(n-1) > n`.
pub fn step_epsilon(prev: Term, n_in_sequence: bool) -> Term {
    let odd = prev % 2 == 1;
    prev + if odd == n_in_sequence { 2 } else { 1 }
}

/// Generic greedy for any [`Mode`]: at each index take the smallest value
/// above the previous one that keeps the rule satisfiable.
///
/// When index `n` is already decided (`s(n-1) >= n`) the value only needs
/// the required beta-membership. Otherwise `s(n-1) = n-1` and the candidate
/// `n` itself would make `n` a member, so it is tried first.
pub fn generate_by_condition(rule: &RuleSpec, count: usize) -> Result<GeneratedSequence> {
    rule.expect(
        "generate_by_condition",
        rule.monotone && rule.window.is_none(),
    )?;
    rule.validate_seeds()?;
    let beta = &rule.oracle;
    let pick = |from: Term, want: Option<bool>| -> Result<Term> {
        match want {
            Some(true) => beta.next_member(from),
            Some(false) => beta.next_nonmember(from),
            None => Ok(from),
        }
    };

    let mut values: Vec<Term> = rule.seeds.iter().copied().take(count).collect();
    let mut cursor = ValueCursor { pos: 0 };
    while values.len() < count {
        let n = rule.n0 + values.len() as Term;
        let start = match values.last() {
            Some(&p) => term::add(p, 1)?,
            None => rule.n0,
        };
        let next = if start > n {
            let member = cursor.contains(&values, n);
            pick(start, rule.mode.value_requirement(member))?
        } else if rule.mode.holds(true, beta.contains(n)?) {
            n
        } else {
            pick(term::add(n, 1)?, rule.mode.value_requirement(false))?
        };
        values.push(next);
    }
    GeneratedSequence::new(rule.n0, values, rule.provenance("by_condition"))
}

/// The "lying" version: the iff statement must be false, i.e. the monotone
/// iff rule over the complement of beta.
pub fn generate_negated(rule: &RuleSpec, count: usize) -> Result<GeneratedSequence> {
    rule.expect(
        "generate_negated",
        rule.mode == Mode::NegatedIff && rule.monotone && rule.window.is_none(),
    )?;
    let cold = MembershipOracle::complement(rule.oracle.clone());
    let terms = iff_terms(&cold, rule.n0, &rule.seeds, count)?;
    GeneratedSequence::new(rule.n0, terms, rule.provenance("negated"))
}

/// "n in s if s(n) in beta" or "n in s only if s(n) in beta".
pub fn generate_one_directional(rule: &RuleSpec, count: usize) -> Result<GeneratedSequence> {
    rule.expect(
        "generate_one_directional",
        matches!(rule.mode, Mode::If | Mode::OnlyIf) && rule.monotone && rule.window.is_none(),
    )?;
    generate_by_condition(rule, count)
        .map(|s| s.with_provenance(rule.provenance("one_directional")))
}

/// Indices whose rule is violated on a materialized prefix.
///
/// Index `n` is checkable when `s(n)` is known and its own membership is
/// decided: `n` at most the last value of a monotone prefix, or `n` among
/// the values of a non-monotone one. Seeded indices are skipped.
pub fn rule_violations(rule: &RuleSpec, seq: &GeneratedSequence) -> Result<Vec<Term>> {
    let last = match seq.last() {
        Some(l) => l,
        None => return Ok(Vec::new()),
    };
    let first_checked = rule.n0 + rule.seeds.len() as Term;
    let mut bad = Vec::new();
    let decided = |n: Term| !seq.is_monotone() || n <= last;
    for (n, v) in seq
        .indexed()
        .filter(|&(n, _)| n >= first_checked && decided(n))
    {
        let Some(member) = seq.value_membership(n) else {
            continue;
        };
        if !rule.mode.holds(member, rule.oracle.contains(v)?) {
            bad.push(n);
        }
    }
    Ok(bad)
}
