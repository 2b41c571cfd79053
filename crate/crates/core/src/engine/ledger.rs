//! Greedy construction without monotonicity: each index gets the smallest
//! unused integer that keeps every decided membership consistent.

use std::collections::{HashMap, HashSet};

use super::RuleSpec;
use crate::sequence::GeneratedSequence;
use crate::term::{self, Term};
use crate::{Error, Result};

/// How far past the largest value used so far a candidate may lie.
pub const CANDIDATE_GAP: Term = 64;

/// Membership status of an integer in the sequence under construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    In,
    Out,
    Undecided,
}

/// Write-once record of which integers are known to be (or not be) values.
#[derive(Debug, Default, Clone)]
pub struct StatusLedger {
    map: HashMap<Term, Status>,
}

impl StatusLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn status(&self, x: Term) -> Status {
        self.map.get(&x).copied().unwrap_or(Status::Undecided)
    }

    /// Records `x` as `In` or `Out`. Re-recording the same status is a no-op;
    /// flipping a decided status is a [`Error::Contradiction`].
    pub fn mark(&mut self, x: Term, status: Status) -> Result<()> {
        match (self.status(x), status) {
            (_, Status::Undecided) => Ok(()),
            (Status::Undecided, s) => {
                self.map.insert(x, s);
                Ok(())
            }
            (old, new) if old == new => Ok(()),
            (old, new) => Err(Error::Contradiction(format!(
                "{x} already marked {old:?}, cannot mark {new:?}"
            ))),
        }
    }

    fn admits(&self, x: Term, want: bool) -> bool {
        !matches!(
            (self.status(x), want),
            (Status::In, false) | (Status::Out, true)
        )
    }
}

/// Non-monotone greedy: for `n = n0, n0+1, ...` choose the smallest unused
/// `c >= n0` not already marked `Out` such that the index status demanded by
/// `c`'s membership in beta can still be granted to `n`.
///
/// Choosing `c` marks `c` as `In`; the demand on `n` is then recorded.
/// Candidates are searched up to [`CANDIDATE_GAP`] beyond the largest value
/// used so far, after which [`Error::NoCandidate`] is returned.
pub fn generate_nonmonotone(rule: &RuleSpec, count: usize) -> Result<GeneratedSequence> {
    rule.expect(
        "generate_nonmonotone",
        !rule.monotone && rule.window.is_none(),
    )?;
    rule.validate_seeds()?;
    let beta = &rule.oracle;
    let mut ledger = StatusLedger::new();
    let mut used = HashSet::new();
    let mut values = Vec::with_capacity(count);
    let mut high = rule.n0;
    let mut low = rule.n0;

    for i in 0..count {
        let n = rule.n0 + i as Term;
        if let Some(&seed) = rule.seeds.get(i) {
            if used.contains(&seed) {
                return Err(Error::ContradictionAtStart(format!("seed {seed} repeats")));
            }
            ledger.mark(seed, Status::In).map_err(|e| {
                Error::ContradictionAtStart(format!("seed {seed} at index {n}: {e}"))
            })?;
            used.insert(seed);
            values.push(seed);
            high = high.max(seed);
            continue;
        }

        while used.contains(&low) || ledger.status(low) == Status::Out {
            low = term::add(low, 1)?;
        }
        let bound = term::add(high, CANDIDATE_GAP)?;
        let mut chosen = None;
        let mut c = low;
        while c <= bound {
            if !used.contains(&c) && ledger.status(c) != Status::Out {
                let demand = rule.mode.index_requirement(beta.contains(c)?);
                if admissible(&ledger, n, c, demand) {
                    chosen = Some((c, demand));
                    break;
                }
            }
            c += 1;
        }
        let (c, demand) = chosen.ok_or(Error::NoCandidate {
            index: n,
            from: high,
            bound: CANDIDATE_GAP,
        })?;
        ledger.mark(c, Status::In)?;
        match demand {
            Some(true) => ledger.mark(n, Status::In)?,
            Some(false) => ledger.mark(n, Status::Out)?,
            None => {}
        }
        used.insert(c);
        values.push(c);
        high = high.max(c);
    }
    GeneratedSequence::new(rule.n0, values, rule.provenance("nonmonotone"))
}

fn admissible(ledger: &StatusLedger, n: Term, c: Term, demand: Option<bool>) -> bool {
    match demand {
        None => true,
        // choosing c puts c in; n must be able to be in too
        Some(true) => ledger.admits(n, true),
        // n must stay out, so it cannot be the value chosen now
        Some(false) => n != c && ledger.admits(n, false),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{generate, Mode};
    use crate::oracle::MembershipOracle;

    #[test]
    fn odd_rule_without_monotonicity() {
        let rule = RuleSpec::iff(MembershipOracle::odds(1), 1).non_monotone();
        let s = generate_nonmonotone(&rule, 20).unwrap();
        assert_eq!(
            s.terms(),
            &[1, 3, 5, 2, 7, 8, 9, 11, 13, 12, 15, 17, 19, 16, 21, 23, 25, 20, 27, 29]
        );
        assert!(!s.is_monotone());
    }

    #[test]
    fn dispatch_selects_nonmonotone() {
        let rule = RuleSpec::iff(MembershipOracle::odds(1), 1).non_monotone();
        assert_eq!(generate(&rule, 4).unwrap().terms(), &[1, 3, 5, 2]);
    }

    #[test]
    fn values_are_distinct_and_rule_holds_where_decided() {
        for beta in [
            MembershipOracle::odds(1),
            MembershipOracle::evens(1),
            MembershipOracle::multiples(3, 1).unwrap(),
        ] {
            let rule = RuleSpec::iff(beta.clone(), 1).non_monotone();
            let s = generate_nonmonotone(&rule, 400).unwrap();
            let set: HashSet<_> = s.terms().iter().copied().collect();
            assert_eq!(set.len(), s.len());
            let max_low = (1..).find(|x| !set.contains(x)).unwrap();
            // below the first gap every membership is final
            for (n, v) in s.indexed().filter(|&(n, _)| n < max_low) {
                assert_eq!(set.contains(&n), beta.contains(v).unwrap(), "{beta} n={n}");
            }
        }
    }

    #[test]
    fn sparse_beta_hits_the_gap_bound() {
        let rule = RuleSpec::iff(MembershipOracle::squares(1), 1).non_monotone();
        assert!(matches!(
            generate_nonmonotone(&rule, 200),
            Err(Error::NoCandidate { .. })
        ));
    }

    #[test]
    fn ledger_is_write_once() {
        let mut l = StatusLedger::new();
        l.mark(3, Status::In).unwrap();
        l.mark(3, Status::In).unwrap();
        assert!(matches!(
            l.mark(3, Status::Out),
            Err(Error::Contradiction(_))
        ));
        assert_eq!(l.status(4), Status::Undecided);
    }

    #[test]
    fn one_directional_non_monotone_runs() {
        let rule = RuleSpec::new(MembershipOracle::odds(1), Mode::If, 1).non_monotone();
        let s = generate_nonmonotone(&rule, 50).unwrap();
        assert_eq!(s.len(), 50);
    }
}
