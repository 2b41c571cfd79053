//! Materialized sequence prefixes.

use std::fmt;

use crate::{Error, Result, Term};

/// Which generator produced a sequence, and with what parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub generator: String,
    pub params: Vec<(String, String)>,
    /// When set, the terms are strictly increasing.
    pub monotone: bool,
}

impl Provenance {
    pub fn new(generator: impl Into<String>, monotone: bool) -> Self {
        Provenance {
            generator: generator.into(),
            params: Vec::new(),
            monotone,
        }
    }

    pub fn param(mut self, key: impl Into<String>, value: impl fmt::Display) -> Self {
        self.params.push((key.into(), value.to_string()));
        self
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.generator)?;
        if !self.params.is_empty() {
            f.write_str("(")?;
            for (i, (k, v)) in self.params.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{k}={v}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// An indexed prefix `s(n0), s(n0 + 1), ...` of a sequence.
///
/// Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedSequence {
    n0: Term,
    terms: Vec<Term>,
    provenance: Provenance,
}

impl GeneratedSequence {
    /// Builds a sequence, rejecting a declared-monotone one whose terms do not
    /// strictly increase.
    pub fn new(n0: Term, terms: Vec<Term>, provenance: Provenance) -> Result<Self> {
        if provenance.monotone {
            if let Some(i) = terms.windows(2).position(|w| w[1] <= w[0]) {
                return Err(Error::NonMonotoneInput {
                    index: n0 + i as Term + 1,
                });
            }
        }
        Ok(GeneratedSequence {
            n0,
            terms,
            provenance,
        })
    }

    /// Builds an increasing sequence from a slice, checking monotonicity.
    pub fn monotone(n0: Term, terms: Vec<Term>, generator: &str) -> Result<Self> {
        Self::new(n0, terms, Provenance::new(generator, true))
    }

    pub fn n0(&self) -> Term {
        self.n0
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn is_monotone(&self) -> bool {
        self.provenance.monotone
    }

    /// One past the last materialized index.
    pub fn end(&self) -> Term {
        self.n0 + self.terms.len() as Term
    }

    pub fn last(&self) -> Option<Term> {
        self.terms.last().copied()
    }

    /// `s(n)`, or [`Error::HorizonExceeded`] outside `n0 <= n < end`.
    pub fn get(&self, n: Term) -> Result<Term> {
        self.try_get(n).ok_or(Error::HorizonExceeded {
            query: n,
            horizon: self.end().saturating_sub(1),
        })
    }

    pub fn try_get(&self, n: Term) -> Option<Term> {
        n.checked_sub(self.n0)
            .and_then(|i| self.terms.get(usize::try_from(i).ok()?))
            .copied()
    }

    /// `(n, s(n))` pairs in index order.
    pub fn indexed(&self) -> impl Iterator<Item = (Term, Term)> + '_ {
        (self.n0..).zip(self.terms.iter().copied())
    }

    /// Whether `v` is a value of the sequence. For a monotone prefix this is
    /// decidable up to the last term; beyond it the answer is unknown (`None`).
    /// Non-monotone prefixes only answer `Some(true)` when `v` was seen.
    pub fn value_membership(&self, v: Term) -> Option<bool> {
        if self.provenance.monotone {
            match self.terms.last() {
                Some(&last) if v <= last => Some(self.terms.binary_search(&v).is_ok()),
                _ => None,
            }
        } else if self.terms.contains(&v) {
            Some(true)
        } else {
            None
        }
    }

    /// Index of the value `v` in a monotone prefix.
    pub fn index_of(&self, v: Term) -> Option<Term> {
        if !self.provenance.monotone {
            return self
                .terms
                .iter()
                .position(|&t| t == v)
                .map(|i| self.n0 + i as Term);
        }
        self.terms
            .binary_search(&v)
            .ok()
            .map(|i| self.n0 + i as Term)
    }

    /// Keep only the first `len` terms.
    pub fn truncated(mut self, len: usize) -> Self {
        self.terms.truncate(len);
        self
    }

    /// The same terms under a different provenance.
    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexed_access_respects_bounds() {
        let s = GeneratedSequence::monotone(1, vec![1, 4, 6, 7], "a").unwrap();
        assert_eq!(s.get(1).unwrap(), 1);
        assert_eq!(s.get(4).unwrap(), 7);
        assert_eq!(
            s.get(5),
            Err(Error::HorizonExceeded {
                query: 5,
                horizon: 4
            })
        );
        assert!(s.get(0).is_err());
        assert_eq!(s.end(), 5);
    }

    #[test]
    fn monotone_declaration_is_checked() {
        let err = GeneratedSequence::monotone(0, vec![0, 3, 3], "x").unwrap_err();
        assert_eq!(err, Error::NonMonotoneInput { index: 2 });
        assert!(GeneratedSequence::new(1, vec![1, 3, 2], Provenance::new("b", false)).is_ok());
    }

    #[test]
    fn value_membership_is_bounded_by_last_term() {
        let s = GeneratedSequence::monotone(1, vec![1, 4, 6, 7], "a").unwrap();
        assert_eq!(s.value_membership(4), Some(true));
        assert_eq!(s.value_membership(5), Some(false));
        assert_eq!(s.value_membership(8), None);
        assert_eq!(s.index_of(6), Some(3));
    }

    #[test]
    fn provenance_display() {
        let p = Provenance::new("square", true).param("y", 4).param("z", 0);
        assert_eq!(p.to_string(), "square(y=4,z=0)");
    }
}
