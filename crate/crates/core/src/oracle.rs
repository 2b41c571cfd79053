//! Membership oracles: the sets `beta` that self-referential rules test
//! values against.

use std::fmt;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock};

use crate::sequence::GeneratedSequence;
use crate::term::{self, Term};
use crate::{bfile, Error, Result};

/// The set an oracle describes.
#[derive(Debug, Clone)]
pub enum OracleKind {
    Odds,
    Evens,
    /// Nonnegative multiples of `m`, `m >= 2`.
    Multiples(Term),
    /// `{ i*y + z : i >= 1 }`.
    Residue {
        y: Term,
        z: i64,
    },
    /// `[2, (y+z-1)/2] ∪ { i*y + z : i >= 1 }`, the interval omitted when empty.
    Theorem1Set {
        y: Term,
        z: i64,
    },
    Squares,
    Triangular,
    Primes(Arc<PrimeSieve>),
    /// `floor(n * phi)` for `n >= 1`.
    LowerWythoff,
    Complement(Box<MembershipOracle>),
    /// The values of a materialized increasing sequence. Membership beyond the
    /// last term is never guessed.
    FromSequence(Arc<GeneratedSequence>),
    FromBFile {
        path: PathBuf,
        seq: Arc<GeneratedSequence>,
    },
    /// Disjoint increasing runs of members, classified up to `horizon`.
    Ranges {
        runs: Arc<Vec<RangeInclusive<Term>>>,
        horizon: Term,
    },
}

/// A set of integers `>= n0` queried by membership and by next member /
/// next non-member.
///
/// Queries take `&self`; the prime sieve behind [`OracleKind::Primes`] grows
/// behind a lock, so oracles can be shared across threads.
#[derive(Debug, Clone)]
pub struct MembershipOracle {
    kind: OracleKind,
    n0: Term,
}

impl MembershipOracle {
    pub fn new(kind: OracleKind, n0: Term) -> Result<Self> {
        match &kind {
            OracleKind::Multiples(m) if *m < 2 => {
                return Err(Error::InvalidParameters(format!(
                    "multiples of {m} leave no infinite complement"
                )))
            }
            OracleKind::Residue { y, .. } | OracleKind::Theorem1Set { y, .. } if *y < 2 => {
                return Err(Error::InvalidParameters(format!(
                    "modulus {y} must be >= 2"
                )))
            }
            OracleKind::Residue { y, z } | OracleKind::Theorem1Set { y, z }
                if i128::from(*y) + i128::from(*z) < 0 =>
            {
                return Err(Error::InvalidParameters(format!(
                    "residue set {{i*{y} + {z}}} reaches negative values"
                )))
            }
            OracleKind::FromSequence(s) | OracleKind::FromBFile { seq: s, .. }
                if !s.is_monotone() =>
            {
                return Err(Error::NonMonotoneInput { index: s.n0() })
            }
            _ => {}
        }
        Ok(MembershipOracle { kind, n0 })
    }

    fn builtin(kind: OracleKind, n0: Term) -> Self {
        MembershipOracle { kind, n0 }
    }

    pub fn odds(n0: Term) -> Self {
        Self::builtin(OracleKind::Odds, n0)
    }

    pub fn evens(n0: Term) -> Self {
        Self::builtin(OracleKind::Evens, n0)
    }

    pub fn multiples(m: Term, n0: Term) -> Result<Self> {
        Self::new(OracleKind::Multiples(m), n0)
    }

    pub fn residue(y: Term, z: i64, n0: Term) -> Result<Self> {
        Self::new(OracleKind::Residue { y, z }, n0)
    }

    pub fn theorem1_set(y: Term, z: i64, n0: Term) -> Result<Self> {
        Self::new(OracleKind::Theorem1Set { y, z }, n0)
    }

    pub fn squares(n0: Term) -> Self {
        Self::builtin(OracleKind::Squares, n0)
    }

    pub fn triangular(n0: Term) -> Self {
        Self::builtin(OracleKind::Triangular, n0)
    }

    pub fn primes(n0: Term) -> Self {
        Self::builtin(OracleKind::Primes(Arc::new(PrimeSieve::default())), n0)
    }

    pub fn lower_wythoff(n0: Term) -> Self {
        Self::builtin(OracleKind::LowerWythoff, n0)
    }

    /// The integers `>= n0` not in `inner`. The complement keeps the inner
    /// oracle's `n0`.
    pub fn complement(inner: MembershipOracle) -> Self {
        let n0 = inner.n0;
        Self::builtin(OracleKind::Complement(Box::new(inner)), n0)
    }

    /// The values of an increasing sequence; `n0` is the sequence's `n0`.
    pub fn from_sequence(seq: GeneratedSequence) -> Result<Self> {
        let n0 = seq.n0();
        Self::new(OracleKind::FromSequence(Arc::new(seq)), n0)
    }

    /// The union of `runs`, which must be nonempty, increasing and
    /// disjoint, known up to `horizon`.
    pub fn from_ranges(runs: Vec<RangeInclusive<Term>>, horizon: Term, n0: Term) -> Result<Self> {
        let ordered = runs.iter().all(|r| r.start() <= r.end())
            && runs.windows(2).all(|w| w[0].end() < w[1].start())
            && runs.last().is_none_or(|r| *r.end() <= horizon);
        if !ordered {
            return Err(Error::InvalidParameters(
                "member runs must be disjoint, increasing and within the horizon".into(),
            ));
        }
        Self::new(
            OracleKind::Ranges {
                runs: Arc::new(runs),
                horizon,
            },
            n0,
        )
    }

    pub fn from_bfile(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let seq = bfile::read_path(&path, true)?;
        let n0 = seq.n0();
        Self::new(
            OracleKind::FromBFile {
                path,
                seq: Arc::new(seq),
            },
            n0,
        )
    }

    pub fn kind(&self) -> &OracleKind {
        &self.kind
    }

    pub fn n0(&self) -> Term {
        self.n0
    }

    /// The same set over a different universe start.
    pub fn with_n0(mut self, n0: Term) -> Self {
        self.n0 = n0;
        self
    }

    /// Largest integer this oracle can classify, for finite-horizon kinds.
    pub fn horizon(&self) -> Option<Term> {
        match &self.kind {
            OracleKind::FromSequence(s) | OracleKind::FromBFile { seq: s, .. } => s.last(),
            OracleKind::Complement(inner) => inner.horizon(),
            OracleKind::Ranges { horizon, .. } => Some(*horizon),
            _ => None,
        }
    }

    /// Whether `x` belongs to the set. Integers below `n0` never do.
    pub fn contains(&self, x: Term) -> Result<bool> {
        if x < self.n0 {
            return Ok(false);
        }
        Ok(match &self.kind {
            OracleKind::Odds => x % 2 == 1,
            OracleKind::Evens => x.is_multiple_of(2),
            OracleKind::Multiples(m) => x.is_multiple_of(*m),
            OracleKind::Residue { y, z } => in_residue(x, *y, *z),
            OracleKind::Theorem1Set { y, z } => {
                let top = theorem1_interval_top(*y, *z);
                (2..=top).contains(&x) || in_residue(x, *y, *z)
            }
            OracleKind::Squares => {
                let r = x.isqrt();
                r * r == x
            }
            OracleKind::Triangular => is_triangular(x),
            OracleKind::Primes(sieve) => sieve.is_prime(x)?,
            OracleKind::LowerWythoff => is_lower_wythoff(x),
            OracleKind::Complement(inner) => !inner.contains(x)?,
            OracleKind::FromSequence(seq) | OracleKind::FromBFile { seq, .. } => seq
                .value_membership(x)
                .ok_or_else(|| Error::HorizonExceeded {
                    query: x,
                    horizon: seq.last().unwrap_or(0),
                })?,
            OracleKind::Ranges { runs, horizon } => {
                if x > *horizon {
                    return Err(Error::HorizonExceeded {
                        query: x,
                        horizon: *horizon,
                    });
                }
                run_at(runs, x).is_some_and(|r| r.contains(&x))
            }
        })
    }

    /// Smallest member `>= x`.
    pub fn next_member(&self, x: Term) -> Result<Term> {
        let x = x.max(self.n0);
        match &self.kind {
            OracleKind::Odds => term::add(x, 1 - x % 2),
            OracleKind::Evens => term::add(x, x % 2),
            OracleKind::Multiples(m) => term::mul(x.div_ceil(*m), *m),
            OracleKind::Residue { y, z } => next_in_residue(x, *y, *z),
            OracleKind::Theorem1Set { y, z } => {
                let top = theorem1_interval_top(*y, *z);
                if top >= 2 && x <= top {
                    Ok(x.max(2))
                } else {
                    next_in_residue(x, *y, *z)
                }
            }
            OracleKind::Squares => {
                let r = x.isqrt();
                if r * r == x {
                    Ok(x)
                } else {
                    term::mul(r + 1, r + 1)
                }
            }
            OracleKind::Triangular => {
                let mut t = triangular_root(x);
                while t * (t + 1) / 2 < x {
                    t += 1;
                }
                Ok(t * (t + 1) / 2)
            }
            OracleKind::Primes(sieve) => sieve.next_prime(x),
            OracleKind::Complement(inner) => inner.next_nonmember(x),
            OracleKind::FromSequence(seq) | OracleKind::FromBFile { seq, .. } => {
                let terms = seq.terms();
                let i = terms.partition_point(|&t| t < x);
                terms.get(i).copied().ok_or(Error::HorizonExceeded {
                    query: x,
                    horizon: seq.last().unwrap_or(0),
                })
            }
            OracleKind::LowerWythoff => self.scan(x, true),
            OracleKind::Ranges { runs, horizon } => {
                let i = runs.partition_point(|r| *r.end() < x);
                match runs.get(i) {
                    Some(r) => Ok(x.max(*r.start())),
                    None => Err(Error::HorizonExceeded {
                        query: x,
                        horizon: *horizon,
                    }),
                }
            }
        }
    }

    /// Smallest non-member `>= x`.
    pub fn next_nonmember(&self, x: Term) -> Result<Term> {
        if x < self.n0 {
            return Ok(x);
        }
        match &self.kind {
            OracleKind::Odds => term::add(x, x % 2),
            OracleKind::Evens => term::add(x, 1 - x % 2),
            OracleKind::Complement(inner) => inner.next_member(x),
            OracleKind::Ranges { runs, .. } => {
                let y = match run_at(runs, x) {
                    Some(r) if r.contains(&x) => r.end() + 1,
                    _ => x,
                };
                self.contains(y)?;
                Ok(y)
            }
            _ => self.scan(x, false),
        }
    }

    fn scan(&self, mut x: Term, want: bool) -> Result<Term> {
        while self.contains(x)? != want {
            x = term::add(x, 1)?;
        }
        Ok(x)
    }

    /// The members in increasing order, starting at `n0`.
    pub fn members(&self) -> Members<'_> {
        Members {
            oracle: self,
            next: Some(self.n0),
        }
    }

    /// The first `count` members as a sequence indexed from `n0`.
    pub fn enumerate(&self, count: usize) -> Result<GeneratedSequence> {
        let terms = self.members().take(count).collect::<Result<Vec<_>>>()?;
        GeneratedSequence::monotone(self.n0, terms, &self.to_string())
    }
}

/// Iterator over an oracle's members.
pub struct Members<'a> {
    oracle: &'a MembershipOracle,
    next: Option<Term>,
}

impl Iterator for Members<'_> {
    type Item = Result<Term>;

    fn next(&mut self) -> Option<Self::Item> {
        let from = self.next?;
        match self.oracle.next_member(from) {
            Ok(m) => {
                self.next = m.checked_add(1);
                Some(Ok(m))
            }
            Err(e) => {
                self.next = None;
                Some(Err(e))
            }
        }
    }
}

impl fmt::Display for MembershipOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            OracleKind::Odds => f.write_str("odds"),
            OracleKind::Evens => f.write_str("evens"),
            OracleKind::Multiples(m) => write!(f, "multiples:{m}"),
            OracleKind::Residue { y, z } => write!(f, "residue:{y}:{z}"),
            OracleKind::Theorem1Set { y, z } => write!(f, "theorem1:{y}:{z}"),
            OracleKind::Squares => f.write_str("squares"),
            OracleKind::Triangular => f.write_str("triangular"),
            OracleKind::Primes(_) => f.write_str("primes"),
            OracleKind::LowerWythoff => f.write_str("wythoff"),
            OracleKind::Complement(inner) => write!(f, "not:{inner}"),
            OracleKind::FromSequence(s) => write!(f, "seq:{}", s.provenance().generator),
            OracleKind::FromBFile { path, .. } => write!(f, "bfile:{}", path.display()),
            OracleKind::Ranges { runs, horizon } => {
                write!(f, "runs:{}<={horizon}", runs.len())
            }
        }
    }
}

/// The last run starting at or before `x`.
fn run_at(runs: &[RangeInclusive<Term>], x: Term) -> Option<&RangeInclusive<Term>> {
    let i = runs.partition_point(|r| *r.start() <= x);
    i.checked_sub(1).map(|i| &runs[i])
}

/// Parses the builtin oracle grammar: `odds`, `evens`, `multiples:M`,
/// `residue:Y:Z`, `theorem1:Y:Z`, `squares`, `triangular`, `primes`,
/// `wythoff`, `not:<spec>` and `bfile:<path>`.
///
/// Returns `Ok(None)` for anything else so callers can try other resolvers.
pub fn parse_builtin(spec: &str, n0: Term) -> Result<Option<MembershipOracle>> {
    let bad = |what: &str| Error::InvalidParameters(format!("bad oracle spec `{spec}`: {what}"));
    let parse_u = |s: &str| {
        s.parse::<Term>()
            .map_err(|_| bad("expected an unsigned integer"))
    };
    let parse_i = |s: &str| s.parse::<i64>().map_err(|_| bad("expected an integer"));

    if let Some(rest) = spec.strip_prefix("not:") {
        return Ok(parse_builtin(rest, n0)?.map(MembershipOracle::complement));
    }
    if let Some(path) = spec.strip_prefix("bfile:") {
        return MembershipOracle::from_bfile(path).map(Some);
    }
    let parts: Vec<&str> = spec.split(':').collect();
    let oracle = match parts.as_slice() {
        ["odds"] => MembershipOracle::odds(n0),
        ["evens"] => MembershipOracle::evens(n0),
        ["squares"] => MembershipOracle::squares(n0),
        ["triangular"] => MembershipOracle::triangular(n0),
        ["primes"] => MembershipOracle::primes(n0),
        ["wythoff"] => MembershipOracle::lower_wythoff(n0),
        ["multiples", m] => MembershipOracle::multiples(parse_u(m)?, n0)?,
        ["residue", y, z] => MembershipOracle::residue(parse_u(y)?, parse_i(z)?, n0)?,
        ["theorem1", y, z] => MembershipOracle::theorem1_set(parse_u(y)?, parse_i(z)?, n0)?,
        _ => return Ok(None),
    };
    Ok(Some(oracle))
}

fn in_residue(x: Term, y: Term, z: i64) -> bool {
    let d = i128::from(x) - i128::from(z);
    d >= i128::from(y) && d % i128::from(y) == 0
}

fn next_in_residue(x: Term, y: Term, z: i64) -> Result<Term> {
    let (y, z) = (i128::from(y), i128::from(z));
    let i = ((i128::from(x) - z + y - 1).div_euclid(y)).max(1);
    term::from_wide(i * y + z)
}

/// Upper end of the interval `[2, (y+z-1)/2]`.
pub(crate) fn theorem1_interval_top(y: Term, z: i64) -> Term {
    let v = (i128::from(y) + i128::from(z) - 1).div_euclid(2);
    Term::try_from(v.max(0)).unwrap_or(0)
}

fn is_triangular(x: Term) -> bool {
    let d = 8 * u128::from(x) + 1;
    let r = d.isqrt();
    r * r == d
}

/// Largest `t` with `t(t+1)/2 <= x`.
fn triangular_root(x: Term) -> Term {
    let d = 8 * u128::from(x) + 1;
    ((d.isqrt() - 1) / 2) as Term
}

/// `x` is a lower Wythoff number iff the count of them up to `x`,
/// `floor((x+1)/phi)`, exceeds the count up to `x - 1`.
pub fn is_lower_wythoff(x: Term) -> bool {
    x >= 1 && term::floor_div_phi(x + 1) > term::floor_div_phi(x)
}

/// Sieve of Eratosthenes that grows on demand.
#[derive(Debug, Default)]
pub struct PrimeSieve {
    composite: RwLock<Vec<bool>>,
}

impl PrimeSieve {
    const INITIAL: usize = 1 << 12;
    /// Refuse to sieve past this bound rather than exhaust memory.
    const MAX_LIMIT: Term = 1 << 34;

    fn ensure(&self, x: Term) -> Result<()> {
        if x >= Self::MAX_LIMIT {
            return Err(Error::Overflow(format!(
                "prime sieve limit exceeded at {x}"
            )));
        }
        let need = x as usize + 1;
        if self.composite.read().expect("sieve lock").len() >= need {
            return Ok(());
        }
        let mut guard = self.composite.write().expect("sieve lock");
        if guard.len() >= need {
            return Ok(());
        }
        let len = need.max(guard.len() * 2).max(Self::INITIAL);
        let mut composite = vec![false; len];
        composite[0] = true;
        if len > 1 {
            composite[1] = true;
        }
        let mut p = 2;
        while p * p < len {
            if !composite[p] {
                (p * p..len).step_by(p).for_each(|i| composite[i] = true);
            }
            p += 1;
        }
        *guard = composite;
        Ok(())
    }

    pub fn is_prime(&self, x: Term) -> Result<bool> {
        self.ensure(x)?;
        Ok(!self.composite.read().expect("sieve lock")[x as usize])
    }

    pub fn next_prime(&self, x: Term) -> Result<Term> {
        let mut from = x;
        loop {
            // prime gaps at this scale are far below the block size
            let block_end = term::add(from, 4096)?;
            self.ensure(block_end)?;
            let sieve = self.composite.read().expect("sieve lock");
            if let Some(p) = (from..=block_end).find(|&i| !sieve[i as usize]) {
                return Ok(p);
            }
            from = block_end + 1;
        }
    }
}
