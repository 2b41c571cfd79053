//! The Aronson transform of a set, its inverse, and the square `s(s(n))` of
//! a sequence.

use std::ops::RangeInclusive;

use crate::engine::iff_terms;
use crate::oracle::MembershipOracle;
use crate::sequence::{GeneratedSequence, Provenance};
use crate::term::Term;
use crate::{Error, Result};

/// The increasing sequence alpha with "n in alpha iff alpha(n) in beta",
/// indexed from `n0`.
pub fn aronson_transform(
    beta: &MembershipOracle,
    n0: Term,
    count: usize,
) -> Result<GeneratedSequence> {
    aronson_transform_seeded(beta, n0, &[], count)
}

/// As [`aronson_transform`], with forced initial terms.
pub fn aronson_transform_seeded(
    beta: &MembershipOracle,
    n0: Term,
    seeds: &[Term],
    count: usize,
) -> Result<GeneratedSequence> {
    let terms = iff_terms(beta, n0, seeds, count)?;
    let mut p = Provenance::new("aronson_transform", true)
        .param("beta", beta)
        .param("n0", n0);
    if !seeds.is_empty() {
        let s: Vec<String> = seeds.iter().map(|x| x.to_string()).collect();
        p = p.param("seeds", s.join(";"));
    }
    GeneratedSequence::new(n0, terms, p)
}

/// A run of consecutive integers placed in one row of one column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    pub column: Term,
    pub numbers: RangeInclusive<Term>,
}

/// The hot (in beta) and cold (not in beta) rows of the inverse table,
/// built column by column. Together the rows cover `[n0, l_n]` exactly once.
#[derive(Debug, Clone, Default)]
pub struct InverseTableState {
    pub hot_row: Vec<Placement>,
    pub cold_row: Vec<Placement>,
    /// Largest number placed so far.
    pub l_n: Option<Term>,
    hot_count: u64,
}

impl InverseTableState {
    fn place(&mut self, hot: bool, column: Term, numbers: RangeInclusive<Term>) {
        if numbers.is_empty() {
            return;
        }
        let row = if hot {
            self.hot_count += numbers.end() - numbers.start() + 1;
            &mut self.hot_row
        } else {
            &mut self.cold_row
        };
        row.push(Placement { column, numbers });
    }

    /// Number of hot integers placed.
    pub fn hot_count(&self) -> u64 {
        self.hot_count
    }

    /// The hot integers in increasing order.
    pub fn hot_members(&self) -> impl Iterator<Item = Term> + '_ {
        self.hot_row.iter().flat_map(|p| p.numbers.clone())
    }

    /// The hot row as a set known up to `l_n`, over integers `>= n0`.
    pub fn hot_oracle(&self, n0: Term) -> Result<MembershipOracle> {
        let mut runs: Vec<RangeInclusive<Term>> = Vec::new();
        for p in &self.hot_row {
            match runs.last_mut() {
                Some(r) if r.end() + 1 == *p.numbers.start() => {
                    *r = *r.start()..=*p.numbers.end();
                }
                _ => runs.push(p.numbers.clone()),
            }
        }
        let horizon = self.l_n.ok_or(Error::HorizonExceeded {
            query: n0,
            horizon: 0,
        })?;
        MembershipOracle::from_ranges(runs, horizon, n0)
    }

    /// Processes column `n` given `alpha(n)` and whether `n` is a value of alpha.
    ///
    /// `alpha(n)` goes into the hot row iff `n` is in alpha. The numbers
    /// skipped since the previous column were passed over by the greedy
    /// construction, so they go into the opposite row, except when
    /// `alpha(n-1) = n-1` and `n` is not in alpha: then `n` itself was the
    /// cold number that forced the jump, and only `n+1 ..` are hot.
    fn column(&mut self, n: Term, value: Term, n_in_alpha: bool, prev: Term) {
        if !n_in_alpha && prev == n - 1 {
            self.place(false, n, n..=n);
            self.place(true, n, n + 1..=value - 1);
        } else {
            self.place(!n_in_alpha, n, prev + 1..=value - 1);
        }
        self.place(n_in_alpha, n, value..=value);
        self.l_n = Some(value);
    }
}

/// Builds the inverse table for the columns of the given prefix.
pub fn inverse_table(alpha: &GeneratedSequence) -> Result<InverseTableState> {
    let mut state = InverseTableState::default();
    run_columns(alpha, &mut state, |_| false)?;
    Ok(state)
}

fn run_columns(
    alpha: &GeneratedSequence,
    state: &mut InverseTableState,
    done: impl Fn(&InverseTableState) -> bool,
) -> Result<()> {
    if !alpha.is_monotone() {
        return Err(Error::NonMonotoneInput { index: alpha.n0() });
    }
    let n0 = alpha.n0();
    if n0 == 0 {
        // column 0 has no previous number to compare against
        if let Some(first) = alpha.try_get(0) {
            if first > 0 {
                state.place(false, 0, 0..=0);
                state.place(true, 0, 1..=first - 1);
            }
            state.place(first == 0, 0, first..=first);
            state.l_n = Some(first);
        }
    }
    for (n, value) in alpha.indexed().skip(usize::from(n0 == 0)) {
        if done(state) {
            break;
        }
        if value < n {
            return Err(Error::InvalidParameters(format!(
                "alpha({n}) = {value} is below its index"
            )));
        }
        let prev = state.l_n.unwrap_or(n - 1);
        let member = alpha
            .value_membership(n)
            .expect("n <= alpha(n) <= last term");
        state.column(n, value, member, prev);
    }
    Ok(())
}

/// The unique set beta whose Aronson transform is `alpha`, as its first
/// `count` members in increasing order (indexed from 1).
///
/// Fails with [`Error::HorizonExceeded`] when the prefix of alpha runs out
/// before `count` members are known.
pub fn inverse_aronson(alpha: &GeneratedSequence, count: usize) -> Result<GeneratedSequence> {
    let mut state = InverseTableState::default();
    run_columns(alpha, &mut state, |s| s.hot_count >= count as u64)?;
    if state.hot_count < count as u64 {
        return Err(Error::HorizonExceeded {
            query: alpha.end(),
            horizon: alpha.end().saturating_sub(1),
        });
    }
    let terms: Vec<Term> = state.hot_members().take(count).collect();
    let p = Provenance::new("inverse_aronson", true).param("alpha", alpha.provenance());
    GeneratedSequence::new(1, terms, p)
}

/// `{s(s(n))}` for every `n` of the prefix whose inner value is itself an
/// index of the prefix. The result stops at the first `n` where `s(n)` runs
/// past the prefix.
pub fn sequence_square(s: &GeneratedSequence) -> Result<GeneratedSequence> {
    let mut terms = Vec::new();
    for (_, v) in s.indexed() {
        match s.try_get(v) {
            Some(w) => terms.push(w),
            None => break,
        }
    }
    if terms.is_empty() {
        let first = s.try_get(s.n0()).unwrap_or(s.n0());
        return Err(Error::HorizonExceeded {
            query: first,
            horizon: s.end().saturating_sub(1),
        });
    }
    let p = Provenance::new("square", s.is_monotone()).param("of", s.provenance());
    GeneratedSequence::new(s.n0(), terms, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(n0: Term, terms: &[Term]) -> GeneratedSequence {
        GeneratedSequence::monotone(n0, terms.to_vec(), "t").unwrap()
    }

    #[test]
    fn transform_examples() {
        let cases: [(MembershipOracle, [Term; 10]); 3] = [
            (
                MembershipOracle::squares(1),
                [1, 3, 4, 9, 10, 11, 12, 13, 16, 25],
            ),
            (
                MembershipOracle::primes(1),
                [4, 6, 8, 11, 12, 13, 14, 17, 18, 20],
            ),
            (
                MembershipOracle::lower_wythoff(1),
                [1, 5, 7, 10, 11, 13, 14, 15, 18, 19],
            ),
        ];
        for (beta, want) in cases {
            assert_eq!(
                aronson_transform(&beta, 1, 10).unwrap().terms(),
                &want,
                "{beta}"
            );
        }
    }

    #[test]
    fn inverse_of_squares_follows_the_table() {
        let squares = MembershipOracle::squares(1).enumerate(40).unwrap();
        let beta = inverse_aronson(&squares, 20).unwrap();
        assert_eq!(
            beta.terms(),
            &[1, 3, 5, 6, 7, 8, 16, 17, 18, 19, 20, 21, 22, 23, 24, 26, 27, 28, 29, 30]
        );
        let table = inverse_table(&squares.truncated(4)).unwrap();
        // columns 1..4 of the table: 1 | 2 | 3,4 | 5..9 ... 16
        assert_eq!(table.l_n, Some(16));
        let cold: Vec<Term> = table
            .cold_row
            .iter()
            .flat_map(|p| p.numbers.clone())
            .collect();
        assert_eq!(cold, vec![2, 4, 9, 10, 11, 12, 13, 14, 15]);
    }

    #[test]
    fn inverse_of_primes() {
        let primes = MembershipOracle::primes(1).enumerate(40).unwrap();
        let beta = inverse_aronson(&primes, 10).unwrap();
        assert_eq!(beta.terms(), &[3, 5, 6, 11, 12, 17, 18, 20, 21, 22]);
    }

    #[test]
    fn inverse_of_lower_wythoff() {
        let w = MembershipOracle::lower_wythoff(1).enumerate(40).unwrap();
        let beta = inverse_aronson(&w, 10).unwrap();
        assert_eq!(beta.terms(), &[1, 4, 6, 7, 9, 10, 12, 14, 15, 17]);
    }

    #[test]
    fn rows_partition_the_covered_range() {
        let tri = MembershipOracle::triangular(1).enumerate(200).unwrap();
        let t = inverse_table(&tri).unwrap();
        let mut all: Vec<Term> = t
            .hot_row
            .iter()
            .chain(&t.cold_row)
            .flat_map(|p| p.numbers.clone())
            .collect();
        all.sort_unstable();
        let l = t.l_n.unwrap();
        assert_eq!(all, (1..=l).collect::<Vec<_>>());
    }

    #[test]
    fn round_trip_from_zero() {
        let alpha = aronson_transform(&MembershipOracle::evens(0), 0, 300).unwrap();
        let beta = inverse_aronson(&alpha, 100).unwrap();
        let beta = MembershipOracle::from_sequence(beta).unwrap().with_n0(0);
        let again = aronson_transform(&beta, 0, 60).unwrap();
        assert_eq!(again.terms(), &alpha.terms()[..60]);
    }

    #[test]
    fn hot_row_oracle_transforms_back() {
        let squares = MembershipOracle::squares(1).enumerate(300).unwrap();
        let beta = inverse_table(&squares).unwrap().hot_oracle(1).unwrap();
        assert!(beta.contains(3).unwrap() && !beta.contains(4).unwrap());
        assert_eq!(beta.next_nonmember(5).unwrap(), 9);
        let back = aronson_transform(&beta, 1, 300).unwrap();
        assert_eq!(back.terms(), squares.terms());
    }

    #[test]
    fn inverse_runs_out_of_prefix() {
        let s = seq(1, &[1, 4, 9]);
        assert!(matches!(
            inverse_aronson(&s, 50),
            Err(Error::HorizonExceeded { .. })
        ));
    }

    #[test]
    fn inverse_rejects_values_below_index() {
        let s = seq(3, &[1, 5, 9]);
        assert!(matches!(
            inverse_table(&s),
            Err(Error::InvalidParameters(_))
        ));
    }

    #[test]
    fn square_examples() {
        let id = seq(1, &(1..=30).collect::<Vec<_>>());
        assert_eq!(sequence_square(&id).unwrap().terms(), id.terms());
        let c = seq(0, &[0, 3, 5, 6, 7, 8, 10, 12, 14, 15]);
        assert_eq!(sequence_square(&c).unwrap().terms(), &[0, 6, 8, 10, 12, 14]);
        let short = seq(1, &[5, 6]);
        assert!(sequence_square(&short).is_err());
    }
}
