//! Named sequences: how to generate each one, and the published prefix it
//! must reproduce.

use std::path::Path;

use crate::closedform;
use crate::engine::{self, Mode, RuleSpec, WindowCondition, WindowSide};
use crate::oracle::{parse_builtin, MembershipOracle};
use crate::sequence::{GeneratedSequence, Provenance};
use crate::squares::{self, SquareConstraint};
use crate::term::Term;
use crate::transform;
use crate::{bfile, Error, Result};

/// A set given either directly or as the values of another generator.
#[derive(Debug, Clone)]
pub enum SetSource {
    Oracle(MembershipOracle),
    Sequence(Box<Generator>),
}

impl SetSource {
    /// The first `len` members as an increasing sequence.
    pub fn prefix(&self, len: usize) -> Result<GeneratedSequence> {
        match self {
            SetSource::Oracle(o) => o.enumerate(len),
            SetSource::Sequence(g) => g.run(len),
        }
    }

    /// A membership oracle valid up to the first `len` members.
    pub fn oracle(&self, len: usize) -> Result<MembershipOracle> {
        match self {
            SetSource::Oracle(o) => Ok(o.clone()),
            SetSource::Sequence(g) => MembershipOracle::from_sequence(g.run(len)?),
        }
    }

    fn is_finite(&self) -> bool {
        match self {
            SetSource::Oracle(o) => o.horizon().is_some(),
            SetSource::Sequence(_) => true,
        }
    }
}

/// How a registered sequence is produced.
#[derive(Debug, Clone)]
pub enum Generator {
    Rule(RuleSpec),
    Square(SquareConstraint),
    Theorem1 {
        y: Term,
        z: i64,
    },
    Closed {
        n0: Term,
        f: fn(Term) -> Result<Term>,
    },
    /// `e(n) - n`.
    EMinusN,
    Golomb,
    Transform(SetSource),
    Inverse(SetSource),
}

/// Largest auxiliary prefix tried when a sequence-backed set runs out.
const MAX_AUX: usize = 1 << 26;

/// Retries `f` with doubled auxiliary length while it reports
/// [`Error::HorizonExceeded`].
fn widen<T>(start: usize, mut f: impl FnMut(usize) -> Result<T>) -> Result<T> {
    let mut len = start.max(16);
    loop {
        match f(len) {
            Err(Error::HorizonExceeded { .. }) if len < MAX_AUX => len *= 2,
            r => return r,
        }
    }
}

impl Generator {
    pub fn run(&self, count: usize) -> Result<GeneratedSequence> {
        match self {
            Generator::Rule(rule) => engine::generate(rule, count),
            Generator::Square(c) => squares::solve_square(c, count),
            Generator::Theorem1 { y, z } => squares::theorem1_sequence(*y, *z, count),
            Generator::Closed { n0, f } => {
                let terms = (*n0..*n0 + count as Term)
                    .map(f)
                    .collect::<Result<Vec<_>>>()?;
                GeneratedSequence::monotone(*n0, terms, "closed form")
            }
            Generator::EMinusN => {
                let e = engine::generate(&e_rule(), count)?;
                let terms = e.indexed().map(|(n, v)| v - n).collect();
                GeneratedSequence::new(1, terms, Provenance::new("e(n)-n", false))
            }
            Generator::Golomb => closedform::golomb(count),
            Generator::Transform(src) => {
                if !src.is_finite() {
                    return transform::aronson_transform(&src.oracle(0)?, 1, count);
                }
                widen(2 * count, |len| {
                    transform::aronson_transform(&src.oracle(len)?, 1, count)
                })
            }
            Generator::Inverse(src) => widen(2 * count, |len| {
                transform::inverse_aronson(&src.prefix(len)?, count)
            }),
        }
    }
}

/// A named sequence with its OEIS number and printed prefix.
#[derive(Debug, Clone)]
pub struct RegistryEntry {
    pub name: &'static str,
    pub oeis_id: &'static str,
    pub description: &'static str,
    pub n0: Term,
    pub generator: Generator,
    /// `(index, value)` pairs starting at `n0`.
    pub ground_truth: Vec<(Term, Term)>,
}

impl RegistryEntry {
    pub fn generate(&self, count: usize) -> Result<GeneratedSequence> {
        let s = self.generator.run(count)?;
        let p = Provenance::new(self.name, s.is_monotone())
            .param("oeis", self.oeis_id)
            .param("via", s.provenance());
        Ok(s.with_provenance(p))
    }

    /// First index where the generator disagrees with the printed prefix.
    pub fn check_ground_truth(&self) -> Result<Option<Term>> {
        let s = self.generator.run(self.ground_truth.len())?;
        Ok(self
            .ground_truth
            .iter()
            .find(|&&(n, v)| s.try_get(n) != Some(v))
            .map(|&(n, _)| n))
    }
}

fn indexed(n0: Term, values: &[Term]) -> Vec<(Term, Term)> {
    (n0..).zip(values.iter().copied()).collect()
}

pub(crate) fn a_rule() -> RuleSpec {
    RuleSpec::iff(MembershipOracle::odds(1), 1)
}

pub(crate) fn e_rule() -> RuleSpec {
    RuleSpec::iff(MembershipOracle::multiples(3, 1).expect("m >= 2"), 1)
}

pub(crate) fn g_rule() -> RuleSpec {
    RuleSpec::iff(MembershipOracle::theorem1_set(2, 1, 1).expect("valid"), 1)
}

pub(crate) fn d_rule() -> RuleSpec {
    RuleSpec::new(MembershipOracle::odds(1), Mode::NegatedIff, 1).with_seeds([2])
}

const A_TABLE: [Term; 72] = [
    1, 4, 6, 7, 8, 9, 11, 13, 15, 16, 17, 18, 19, 20, 21, 23, 25, 27, 29, 31, 33, 34, 35, 36, 37,
    38, 39, 40, 41, 42, 43, 44, 45, 47, 49, 51, 53, 55, 57, 59, 61, 63, 65, 67, 69, 70, 71, 72, 73,
    74, 75, 76, 77, 78, 79, 80, 81, 82, 83, 84, 85, 86, 87, 88, 89, 90, 91, 92, 93, 95, 97, 99,
];

fn generator_a() -> Generator {
    Generator::Rule(a_rule())
}

/// Every registered sequence, in a fixed order.
pub fn registry() -> Vec<RegistryEntry> {
    let odds = MembershipOracle::odds(1);
    let entry = |name, oeis_id, description, n0, generator, values: &[Term]| RegistryEntry {
        name,
        oeis_id,
        description,
        n0,
        generator,
        ground_truth: indexed(n0, values),
    };
    vec![
        entry(
            "a",
            "A079000",
            "n in a iff a(n) is odd",
            1,
            generator_a(),
            &A_TABLE,
        ),
        entry(
            "a'",
            "A080596",
            "least increasing a'(1) = 1, a'(a'(n)) = 2n + 3 for n >= 2",
            1,
            Generator::Square(
                SquareConstraint::new(2, 3, 1)
                    .applies_from(2)
                    .with_seed(1, 1),
            ),
            &[1, 4, 5, 7, 9, 10, 11, 12, 13, 15, 17, 19, 21, 22],
        ),
        entry(
            "b",
            "A079313",
            "n in b iff b(n) is odd, values distinct but not increasing",
            1,
            Generator::Rule(RuleSpec::iff(odds.clone(), 1).non_monotone()),
            &[
                1, 3, 5, 2, 7, 8, 9, 11, 13, 12, 15, 17, 19, 16, 21, 23, 25, 20, 27, 29,
            ],
        ),
        entry(
            "c",
            "A079253",
            "n in c iff c(n) is even, from n = 0",
            0,
            Generator::Rule(RuleSpec::iff(MembershipOracle::evens(0), 0)),
            &[0, 3, 5, 6, 7, 8, 10, 12, 14, 15],
        ),
        entry(
            "d",
            "A080653",
            "d(1) = 2, then \"n in d iff d(n) is odd\" is false",
            1,
            Generator::Rule(d_rule()),
            &[2, 4, 5, 6, 8, 10, 11, 12, 13, 14],
        ),
        entry(
            "d'",
            "A014132",
            "n + round(sqrt(2n)), the non-triangular numbers",
            1,
            Generator::Closed {
                n0: 1,
                f: closedform::dprime_closed,
            },
            &[2, 4, 5, 7, 8, 9, 11, 12, 13, 14, 16],
        ),
        entry(
            "e",
            "A003605",
            "n in e iff e(n) is a multiple of 3; e(e(n)) = 3n",
            1,
            Generator::Rule(e_rule()),
            &[2, 3, 6, 7, 8, 9, 12, 15, 18, 19],
        ),
        entry("e'", "A006166", "e(n) - n", 1, Generator::EMinusN, &[]),
        entry(
            "g",
            "A080637",
            "g(1) = 2, g(g(n)) = 2n + 1",
            1,
            Generator::Rule(g_rule()),
            &[2, 3, 5, 6, 7, 9, 11, 12, 13, 14],
        ),
        entry(
            "g'",
            "A007378",
            "from n = 2: n in g' iff g'(n) is an even number >= 4; g'(g'(n)) = 2n",
            2,
            Generator::Rule(RuleSpec::iff(
                MembershipOracle::residue(2, 2, 2).expect("valid"),
                2,
            )),
            &[3, 4, 6, 7, 8, 10],
        ),
        entry(
            "h",
            "A080780",
            "n in h iff h(n) is a multiple of 6",
            1,
            Generator::Rule(RuleSpec::iff(
                MembershipOracle::multiples(6, 1).expect("m >= 2"),
                1,
            )),
            &[2, 6, 7, 8, 9, 12, 18, 24, 30, 31],
        ),
        entry(
            "i",
            "A080588",
            "fake even numbers: least increasing with i(i(n)) = 4n",
            0,
            Generator::Square(SquareConstraint::new(4, 0, 0)),
            &[0, 2, 4, 5, 8, 12, 13, 14, 16, 17],
        ),
        entry(
            "i'",
            "A080591",
            "fake odd numbers: least increasing with i'(i'(n)) = 4n + 3",
            0,
            Generator::Square(SquareConstraint::new(4, 3, 0)),
            &[1, 3, 4, 7, 11, 12, 13, 15, 16, 17],
        ),
        entry(
            "q1",
            "A079255",
            "n in q iff q(n) is odd and q(n+1) is even",
            1,
            Generator::Rule(
                RuleSpec::iff(odds.clone(), 1).with_window(WindowCondition::before_nonmember()),
            ),
            &[1, 4, 6, 9, 12, 15, 18, 20, 23, 26, 28],
        ),
        entry(
            "q2",
            "A079259",
            "n in q iff q(n) and q(n+1) are both odd",
            1,
            Generator::Rule(
                RuleSpec::iff(odds.clone(), 1).with_window(WindowCondition::with_next_member()),
            ),
            &[1, 5, 6, 10, 11, 15, 19, 20, 24, 25],
        ),
        entry(
            "golomb",
            "A001462",
            "G(n) is the number of times n occurs",
            1,
            Generator::Golomb,
            &[1, 2, 2, 3, 3, 4, 4, 4, 5, 5, 5, 6, 6, 6, 6, 7, 7, 7, 7, 8],
        ),
        entry(
            "aronson-triangular",
            "A079257",
            "Aronson transform of the triangular numbers",
            1,
            Generator::Transform(SetSource::Oracle(MembershipOracle::triangular(1))),
            &[1, 4, 5, 6, 10, 15, 16, 17, 18, 21],
        ),
        entry(
            "aronson-squares",
            "A079258",
            "Aronson transform of the squares",
            1,
            Generator::Transform(SetSource::Oracle(MembershipOracle::squares(1))),
            &[1, 3, 4, 9, 10, 11, 12, 13, 16, 25],
        ),
        entry(
            "aronson-primes",
            "A079254",
            "Aronson transform of the primes",
            1,
            Generator::Transform(SetSource::Oracle(MembershipOracle::primes(1))),
            &[4, 6, 8, 11, 12, 13, 14, 17, 18, 20],
        ),
        entry(
            "aronson-wythoff",
            "A080760",
            "Aronson transform of the lower Wythoff sequence",
            1,
            Generator::Transform(SetSource::Oracle(MembershipOracle::lower_wythoff(1))),
            &[1, 5, 7, 10, 11, 13, 14, 15, 18, 19],
        ),
        entry(
            "aronson-a",
            "A079325",
            "Aronson transform of the values of a",
            1,
            Generator::Transform(SetSource::Sequence(Box::new(generator_a()))),
            &[1, 3, 4, 6, 10, 11, 12, 14, 22, 23],
        ),
        entry(
            "inverse-squares",
            "A010906",
            "inverse Aronson transform of the squares",
            1,
            Generator::Inverse(SetSource::Oracle(MembershipOracle::squares(1))),
            &[1, 3, 5, 6, 7, 8, 16, 17, 18, 19, 20, 21, 22, 23, 24, 26, 27],
        ),
        entry(
            "inverse-primes",
            "A080759",
            "inverse Aronson transform of the primes",
            1,
            Generator::Inverse(SetSource::Oracle(MembershipOracle::primes(1))),
            &[3, 5, 6, 11, 12, 17, 18, 20, 21, 22],
        ),
        entry(
            "inverse-wythoff",
            "A080746",
            "inverse Aronson transform of the lower Wythoff sequence",
            1,
            Generator::Inverse(SetSource::Oracle(MembershipOracle::lower_wythoff(1))),
            &[1, 4, 6, 7, 9, 10, 12, 14, 15, 17],
        ),
        entry(
            "inverse-a",
            "",
            "inverse Aronson transform of a: the odd numbers",
            1,
            Generator::Inverse(SetSource::Sequence(Box::new(generator_a()))),
            &[1, 3, 5, 7, 9, 11, 13, 15, 17, 19],
        ),
    ]
}

fn canonical(name: &str) -> String {
    name.trim().replace(['\u{2032}', '\u{2019}'], "'")
}

/// Parses `f(y,z)`, `f(y, z)` or `f:y:z`.
fn parse_f(name: &str) -> Option<(Term, i64)> {
    let inner = name
        .strip_prefix("f(")
        .and_then(|r| r.strip_suffix(')'))
        .or_else(|| name.strip_prefix("f:"))?;
    let (y, z) = inner.split_once([',', ':'])?;
    Some((y.trim().parse().ok()?, z.trim().parse().ok()?))
}

/// Finds a registered sequence by name, `'`-variant, OEIS number
/// (`A79000` or `A079000`), or as `f(y,z)` for the Theorem 1 family.
pub fn registry_lookup(name: &str) -> Result<RegistryEntry> {
    let key = canonical(name);
    if let Some((y, z)) = parse_f(&key) {
        closedform::check_theorem1_params(y, z)?;
        return Ok(RegistryEntry {
            name: "f",
            oeis_id: "",
            description: "least increasing f with f(1) = (y+z+1)/2, f(f(n)) = yn + z",
            n0: 1,
            generator: Generator::Theorem1 { y, z },
            ground_truth: Vec::new(),
        });
    }
    let oeis = key
        .strip_prefix(['A', 'a'])
        .filter(|d| !d.is_empty() && d.chars().all(|c| c.is_ascii_digit()))
        .and_then(|d| d.parse::<u32>().ok());
    registry()
        .into_iter()
        .find(|e| {
            e.name == key
                || match oeis {
                    Some(num) => e.oeis_id.get(1..).and_then(|d| d.parse().ok()) == Some(num),
                    None => false,
                }
        })
        .ok_or_else(|| Error::UnknownSequence(name.to_string()))
}

/// Resolves a set description: a builtin oracle spec, `not:<spec>`,
/// `bfile:<path>`, or `seq:<name>` for the values of a registered sequence
/// (materialized to `len` terms).
pub fn parse_oracle(spec: &str, n0: Term, len: usize) -> Result<MembershipOracle> {
    if let Some(rest) = spec.strip_prefix("not:") {
        return Ok(MembershipOracle::complement(parse_oracle(rest, n0, len)?));
    }
    if let Some(name) = spec.strip_prefix("seq:") {
        let s = registry_lookup(name)?.generate(len)?;
        return Ok(MembershipOracle::from_sequence(s)?.with_n0(n0));
    }
    parse_builtin(spec, n0)?
        .ok_or_else(|| Error::InvalidParameters(format!("unknown oracle spec `{spec}`")))
}

/// The Aronson transform of the set `spec` (see [`parse_oracle`]).
pub fn transform_spec(spec: &str, n0: Term, count: usize) -> Result<GeneratedSequence> {
    if !spec.contains("seq:") {
        return transform::aronson_transform(&parse_oracle(spec, n0, 0)?, n0, count);
    }
    widen(2 * count, |len| {
        transform::aronson_transform(&parse_oracle(spec, n0, len)?, n0, count)
    })
}

/// Parses an inline rule `oracle=<spec>,mode=iff,n0=1,seeds=2;4,window=in:next:out`.
///
/// Only `oracle` is required. `mode` is one of `iff`, `onlyif`, `if`,
/// `negated`; `monotone=false` selects distinct but unordered values.
/// `seq:` oracles are materialized to `len` terms.
pub fn parse_rule(spec: &str, len: usize) -> Result<RuleSpec> {
    let bad = |what: String| Error::InvalidParameters(format!("rule `{spec}`: {what}"));
    let mut oracle = None;
    let (mut mode, mut n0, mut monotone) = (Mode::Iff, 1, true);
    let (mut seeds, mut window) = (Vec::new(), None);
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| bad(format!("`{part}` is not key=value")))?;
        let num = |v: &str| {
            v.parse::<Term>()
                .map_err(|_| bad(format!("bad number `{v}`")))
        };
        match key {
            "oracle" => oracle = Some(value.to_string()),
            "mode" => {
                mode = match value {
                    "iff" => Mode::Iff,
                    "onlyif" => Mode::OnlyIf,
                    "if" => Mode::If,
                    "negated" => Mode::NegatedIff,
                    _ => return Err(bad(format!("unknown mode `{value}`"))),
                }
            }
            "n0" => n0 = num(value)?,
            "seeds" => {
                seeds = value
                    .split(';')
                    .filter(|v| !v.is_empty())
                    .map(num)
                    .collect::<Result<_>>()?
            }
            "monotone" => {
                monotone = value
                    .parse()
                    .map_err(|_| bad(format!("monotone must be true or false, not `{value}`")))?
            }
            "window" => {
                window =
                    Some(parse_window(value).ok_or_else(|| bad(format!("bad window `{value}`")))?)
            }
            _ => return Err(bad(format!("unknown key `{key}`"))),
        }
    }
    let oracle = oracle.ok_or_else(|| bad("missing oracle=".into()))?;
    let mut rule = RuleSpec::new(parse_oracle(&oracle, n0, len)?, mode, n0).with_seeds(seeds);
    if !monotone {
        rule = rule.non_monotone();
    }
    if let Some(w) = window {
        rule = rule.with_window(w);
    }
    Ok(rule)
}

/// `in:next:out` and the like: current literal, side, neighbour literal.
fn parse_window(s: &str) -> Option<WindowCondition> {
    let lit = |t: &str| match t {
        "in" => Some(true),
        "out" => Some(false),
        _ => None,
    };
    let mut it = s.split(':');
    let current = lit(it.next()?)?;
    let side = match it.next()? {
        "prev" => WindowSide::Previous,
        "next" => WindowSide::Next,
        _ => return None,
    };
    let neighbor = lit(it.next()?)?;
    it.next().is_none().then_some(WindowCondition {
        side,
        current,
        neighbor,
    })
}

/// Generates `count` terms of an inline rule, widening any `seq:` oracle
/// until it covers the values the rule asks about.
pub fn generate_inline(spec: &str, count: usize) -> Result<GeneratedSequence> {
    if !spec.contains("seq:") {
        return engine::generate(&parse_rule(spec, 0)?, count);
    }
    widen(2 * count, |len| {
        engine::generate(&parse_rule(spec, len)?, count)
    })
}

/// A sequence given by registry name, builtin set name (its members in
/// order), or b-file path.
pub fn resolve_sequence(spec: &str, count: usize) -> Result<GeneratedSequence> {
    match registry_lookup(spec) {
        Ok(e) => return e.generate(count),
        Err(Error::UnknownSequence(_)) => {}
        Err(e) => return Err(e),
    }
    if let Some(o) = parse_builtin(spec, 1)? {
        if o.horizon().is_none() {
            return o.enumerate(count);
        }
    }
    let path = spec.strip_prefix("bfile:").unwrap_or(spec);
    if Path::new(path).is_file() {
        return bfile::read_path(path, true);
    }
    Err(Error::UnknownSequence(spec.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_reproduces_its_prefix() {
        for e in registry() {
            assert_eq!(e.check_ground_truth().unwrap(), None, "{}", e.name);
        }
    }

    #[test]
    fn lookup_by_alias() {
        assert_eq!(registry_lookup("a′").unwrap().name, "a'");
        assert_eq!(registry_lookup("A79000").unwrap().name, "a");
        assert_eq!(registry_lookup("A079000").unwrap().name, "a");
        assert_eq!(registry_lookup("A7378").unwrap().name, "g'");
        assert!(matches!(
            registry_lookup("zz"),
            Err(Error::UnknownSequence(_))
        ));
        let f = registry_lookup("f(2, 1)").unwrap();
        assert_eq!(f.generate(4).unwrap().terms(), &[2, 3, 5, 6]);
        assert!(matches!(
            registry_lookup("f(3,1)"),
            Err(Error::InvalidParameters(_))
        ));
    }

    #[test]
    fn registry_examples() {
        let a = registry_lookup("a").unwrap();
        let want = [1, 4, 6, 7, 8, 9, 11, 13, 15, 16, 17, 18];
        assert_eq!(&a.ground_truth[..12], &indexed(1, &want)[..]);
        let i = registry_lookup("i").unwrap();
        assert_eq!(i.ground_truth[0], (0, 0));
    }

    #[test]
    fn derived_entries() {
        let e1 = registry_lookup("e'").unwrap().generate(10).unwrap();
        assert_eq!(e1.terms(), &[1, 1, 3, 3, 3, 3, 5, 7, 9, 9]);
        let g1 = registry_lookup("g'").unwrap().generate(6).unwrap();
        assert_eq!(g1.n0(), 2);
        assert_eq!(g1.terms(), &[3, 4, 6, 7, 8, 10]);
    }

    #[test]
    fn sequence_backed_oracle() {
        let o = parse_oracle("seq:a", 1, 50).unwrap();
        assert!(o.contains(7).unwrap());
        assert!(!o.contains(5).unwrap());
        let o = parse_oracle("not:odds", 1, 0).unwrap();
        assert!(o.contains(4).unwrap());
        assert!(parse_oracle("bogus", 1, 0).is_err());
    }

    #[test]
    fn inline_rules() {
        let a = generate_inline("oracle=odds,mode=iff,n0=1", 12).unwrap();
        assert_eq!(a.terms(), &A_TABLE[..12]);
        let d = generate_inline("oracle=odds,mode=negated,seeds=2", 5).unwrap();
        assert_eq!(d.terms(), &[2, 4, 5, 6, 8]);
        let q = generate_inline("oracle=odds,window=in:next:out", 6).unwrap();
        assert_eq!(q.terms(), &[1, 4, 6, 9, 12, 15]);
        let b = generate_inline("oracle=odds,monotone=false", 5).unwrap();
        assert_eq!(b.terms(), &[1, 3, 5, 2, 7]);
        let t = generate_inline("oracle=seq:a", 10).unwrap();
        assert_eq!(t.terms(), &[1, 3, 4, 6, 10, 11, 12, 14, 22, 23]);
        for bad in [
            "mode=iff",
            "oracle=odds,mode=xor",
            "oracle=odds,window=in:up:out",
            "oracle=odds,x=1",
        ] {
            assert!(
                matches!(parse_rule(bad, 0), Err(Error::InvalidParameters(_))),
                "{bad}"
            );
        }
    }

    #[test]
    fn resolve_builtin_and_named() {
        assert_eq!(
            resolve_sequence("squares", 4).unwrap().terms(),
            &[1, 4, 9, 16]
        );
        assert_eq!(resolve_sequence("c", 3).unwrap().terms(), &[0, 3, 5]);
        assert!(matches!(
            resolve_sequence("/no/such/file", 3),
            Err(Error::UnknownSequence(_))
        ));
    }
}
