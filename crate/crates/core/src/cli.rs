//! The `aronson` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::analysis;
use crate::registry::{self, resolve_sequence};
use crate::sequence::GeneratedSequence;
use crate::squares::{self, SquareConstraint};
use crate::term::Term;
use crate::{bfile, transform, words, Error, Result};

const RULE_HELP: &str = "\
SEQUENCES
  Registered names (see `aronson list`), OEIS numbers such as A079000,
  f(y,z) for the least increasing f with f(f(n)) = yn + z, a b-file path,
  or an inline rule:

    oracle=<set>,mode=iff|onlyif|if|negated,n0=N,seeds=S1;S2;..,
    monotone=true|false,window=in|out:prev|next:in|out

SETS
  odds, evens, multiples:M, residue:Y:Z, theorem1:Y:Z, squares, triangular,
  primes, wythoff, not:<set>, seq:<name>, bfile:<path>

EXAMPLES
  aronson gen a --count 12
  aronson gen oracle=residue:3:0,mode=iff,n0=1 --count 20
  aronson inverse --alpha squares --count 7
  aronson verify all --horizon 10000";

#[derive(Debug, Parser)]
#[command(
    name = "aronson",
    version,
    about = "Self-referential sequences in the style of Aronson's sequence",
    after_help = RULE_HELP
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct Output {
    /// Write the b-file here instead of stdout
    #[arg(long, value_name = "PATH")]
    bfile: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a registered sequence or an inline rule
    Gen {
        sequence: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Aronson transform of a set
    Transform {
        #[arg(long, value_name = "SET")]
        beta: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
        #[arg(long, default_value_t = 1)]
        n0: Term,
        #[command(flatten)]
        out: Output,
    },
    /// Inverse Aronson transform of an increasing sequence
    Inverse {
        #[arg(long, value_name = "SEQUENCE")]
        alpha: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
        #[command(flatten)]
        out: Output,
    },
    /// s(s(n)) over a prefix of s
    Square {
        #[arg(long = "seq", value_name = "SEQUENCE")]
        sequence: String,
        /// Terms of s to materialize
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Least increasing s with s(s(n)) = yn + z
    SolveSquare {
        #[arg(long)]
        y: Term,
        #[arg(long, allow_hyphen_values = true)]
        z: i64,
        /// Forced term, as INDEX=VALUE
        #[arg(long = "seed", value_name = "N=V", value_parser = parse_seed)]
        seeds: Vec<(Term, Term)>,
        #[arg(long, default_value_t = 1)]
        n0: Term,
        /// First index the equation applies to [default: n0]
        #[arg(long)]
        from: Option<Term>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
        #[command(flatten)]
        out: Output,
    },
    /// First differences of a sequence
    Diff {
        #[arg(long = "seq", value_name = "SEQUENCE")]
        sequence: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        count: u64,
        /// Print the run-length word instead of a b-file
        #[arg(long)]
        runs: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Check an identity, or all identities and registry prefixes
    Verify {
        identity: String,
        #[arg(long, default_value_t = 10_000)]
        horizon: Term,
    },
    /// Statistics
    Stats {
        #[command(subcommand)]
        stat: Stat,
    },
    /// Registered sequences and identities
    List,
}

#[derive(Debug, Subcommand)]
enum Stat {
    /// n/a(n) over segment K of Aronson's sequence
    Density {
        #[arg(long, value_name = "K")]
        segment: u32,
    },
}

fn parse_seed(s: &str) -> std::result::Result<(Term, Term), String> {
    let (n, v) = s.split_once('=').ok_or("expected INDEX=VALUE")?;
    let n = n.trim().parse().map_err(|_| format!("bad index `{n}`"))?;
    let v = v.trim().parse().map_err(|_| format!("bad value `{v}`"))?;
    Ok((n, v))
}

/// Errors caused by what the user asked for rather than by the computation.
fn is_usage(e: &Error) -> bool {
    matches!(
        e,
        Error::UnknownSequence(_)
            | Error::UnknownIdentity(_)
            | Error::InvalidParameters(_)
            | Error::InvalidRule(_)
    )
}

fn sequence(spec: &str, count: usize) -> Result<GeneratedSequence> {
    if spec.contains('=') && !spec.starts_with("f(") {
        return registry::generate_inline(spec, count);
    }
    resolve_sequence(spec, count)
}

fn emit(seq: &GeneratedSequence, out: &Output, stdout: &mut dyn Write) -> Result<()> {
    match &out.bfile {
        Some(path) => bfile::write_path(seq, path),
        None => bfile::write(seq, stdout).map_err(|e| Error::Io(e.to_string())),
    }
}

/// Materializes enough of `spec` to invert `count` terms.
fn inverse(spec: &str, count: usize) -> Result<GeneratedSequence> {
    let mut len = count.max(16);
    loop {
        let alpha = sequence(spec, len)?;
        match transform::inverse_aronson(&alpha, count) {
            Err(Error::HorizonExceeded { .. }) if alpha.len() >= len && len < 1 << 26 => len *= 2,
            r => return r,
        }
    }
}

fn write_line(w: &mut dyn Write, line: impl std::fmt::Display) -> Result<()> {
    writeln!(w, "{line}").map_err(|e| Error::Io(e.to_string()))
}

fn verify(name: &str, horizon: Term, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool> {
    let results = if name == "all" {
        analysis::verify_all(horizon)
    } else {
        vec![analysis::verify_identity(name, horizon)]
    };
    let mut ok = true;
    for r in results {
        match r {
            Ok(report) => {
                ok &= report.passed();
                write_line(out, &report)?;
            }
            Err(e) if name != "all" => return Err(e),
            Err(e) => {
                ok = false;
                write_line(err, e)?;
            }
        }
    }
    Ok(ok)
}

fn density(k: u32, out: &mut dyn Write) -> Result<()> {
    let p = analysis::density_profile_closed(k)?;
    let (start, end) = crate::closedform::a_segment_bounds(k)?;
    let f = |r: num_rational::Ratio<u64>| *r.numer() as f64 / *r.denom() as f64;
    write_line(out, format_args!("segment {k}"))?;
    write_line(out, format_args!("indices {start}..{}", end - 1))?;
    write_line(
        out,
        format_args!(
            "min {} at {} ({:.6})",
            p.min_ratio,
            p.argmin,
            f(p.min_ratio)
        ),
    )?;
    write_line(
        out,
        format_args!(
            "max {} at {} ({:.6})",
            p.max_ratio,
            p.argmax,
            f(p.max_ratio)
        ),
    )?;
    write_line(
        out,
        format_args!("mean {:.6} stride {}", p.mean_ratio, p.stride),
    )?;
    write_line(
        out,
        format_args!("limit {:.6}", analysis::average_density_constant()),
    )
}

fn list(out: &mut dyn Write) -> Result<()> {
    for e in registry::registry() {
        let id = if e.oeis_id.is_empty() { "-" } else { e.oeis_id };
        write_line(
            out,
            format_args!("{:<20} {:<8} {}", e.name, id, e.description),
        )?;
    }
    write_line(
        out,
        format_args!("{:<20} {:<8} {}", "f(y,z)", "-", "f(f(n)) = yn + z"),
    )?;
    write_line(out, "")?;
    for name in analysis::identity_names() {
        write_line(out, format_args!("identity {name}"))?;
    }
    Ok(())
}

/// Returns `Ok(false)` when a verification fails.
fn execute(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool> {
    match cmd {
        Command::Gen {
            sequence: spec,
            count,
            out: o,
        } => emit(&sequence(&spec, count as usize)?, &o, out)?,
        Command::Transform {
            beta,
            count,
            n0,
            out: o,
        } => emit(
            &registry::transform_spec(&beta, n0, count as usize)?,
            &o,
            out,
        )?,
        Command::Inverse {
            alpha,
            count,
            out: o,
        } => emit(&inverse(&alpha, count as usize)?, &o, out)?,
        Command::Square {
            sequence: spec,
            count,
            out: o,
        } => emit(
            &transform::sequence_square(&sequence(&spec, count as usize)?)?,
            &o,
            out,
        )?,
        Command::SolveSquare {
            y,
            z,
            seeds,
            n0,
            from,
            count,
            out: o,
        } => {
            let mut c = SquareConstraint::new(y, z, n0).applies_from(from.unwrap_or(n0));
            for (n, v) in seeds {
                c = c.with_seed(n, v);
            }
            emit(&squares::solve_square(&c, count as usize)?, &o, out)?
        }
        Command::Diff {
            sequence: spec,
            count,
            runs,
            out: o,
        } => {
            let s = sequence(&spec, count as usize)?;
            let w = words::difference_word(&s)?;
            if runs {
                write_line(out, &w)?;
            } else {
                let d = GeneratedSequence::new(
                    s.n0(),
                    w.letters().map(Term::from).collect(),
                    crate::Provenance::new("differences", false).param("of", s.provenance()),
                )?;
                emit(&d, &o, out)?;
            }
        }
        Command::Verify { identity, horizon } => return verify(&identity, horizon, out, err),
        Command::Stats {
            stat: Stat::Density { segment },
        } => density(segment, out)?,
        Command::List => list(out)?,
    }
    Ok(true)
}

/// Runs the command line `argv` (program name first) and returns the exit
/// code: 0 on success, 1 when a computation or verification fails, 2 on a
/// usage error.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if is_usage(&e) {
                2
            } else {
                1
            }
        }
    }
}
