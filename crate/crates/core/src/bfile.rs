//! OEIS b-file reading and writing.
//!
//! Layout: optional `#` comment lines, then one `index value` pair per line
//! separated by a single space and terminated by `\n`, indices consecutive.

use std::fs;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::Path;

use crate::sequence::{GeneratedSequence, Provenance};
use crate::{Error, Result, Term};

pub fn write<W: Write>(seq: &GeneratedSequence, mut out: W) -> io::Result<()> {
    let mut buf = String::with_capacity(seq.len() * 12);
    for (n, v) in seq.indexed() {
        use std::fmt::Write as _;
        let _ = writeln!(buf, "{n} {v}");
    }
    out.write_all(buf.as_bytes())?;
    out.flush()
}

pub fn write_path(seq: &GeneratedSequence, path: impl AsRef<Path>) -> Result<()> {
    let file = fs::File::create(path)?;
    write(seq, io::BufWriter::new(file))?;
    Ok(())
}

/// Reads a b-file. With `monotone` set the values must strictly increase.
pub fn read<R: Read>(input: R, monotone: bool, name: &str) -> Result<GeneratedSequence> {
    let mut n0 = None;
    let mut terms = Vec::new();
    for (i, line) in BufReader::new(input).lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let bad = |message: &str| Error::BFile {
            line: lineno,
            message: message.to_string(),
        };
        let (idx, val) = line
            .trim_end_matches('\r')
            .split_once(' ')
            .ok_or_else(|| bad("expected `index value`"))?;
        let idx: Term = idx
            .parse()
            .map_err(|_| bad("index is not a nonnegative integer"))?;
        let val: Term = val
            .parse()
            .map_err(|_| bad("value is not a nonnegative integer"))?;
        let start = *n0.get_or_insert(idx);
        if idx != start + terms.len() as Term {
            return Err(bad("indices are not consecutive"));
        }
        terms.push(val);
    }
    GeneratedSequence::new(n0.unwrap_or(0), terms, Provenance::new(name, monotone))
}

pub fn read_path(path: impl AsRef<Path>, monotone: bool) -> Result<GeneratedSequence> {
    let path = path.as_ref();
    let file = fs::File::open(path)?;
    read(file, monotone, &format!("bfile:{}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn writes_the_standard_layout() {
        let s = GeneratedSequence::monotone(0, vec![0, 2, 4, 5], "i").unwrap();
        let mut out = Vec::new();
        write(&s, &mut out).unwrap();
        assert_eq!(out, b"0 0\n1 2\n2 4\n3 5\n");
    }

    #[test]
    fn skips_comments_and_rejects_gaps() {
        let s = read(&b"# A079000\n# comment\n1 1\n2 4\n3 6\n"[..], true, "a").unwrap();
        assert_eq!(s.n0(), 1);
        assert_eq!(s.terms(), &[1, 4, 6]);
        let err = read(&b"1 1\n3 4\n"[..], true, "x").unwrap_err();
        assert!(matches!(err, Error::BFile { line: 2, .. }));
        assert!(matches!(
            read(&b"1 -1\n"[..], false, "x"),
            Err(Error::BFile { .. })
        ));
        assert!(matches!(
            read(&b"1  2\n"[..], false, "x"),
            Err(Error::BFile { .. })
        ));
        assert!(matches!(
            read(&b"1 5\n2 4\n"[..], true, "x"),
            Err(Error::NonMonotoneInput { .. })
        ));
    }

    proptest! {
        #[test]
        fn round_trip(n0 in 0u64..1000, terms in prop::collection::vec(any::<u64>(), 0..64)) {
            let s = GeneratedSequence::new(n0, terms, Provenance::new("x", false)).unwrap();
            let mut out = Vec::new();
            write(&s, &mut out).unwrap();
            let back = read(&out[..], false, "x").unwrap();
            prop_assert_eq!(back.terms(), s.terms());
            if !s.is_empty() {
                prop_assert_eq!(back.n0(), s.n0());
            }
        }
    }
}
