//! Partition files: a header `EQP n=<n> matrix=<a>,<b>,<c>,<d>` followed by
//! the sorted hex words of the first cell, one per line.

use std::fmt::Write as _;

use crate::cube::{check_dim, Vertex, VertexSet};
use crate::error::{Error, Result};
use crate::spectral::{quotient_matrix, QuotientMatrix};

pub fn write_partition(c0: &VertexSet, m: &QuotientMatrix) -> String {
    let n = c0.dim();
    let mut out = format!("EQP n={n} matrix={},{},{},{}\n", m.a, m.b, m.c, m.d);
    for v in c0.iter() {
        let _ = writeln!(out, "{}", v.to_hex(n));
    }
    out
}

/// Parses a partition file and checks the declared matrix against the
/// cells.
pub fn read_partition(text: &str) -> Result<(VertexSet, QuotientMatrix)> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
    let bad = |msg: String| Error::Parse { line: 1, msg };
    let fields: Vec<&str> = header.split_whitespace().collect();
    let (n, m) = match fields.as_slice() {
        ["EQP", n, m] => (
            n.strip_prefix("n=").ok_or_else(|| bad("expected n=".into()))?,
            m.strip_prefix("matrix=").ok_or_else(|| bad("expected matrix=".into()))?,
        ),
        _ => return Err(bad("expected header `EQP n=<n> matrix=a,b,c,d`".into())),
    };
    let n: usize = n.parse().map_err(|_| bad(format!("bad dimension {n:?}")))?;
    check_dim(n)?;
    let entries: Vec<u32> = m
        .split(',')
        .map(|x| x.parse().map_err(|_| bad(format!("bad matrix entry {x:?}"))))
        .collect::<Result<_>>()?;
    let declared = match entries.as_slice() {
        &[a, b, c, d] => QuotientMatrix::new(a, b, c, d).map_err(|e| bad(e.to_string()))?,
        _ => return Err(bad("matrix needs four entries".into())),
    };
    if declared.n() as usize != n {
        return Err(bad(format!("matrix rows sum to {}, not {n}", declared.n())));
    }
    let mut c0 = VertexSet::empty(n)?;
    let mut prev: Option<u32> = None;
    for (i, line) in lines {
        let v = Vertex::from_hex(line.trim(), n).map_err(|e| Error::Parse { line: i + 1, msg: e.to_string() })?;
        if prev.is_some_and(|p| p >= v.0) {
            return Err(Error::Parse { line: i + 1, msg: "words must be strictly increasing".into() });
        }
        prev = Some(v.0);
        c0.insert(v);
    }
    let actual = quotient_matrix(&c0)?;
    if actual != declared {
        return Err(Error::Verification(format!("declared {declared}, cells give {actual}")));
    }
    Ok((c0, declared))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let c0 = VertexSet::from_words(3, [0, 7]).unwrap();
        let m = quotient_matrix(&c0).unwrap();
        let text = write_partition(&c0, &m);
        assert_eq!(text, "EQP n=3 matrix=0,3,1,2\n0\n7\n");
        assert_eq!(read_partition(&text).unwrap(), (c0, m));
    }

    #[test]
    fn rejects_bad_files() {
        assert!(read_partition("EQP n=3 matrix=0,3,1,2\n7\n0\n").is_err());
        assert!(read_partition("EQP n=3 matrix=1,2,2,1\n0\n7\n").is_err());
        assert!(read_partition("EQP n=3 matrix=0,3,1\n0\n7\n").is_err());
        assert!(read_partition("EQP n=4 matrix=0,3,1,2\n0\n7\n").is_err());
        match read_partition("EQP n=3 matrix=0,3,1,2\n0\nz\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }
}
