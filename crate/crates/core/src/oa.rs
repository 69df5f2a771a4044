//! Binary orthogonal arrays, resilient maps, and the structures obtained
//! from a partition with quotient matrix `[[0,n],[c,n-c]]` by splitting off
//! the last coordinate.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::canonical::full_canonical;
use crate::cube::{check_dim, coord_bit, Vertex, VertexSet};
use crate::error::{Error, Result};
use crate::exact_cover::subsets_of_size;
use crate::spectral::{correlation_immunity_order, quotient_matrix, QuotientMatrix};

/// A simple binary orthogonal array: a set of rows with declared strength.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrthogonalArray {
    pub rows: VertexSet,
    pub strength: u32,
}

/// A projection on which the rows are unbalanced.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct BalanceWitness {
    /// Coordinates of the projection, as a mask.
    pub coordinates: u32,
    /// Values on those coordinates.
    pub pattern: u32,
    pub count: usize,
    pub expected: usize,
}

/// First unbalanced `t`-projection, if any.
pub fn balance_witness(rows: &VertexSet, t: u32) -> Option<BalanceWitness> {
    let n = rows.dim();
    if t as usize > n {
        return Some(BalanceWitness { coordinates: 0, pattern: 0, count: rows.len(), expected: 0 });
    }
    let words = rows.words();
    if !words.len().is_multiple_of(1 << t) {
        return Some(BalanceWitness { coordinates: 0, pattern: 0, count: words.len(), expected: 0 });
    }
    let expected = words.len() >> t;
    let full = ((1u64 << n) - 1) as u32;
    for mask in subsets_of_size(full, t) {
        let mut counts = std::collections::HashMap::new();
        for &w in &words {
            *counts.entry(w & mask).or_insert(0usize) += 1;
        }
        for pattern in crate::cube::submasks(mask) {
            let c = counts.get(&pattern).copied().unwrap_or(0);
            if c != expected {
                return Some(BalanceWitness { coordinates: mask, pattern, count: c, expected });
            }
        }
    }
    None
}

pub fn verify_oa(rows: &VertexSet, t: u32) -> bool {
    balance_witness(rows, t).is_none()
}

impl OrthogonalArray {
    pub fn new(rows: VertexSet, strength: u32) -> Result<OrthogonalArray> {
        if let Some(w) = balance_witness(&rows, strength) {
            return Err(Error::Verification(format!(
                "pattern {:#x} on coordinates {:#x} occurs {} times, expected {}",
                w.pattern, w.coordinates, w.count, w.expected
            )));
        }
        Ok(OrthogonalArray { rows, strength })
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn length(&self) -> usize {
        self.rows.dim()
    }

    /// Header `OA N n 2 t`, then one row per line as a 0/1 string.
    pub fn to_text(&self) -> String {
        let n = self.length();
        let mut out = format!("OA {} {} 2 {}\n", self.size(), n, self.strength);
        for v in self.rows.iter() {
            let _ = writeln!(out, "{}", v.to_binary(n));
        }
        out
    }

    pub fn parse(text: &str) -> Result<OrthogonalArray> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let bad = |msg: &str| Error::Parse { line: 1, msg: msg.to_string() };
        if fields.len() != 5 || fields[0] != "OA" || fields[3] != "2" {
            return Err(bad("expected header `OA N n 2 t`"));
        }
        let size: usize = fields[1].parse().map_err(|_| bad("bad N"))?;
        let n: usize = fields[2].parse().map_err(|_| bad("bad n"))?;
        let t: u32 = fields[4].parse().map_err(|_| bad("bad t"))?;
        check_dim(n)?;
        let mut rows = VertexSet::empty(n)?;
        for (i, line) in lines {
            let s = line.trim();
            if s.len() != n || !s.chars().all(|c| c == '0' || c == '1') {
                return Err(Error::Parse { line: i + 1, msg: format!("row {s:?} is not a binary word of length {n}") });
            }
            let v = Vertex(u32::from_str_radix(s, 2).expect("binary digits"));
            if rows.contains(v) {
                return Err(Error::Parse { line: i + 1, msg: "repeated row; only simple arrays are supported".into() });
            }
            rows.insert(v);
        }
        if rows.len() != size {
            return Err(bad(&format!("header says {size} rows, found {}", rows.len())));
        }
        OrthogonalArray::new(rows, t)
    }
}

/// Deletes coordinate `coord` (0-based) from a word of length `n`.
fn delete_coordinate(n: usize, coord: usize, w: u32) -> u32 {
    let b = n - 1 - coord;
    let high = w >> (b + 1);
    let low = w & ((1 << b) - 1);
    high << b | low
}

/// Rows with `value` at `coord`, with that coordinate removed.
pub fn shorten(a: &OrthogonalArray, coord: usize, value: bool) -> Result<OrthogonalArray> {
    let n = a.length();
    if a.strength == 0 || coord >= n || n < 2 {
        return Err(Error::InvalidParameters(format!("cannot shorten at {coord} with strength {}", a.strength)));
    }
    let bit = coord_bit(n, coord);
    let rows = VertexSet::from_words(
        n - 1,
        a.rows
            .iter()
            .filter(|v| (v.0 & bit != 0) == value)
            .map(|v| delete_coordinate(n, coord, v.0)),
    )?;
    OrthogonalArray::new(rows, a.strength - 1)
}

/// `F` is `t`-resilient: every level set has `2^(n-m)` points and is
/// correlation immune of order at least `t`. `values[x]` is `F(x)`.
pub fn is_resilient(n: usize, m: usize, values: &[u32], t: u32) -> Result<bool> {
    check_dim(n)?;
    if values.len() != 1 << n || m > n {
        return Err(Error::DimensionMismatch { expected: 1 << n, found: values.len() });
    }
    if values.iter().any(|&y| (y as u64) >> m != 0) {
        return Err(Error::InvalidParameters(format!("a value exceeds {m} bits")));
    }
    for a in 0..1u32 << m {
        let level = VertexSet::from_fn(n, |x| values[x as usize] == a)?;
        if level.len() != 1 << (n - m) {
            return Ok(false);
        }
        if m > 0 && correlation_immunity_order(&level)? < t {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Quotient matrix of a partition into any number of cells.
pub fn partition_quotient(cells: &[VertexSet]) -> Result<Vec<Vec<u32>>> {
    let n = cells.first().ok_or(Error::EmptySet)?.dim();
    let mut owner = vec![usize::MAX; 1 << n];
    for (k, c) in cells.iter().enumerate() {
        if c.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: c.dim() });
        }
        if c.is_empty() {
            return Err(Error::EmptySet);
        }
        for v in c.iter() {
            if owner[v.0 as usize] != usize::MAX {
                return Err(Error::InvalidParameters(format!("word {:#x} lies in two cells", v.0)));
            }
            owner[v.0 as usize] = k;
        }
    }
    if let Some(x) = owner.iter().position(|&o| o == usize::MAX) {
        return Err(Error::InvalidParameters(format!("word {x:#x} lies in no cell")));
    }
    let k = cells.len();
    let mut rows: Vec<Option<Vec<u32>>> = vec![None; k];
    for x in 0..1u32 << n {
        let mut row = vec![0u32; k];
        for i in 0..n {
            row[owner[(x ^ coord_bit(n, i)) as usize]] += 1;
        }
        let cell = owner[x as usize];
        match &rows[cell] {
            None => rows[cell] = Some(row),
            Some(r) if *r != row => return Err(Error::NotEquitable { vertex: x, cell }),
            _ => {}
        }
    }
    Ok(rows.into_iter().map(|r| r.expect("nonempty cell")).collect())
}

/// A partition of `Q_n` into three cells.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ThreePartition {
    pub cells: [VertexSet; 3],
}

impl ThreePartition {
    pub fn quotient(&self) -> Result<[[u32; 3]; 3]> {
        let q = partition_quotient(&self.cells)?;
        Ok([
            [q[0][0], q[0][1], q[0][2]],
            [q[1][0], q[1][1], q[1][2]],
            [q[2][0], q[2][1], q[2][2]],
        ])
    }
}

/// Intersection array `(b_0, ..., b_{r-1}; c_1, ..., c_r)` of a completely
/// regular code, or `None` when the distance partition is not equitable.
pub fn intersection_array(code: &VertexSet) -> Result<Option<(Vec<u32>, Vec<u32>)>> {
    let n = code.dim();
    if code.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut dist = vec![u32::MAX; 1 << n];
    let mut frontier: Vec<u32> = code.words();
    for &w in &frontier {
        dist[w as usize] = 0;
    }
    let mut d = 0;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &x in &frontier {
            for i in 0..n {
                let y = x ^ coord_bit(n, i);
                if dist[y as usize] == u32::MAX {
                    dist[y as usize] = d + 1;
                    next.push(y);
                }
            }
        }
        frontier = next;
        d += 1;
    }
    let radius = *dist.iter().max().expect("nonempty cube");
    let cells: Vec<VertexSet> = (0..=radius)
        .map(|r| VertexSet::from_fn(n, |x| dist[x as usize] == r))
        .collect::<Result<_>>()?;
    let q = match partition_quotient(&cells) {
        Ok(q) => q,
        Err(Error::NotEquitable { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let r = radius as usize;
    let b = (0..r).map(|i| q[i][i + 1]).collect();
    let c = (1..=r).map(|i| q[i][i - 1]).collect();
    Ok(Some((b, c)))
}

/// Everything obtained from one partition with matrix `[[0,n],[c,n-c]]`.
#[derive(Clone, Debug)]
pub struct DerivedStructures {
    pub n: usize,
    pub c: u32,
    /// The first cell as an array of strength `(n+c)/2 - 1`.
    pub array: OrthogonalArray,
    pub self_complementary: bool,
    /// Coordinate used for shortening and splitting.
    pub coord: usize,
    /// The first cell shortened at `coord` with value 0.
    pub shortened: OrthogonalArray,
    /// `(A, A + 1, rest)` in `Q_{n-1}`.
    pub split: ThreePartition,
    pub split_matrix: [[u32; 3]; 3],
    /// `(A_even ∪ B_odd, rest, A_odd ∪ B_even)` in `Q_{n-1}`.
    pub distance: ThreePartition,
    pub distance_matrix: [[u32; 3]; 3],
    /// The first cell of `distance` as a completely regular code.
    pub code: VertexSet,
    pub intersection_array: (Vec<u32>, Vec<u32>),
}

pub fn expected_split_matrix(n: u32, c: u32) -> [[u32; 3]; 3] {
    [[0, c - 1, n - c], [c - 1, 0, n - c], [c, c, n - 2 * c - 1]]
}

pub fn expected_distance_matrix(n: u32, c: u32) -> [[u32; 3]; 3] {
    [[c - 1, n - c, 0], [c, n - 2 * c - 1, c], [0, n - c, c - 1]]
}

/// Inverse of `delete_coordinate` with the given bit value.
fn insert_coordinate(n: usize, coord: usize, w: u32, value: bool) -> u32 {
    let b = n - 1 - coord;
    let low = w & ((1 << b) - 1);
    (w >> b) << (b + 1) | (value as u32) << b | low
}

/// Halves of the first cell on coordinate `coord`.
fn halves(c0: &VertexSet, coord: usize) -> Result<(VertexSet, VertexSet)> {
    let n = c0.dim();
    let a = VertexSet::from_fn(n - 1, |x| c0.contains_word(insert_coordinate(n, coord, x, false)))?;
    let b = VertexSet::from_fn(n - 1, |x| c0.contains_word(insert_coordinate(n, coord, x, true)))?;
    Ok((a, b))
}

/// Structures from splitting on the last coordinate.
pub fn derive_structures(c0: &VertexSet) -> Result<DerivedStructures> {
    derive_structures_at(c0, c0.dim().saturating_sub(1))
}

/// Structures from splitting on coordinate `coord`. Up to equivalence
/// every derived object arises from some choice of `c0` and `coord`.
pub fn derive_structures_at(c0: &VertexSet, coord: usize) -> Result<DerivedStructures> {
    let m = quotient_matrix(c0)?;
    let n = c0.dim();
    if coord >= n {
        return Err(Error::InvalidParameters(format!("coordinate {coord} out of range")));
    }
    if m.a != 0 || m.c >= m.b || n < 3 || 2 * m.c + 1 > n as u32 {
        return Err(Error::Precondition(format!("{m} is not of the form [[0,n],[c,n-c]] with 2c < n")));
    }
    let c = m.c;
    if !(n as u32 + c).is_multiple_of(2) {
        return Err(Error::Precondition(format!("n + c = {} is odd", n as u32 + c)));
    }
    let t = (n as u32 + c) / 2 - 1;
    let array = OrthogonalArray::new(c0.clone(), t)?;
    let self_complementary = c0.translate(Vertex::ones(n)) == *c0;
    let shortened = shorten(&array, coord, false)?;
    let (a, b) = halves(c0, coord)?;
    let rest = a.union(&b).complement();
    let split = ThreePartition { cells: [a.clone(), b.clone(), rest.clone()] };
    let split_matrix = split.quotient()?;
    let even = |s: &VertexSet, parity: u32| VertexSet::from_vertices(n - 1, s.iter().filter(|v| v.weight() % 2 == parity));
    let d0 = even(&a, 0)?.union(&even(&b, 1)?);
    let d2 = even(&a, 1)?.union(&even(&b, 0)?);
    let distance = ThreePartition { cells: [d0.clone(), rest, d2] };
    let distance_matrix = distance.quotient()?;
    let intersection_array = intersection_array(&d0)?
        .ok_or_else(|| Error::Verification("distance partition of the code is not equitable".into()))?;
    if split_matrix != expected_split_matrix(n as u32, c) || distance_matrix != expected_distance_matrix(n as u32, c) {
        return Err(Error::Verification(format!("derived matrices {split_matrix:?} and {distance_matrix:?}")));
    }
    Ok(DerivedStructures {
        n,
        c,
        coord,
        array,
        self_complementary,
        shortened,
        split,
        split_matrix,
        distance,
        distance_matrix,
        code: d0,
        intersection_array,
    })
}

/// Union of the first two cells of a split partition; the result has
/// matrix `[[c-1, n-c], [2c, n-2c-1]]`.
pub fn merge_first_two_cells(t: &ThreePartition) -> Result<(VertexSet, QuotientMatrix)> {
    let q = t.quotient()?;
    if q[0][0] != 0 || q[1][1] != 0 || q[0][1] != q[1][0] || q[0][2] != q[1][2] || q[2][0] != q[2][1] {
        return Err(Error::Precondition(format!("{q:?} does not have the split shape")));
    }
    let merged = t.cells[0].union(&t.cells[1]);
    let m = quotient_matrix(&merged)?;
    let expected = QuotientMatrix { a: q[0][1], b: q[0][2], c: 2 * q[2][0], d: q[2][2] };
    if m != expected {
        return Err(Error::Verification(format!("merged cells have matrix {m}, expected {expected}")));
    }
    Ok((merged, m))
}

/// `{x : (x,0) ∈ C0 or (x,1) ∈ C0}` for a partition with `a = 0`.
pub fn project_last_coordinate(c0: &VertexSet) -> Result<(VertexSet, QuotientMatrix)> {
    let m = quotient_matrix(c0)?;
    if m.a != 0 || c0.dim() < 2 {
        return Err(Error::Precondition(format!("{m} has a nonzero diagonal entry")));
    }
    let (a, b) = halves(c0, c0.dim() - 1)?;
    let p = a.union(&b);
    let got = quotient_matrix(&p)?;
    let n = m.n();
    let expected = QuotientMatrix { a: m.c - 1, b: n - m.c, c: 2 * m.c, d: n - 2 * m.c - 1 };
    if got != expected {
        return Err(Error::Verification(format!("projection has matrix {got}, expected {expected}")));
    }
    Ok((p, got))
}

/// Projection of a `[[0,13],[3,10]]` partition of `Q_13` to `Q_12`.
pub fn project_13_to_12(c0: &VertexSet) -> Result<VertexSet> {
    let m = quotient_matrix(c0)?;
    if c0.dim() != 13 || m != (QuotientMatrix { a: 0, b: 13, c: 3, d: 10 }) {
        return Err(Error::Precondition(format!("expected [[0,13],[3,10]] on Q_13, got {m} on Q_{}", c0.dim())));
    }
    Ok(project_last_coordinate(c0)?.0)
}

/// Numbers of inequivalent objects derived from a list of inequivalent
/// `[[0,n],[c,n-c]]` partitions.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct DerivedClassCounts {
    pub arrays: usize,
    pub shortened: usize,
    pub split_partitions: usize,
    pub distance_partitions: usize,
    pub codes: usize,
    pub intersection_arrays: Vec<(Vec<u32>, Vec<u32>)>,
}

pub fn derived_class_counts(partitions: &[VertexSet]) -> Result<DerivedClassCounts> {
    let per: Vec<_> = partitions
        .par_iter()
        .map(|c0| -> Result<_> {
            let n = c0.dim();
            let cells = |t: &ThreePartition| -> Vec<Vec<u32>> { t.cells.iter().map(|c| c.words()).collect() };
            let mut out = (full_canonical(n, &[c0.words()])?.form, Vec::new(), Vec::new(), Vec::new(), Vec::new(), Vec::new());
            for coord in 0..n {
                let d = derive_structures_at(c0, coord)?;
                for value in [false, true] {
                    let s = shorten(&d.array, coord, value)?;
                    out.1.push(full_canonical(n - 1, &[s.rows.words()])?.form);
                }
                out.2.push(full_canonical(n - 1, &cells(&d.split))?.form);
                let mut flipped = d.distance.clone();
                flipped.cells.swap(0, 2);
                let f = full_canonical(n - 1, &cells(&d.distance))?.form;
                let g = full_canonical(n - 1, &cells(&flipped))?.form;
                out.3.push(f.min(g));
                out.4.push(full_canonical(n - 1, &[d.code.words()])?.form);
                out.5.push(d.intersection_array);
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut arrays = BTreeSet::new();
    let (mut sh, mut sp, mut di, mut co, mut ia) = (BTreeSet::new(), BTreeSet::new(), BTreeSet::new(), BTreeSet::new(), BTreeSet::new());
    for (a, s, p, d, c, i) in per {
        arrays.insert(a);
        sh.extend(s);
        sp.extend(p);
        di.extend(d);
        co.extend(c);
        ia.extend(i);
    }
    Ok(DerivedClassCounts {
        arrays: arrays.len(),
        shortened: sh.len(),
        split_partitions: sp.len(),
        distance_partitions: di.len(),
        codes: co.len(),
        intersection_arrays: ia.into_iter().collect(),
    })
}
