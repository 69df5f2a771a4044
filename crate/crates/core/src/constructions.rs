//! Explicit constructions: the three-color lift from `Q_6` to `Q_12`, small
//! seed partitions, and doubling with mixed `Z_4` addition.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::canonical::{canonical_form, CanonicalForm};
use crate::cube::{check_dim, coord_bit, Vertex, VertexSet};
use crate::error::{Error, Result};
use crate::spectral::{quotient_matrix, wht, IntegerFunction, IntegerSpectrum, QuotientMatrix};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Q6Color {
    Black,
    White,
    Gray,
}

const BLACK: [&str; 4] = ["000000", "111111", "000111", "111000"];

const WHITE: [&str; 12] = [
    "100000", "011111", "000011", "111100", "010000", "101111", "000101", "111010", "001000", "110111",
    "000110", "111001",
];

/// The twelve gray 2-faces, row by row.
const GRAY: [&str; 12] = [
    "0**100", "1**011", "1001**", "0110**", "*0*010", "*1*101", "010*1*", "101*0*", "**0001", "**1110",
    "001**1", "110**0",
];

fn bin6(s: &str) -> u32 {
    u32::from_str_radix(s, 2).expect("table entry")
}

/// A gray face as (mask of starred coordinates, base word).
pub fn gray_faces() -> [(u32, u32); 12] {
    GRAY.map(|p| {
        let mask = p.chars().fold(0, |acc, ch| acc << 1 | (ch == '*') as u32);
        let base = p.chars().fold(0, |acc, ch| acc << 1 | (ch == '1') as u32);
        (mask, base)
    })
}

/// The coloring of `Q_6`, and for gray vertices the index of their face.
pub fn q6_coloring() -> [(Q6Color, Option<usize>); 64] {
    let mut out = [(Q6Color::Gray, None); 64];
    for w in BLACK {
        out[bin6(w) as usize] = (Q6Color::Black, None);
    }
    for w in WHITE {
        out[bin6(w) as usize] = (Q6Color::White, None);
    }
    for (k, (mask, base)) in gray_faces().into_iter().enumerate() {
        for x in crate::cube::submasks(mask) {
            out[(x | base) as usize].1 = Some(k);
        }
    }
    out
}

/// The black cell of the `Q_12` partition for the given face choices.
/// Bit `11 - k` of `choices` belongs to gray face `k`, so the three hex digits
/// read in table order.
pub fn fdf_q12(choices: u16) -> Result<VertexSet> {
    if choices >> 12 != 0 {
        return Err(Error::InvalidParameters(format!("choices {choices:#x} exceed 12 bits")));
    }
    let colors = q6_coloring();
    let faces = gray_faces();
    let black = VertexSet::from_fn(12, |x| {
        let (u, v) = (x >> 6, x & 63);
        match colors[(u ^ v) as usize] {
            (Q6Color::Black, _) => true,
            (Q6Color::White, _) => false,
            (Q6Color::Gray, k) => {
                let k = k.expect("gray vertices lie on a face");
                let parity = (u.count_ones() + (v & faces[k].0).count_ones()) & 1;
                parity == (choices >> (11 - k) & 1) as u32
            }
        }
    })?;
    let m = quotient_matrix(&black)?;
    let expected = QuotientMatrix { a: 3, b: 9, c: 7, d: 5 };
    if m != expected {
        return Err(Error::Verification(format!("lifted coloring has matrix {m}")));
    }
    Ok(black)
}

/// The printed nonzero Fourier coefficients of one lifted partition: hex
/// word and sign, in eight groups (6, 9, then six groups of 8).
const SIGN_TABLE: [&[&str]; 8] = [
    &["3cf-", "5d7-", "9e7-", "e79+", "eba+", "f3c+"],
    &["6db+", "75d+", "79e+", "aeb+", "b6d+", "bae+", "cf3+", "d75+", "db6+"],
    &["1bf+", "3f6+", "5ee-", "7a7-", "9de-", "b97-", "d8f+", "fc6+"],
    &["17f+", "3f5-", "5ed+", "767-", "9dd-", "b57+", "d4f-", "fc5+"],
    &["0ff+", "3f3-", "5eb-", "6e7+", "9db+", "ad7-", "ccf-", "fc3+"],
    &["c3f+", "e76-", "eb5+", "cfc-", "f33+", "d7a-", "db9+", "ff0-"],
    &["a3f+", "e6e+", "ead-", "afc-", "f2b+", "b7a+", "bb9-", "fe8-"],
    &["63f+", "e5e+", "e9d+", "6fc+", "f1b-", "77a-", "7b9-", "fd8-"],
];

/// Digest of the embedded sign table; a transcription edit changes it.
pub const SIGN_TABLE_CHECKSUM: u64 = 0x75de_8590_d17a_cf96;

/// `(word, sign)` groups of the sign table.
pub fn fdf_spectrum_table() -> Vec<Vec<(u32, i8)>> {
    SIGN_TABLE
        .iter()
        .map(|g| {
            g.iter()
                .map(|e| {
                    let w = u32::from_str_radix(&e[..3], 16).expect("table entry");
                    (w, if e.ends_with('+') { 1 } else { -1 })
                })
                .collect()
        })
        .collect()
}

pub fn sign_table_checksum() -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for g in SIGN_TABLE {
        for e in g.iter() {
            for b in e.bytes() {
                h = (h ^ b as u64).wrapping_mul(0x0100_0000_01b3);
            }
        }
        h = (h ^ 0xff).wrapping_mul(0x0100_0000_01b3);
    }
    h
}

/// The coordinate permutation `(4 10)(5 11)(6 12)` on 12-bit words.
pub fn swap_halves_tail(w: u32) -> u32 {
    let a = w >> 6 & 7;
    let b = w & 7;
    (w & !(7 << 6) & !7) | b << 6 | a
}

/// The table with group `g` (of the last six) sign-inverted when bit `g` of
/// `flips` is set and permuted by `(4 10)(5 11)(6 12)` when bit `g` of
/// `swaps` is set.
pub fn table_variant(flips: u8, swaps: u8) -> BTreeMap<u32, i8> {
    let mut out = BTreeMap::new();
    for (gi, group) in fdf_spectrum_table().into_iter().enumerate() {
        for (w, s) in group {
            let (w, s) = match gi.checked_sub(2) {
                Some(g) => (
                    if swaps >> g & 1 == 1 { swap_halves_tail(w) } else { w },
                    if flips >> g & 1 == 1 { -s } else { s },
                ),
                None => (w, s),
            };
            out.insert(w, s);
        }
    }
    out
}

/// Finds the table symmetry `(flips, swaps)` reproducing the signs of `ft`
/// (coefficients `±2^12` on 63 words), if any.
pub fn match_sign_table(ft: &IntegerSpectrum) -> Option<(u8, u8)> {
    let support = ft.support();
    if support.len() != 63 || support.iter().any(|(_, c)| c.abs() != 4096) {
        return None;
    }
    let sign = |w: u32| -> i8 { (ft.coeffs()[w as usize].signum()) as i8 };
    let table = fdf_spectrum_table();
    for group in &table[..2] {
        if group.iter().any(|&(w, s)| sign(w) != s) {
            return None;
        }
    }
    let (mut flips, mut swaps) = (0u8, 0u8);
    for (g, group) in table[2..].iter().enumerate() {
        let mut found = false;
        for swap in [false, true] {
            for flip in [false, true] {
                let ok = group.iter().all(|&(w, s)| {
                    let w = if swap { swap_halves_tail(w) } else { w };
                    sign(w) == if flip { -s } else { s }
                });
                if ok && !found {
                    found = true;
                    swaps |= (swap as u8) << g;
                    flips |= (flip as u8) << g;
                }
            }
        }
        if !found {
            return None;
        }
    }
    Some((flips, swaps))
}

/// The face choices whose spectrum is the printed table with no symmetry
/// applied (found by scanning all 4096 choices).
pub const DESIGNATED_CHOICE: u16 = 0xccc;

/// Spectrum of the associated function (`9` on the black cell, `-7` off it).
pub fn fdf_spectrum(black: &VertexSet) -> IntegerSpectrum {
    let m = QuotientMatrix { a: 3, b: 9, c: 7, d: 5 };
    wht(&IntegerFunction::associated(black, &m))
}

/// Outcome of an exhaustive search for partitions with a given matrix.
#[derive(Clone, Debug)]
pub struct SeedSearch {
    pub matrix: QuotientMatrix,
    /// Labeled first cells containing `0`.
    pub solutions_with_zero: u64,
    /// One representative per equivalence class, ordered by canonical form.
    pub classes: Vec<(CanonicalForm, VertexSet)>,
}

/// Every first cell `C0 ∋ 0` of an equitable partition of `Q_n` with matrix
/// `m`, up to equivalence.
pub fn find_seed_partitions(n: usize, m: &QuotientMatrix) -> Result<SeedSearch> {
    check_dim(n)?;
    if n > 8 || m.n() as usize != n {
        return Err(Error::InvalidParameters(format!("seed search needs n ≤ 8 and {m} on Q_{n}")));
    }
    let size = m
        .first_cell_size()
        .ok_or_else(|| Error::InvalidParameters(format!("{m} has no integral cell sizes")))? as usize;
    let mut st = SeedState {
        n,
        need: [[m.a, m.b], [m.c, m.d]],
        color: vec![None; 1 << n],
        cnt: vec![[0u32; 2]; 1 << n],
        sizes: [0, 0],
        target: [size, (1 << n) - size],
        found: Vec::new(),
    };
    st.assign(0, 0);
    if st.consistent(0) {
        st.search(1);
    }
    let mut classes: BTreeMap<CanonicalForm, VertexSet> = BTreeMap::new();
    let total = st.found.len() as u64;
    for s in st.found {
        classes.entry(canonical_form(&s)).or_insert(s);
    }
    Ok(SeedSearch { matrix: *m, solutions_with_zero: total, classes: classes.into_iter().collect() })
}

/// The unique-up-to-equivalence seed, or `None` when there is no partition
/// or more than one class.
pub fn find_seed_partition(n: usize, m: &QuotientMatrix) -> Result<Option<VertexSet>> {
    let s = find_seed_partitions(n, m)?;
    Ok(match s.classes.len() {
        1 => s.classes.into_iter().next().map(|(_, v)| v),
        _ => None,
    })
}

struct SeedState {
    n: usize,
    need: [[u32; 2]; 2],
    color: Vec<Option<u8>>,
    /// Assigned neighbours per cell.
    cnt: Vec<[u32; 2]>,
    sizes: [usize; 2],
    target: [usize; 2],
    found: Vec<VertexSet>,
}

impl SeedState {
    fn assign(&mut self, x: usize, c: u8) {
        self.color[x] = Some(c);
        self.sizes[c as usize] += 1;
        for i in 0..self.n {
            self.cnt[x ^ 1 << i][c as usize] += 1;
        }
    }

    fn unassign(&mut self, x: usize) {
        let c = self.color[x].take().unwrap();
        self.sizes[c as usize] -= 1;
        for i in 0..self.n {
            self.cnt[x ^ 1 << i][c as usize] -= 1;
        }
    }

    fn vertex_ok(&self, y: usize) -> bool {
        let Some(c) = self.color[y] else { return true };
        let [k0, k1] = self.cnt[y];
        let need = self.need[c as usize];
        k0 <= need[0] && k1 <= need[1]
    }

    fn consistent(&self, x: usize) -> bool {
        self.sizes[0] <= self.target[0]
            && self.sizes[1] <= self.target[1]
            && self.vertex_ok(x)
            && (0..self.n).all(|i| self.vertex_ok(x ^ 1 << i))
    }

    fn search(&mut self, x: usize) {
        if x == self.color.len() {
            let s = VertexSet::from_fn(self.n, |w| self.color[w as usize] == Some(0)).unwrap();
            self.found.push(s);
            return;
        }
        for c in 0..2u8 {
            self.assign(x, c);
            if self.consistent(x) {
                self.search(x + 1);
            }
            self.unassign(x);
        }
    }
}

/// Per coordinate pair `(2k+1, 2k+2)`: true for `Z_4` addition through the
/// Gray map, false for addition over GF(2).
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct DoublingMode(pub Vec<bool>);

impl DoublingMode {
    pub fn standard(m: usize) -> DoublingMode {
        DoublingMode(vec![false; m / 2])
    }

    /// `Z_4` addition on the first `i` pairs.
    pub fn first_pairs(m: usize, i: usize) -> DoublingMode {
        DoublingMode((0..m / 2).map(|k| k < i).collect())
    }

    /// Pattern string of `s` (standard) and `z` (Gray-mapped) per pair.
    pub fn parse(s: &str) -> Result<DoublingMode> {
        s.chars()
            .map(|c| match c {
                's' | '0' => Ok(false),
                'z' | '1' => Ok(true),
                _ => Err(Error::InvalidParameters(format!("mode character {c:?}"))),
            })
            .collect::<Result<Vec<bool>>>()
            .map(DoublingMode)
    }
}

/// Gray map `Z_4 → GF(2)^2`: 0→00, 1→01, 2→11, 3→10.
pub const GRAY_MAP: [u32; 4] = [0b00, 0b01, 0b11, 0b10];
const GRAY_INV: [u32; 4] = [0, 1, 3, 2];

/// `x ⊕ y` on `Q_m` under the given mode.
pub fn mixed_add(m: usize, mode: &DoublingMode, x: u32, y: u32) -> u32 {
    let mut out = x ^ y;
    for (k, &z4) in mode.0.iter().enumerate() {
        if !z4 {
            continue;
        }
        // coordinates 2k+1, 2k+2 occupy two adjacent bits
        let shift = m - 2 * k - 2;
        let a = GRAY_INV[(x >> shift & 3) as usize];
        let b = GRAY_INV[(y >> shift & 3) as usize];
        let s = GRAY_MAP[((a + b) % 4) as usize];
        out = (out & !(3 << shift)) | s << shift;
    }
    out
}

/// `D_0 = {(x, y) : x ⊕ y ∈ C0}` on `Q_{2m}`, with `x` in the high half.
pub fn double(c0: &VertexSet, mode: &DoublingMode) -> Result<VertexSet> {
    let m = c0.dim();
    check_dim(2 * m)?;
    if mode.0.len() > m / 2 {
        return Err(Error::InvalidParameters(format!("mode has {} pairs, Q_{m} has {}", mode.0.len(), m / 2)));
    }
    let mat = quotient_matrix(c0)?;
    let d = VertexSet::from_fn(2 * m, |w| c0.contains_word(mixed_add(m, mode, w >> m, w & ((1 << m) - 1))))?;
    let got = quotient_matrix(&d)?;
    if got != mat.scaled(2) {
        return Err(Error::Verification(format!("doubled partition has matrix {got}, expected {}", mat.scaled(2))));
    }
    Ok(d)
}

/// Cycle lengths of the 2-regular subgraph induced by `c0`, as
/// `(length, count)` ascending.
pub fn cycle_structure(c0: &VertexSet) -> Result<Vec<(usize, usize)>> {
    let n = c0.dim();
    let mut seen = VertexSet::empty(n)?;
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for v in c0.iter() {
        if c0.neighbours_in(v) != 2 {
            return Err(Error::Precondition(format!("vertex {} has {} neighbours in the set", v.to_hex(n), c0.neighbours_in(v))));
        }
    }
    for start in c0.iter() {
        if seen.contains(start) {
            continue;
        }
        let mut len = 0;
        let (mut prev, mut cur) = (None, start);
        loop {
            seen.insert(cur);
            len += 1;
            let next = (0..n)
                .map(|i| Vertex(cur.0 ^ coord_bit(n, i)))
                .find(|&y| c0.contains(y) && Some(y) != prev)
                .expect("2-regular");
            prev = Some(cur);
            cur = next;
            if cur == start {
                break;
            }
        }
        *counts.entry(len).or_default() += 1;
    }
    Ok(counts.into_iter().collect())
}
