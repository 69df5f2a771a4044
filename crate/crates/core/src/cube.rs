//! Vertices, faces, vertex sets and automorphisms of the binary n-cube.
//!
//! A vertex of `Q_n` is an `n`-bit word. Coordinate 1 is the most significant
//! of the `n` bits, so the hex word `0a1` at `n = 12` is `0000 1010 0001`.
//! Internally coordinates are indexed from zero: index `i` is coordinate
//! `i + 1` and lives at bit `n - 1 - i`.

use std::fmt;
use std::ops::{Add, BitAnd, BitOr};

use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;

/// Largest supported cube dimension.
pub const MAX_DIM: usize = 16;

pub(crate) fn check_dim(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DIM {
        Err(Error::Dimension(n))
    } else {
        Ok(())
    }
}

/// Bit of coordinate index `i` (zero-based, index 0 is coordinate 1).
#[inline]
pub fn coord_bit(n: usize, i: usize) -> u32 {
    1 << (n - 1 - i)
}

/// A vertex of `Q_n`, stored as its word.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Vertex(pub u32);

impl Vertex {
    pub const ZERO: Vertex = Vertex(0);

    pub fn ones(n: usize) -> Vertex {
        Vertex(((1u64 << n) - 1) as u32)
    }

    /// The unit word `e_i` for zero-based coordinate index `i`.
    pub fn unit(n: usize, i: usize) -> Vertex {
        Vertex(coord_bit(n, i))
    }

    pub fn word(self) -> u32 {
        self.0
    }

    pub fn weight(self) -> u32 {
        self.0.count_ones()
    }

    /// `self ≼ other`: every one of `self` is a one of `other`.
    pub fn dominated_by(self, other: Vertex) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn distance(self, other: Vertex) -> u32 {
        (self.0 ^ other.0).count_ones()
    }

    /// Inner product over GF(2).
    pub fn dot(self, other: Vertex) -> bool {
        (self.0 & other.0).count_ones() & 1 == 1
    }

    pub fn coordinate(self, n: usize, i: usize) -> bool {
        self.0 & coord_bit(n, i) != 0
    }

    /// Lowercase hex, `ceil(n/4)` digits, left padded.
    pub fn to_hex(self, n: usize) -> String {
        let digits = n.div_ceil(4);
        format!("{:0width$x}", self.0, width = digits)
    }

    pub fn from_hex(s: &str, n: usize) -> Result<Vertex> {
        let bad = || Error::Hex { word: s.to_string(), n };
        let t = s.trim();
        if t.is_empty() || t.len() > n.div_ceil(4) {
            return Err(bad());
        }
        let w = u32::from_str_radix(t, 16).map_err(|_| bad())?;
        if n < 32 && w >> n != 0 {
            return Err(bad());
        }
        Ok(Vertex(w))
    }

    /// The word as a string of `n` binary digits, coordinate 1 first.
    pub fn to_binary(self, n: usize) -> String {
        format!("{:0width$b}", self.0, width = n)
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Vertex({:#x})", self.0)
    }
}

impl Add for Vertex {
    type Output = Vertex;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Vertex) -> Vertex {
        Vertex(self.0 ^ rhs.0)
    }
}

impl BitAnd for Vertex {
    type Output = Vertex;
    fn bitand(self, rhs: Vertex) -> Vertex {
        Vertex(self.0 & rhs.0)
    }
}

impl BitOr for Vertex {
    type Output = Vertex;
    fn bitor(self, rhs: Vertex) -> Vertex {
        Vertex(self.0 | rhs.0)
    }
}

/// All submasks of `mask`, in increasing order.
pub fn submasks(mask: u32) -> impl Iterator<Item = u32> {
    let mut next = Some(0u32);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == mask {
            None
        } else {
            Some(((cur | !mask).wrapping_add(1)) & mask)
        };
        Some(cur)
    })
}

/// The face `{z + base : z ≼ mask}`; its dimension is `wt(mask)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Face {
    pub mask: Vertex,
    pub base: Vertex,
}

impl Face {
    pub fn new(mask: Vertex, base: Vertex) -> Face {
        Face { mask, base }
    }

    pub fn dimension(&self) -> u32 {
        self.mask.weight()
    }

    /// The `2^wt(mask)` vertices of the face in increasing word order.
    pub fn vertices(&self) -> Vec<Vertex> {
        let mut v: Vec<Vertex> = submasks(self.mask.0)
            .map(|z| Vertex(z ^ self.base.0))
            .collect();
        v.sort_unstable();
        v
    }
}

/// A subset of `V(Q_n)` stored as a dense `2^n`-bit set.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    n: usize,
    bits: Vec<u64>,
}

impl VertexSet {
    pub fn empty(n: usize) -> Result<VertexSet> {
        check_dim(n)?;
        let words = (1usize << n).div_ceil(64);
        Ok(VertexSet { n, bits: vec![0; words] })
    }

    pub fn full(n: usize) -> Result<VertexSet> {
        let mut s = VertexSet::empty(n)?;
        for x in 0..(1u32 << n) {
            s.insert(Vertex(x));
        }
        Ok(s)
    }

    pub fn from_words<I: IntoIterator<Item = u32>>(n: usize, words: I) -> Result<VertexSet> {
        let mut s = VertexSet::empty(n)?;
        for w in words {
            if (w as u64) >> n != 0 {
                return Err(Error::Hex { word: format!("{w:x}"), n });
            }
            s.insert(Vertex(w));
        }
        Ok(s)
    }

    pub fn from_vertices<I: IntoIterator<Item = Vertex>>(n: usize, vs: I) -> Result<VertexSet> {
        VertexSet::from_words(n, vs.into_iter().map(|v| v.0))
    }

    /// The set `{x : pred(x)}`.
    pub fn from_fn(n: usize, mut pred: impl FnMut(u32) -> bool) -> Result<VertexSet> {
        let mut s = VertexSet::empty(n)?;
        for x in 0..(1u32 << n) {
            if pred(x) {
                s.insert(Vertex(x));
            }
        }
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        1 << self.n
    }

    #[inline]
    pub fn contains(&self, v: Vertex) -> bool {
        let w = v.0 as usize;
        self.bits[w >> 6] >> (w & 63) & 1 == 1
    }

    #[inline]
    pub fn contains_word(&self, w: u32) -> bool {
        let w = w as usize;
        self.bits[w >> 6] >> (w & 63) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: Vertex) {
        let w = v.0 as usize;
        self.bits[w >> 6] |= 1 << (w & 63);
    }

    #[inline]
    pub fn remove(&mut self, v: Vertex) {
        let w = v.0 as usize;
        self.bits[w >> 6] &= !(1 << (w & 63));
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&b| b == 0)
    }

    /// Members in increasing word order.
    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.bits.iter().enumerate().flat_map(|(i, &b)| {
            let mut b = b;
            std::iter::from_fn(move || {
                if b == 0 {
                    None
                } else {
                    let t = b.trailing_zeros();
                    b &= b - 1;
                    Some(Vertex((i as u32) * 64 + t))
                }
            })
        })
    }

    pub fn words(&self) -> Vec<u32> {
        self.iter().map(|v| v.0).collect()
    }

    pub fn complement(&self) -> VertexSet {
        let mut c = self.clone();
        let total = self.order();
        for (i, b) in c.bits.iter_mut().enumerate() {
            *b = !*b;
            let lo = i * 64;
            if lo + 64 > total {
                let keep = total - lo;
                *b &= (1u64 << keep) - 1;
            }
        }
        c
    }

    pub fn translate(&self, t: Vertex) -> VertexSet {
        let mut out = VertexSet { n: self.n, bits: vec![0; self.bits.len()] };
        for v in self.iter() {
            out.insert(v + t);
        }
        out
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let bits = self.bits.iter().zip(&other.bits).map(|(a, b)| a | b).collect();
        VertexSet { n: self.n, bits }
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let bits = self.bits.iter().zip(&other.bits).map(|(a, b)| a & b).collect();
        VertexSet { n: self.n, bits }
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & b == 0)
    }

    /// Number of neighbours of `v` inside the set.
    pub fn neighbours_in(&self, v: Vertex) -> u32 {
        (0..self.n).filter(|&i| self.contains_word(v.0 ^ (1 << i))).count() as u32
    }

    pub fn raw_bits(&self) -> &[u64] {
        &self.bits
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VertexSet(n={}, |S|={})", self.n, self.len())
    }
}

/// The map `x ↦ shift + π(x)`, where `π` moves coordinate index `i` to
/// `perm[i]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CubeAutomorphism {
    n: usize,
    perm: Vec<u8>,
    shift: Vertex,
}

impl CubeAutomorphism {
    pub fn identity(n: usize) -> CubeAutomorphism {
        CubeAutomorphism { n, perm: (0..n as u8).collect(), shift: Vertex::ZERO }
    }

    pub fn new(perm: Vec<u8>, shift: Vertex) -> Result<CubeAutomorphism> {
        let n = perm.len();
        check_dim(n)?;
        let mut seen = vec![false; n];
        for &p in &perm {
            if p as usize >= n || std::mem::replace(&mut seen[p as usize], true) {
                return Err(Error::NotAPermutation(n));
            }
        }
        if (shift.0 as u64) >> n != 0 {
            return Err(Error::Hex { word: format!("{:x}", shift.0), n });
        }
        Ok(CubeAutomorphism { n, perm, shift })
    }

    pub fn translation(n: usize, shift: Vertex) -> CubeAutomorphism {
        CubeAutomorphism { n, perm: (0..n as u8).collect(), shift }
    }

    pub fn permutation(perm: Vec<u8>) -> Result<CubeAutomorphism> {
        CubeAutomorphism::new(perm, Vertex::ZERO)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn perm(&self) -> &[u8] {
        &self.perm
    }

    pub fn shift(&self) -> Vertex {
        self.shift
    }

    pub fn is_identity(&self) -> bool {
        self.shift == Vertex::ZERO && self.perm.iter().enumerate().all(|(i, &p)| p as usize == i)
    }

    pub fn permute_word(&self, x: u32) -> u32 {
        let n = self.n;
        let mut y = 0;
        for i in 0..n {
            if x & coord_bit(n, i) != 0 {
                y |= coord_bit(n, self.perm[i] as usize);
            }
        }
        y
    }

    pub fn apply(&self, v: Vertex) -> Vertex {
        Vertex(self.permute_word(v.0) ^ self.shift.0)
    }

    pub fn apply_set(&self, s: &VertexSet) -> VertexSet {
        let table = WordPermuter::new(self.n, &self.perm);
        let mut out = VertexSet::empty(s.dim()).expect("dimension already checked");
        for v in s.iter() {
            out.insert(Vertex(table.apply(v.0) ^ self.shift.0));
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &CubeAutomorphism) -> CubeAutomorphism {
        let perm = other.perm.iter().map(|&p| self.perm[p as usize]).collect();
        let shift = Vertex(self.permute_word(other.shift.0) ^ self.shift.0);
        CubeAutomorphism { n: self.n, perm, shift }
    }

    pub fn inverse(&self) -> CubeAutomorphism {
        let mut inv = vec![0u8; self.n];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p as usize] = i as u8;
        }
        let g = CubeAutomorphism { n: self.n, perm: inv, shift: Vertex::ZERO };
        let shift = Vertex(g.permute_word(self.shift.0));
        CubeAutomorphism { shift, ..g }
    }
}

/// Byte-table coordinate permutation of words, for hot loops.
#[derive(Clone)]
pub struct WordPermuter {
    lo: [u32; 256],
    hi: [u32; 256],
}

impl WordPermuter {
    /// `perm[i]` is the image of coordinate index `i`.
    pub fn new(n: usize, perm: &[u8]) -> WordPermuter {
        let mut lo = [0u32; 256];
        let mut hi = [0u32; 256];
        // bit b of the word is coordinate index n-1-b
        let image_bit = |b: usize| -> u32 {
            let i = n - 1 - b;
            coord_bit(n, perm[i] as usize)
        };
        for byte in 0..256usize {
            let mut l = 0;
            let mut h = 0;
            for k in 0..8 {
                if byte >> k & 1 == 1 {
                    if k < n {
                        l |= image_bit(k);
                    }
                    if k + 8 < n {
                        h |= image_bit(k + 8);
                    }
                }
            }
            lo[byte] = l;
            hi[byte] = h;
        }
        WordPermuter { lo, hi }
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.lo[(x & 0xff) as usize] | self.hi[(x >> 8 & 0xff) as usize]
    }
}

/// Dimension of the affine span of a nonempty vertex set.
pub fn affine_rank(s: &VertexSet) -> Result<usize> {
    let first = s.iter().next().ok_or(Error::EmptySet)?;
    let rows: Vec<u64> = s.iter().map(|v| (v.0 ^ first.0) as u64).collect();
    Ok(Gf2Matrix::from_words(s.dim(), rows).rank())
}

/// Linear span of the given words, as a sorted list of all its elements.
pub fn span(words: &[u32]) -> Vec<u32> {
    let mut basis: Vec<u32> = Vec::new();
    for &w in words {
        let mut x = w;
        for &b in &basis {
            x = x.min(x ^ b);
        }
        if x != 0 {
            basis.push(x);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    let mut out = vec![0u32];
    for b in basis {
        let k = out.len();
        for j in 0..k {
            out.push(out[j] ^ b);
        }
    }
    out.sort_unstable();
    out
}

/// Number of edges of each direction (coordinate index) joining `s` to its
/// complement.
pub fn boundary_by_direction(s: &VertexSet) -> Vec<u64> {
    let n = s.dim();
    (0..n)
        .map(|i| {
            let bit = coord_bit(n, i);
            s.iter().filter(|v| !s.contains_word(v.0 ^ bit)).count() as u64
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_examples() {
        assert_eq!(Vertex::ZERO.weight(), 0);
        assert_eq!(Vertex::from_hex("0a1", 12).unwrap().weight(), 3);
        assert_eq!(Vertex::ones(12).weight(), 12);
        assert_eq!(Vertex::from_hex("0a1", 12).unwrap().to_binary(12), "000010100001");
    }

    #[test]
    fn hex_round_trip_and_errors() {
        let v = Vertex::from_hex("0a1", 12).unwrap();
        assert_eq!(v.to_hex(12), "0a1");
        assert_eq!(Vertex(5).to_hex(13), "0005");
        assert!(Vertex::from_hex("1000", 12).is_err());
        assert!(Vertex::from_hex("0g1", 12).is_err());
        assert!(Vertex::from_hex("", 12).is_err());
    }

    #[test]
    fn domination() {
        let y = Vertex(0b1011);
        assert!(Vertex::ZERO.dominated_by(y));
        assert!(y.dominated_by(y));
        let n = 6;
        assert!(!Vertex::unit(n, 0).dominated_by(Vertex::unit(n, 1)));
        assert_eq!(Vertex::unit(n, 0), Vertex(0b100000));
    }

    #[test]
    fn faces() {
        let b = Vertex(0x5a);
        assert_eq!(Face::new(Vertex::ZERO, b).vertices(), vec![b]);
        let f = Face::new(Vertex(0b0110), Vertex::ZERO).vertices();
        assert_eq!(f, vec![Vertex(0), Vertex(2), Vertex(4), Vertex(6)]);
        let all = Face::new(Vertex::ones(5), Vertex(3)).vertices();
        assert_eq!(all, (0..32).map(Vertex).collect::<Vec<_>>());
    }

    #[test]
    fn face_splits_along_a_coordinate() {
        let face = Face::new(Vertex(0b1101_0110), Vertex(0b0011_0001));
        let verts = face.vertices();
        let j = 0b100;
        let lower = Face::new(Vertex(face.mask.0 & !j), face.base);
        let upper = Face::new(Vertex(face.mask.0 & !j), Vertex(face.base.0 ^ j));
        let mut union = lower.vertices();
        union.extend(upper.vertices());
        union.sort();
        assert_eq!(union, verts);
        assert_eq!(lower.dimension() + 1, face.dimension());
    }

    #[test]
    fn weight_of_sum_is_distance() {
        for x in 0..256u32 {
            for y in 0..256u32 {
                assert_eq!((Vertex(x) + Vertex(y)).weight(), Vertex(x).distance(Vertex(y)));
                let d = (0..8).filter(|&i| (x >> i & 1) != (y >> i & 1)).count() as u32;
                assert_eq!(Vertex(x).distance(Vertex(y)), d);
            }
        }
    }

    #[test]
    fn automorphism_basics() {
        let n = 5;
        let s = VertexSet::from_words(n, [0, 3, 17, 30]).unwrap();
        assert_eq!(CubeAutomorphism::identity(n).apply_set(&s), s);
        let t = Vertex(0b10110);
        let g = CubeAutomorphism::translation(n, t);
        let single = VertexSet::from_words(n, [0]).unwrap();
        assert_eq!(g.apply_set(&single).words(), vec![t.0]);
        assert!(CubeAutomorphism::new(vec![0, 0, 1], Vertex::ZERO).is_err());
    }

    #[test]
    fn composition_and_inverse() {
        let n = 6;
        let g = CubeAutomorphism::new(vec![2, 0, 1, 5, 3, 4], Vertex(0b101001)).unwrap();
        let h = CubeAutomorphism::new(vec![1, 2, 3, 4, 5, 0], Vertex(0b000111)).unwrap();
        for x in 0..1u32 << n {
            let v = Vertex(x);
            assert_eq!(g.compose(&h).apply(v), g.apply(h.apply(v)));
            assert_eq!(g.inverse().apply(g.apply(v)), v);
        }
        assert!(g.compose(&g.inverse()).is_identity());
    }

    #[test]
    fn automorphisms_preserve_adjacency() {
        let n = 7;
        let g = CubeAutomorphism::new(vec![3, 6, 0, 1, 5, 2, 4], Vertex(0b1011001)).unwrap();
        for x in 0..1u32 << n {
            for y in 0..1u32 << n {
                let adj = Vertex(x).distance(Vertex(y)) == 1;
                let gadj = g.apply(Vertex(x)).distance(g.apply(Vertex(y))) == 1;
                assert_eq!(adj, gadj);
            }
        }
    }

    #[test]
    fn permuter_matches_naive() {
        for n in [3usize, 8, 12, 16] {
            let perm: Vec<u8> = (0..n as u8).rev().collect();
            let g = CubeAutomorphism::permutation(perm.clone()).unwrap();
            let t = WordPermuter::new(n, &perm);
            for x in (0..(1u32 << n)).step_by(7) {
                assert_eq!(t.apply(x), g.permute_word(x));
            }
        }
    }

    #[test]
    fn affine_rank_examples() {
        let n = 4;
        assert_eq!(affine_rank(&VertexSet::from_words(n, [9]).unwrap()).unwrap(), 0);
        let face = VertexSet::from_words(n, [0, 8, 4, 12]).unwrap();
        assert_eq!(affine_rank(&face).unwrap(), 2);
        assert_eq!(affine_rank(&VertexSet::empty(n).unwrap()), Err(Error::EmptySet));
        let g = CubeAutomorphism::new(vec![3, 1, 0, 2], Vertex(5)).unwrap();
        assert_eq!(affine_rank(&g.apply_set(&face)).unwrap(), 2);
    }

    #[test]
    fn complement_and_iteration() {
        let s = VertexSet::from_words(3, [0, 7]).unwrap();
        assert_eq!(s.complement().words(), vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(s.neighbours_in(Vertex(1)), 1);
        let big = VertexSet::full(12).unwrap();
        assert_eq!(big.len(), 4096);
        assert!(big.complement().is_empty());
    }

    #[test]
    fn span_enumerates_subspace() {
        let sp = span(&[3, 5, 6]);
        assert_eq!(sp, vec![0, 3, 5, 6]);
    }
}
