//! Dense linear algebra over GF(2).

use crate::error::{Error, Result};

/// A bit vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Gf2Vector {
    len: usize,
    words: Vec<u64>,
}

impl Gf2Vector {
    pub fn zeros(len: usize) -> Gf2Vector {
        Gf2Vector { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn from_bools(bits: &[bool]) -> Gf2Vector {
        let mut v = Gf2Vector::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        if b {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &Gf2Vector) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &Gf2Vector) -> bool {
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum::<u32>() & 1 == 1
    }

    fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }
}

/// A matrix over GF(2); each row is a bit vector with `cols` entries.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Gf2Matrix {
    cols: usize,
    rows: Vec<Gf2Vector>,
}

/// Solution set of `A·x = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2Solution {
    pub rank: usize,
    /// One solution, or `None` when the system is inconsistent.
    pub particular: Option<Gf2Vector>,
    /// Basis of the null space of `A`.
    pub kernel: Vec<Gf2Vector>,
}

impl Gf2Solution {
    pub fn is_consistent(&self) -> bool {
        self.particular.is_some()
    }
}

impl Gf2Matrix {
    pub fn new(cols: usize) -> Gf2Matrix {
        Gf2Matrix { cols, rows: Vec::new() }
    }

    /// Rows given as words of at most 64 columns; column `j` is bit `j`.
    pub fn from_words(cols: usize, words: Vec<u64>) -> Gf2Matrix {
        assert!(cols <= 64);
        let rows = words
            .into_iter()
            .map(|w| Gf2Vector { len: cols, words: vec![w] })
            .collect();
        Gf2Matrix { cols, rows }
    }

    pub fn push_row(&mut self, row: Gf2Vector) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: row.len() });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Gf2Vector] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        let mut basis: Vec<(usize, Gf2Vector)> = Vec::new();
        for row in &self.rows {
            let mut r = row.clone();
            for (p, b) in &basis {
                if r.get(*p) {
                    r.xor_assign(b);
                }
            }
            if let Some(p) = r.first_one() {
                for (_, b) in basis.iter_mut() {
                    if b.get(p) {
                        b.xor_assign(&r);
                    }
                }
                basis.push((p, r));
            }
        }
        basis.len()
    }

    /// Solves `self · x = rhs`.
    pub fn solve(&self, rhs: &[bool]) -> Result<Gf2Solution> {
        if rhs.len() != self.rows.len() {
            return Err(Error::DimensionMismatch { expected: self.rows.len(), found: rhs.len() });
        }
        let c = self.cols;
        // augmented column c holds the right-hand side
        let mut aug: Vec<Gf2Vector> = self
            .rows
            .iter()
            .zip(rhs)
            .map(|(r, &b)| {
                let mut v = Gf2Vector::zeros(c + 1);
                for j in 0..c {
                    if r.get(j) {
                        v.set(j, true);
                    }
                }
                v.set(c, b);
                v
            })
            .collect();
        let mut pivots: Vec<usize> = Vec::new();
        let mut row = 0;
        for col in 0..c {
            let Some(p) = (row..aug.len()).find(|&r| aug[r].get(col)) else {
                continue;
            };
            aug.swap(row, p);
            let pr = aug[row].clone();
            for (r, v) in aug.iter_mut().enumerate() {
                if r != row && v.get(col) {
                    v.xor_assign(&pr);
                }
            }
            pivots.push(col);
            row += 1;
            if row == aug.len() {
                break;
            }
        }
        let rank = pivots.len();
        let consistent = aug[rank..].iter().all(|r| !r.get(c));
        let mut is_pivot = vec![false; c];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let particular = consistent.then(|| {
            let mut x = Gf2Vector::zeros(c);
            for (r, &p) in pivots.iter().enumerate() {
                x.set(p, aug[r].get(c));
            }
            x
        });
        let kernel = (0..c)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut x = Gf2Vector::zeros(c);
                x.set(f, true);
                for (r, &p) in pivots.iter().enumerate() {
                    if aug[r].get(f) {
                        x.set(p, true);
                    }
                }
                x
            })
            .collect();
        Ok(Gf2Solution { rank, particular, kernel })
    }

    pub fn mul_vec(&self, x: &Gf2Vector) -> Vec<bool> {
        self.rows.iter().map(|r| r.dot(x)).collect()
    }
}

/// Reduces `v` against an echelon basis given as (pivot, vector) pairs.
pub(crate) fn reduce(basis: &[(usize, Gf2Vector)], v: &mut Gf2Vector) {
    for (p, b) in basis {
        if v.get(*p) {
            v.xor_assign(b);
        }
    }
}

/// Inserts `v` into a fully reduced echelon basis; returns false when `v`
/// already lies in the span.
pub(crate) fn insert_into_basis(basis: &mut Vec<(usize, Gf2Vector)>, mut v: Gf2Vector) -> bool {
    reduce(basis, &mut v);
    match v.first_one() {
        None => false,
        Some(p) => {
            for (_, b) in basis.iter_mut() {
                if b.get(p) {
                    b.xor_assign(&v);
                }
            }
            basis.push((p, v));
            true
        }
    }
}
