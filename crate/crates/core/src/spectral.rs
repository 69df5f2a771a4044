//! Integer-exact Walsh–Fourier analysis on `Q_n`.
//!
//! Spectra carry the factor `2^n`: `coeffs(y) = Σ_z f(z)(-1)^(z,y)`, so every
//! identity below is checked in exact integer arithmetic.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cube::{check_dim, coord_bit, span, submasks, Face, Vertex, VertexSet};
use crate::error::{Error, Result};

/// A function `V(Q_n) → Z`, indexed by word.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntegerFunction {
    n: usize,
    values: Vec<i64>,
}

impl IntegerFunction {
    pub fn new(n: usize, values: Vec<i64>) -> Result<IntegerFunction> {
        check_dim(n)?;
        if values.len() != 1 << n {
            return Err(Error::DimensionMismatch { expected: 1 << n, found: values.len() });
        }
        Ok(IntegerFunction { n, values })
    }

    pub fn constant(n: usize, c: i64) -> Result<IntegerFunction> {
        check_dim(n)?;
        Ok(IntegerFunction { n, values: vec![c; 1 << n] })
    }

    /// The character `χ_t(x) = (-1)^(x,t)`.
    pub fn character(n: usize, t: Vertex) -> Result<IntegerFunction> {
        check_dim(n)?;
        let values = (0..1u32 << n).map(|x| if Vertex(x).dot(t) { -1 } else { 1 }).collect();
        Ok(IntegerFunction { n, values })
    }

    pub fn indicator(s: &VertexSet) -> IntegerFunction {
        let values = (0..s.order() as u32).map(|x| s.contains_word(x) as i64).collect();
        IntegerFunction { n: s.dim(), values }
    }

    /// `b` on `C0`, `-c` on the complement.
    pub fn associated(c0: &VertexSet, m: &QuotientMatrix) -> IntegerFunction {
        let (b, c) = (m.b as i64, m.c as i64);
        let values = (0..c0.order() as u32).map(|x| if c0.contains_word(x) { b } else { -c }).collect();
        IntegerFunction { n: c0.dim(), values }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn at(&self, v: Vertex) -> i64 {
        self.values[v.0 as usize]
    }

    /// `x ↦ f(x + t)`.
    pub fn translate(&self, t: Vertex) -> IntegerFunction {
        let values = (0..self.values.len()).map(|x| self.values[x ^ t.0 as usize]).collect();
        IntegerFunction { n: self.n, values }
    }

    pub fn pointwise_mul(&self, other: &IntegerFunction) -> IntegerFunction {
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        IntegerFunction { n: self.n, values }
    }

    pub fn norm_squared(&self) -> i128 {
        self.values.iter().map(|&v| (v as i128) * (v as i128)).sum()
    }

    /// `Σ_{y ~ x} f(y)` at every vertex.
    pub fn neighbour_sums(&self) -> Vec<i64> {
        (0..self.values.len())
            .map(|x| (0..self.n).map(|i| self.values[x ^ (1 << i)]).sum())
            .collect()
    }

    /// True when `λ·f(x) = Σ_{y~x} f(y)` at every vertex and `f` is not zero.
    pub fn is_eigenfunction(&self, lambda: i64) -> bool {
        self.values.iter().any(|&v| v != 0)
            && self.neighbour_sums().iter().zip(&self.values).all(|(s, v)| *s == lambda * v)
    }
}

/// `2^n`-scaled Fourier coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntegerSpectrum {
    n: usize,
    coeffs: Vec<i64>,
}

impl IntegerSpectrum {
    pub fn new(n: usize, coeffs: Vec<i64>) -> Result<IntegerSpectrum> {
        check_dim(n)?;
        if coeffs.len() != 1 << n {
            return Err(Error::DimensionMismatch { expected: 1 << n, found: coeffs.len() });
        }
        Ok(IntegerSpectrum { n, coeffs })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn at(&self, v: Vertex) -> i64 {
        self.coeffs[v.0 as usize]
    }

    /// Nonzero coefficients in increasing word order.
    pub fn support(&self) -> Vec<(Vertex, i64)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(y, &c)| (Vertex(y as u32), c))
            .collect()
    }

    pub fn sum_of_squares(&self) -> i128 {
        self.coeffs.iter().map(|&c| (c as i128) * (c as i128)).sum()
    }

    /// Weights carrying a nonzero coefficient, ascending.
    pub fn support_weights(&self) -> Vec<u32> {
        let mut w: Vec<u32> = self.support().iter().map(|(v, _)| v.weight()).collect();
        w.sort_unstable();
        w.dedup();
        w
    }

    /// Lines `hex<TAB>coefficient`, zeros omitted, sorted by word.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (v, c) in self.support() {
            out.push_str(&format!("{}\t{}\n", v.to_hex(self.n), c));
        }
        out
    }

    pub fn parse_dump(n: usize, text: &str) -> Result<IntegerSpectrum> {
        check_dim(n)?;
        let mut coeffs = vec![0i64; 1 << n];
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| Error::Parse { line: i + 1, msg: msg.to_string() };
            let (w, c) = line.split_once('\t').ok_or_else(|| err("expected hex<TAB>integer"))?;
            let v = Vertex::from_hex(w, n).map_err(|e| err(&e.to_string()))?;
            coeffs[v.0 as usize] = c.trim().parse().map_err(|_| err("bad integer"))?;
        }
        Ok(IntegerSpectrum { n, coeffs })
    }
}

/// In-place fast Walsh–Hadamard butterfly.
pub fn wht_in_place(a: &mut [i64]) {
    let len = a.len();
    let mut h = 1;
    while h < len {
        for block in (0..len).step_by(2 * h) {
            for j in block..block + h {
                let (x, y) = (a[j], a[j + h]);
                a[j] = x + y;
                a[j + h] = x - y;
            }
        }
        h *= 2;
    }
}

pub fn wht(f: &IntegerFunction) -> IntegerSpectrum {
    let mut coeffs = f.values.clone();
    wht_in_place(&mut coeffs);
    IntegerSpectrum { n: f.n, coeffs }
}

/// Inverse transform; fails unless every value is an integer.
pub fn inverse_wht(s: &IntegerSpectrum) -> Result<IntegerFunction> {
    let mut values = s.coeffs.clone();
    wht_in_place(&mut values);
    let scale = 1i64 << s.n;
    if values.iter().any(|v| v % scale != 0) {
        return Err(Error::Verification("spectrum is not the transform of an integer function".into()));
    }
    values.iter_mut().for_each(|v| *v /= scale);
    Ok(IntegerFunction { n: s.n, values })
}

/// A 2×2 quotient matrix `[[a,b],[c,d]]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct QuotientMatrix {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
}

impl QuotientMatrix {
    /// Rows must have equal sums.
    pub fn new(a: u32, b: u32, c: u32, d: u32) -> Result<QuotientMatrix> {
        if a + b != c + d {
            return Err(Error::InvalidParameters(format!(
                "row sums differ in [[{a},{b}],[{c},{d}]]"
            )));
        }
        Ok(QuotientMatrix { a, b, c, d })
    }

    pub fn n(&self) -> u32 {
        self.a + self.b
    }

    /// The matrix with the cells swapped.
    pub fn swapped(&self) -> QuotientMatrix {
        QuotientMatrix { a: self.d, b: self.c, c: self.b, d: self.a }
    }

    /// Cell order with `b ≥ c`.
    pub fn normalized(&self) -> QuotientMatrix {
        if self.b >= self.c {
            *self
        } else {
            self.swapped()
        }
    }

    pub fn scaled(&self, t: u32) -> QuotientMatrix {
        QuotientMatrix { a: self.a * t, b: self.b * t, c: self.c * t, d: self.d * t }
    }

    /// Size of the first cell, `c·2^n/(b+c)`, when integral.
    pub fn first_cell_size(&self) -> Option<u64> {
        let total = 1u64 << self.n();
        let num = self.c as u64 * total;
        let den = (self.b + self.c) as u64;
        (den > 0 && num.is_multiple_of(den)).then(|| num / den)
    }
}

impl fmt::Display for QuotientMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

/// The quotient matrix of `(C0, complement)`, or the first vertex whose
/// neighbourhood breaks equitability.
pub fn quotient_matrix(c0: &VertexSet) -> Result<QuotientMatrix> {
    let n = c0.dim() as u32;
    let mut row = [None::<u32>; 2];
    for x in 0..c0.order() as u32 {
        let cell = if c0.contains_word(x) { 0 } else { 1 };
        let k = c0.neighbours_in(Vertex(x));
        match row[cell] {
            None => row[cell] = Some(k),
            Some(r) if r != k => return Err(Error::NotEquitable { vertex: x, cell }),
            _ => {}
        }
    }
    match row {
        [Some(a), Some(c)] => Ok(QuotientMatrix { a, b: n - a, c, d: n - c }),
        _ => Err(Error::NotProper),
    }
}

/// Outcome of checking the three Fourier identities of an equitable partition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FourierReport {
    pub matrix: QuotientMatrix,
    /// `(b+c)/2`, the only weight allowed to carry nonzero coefficients.
    pub expected_weight: Option<u32>,
    pub support_size: usize,
    pub support_weights: Vec<u32>,
    pub sum_of_squares: i128,
    pub weight_identity: bool,
    pub product_identity: bool,
    pub norm_identity: bool,
    pub first_failure: Option<String>,
}

impl FourierReport {
    pub fn all_hold(&self) -> bool {
        self.weight_identity && self.product_identity && self.norm_identity
    }
}

/// Checks, for the associated function `f` of `(C0, C1)`:
/// nonzero coefficients only at weight `(b+c)/2`;
/// `(b-c)·2^n·F(x) = Σ_{y+z=x} F(y)F(z)` for `x ≠ 0`;
/// `Σ F(y)² = bc·2^{2n}`.
pub fn verify_fourier_system(c0: &VertexSet, m: &QuotientMatrix) -> Result<FourierReport> {
    let actual = quotient_matrix(c0)?;
    if actual != *m {
        return Err(Error::Precondition(format!("quotient matrix is {actual}, not {m}")));
    }
    let n = c0.dim();
    let ft = wht(&IntegerFunction::associated(c0, m));
    let support = ft.support();
    let expected_weight = (m.b + m.c).is_multiple_of(2).then_some((m.b + m.c) / 2);
    let mut first_failure = None;

    let bad_weight = support.iter().find(|(v, _)| Some(v.weight()) != expected_weight);
    let weight_identity = bad_weight.is_none();
    if let Some((v, c)) = bad_weight {
        first_failure = Some(format!("nonzero coefficient {c} at {} of weight {}", v.to_hex(n), v.weight()));
    }

    let mut conv = vec![0i128; 1 << n];
    for &(y, fy) in &support {
        for &(z, fz) in &support {
            conv[(y.0 ^ z.0) as usize] += fy as i128 * fz as i128;
        }
    }
    let lhs_scale = (m.b as i128 - m.c as i128) << n;
    let bad_product = (1..1usize << n).find(|&x| lhs_scale * ft.coeffs[x] as i128 != conv[x]);
    let product_identity = bad_product.is_none();
    if let (Some(x), None) = (bad_product, &first_failure) {
        first_failure = Some(format!("product identity fails at {}", Vertex(x as u32).to_hex(n)));
    }

    let sum_of_squares = ft.sum_of_squares();
    let norm_identity = sum_of_squares == ((m.b as i128 * m.c as i128) << (2 * n));
    if !norm_identity && first_failure.is_none() {
        first_failure = Some(format!("sum of squares {sum_of_squares} differs from bc·4^n"));
    }
    Ok(FourierReport {
        matrix: *m,
        expected_weight,
        support_size: support.len(),
        support_weights: ft.support_weights(),
        sum_of_squares,
        weight_identity,
        product_identity,
        norm_identity,
        first_failure,
    })
}

/// Largest `t` with vanishing indicator coefficients at all weights `1..=t`.
pub fn correlation_immunity_order(c0: &VertexSet) -> Result<u32> {
    let len = c0.len();
    if len == 0 || len == c0.order() {
        return Err(Error::NotProper);
    }
    let ft = wht(&IntegerFunction::indicator(c0));
    let min_weight = ft
        .support()
        .iter()
        .map(|(v, _)| v.weight())
        .filter(|&w| w > 0)
        .min()
        .expect("a proper subset has a nonconstant indicator");
    Ok(min_weight - 1)
}

/// All periods `y` with `C0 + y = C0`, in increasing order.
pub fn kernel_elements(c0: &VertexSet) -> Vec<Vertex> {
    let small = if c0.len() * 2 <= c0.order() { c0.clone() } else { c0.complement() };
    let Some(s0) = small.iter().next() else {
        return (0..c0.order() as u32).map(Vertex).collect();
    };
    let members = small.words();
    let mut out: Vec<Vertex> = members
        .iter()
        .map(|&s| s ^ s0.0)
        .filter(|&t| members.iter().all(|&x| small.contains_word(x ^ t)))
        .map(Vertex)
        .collect();
    out.sort_unstable();
    out
}

/// Reduced echelon basis of the kernel, ascending.
pub fn kernel(c0: &VertexSet) -> Vec<Vertex> {
    let elems: Vec<u32> = kernel_elements(c0).iter().map(|v| v.0).collect();
    echelon_basis(&elems).into_iter().map(Vertex).collect()
}

/// Fully reduced echelon basis of the span of `words`, ascending.
pub fn echelon_basis(words: &[u32]) -> Vec<u32> {
    let mut basis: Vec<u32> = Vec::new();
    for &w in words {
        let mut x = w;
        for &b in &basis {
            let top = 31 - b.leading_zeros();
            if x >> top & 1 == 1 {
                x ^= b;
            }
        }
        if x != 0 {
            let top = 31 - x.leading_zeros();
            for b in basis.iter_mut() {
                if *b >> top & 1 == 1 {
                    *b ^= x;
                }
            }
            basis.push(x);
        }
    }
    basis.sort_unstable();
    debug_assert_eq!(span(&basis).len(), span(words).len());
    basis
}

/// Edges of each direction joining `C0` to its complement.
pub fn composite_edge_counts(c0: &VertexSet) -> Vec<u64> {
    crate::cube::boundary_by_direction(c0)
}

/// `Σ_{y: y_i = 0} F(y)²` for each coordinate index `i`.
pub fn directional_norms(s: &IntegerSpectrum) -> Vec<i128> {
    let n = s.n;
    (0..n)
        .map(|i| {
            let bit = coord_bit(n, i);
            s.coeffs
                .iter()
                .enumerate()
                .filter(|(y, _)| *y as u32 & bit == 0)
                .map(|(_, &c)| (c as i128) * (c as i128))
                .sum()
        })
        .collect()
}

pub fn face_sum(f: &IntegerFunction, face: &Face) -> i64 {
    submasks(face.mask.0).map(|z| f.values[(z ^ face.base.0) as usize]).sum()
}

/// Both sides of `2^{n-wt(x)} Σ_{z≼x} F(z) = 2^n Σ_{z≼x+1} f(z)`.
pub fn low_weight_fourier_identity(f: &IntegerFunction, x: Vertex) -> (i128, i128) {
    let n = f.n;
    let ft = wht(f);
    let lhs: i128 = submasks(x.0).map(|z| ft.coeffs[z as usize] as i128).sum::<i128>()
        << (n as u32 - x.weight());
    let comp = Vertex::ones(n).0 ^ x.0;
    let rhs: i128 = submasks(comp).map(|z| f.values[z as usize] as i128).sum::<i128>() << n;
    (lhs, rhs)
}
