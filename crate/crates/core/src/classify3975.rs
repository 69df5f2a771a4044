//! Classification of the equitable partitions of `Q_12` with quotient matrix
//! `[[3,9],[7,5]]`.
//!
//! The spectrum of the associated function lives on 63 words of weight 8
//! with coefficients `±1` (in units of `2^12`). Its support is stored as the
//! blocks of zero coordinates, which form a `(3,4,12)` covering. The search
//! runs bitriple systems, then coverings, then a parity filter, then a GF(2)
//! system for the signs, then one sign vector per coset of the translation
//! span.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::canonical::{coordinate_canonical, full_canonical, CanonicalForm, DedupeTable};
use crate::cube::{coord_bit, VertexSet};
use crate::error::{Error, Result};
use crate::exact_cover::{subsets_of_size, CoverInstance};
use crate::gf2::{insert_into_basis, reduce, Gf2Matrix, Gf2Vector};
use crate::spectral::{inverse_wht, quotient_matrix, IntegerSpectrum, QuotientMatrix};

pub const N: usize = 12;
const ALL: u32 = (1 << N) - 1;
pub const MATRIX: QuotientMatrix = QuotientMatrix { a: 3, b: 9, c: 7, d: 5 };

/// 12-bit mask of coordinates (0-based) in `coord_bit` order.
fn mask_of(coords: &[usize]) -> u32 {
    coords.iter().fold(0, |m, &i| m | coord_bit(N, i))
}

/// Coordinates (0-based) of a mask.
pub fn coords_of(mask: u32) -> Vec<usize> {
    (0..N).filter(|&i| mask & coord_bit(N, i) != 0).collect()
}

/// A multiset of 3-subsets of the coordinates, as `mask -> multiplicity`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct BitripleSystem {
    pub triples: BTreeMap<u32, u32>,
}

impl BitripleSystem {
    pub fn from_masks<I: IntoIterator<Item = u32>>(masks: I) -> BitripleSystem {
        let mut triples = BTreeMap::new();
        for m in masks {
            *triples.entry(m).or_insert(0) += 1;
        }
        BitripleSystem { triples }
    }

    pub fn total(&self) -> u32 {
        self.triples.values().sum()
    }

    pub fn multiplicity(&self, t: u32) -> u32 {
        self.triples.get(&t).copied().unwrap_or(0)
    }

    /// Total multiplicity 16, every coordinate in 4, every pair in an even
    /// number.
    pub fn check(&self) -> Result<()> {
        if self.total() != 16 || self.triples.keys().any(|t| t.count_ones() != 3 || t >> N != 0) {
            return Err(Error::Verification("bitriple system must have 16 triples".into()));
        }
        for i in 0..N {
            let d: u32 = self.triples.iter().filter(|(t, _)| *t & coord_bit(N, i) != 0).map(|(_, k)| k).sum();
            if d != 4 {
                return Err(Error::Verification(format!("coordinate {} lies in {d} bitriples", i + 1)));
            }
            for j in i + 1..N {
                let p = coord_bit(N, i) | coord_bit(N, j);
                let c: u32 = self.triples.iter().filter(|(t, _)| *t & p == p).map(|(_, k)| k).sum();
                if c % 2 == 1 {
                    return Err(Error::Verification(format!("pair {{{},{}}} lies in {c} bitriples", i + 1, j + 1)));
                }
            }
        }
        Ok(())
    }

    /// `(multiplicity, number of distinct triples)`, ascending.
    pub fn multiplicity_census(&self) -> Vec<(u32, usize)> {
        let mut m: BTreeMap<u32, usize> = BTreeMap::new();
        for &k in self.triples.values() {
            *m.entry(k).or_default() += 1;
        }
        m.into_iter().collect()
    }

    fn color_classes(&self) -> Vec<Vec<u32>> {
        (1..=4).map(|k| self.triples.iter().filter(|(_, &m)| m == k).map(|(&t, _)| t).collect()).collect()
    }

    pub fn canonical(&self) -> CanonicalForm {
        coordinate_canonical(N, &self.color_classes()).expect("12 coordinates").form
    }

    pub fn automorphism_order(&self) -> u128 {
        coordinate_canonical(N, &self.color_classes()).expect("12 coordinates").order
    }

    /// Triples with 1-based coordinates, prefixed by their multiplicity.
    pub fn to_text(&self) -> String {
        let mut parts = Vec::new();
        for (&t, &k) in &self.triples {
            let c: Vec<String> = coords_of(t).iter().map(|i| (i + 1).to_string()).collect();
            let s = format!("{{{}}}", c.join(","));
            parts.push(if k == 1 { s } else { format!("{k}·{s}") });
        }
        parts.join(" ")
    }
}

/// The eight bitriples `{1,7}×{2,8}×{3,9}`.
pub fn cube_bitriples(a: [usize; 3], b: [usize; 3]) -> Vec<u32> {
    let mut out = Vec::new();
    for x in [a[0], b[0]] {
        for y in [a[1], b[1]] {
            for z in [a[2], b[2]] {
                out.push(mask_of(&[x, y, z]));
            }
        }
    }
    out
}

/// Multisets of `count` triples on `ground` with every point of `ground`
/// in exactly `degree` of them and every pair in an even number.
fn even_triple_multisets(ground: u32, count: usize, degree: u32) -> Vec<Vec<u32>> {
    let triples = subsets_of_size(ground, 3);
    let mut out = Vec::new();
    let mut cur = Vec::new();
    let mut deg = [0u32; N];
    #[allow(clippy::too_many_arguments)]
    fn rec(
        triples: &[u32],
        start: usize,
        left: usize,
        degree: u32,
        deg: &mut [u32; N],
        cur: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
        ground: u32,
    ) {
        if left == 0 {
            if coords_of(ground).iter().all(|&i| deg[i] == degree) && pairs_even(cur, ground) {
                out.push(cur.clone());
            }
            return;
        }
        for k in start..triples.len() {
            let cs = coords_of(triples[k]);
            if cs.iter().any(|&i| deg[i] == degree) {
                continue;
            }
            for &i in &cs {
                deg[i] += 1;
            }
            cur.push(triples[k]);
            rec(triples, k, left - 1, degree, deg, cur, out, ground);
            cur.pop();
            for &i in &cs {
                deg[i] -= 1;
            }
        }
    }
    rec(&triples, 0, count, degree, &mut deg, &mut cur, &mut out, ground);
    out
}

fn pairs_even(triples: &[u32], ground: u32) -> bool {
    subsets_of_size(ground, 2)
        .into_iter()
        .all(|p| triples.iter().filter(|&&t| t & p == p).count() % 2 == 0)
}

/// Loopless cubic multigraphs on 8 labeled vertices, as multiplicity lists
/// over the 28 vertex pairs.
fn cubic_multigraphs_on_8() -> Vec<Vec<(usize, usize, u32)>> {
    let pairs: Vec<(usize, usize)> = (0..8).flat_map(|i| (i + 1..8).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    let mut res = [3u32; 8];
    let mut cur = Vec::new();
    fn rec(
        pairs: &[(usize, usize)],
        k: usize,
        res: &mut [u32; 8],
        cur: &mut Vec<(usize, usize, u32)>,
        out: &mut Vec<Vec<(usize, usize, u32)>>,
    ) {
        if k == pairs.len() {
            if res.iter().all(|&r| r == 0) {
                out.push(cur.clone());
            }
            return;
        }
        let (i, j) = pairs[k];
        if j == 7 {
            // last pair for i: its residual must be taken now
            let m = res[i];
            if m <= res[j] {
                res[i] -= m;
                res[j] -= m;
                if m > 0 {
                    cur.push((i, j, m));
                }
                rec(pairs, k + 1, res, cur, out);
                if m > 0 {
                    cur.pop();
                }
                res[i] += m;
                res[j] += m;
            }
            return;
        }
        for m in 0..=res[i].min(res[j]) {
            res[i] -= m;
            res[j] -= m;
            if m > 0 {
                cur.push((i, j, m));
            }
            rec(pairs, k + 1, res, cur, out);
            if m > 0 {
                cur.pop();
            }
            res[i] += m;
            res[j] += m;
        }
    }
    rec(&pairs, 0, &mut res, &mut cur, &mut out);
    out
}

/// One class of bitriple systems.
#[derive(Clone, Debug, Serialize)]
pub struct BitripleClass {
    pub form: CanonicalForm,
    pub system: BitripleSystem,
    pub automorphism_order: u128,
    /// True when some bitriple has multiplicity 1.
    pub has_simple_bitriple: bool,
    /// For systems without a simple bitriple: how many of the eight halved
    /// triples are repeated.
    pub doubled_bibitriples: Option<usize>,
}

/// All bitriple systems up to coordinate permutation.
///
/// Systems with a bitriple of multiplicity 1 contain the eight triples
/// `{1,7}×{2,8}×{3,9}` up to relabeling; they are completed by every
/// admissible multiset of eight triples on the other six coordinates. The
/// remaining systems are twice a multiset of eight triples with every
/// coordinate in two of them, which is the edge–vertex incidence of a
/// loopless cubic multigraph on eight vertices.
pub fn enumerate_bitriple_systems() -> Vec<BitripleClass> {
    let table: DedupeTable<Vec<u32>, BitripleSystem> = DedupeTable::new();
    let cube = cube_bitriples([0, 1, 2], [6, 7, 8]);
    let rest = mask_of(&[3, 4, 5, 9, 10, 11]);
    for completion in even_triple_multisets(rest, 8, 4) {
        let s = BitripleSystem::from_masks(cube.iter().copied().chain(completion));
        let key: Vec<u32> = s.triples.iter().flat_map(|(&t, &k)| [t, k]).collect();
        table.insert(s.canonical(), key, s);
    }
    for g in cubic_multigraphs_on_8() {
        let mut incident = [0u32; 8];
        let mut e = 0;
        for &(i, j, m) in &g {
            for _ in 0..m {
                incident[i] |= coord_bit(N, e);
                incident[j] |= coord_bit(N, e);
                e += 1;
            }
        }
        let s = BitripleSystem::from_masks(incident.iter().flat_map(|&t| [t, t]));
        let key: Vec<u32> = s.triples.iter().flat_map(|(&t, &k)| [t, k]).collect();
        table.insert(s.canonical(), key, s);
    }
    table
        .into_entries()
        .into_iter()
        .map(|(form, _, system)| {
            let has_simple = system.triples.values().any(|&k| k == 1);
            let doubled = (!has_simple).then(|| system.triples.values().filter(|&&k| k == 4).count());
            BitripleClass {
                automorphism_order: system.automorphism_order(),
                form,
                system,
                has_simple_bitriple: has_simple,
                doubled_bibitriples: doubled,
            }
        })
        .collect()
}

/// 63 blocks: the zero-coordinate quadruples of the spectrum support.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CoveringSystem {
    pub blocks: Vec<u32>,
}

impl CoveringSystem {
    pub fn new(mut blocks: Vec<u32>) -> Result<CoveringSystem> {
        blocks.sort_unstable();
        blocks.dedup();
        if blocks.len() != 63 || blocks.iter().any(|b| b.count_ones() != 4 || b >> N != 0) {
            return Err(Error::InvalidParameters("a covering needs 63 distinct 4-subsets".into()));
        }
        Ok(CoveringSystem { blocks })
    }

    /// Weight-8 words of the spectrum support, ascending.
    pub fn support(&self) -> Vec<u32> {
        let mut f: Vec<u32> = self.blocks.iter().map(|b| !b & ALL).collect();
        f.sort_unstable();
        f
    }

    pub fn from_support(words: &[u32]) -> Result<CoveringSystem> {
        CoveringSystem::new(words.iter().map(|w| !w & ALL).collect())
    }

    /// How many blocks contain `mask`.
    pub fn coverage(&self, mask: u32) -> u32 {
        self.blocks.iter().filter(|&&b| b & mask == mask).count() as u32
    }

    /// Overcovering halved: triple `t` covered `1 + 2m` times gives
    /// multiplicity `m`.
    pub fn bitriples(&self) -> Result<BitripleSystem> {
        let mut triples = BTreeMap::new();
        for t in subsets_of_size(ALL, 3) {
            let c = self.coverage(t);
            if c.is_multiple_of(2) {
                return Err(Error::Verification(format!("triple {:?} covered {c} times", coords_of(t))));
            }
            if c > 1 {
                triples.insert(t, (c - 1) / 2);
            }
        }
        Ok(BitripleSystem { triples })
    }

    /// Triple accounting `63·4 = 220 + 2·16`, and every pair of coordinates
    /// in an odd number (at least 5) of blocks.
    pub fn check(&self) -> Result<()> {
        let b = self.bitriples()?;
        let over: u32 = subsets_of_size(ALL, 3).iter().map(|&t| self.coverage(t)).sum();
        if over != 4 * 63 || 220 + 2 * b.total() != over {
            return Err(Error::Verification(format!("triple coverage {over}")));
        }
        b.check()?;
        for p in subsets_of_size(ALL, 2) {
            let c = self.coverage(p);
            if c.is_multiple_of(2) || c < 5 {
                return Err(Error::Verification(format!("pair {:?} in {c} blocks", coords_of(p))));
            }
        }
        Ok(())
    }

    pub fn coordinate_canon(&self) -> crate::canonical::CoordinateCanon {
        coordinate_canonical(N, std::slice::from_ref(&self.blocks)).expect("12 coordinates")
    }
}

/// One covering class together with the bitriple class it realizes.
#[derive(Clone, Debug, Serialize)]
pub struct CoveringClass {
    pub form: CanonicalForm,
    pub covering: CoveringSystem,
    pub bitriple_class: usize,
    pub automorphism_order: u128,
}

/// Coverings of one bitriple system.
#[derive(Clone, Debug, Serialize)]
pub struct CoveringsReport {
    pub bitriple_class: usize,
    /// Labeled solutions of the exact-cover instance.
    pub labeled_solutions: u64,
    pub classes: Vec<CoveringClass>,
    /// `Σ |Aut(B)| / |Aut(T)|` over classes equals the labeled count.
    pub double_count_ok: bool,
}

/// The exact-cover instance: the 220 triples with demand `1 + 2m`, and all
/// 495 blocks as sets.
pub fn covering_instance(b: &BitripleSystem) -> (CoverInstance, Vec<u32>) {
    let triples = subsets_of_size(ALL, 3);
    let index: BTreeMap<u32, usize> = triples.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let demand = triples.iter().map(|&t| 1 + 2 * b.multiplicity(t)).collect();
    let quads = subsets_of_size(ALL, 4);
    let sets = quads
        .iter()
        .map(|&q| subsets_of_size(q, 3).iter().map(|t| index[t]).collect())
        .collect();
    (CoverInstance::new(demand, sets).expect("well-formed instance"), quads)
}

pub fn coverings_for(class_index: usize, class: &BitripleClass) -> CoveringsReport {
    let (inst, quads) = covering_instance(&class.system);
    let table: DedupeTable<Vec<u32>, u128> = DedupeTable::new();
    let mut found = Vec::new();
    let labeled = inst.solve_all(|sol| found.push(sol.iter().map(|&j| quads[j]).collect::<Vec<u32>>()));
    let canons: Vec<(Vec<u32>, crate::canonical::CoordinateCanon)> = found
        .into_par_iter()
        .map(|blocks| {
            let c = CoveringSystem::new(blocks.clone()).expect("63 blocks").coordinate_canon();
            (blocks, c)
        })
        .collect();
    for (blocks, c) in canons {
        table.insert(c.form, blocks, c.order);
    }
    let classes: Vec<CoveringClass> = table
        .into_entries()
        .into_iter()
        .map(|(form, blocks, order)| CoveringClass {
            form,
            covering: CoveringSystem { blocks },
            bitriple_class: class_index,
            automorphism_order: order,
        })
        .collect();
    let orders: Vec<u128> = classes.iter().map(|c| c.automorphism_order).collect();
    let double_count_ok =
        crate::canonical::double_count(class.automorphism_order, &orders, labeled as u128);
    CoveringsReport { bitriple_class: class_index, labeled_solutions: labeled, classes, double_count_ok }
}

/// `p(x)`: unordered pairs `{y, z}` of distinct support words with
/// `y + z = x`, for every `x`.
pub fn pair_counts(support: &[u32]) -> Vec<u32> {
    let mut p = vec![0u32; 1 << N];
    for (i, &y) in support.iter().enumerate() {
        for &z in &support[i + 1..] {
            p[(y ^ z) as usize] += 1;
        }
    }
    p
}

/// The parity of `p(x)` equals `[x ∈ F]` for every `x`.
pub fn parity_filter(c: &CoveringSystem) -> bool {
    let f = c.support();
    let inside: BTreeSet<u32> = f.iter().copied().collect();
    pair_counts(&f)
        .iter()
        .enumerate()
        .all(|(x, &p)| (p % 2 == 1) == inside.contains(&(x as u32)))
}

/// The GF(2) system on the 63 sign bits `φ`, one equation per `x ≠ 0`
/// whose left side is not identically zero.
#[derive(Clone, Debug)]
pub struct SignSystem {
    pub support: Vec<u32>,
    pub matrix: Gf2Matrix,
    pub rhs: Vec<bool>,
}

pub fn build_sign_system(c: &CoveringSystem) -> Result<SignSystem> {
    if !parity_filter(c) {
        return Err(Error::Precondition("support fails the parity condition".into()));
    }
    let f = c.support();
    let index: BTreeMap<u32, usize> = f.iter().enumerate().map(|(i, &w)| (w, i)).collect();
    let mut rows: Vec<(Gf2Vector, u32)> = vec![(Gf2Vector::zeros(f.len()), 0); 1 << N];
    for (i, &y) in f.iter().enumerate() {
        for (j, &z) in f.iter().enumerate().skip(i + 1) {
            let r = &mut rows[(y ^ z) as usize];
            r.0.flip(i);
            r.0.flip(j);
            r.1 += 1;
        }
    }
    let mut matrix = Gf2Matrix::new(f.len());
    let mut rhs = Vec::new();
    for (x, (mut row, p)) in rows.into_iter().enumerate().skip(1) {
        if let Some(&k) = index.get(&(x as u32)) {
            row.flip(k);
        }
        let b = (p / 2) % 2 == 1;
        if row.is_zero() {
            if b {
                // 0 = 1: keep the row so the system is reported inconsistent
                matrix.push_row(row)?;
                rhs.push(true);
            }
            continue;
        }
        matrix.push_row(row)?;
        rhs.push(b);
    }
    Ok(SignSystem { support: f, matrix, rhs })
}

/// `ψ_i(v) = v_i` on the support.
pub fn psi(support: &[u32], i: usize) -> Gf2Vector {
    Gf2Vector::from_bools(&support.iter().map(|&w| w & coord_bit(N, i) != 0).collect::<Vec<_>>())
}

/// Function values for the signs `φ` on the support, or `None` when some
/// value is outside `{9, -7}`.
pub fn partition_from_signs(support: &[u32], phi: &Gf2Vector) -> Option<VertexSet> {
    let mut coeffs = vec![0i64; 1 << N];
    for (k, &w) in support.iter().enumerate() {
        coeffs[w as usize] = if phi.get(k) { -(1 << N) } else { 1 << N };
    }
    let ft = IntegerSpectrum::new(N, coeffs).ok()?;
    let f = inverse_wht(&ft).ok()?;
    if f.values().iter().any(|&v| v != 9 && v != -7) {
        return None;
    }
    VertexSet::from_fn(N, |x| f.values()[x as usize] == 9).ok()
}

/// Result of the sign stage for one parity survivor.
#[derive(Clone, Debug, Serialize)]
pub struct SignCase {
    pub covering_form: CanonicalForm,
    pub consistent: bool,
    /// One sign per support word.
    pub unknowns: usize,
    pub equations: usize,
    pub rank: usize,
    pub psi_span_dim: usize,
    pub cosets: u64,
    pub accepted: usize,
    /// First cells of the accepted representatives, in coset order.
    #[serde(skip)]
    pub partitions: Vec<VertexSet>,
}

pub fn solve_signs(c: &CoveringSystem) -> Result<SignCase> {
    let sys = build_sign_system(c)?;
    let sol = sys.matrix.solve(&sys.rhs)?;
    let form = c.coordinate_canon().form;
    let mut psis: Vec<(usize, Gf2Vector)> = Vec::new();
    for i in 0..N {
        insert_into_basis(&mut psis, psi(&sys.support, i));
    }
    let Some(particular) = sol.particular else {
        return Ok(SignCase {
            covering_form: form,
            consistent: false,
            unknowns: sys.support.len(),
            equations: sys.matrix.nrows(),
            rank: sol.rank,
            psi_span_dim: psis.len(),
            cosets: 0,
            accepted: 0,
            partitions: Vec::new(),
        });
    };
    for (_, p) in &psis {
        if sys.matrix.mul_vec(p).iter().any(|&b| b) {
            return Err(Error::Verification("ψ_i does not solve the homogeneous system".into()));
        }
    }
    // complement of the ψ-span inside the kernel
    let mut basis = psis.clone();
    let mut complement = Vec::new();
    for k in &sol.kernel {
        if insert_into_basis(&mut basis, k.clone()) {
            complement.push(k.clone());
        }
    }
    let mut start = particular;
    reduce(&psis, &mut start);
    let reps: Vec<Gf2Vector> = (0u64..1 << complement.len())
        .map(|mask| {
            let mut v = start.clone();
            for (b, k) in complement.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    v.xor_assign(k);
                }
            }
            v
        })
        .collect();
    let partitions: Vec<VertexSet> = reps
        .par_iter()
        .filter_map(|phi| partition_from_signs(&sys.support, phi))
        .collect();
    Ok(SignCase {
        covering_form: form,
        consistent: true,
        unknowns: sys.support.len(),
        equations: sys.matrix.nrows(),
        rank: sol.rank,
        psi_span_dim: psis.len(),
        cosets: reps.len() as u64,
        accepted: partitions.len(),
        partitions,
    })
}

/// One final class.
#[derive(Clone, Debug, Serialize)]
pub struct PartitionClass {
    pub form: CanonicalForm,
    #[serde(skip)]
    pub first_cell: VertexSet,
    pub automorphism_order: u128,
    /// Index into the sign cases that produced it.
    pub sign_case: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub bitriple_classes: usize,
    pub realizable_bitriple_classes: Vec<(usize, usize)>,
    pub covering_classes: usize,
    pub coverings_double_count_ok: bool,
    pub parity_survivors: usize,
    pub survivors_all_simple_cube_type: bool,
    pub sign_cases: Vec<SignCase>,
    /// Within each consistent case all accepted partitions are equivalent.
    pub cases_homogeneous: bool,
    /// `accepted · 2^dim ψ = |Aut(F)| · 2^12 / |Aut(P)|` in each case.
    pub final_double_count_ok: bool,
    pub classes: Vec<PartitionClass>,
}

/// Stage outputs kept for reporting.
#[derive(Clone, Debug)]
pub struct Pipeline {
    pub bitriples: Vec<BitripleClass>,
    pub coverings: Vec<CoveringsReport>,
    pub survivors: Vec<CoveringClass>,
    pub sign_cases: Vec<SignCase>,
}

pub fn all_coverings(bitriples: &[BitripleClass]) -> Vec<CoveringsReport> {
    bitriples.iter().enumerate().map(|(i, b)| coverings_for(i, b)).collect()
}

pub fn parity_survivors(coverings: &[CoveringsReport]) -> Vec<CoveringClass> {
    coverings
        .iter()
        .flat_map(|r| r.classes.iter())
        .filter(|c| parity_filter(&c.covering))
        .cloned()
        .collect()
}

pub fn run_stages() -> Result<Pipeline> {
    let bitriples = enumerate_bitriple_systems();
    let coverings = all_coverings(&bitriples);
    let survivors = parity_survivors(&coverings);
    let sign_cases = survivors.iter().map(|c| solve_signs(&c.covering)).collect::<Result<Vec<_>>>()?;
    Ok(Pipeline { bitriples, coverings, survivors, sign_cases })
}

/// Runs every stage and verifies each accepted partition.
pub fn run_pipeline() -> Result<PipelineReport> {
    let p = run_stages()?;
    finish(p)
}

pub fn finish(p: Pipeline) -> Result<PipelineReport> {
    let mut realizable = Vec::new();
    for r in &p.coverings {
        if !r.classes.is_empty() {
            realizable.push((r.bitriple_class, r.classes.len()));
        }
    }
    let survivors_simple = p.survivors.iter().all(|c| {
        let b = &p.bitriples[c.bitriple_class].system;
        b.triples.len() == 16 && b.triples.values().all(|&k| k == 1)
    });
    let mut classes: BTreeMap<CanonicalForm, PartitionClass> = BTreeMap::new();
    let mut homogeneous = true;
    let mut dc_ok = true;
    for (ci, case) in p.sign_cases.iter().enumerate() {
        let mut forms = BTreeSet::new();
        let mut aut_order = 0;
        for s in &case.partitions {
            if quotient_matrix(s)? != MATRIX {
                return Err(Error::Verification("accepted signs give a wrong quotient matrix".into()));
            }
            let fc = full_canonical(N, &[s.words()])?;
            aut_order = fc.order;
            forms.insert(fc.form.clone());
            classes.entry(fc.form.clone()).or_insert(PartitionClass {
                form: fc.form,
                first_cell: s.clone(),
                automorphism_order: fc.order,
                sign_case: ci,
            });
        }
        homogeneous &= forms.len() <= 1;
        if case.accepted > 0 {
            let aut_f = p.survivors[ci].automorphism_order;
            let labeled = (case.accepted as u128) << case.psi_span_dim;
            dc_ok &= crate::canonical::double_count(aut_f << N, &[aut_order], labeled);
        }
    }
    Ok(PipelineReport {
        bitriple_classes: p.bitriples.len(),
        realizable_bitriple_classes: realizable,
        covering_classes: p.coverings.iter().map(|r| r.classes.len()).sum(),
        coverings_double_count_ok: p.coverings.iter().all(|r| r.double_count_ok),
        parity_survivors: p.survivors.len(),
        survivors_all_simple_cube_type: survivors_simple,
        sign_cases: p.sign_cases,
        cases_homogeneous: homogeneous,
        final_double_count_ok: dc_ok,
        classes: classes.into_values().collect(),
    })
}
