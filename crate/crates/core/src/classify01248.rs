//! Classification of the equitable partitions of `Q_12` with quotient matrix
//! `[[0,12],[4,8]]` by local extension.
//!
//! An `r`-local partition fixes the cell of every word of weight at most
//! `r` so that every word of weight below `r` already sees the right
//! neighbour counts. Radius 2 comes from cubic graphs, radii 3 and 4 from
//! exact covers, and the remaining words are filled in from the zero sums
//! over 5-faces.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::canonical::{
    coordinate_canonical, cube_group_order, double_count, full_canonical, graph_canonical, CanonicalForm,
    DedupeTable, SimpleGraph,
};
use crate::cube::{affine_rank, coord_bit, VertexSet};
use crate::error::{Error, Result};
use crate::exact_cover::CoverInstance;
use crate::spectral::{correlation_immunity_order, quotient_matrix, QuotientMatrix};

pub const N: usize = 12;
pub const MATRIX: QuotientMatrix = QuotientMatrix { a: 0, b: 12, c: 4, d: 8 };
const ALL: u32 = (1 << N) - 1;

/// `12!`, the order of the coordinate permutation group.
pub fn coordinate_group_order() -> u128 {
    (1..=N as u128).product()
}

/// Which cell holds the all-zero word.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub enum Origin {
    P0,
    P1,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LocalPartition {
    pub radius: usize,
    /// Words of weight at most `radius` in the first cell.
    pub p0: VertexSet,
}

impl LocalPartition {
    pub fn new(radius: usize, words: impl IntoIterator<Item = u32>) -> Result<LocalPartition> {
        if radius > N {
            return Err(Error::InvalidParameters(format!("radius {radius} exceeds {N}")));
        }
        let p0 = VertexSet::from_words(N, words)?;
        if p0.iter().any(|v| v.weight() as usize > radius) {
            return Err(Error::InvalidParameters(format!("a word lies beyond radius {radius}")));
        }
        Ok(LocalPartition { radius, p0 })
    }

    pub fn origin(&self) -> Origin {
        if self.p0.contains_word(0) {
            Origin::P0
        } else {
            Origin::P1
        }
    }

    pub fn in_p0(&self, x: u32) -> bool {
        self.p0.contains_word(x)
    }

    /// Neighbour counts of every word of weight below the radius.
    pub fn check(&self) -> Result<()> {
        for x in 0..=ALL {
            if x.count_ones() as usize >= self.radius {
                continue;
            }
            let k = (0..N).filter(|&i| self.in_p0(x ^ coord_bit(N, i))).count() as u32;
            let need = if self.in_p0(x) { MATRIX.a } else { MATRIX.c };
            if k != need {
                return Err(Error::NotEquitable { vertex: x, cell: usize::from(!self.in_p0(x)) });
            }
        }
        Ok(())
    }

    pub fn canon(&self) -> crate::canonical::CoordinateCanon {
        coordinate_canonical(N, &[self.p0.words()]).expect("12 coordinates")
    }
}

/// Number of labeled `k`-regular simple graphs on `v` vertices.
///
/// The state is the number of vertices with each residual degree; one
/// vertex of largest residual takes all its remaining neighbours at once.
pub fn labeled_regular_graphs(v: usize, k: usize) -> u128 {
    fn binom(n: usize, r: usize) -> u128 {
        if r > n {
            return 0;
        }
        (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
    }
    fn count(state: Vec<usize>, memo: &mut HashMap<Vec<usize>, u128>) -> u128 {
        let Some(r) = (1..state.len()).rev().find(|&r| state[r] > 0) else {
            return 1;
        };
        if let Some(&c) = memo.get(&state) {
            return c;
        }
        let mut pool = state.clone();
        pool[r] -= 1;
        let mut total = 0u128;
        // a[j]: how many neighbours come from residual class j + 1
        let mut a = vec![0usize; state.len() - 1];
        fn split(
            j: usize,
            left: usize,
            a: &mut Vec<usize>,
            pool: &[usize],
            total: &mut u128,
            memo: &mut HashMap<Vec<usize>, u128>,
        ) {
            if j == a.len() {
                if left > 0 {
                    return;
                }
                let mut ways = 1u128;
                let mut next = pool.to_vec();
                next[0] += 1;
                for (i, &t) in a.iter().enumerate() {
                    ways *= binom(pool[i + 1], t);
                    next[i + 1] -= t;
                    next[i] += t;
                }
                if ways > 0 {
                    *total += ways * count(next, memo);
                }
                return;
            }
            for t in 0..=left.min(pool[j + 1]) {
                a[j] = t;
                split(j + 1, left - t, a, pool, total, memo);
            }
            a[j] = 0;
        }
        split(0, r, &mut a, &pool, &mut total, memo);
        memo.insert(state, total);
        total
    }
    let mut state = vec![0usize; k + 1];
    state[k] = v;
    count(state, &mut HashMap::new())
}

/// Connected cubic graphs on `v` vertices, one per isomorphism class.
///
/// Vertices are completed in index order; a vertex's new neighbours are
/// chosen in increasing order and an untouched vertex is always the next
/// fresh index, so only connected labelings in breadth order arise.
pub fn connected_cubic_graphs(v: usize) -> Result<Vec<SimpleGraph>> {
    if v % 2 == 1 || !(4..=16).contains(&v) {
        return Err(Error::InvalidParameters(format!("cubic graphs need an even order 4..=16, got {v}")));
    }
    struct St {
        v: usize,
        g: SimpleGraph,
        touched: usize,
        found: Vec<SimpleGraph>,
    }
    fn rec(st: &mut St, u: usize, lo: usize) {
        let u = match (u..st.v).find(|&x| st.g.degree(x) < 3) {
            Some(x) if x < st.touched => x,
            Some(_) => return,
            None => {
                st.found.push(st.g.clone());
                return;
            }
        };
        // `lo` bounds the next neighbour of the same vertex
        let lo = if lo > u { lo } else { u + 1 };
        let candidates: Vec<usize> = (lo..st.touched.min(st.v))
            .filter(|&w| st.g.degree(w) < 3 && !st.g.has_edge(u, w))
            .chain((st.touched < st.v && st.touched >= lo).then_some(st.touched))
            .collect();
        for w in candidates {
            let fresh = w == st.touched;
            st.g.add_edge(u, w).expect("valid edge");
            if fresh {
                st.touched += 1;
            }
            if st.g.degree(u) == 3 {
                rec(st, u + 1, 0);
            } else {
                rec(st, u, w + 1);
            }
            if fresh {
                st.touched -= 1;
            }
            st.g.remove_edge(u, w);
        }
    }
    let mut st = St { v, g: SimpleGraph::new(v)?, touched: 1, found: Vec::new() };
    rec(&mut st, 0, 0);
    let table: DedupeTable<Vec<(usize, usize)>, SimpleGraph> = DedupeTable::new();
    for g in st.found {
        table.insert(graph_canonical(&g).form, g.edges(), g);
    }
    Ok(table.into_entries().into_iter().map(|(_, _, g)| g).collect())
}

fn disjoint_union(parts: &[&SimpleGraph]) -> SimpleGraph {
    let v: usize = parts.iter().map(|g| g.order()).sum();
    let mut out = SimpleGraph::new(v).expect("at most 16 vertices");
    let mut off = 0;
    for g in parts {
        for (a, b) in g.edges() {
            out.add_edge(a + off, b + off).expect("valid edge");
        }
        off += g.order();
    }
    out
}

#[derive(Clone, Debug)]
pub struct CubicGraphCatalog {
    pub order: usize,
    /// Connected classes per even order up to `order`.
    pub connected: BTreeMap<usize, Vec<SimpleGraph>>,
    /// All classes on `order` vertices, connected or not.
    pub all: Vec<SimpleGraph>,
}

impl CubicGraphCatalog {
    pub fn connected_count(&self, v: usize) -> usize {
        self.connected.get(&v).map_or(0, Vec::len)
    }
}

/// Every cubic graph on `v` vertices; disconnected ones are multisets of
/// connected components.
pub fn enumerate_cubic_graphs(v: usize) -> Result<CubicGraphCatalog> {
    if v % 2 == 1 || !(4..=16).contains(&v) {
        return Err(Error::InvalidParameters(format!("cubic graphs need an even order 4..=16, got {v}")));
    }
    let mut connected = BTreeMap::new();
    for k in (4..=v).step_by(2) {
        connected.insert(k, connected_cubic_graphs(k)?);
    }
    let comps: Vec<&SimpleGraph> = connected.values().flatten().collect();
    let mut all = Vec::new();
    fn pick<'a>(
        comps: &[&'a SimpleGraph],
        start: usize,
        left: usize,
        cur: &mut Vec<&'a SimpleGraph>,
        out: &mut Vec<SimpleGraph>,
    ) {
        if left == 0 {
            out.push(disjoint_union(cur));
            return;
        }
        for i in start..comps.len() {
            if comps[i].order() <= left {
                cur.push(comps[i]);
                pick(comps, i, left - comps[i].order(), cur, out);
                cur.pop();
            }
        }
    }
    pick(&comps, 0, v, &mut Vec::new(), &mut all);
    Ok(CubicGraphCatalog { order: v, connected, all })
}

/// A local partition class with its coordinate automorphism group order.
#[derive(Clone, Debug)]
pub struct LocalClass {
    pub form: CanonicalForm,
    pub partition: LocalPartition,
    pub automorphism_order: u128,
}

impl LocalClass {
    fn from_partition(partition: LocalPartition) -> LocalClass {
        let c = partition.canon();
        LocalClass { form: c.form, partition, automorphism_order: c.order }
    }
}

/// 2-local partition from a cubic graph. With `0 ∈ P0` the graph lives on
/// the twelve unit words and its edges are the weight-2 words of `P0`.
/// With `0 ∈ P1` the graph lives on the unit words of the first eight
/// coordinates, the last four unit words are in `P0`, and the weight-2
/// words of `P0` are the non-edges.
pub fn two_local_from_graph(origin: Origin, g: &SimpleGraph) -> Result<LocalPartition> {
    let words: Vec<u32> = match origin {
        Origin::P0 => {
            if g.order() != N {
                return Err(Error::InvalidParameters("need a cubic graph on 12 vertices".into()));
            }
            std::iter::once(0)
                .chain(g.edges().into_iter().map(|(a, b)| coord_bit(N, a) | coord_bit(N, b)))
                .collect()
        }
        Origin::P1 => {
            if g.order() != 8 {
                return Err(Error::InvalidParameters("need a cubic graph on 8 vertices".into()));
            }
            let c = g.complement();
            (8..N)
                .map(|i| coord_bit(N, i))
                .chain(c.edges().into_iter().map(|(a, b)| coord_bit(N, a) | coord_bit(N, b)))
                .collect()
        }
    };
    let l = LocalPartition::new(2, words)?;
    l.check()?;
    Ok(l)
}

/// One stage of a chain.
#[derive(Clone, Debug, Serialize)]
pub struct StageReport {
    pub origin: Origin,
    pub radius: usize,
    pub classes: usize,
    /// Labeled partitions, `Σ 12! / |Aut|` over the classes.
    pub labeled: u128,
    /// Labeled partitions counted independently (graph count or the sum
    /// of cover solutions over parents).
    pub labeled_direct: u128,
    pub double_count_ok: bool,
}

fn labeled_from_classes(classes: &[LocalClass]) -> u128 {
    classes.iter().map(|c| coordinate_group_order() / c.automorphism_order).sum()
}

/// The 2-local classes for one origin, with the labeled double count.
pub fn two_local_partitions(origin: Origin) -> Result<(Vec<LocalClass>, StageReport)> {
    let (catalog, direct) = match origin {
        Origin::P0 => (enumerate_cubic_graphs(12)?, labeled_regular_graphs(12, 3)),
        Origin::P1 => (enumerate_cubic_graphs(8)?, 495 * labeled_regular_graphs(8, 3)),
    };
    let table: DedupeTable<Vec<u32>, LocalClass> = DedupeTable::new();
    for g in &catalog.all {
        let c = LocalClass::from_partition(two_local_from_graph(origin, g)?);
        table.insert(c.form.clone(), c.partition.p0.words(), c);
    }
    let classes: Vec<LocalClass> = table.into_entries().into_iter().map(|e| e.2).collect();
    if classes.len() != catalog.all.len() {
        return Err(Error::Verification("non-isomorphic graphs gave equivalent local partitions".into()));
    }
    let labeled = labeled_from_classes(&classes);
    let report = StageReport {
        origin,
        radius: 2,
        classes: classes.len(),
        labeled,
        labeled_direct: direct,
        double_count_ok: labeled == direct,
    };
    Ok((classes, report))
}

/// `Cov(P0, P1)`: points are the weight-`r` words of `P1` with demand
/// `4 - λ`; every weight-`(r+1)` word with no neighbour in `P0` gives the
/// set of its weight-`r` neighbours. Returns the instance and the word of
/// each set.
pub fn extension_instance(l: &LocalPartition) -> Result<(CoverInstance, Vec<u32>)> {
    let r = l.radius;
    if r >= N {
        return Err(Error::InvalidParameters("nothing left to extend".into()));
    }
    let points: Vec<u32> = (0..=ALL).filter(|x| x.count_ones() as usize == r && !l.in_p0(*x)).collect();
    let index: BTreeMap<u32, usize> = points.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut demand = Vec::with_capacity(points.len());
    for &x in &points {
        let lambda = (0..N).filter(|&i| x & coord_bit(N, i) != 0 && l.in_p0(x ^ coord_bit(N, i))).count() as u32;
        if lambda > MATRIX.c {
            return Err(Error::Precondition(format!("word {x:#05x} already has {lambda} neighbours in P0")));
        }
        demand.push(MATRIX.c - lambda);
    }
    let mut sets = Vec::new();
    let mut words = Vec::new();
    for y in (0..=ALL).filter(|y| y.count_ones() as usize == r + 1) {
        let below: Vec<u32> = (0..N).filter(|&i| y & coord_bit(N, i) != 0).map(|i| y ^ coord_bit(N, i)).collect();
        if below.iter().any(|&z| l.in_p0(z)) {
            continue;
        }
        sets.push(below.iter().map(|z| index[z]).collect());
        words.push(y);
    }
    Ok((CoverInstance::new(demand, sets)?, words))
}

/// Extensions of one local partition by one radius.
#[derive(Clone, Debug)]
pub struct Extension {
    pub labeled: u64,
    pub children: Vec<LocalClass>,
    /// `Σ |Aut(L)| / |Aut(R)|` over children equals the labeled count.
    pub double_count_ok: bool,
}

pub fn extend_local(parent: &LocalClass) -> Result<Extension> {
    let l = &parent.partition;
    let (inst, words) = extension_instance(l)?;
    let mut found: Vec<Vec<u32>> = Vec::new();
    let labeled = inst.solve_all(|sol| found.push(sol.iter().map(|&j| words[j]).collect()));
    let base = l.p0.words();
    let table: DedupeTable<Vec<u32>, LocalClass> = DedupeTable::new();
    found.into_par_iter().for_each(|added| {
        let child = LocalPartition::new(l.radius + 1, base.iter().copied().chain(added.iter().copied()))
            .expect("words within radius");
        let c = LocalClass::from_partition(child);
        table.insert(c.form.clone(), added, c);
    });
    let children: Vec<LocalClass> = table.into_entries().into_iter().map(|e| e.2).collect();
    let orders: Vec<u128> = children.iter().map(|c| c.automorphism_order).collect();
    let double_count_ok = double_count(parent.automorphism_order, &orders, labeled as u128);
    Ok(Extension { labeled, children, double_count_ok })
}

/// Extends every class of one radius and merges the children.
pub fn extend_stage(origin: Origin, parents: &[LocalClass]) -> Result<(Vec<LocalClass>, StageReport)> {
    let mut all: BTreeMap<CanonicalForm, LocalClass> = BTreeMap::new();
    let mut direct: u128 = 0;
    let mut ok = true;
    let radius = parents.first().map_or(0, |p| p.partition.radius + 1);
    for p in parents {
        let e = extend_local(p)?;
        ok &= e.double_count_ok;
        direct += e.labeled as u128 * (coordinate_group_order() / p.automorphism_order);
        for c in e.children {
            if all.insert(c.form.clone(), c).is_some() {
                // a child determines its parent, so classes cannot repeat
                ok = false;
            }
        }
    }
    let classes: Vec<LocalClass> = all.into_values().collect();
    for c in &classes {
        c.partition.check()?;
    }
    let labeled = labeled_from_classes(&classes);
    let report = StageReport {
        origin,
        radius,
        classes: classes.len(),
        labeled,
        labeled_direct: direct,
        double_count_ok: ok && labeled == direct,
    };
    Ok((classes, report))
}

/// Local classes at radii 2 up to `radius` for one origin.
pub fn run_chain(origin: Origin, radius: usize) -> Result<(Vec<Vec<LocalClass>>, Vec<StageReport>)> {
    if !(2..=4).contains(&radius) {
        return Err(Error::InvalidParameters(format!("radius must be 2, 3 or 4, got {radius}")));
    }
    let (two, rep) = two_local_partitions(origin)?;
    let mut stages = vec![two];
    let mut reports = vec![rep];
    while stages.len() + 1 < radius {
        let (next, rep) = extend_stage(origin, stages.last().expect("nonempty"))?;
        stages.push(next);
        reports.push(rep);
    }
    Ok((stages, reports))
}

/// Fills in the words of weight 5 and more from the zero sum over a 5-face
/// `x + ⟨s⟩` with `s ≼ x` of weight 5: `f(x) = -Σ_{0 ≠ t ≼ s} f(x + t)`.
/// The first five one-coordinates of `x` give `s`; the last five are used as
/// a cross-check.
pub fn reconstruct_full(l: &LocalPartition) -> Result<VertexSet> {
    if l.radius != 4 {
        return Err(Error::Precondition(format!("reconstruction needs radius 4, got {}", l.radius)));
    }
    let (hi, lo) = (12i64, -4i64);
    let mut f = vec![0i64; 1 << N];
    let mut order: Vec<u32> = (0..=ALL).collect();
    order.sort_by_key(|x| (x.count_ones(), *x));
    let face_value = |f: &[i64], x: u32, s: u32| -> i64 {
        let mut sum = 0;
        let mut t = s;
        while t != 0 {
            sum += f[(x ^ t) as usize];
            t = (t - 1) & s;
        }
        -sum
    };
    for x in order {
        if x.count_ones() <= 4 {
            f[x as usize] = if l.in_p0(x) { hi } else { lo };
            continue;
        }
        let ones: Vec<u32> = (0..N).map(|i| coord_bit(N, i)).filter(|b| x & b != 0).collect();
        let first: u32 = ones[..5].iter().fold(0, |a, b| a | b);
        let last: u32 = ones[ones.len() - 5..].iter().fold(0, |a, b| a | b);
        let v = face_value(&f, x, first);
        if v != hi && v != lo {
            return Err(Error::Verification(format!("word {x:#05x} gets value {v}")));
        }
        if face_value(&f, x, last) != v {
            return Err(Error::Verification(format!("word {x:#05x} depends on the chosen face")));
        }
        f[x as usize] = v;
    }
    let p0 = VertexSet::from_fn(N, |x| f[x as usize] == hi)?;
    let m = quotient_matrix(&p0)?;
    if m != MATRIX {
        return Err(Error::Verification(format!("reconstruction has matrix {m}")));
    }
    Ok(p0)
}

#[derive(Clone, Debug, Serialize)]
pub struct FinalClass {
    pub form: CanonicalForm,
    #[serde(skip)]
    pub p0: VertexSet,
    pub automorphism_order: u128,
    pub affine_rank: usize,
    pub correlation_immunity: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct FinalReport {
    pub stages: Vec<StageReport>,
    /// Every 4-local class completed.
    pub all_completed: bool,
    pub failures: Vec<String>,
    /// Final classes per origin.
    pub classes_by_origin: BTreeMap<String, usize>,
    /// The chains from both origins give the same classes.
    pub chains_agree: bool,
    /// `(affine rank, count)` ascending.
    pub rank_census: Vec<(usize, usize)>,
    /// Labeled 4-local partitions equal labeled complete partitions with
    /// the zero word in the matching cell.
    pub final_double_count_ok: bool,
    pub classes: Vec<FinalClass>,
}

/// Completes every 4-local class of one origin; returns the classes found
/// and the completion failures.
pub fn complete_all(four: &[LocalClass]) -> (BTreeMap<CanonicalForm, FinalClass>, Vec<String>) {
    let results: Vec<std::result::Result<VertexSet, String>> = four
        .par_iter()
        .map(|c| reconstruct_full(&c.partition).map_err(|e| format!("{}: {e}", c.form.digest())))
        .collect();
    let mut out = BTreeMap::new();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(p0) => {
                let fc = full_canonical(N, &[p0.words()]).expect("valid set");
                out.entry(fc.form.clone()).or_insert_with(|| FinalClass {
                    form: fc.form,
                    affine_rank: affine_rank(&p0).expect("nonempty"),
                    correlation_immunity: correlation_immunity_order(&p0).expect("proper"),
                    p0,
                    automorphism_order: fc.order,
                });
            }
            Err(e) => failures.push(e),
        }
    }
    (out, failures)
}

/// `Σ |Aut(Q_12)| / |Aut(P)| · |cell| / 2^12` labeled partitions with the
/// zero word in the given cell.
fn labeled_complete(classes: &BTreeMap<CanonicalForm, FinalClass>, origin: Origin) -> Option<u128> {
    let g = cube_group_order(N);
    let mut total = 0u128;
    for c in classes.values() {
        let cell = match origin {
            Origin::P0 => c.p0.len(),
            Origin::P1 => (1 << N) - c.p0.len(),
        } as u128;
        let labeled = g / c.automorphism_order * cell;
        if !labeled.is_multiple_of(1 << N) {
            return None;
        }
        total += labeled >> N;
    }
    Some(total)
}

pub fn classify_final(origins: &[Origin]) -> Result<FinalReport> {
    let mut stages = Vec::new();
    let mut failures = Vec::new();
    let mut per_origin: BTreeMap<Origin, BTreeMap<CanonicalForm, FinalClass>> = BTreeMap::new();
    let mut dc_ok = true;
    for &origin in origins {
        let (chain, reports) = run_chain(origin, 4)?;
        let four = chain.last().expect("radius 4");
        let labeled_four = labeled_from_classes(four);
        stages.extend(reports);
        let (classes, fails) = complete_all(four);
        dc_ok &= fails.is_empty() && labeled_complete(&classes, origin) == Some(labeled_four);
        failures.extend(fails);
        per_origin.insert(origin, classes);
    }
    let forms: Vec<BTreeSet<&CanonicalForm>> = per_origin.values().map(|m| m.keys().collect()).collect();
    let chains_agree = forms.windows(2).all(|w| w[0] == w[1]);
    let mut merged: BTreeMap<CanonicalForm, FinalClass> = BTreeMap::new();
    for m in per_origin.values() {
        for (k, v) in m {
            merged.entry(k.clone()).or_insert_with(|| v.clone());
        }
    }
    let mut census: BTreeMap<usize, usize> = BTreeMap::new();
    for c in merged.values() {
        *census.entry(c.affine_rank).or_default() += 1;
    }
    Ok(FinalReport {
        stages,
        all_completed: failures.is_empty(),
        failures,
        classes_by_origin: per_origin.iter().map(|(o, m)| (format!("{o:?}"), m.len())).collect(),
        chains_agree,
        rank_census: census.into_iter().collect(),
        final_double_count_ok: dc_ok,
        classes: merged.into_values().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labeled_regular_counts() {
        assert_eq!(labeled_regular_graphs(4, 3), 1);
        assert_eq!(labeled_regular_graphs(6, 3), 70);
        assert_eq!(labeled_regular_graphs(8, 3), 19355);
        assert_eq!(labeled_regular_graphs(5, 2), 12);
        assert_eq!(labeled_regular_graphs(8, 4), 19355);
    }

    #[test]
    fn small_cubic_catalogs() {
        let c = enumerate_cubic_graphs(8).unwrap();
        assert_eq!(c.connected_count(4), 1);
        assert_eq!(c.connected_count(6), 2);
        assert_eq!(c.connected_count(8), 5);
        assert_eq!(c.all.len(), 6);
        let total: u128 = c
            .all
            .iter()
            .map(|g| 40320 / graph_canonical(g).order)
            .sum();
        assert_eq!(total, 19355);
    }

    #[test]
    fn one_local_extends_to_two_local() {
        // from ({e9..e12}, rest) the cover solutions are the 4-regular
        // graphs on the other eight unit words
        let l = LocalPartition::new(1, (8..N).map(|i| coord_bit(N, i))).unwrap();
        l.check().unwrap();
        let (inst, _) = extension_instance(&l).unwrap();
        assert_eq!(inst.count_solutions(), 19355);
    }

    #[test]
    fn check_detects_bad_neighbourhoods() {
        let l = LocalPartition::new(1, [0u32]).unwrap();
        assert!(l.check().is_ok());
        let bad = LocalPartition::new(2, [0u32]).unwrap();
        assert!(bad.check().is_err());
    }
}
