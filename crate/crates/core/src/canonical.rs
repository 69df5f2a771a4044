//! Canonical forms and automorphism groups of vertex colorings of `Q_n`.
//!
//! Coordinate permutations are handled by individualization and refinement
//! on the coordinates: a word's profile is its color together with its
//! number of ones in every coordinate cell, and coordinates are split by the
//! multiset of profiles of the marked words containing them. Translations
//! are handled by moving each candidate vertex of a distinguished color class
//! to `0` and taking the least coordinate-canonical certificate.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::cube::{check_dim, coord_bit, CubeAutomorphism, Vertex, VertexSet, WordPermuter};
use crate::error::{Error, Result};
use crate::perm::{self, orbit_reps, Perm, StabChain};

const CERT_VERSION: u8 = 1;

/// Byte string identifying an isomorphism class. Serialized as hex.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(pub Vec<u8>);

impl Serialize for CanonicalForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for CanonicalForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        CanonicalForm::from_hex(&s).ok_or_else(|| serde::de::Error::custom("canonical form is not hex"))
    }
}

impl CanonicalForm {
    pub fn bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(s: &str) -> Option<CanonicalForm> {
        if !s.len().is_multiple_of(2) || !s.is_ascii() {
            return None;
        }
        (0..s.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(&s[i..i + 2], 16).ok())
            .collect::<Option<Vec<u8>>>()
            .map(CanonicalForm)
    }

    /// Short stable digest for reports.
    pub fn digest(&self) -> String {
        let mut h = 0x243f_6a88_85a3_08d3u64;
        for &b in &self.0 {
            h = mix(h ^ b as u64);
        }
        format!("{h:016x}")
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalForm({}, {} bytes)", self.digest(), self.0.len())
    }
}

/// splitmix64 finalizer: a fixed hash so certificates are stable everywhere.
#[inline]
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A coloring of `Q_n` given by its explicit color classes; every word not
/// listed carries the implicit color.
struct Marked {
    n: usize,
    /// (color, sorted words)
    classes: Vec<(u8, Vec<u32>)>,
}

impl Marked {
    fn words(&self) -> impl Iterator<Item = (u8, u32)> + '_ {
        self.classes.iter().flat_map(|(c, ws)| ws.iter().map(move |&w| (*c, w)))
    }
}

type Cells = Vec<Vec<u8>>;

fn refine(m: &Marked, cells: &mut Cells) -> u64 {
    let n = m.n;
    let mut trace = mix(cells.len() as u64);
    loop {
        let masks: Vec<u32> =
            cells.iter().map(|c| c.iter().fold(0, |acc, &i| acc | coord_bit(n, i as usize))).collect();
        let mut sig = [0u64; 16];
        for (col, x) in m.words() {
            let mut h = mix(col as u64 + 1);
            for &mk in &masks {
                h = mix(h ^ (x & mk).count_ones() as u64);
            }
            let mut bits = x;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                sig[n - 1 - b] = sig[n - 1 - b].wrapping_add(h);
                bits &= bits - 1;
            }
        }
        let mut split = false;
        let mut next: Cells = Vec::with_capacity(n);
        for cell in cells.iter() {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut c = cell.clone();
            c.sort_by_key(|&i| (sig[i as usize], i));
            let mut start = 0;
            for k in 1..=c.len() {
                if k == c.len() || sig[c[k] as usize] != sig[c[start] as usize] {
                    if start > 0 || k < c.len() {
                        split = true;
                    }
                    trace = mix(trace ^ sig[c[start] as usize] ^ ((k - start) as u64) << 56);
                    next.push(c[start..k].to_vec());
                    start = k;
                }
            }
        }
        *cells = next;
        if !split {
            return mix(trace ^ cells.len() as u64);
        }
    }
}

fn target_cell(cells: &Cells) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, c) in cells.iter().enumerate() {
        if c.len() > 1 && best.is_none_or(|b| c.len() < cells[b].len()) {
            best = Some(i);
        }
    }
    best
}

fn individualize(cells: &Cells, t: usize, w: u8) -> Cells {
    let mut out = Vec::with_capacity(cells.len() + 1);
    out.extend_from_slice(&cells[..t]);
    out.push(vec![w]);
    out.push(cells[t].iter().copied().filter(|&x| x != w).collect());
    out.extend_from_slice(&cells[t + 1..]);
    out
}

/// Labeling of a discrete partition: coordinate `cells[p][0]` goes to `p`.
fn labeling(cells: &Cells) -> Perm {
    let mut lab = vec![0u8; cells.len()];
    for (p, c) in cells.iter().enumerate() {
        lab[c[0] as usize] = p as u8;
    }
    lab
}

fn certificate(m: &Marked, lab: &[u8]) -> Vec<u8> {
    let n = m.n;
    let table = WordPermuter::new(n, lab);
    let mut out = vec![CERT_VERSION, n as u8, m.classes.len() as u8];
    for (col, ws) in &m.classes {
        out.push(*col);
        out.extend_from_slice(&(ws.len() as u32).to_le_bytes());
        if 16 * ws.len() < 1 << n {
            let mut img: Vec<u32> = ws.iter().map(|&w| table.apply(w)).collect();
            img.sort_unstable();
            for w in img {
                out.extend_from_slice(&(w as u16).to_be_bytes());
            }
        } else {
            let mut bits = vec![0u64; (1usize << n).div_ceil(64)];
            for &w in ws {
                let y = table.apply(w) as usize;
                bits[y / 64] |= 1 << (y % 64);
            }
            for b in bits {
                out.extend_from_slice(&b.to_le_bytes());
            }
        }
    }
    out
}

/// Result of canonizing under coordinate permutations only.
pub(crate) struct PermCanon {
    pub cert: Vec<u8>,
    /// Maps the input onto the canonical representative.
    pub labeling: Perm,
    /// Generators of the coordinate automorphism group.
    pub gens: Vec<Perm>,
    pub order: u128,
}

struct Leaf {
    traces: Vec<u64>,
    cert: Vec<u8>,
    lab: Perm,
}

fn cmp_leaf(traces: &[u64], cert: &[u8], best: &Leaf) -> Ordering {
    traces.cmp(&best.traces).then_with(|| cert.cmp(&best.cert))
}

/// Compares a path prefix against the best leaf's traces: `Greater` means
/// every leaf below is worse.
fn cmp_prefix(prefix: &[u64], best: &[u64]) -> Ordering {
    for (a, b) in prefix.iter().zip(best) {
        match a.cmp(b) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    if prefix.len() > best.len() {
        Ordering::Greater
    } else {
        Ordering::Equal
    }
}

struct Engine<'a> {
    m: &'a Marked,
    n: usize,
    first: Leaf,
    gens: Vec<Perm>,
}

impl<'a> Engine<'a> {
    /// Depth-first search below `cells` for a leaf equivalent to the first
    /// leaf; returns its labeling.
    fn find_match(&self, cells: Cells, traces: &mut Vec<u64>, prefix: &mut Vec<u8>) -> Option<Perm> {
        let t = target_cell(&cells);
        let Some(t) = t else {
            let lab = labeling(&cells);
            let cert = certificate(self.m, &lab);
            return (traces[..] == self.first.traces[..] && cert == self.first.cert).then_some(lab);
        };
        let fixing: Vec<Perm> =
            self.gens.iter().filter(|g| prefix.iter().all(|&p| g[p as usize] == p)).cloned().collect();
        let reps = orbit_reps(self.n, &fixing);
        let mut tried: Vec<u8> = Vec::new();
        for &w in &cells[t] {
            if tried.iter().any(|&u| reps[u as usize] == reps[w as usize]) {
                continue;
            }
            tried.push(w);
            let mut child = individualize(&cells, t, w);
            let tr = refine(self.m, &mut child);
            let depth = traces.len();
            if self.first.traces.get(depth) != Some(&tr) {
                continue;
            }
            traces.push(tr);
            prefix.push(w);
            let found = self.find_match(child, traces, prefix);
            traces.pop();
            prefix.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }
}

fn perm_canonical(m: &Marked) -> PermCanon {
    let n = m.n;
    let mut root: Cells = vec![(0..n as u8).collect()];
    let root_trace = refine(m, &mut root);

    // First path.
    let mut path: Vec<(Cells, usize, u8)> = Vec::new();
    let mut cells = root.clone();
    let mut traces = vec![root_trace];
    while let Some(t) = target_cell(&cells) {
        let w = cells[t][0];
        let mut child = individualize(&cells, t, w);
        traces.push(refine(m, &mut child));
        path.push((cells, t, w));
        cells = child;
    }
    let lab = labeling(&cells);
    let first = Leaf { cert: certificate(m, &lab), traces, lab };
    let mut eng = Engine { m, n, first, gens: Vec::new() };

    // Automorphism group, deepest level first.
    let mut order: u128 = 1;
    for level in (0..path.len()).rev() {
        let (cells, t, w0) = &path[level];
        let mut explored = vec![*w0];
        for &w in &cells[*t] {
            let reps = orbit_reps(n, &eng.gens);
            if explored.iter().any(|&u| reps[u as usize] == reps[w as usize]) {
                continue;
            }
            explored.push(w);
            let mut child = individualize(cells, *t, w);
            let tr = refine(m, &mut child);
            if eng.first.traces[level + 1] != tr {
                continue;
            }
            let mut traces = eng.first.traces[..=level + 1].to_vec();
            let mut prefix: Vec<u8> = path[..level].iter().map(|p| p.2).collect();
            prefix.push(w);
            if let Some(lab) = eng.find_match(child, &mut traces, &mut prefix) {
                // lab⁻¹ ∘ first maps the structure onto itself
                let g = perm::then(&eng.first.lab, &perm::inverse(&lab));
                debug_assert!(!perm::is_identity(&g));
                eng.gens.push(g);
            }
        }
        let reps = orbit_reps(n, &eng.gens);
        order *= cells[*t].iter().filter(|&&w| reps[w as usize] == reps[*w0 as usize]).count() as u128;
    }

    // Least leaf, pruned by traces and by orbits of the full group.
    let mut best = Leaf { traces: eng.first.traces.clone(), cert: eng.first.cert.clone(), lab: eng.first.lab.clone() };
    let mut memo: HashMap<Vec<u8>, Vec<u8>> = HashMap::new();
    let mut stack_traces = vec![root_trace];
    let mut prefix = Vec::new();
    search_best(m, &eng.gens, root, &mut stack_traces, &mut prefix, &mut best, &mut memo);

    PermCanon { cert: best.cert, labeling: best.lab, gens: eng.gens, order }
}

fn search_best(
    m: &Marked,
    gens: &[Perm],
    cells: Cells,
    traces: &mut Vec<u64>,
    prefix: &mut Vec<u8>,
    best: &mut Leaf,
    memo: &mut HashMap<Vec<u8>, Vec<u8>>,
) {
    let n = m.n;
    let Some(t) = target_cell(&cells) else {
        let lab = labeling(&cells);
        let cert = certificate(m, &lab);
        if cmp_leaf(traces, &cert, best) == Ordering::Less {
            *best = Leaf { traces: traces.clone(), cert, lab };
        }
        return;
    };
    let reps = memo
        .entry(prefix.clone())
        .or_insert_with(|| {
            let chain = StabChain::new(n, gens, prefix);
            orbit_reps(n, &chain.stabilizer_gens(prefix.len()))
        })
        .clone();
    let mut seen_reps: Vec<u8> = Vec::new();
    for &w in &cells[t] {
        if seen_reps.contains(&reps[w as usize]) {
            continue;
        }
        seen_reps.push(reps[w as usize]);
        let mut child = individualize(&cells, t, w);
        let tr = refine(m, &mut child);
        traces.push(tr);
        if cmp_prefix(traces, &best.traces) != Ordering::Greater {
            prefix.push(w);
            search_best(m, gens, child, traces, prefix, best, memo);
            prefix.pop();
        }
        traces.pop();
    }
}

/// Canonical data for a coloring under coordinate permutations.
#[derive(Clone, Debug)]
pub struct CoordinateCanon {
    pub form: CanonicalForm,
    /// Coordinate map taking the input onto its canonical representative.
    pub labeling: Vec<u8>,
    pub generators: Vec<Vec<u8>>,
    pub order: u128,
}

fn marked_from(n: usize, classes: &[Vec<u32>]) -> Result<Marked> {
    check_dim(n)?;
    if classes.len() > 250 {
        return Err(Error::InvalidParameters("too many color classes".into()));
    }
    let mut out = Vec::new();
    for (c, ws) in classes.iter().enumerate() {
        let mut ws = ws.clone();
        ws.sort_unstable();
        ws.dedup();
        if ws.iter().any(|&w| (w as u64) >> n != 0) {
            return Err(Error::InvalidParameters(format!("word outside Q_{n} in class {c}")));
        }
        out.push((c as u8, ws));
    }
    Ok(Marked { n, classes: out })
}

/// Canonical form of the coloring whose class `c` is `classes[c]` (classes
/// disjoint; unlisted words share an extra color) under coordinate
/// permutations only.
pub fn coordinate_canonical(n: usize, classes: &[Vec<u32>]) -> Result<CoordinateCanon> {
    let m = marked_from(n, classes)?;
    let pc = perm_canonical(&m);
    Ok(CoordinateCanon { form: CanonicalForm(pc.cert), labeling: pc.labeling, generators: pc.gens, order: pc.order })
}

/// Canonical data for a coloring under the full group `Aut(Q_n)`.
#[derive(Clone, Debug)]
pub struct FullCanon {
    pub form: CanonicalForm,
    /// Automorphism taking the input onto its canonical representative.
    pub labeling: CubeAutomorphism,
    /// Generators of the stabilizer of the coloring in `Aut(Q_n)`.
    pub generators: Vec<CubeAutomorphism>,
    pub order: u128,
}

struct UnionFind(Vec<u32>);

impl UnionFind {
    fn new(k: usize) -> UnionFind {
        UnionFind((0..k as u32).collect())
    }

    fn find(&mut self, x: u32) -> u32 {
        let mut r = x;
        while self.0[r as usize] != r {
            r = self.0[r as usize];
        }
        let mut y = x;
        while self.0[y as usize] != r {
            let next = self.0[y as usize];
            self.0[y as usize] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi as usize] = lo;
        }
    }

    fn add_generator(&mut self, g: &CubeAutomorphism) {
        let n = g.dim();
        let table = WordPermuter::new(n, g.perm());
        for x in 0..1u32 << n {
            self.union(x, table.apply(x) ^ g.shift().0);
        }
    }
}

/// Colors of all words; `classes.len()` marks the implicit color.
fn color_table(n: usize, classes: &[Vec<u32>]) -> Vec<u8> {
    let mut col = vec![classes.len() as u8; 1 << n];
    for (c, ws) in classes.iter().enumerate() {
        for &w in ws {
            col[w as usize] = c as u8;
        }
    }
    col
}

/// Per-vertex invariant: colors seen around every 2-face through the vertex.
fn face_profile(n: usize, col: &[u8], ncol: usize, v: u32) -> Vec<u32> {
    let mut hist = vec![0u32; ncol * ncol * ncol];
    for i in 0..n {
        let ei = 1u32 << i;
        for j in i + 1..n {
            let ej = 1u32 << j;
            let (a, b) = (col[(v ^ ei) as usize] as usize, col[(v ^ ej) as usize] as usize);
            let c = col[(v ^ ei ^ ej) as usize] as usize;
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            hist[(a * ncol + b) * ncol + c] += 1;
        }
    }
    hist
}

/// Translation-invariant kernel of the coloring: `y` with every class
/// fixed by `x ↦ x + y`.
fn coloring_kernel(n: usize, col: &[u8], small: &[u32]) -> Vec<u32> {
    let Some(&s0) = small.first() else { return Vec::new() };
    let mut out = Vec::new();
    for &s in small {
        let y = s ^ s0;
        if y != 0 && (0..1u32 << n).all(|x| col[x as usize] == col[(x ^ y) as usize]) {
            out.push(y);
        }
    }
    crate::spectral::echelon_basis(&out)
}

/// Canonical form under `Aut(Q_n)` of the coloring with explicit classes
/// `classes` (disjoint) and one implicit class of the remaining words.
pub fn full_canonical(n: usize, classes: &[Vec<u32>]) -> Result<FullCanon> {
    let base = marked_from(n, classes)?;
    let all: Vec<Vec<u32>> = base.classes.iter().map(|(_, w)| w.clone()).collect();
    let col = color_table(n, &all);
    let ncol = all.len() + 1;
    let mut sizes: Vec<usize> = all.iter().map(Vec::len).collect();
    sizes.push((1usize << n) - sizes.iter().sum::<usize>());
    // the smallest nonempty class supplies translation candidates
    let cls = (0..ncol).filter(|&c| sizes[c] > 0).min_by_key(|&c| (sizes[c], c)).unwrap();
    let pool: Vec<u32> = (0..1u32 << n).filter(|&x| col[x as usize] as usize == cls).collect();

    let mut groups: BTreeMap<Vec<u32>, Vec<u32>> = BTreeMap::new();
    for &v in &pool {
        groups.entry(face_profile(n, &col, ncol, v)).or_default().push(v);
    }
    let candidates = groups
        .into_iter()
        .min_by(|a, b| a.1.len().cmp(&b.1.len()).then_with(|| a.0.cmp(&b.0)))
        .unwrap()
        .1;

    let mut gens: Vec<CubeAutomorphism> = Vec::new();
    let mut uf = UnionFind::new(1 << n);
    for y in coloring_kernel(n, &col, &pool) {
        let g = CubeAutomorphism::translation(n, Vertex(y));
        uf.add_generator(&g);
        gens.push(g);
    }

    let mut processed: Vec<u32> = Vec::new();
    let mut seen: HashMap<Vec<u8>, (u32, Perm)> = HashMap::new();
    let mut best: Option<(Vec<u8>, u32, Perm, u128)> = None;
    for &v in &candidates {
        if processed.iter().any(|&u| uf.find(u) == uf.find(v)) {
            continue;
        }
        processed.push(v);
        let shifted = Marked {
            n,
            classes: base
                .classes
                .iter()
                .map(|(c, ws)| {
                    let mut t: Vec<u32> = ws.iter().map(|w| w ^ v).collect();
                    t.sort_unstable();
                    (*c, t)
                })
                .collect(),
        };
        let pc = perm_canonical(&shifted);
        for s in &pc.gens {
            let sigma = CubeAutomorphism::permutation(s.clone()).expect("valid permutation");
            let shift = Vertex(sigma.permute_word(v) ^ v);
            let g = CubeAutomorphism::new(s.clone(), shift).expect("valid automorphism");
            uf.add_generator(&g);
            gens.push(g);
        }
        match seen.get(&pc.cert) {
            Some((u, lab_u)) => {
                // μ = λ_v⁻¹ λ_u sends the coloring shifted by u onto the one shifted by v
                let mu = perm::then(lab_u, &perm::inverse(&pc.labeling));
                let muc = CubeAutomorphism::permutation(mu.clone()).expect("valid permutation");
                let shift = Vertex(muc.permute_word(*u) ^ v);
                let g = CubeAutomorphism::new(mu, shift).expect("valid automorphism");
                uf.add_generator(&g);
                gens.push(g);
            }
            None => {
                seen.insert(pc.cert.clone(), (v, pc.labeling.clone()));
            }
        }
        if best.as_ref().is_none_or(|b| pc.cert < b.0) {
            best = Some((pc.cert, v, pc.labeling, pc.order));
        }
    }
    let (cert, v, lab, perm_order) = best.expect("at least one candidate");
    let root = uf.find(v);
    let orbit = (0..1u32 << n).filter(|&x| uf.find(x) == root).count() as u128;
    let lam = CubeAutomorphism::permutation(lab).expect("valid permutation");
    let shift = Vertex(lam.permute_word(v));
    let labeling = CubeAutomorphism::new(lam.perm().to_vec(), shift).expect("valid automorphism");
    Ok(FullCanon { form: CanonicalForm(cert), labeling, generators: gens, order: orbit * perm_order })
}

/// Canonical form of a vertex set under `Aut(Q_n)`.
pub fn canonical_form(s: &VertexSet) -> CanonicalForm {
    full_canonical(s.dim(), &[s.words()]).expect("valid vertex set").form
}

/// Canonical form of a 2-partition whose cells may be exchanged.
pub fn partition_form(c0: &VertexSet) -> CanonicalForm {
    let a = canonical_form(c0);
    let b = canonical_form(&c0.complement());
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let mut bytes = lo.0;
    bytes.extend_from_slice(&hi.0);
    CanonicalForm(bytes)
}

/// Stabilizer of a vertex set in `Aut(Q_n)`.
#[derive(Clone, Debug)]
pub struct AutInfo {
    pub order: u128,
    pub generators: Vec<CubeAutomorphism>,
    /// Orbits of coordinate indices (0-based) under the permutation parts.
    pub coordinate_orbits: Vec<Vec<usize>>,
    /// Orbit sizes on the set and on its complement, descending.
    pub cell_orbit_sizes: (Vec<usize>, Vec<usize>),
}

impl AutInfo {
    /// Orbit sizes in `size^count` notation, largest first.
    pub fn orbit_multiset(sizes: &[usize]) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &s in sizes {
            match out.last_mut() {
                Some((t, k)) if *t == s => *k += 1,
                _ => out.push((s, 1)),
            }
        }
        out
    }
}

/// Orbits of the group generated by `gens` on the vertices of `Q_n`, as
/// a representative for every word.
pub fn vertex_orbits(n: usize, gens: &[CubeAutomorphism]) -> Vec<u32> {
    let mut uf = UnionFind::new(1 << n);
    for g in gens {
        uf.add_generator(g);
    }
    (0..1u32 << n).map(|x| uf.find(x)).collect()
}

pub fn automorphism_info(s: &VertexSet) -> AutInfo {
    let n = s.dim();
    let fc = full_canonical(n, &[s.words()]).expect("valid vertex set");
    let reps = vertex_orbits(n, &fc.generators);
    let mut inside: BTreeMap<u32, usize> = BTreeMap::new();
    let mut outside: BTreeMap<u32, usize> = BTreeMap::new();
    for x in 0..1u32 << n {
        let map = if s.contains_word(x) { &mut inside } else { &mut outside };
        *map.entry(reps[x as usize]).or_default() += 1;
    }
    let sorted = |m: BTreeMap<u32, usize>| {
        let mut v: Vec<usize> = m.into_values().collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    };
    let perms: Vec<Perm> = fc.generators.iter().map(|g| g.perm().to_vec()).collect();
    let creps = orbit_reps(n, &perms);
    let mut corbits: BTreeMap<u8, Vec<usize>> = BTreeMap::new();
    for (i, &r) in creps.iter().enumerate().take(n) {
        corbits.entry(r).or_default().push(i);
    }
    AutInfo {
        order: fc.order,
        generators: fc.generators,
        coordinate_orbits: corbits.into_values().collect(),
        cell_orbit_sizes: (sorted(inside), sorted(outside)),
    }
}

/// `|Aut(Q_n)| = 2^n · n!`.
pub fn cube_group_order(n: usize) -> u128 {
    (1u128 << n) * (1..=n as u128).product::<u128>()
}

/// Orbit–stabilizer double count: `Σ group_order / order_i == expected`.
pub fn double_count(group_order: u128, orders: &[u128], expected: u128) -> bool {
    let mut total: u128 = 0;
    for &o in orders {
        if o == 0 || !group_order.is_multiple_of(o) {
            return false;
        }
        match total.checked_add(group_order / o) {
            Some(t) => total = t,
            None => return false,
        }
    }
    total == expected
}

/// A simple graph on at most 16 vertices.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SimpleGraph {
    adj: Vec<u16>,
}

impl SimpleGraph {
    pub fn new(v: usize) -> Result<SimpleGraph> {
        if v == 0 || v > 16 {
            return Err(Error::InvalidParameters(format!("graphs need 1..=16 vertices, got {v}")));
        }
        Ok(SimpleGraph { adj: vec![0; v] })
    }

    pub fn from_edges(v: usize, edges: &[(usize, usize)]) -> Result<SimpleGraph> {
        let mut g = SimpleGraph::new(v)?;
        for &(a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<()> {
        let v = self.adj.len();
        if a >= v || b >= v || a == b {
            return Err(Error::InvalidParameters(format!("bad edge ({a},{b})")));
        }
        self.adj[a] |= 1 << b;
        self.adj[b] |= 1 << a;
        Ok(())
    }

    pub fn remove_edge(&mut self, a: usize, b: usize) {
        if a < self.adj.len() && b < self.adj.len() {
            self.adj[a] &= !(1 << b);
            self.adj[b] &= !(1 << a);
        }
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a] >> b & 1 == 1
    }

    pub fn degree(&self, a: usize) -> u32 {
        self.adj[a].count_ones()
    }

    pub fn neighbours(&self, a: usize) -> u16 {
        self.adj[a]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let v = self.adj.len();
        (0..v).flat_map(|a| (a + 1..v).filter(move |&b| self.has_edge(a, b)).map(move |b| (a, b))).collect()
    }

    pub fn complement(&self) -> SimpleGraph {
        let v = self.adj.len();
        let full: u16 = if v == 16 { u16::MAX } else { (1 << v) - 1 };
        SimpleGraph { adj: (0..v).map(|a| full & !self.adj[a] & !(1 << a)).collect() }
    }

    pub fn is_connected(&self) -> bool {
        let mut seen: u16 = 1;
        let mut frontier: u16 = 1;
        while frontier != 0 {
            let a = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let new = self.adj[a] & !seen;
            seen |= new;
            frontier |= new;
        }
        seen.count_ones() as usize == self.adj.len()
    }

    /// Edges as words of weight 2 over `v` coordinates.
    fn edge_words(&self) -> Vec<u32> {
        let v = self.adj.len();
        self.edges().into_iter().map(|(a, b)| coord_bit(v, a) | coord_bit(v, b)).collect()
    }

    pub fn relabel(&self, perm: &[u8]) -> SimpleGraph {
        let mut g = SimpleGraph { adj: vec![0; self.adj.len()] };
        for (a, b) in self.edges() {
            g.add_edge(perm[a] as usize, perm[b] as usize).expect("relabeled edge");
        }
        g
    }
}

/// Canonical form and automorphism group order of a simple graph.
pub fn graph_canonical(g: &SimpleGraph) -> CoordinateCanon {
    coordinate_canonical(g.order(), &[g.edge_words()]).expect("graph fits in 16 coordinates")
}

pub fn graph_canonical_form(g: &SimpleGraph) -> CanonicalForm {
    graph_canonical(g).form
}

/// Insert-if-absent table keyed by canonical form. The stored representative
/// is the one with the least caller-supplied key, so the final contents do
/// not depend on insertion order.
pub struct DedupeTable<K: Ord + Clone, T> {
    inner: Mutex<BTreeMap<CanonicalForm, (K, T)>>,
}

impl<K: Ord + Clone, T> Default for DedupeTable<K, T> {
    fn default() -> Self {
        DedupeTable { inner: Mutex::new(BTreeMap::new()) }
    }
}

impl<K: Ord + Clone, T> DedupeTable<K, T> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns true when the form was new.
    pub fn insert(&self, form: CanonicalForm, key: K, value: T) -> bool {
        let mut map = self.inner.lock().expect("dedupe table poisoned");
        match map.get_mut(&form) {
            Some(slot) => {
                if key < slot.0 {
                    *slot = (key, value);
                }
                false
            }
            None => {
                map.insert(form, (key, value));
                true
            }
        }
    }

    pub fn len(&self) -> usize {
        self.inner.lock().expect("dedupe table poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, form: &CanonicalForm) -> bool {
        self.inner.lock().expect("dedupe table poisoned").contains_key(form)
    }

    /// Entries in canonical-form order.
    pub fn into_entries(self) -> Vec<(CanonicalForm, K, T)> {
        self.inner
            .into_inner()
            .expect("dedupe table poisoned")
            .into_iter()
            .map(|(f, (k, t))| (f, k, t))
            .collect()
    }
}
