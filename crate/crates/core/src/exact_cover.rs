//! Exact covers with multiplicities: choose sets so that element `i` lies in
//! exactly `α_i` chosen sets.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverInstance {
    demand: Vec<u32>,
    sets: Vec<Vec<usize>>,
}

impl CoverInstance {
    /// Elements are `0..demand.len()`. A demand of zero is allowed and
    /// forbids every set through that element.
    pub fn new(demand: Vec<u32>, sets: Vec<Vec<usize>>) -> Result<CoverInstance> {
        let k = demand.len();
        let mut clean = Vec::with_capacity(sets.len());
        for (j, mut s) in sets.into_iter().enumerate() {
            if s.is_empty() {
                return Err(Error::InvalidParameters(format!("set {j} is empty")));
            }
            s.sort_unstable();
            s.dedup();
            if let Some(&e) = s.iter().find(|&&e| e >= k) {
                return Err(Error::InvalidParameters(format!("set {j} names element {e} ≥ {k}")));
            }
            clean.push(s);
        }
        Ok(CoverInstance { demand, sets: clean })
    }

    pub fn elements(&self) -> usize {
        self.demand.len()
    }

    pub fn demand(&self) -> &[u32] {
        &self.demand
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    /// True when `chosen` meets every multiplicity exactly.
    pub fn is_solution(&self, chosen: &[usize]) -> bool {
        let mut count = vec![0u32; self.demand.len()];
        for &j in chosen {
            for &e in &self.sets[j] {
                count[e] += 1;
            }
        }
        count == self.demand
    }

    /// Visits every solution once, as a sorted list of set indices, in a
    /// deterministic order. Returns the number of solutions.
    pub fn solve_all<F: FnMut(&[usize])>(&self, mut visit: F) -> u64 {
        let mut s = Search::new(self);
        s.run(&mut visit);
        s.count
    }

    pub fn count_solutions(&self) -> u64 {
        self.solve_all(|_| {})
    }

    /// Text form: `k m`, the multiplicities, then one set per line
    /// (elements 1-based).
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.demand.len(), self.sets.len());
        let alpha: Vec<String> = self.demand.iter().map(u32::to_string).collect();
        out.push_str(&alpha.join(" "));
        out.push('\n');
        for s in &self.sets {
            let line: Vec<String> = s.iter().map(|e| (e + 1).to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<CoverInstance> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let nums = |line: usize, l: &str| -> Result<Vec<usize>> {
            l.split_whitespace()
                .map(|t| t.parse().map_err(|_| Error::Parse { line, msg: format!("bad integer {t:?}") }))
                .collect()
        };
        let (ln, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
        let h = nums(ln, header)?;
        let [k, m] = h[..] else {
            return Err(Error::Parse { line: ln, msg: "header must be `k m`".into() });
        };
        let (ln, alpha) = lines.next().ok_or(Error::Parse { line: ln + 1, msg: "missing multiplicities".into() })?;
        let alpha = nums(ln, alpha)?;
        if alpha.len() != k {
            return Err(Error::Parse { line: ln, msg: format!("expected {k} multiplicities") });
        }
        let mut sets = Vec::with_capacity(m);
        for (ln, l) in lines {
            let s = nums(ln, l)?;
            if s.iter().any(|&e| e == 0 || e > k) {
                return Err(Error::Parse { line: ln, msg: format!("elements must lie in 1..={k}") });
            }
            sets.push(s.into_iter().map(|e| e - 1).collect());
        }
        if sets.len() != m {
            return Err(Error::Parse { line: text.lines().count(), msg: format!("expected {m} sets, found {}", sets.len()) });
        }
        CoverInstance::new(alpha.into_iter().map(|a| a as u32).collect(), sets)
    }
}

struct Search<'a> {
    inst: &'a CoverInstance,
    elem_sets: Vec<Vec<usize>>,
    demand: Vec<u32>,
    avail: Vec<u32>,
    alive: Vec<bool>,
    trail: Vec<usize>,
    chosen: Vec<usize>,
    count: u64,
}

impl<'a> Search<'a> {
    fn new(inst: &'a CoverInstance) -> Search<'a> {
        let k = inst.demand.len();
        let mut elem_sets = vec![Vec::new(); k];
        for (j, s) in inst.sets.iter().enumerate() {
            for &e in s {
                elem_sets[e].push(j);
            }
        }
        let avail = elem_sets.iter().map(|v| v.len() as u32).collect();
        let mut s = Search {
            inst,
            elem_sets,
            demand: inst.demand.clone(),
            avail,
            alive: vec![true; inst.sets.len()],
            trail: Vec::new(),
            chosen: Vec::new(),
            count: 0,
        };
        for e in 0..k {
            if s.demand[e] == 0 {
                s.kill_through(e);
            }
        }
        s.trail.clear();
        s
    }

    fn kill(&mut self, j: usize) {
        self.alive[j] = false;
        for &e in &self.inst.sets[j] {
            self.avail[e] -= 1;
        }
        self.trail.push(j);
    }

    fn kill_through(&mut self, e: usize) {
        for idx in 0..self.elem_sets[e].len() {
            let j = self.elem_sets[e][idx];
            if self.alive[j] {
                self.kill(j);
            }
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let j = self.trail.pop().unwrap();
            self.alive[j] = true;
            for &e in &self.inst.sets[j] {
                self.avail[e] += 1;
            }
        }
    }

    /// Open element with the least slack, or `Err` when some element can no
    /// longer be satisfied.
    fn choose(&self) -> std::result::Result<Option<usize>, ()> {
        let mut best: Option<(u32, usize)> = None;
        for (e, (&d, &a)) in self.demand.iter().zip(&self.avail).enumerate() {
            if d == 0 {
                continue;
            }
            if a < d {
                return Err(());
            }
            let slack = a - d;
            if best.is_none_or(|(s, _)| slack < s) {
                best = Some((slack, e));
            }
        }
        Ok(best.map(|(_, e)| e))
    }

    fn run<F: FnMut(&[usize])>(&mut self, visit: &mut F) {
        let e = match self.choose() {
            Err(()) => return,
            Ok(None) => {
                let mut sol = self.chosen.clone();
                sol.sort_unstable();
                visit(&sol);
                self.count += 1;
                return;
            }
            Ok(Some(e)) => e,
        };
        let j = *self.elem_sets[e].iter().find(|&&j| self.alive[j]).expect("avail ≥ demand > 0");
        let mark = self.trail.len();

        // include j
        self.kill(j);
        self.chosen.push(j);
        let mut done = Vec::new();
        for &x in &self.inst.sets[j] {
            self.demand[x] -= 1;
            if self.demand[x] == 0 {
                done.push(x);
            }
        }
        for x in done {
            self.kill_through(x);
        }
        self.run(visit);
        for &x in &self.inst.sets[j] {
            self.demand[x] += 1;
        }
        self.chosen.pop();
        self.undo_to(mark);

        // exclude j
        self.kill(j);
        self.run(visit);
        self.undo_to(mark);
    }
}

/// `⌈C(v,t)/C(k,t)⌉`.
pub fn covering_lower_bound(t: u32, k: u32, v: u32) -> Result<u64> {
    if t > k || k > v {
        return Err(Error::InvalidParameters(format!("need t ≤ k ≤ v, got ({t},{k},{v})")));
    }
    Ok(binomial(v as u64, t as u64).div_ceil(binomial(k as u64, t as u64)))
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Subsets of `ground` (a bit mask) of size `t`, increasing.
pub fn subsets_of_size(ground: u32, t: u32) -> Vec<u32> {
    crate::cube::submasks(ground).filter(|s| s.count_ones() == t).collect()
}

/// First `t`-subset of `ground` contained in no block, if any.
pub fn uncovered_subset(blocks: &[u32], t: u32, ground: u32) -> Option<u32> {
    subsets_of_size(ground, t).into_iter().find(|&s| !blocks.iter().any(|&b| b & s == s))
}

/// Blocks through `a` with `a` removed, as masks over the points `0..v`.
/// Blocks are bit masks; `blocks` must cover every `t`-subset of `0..v`.
pub fn derived_covering(blocks: &[u32], t: u32, v: u32, a: u32) -> Result<Vec<u32>> {
    let ground = if v == 32 { u32::MAX } else { (1u32 << v) - 1 };
    if let Some(s) = uncovered_subset(blocks, t, ground) {
        return Err(Error::Precondition(format!("t-set {s:#x} is not covered")));
    }
    if a >= v || t == 0 {
        return Err(Error::InvalidParameters(format!("point {a} with t = {t}")));
    }
    let bit = 1u32 << a;
    let mut out: Vec<u32> = blocks.iter().filter(|&&b| b & bit != 0).map(|&b| b & !bit).collect();
    out.sort_unstable();
    debug_assert!(out.is_empty() || uncovered_subset(&out, t - 1, ground & !bit).is_none());
    Ok(out)
}
