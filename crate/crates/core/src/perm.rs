//! Permutations of at most 16 points and a Schreier–Sims stabilizer chain.

/// `p[i]` is the image of `i`.
pub type Perm = Vec<u8>;

pub fn identity(n: usize) -> Perm {
    (0..n as u8).collect()
}

pub fn is_identity(p: &[u8]) -> bool {
    p.iter().enumerate().all(|(i, &x)| x as usize == i)
}

/// Apply `p`, then `q`.
pub fn then(p: &[u8], q: &[u8]) -> Perm {
    p.iter().map(|&x| q[x as usize]).collect()
}

pub fn inverse(p: &[u8]) -> Perm {
    let mut inv = vec![0u8; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x as usize] = i as u8;
    }
    inv
}

/// Orbit representative (least element) of every point.
pub fn orbit_reps(n: usize, gens: &[Perm]) -> Vec<u8> {
    let mut rep: Vec<u8> = (0..n as u8).collect();
    fn find(rep: &mut [u8], x: u8) -> u8 {
        let mut r = x;
        while rep[r as usize] != r {
            r = rep[r as usize];
        }
        let mut y = x;
        while rep[y as usize] != r {
            let next = rep[y as usize];
            rep[y as usize] = r;
            y = next;
        }
        r
    }
    for g in gens {
        for i in 0..n as u8 {
            let (a, b) = (find(&mut rep, i), find(&mut rep, g[i as usize]));
            if a != b {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                rep[hi as usize] = lo;
            }
        }
    }
    (0..n as u8).map(|i| find(&mut rep, i)).collect()
}

#[derive(Clone, Debug)]
struct Level {
    point: u8,
    gens: Vec<Perm>,
    /// `transversal[β]` maps `point` to `β`.
    transversal: Vec<Option<Perm>>,
    orbit: Vec<u8>,
}

/// Base and strong generating set of a permutation group.
#[derive(Clone, Debug)]
pub struct StabChain {
    n: usize,
    levels: Vec<Level>,
}

impl StabChain {
    /// Chain for `⟨gens⟩` whose base starts with `prefix`.
    pub fn new(n: usize, gens: &[Perm], prefix: &[u8]) -> StabChain {
        let gens: Vec<Perm> = gens.iter().filter(|g| !is_identity(g)).cloned().collect();
        let mut base: Vec<u8> = prefix.to_vec();
        for g in &gens {
            if base.iter().all(|&b| g[b as usize] == b) {
                let moved = (0..n as u8).find(|&x| g[x as usize] != x).unwrap();
                base.push(moved);
            }
        }
        let mut chain = StabChain { n, levels: Vec::new() };
        for (i, &b) in base.iter().enumerate() {
            let lg: Vec<Perm> = gens
                .iter()
                .filter(|g| base[..i].iter().all(|&x| g[x as usize] == x))
                .cloned()
                .collect();
            chain.levels.push(Level { point: b, gens: lg, transversal: Vec::new(), orbit: Vec::new() });
            chain.rebuild_orbit(i);
        }
        chain.complete();
        chain
    }

    fn rebuild_orbit(&mut self, i: usize) {
        let n = self.n;
        let lvl = &mut self.levels[i];
        let mut tr: Vec<Option<Perm>> = vec![None; n];
        tr[lvl.point as usize] = Some(identity(n));
        let mut orbit = vec![lvl.point];
        let mut k = 0;
        while k < orbit.len() {
            let b = orbit[k];
            let u = tr[b as usize].clone().unwrap();
            for s in &lvl.gens {
                let c = s[b as usize];
                if tr[c as usize].is_none() {
                    tr[c as usize] = Some(then(&u, s));
                    orbit.push(c);
                }
            }
            k += 1;
        }
        lvl.transversal = tr;
        lvl.orbit = orbit;
    }

    /// Sifts `g` from level `start`; returns the residue and the level at
    /// which sifting stopped.
    fn strip(&self, mut g: Perm, start: usize) -> (Perm, usize) {
        for (l, lvl) in self.levels.iter().enumerate().skip(start) {
            let b = g[lvl.point as usize];
            match &lvl.transversal[b as usize] {
                None => return (g, l),
                Some(u) => g = then(&g, &inverse(u)),
            }
        }
        (g, self.levels.len())
    }

    fn complete(&mut self) {
        let mut i = self.levels.len() as isize - 1;
        'outer: while i >= 0 {
            let iu = i as usize;
            let orbit = self.levels[iu].orbit.clone();
            let gens = self.levels[iu].gens.clone();
            for &b in &orbit {
                let ub = self.levels[iu].transversal[b as usize].clone().unwrap();
                for s in &gens {
                    let c = s[b as usize];
                    let uc = self.levels[iu].transversal[c as usize].as_ref().unwrap();
                    let h = then(&then(&ub, s), &inverse(uc));
                    if is_identity(&h) {
                        continue;
                    }
                    let (y, j) = self.strip(h, iu + 1);
                    if is_identity(&y) {
                        continue;
                    }
                    if j == self.levels.len() {
                        let moved = (0..self.n as u8).find(|&x| y[x as usize] != x).unwrap();
                        self.levels.push(Level { point: moved, gens: Vec::new(), transversal: Vec::new(), orbit: Vec::new() });
                    }
                    for l in iu + 1..=j {
                        self.levels[l].gens.push(y.clone());
                        self.rebuild_orbit(l);
                    }
                    i = j as isize;
                    continue 'outer;
                }
            }
            i -= 1;
        }
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn base(&self) -> Vec<u8> {
        self.levels.iter().map(|l| l.point).collect()
    }

    pub fn contains(&self, g: &[u8]) -> bool {
        let (y, _) = self.strip(g.to_vec(), 0);
        is_identity(&y)
    }

    /// Generators of the pointwise stabilizer of the first `k` base points.
    pub fn stabilizer_gens(&self, k: usize) -> Vec<Perm> {
        match self.levels.get(k) {
            Some(l) => l.gens.clone(),
            None => Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Perm {
        (0..n).map(|i| ((i + 1) % n) as u8).collect()
    }

    fn transposition(n: usize, a: usize, b: usize) -> Perm {
        let mut p = identity(n);
        p.swap(a, b);
        p
    }

    #[test]
    fn symmetric_group_orders() {
        for n in 1..=9 {
            let g = StabChain::new(n, &[cycle(n), transposition(n, 0, 1.min(n - 1))], &[]);
            let fact: u128 = (1..=n as u128).product();
            assert_eq!(g.order(), fact, "S_{n}");
        }
    }

    #[test]
    fn dihedral_and_stabilizers() {
        let n = 8;
        let refl: Perm = (0..n).map(|i| ((n - i) % n) as u8).collect();
        let g = StabChain::new(n, &[cycle(n), refl], &[3]);
        assert_eq!(g.order(), 16);
        assert_eq!(g.base()[0], 3);
        let stab = g.stabilizer_gens(1);
        let reps = orbit_reps(n, &stab);
        // the reflection through 3 pairs 2 with 4
        assert_eq!(reps[4], 2);
        assert_eq!(reps[3], 3);
        assert!(g.contains(&cycle(n)));
        assert!(!g.contains(&transposition(n, 0, 1)));
    }

    #[test]
    fn trivial_group() {
        let g = StabChain::new(5, &[identity(5)], &[0, 1]);
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn inverse_and_composition() {
        let p: Perm = vec![2, 0, 3, 1];
        assert!(is_identity(&then(&p, &inverse(&p))));
        assert_eq!(then(&p, &p), vec![3, 2, 1, 0]);
    }
}
