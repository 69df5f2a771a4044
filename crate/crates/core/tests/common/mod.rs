#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;

use cubepart::exact_cover::CoverInstance;
use cubepart::{CubeAutomorphism, Vertex, VertexSet};

/// Quotient matrix by counting neighbours of every vertex, or `None` when
/// the counts are not constant on a cell.
pub fn brute_quotient(c0: &VertexSet) -> Option<[[u32; 2]; 2]> {
    let n = c0.dim();
    let mut rows: [Option<[u32; 2]>; 2] = [None, None];
    for x in 0..1u32 << n {
        let mut row = [0u32; 2];
        for i in 0..n {
            let y = x ^ (1 << i);
            row[if c0.contains_word(y) { 0 } else { 1 }] += 1;
        }
        let cell = if c0.contains_word(x) { 0 } else { 1 };
        match rows[cell] {
            None => rows[cell] = Some(row),
            Some(r) if r != row => return None,
            _ => {}
        }
    }
    Some([rows[0]?, rows[1]?])
}

pub fn random_automorphism<R: Rng>(rng: &mut R, n: usize) -> CubeAutomorphism {
    let mut perm: Vec<u8> = (0..n as u8).collect();
    perm.shuffle(rng);
    let shift = rng.random_range(0..1u32 << n);
    CubeAutomorphism::new(perm, Vertex(shift)).expect("valid automorphism")
}

pub fn random_set<R: Rng>(rng: &mut R, n: usize, density: f64) -> VertexSet {
    VertexSet::from_fn(n, |_| rng.random_bool(density)).expect("valid dimension")
}

/// Solutions of a cover instance by trying every subfamily.
pub fn naive_cover_count(inst: &CoverInstance) -> u64 {
    let m = inst.sets().len();
    assert!(m <= 20, "oracle is exponential in the number of sets");
    (0u32..1 << m)
        .filter(|mask| {
            let chosen: Vec<usize> = (0..m).filter(|j| mask >> j & 1 == 1).collect();
            inst.is_solution(&chosen)
        })
        .count() as u64
}

pub fn random_cover_instance<R: Rng>(rng: &mut R) -> CoverInstance {
    let k = rng.random_range(1..=6);
    let m = rng.random_range(1..=12);
    let sets: Vec<Vec<usize>> = (0..m)
        .map(|_| {
            let mut s: Vec<usize> = (0..k).filter(|_| rng.random_bool(0.4)).collect();
            if s.is_empty() {
                s.push(rng.random_range(0..k));
            }
            s
        })
        .collect();
    let demand = (0..k).map(|_| rng.random_range(0..=2)).collect();
    CoverInstance::new(demand, sets).expect("well-formed")
}
