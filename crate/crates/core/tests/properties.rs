mod common;

use proptest::prelude::*;

use cubepart::canonical::{canonical_form, full_canonical};
use cubepart::exact_cover::CoverInstance;
use cubepart::io::{read_partition, write_partition};
use cubepart::oa::{intersection_array, verify_oa, OrthogonalArray};
use cubepart::spectral::{correlation_immunity_order, inverse_wht, quotient_matrix, wht};
use cubepart::{CubeAutomorphism, IntegerFunction, Vertex, VertexSet};

fn function(max_n: usize) -> impl Strategy<Value = IntegerFunction> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(-100i64..=100, 1 << n).prop_map(move |v| IntegerFunction::new(n, v).unwrap())
    })
}

fn vertex_set(min_n: usize, max_n: usize) -> impl Strategy<Value = VertexSet> {
    (min_n..=max_n).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), 1 << n)
            .prop_map(move |bits| VertexSet::from_fn(n, |x| bits[x as usize]).unwrap())
    })
}

fn automorphism(n: usize) -> impl Strategy<Value = CubeAutomorphism> {
    (Just((0..n as u8).collect::<Vec<u8>>()).prop_shuffle(), 0..1u32 << n)
        .prop_map(|(p, s)| CubeAutomorphism::new(p, Vertex(s)).unwrap())
}

fn set_with_automorphism(min_n: usize, max_n: usize) -> impl Strategy<Value = (VertexSet, CubeAutomorphism)> {
    vertex_set(min_n, max_n).prop_flat_map(|s| {
        let n = s.dim();
        (Just(s), automorphism(n))
    })
}

fn cover_instance() -> impl Strategy<Value = CoverInstance> {
    (1usize..=6).prop_flat_map(|k| {
        (
            prop::collection::vec(0u32..=2, k),
            prop::collection::vec(prop::collection::btree_set(0..k, 1..=k), 1..=12),
        )
            .prop_map(|(demand, sets)| CoverInstance::new(demand, sets.into_iter().map(|s| s.into_iter().collect()).collect()).unwrap())
    })
}

/// Strength-`t` balance by the definition, one projection at a time.
fn naive_oa(s: &VertexSet, t: u32) -> bool {
    let n = s.dim();
    if !s.len().is_multiple_of(1 << t) {
        return false;
    }
    (0u32..1 << n).filter(|m| m.count_ones() == t).all(|mask| {
        (0u32..1 << n)
            .filter(|p| p & !mask == 0)
            .all(|p| s.iter().filter(|v| v.0 & mask == p).count() == s.len() >> t)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transform_is_an_involution_up_to_scale(f in function(10)) {
        let s = wht(&f);
        prop_assert_eq!(s.sum_of_squares(), f.norm_squared() << f.dim());
        prop_assert_eq!(inverse_wht(&s).unwrap(), f);
    }

    #[test]
    fn quotient_matrix_matches_neighbour_counts(s in vertex_set(1, 6)) {
        prop_assume!(!s.is_empty() && s.len() < s.order());
        match (quotient_matrix(&s), common::brute_quotient(&s)) {
            (Ok(m), Some(b)) => prop_assert_eq!([[m.a, m.b], [m.c, m.d]], b),
            (Err(_), None) => {}
            (got, want) => prop_assert!(false, "{:?} vs {:?}", got, want),
        }
    }

    #[test]
    fn canonical_form_is_invariant((s, g) in set_with_automorphism(1, 7)) {
        prop_assert_eq!(canonical_form(&g.apply_set(&s)), canonical_form(&s));
    }

    #[test]
    fn canonical_labeling_maps_onto_the_form((s, g) in set_with_automorphism(2, 6)) {
        let a = full_canonical(s.dim(), &[s.words()]).unwrap();
        let b = full_canonical(s.dim(), &[g.apply_set(&s).words()]).unwrap();
        prop_assert_eq!(a.labeling.apply_set(&s), b.labeling.apply_set(&g.apply_set(&s)));
        prop_assert_eq!(a.order, b.order);
    }

    #[test]
    fn automorphisms_compose_and_invert((s, g) in set_with_automorphism(1, 8), h in automorphism(8)) {
        prop_assume!(h.dim() == s.dim());
        let gh = g.compose(&h);
        prop_assert_eq!(gh.apply_set(&s), g.apply_set(&h.apply_set(&s)));
        prop_assert_eq!(g.inverse().apply_set(&g.apply_set(&s)), s);
    }

    #[test]
    fn cover_solver_matches_subset_enumeration(inst in cover_instance()) {
        let mut seen = Vec::new();
        let count = inst.solve_all(|sol| seen.push(sol.to_vec()));
        prop_assert_eq!(count, common::naive_cover_count(&inst));
        prop_assert!(seen.iter().all(|sol| inst.is_solution(sol)));
        let n = seen.len();
        seen.sort();
        seen.dedup();
        prop_assert_eq!(seen.len(), n);
    }

    #[test]
    fn cover_text_round_trip(inst in cover_instance()) {
        prop_assert_eq!(CoverInstance::parse(&inst.to_text()).unwrap(), inst);
    }

    #[test]
    fn oa_verifier_matches_definition(s in vertex_set(1, 6), t in 0u32..4) {
        prop_assume!(t as usize <= s.dim());
        prop_assert_eq!(verify_oa(&s, t), naive_oa(&s, t));
    }

    #[test]
    fn strength_agrees_with_correlation_immunity(s in vertex_set(2, 6)) {
        prop_assume!(!s.is_empty() && s.len() < s.order());
        let ci = correlation_immunity_order(&s).unwrap();
        for t in 1..=s.dim() as u32 {
            if s.len() % (1 << t) == 0 {
                prop_assert_eq!(verify_oa(&s, t), t <= ci, "t = {}", t);
            }
        }
    }

    #[test]
    fn oa_text_round_trip(s in vertex_set(1, 6)) {
        prop_assume!(!s.is_empty());
        let a = OrthogonalArray::new(s, 0).unwrap();
        prop_assert_eq!(OrthogonalArray::parse(&a.to_text()).unwrap(), a);
    }

    #[test]
    fn intersection_array_is_an_invariant((s, g) in set_with_automorphism(1, 6)) {
        prop_assume!(!s.is_empty());
        prop_assert_eq!(intersection_array(&g.apply_set(&s)).unwrap(), intersection_array(&s).unwrap());
    }

    #[test]
    fn partition_files_round_trip(g in automorphism(6)) {
        // doubled Q_3 code, matrix [[0,6],[2,4]]
        let base = VertexSet::from_fn(6, |w| matches!((w >> 3) ^ (w & 7), 0 | 7)).unwrap();
        let c0 = g.apply_set(&base);
        let m = quotient_matrix(&c0).unwrap();
        let (back, m2) = read_partition(&write_partition(&c0, &m)).unwrap();
        prop_assert_eq!(m, m2);
        prop_assert_eq!(canonical_form(&back), canonical_form(&base));
    }
}
