use cubepart::appendix::bundled_appendix;
use cubepart::error::Error;
use cubepart::oa::{
    derive_structures, intersection_array, is_resilient, merge_first_two_cells, project_13_to_12,
    project_last_coordinate, shorten, verify_oa, OrthogonalArray,
};
use cubepart::spectral::QuotientMatrix;
use cubepart::{Vertex, VertexSet};

fn entry(k: usize) -> VertexSet {
    bundled_appendix()[k - 1].p0().unwrap()
}

#[test]
fn entry_one_is_a_strength_seven_array() {
    let p0 = entry(1);
    assert!(verify_oa(&p0, 7));
    assert!(!verify_oa(&p0, 8));
    let a = OrthogonalArray::new(p0, 7).unwrap();
    assert_eq!((a.size(), a.length()), (1024, 12));
    let once = shorten(&a, 11, false).unwrap();
    assert_eq!((once.size(), once.length(), once.strength), (512, 11, 6));
    let twice = shorten(&once, 0, true).unwrap();
    assert_eq!((twice.size(), twice.length(), twice.strength), (256, 10, 5));
    assert!(verify_oa(&twice.rows, 5));
}

#[test]
fn overstated_strength_is_rejected() {
    assert!(matches!(OrthogonalArray::new(entry(1), 8), Err(Error::Verification(_))));
}

#[test]
fn syndrome_map_of_the_linear_entry_is_resilient() {
    let p0 = entry(1);
    let base = p0.iter().next().unwrap();
    let code = p0.translate(base);
    assert!(code.contains(Vertex(0)));
    let dual: Vec<u32> = (1..1u32 << 12).filter(|&h| code.iter().all(|x| (x.0 & h).count_ones() % 2 == 0)).collect();
    assert_eq!(dual.len(), 3);
    let (h1, h2) = (dual[0], dual[1]);
    let values: Vec<u32> = (0..1u32 << 12)
        .map(|x| (((x & h1).count_ones() % 2) << 1) | ((x & h2).count_ones() % 2))
        .collect();
    assert!(is_resilient(12, 2, &values, 7).unwrap());
    assert!(!is_resilient(12, 2, &values, 8).unwrap());
    let constant = vec![0u32; 1 << 12];
    assert!(!is_resilient(12, 2, &constant, 0).unwrap());
}

#[test]
fn derived_matrices_hold_for_every_class() {
    for e in bundled_appendix() {
        let d = derive_structures(&e.p0().unwrap()).unwrap();
        assert!(d.self_complementary, "entry {}", e.entry);
        assert_eq!(d.split_matrix, [[0, 3, 8], [3, 0, 8], [4, 4, 3]]);
        assert_eq!(d.distance_matrix, [[3, 8, 0], [4, 3, 4], [0, 8, 3]]);
        assert_eq!(d.intersection_array, (vec![8, 4], vec![4, 8]));
        assert_eq!(intersection_array(&d.code).unwrap(), Some((vec![8, 4], vec![4, 8])));
        let (_, m) = merge_first_two_cells(&d.split).unwrap();
        assert_eq!(m, QuotientMatrix { a: 3, b: 8, c: 8, d: 3 });
    }
}

#[test]
fn projections() {
    let q3 = VertexSet::from_words(3, [0, 7]).unwrap();
    let (p, m) = project_last_coordinate(&q3).unwrap();
    assert_eq!(p.words(), vec![0, 3]);
    assert_eq!(m, QuotientMatrix { a: 0, b: 2, c: 2, d: 0 });
    assert!(matches!(project_13_to_12(&q3), Err(Error::Precondition(_))));
    let (_, m12) = project_last_coordinate(&entry(1)).unwrap();
    assert_eq!(m12, QuotientMatrix { a: 3, b: 8, c: 8, d: 3 });
}
