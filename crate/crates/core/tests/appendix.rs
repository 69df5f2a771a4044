use std::collections::BTreeSet;

use cubepart::appendix::{bundled_appendix, check_appendix, parse_appendix, APPENDIX_TEXT};
use cubepart::error::Error;

#[test]
fn table_round_trips_through_the_parser() {
    let entries = parse_appendix(APPENDIX_TEXT).unwrap();
    assert_eq!(entries, bundled_appendix());
    assert_eq!(entries.iter().map(|e| e.entry).collect::<Vec<_>>(), (1..=16).collect::<Vec<_>>());
    let ranks: Vec<usize> = entries.iter().map(|e| e.rank).collect();
    assert_eq!(ranks.iter().filter(|&&r| r == 10).count(), 1);
    assert_eq!(ranks.iter().filter(|&&r| r == 11).count(), 13);
    assert_eq!(ranks.iter().filter(|&&r| r == 12).count(), 2);
    assert_eq!(entries[0].aut, 84_934_656);
}

#[test]
fn entries_are_disjoint_coset_unions() {
    for e in bundled_appendix() {
        let p0 = e.p0().unwrap();
        assert_eq!(p0.len(), 1024, "entry {}", e.entry);
    }
}

#[test]
fn repeated_coset_is_reported() {
    let mut e = bundled_appendix().remove(1);
    let first = e.repr[0];
    e.repr.push(first);
    assert!(matches!(e.p0(), Err(Error::Verification(_))));
}

#[test]
fn every_field_but_four_orbit_lists_checks_out() {
    let report = check_appendix(&bundled_appendix(), None);
    assert_eq!(report.distinct_classes, 16);
    for e in &report.entries {
        for f in &e.fields {
            if !f.field.starts_with("orbits") {
                assert!(f.ok, "entry {} field {}: stated {} computed {}", e.entry, f.field, f.stated, f.computed);
            }
        }
    }
    let bad: BTreeSet<(usize, &str, &str)> =
        report.mismatches().into_iter().map(|(k, f)| (k, f.field, f.computed.as_str())).collect();
    let expected: BTreeSet<(usize, &str, &str)> = [
        (5, "orbits0", "512 2x256"),
        (5, "orbits1", "1024 3x512 2x256"),
        (9, "orbits1", "1024 3x512 2x256"),
        (12, "orbits1", "2x768 2x384 3x256"),
    ]
    .into_iter()
    .collect();
    assert_eq!(bad, expected);
}

#[test]
fn orbit_sizes_sum_to_cell_sizes_under_the_computed_group() {
    let report = check_appendix(&bundled_appendix(), None);
    for e in &report.entries {
        for f in e.fields.iter().filter(|f| f.field.starts_with("orbits")) {
            let total: usize = f
                .computed
                .split_whitespace()
                .map(|t| match t.split_once('x') {
                    Some((c, s)) => c.parse::<usize>().unwrap() * s.parse::<usize>().unwrap(),
                    None => t.parse().unwrap(),
                })
                .sum();
            let want = if f.field == "orbits0" { 1024 } else { 3072 };
            assert_eq!(total, want, "entry {} {}", e.entry, f.field);
        }
    }
}
