//! Acceptance suite: one line per criterion, nonzero exit when any fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use cubepart::admissibility::{screen, Rule};
use cubepart::appendix::{bundled_appendix, check_appendix};
use cubepart::canonical::{automorphism_info, canonical_form, AutInfo, CanonicalForm};
use cubepart::classify01248::{classify_final, FinalReport, Origin};
use cubepart::classify3975::{self as c3975, CoveringsReport};
use cubepart::constructions::{
    cycle_structure, double, fdf_q12, fdf_spectrum, find_seed_partitions, match_sign_table, DoublingMode,
};
use cubepart::exact_cover::{covering_lower_bound, derived_covering};
use cubepart::oa::{derived_class_counts, derive_structures, merge_first_two_cells};
use cubepart::spectral::{
    composite_edge_counts, directional_norms, inverse_wht, kernel_elements, quotient_matrix, wht,
};
use cubepart::{IntegerFunction, QuotientMatrix, VertexSet};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t <= limit, format!("took {t:.1?}, limit {limit:?}"))
}

fn qm(a: u32, b: u32, c: u32, d: u32) -> QuotientMatrix {
    QuotientMatrix::new(a, b, c, d).expect("equal row sums")
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let rejected = [qm(1, 11, 5, 7), qm(2, 22, 10, 14), qm(5, 19, 13, 11)];
    let accepted = [
        qm(3, 9, 7, 5),
        qm(0, 12, 4, 8),
        qm(0, 3, 1, 2),
        qm(1, 5, 3, 3),
        qm(0, 6, 2, 4),
        qm(1, 23, 9, 15),
        qm(3, 21, 11, 13),
        qm(7, 17, 15, 9),
    ];
    for m in &rejected {
        let v = screen(m);
        ensure(!v.passed && v.failed_rules() == vec![Rule::Div3], format!("{m}: failed rules {:?}", v.failed_rules()))?;
    }
    for m in &accepted {
        let v = screen(m);
        ensure(v.passed, format!("{m}: failed rules {:?}", v.failed_rules()))?;
    }
    within(start, Duration::from_secs(1))?;
    Ok(format!("3 rejected by DIV3, 8 pass, {:.1?}", start.elapsed()))
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let m = qm(3, 9, 7, 5);
    let mut forms = BTreeSet::new();
    for choice in [0x000u16, 0x001] {
        let black = fdf_q12(choice).map_err(|e| e.to_string())?;
        forms.insert(canonical_form(&black));
        let ft = wht(&IntegerFunction::associated(&black, &m));
        let support = ft.support();
        ensure(ft.sum_of_squares() == 63 << 24, format!("sum of squares {}", ft.sum_of_squares()))?;
        ensure(ft.coeffs().iter().all(|&c| c == 0 || c == 4096 || c == -4096), "coefficient outside {0, ±2^12}")?;
        ensure(support.len() == 63 && support.iter().all(|(v, _)| v.weight() == 8), "support is not 63 words of weight 8")?;
        ensure(directional_norms(&ft).iter().all(|&x| x == 21 << 24), "directional norms differ from 21·2^24")?;
        let edges = composite_edge_counts(&black);
        ensure(edges.iter().all(|&e| e == 1344), format!("composite edges {edges:?}"))?;
    }
    ensure(forms.len() == 2, "the two choices are equivalent")?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("two classes verified, {:.1?}", start.elapsed()))
}

fn criterion_3() -> (Check, Option<Vec<CoveringsReport>>) {
    let start = Instant::now();
    let pipeline = match c3975::run_stages() {
        Ok(p) => p,
        Err(e) => return (Err(e.to_string()), None),
    };
    let coverings = pipeline.coverings.clone();
    let check = (|| {
        let b = &pipeline.bitriples;
        let simple = b.iter().filter(|c| c.has_simple_bitriple).count();
        let mut doubled: BTreeMap<usize, usize> = BTreeMap::new();
        for c in b {
            if let Some(k) = c.doubled_bibitriples {
                *doubled.entry(k).or_default() += 1;
            }
        }
        let split = (simple, doubled.get(&0), doubled.get(&1), doubled.get(&2), doubled.get(&4));
        ensure(b.len() == 36 && split == (4, Some(&23), Some(&6), Some(&2), Some(&1)), format!("bitriple split {split:?}"))?;
        let mut dist: Vec<usize> = pipeline.coverings.iter().map(|r| r.classes.len()).filter(|&k| k > 0).collect();
        dist.sort_unstable();
        ensure(dist == vec![1, 1, 15, 51, 112], format!("covering classes {dist:?}"))?;
        ensure(pipeline.coverings.iter().all(|r| r.double_count_ok), "covering double count")?;
        ensure(pipeline.survivors.len() == 7, format!("{} parity survivors", pipeline.survivors.len()))?;
        let consistent: Vec<_> = pipeline.sign_cases.iter().filter(|c| c.consistent).collect();
        ensure(consistent.len() == 2, format!("{} consistent sign systems", consistent.len()))?;
        let mut cases: Vec<(u64, usize)> = Vec::new();
        for c in &consistent {
            ensure(c.rank == 44 && c.unknowns - c.rank == 19, format!("rank {} with {} unknowns", c.rank, c.unknowns))?;
            cases.push((c.cosets, c.accepted));
        }
        cases.sort_unstable();
        ensure(cases == vec![(256, 6), (512, 12)], format!("cosets/accepted {cases:?}"))?;
        let report = c3975::finish(pipeline.clone()).map_err(|e| e.to_string())?;
        ensure(report.final_double_count_ok && report.cases_homogeneous, "final double count")?;
        ensure(report.classes.len() == 2, format!("{} final classes", report.classes.len()))?;
        let mut shapes = BTreeSet::new();
        for c in &report.classes {
            let info = automorphism_info(&c.first_cell);
            ensure(info.order == 48, format!("|Aut| = {}", info.order))?;
            let inside = AutInfo::orbit_multiset(&info.cell_orbit_sizes.0);
            let outside = AutInfo::orbit_multiset(&info.cell_orbit_sizes.1);
            ensure(inside == vec![(48, 30), (24, 14), (8, 2)], format!("black orbits {inside:?}"))?;
            ensure(outside == vec![(48, 40), (24, 16)], format!("white orbits {outside:?}"))?;
            let mut orbits: Vec<usize> = info.coordinate_orbits.iter().map(Vec::len).collect();
            orbits.sort_unstable();
            shapes.insert((kernel_elements(&c.first_cell).len(), orbits));
        }
        let expected: BTreeSet<_> = [(2, vec![12]), (4, vec![6, 6])].into_iter().collect();
        ensure(shapes == expected, format!("kernel/orbit shapes {shapes:?}"))?;
        within(start, Duration::from_secs(3600))?;
        Ok(format!("36 / 180 / 7 / 2 / 2 classes, {:.1?}", start.elapsed()))
    })();
    (check, Some(coverings))
}

fn criterion_4() -> (Check, Option<FinalReport>) {
    let start = Instant::now();
    let report = match classify_final(&[Origin::P0, Origin::P1]) {
        Ok(r) => r,
        Err(e) => return (Err(e.to_string()), None),
    };
    let check = (|| {
        let counts: BTreeMap<(Origin, usize), usize> =
            report.stages.iter().map(|s| ((s.origin, s.radius), s.classes)).collect();
        let expected: BTreeMap<(Origin, usize), usize> = [
            ((Origin::P0, 2), 94),
            ((Origin::P1, 2), 6),
            ((Origin::P0, 3), 34),
            ((Origin::P1, 3), 222),
            ((Origin::P0, 4), 37),
            ((Origin::P1, 4), 81),
        ]
        .into_iter()
        .collect();
        ensure(counts == expected, format!("stage counts {counts:?}"))?;
        ensure(report.stages.iter().all(|s| s.double_count_ok), "stage double count")?;
        ensure(report.all_completed, format!("completion failures {:?}", report.failures))?;
        ensure(report.chains_agree, "chains disagree")?;
        ensure(report.final_double_count_ok, "final double count")?;
        ensure(report.classes.len() == 16, format!("{} final classes", report.classes.len()))?;
        ensure(report.rank_census == vec![(10, 1), (11, 13), (12, 2)], format!("rank census {:?}", report.rank_census))?;
        within(start, Duration::from_secs(3 * 3600))?;
        Ok(format!("94/6, 34/222, 37/81, 16 classes, {:.1?}", start.elapsed()))
    })();
    (check, Some(report))
}

fn criterion_5(computed: Option<&FinalReport>) -> Check {
    let start = Instant::now();
    let computed = computed.ok_or("classification unavailable")?;
    let forms: Vec<CanonicalForm> = computed.classes.iter().map(|c| c.form.clone()).collect();
    let entries = bundled_appendix();
    ensure(entries.len() == 16, format!("{} entries", entries.len()))?;
    let report = check_appendix(&entries, Some(&forms));
    let matched = report.matched.clone().unwrap_or_default();
    let distinct: BTreeSet<usize> = matched.iter().flatten().copied().collect();
    ensure(
        matched.iter().all(Option::is_some) && distinct.len() == 16 && report.distinct_classes == 16,
        format!("matched {} of 16 entries to distinct classes", distinct.len()),
    )?;
    for (e, idx) in report.entries.iter().zip(&matched) {
        let class = &computed.classes[idx.expect("checked")];
        let aut_ok = e.fields.iter().any(|f| f.field == "aut" && f.computed == class.automorphism_order.to_string());
        ensure(aut_ok, format!("entry {}: |Aut| differs from the matched class", e.entry))?;
    }
    within(start, Duration::from_secs(1800))?;
    let bad: Vec<String> = report
        .mismatches()
        .iter()
        .map(|(e, f)| format!("entry {e} {}: printed {}, computed {}", f.field, f.stated, f.computed))
        .collect();
    ensure(bad.is_empty(), bad.join("; "))?;
    Ok(format!("16/16 entries verified and matched, {:.1?}", start.elapsed()))
}

fn criterion_6() -> Check {
    let start = Instant::now();
    let p0s: Vec<VertexSet> = bundled_appendix().iter().map(|e| e.p0()).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    let counts = derived_class_counts(&p0s).map_err(|e| e.to_string())?;
    ensure(counts.arrays == 16, format!("{} arrays", counts.arrays))?;
    ensure(counts.shortened == 37, format!("{} shortened arrays", counts.shortened))?;
    ensure(counts.split_partitions == 37, format!("{} split 3-partitions", counts.split_partitions))?;
    ensure(counts.distance_partitions == 37, format!("{} distance 3-partitions", counts.distance_partitions))?;
    ensure(counts.codes == 37, format!("{} codes", counts.codes))?;
    ensure(counts.intersection_arrays == vec![(vec![8, 4], vec![4, 8])], format!("arrays {:?}", counts.intersection_arrays))?;
    for p in &p0s {
        let d = derive_structures(p).map_err(|e| e.to_string())?;
        let (_, m) = merge_first_two_cells(&d.split).map_err(|e| e.to_string())?;
        ensure(m == qm(3, 8, 8, 3), format!("merged matrix {m}"))?;
    }
    within(start, Duration::from_secs(3600))?;
    Ok(format!("16 / 37 / 37 / 37 / 37, merged [[3,8],[8,3]], {:.1?}", start.elapsed()))
}

fn criterion_7() -> Check {
    let start = Instant::now();
    let m = qm(3, 9, 7, 5);
    let results: Vec<Result<CanonicalForm, String>> = (0..1u16 << 12)
        .into_par_iter()
        .map(|c| {
            let s = fdf_q12(c).map_err(|e| e.to_string())?;
            let got = quotient_matrix(&s).map_err(|e| e.to_string())?;
            if got != m {
                return Err(format!("choice {c:03x} gives {got}"));
            }
            Ok(canonical_form(&s))
        })
        .collect();
    let forms: BTreeSet<CanonicalForm> = results.into_iter().collect::<Result<_, _>>()?;
    ensure(forms.len() == 2, format!("{} classes among 4096 choices", forms.len()))?;
    let designated = fdf_q12(0xccc).map_err(|e| e.to_string())?;
    ensure(match_sign_table(&fdf_spectrum(&designated)).is_some(), "designated spectrum does not match the sign table")?;
    let seed = find_seed_partitions(6, &qm(1, 5, 3, 3)).map_err(|e| e.to_string())?;
    ensure(seed.classes.len() == 1, "seed is not unique")?;
    for i in 0..4 {
        let d = double(&seed.classes[0].1, &DoublingMode::first_pairs(6, i)).map_err(|e| e.to_string())?;
        let mut expected = Vec::new();
        if i < 3 {
            expected.push((4, 128 * (3 - i)));
        }
        if i > 0 {
            expected.push((8, 64 * i));
        }
        let got = cycle_structure(&d).map_err(|e| e.to_string())?;
        ensure(got == expected, format!("i = {i}: cycles {got:?}"))?;
    }
    within(start, Duration::from_secs(1800))?;
    Ok(format!("4096 choices in 2 classes, sign table, cycle censuses, {:.1?}", start.elapsed()))
}

fn criterion_8(coverings: Option<&[CoveringsReport]>) -> Check {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed);

    // Parseval and involution
    for _ in 0..64 {
        let n = rng.random_range(1..=12);
        let values: Vec<i64> = (0..1usize << n).map(|_| rng.random_range(-50..=50)).collect();
        let f = IntegerFunction::new(n, values).map_err(|e| e.to_string())?;
        let s = wht(&f);
        ensure(s.sum_of_squares() == f.norm_squared() << n, format!("Parseval fails at n = {n}"))?;
        ensure(inverse_wht(&s).map_err(|e| e.to_string())? == f, format!("inverse fails at n = {n}"))?;
    }

    // quotient matrix against neighbour counting
    let mut equitable_seen = 0;
    for n in 1..=6 {
        for density in [0.2, 0.5] {
            for _ in 0..100 {
                let s = common::random_set(&mut rng, n, density);
                if s.is_empty() || s.len() == s.order() {
                    continue;
                }
                let brute = common::brute_quotient(&s);
                match (quotient_matrix(&s), brute) {
                    (Ok(m), Some(b)) => ensure([[m.a, m.b], [m.c, m.d]] == b, format!("{m} vs {b:?}"))?,
                    (Err(_), None) => {}
                    (got, want) => return Err(format!("verifier {got:?} vs brute force {want:?}")),
                }
            }
        }
    }
    for (n, m) in [(3, qm(0, 3, 1, 2)), (6, qm(1, 5, 3, 3)), (6, qm(0, 6, 2, 4))] {
        for (_, s) in find_seed_partitions(n, &m).map_err(|e| e.to_string())?.classes {
            ensure(common::brute_quotient(&s) == Some([[m.a, m.b], [m.c, m.d]]), format!("seed for {m}"))?;
            equitable_seen += 1;
        }
    }

    // canonical form invariance
    let mut objects: Vec<VertexSet> = (3..=8).map(|n| common::random_set(&mut rng, n, 0.4)).collect();
    objects.push(fdf_q12(0x000).map_err(|e| e.to_string())?);
    objects.push(bundled_appendix()[7].p0().map_err(|e| e.to_string())?);
    for s in &objects {
        let base = canonical_form(s);
        let images: Vec<_> = (0..1000).map(|_| common::random_automorphism(&mut rng, s.dim())).collect();
        let bad = images.par_iter().find_any(|g| canonical_form(&g.apply_set(s)) != base);
        ensure(bad.is_none(), format!("form changes under {bad:?} on Q_{}", s.dim()))?;
    }

    // exact cover against subset enumeration
    for _ in 0..300 {
        let inst = common::random_cover_instance(&mut rng);
        ensure(inst.count_solutions() == common::naive_cover_count(&inst), format!("cover count differs on {inst:?}"))?;
    }

    // covering bounds on every generated covering
    let coverings = coverings.ok_or("coverings unavailable")?;
    let b3 = covering_lower_bound(3, 4, 12).map_err(|e| e.to_string())?;
    let b2 = covering_lower_bound(2, 3, 11).map_err(|e| e.to_string())?;
    ensure(b3 >= 55 && b2 >= 19, format!("bounds {b3}, {b2}"))?;
    let mut checked = 0;
    for r in coverings {
        for c in &r.classes {
            let blocks = &c.covering.blocks;
            ensure(blocks.len() as u64 >= b3, "covering below the (3,4,12) bound")?;
            for a in 0..12 {
                let d = derived_covering(blocks, 3, 12, a).map_err(|e| e.to_string())?;
                ensure(d.len() as u64 >= b2, "derived covering below the (2,3,11) bound")?;
            }
            checked += 1;
        }
    }
    within(start, Duration::from_secs(1800))?;
    Ok(format!(
        "transforms, {equitable_seen} seeds, {} objects x 1000 automorphisms, 300 cover instances, {checked} coverings, {:.1?}",
        objects.len(),
        start.elapsed()
    ))
}

fn guarded<T>(f: impl FnOnce() -> T) -> Result<T, String> {
    catch_unwind(AssertUnwindSafe(f)).map_err(|p| {
        p.downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into())
    })
}

fn main() -> ExitCode {
    let mut lines: Vec<(u32, Check)> = Vec::new();
    let mut report = |k: u32, c: Check| {
        match &c {
            Ok(d) => println!("criterion {k}: PASS  {d}"),
            Err(e) => println!("criterion {k}: FAIL  {e}"),
        }
        lines.push((k, c));
    };
    report(1, guarded(criterion_1).and_then(|c| c));
    report(2, guarded(criterion_2).and_then(|c| c));
    let (c3, coverings) = guarded(criterion_3).unwrap_or_else(|e| (Err(e), None));
    report(3, c3);
    let (c4, classes) = guarded(criterion_4).unwrap_or_else(|e| (Err(e), None));
    report(4, c4);
    report(5, guarded(|| criterion_5(classes.as_ref())).and_then(|c| c));
    report(6, guarded(criterion_6).and_then(|c| c));
    report(7, guarded(criterion_7).and_then(|c| c));
    report(8, guarded(|| criterion_8(coverings.as_deref())).and_then(|c| c));
    let failed = lines.iter().filter(|(_, c)| c.is_err()).count();
    println!("acceptance: {} passed, {failed} failed", lines.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
