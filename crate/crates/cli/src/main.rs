use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cubepart::admissibility::screen;
use cubepart::appendix::{bundled_appendix, check_appendix, format_orbits, parse_appendix};
use cubepart::canonical::{automorphism_info, AutInfo};
use cubepart::classify01248::{self as c01248, Origin};
use cubepart::classify3975 as c3975;
use cubepart::constructions::{double, fdf_q12, match_sign_table, fdf_spectrum, DoublingMode};
use cubepart::cube::affine_rank;
use cubepart::io::{read_partition, write_partition};
use cubepart::oa::{derived_class_counts, shorten, OrthogonalArray};
use cubepart::spectral::{correlation_immunity_order, kernel_elements, quotient_matrix, verify_fourier_system, wht};
use cubepart::{IntegerFunction, QuotientMatrix, VertexSet};

#[derive(Parser)]
#[command(name = "cubepart", version, about = "Equitable 2-partitions of the binary n-cube")]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads (0 = all cores). Output does not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the necessary conditions on a quotient matrix [[a,b],[c,d]].
    Screen { a: u32, b: u32, c: u32, d: u32 },
    /// Check a partition file: matrix, Fourier identities, invariants.
    Verify {
        file: PathBuf,
        /// Also compute the automorphism group.
        #[arg(long)]
        aut: bool,
    },
    /// Walsh-Hadamard spectrum of the associated function of a partition file.
    Spectrum {
        file: PathBuf,
        /// Print every nonzero coefficient.
        #[arg(long)]
        dump: bool,
    },
    /// Run one of the two classifications on Q_12.
    Classify {
        #[command(subcommand)]
        which: Classify,
    },
    /// Build partitions.
    Construct {
        #[command(subcommand)]
        kind: Construct,
    },
    /// Orthogonal arrays.
    Oa {
        #[command(subcommand)]
        action: OaAction,
    },
    /// Check the table of the 16 [[0,12],[4,8]] classes.
    AppendixCheck {
        /// Table file; the bundled copy is used when omitted.
        file: Option<PathBuf>,
        /// Also run the classification and pair entries with its classes.
        #[arg(long = "match")]
        match_classes: bool,
        /// Write each entry as a partition file into this directory.
        #[arg(long)]
        export: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Stage3975 {
    Bitriples,
    Coverings,
    Parity,
    Signs,
    Final,
}

#[derive(Clone, Copy, ValueEnum)]
enum Chain {
    P0,
    P1,
    Both,
}

#[derive(Subcommand)]
enum Classify {
    /// Partitions with matrix [[3,9],[7,5]].
    #[command(name = "3975")]
    C3975 {
        #[arg(long, value_enum, default_value = "final")]
        stage: Stage3975,
    },
    /// Partitions with matrix [[0,12],[4,8]].
    #[command(name = "01248")]
    C01248 {
        #[arg(long, value_enum, default_value = "both")]
        from: Chain,
        /// Stop after the local stage of this radius (2, 3 or 4).
        #[arg(long)]
        radius: Option<usize>,
    },
}

#[derive(Subcommand)]
enum Construct {
    /// The [[3,9],[7,5]] partition of Q_12 for a 12-bit face choice.
    Fdf {
        /// Choice bits in hex.
        #[arg(long, default_value = "ccc")]
        choice: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Doubling of a partition file to twice the dimension.
    Double {
        file: PathBuf,
        /// One character per coordinate pair: `s` for GF(2) addition, `z`
        /// for Z_4 addition through the Gray map.
        #[arg(long, default_value = "")]
        mode: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum OaAction {
    /// Check an OA file.
    Check { file: PathBuf },
    /// The first cell of a [[0,n],[c,n-c]] partition file as an OA.
    Export { file: PathBuf },
    /// Shorten an OA file at one coordinate.
    Shorten {
        file: PathBuf,
        #[arg(long)]
        coord: usize,
        #[arg(long, default_value_t = 0)]
        value: u8,
    },
    /// Count classes of arrays, codes and 3-partitions derived from the table.
    Classes,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(Outcome { text, json, ok }) => {
            if cli.json {
                let doc = json!({ "schema": "v1", "ok": ok, "report": json });
                emit(&format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable report")));
            } else {
                emit(&text);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(s: &str) {
    let _ = std::io::stdout().lock().write_all(s.as_bytes());
}

struct Outcome {
    text: String,
    json: Value,
    ok: bool,
}

type CliResult = Result<Outcome, Box<dyn std::error::Error>>;

fn read(path: &Path) -> Result<String, Box<dyn std::error::Error>> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn write_or_print(out: &Option<PathBuf>, text: &str) -> Result<String, Box<dyn std::error::Error>> {
    match out {
        Some(p) => {
            fs::write(p, text).map_err(|e| format!("{}: {e}", p.display()))?;
            Ok(format!("wrote {}\n", p.display()))
        }
        None => Ok(text.to_string()),
    }
}

fn run(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Screen { a, b, c, d } => cmd_screen(QuotientMatrix::new(*a, *b, *c, *d)?),
        Command::Verify { file, aut } => cmd_verify(file, *aut),
        Command::Spectrum { file, dump } => cmd_spectrum(file, *dump),
        Command::Classify { which: Classify::C3975 { stage } } => cmd_3975(*stage),
        Command::Classify { which: Classify::C01248 { from, radius } } => cmd_01248(*from, *radius),
        Command::Construct { kind } => cmd_construct(kind),
        Command::Oa { action } => cmd_oa(action),
        Command::AppendixCheck { file, match_classes, export } => cmd_appendix(file.as_deref(), *match_classes, export.as_deref()),
    }
}

fn cmd_screen(m: QuotientMatrix) -> CliResult {
    let v = screen(&m);
    let failed = v.failed_rules();
    let mut text = if v.passed {
        format!("PASS {}\n", v.matrix)
    } else {
        let names: Vec<String> = failed.iter().map(|r| r.to_string()).collect();
        format!("FAIL({}) {}\n", names.join(","), v.matrix)
    };
    for r in &v.reasons {
        let status = match (r.applicable, r.passed) {
            (false, _) => "n/a",
            (true, true) => "ok",
            (true, false) => "fail",
        };
        text.push_str(&format!("  {:<5}{:<6}{}\n", r.rule.to_string(), status, r.detail));
    }
    Ok(Outcome { text, json: serde_json::to_value(&v)?, ok: v.passed })
}

fn cmd_verify(file: &Path, aut: bool) -> CliResult {
    let (c0, m) = read_partition(&read(file)?)?;
    let n = c0.dim();
    let fourier = verify_fourier_system(&c0, &m)?;
    let ci = correlation_immunity_order(&c0)?;
    let rank = affine_rank(&c0)?;
    let kernel = kernel_elements(&c0).len();
    let mut text = format!("matrix {m} on Q_{n}, |C0| = {}\n", c0.len());
    text.push_str(&format!(
        "fourier: weight {} product {} norm {}\n",
        fourier.weight_identity, fourier.product_identity, fourier.norm_identity
    ));
    if let Some(f) = &fourier.first_failure {
        text.push_str(&format!("  first failure: {f}\n"));
    }
    text.push_str(&format!("correlation immunity {ci}, affine rank {rank}, kernel size {kernel}\n"));
    let mut json = json!({
        "matrix": m, "n": n, "size": c0.len(), "fourier": fourier,
        "correlation_immunity": ci, "affine_rank": rank, "kernel_size": kernel,
    });
    if aut {
        let info = automorphism_info(&c0);
        text.push_str(&format!(
            "|Aut| = {}, coordinate orbits {:?}, orbits on C0: {}; on C1: {}\n",
            info.order,
            info.coordinate_orbits,
            format_orbits(&AutInfo::orbit_multiset(&info.cell_orbit_sizes.0)),
            format_orbits(&AutInfo::orbit_multiset(&info.cell_orbit_sizes.1))
        ));
        json["automorphism_order"] = json!(info.order.to_string());
        json["coordinate_orbits"] = json!(info.coordinate_orbits);
        json["cell_orbit_sizes"] = json!(info.cell_orbit_sizes);
    }
    Ok(Outcome { text, json, ok: fourier.all_hold() })
}

fn cmd_spectrum(file: &Path, dump: bool) -> CliResult {
    let (c0, m) = read_partition(&read(file)?)?;
    let ft = wht(&IntegerFunction::associated(&c0, &m));
    let support = ft.support();
    let mut by_weight = std::collections::BTreeMap::new();
    for (v, _) in &support {
        *by_weight.entry(v.weight()).or_insert(0usize) += 1;
    }
    let mut values: Vec<i64> = support.iter().map(|&(_, c)| c).collect();
    values.sort_unstable();
    values.dedup();
    let mut text = format!("{} nonzero coefficients, sum of squares {}\n", support.len(), ft.sum_of_squares());
    text.push_str(&format!("by weight {by_weight:?}, values {values:?}\n"));
    if dump {
        text.push_str(&ft.dump());
    }
    let json = json!({
        "support_size": support.len(),
        "sum_of_squares": ft.sum_of_squares().to_string(),
        "by_weight": by_weight,
        "values": values,
        "coefficients": if dump {
            support.iter().map(|(v, c)| json!([v.to_hex(c0.dim()), c])).collect::<Vec<_>>()
        } else {
            Vec::new()
        },
    });
    Ok(Outcome { text, json, ok: true })
}

fn cmd_3975(stage: Stage3975) -> CliResult {
    let bitriples = c3975::enumerate_bitriple_systems();
    let mut text = format!("{} bitriple classes\n", bitriples.len());
    let simple = bitriples.iter().filter(|b| b.has_simple_bitriple).count();
    let mut doubled = std::collections::BTreeMap::new();
    for b in &bitriples {
        if let Some(k) = b.doubled_bibitriples {
            *doubled.entry(k).or_insert(0usize) += 1;
        }
    }
    text.push_str(&format!("  with a simple bitriple: {simple}; bibitriple systems by doubled count: {doubled:?}\n"));
    let mut json = json!({ "bitriple_classes": bitriples.len(), "with_simple_bitriple": simple, "doubled_bibitriples": doubled });
    if matches!(stage, Stage3975::Bitriples) {
        return Ok(Outcome { text, json, ok: true });
    }
    let coverings = c3975::all_coverings(&bitriples);
    let total: usize = coverings.iter().map(|r| r.classes.len()).sum();
    let dc = coverings.iter().all(|r| r.double_count_ok);
    text.push_str(&format!("{total} covering classes, double count {}\n", ok_str(dc)));
    let per: Vec<Value> = coverings
        .iter()
        .filter(|r| !r.classes.is_empty())
        .map(|r| {
            text.push_str(&format!(
                "  bitriple class {}: {} classes from {} labeled solutions\n",
                r.bitriple_class,
                r.classes.len(),
                r.labeled_solutions
            ));
            json!({ "bitriple_class": r.bitriple_class, "classes": r.classes.len(), "labeled": r.labeled_solutions, "double_count_ok": r.double_count_ok })
        })
        .collect();
    json["covering_classes"] = json!(total);
    json["coverings"] = json!(per);
    if matches!(stage, Stage3975::Coverings) {
        return Ok(Outcome { text, json, ok: dc });
    }
    let survivors = c3975::parity_survivors(&coverings);
    text.push_str(&format!("{} survivors\n", survivors.len()));
    json["parity_survivors"] = json!(survivors.len());
    if matches!(stage, Stage3975::Parity) {
        return Ok(Outcome { text, json, ok: dc });
    }
    let sign_cases = survivors
        .iter()
        .map(|c| c3975::solve_signs(&c.covering))
        .collect::<cubepart::Result<Vec<_>>>()?;
    for (i, c) in sign_cases.iter().enumerate() {
        if c.consistent {
            text.push_str(&format!(
                "  survivor {i}: consistent, rank {}, psi span {}, {} cosets, {} accepted\n",
                c.rank, c.psi_span_dim, c.cosets, c.accepted
            ));
        } else {
            text.push_str(&format!("  survivor {i}: inconsistent\n"));
        }
    }
    json["sign_cases"] = serde_json::to_value(&sign_cases)?;
    if matches!(stage, Stage3975::Signs) {
        return Ok(Outcome { text, json, ok: dc });
    }
    let report = c3975::finish(c3975::Pipeline { bitriples, coverings, survivors, sign_cases })?;
    text.push_str(&format!(
        "{} classes, double count {}\n",
        report.classes.len(),
        ok_str(report.final_double_count_ok)
    ));
    for c in &report.classes {
        let info = automorphism_info(&c.first_cell);
        text.push_str(&format!(
            "  {} |Aut| = {} kernel {} coordinate orbits {:?}\n",
            c.form.digest(),
            c.automorphism_order,
            kernel_elements(&c.first_cell).len(),
            info.coordinate_orbits.iter().map(Vec::len).collect::<Vec<_>>()
        ));
    }
    let ok = dc && report.coverings_double_count_ok && report.final_double_count_ok && report.cases_homogeneous;
    json["final"] = serde_json::to_value(&report)?;
    Ok(Outcome { text, json, ok })
}

fn origins(from: Chain) -> Vec<Origin> {
    match from {
        Chain::P0 => vec![Origin::P0],
        Chain::P1 => vec![Origin::P1],
        Chain::Both => vec![Origin::P0, Origin::P1],
    }
}

fn stage_line(r: &c01248::StageReport) -> String {
    format!(
        "{:?} radius {}: {} classes, {} labeled, double count {}\n",
        r.origin,
        r.radius,
        r.classes,
        r.labeled,
        ok_str(r.double_count_ok)
    )
}

fn cmd_01248(from: Chain, radius: Option<usize>) -> CliResult {
    if let Some(r) = radius {
        let mut text = String::new();
        let mut reports = Vec::new();
        for o in origins(from) {
            let (_, reps) = c01248::run_chain(o, r)?;
            reports.extend(reps);
        }
        for r in &reports {
            text.push_str(&stage_line(r));
        }
        let ok = reports.iter().all(|r| r.double_count_ok);
        return Ok(Outcome { text, json: json!({ "stages": reports }), ok });
    }
    let report = c01248::classify_final(&origins(from))?;
    let mut text = String::new();
    for r in &report.stages {
        text.push_str(&stage_line(r));
    }
    text.push_str(&format!(
        "{} classes, rank census {:?}, chains agree {}, double count {}\n",
        report.classes.len(),
        report.rank_census,
        report.chains_agree,
        ok_str(report.final_double_count_ok)
    ));
    for c in &report.classes {
        text.push_str(&format!(
            "  {} rank {} |Aut| = {} CI {}\n",
            c.form.digest(),
            c.affine_rank,
            c.automorphism_order,
            c.correlation_immunity
        ));
    }
    for f in &report.failures {
        text.push_str(&format!("  completion failed: {f}\n"));
    }
    let ok = report.all_completed
        && report.chains_agree
        && report.final_double_count_ok
        && report.stages.iter().all(|s| s.double_count_ok);
    Ok(Outcome { text, json: serde_json::to_value(&report)?, ok })
}

fn cmd_construct(kind: &Construct) -> CliResult {
    match kind {
        Construct::Fdf { choice, out } => {
            let bits = u16::from_str_radix(choice.trim_start_matches("0x"), 16)
                .ok()
                .filter(|&b| b < 1 << 12)
                .ok_or_else(|| format!("choice {choice:?} is not a 12-bit hex number"))?;
            let black = fdf_q12(bits)?;
            let m = quotient_matrix(&black)?;
            let table = match_sign_table(&fdf_spectrum(&black));
            let text = write_or_print(out, &write_partition(&black, &m))?;
            let json = json!({ "choice": format!("{bits:03x}"), "matrix": m, "sign_table_symmetry": table });
            Ok(Outcome { text, json, ok: true })
        }
        Construct::Double { file, mode, out } => {
            let (c0, _) = read_partition(&read(file)?)?;
            let mode = if mode.is_empty() { DoublingMode::standard(c0.dim()) } else { DoublingMode::parse(mode)? };
            let d = double(&c0, &mode)?;
            let m = quotient_matrix(&d)?;
            let text = write_or_print(out, &write_partition(&d, &m))?;
            Ok(Outcome { text, json: json!({ "matrix": m, "n": d.dim(), "size": d.len() }), ok: true })
        }
    }
}

fn cmd_oa(action: &OaAction) -> CliResult {
    match action {
        OaAction::Check { file } => {
            let a = OrthogonalArray::parse(&read(file)?)?;
            let text = format!("OA({},{},2,{}) verified\n", a.size(), a.length(), a.strength);
            Ok(Outcome { text, json: json!({ "N": a.size(), "n": a.length(), "t": a.strength }), ok: true })
        }
        OaAction::Export { file } => {
            let (c0, m) = read_partition(&read(file)?)?;
            if m.a != 0 || (m.b + m.c) % 2 != 0 {
                return Err(format!("{m} does not give an orthogonal array of the expected strength").into());
            }
            let a = OrthogonalArray::new(c0, (m.b + m.c) / 2 - 1)?;
            Ok(Outcome { text: a.to_text(), json: json!({ "N": a.size(), "n": a.length(), "t": a.strength }), ok: true })
        }
        OaAction::Shorten { file, coord, value } => {
            let a = OrthogonalArray::parse(&read(file)?)?;
            let s = shorten(&a, *coord, *value != 0)?;
            Ok(Outcome { text: s.to_text(), json: json!({ "N": s.size(), "n": s.length(), "t": s.strength }), ok: true })
        }
        OaAction::Classes => {
            let p0s: Vec<VertexSet> = bundled_appendix().iter().map(|e| e.p0()).collect::<cubepart::Result<_>>()?;
            let c = derived_class_counts(&p0s)?;
            let text = format!(
                "{} arrays OA(1024,12,2,7)\n{} shortened arrays OA(512,11,2,6)\n{} partitions [[0,3,8],[3,0,8],[4,4,3]]\n{} partitions [[3,8,0],[4,3,4],[0,8,3]]\n{} completely regular codes, arrays {:?}\n",
                c.arrays, c.shortened, c.split_partitions, c.distance_partitions, c.codes, c.intersection_arrays
            );
            Ok(Outcome { text, json: serde_json::to_value(&c)?, ok: true })
        }
    }
}

fn cmd_appendix(file: Option<&Path>, match_classes: bool, export: Option<&Path>) -> CliResult {
    let entries = match file {
        Some(p) => parse_appendix(&read(p)?)?,
        None => bundled_appendix(),
    };
    let computed = if match_classes {
        let r = c01248::classify_final(&[Origin::P0, Origin::P1])?;
        Some(r.classes.into_iter().map(|c| c.form).collect::<Vec<_>>())
    } else {
        None
    };
    let report = check_appendix(&entries, computed.as_deref());
    let mut text = String::new();
    for (i, e) in report.entries.iter().enumerate() {
        if e.all_ok() {
            text.push_str(&format!("entry {:>2}: OK\n", e.entry));
        } else {
            for f in e.mismatches() {
                text.push_str(&format!("entry {:>2}: {} stated {} computed {}\n", e.entry, f.field, f.stated, f.computed));
            }
        }
        if let (Some(dir), Some(p0)) = (export, &e.p0) {
            let m = quotient_matrix(p0)?;
            let path = dir.join(format!("entry{:02}.eqp", entries[i].entry));
            fs::write(&path, write_partition(p0, &m)).map_err(|err| format!("{}: {err}", path.display()))?;
        }
    }
    let ok_entries = report.entries.iter().filter(|e| e.all_ok()).count();
    text.push_str(&format!("{ok_entries}/{} OK, {} distinct classes\n", report.entries.len(), report.distinct_classes));
    let mut ok = ok_entries == report.entries.len() && report.distinct_classes == report.entries.len();
    if let Some(m) = &report.matched {
        let hits = m.iter().filter(|x| x.is_some()).count();
        let n = computed.as_ref().map_or(0, Vec::len);
        text.push_str(&format!("{hits} entries matched among {n} computed classes\n"));
        ok &= hits == report.entries.len() && n == report.entries.len();
    }
    Ok(Outcome { text, json: serde_json::to_value(&report)?, ok })
}

fn ok_str(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAILED"
    }
}
