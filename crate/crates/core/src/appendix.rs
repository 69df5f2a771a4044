//! The reference table of the 16 classes with matrix `[[0,12],[4,8]]`,
//! kept verbatim in `data/appendix.txt`, and a field-by-field check of it.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::canonical::{automorphism_info, canonical_form, AutInfo, CanonicalForm};
use crate::cube::{affine_rank, span, Vertex, VertexSet};
use crate::error::{Error, Result};
use crate::oa::verify_oa;
use crate::spectral::{correlation_immunity_order, kernel_elements, quotient_matrix, QuotientMatrix};

pub const APPENDIX_TEXT: &str = include_str!("../data/appendix.txt");

const N: usize = 12;

/// Orbit sizes as `(size, count)`, largest size first.
pub type OrbitMultiset = Vec<(usize, usize)>;

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct AppendixEntry {
    pub entry: usize,
    pub rank: usize,
    pub aut: u128,
    pub orbits0: OrbitMultiset,
    pub orbits1: OrbitMultiset,
    pub kernel: Vec<u32>,
    pub repr: Vec<u32>,
}

fn normalize_orbits(mut items: Vec<(usize, usize)>) -> OrbitMultiset {
    items.sort_unstable_by_key(|&(size, _)| std::cmp::Reverse(size));
    let mut out: OrbitMultiset = Vec::new();
    for (size, count) in items {
        match out.last_mut() {
            Some((s, c)) if *s == size => *c += count,
            _ => out.push((size, count)),
        }
    }
    out
}

pub fn format_orbits(m: &[(usize, usize)]) -> String {
    m.iter()
        .map(|&(s, c)| if c == 1 { s.to_string() } else { format!("{c}x{s}") })
        .collect::<Vec<_>>()
        .join(" ")
}

fn parse_orbits(tokens: &[&str]) -> std::result::Result<OrbitMultiset, String> {
    let mut items = Vec::new();
    for t in tokens {
        let (count, size) = match t.split_once('x') {
            Some((c, s)) => (c.parse().map_err(|_| format!("bad count in {t:?}"))?, s),
            None => (1, *t),
        };
        let size: usize = size.parse().map_err(|_| format!("bad orbit size in {t:?}"))?;
        if count == 0 || size == 0 {
            return Err(format!("empty orbit token {t:?}"));
        }
        items.push((size, count));
    }
    Ok(normalize_orbits(items))
}

#[derive(Default)]
struct Partial {
    entry: usize,
    rank: Option<usize>,
    aut: Option<u128>,
    orbits0: Option<OrbitMultiset>,
    orbits1: Option<OrbitMultiset>,
    kernel: Option<Vec<u32>>,
    repr: Vec<u32>,
}

/// Parses the line format of `data/appendix.txt`. `#` starts a comment.
pub fn parse_appendix<'a>(text: &'a str) -> Result<Vec<AppendixEntry>> {
    let mut out = Vec::new();
    let mut cur: Option<Partial> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: line_no, msg };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let (key, rest) = (fields[0], &fields[1..]);
        let words = |rest: &[&str]| -> Result<Vec<u32>> {
            rest.iter()
                .map(|w| Vertex::from_hex(w, N).map(|v| v.0).map_err(|e| err(e.to_string())))
                .collect()
        };
        let single = |rest: &[&'a str]| -> Result<&'a str> {
            match rest {
                [v] => Ok(*v),
                _ => Err(err(format!("`{key}` takes one value"))),
            }
        };
        if key == "entry" {
            if cur.is_some() {
                return Err(err("`entry` before `end`".into()));
            }
            let entry = single(rest)?.parse().map_err(|_| err("bad entry number".into()))?;
            cur = Some(Partial { entry, ..Default::default() });
            continue;
        }
        let p = cur.as_mut().ok_or_else(|| err(format!("`{key}` outside an entry")))?;
        match key {
            "rank" => p.rank = Some(single(rest)?.parse().map_err(|_| err("bad rank".into()))?),
            "aut" => p.aut = Some(single(rest)?.parse().map_err(|_| err("bad group order".into()))?),
            "orbits0" => p.orbits0 = Some(parse_orbits(rest).map_err(err)?),
            "orbits1" => p.orbits1 = Some(parse_orbits(rest).map_err(err)?),
            "ker" => p.kernel = Some(words(rest)?),
            "repr" => p.repr.extend(words(rest)?),
            "end" => {
                let p = cur.take().expect("checked above");
                let missing = |f: &str| err(format!("entry {} has no `{f}`", p.entry));
                if p.repr.is_empty() {
                    return Err(missing("repr"));
                }
                out.push(AppendixEntry {
                    entry: p.entry,
                    rank: p.rank.ok_or_else(|| missing("rank"))?,
                    aut: p.aut.ok_or_else(|| missing("aut"))?,
                    orbits0: p.orbits0.clone().ok_or_else(|| missing("orbits0"))?,
                    orbits1: p.orbits1.clone().ok_or_else(|| missing("orbits1"))?,
                    kernel: p.kernel.clone().ok_or_else(|| missing("ker"))?,
                    repr: p.repr,
                });
            }
            _ => return Err(err(format!("unknown key `{key}`"))),
        }
    }
    if let Some(p) = cur {
        return Err(Error::Parse { line: text.lines().count(), msg: format!("entry {} is not closed", p.entry) });
    }
    Ok(out)
}

pub fn bundled_appendix() -> Vec<AppendixEntry> {
    parse_appendix(APPENDIX_TEXT).expect("bundled table parses")
}

impl AppendixEntry {
    /// `Ker + Repr`, which must be a disjoint union of 1024 words.
    pub fn p0(&self) -> Result<VertexSet> {
        let k = span(&self.kernel);
        let mut s = VertexSet::empty(N)?;
        for &r in &self.repr {
            for &x in &k {
                let v = Vertex(x ^ r);
                if s.contains(v) {
                    return Err(Error::Verification(format!(
                        "entry {}: representative {} repeats a coset",
                        self.entry,
                        Vertex(r).to_hex(N)
                    )));
                }
                s.insert(v);
            }
        }
        Ok(s)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FieldCheck {
    pub field: &'static str,
    pub stated: String,
    pub computed: String,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryCheck {
    pub entry: usize,
    pub fields: Vec<FieldCheck>,
    #[serde(skip)]
    pub p0: Option<VertexSet>,
    #[serde(skip)]
    pub form: Option<CanonicalForm>,
}

impl EntryCheck {
    pub fn all_ok(&self) -> bool {
        self.fields.iter().all(|f| f.ok)
    }

    pub fn mismatches(&self) -> Vec<&FieldCheck> {
        self.fields.iter().filter(|f| !f.ok).collect()
    }
}

fn field(field: &'static str, stated: String, computed: String) -> FieldCheck {
    let ok = stated == computed;
    FieldCheck { field, stated, computed, ok }
}

/// Recomputes every stated parameter of one entry.
pub fn verify_entry(e: &AppendixEntry) -> EntryCheck {
    let mut fields = Vec::new();
    let p0 = match e.p0() {
        Ok(p) if p.len() == 1024 => p,
        Ok(p) => {
            fields.push(field("size", "1024".into(), p.len().to_string()));
            return EntryCheck { entry: e.entry, fields, p0: None, form: None };
        }
        Err(err) => {
            fields.push(field("size", "1024".into(), err.to_string()));
            return EntryCheck { entry: e.entry, fields, p0: None, form: None };
        }
    };
    fields.push(field("size", "1024".into(), "1024".into()));
    let expected = QuotientMatrix { a: 0, b: 12, c: 4, d: 8 };
    let matrix = quotient_matrix(&p0).map(|m| m.to_string()).unwrap_or_else(|e| e.to_string());
    fields.push(field("matrix", expected.to_string(), matrix));
    let rank = affine_rank(&p0).map(|r| r.to_string()).unwrap_or_else(|e| e.to_string());
    fields.push(field("rank", e.rank.to_string(), rank));
    let info = automorphism_info(&p0);
    fields.push(field("aut", e.aut.to_string(), info.order.to_string()));
    let orbits = |sizes: &[usize]| format_orbits(&AutInfo::orbit_multiset(sizes));
    fields.push(field("orbits0", format_orbits(&e.orbits0), orbits(&info.cell_orbit_sizes.0)));
    fields.push(field("orbits1", format_orbits(&e.orbits1), orbits(&info.cell_orbit_sizes.1)));
    let stated_kernel = span(&e.kernel).len();
    let actual: Vec<u32> = kernel_elements(&p0).iter().map(|v| v.0).collect();
    let stated_inside = span(&e.kernel).iter().all(|k| actual.binary_search(k).is_ok());
    let computed = if stated_inside { actual.len().to_string() } else { "not a period group".into() };
    fields.push(field("kernel", stated_kernel.to_string(), computed));
    let ci = correlation_immunity_order(&p0).map(|t| t.to_string()).unwrap_or_else(|e| e.to_string());
    fields.push(field("correlation_immunity", "7".into(), ci));
    fields.push(field("orthogonal_array", "OA(1024,12,2,7)".into(), match verify_oa(&p0, 7) {
        true => "OA(1024,12,2,7)".into(),
        false => "unbalanced".into(),
    }));
    let form = canonical_form(&p0);
    EntryCheck { entry: e.entry, fields, p0: Some(p0), form: Some(form) }
}

#[derive(Clone, Debug, Serialize)]
pub struct AppendixReport {
    pub entries: Vec<EntryCheck>,
    /// Number of distinct classes among the entries that reconstruct.
    pub distinct_classes: usize,
    /// For each entry, the index of the matching computed class.
    pub matched: Option<Vec<Option<usize>>>,
}

impl AppendixReport {
    pub fn mismatches(&self) -> Vec<(usize, &FieldCheck)> {
        self.entries.iter().flat_map(|e| e.mismatches().into_iter().map(move |f| (e.entry, f))).collect()
    }
}

/// Checks all entries; with `computed`, also pairs entries with classes
/// given by their partition forms.
pub fn check_appendix(entries: &[AppendixEntry], computed: Option<&[CanonicalForm]>) -> AppendixReport {
    let checks: Vec<EntryCheck> = entries.iter().map(verify_entry).collect();
    let mut forms: BTreeMap<&CanonicalForm, usize> = BTreeMap::new();
    for c in &checks {
        if let Some(f) = &c.form {
            *forms.entry(f).or_default() += 1;
        }
    }
    let distinct_classes = forms.len();
    let matched = computed.map(|cs| {
        checks
            .iter()
            .map(|c| c.form.as_ref().and_then(|f| cs.iter().position(|g| g == f)))
            .collect()
    });
    AppendixReport { entries: checks, distinct_classes, matched }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_table_parses() {
        let entries = bundled_appendix();
        assert_eq!(entries.len(), 16);
        assert_eq!(entries[0].repr, vec![0]);
        assert_eq!(entries[15].repr.len(), 64);
        assert_eq!(entries[3].orbits1, vec![(1024, 2), (768, 1), (128, 2)]);
        for e in &entries {
            assert_eq!(e.p0().unwrap().len(), 1024, "entry {}", e.entry);
        }
    }

    #[test]
    fn parse_errors_carry_lines() {
        let bad = "entry 1\nrank 10\naut 1\norbits0 1024\norbits1 3072\nker 003\nrepr 0g0\nend\n";
        match parse_appendix(bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 7),
            other => panic!("{other:?}"),
        }
        assert!(parse_appendix("rank 3\n").is_err());
        assert!(parse_appendix("entry 1\nrank 3\nend\n").is_err());
        assert!(parse_appendix("entry 1\n").is_err());
    }

    #[test]
    fn orbit_tokens() {
        assert_eq!(parse_orbits(&["2x6", "3x512", "1024"]).unwrap(), vec![(1024, 1), (512, 3), (6, 2)]);
        assert_eq!(format_orbits(&[(1024, 1), (512, 3)]), "1024 3x512");
        assert!(parse_orbits(&["0x5"]).is_err());
    }
}
