//! Corpus runner. A corpus directory holds system JSON files and an
//! `expectations.json` listing, per entry, the values to reproduce and where
//! each value comes from (`published` or `computed`).

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};
use vee_core::arrangements::{factorization_check, intersection_lattice, poincare_polynomial};
use vee_core::flatsections::harmonic_test;
use vee_core::veesys::vee_check;
use vee_core::{Error, Result};

use crate::commands::{load_system, poincare_coefficients};
use crate::report::{Outcome, Report};

const ANCHOR: &str = "known-systems-freeness";
const KEYS: [&str; 6] = ["is_vee", "hyperplanes", "exponents", "poincare", "harmonic", "harmonic_degrees"];

pub fn default_dir() -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/corpus"))
}

#[derive(Deserialize)]
struct CorpusFile {
    entries: Vec<Entry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Entry {
    name: String,
    system: String,
    /// Marks the harmonic search as slow; skipped unless requested.
    #[serde(default)]
    slow: bool,
    expect: BTreeMap<String, Expectation>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Expectation {
    value: Value,
    source: Source,
}

#[derive(Deserialize, Clone, Copy)]
#[serde(rename_all = "lowercase")]
enum Source {
    Published,
    Computed,
}

impl Source {
    fn as_str(self) -> &'static str {
        match self {
            Source::Published => "published",
            Source::Computed => "computed",
        }
    }
}

/// Everything computed for one entry, keyed like the expectations.
fn compute(dir: &Path, entry: &Entry, slow: bool) -> Result<(BTreeMap<&'static str, Value>, Vec<String>)> {
    let input = load_system(&dir.join(&entry.system))?;
    let sys = &input.system;
    let mut got = BTreeMap::new();
    let mut notes = Vec::new();
    got.insert("hyperplanes", json!(sys.len()));
    let is_vee = match vee_check(sys) {
        Ok(r) => r.is_vee_system,
        Err(Error::DegenerateForm { .. }) => false,
        Err(e) => return Err(e),
    };
    got.insert("is_vee", json!(is_vee));
    let p = poincare_polynomial(&intersection_lattice(sys));
    let coeffs: Vec<Value> = poincare_coefficients(&p)
        .iter()
        .map(|c| c.parse::<i64>().map(Value::from).unwrap_or_else(|_| json!(c)))
        .collect();
    got.insert("poincare", json!(coeffs));
    let exponents = factorization_check(&p)?.factors().map(<[u64]>::to_vec);
    got.insert("exponents", json!(exponents));
    let wants_harmonic = entry.expect.contains_key("harmonic") || entry.expect.contains_key("harmonic_degrees");
    if wants_harmonic && (!entry.slow || slow) {
        let res = harmonic_test(sys)?;
        got.insert("harmonic", json!(res.is_harmonic));
        got.insert("harmonic_degrees", json!(res.degrees));
        if res.is_harmonic {
            let degrees: Vec<u64> = res.degrees.iter().map(|&d| d as u64).collect();
            if exponents.as_ref() != Some(&degrees) {
                notes.push(format!("flat-section degrees {degrees:?} differ from Poincaré exponents {exponents:?}"));
            }
        }
    }
    Ok((got, notes))
}

fn run_entry(dir: &Path, entry: &Entry, slow: bool) -> Value {
    let (got, notes) = match compute(dir, entry, slow) {
        Ok(v) => v,
        Err(e) => {
            return json!({ "name": entry.name, "matches": false, "error": e.to_string() });
        }
    };
    let mut mismatches = Vec::new();
    let mut skipped = Vec::new();
    for (key, exp) in &entry.expect {
        match got.get(key.as_str()) {
            Some(value) if *value == exp.value => {}
            Some(value) => mismatches.push(json!({
                "key": key,
                "expected": exp.value,
                "computed": value,
                "source": exp.source.as_str(),
            })),
            None => skipped.push(key.clone()),
        }
    }
    for note in &notes {
        mismatches.push(json!({ "key": "harmonic_degrees", "note": note }));
    }
    let summary = match got.get("exponents") {
        Some(Value::Array(e)) => {
            format!("exponents {}", e.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
        }
        _ => format!("poincare {}", got["poincare"]),
    };
    json!({
        "name": entry.name,
        "size": got["hyperplanes"],
        "is_vee": got["is_vee"],
        "exponents_or_poincare": summary,
        "matches": mismatches.is_empty(),
        "mismatches": mismatches,
        "skipped": skipped,
    })
}

fn load(dir: &Path) -> Result<(CorpusFile, String)> {
    let path = dir.join("expectations.json");
    let text = fs::read_to_string(&path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    let file: CorpusFile = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    for entry in &file.entries {
        if let Some(key) = entry.expect.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(Error::Parse(format!("entry {}: unknown expectation {key:?}", entry.name)));
        }
    }
    Ok((file, text))
}

pub fn run(dir: &Path, only: Option<&str>, slow: bool, threads: Option<usize>) -> Report {
    let canonical = format!("{} only={only:?} slow={slow}", dir.display());
    let result = (|| -> Result<(Outcome, String)> {
        let (file, text) = load(dir)?;
        let entries: Vec<&Entry> = file.entries.iter().filter(|e| only.is_none_or(|n| e.name == n)).collect();
        if entries.is_empty() {
            return Err(Error::Input(format!("no corpus entry named {:?}", only.unwrap_or(""))));
        }
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = threads {
            builder = builder.num_threads(n);
        }
        let pool = builder.build().map_err(|e| Error::Input(format!("thread pool: {e}")))?;
        let mut rows: Vec<Value> = pool.install(|| entries.par_iter().map(|e| run_entry(dir, e, slow)).collect());
        rows.sort_by(|a, b| a["name"].as_str().cmp(&b["name"].as_str()));
        let matching = rows.iter().filter(|r| r["matches"] == true).count();
        let first_bad = rows.iter().find(|r| r["matches"] != true).cloned();
        let payload = json!({
            "rows": rows,
            "entries": rows.len(),
            "matching": matching,
            "slow_included": slow,
        });
        let outcome = Outcome::judged(first_bad.is_none(), payload, || json!({ "row": first_bad }));
        Ok((outcome, format!("{text}\n{canonical}")))
    })();
    match result {
        Ok((outcome, canonical)) => Report::new("corpus", &canonical, ANCHOR, outcome),
        Err(e) => Report::error("corpus", &canonical, ANCHOR, &e),
    }
}
