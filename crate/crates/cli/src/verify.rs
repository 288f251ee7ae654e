//! The `verify-paper` subcommand: recompute every golden result table
//! embedded in the binary and report a per-entry pass/fail line.
//!
//! The fixture file carries the published values as parseable expression
//! strings, one per table entry; verification always starts from a fresh
//! in-memory cache so the outcome cannot depend on cache warmth.

use std::collections::BTreeMap;

use glw::diagrams::{parse_permutation, ChordDiagram};
use glw::engine::{wgl, MemoCache};
use glw::hc::{phi_casimir, to_p_basis};
use glw::hopf::wbar;
use glw::parse::parse_polynomial;
use glw::poly::Polynomial;
use serde_json::Value;

use crate::Failure;

const FIXTURE: &str = include_str!("../fixtures/golden_tables.json");
const FIXTURE_FORMAT: &str = "glw-golden";
const FIXTURE_VERSION: u64 = 1;

/// One golden entry: a printable label, the recomputed value and the
/// expected value from the fixture.
struct Entry {
    label: String,
    computed: Polynomial,
    expected: Polynomial,
}

pub fn run() -> Result<(), Failure> {
    let fixture = Fixture::load()?;
    let entries = recompute(&fixture)?;

    let mut failed = 0usize;
    for e in &entries {
        if e.computed == e.expected {
            println!("ok   {}", e.label);
        } else {
            failed += 1;
            println!("FAIL {}", e.label);
            println!("     computed: {}", e.computed);
            println!("     expected: {}", e.expected);
        }
    }
    println!(
        "{} of {} golden entries verified",
        entries.len() - failed,
        entries.len()
    );
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::verification(format!(
            "{failed} of {} golden entries failed",
            entries.len()
        )))
    }
}

fn recompute(fixture: &Fixture) -> Result<Vec<Entry>, Failure> {
    let mut cache = MemoCache::new();
    let mut entries = Vec::new();

    for (&n, expected) in &fixture.wgl_c {
        let computed = wgl(&ChordDiagram::kn(n).to_permutation(), &mut cache);
        entries.push(Entry {
            label: format!("wgl(K{n}), Casimir basis"),
            computed,
            expected: expected.clone(),
        });
    }
    for (&n, expected) in &fixture.wgl_p {
        let w = wgl(&ChordDiagram::kn(n).to_permutation(), &mut cache);
        entries.push(Entry {
            label: format!("wgl(K{n}), power-sum basis"),
            computed: to_p_basis(&w)?,
            expected: expected.clone(),
        });
    }
    for (&n, expected) in &fixture.wbar_c {
        let computed = wbar(&ChordDiagram::kn(n), &mut cache);
        entries.push(Entry {
            label: format!("wbar(K{n}), Casimir basis"),
            computed,
            expected: expected.clone(),
        });
    }
    for (&n, expected) in &fixture.wbar_p {
        let w = wbar(&ChordDiagram::kn(n), &mut cache);
        entries.push(Entry {
            label: format!("wbar(K{n}), power-sum basis"),
            computed: to_p_basis(&w)?,
            expected: expected.clone(),
        });
    }
    for (&k, expected) in &fixture.phi {
        entries.push(Entry {
            label: format!("phi(C{k})"),
            computed: phi_casimir(k),
            expected: expected.clone(),
        });
    }
    for (input, expected) in &fixture.examples {
        let p = if let Some(n) = input.strip_prefix('K') {
            let n: u32 = n
                .parse()
                .map_err(|_| Failure::usage(format!("bad example key {input:?}")))?;
            ChordDiagram::kn(n).to_permutation()
        } else {
            parse_permutation(input)?
        };
        entries.push(Entry {
            label: format!("example: wgl({input})"),
            computed: wgl(&p, &mut cache),
            expected: expected.clone(),
        });
    }
    Ok(entries)
}

/// The parsed fixture: tables keyed by diagram size (or Casimir index),
/// values already parsed into polynomials.
struct Fixture {
    wgl_c: BTreeMap<u32, Polynomial>,
    wgl_p: BTreeMap<u32, Polynomial>,
    wbar_c: BTreeMap<u32, Polynomial>,
    wbar_p: BTreeMap<u32, Polynomial>,
    phi: BTreeMap<u32, Polynomial>,
    examples: BTreeMap<String, Polynomial>,
}

impl Fixture {
    fn load() -> Result<Fixture, Failure> {
        let bad = |msg: String| Failure::usage(format!("golden fixture: {msg}"));
        let root: Value = serde_json::from_str(FIXTURE)
            .map_err(|e| bad(format!("unreadable JSON: {e}")))?;
        if root.get("format").and_then(Value::as_str) != Some(FIXTURE_FORMAT) {
            return Err(bad("missing format marker".into()));
        }
        if root.get("version").and_then(Value::as_u64) != Some(FIXTURE_VERSION) {
            return Err(bad(format!("unsupported version (expected {FIXTURE_VERSION})")));
        }
        Ok(Fixture {
            wgl_c: indexed_table(&root, "wgl_kn_c")?,
            wgl_p: indexed_table(&root, "wgl_kn_p")?,
            wbar_c: indexed_table(&root, "wbar_kn_c")?,
            wbar_p: indexed_table(&root, "wbar_kn_p")?,
            phi: indexed_table(&root, "phi_casimir")?,
            examples: expression_table(&root, "examples")?,
        })
    }
}

fn expression_table(root: &Value, name: &str) -> Result<BTreeMap<String, Polynomial>, Failure> {
    let bad = |msg: String| Failure::usage(format!("golden fixture table {name:?}: {msg}"));
    let table = root
        .get(name)
        .and_then(Value::as_object)
        .ok_or_else(|| bad("missing".into()))?;
    let mut out = BTreeMap::new();
    for (key, value) in table {
        let expr = value
            .as_str()
            .ok_or_else(|| bad(format!("entry {key:?} is not a string")))?;
        let poly = parse_polynomial(expr)
            .map_err(|e| bad(format!("entry {key:?} does not parse: {e}")))?;
        out.insert(key.clone(), poly);
    }
    Ok(out)
}

fn indexed_table(root: &Value, name: &str) -> Result<BTreeMap<u32, Polynomial>, Failure> {
    let mut out = BTreeMap::new();
    for (key, poly) in expression_table(root, name)? {
        let index: u32 = key.parse().map_err(|_| {
            Failure::usage(format!(
                "golden fixture table {name:?}: key {key:?} is not an index"
            ))
        })?;
        out.insert(index, poly);
    }
    Ok(out)
}
