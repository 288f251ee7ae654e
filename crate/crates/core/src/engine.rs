//! Evaluation of the universal gl_N weight w of a permutation as an exact
//! polynomial in `N, C_1, C_2, …`.
//!
//! The value of a permutation σ ∈ S_m is the sum over all index tuples of
//! products of matrix units E_{i_1 i_σ(1)}⋯E_{i_m i_σ(m)} in U(gl_N); it is
//! central and universal, i.e. a single polynomial in N and the Casimir
//! generators C_k covers every matrix size at once. This module computes that
//! polynomial by structural reduction instead of expanding in U(gl_N):
//!
//! 1. fixed points split off as a factor C_1 each;
//! 2. indecomposable interval blocks multiply;
//! 3. a block that is a concatenation of standard ascending cycles
//!    1↦2↦…↦r↦1 is a product of generators C_r;
//! 4. any other block is walked towards that normal form by conjugating
//!    with adjacent transpositions; each swap costs two correction terms on
//!    strictly fewer points ([`swap_step`]).
//!
//! The walk follows the bubble-sort factorization of the relabeling that
//! sends the block to its normal form, consumed left to right, so the whole
//! computation is deterministic. Intermediate results are memoized under a
//! rotation-canonical key — cyclic conjugation invariance is the one symmetry
//! the evaluation relies on. All resulting coefficients are integers; the
//! engine checks this on every top-level result.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use base64::engine::general_purpose::STANDARD as BASE64;
use base64::Engine as _;
use serde_json::{json, Value};

use crate::diagrams::{
    canonical_key, raw_key, split_blocks, strip_fixed_points, CanonicalKey, Permutation,
};
use crate::error::{Error, Result};
use crate::poly::{Generator, Monomial, Polynomial};

/// Result of one application of the commutation relation at position k:
/// `w(p) = w(swapped) + Σ scalar·w(merge)` with every merge permutation on
/// strictly fewer points.
#[derive(Clone, Debug)]
pub struct SwapOutcome {
    /// The conjugate tσt by the transposition t = (k, k+1).
    pub swapped: Permutation,
    /// Correction terms; scalars are polynomials in N and C_1 only.
    pub merge_terms: Vec<(Polynomial, Permutation)>,
}

/// Which adjacent transposition to take next when several are legal.
/// Both strategies reach the same normal form; they exist so tests can
/// verify the computed polynomial does not depend on the route.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Strategy {
    /// Standard bubble-sort passes; the documented default.
    #[default]
    LeftToRight,
    /// Always swap the rightmost out-of-order pair first.
    RightToLeft,
}

/// Memo table mapping permutation classes to their weight polynomials.
///
/// Keys are rotation-canonical by default; a cache built with
/// [`MemoCache::without_canonicalization`] keys on the literal permutation
/// instead, which disables orbit deduplication (used to *test* cyclic
/// invariance rather than assume it).
#[derive(Clone, Debug, Default)]
pub struct MemoCache {
    map: HashMap<CanonicalKey, Polynomial>,
    canonicalize: bool,
}

const CACHE_FORMAT: &str = "wgl-cache";
const CACHE_VERSION: u64 = 1;

impl MemoCache {
    pub fn new() -> MemoCache {
        MemoCache {
            map: HashMap::new(),
            canonicalize: true,
        }
    }

    pub fn without_canonicalization() -> MemoCache {
        MemoCache {
            map: HashMap::new(),
            canonicalize: false,
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// The memo key for a permutation under this cache's keying mode.
    pub fn key(&self, p: &Permutation) -> CanonicalKey {
        if self.canonicalize {
            canonical_key(p)
        } else {
            raw_key(p)
        }
    }

    pub fn get(&self, key: &CanonicalKey) -> Option<&Polynomial> {
        self.map.get(key)
    }

    /// Inserts a value. Re-inserting a key must carry the same value — the
    /// table stores weights, which are functions of the key.
    pub fn insert(&mut self, key: CanonicalKey, value: Polynomial) {
        debug_assert!(
            self.map.get(&key).is_none_or(|old| *old == value),
            "conflicting cache insert"
        );
        self.map.insert(key, value);
    }

    /// Serializes as JSON lines: a header record, then one
    /// `{"key": base64, "value": polynomial}` record per entry, sorted by
    /// key so the output is reproducible.
    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        let header = json!({
            "format": CACHE_FORMAT,
            "version": CACHE_VERSION,
            "canonical": self.canonicalize,
        });
        writeln!(w, "{header}")?;
        let mut entries: Vec<_> = self.map.iter().collect();
        entries.sort_by(|a, b| a.0.cmp(b.0));
        for (key, value) in entries {
            let record = json!({
                "key": BASE64.encode(key.bytes()),
                "value": value.to_json(),
            });
            writeln!(w, "{record}")?;
        }
        Ok(())
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_to(BufWriter::new(File::create(path)?))
    }

    /// Reads a cache back, validating the header, the keys (must encode
    /// permutations, canonical under the declared mode) and the values
    /// (integer polynomials in N and C_k only).
    pub fn read_from(r: impl Read) -> Result<MemoCache> {
        let reader = BufReader::new(r);
        let mut lines = reader.lines();
        let header_line = lines
            .next()
            .ok_or_else(|| Error::CacheFormat("empty file".into()))??;
        let header: Value = serde_json::from_str(&header_line)
            .map_err(|e| Error::CacheFormat(format!("unreadable header: {e}")))?;
        if header.get("format").and_then(Value::as_str) != Some(CACHE_FORMAT) {
            return Err(Error::CacheFormat("missing format marker".into()));
        }
        if header.get("version").and_then(Value::as_u64) != Some(CACHE_VERSION) {
            return Err(Error::CacheFormat(format!(
                "unsupported version (expected {CACHE_VERSION})"
            )));
        }
        let canonicalize = header
            .get("canonical")
            .and_then(Value::as_bool)
            .unwrap_or(true);
        let mut cache = if canonicalize {
            MemoCache::new()
        } else {
            MemoCache::without_canonicalization()
        };
        for (lineno, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let bad = |msg: String| Error::CacheFormat(format!("line {}: {msg}", lineno + 2));
            let record: Value =
                serde_json::from_str(&line).map_err(|e| bad(format!("unreadable record: {e}")))?;
            let key_b64 = record
                .get("key")
                .and_then(Value::as_str)
                .ok_or_else(|| bad("missing key".into()))?;
            let key_bytes = BASE64
                .decode(key_b64)
                .map_err(|e| bad(format!("bad base64: {e}")))?;
            let perm = decode_key_permutation(&key_bytes)
                .ok_or_else(|| bad("key does not encode a permutation".into()))?;
            let key = CanonicalKey::from_bytes(key_bytes);
            if canonicalize && canonical_key(&perm) != key {
                return Err(bad("key is not rotation-canonical".into()));
            }
            let value = record
                .get("value")
                .ok_or_else(|| bad("missing value".into()))
                .and_then(Polynomial::from_json)?;
            if !value.is_integral() {
                return Err(bad("value has a non-integer coefficient".into()));
            }
            if let Some(g) = value
                .generators()
                .into_iter()
                .find(|g| !matches!(g, Generator::N | Generator::C(_)))
            {
                return Err(bad(format!("value contains foreign generator {g}")));
            }
            cache.insert(key, value);
        }
        Ok(cache)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<MemoCache> {
        MemoCache::read_from(File::open(path)?)
    }
}

fn decode_key_permutation(bytes: &[u8]) -> Option<Permutation> {
    let (&m, rest) = bytes.split_first()?;
    if rest.len() != m as usize {
        return None;
    }
    Permutation::from_images(rest.iter().map(|&b| b as u32).collect()).ok()
}

/// Builds the merge permutation for one correction term: delete the listed
/// vertices, override σ on the redirected sources, and relabel the survivors
/// order-preservingly.
fn delete_and_relabel(
    p: &Permutation,
    remove: &[u32],
    redirects: &[(u32, u32)],
) -> Permutation {
    let kept: Vec<u32> = (1..=p.size() as u32)
        .filter(|v| !remove.contains(v))
        .collect();
    let relabel = |x: u32| (kept.binary_search(&x).unwrap() + 1) as u32;
    let images = kept
        .iter()
        .map(|&v| {
            let target = redirects
                .iter()
                .find(|(src, _)| *src == v)
                .map(|(_, dst)| *dst)
                .unwrap_or_else(|| p.image(v));
            relabel(target)
        })
        .collect();
    Permutation::from_images(images).expect("vertex merge yields a permutation")
}

/// One application of the commutation relation [E_kl, E_ji] = δ_lj E_ki −
/// δ_ik E_jl to the neighboring factors at positions k, k+1.
///
/// Preconditions: 1 ≤ k < m and neither k nor k+1 is a fixed point (strip
/// fixed points first). The identity returned is
/// `w(p) = w(swapped) + Σ scalar·w(merge)`; the shape of the corrections
/// depends on how positions k, k+1 sit inside σ:
///
/// * generic (Case A): two merge terms with scalars +1, −1, each deleting
///   one vertex;
/// * σ(k+1) = k (Case B): scalars +C_1 and −N — an index collapses to a
///   trace or a sum over a free index;
/// * σ(k) = k+1 (Case C): the mirror image, scalars +N and −C_1, obtained
///   by reading Case B's identity backwards from tσt;
/// * σ(k) = k+1 and σ(k+1) = k: the corrections cancel exactly, so the
///   2-cycle may be swapped for free.
pub fn swap_step(p: &Permutation, k: u32) -> Result<SwapOutcome> {
    let m = p.size();
    if k == 0 || (k + 1) as usize > m {
        return Err(Error::SwapOutOfRange { k, m });
    }
    let sk = p.image(k);
    let sk1 = p.image(k + 1);
    if sk == k || sk1 == k + 1 {
        return Err(Error::SwapOnFixedPoint { k });
    }

    let swapped = p.conjugate_by_adjacent(k);
    let n = Polynomial::generator(Generator::N);
    let c1 = Polynomial::generator(Generator::C(1));

    let merge_terms = if sk == k + 1 && sk1 == k {
        Vec::new()
    } else if sk1 == k {
        // Case B: k+1 feeds k. Either the loose ends close up into a free
        // summation index (C_1 times both vertices deleted) or the chain
        // a → k → σ(k) survives with a factor N subtracted.
        let a = p.preimage(k + 1);
        let rho1 = delete_and_relabel(p, &[k, k + 1], &[(a, sk)]);
        let rho2 = delete_and_relabel(p, &[k + 1], &[(a, k)]);
        vec![(c1, rho1), (-&n, rho2)]
    } else if sk == k + 1 {
        // Case C: k feeds k+1; the mirror of Case B with signs exchanged.
        let b = p.preimage(k);
        let rho1 = delete_and_relabel(p, &[k + 1], &[(k, sk1)]);
        let rho2 = delete_and_relabel(p, &[k, k + 1], &[(b, sk1)]);
        vec![(n, rho1), (-&c1, rho2)]
    } else {
        // Case A: generic neighbors. Each correction glues two vertices.
        let a = p.preimage(k + 1);
        let b = p.preimage(k);
        let tau1 = delete_and_relabel(p, &[k + 1], &[(k, sk1), (a, sk)]);
        let tau2 = delete_and_relabel(p, &[k], &[(k + 1, sk), (b, sk1)]);
        vec![(Polynomial::one(), tau1), (Polynomial::int(-1), tau2)]
    };

    Ok(SwapOutcome {
        swapped,
        merge_terms,
    })
}

/// If p is a concatenation of standard ascending cycles (1↦2↦…↦r↦1 on each
/// consecutive interval), returns the interval lengths.
fn standard_cycle_lengths(p: &Permutation) -> Option<Vec<u32>> {
    let m = p.size() as u32;
    let mut lengths = Vec::new();
    let mut start = 1u32;
    while start <= m {
        let mut x = start;
        while x < m && p.image(x) == x + 1 {
            x += 1;
        }
        if p.image(x) != start {
            return None;
        }
        lengths.push(x - start + 1);
        start = x + 1;
    }
    Some(lengths)
}

/// The relabeling ρ with ρσρ⁻¹ in normal form: cycles sorted by minimal
/// element, written as consecutive ascending intervals.
fn normal_form_relabeler(p: &Permutation) -> Permutation {
    let mut images = vec![0u32; p.size()];
    let mut next = 1u32;
    for cycle in p.cycles() {
        for &x in &cycle {
            images[(x - 1) as usize] = next;
            next += 1;
        }
    }
    Permutation::from_images(images).expect("relabeler is a permutation")
}

/// Factors ρ into adjacent transpositions: consuming the returned positions
/// left to right as ρ ← ρ·t_k sorts ρ's one-line word. Every swap removes
/// exactly one inversion, so the word has minimal length.
fn bubble_word(rho: &Permutation, strategy: Strategy) -> Vec<u32> {
    let mut w = rho.images().to_vec();
    let mut word = Vec::new();
    match strategy {
        Strategy::LeftToRight => loop {
            let mut swapped_any = false;
            for i in 0..w.len().saturating_sub(1) {
                if w[i] > w[i + 1] {
                    w.swap(i, i + 1);
                    word.push((i + 1) as u32);
                    swapped_any = true;
                }
            }
            if !swapped_any {
                break;
            }
        },
        Strategy::RightToLeft => loop {
            let last = (0..w.len().saturating_sub(1)).rev().find(|&i| w[i] > w[i + 1]);
            match last {
                Some(i) => {
                    w.swap(i, i + 1);
                    word.push((i + 1) as u32);
                }
                None => break,
            }
        },
    }
    word
}

struct Evaluator<'a> {
    cache: &'a mut MemoCache,
    strategy: Strategy,
}

impl Evaluator<'_> {
    /// Full pipeline: strip fixed points, split into blocks, evaluate each.
    fn eval(&mut self, p: &Permutation) -> Polynomial {
        let (fixed, reduced) = strip_fixed_points(p);
        let mut result = Polynomial::monomial(Monomial::from_factors([(
            Generator::C(1),
            fixed as u32,
        )]));
        for block in split_blocks(&reduced) {
            let value = self.eval_block(block);
            result = &result * &value;
        }
        result
    }

    fn eval_block(&mut self, block: Permutation) -> Polynomial {
        if let Some(lengths) = standard_cycle_lengths(&block) {
            return casimir_product(&lengths);
        }
        let rho = normal_form_relabeler(&block);
        let word = bubble_word(&rho, self.strategy);
        self.eval_spine(block, &word, 0)
    }

    /// Walks the conjugation word from position `idx`, memoizing every
    /// intermediate conjugate. Termination: each recursion either shortens
    /// the remaining word or strictly reduces the number of points.
    fn eval_spine(&mut self, pi: Permutation, word: &[u32], idx: usize) -> Polynomial {
        if idx == word.len() {
            let lengths =
                standard_cycle_lengths(&pi).expect("conjugation word ends in normal form");
            return casimir_product(&lengths);
        }
        let key = self.cache.key(&pi);
        if let Some(hit) = self.cache.get(&key) {
            return hit.clone();
        }
        let outcome = swap_step(&pi, word[idx]).expect("spine never swaps at a fixed point");
        let mut value = self.eval_spine(outcome.swapped, word, idx + 1);
        for (scalar, merge) in &outcome.merge_terms {
            let sub = self.eval(merge);
            value.add_mul_assign(scalar, &sub);
        }
        self.cache.insert(key, value.clone());
        value
    }
}

fn casimir_product(lengths: &[u32]) -> Polynomial {
    Polynomial::monomial(Monomial::from_factors(
        lengths.iter().map(|&l| (Generator::C(l), 1)),
    ))
}

/// The universal gl_N weight of a permutation, as an integer polynomial in
/// N and the Casimir generators.
pub fn wgl(p: &Permutation, cache: &mut MemoCache) -> Polynomial {
    wgl_with_strategy(p, cache, Strategy::default())
}

/// Same as [`wgl`] with an explicit reduction strategy; the result is
/// identical for every strategy.
pub fn wgl_with_strategy(p: &Permutation, cache: &mut MemoCache, strategy: Strategy) -> Polynomial {
    let mut eval = Evaluator { cache, strategy };
    let value = eval.eval(p);
    debug_assert!(value.is_integral(), "weight coefficients are integers");
    debug_assert!(
        value
            .generators()
            .iter()
            .all(|g| matches!(g, Generator::N | Generator::C(_))),
        "weights live in Z[N, C_k]"
    );
    value
}

/// The sl_N weight: the gl_N weight with C_1 set to zero.
pub fn wsl(p: &Permutation, cache: &mut MemoCache) -> Polynomial {
    let mut map = std::collections::BTreeMap::new();
    map.insert(Generator::C(1), Polynomial::zero());
    wgl(p, cache).substitute(&map)
}

/// Renders the recursion tree of one evaluation for the CLI's trace output:
/// each line shows a node and the identity applied there.
pub fn explain_once(p: &Permutation) -> String {
    let mut out = String::new();
    let (fixed, reduced) = strip_fixed_points(p);
    if fixed > 0 {
        let _ = writeln!(out, "{p}: strip {fixed} fixed point(s) -> factor C1^{fixed}");
    }
    for block in split_blocks(&reduced) {
        if let Some(lengths) = standard_cycle_lengths(&block) {
            let _ = writeln!(
                out,
                "{block}: standard ascending cycles -> {}",
                casimir_product(&lengths)
            );
            continue;
        }
        let rho = normal_form_relabeler(&block);
        let word = bubble_word(&rho, Strategy::default());
        let _ = writeln!(out, "{block}: conjugation word {word:?}");
        let mut pi = block;
        for &k in &word {
            let outcome = swap_step(&pi, k).expect("no fixed points inside a block");
            let merges: Vec<String> = outcome
                .merge_terms
                .iter()
                .map(|(s, q)| format!("({s})*w[{q}]"))
                .collect();
            let _ = writeln!(
                out,
                "  swap at {k}: w[{pi}] = w[{}]{}",
                outcome.swapped,
                merges
                    .iter()
                    .map(|m| format!(" + {m}"))
                    .collect::<String>()
            );
            pi = outcome.swapped;
        }
    }
    out
}
