//! Permutations of {1..m}, chord diagrams, and the canonical forms the
//! evaluation engine keys its memo table on.
//!
//! Permutations are stored in one-line notation with 1-based images. A chord
//! diagram on 2n endpoints is a partition into n pairs; the associated
//! permutation is the fixed-point-free involution swapping the endpoints of
//! each chord.

use std::fmt;

use crate::error::{Error, Result};

/// A permutation of {1..m} in one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Permutation {
    /// `images[i-1]` is σ(i); values are a bijection of 1..=m.
    images: Vec<u32>,
}

impl Permutation {
    /// The permutation of the empty set.
    pub fn empty() -> Permutation {
        Permutation { images: Vec::new() }
    }

    pub fn identity(m: usize) -> Permutation {
        Permutation {
            images: (1..=m as u32).collect(),
        }
    }

    /// Validates that `images` is a bijection of {1..m}.
    pub fn from_images(images: Vec<u32>) -> Result<Permutation> {
        let m = images.len();
        let mut seen = vec![false; m];
        for &v in &images {
            if v == 0 || v as usize > m {
                return Err(Error::InvalidPermutation(format!(
                    "image {v} out of range 1..={m}"
                )));
            }
            if seen[(v - 1) as usize] {
                return Err(Error::InvalidPermutation(format!("image {v} repeats")));
            }
            seen[(v - 1) as usize] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation of {1..m} from disjoint cycles; elements not
    /// mentioned stay fixed.
    pub fn from_cycles(cycles: &[Vec<u32>], m: usize) -> Result<Permutation> {
        let mut images: Vec<u32> = (1..=m as u32).collect();
        let mut moved = vec![false; m];
        for cycle in cycles {
            for (idx, &a) in cycle.iter().enumerate() {
                if a == 0 || a as usize > m {
                    return Err(Error::InvalidPermutation(format!(
                        "cycle element {a} out of range 1..={m}"
                    )));
                }
                if moved[(a - 1) as usize] {
                    return Err(Error::InvalidPermutation(format!(
                        "element {a} appears in two cycles"
                    )));
                }
                moved[(a - 1) as usize] = true;
                let b = cycle[(idx + 1) % cycle.len()];
                images[(a - 1) as usize] = b;
            }
        }
        Permutation::from_images(images)
    }

    pub fn size(&self) -> usize {
        self.images.len()
    }

    /// σ(i), 1-based.
    pub fn image(&self, i: u32) -> u32 {
        self.images[(i - 1) as usize]
    }

    /// σ⁻¹(j), 1-based.
    pub fn preimage(&self, j: u32) -> u32 {
        (self.images.iter().position(|&v| v == j).unwrap() + 1) as u32
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| v as usize == i + 1)
    }

    /// Cycles sorted by minimal element, each starting at its minimum.
    /// Fixed points appear as singleton cycles.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let m = self.size();
        let mut seen = vec![false; m];
        let mut out = Vec::new();
        for start in 1..=m as u32 {
            if seen[(start - 1) as usize] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            loop {
                seen[(x - 1) as usize] = true;
                cycle.push(x);
                x = self.image(x);
                if x == start {
                    break;
                }
            }
            out.push(cycle);
        }
        out
    }

    /// Conjugate by the c-th power of the rotation (1 2 … m).
    pub fn conjugate_by_rotation(&self, c: usize) -> Permutation {
        let m = self.size();
        if m == 0 {
            return self.clone();
        }
        let rot = |x: u32, s: usize| ((x as usize - 1 + s) % m + 1) as u32;
        let back = (m - c % m) % m;
        let images = (1..=m as u32)
            .map(|x| rot(self.image(rot(x, back)), c))
            .collect();
        Permutation { images }
    }

    /// Conjugate by the adjacent transposition t = (k, k+1): returns tσt.
    pub fn conjugate_by_adjacent(&self, k: u32) -> Permutation {
        let t = |x: u32| {
            if x == k {
                k + 1
            } else if x == k + 1 {
                k
            } else {
                x
            }
        };
        let images = (1..=self.size() as u32).map(|x| t(self.image(t(x)))).collect();
        Permutation { images }
    }

    /// Places `other` after `self` on a disjoint interval of labels.
    pub fn concatenate(&self, other: &Permutation) -> Permutation {
        let shift = self.size() as u32;
        let mut images = self.images.clone();
        images.extend(other.images.iter().map(|&v| v + shift));
        Permutation { images }
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation with fixed points omitted: `(1 3 2)`, `(1 3)(2 4)`.
    /// Identities print as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for cycle in self.cycles() {
            if cycle.len() < 2 {
                continue;
            }
            let body: Vec<String> = cycle.iter().map(u32::to_string).collect();
            write!(f, "({})", body.join(" "))?;
            wrote = true;
        }
        if !wrote {
            f.write_str("()")?;
        }
        Ok(())
    }
}

/// A chord diagram: n unordered pairs exactly covering {1..2n}.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ChordDiagram {
    /// Each pair is stored (low, high), the list sorted by low endpoint.
    pairs: Vec<(u32, u32)>,
}

impl ChordDiagram {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, u32)>) -> Result<ChordDiagram> {
        let mut pairs: Vec<(u32, u32)> = pairs
            .into_iter()
            .map(|(a, b)| if a <= b { (a, b) } else { (b, a) })
            .collect();
        pairs.sort_unstable();
        let two_n = 2 * pairs.len() as u32;
        let mut seen = vec![false; two_n as usize];
        for &(a, b) in &pairs {
            if a == b {
                return Err(Error::InvalidChords(format!("endpoint {a} paired with itself")));
            }
            for x in [a, b] {
                if x == 0 || x > two_n {
                    return Err(Error::InvalidChords(format!(
                        "endpoint {x} out of range 1..={two_n}"
                    )));
                }
                if seen[(x - 1) as usize] {
                    return Err(Error::InvalidChords(format!("endpoint {x} used twice")));
                }
                seen[(x - 1) as usize] = true;
            }
        }
        Ok(ChordDiagram { pairs })
    }

    /// K_n: chord i joins endpoints i and n+i, so every chord crosses every
    /// other chord.
    pub fn kn(n: u32) -> ChordDiagram {
        ChordDiagram {
            pairs: (1..=n).map(|i| (i, n + i)).collect(),
        }
    }

    pub fn n_chords(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    /// The fixed-point-free involution exchanging the endpoints of each chord.
    pub fn to_permutation(&self) -> Permutation {
        let m = 2 * self.pairs.len();
        let mut images = vec![0u32; m];
        for &(a, b) in &self.pairs {
            images[(a - 1) as usize] = b;
            images[(b - 1) as usize] = a;
        }
        Permutation { images }
    }
}

impl fmt::Display for ChordDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self
            .pairs
            .iter()
            .map(|(a, b)| format!("{a}-{b}"))
            .collect();
        f.write_str(&body.join(","))
    }
}

/// Opaque memo key: a canonical byte string for a permutation class.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn from_bytes(bytes: Vec<u8>) -> CanonicalKey {
        CanonicalKey(bytes)
    }
}

fn encode_images(images: &[u32]) -> Vec<u8> {
    let mut bytes = Vec::with_capacity(images.len() + 1);
    bytes.push(images.len() as u8);
    bytes.extend(images.iter().map(|&v| v as u8));
    bytes
}

/// Length-prefixed encoding of the permutation exactly as given.
pub fn raw_key(p: &Permutation) -> CanonicalKey {
    assert!(p.size() <= u8::MAX as usize, "permutation too large to key");
    CanonicalKey(encode_images(p.images()))
}

/// The lexicographically smallest encoding over all m rotation conjugates.
///
/// Only the cyclic rotation orbit is quotiented out — that is the one
/// invariance the evaluation relies on.
pub fn canonical_key(p: &Permutation) -> CanonicalKey {
    assert!(p.size() <= u8::MAX as usize, "permutation too large to key");
    let m = p.size();
    let mut best = encode_images(p.images());
    for c in 1..m {
        let candidate = encode_images(p.conjugate_by_rotation(c).images());
        if candidate < best {
            best = candidate;
        }
    }
    CanonicalKey(best)
}

/// Splits a permutation into its indecomposable interval blocks: the finest
/// partition of 1..m into consecutive intervals each closed under σ. Blocks
/// are relabeled to start at 1.
pub fn split_blocks(p: &Permutation) -> Vec<Permutation> {
    let m = p.size();
    let mut blocks = Vec::new();
    let mut start = 1u32;
    while start <= m as u32 {
        let mut reach = start;
        let mut end = start;
        while end <= reach {
            reach = reach.max(p.image(end));
            end += 1;
        }
        // [start, reach] is now closed under σ and minimal.
        let images = (start..=reach).map(|i| p.image(i) - start + 1).collect();
        blocks.push(Permutation { images });
        start = reach + 1;
    }
    blocks
}

/// Removes every fixed point and relabels the rest order-preservingly.
/// Returns the number of points removed alongside the reduced permutation.
pub fn strip_fixed_points(p: &Permutation) -> (usize, Permutation) {
    let kept: Vec<u32> = (1..=p.size() as u32).filter(|&i| p.image(i) != i).collect();
    let removed = p.size() - kept.len();
    if removed == 0 {
        return (0, p.clone());
    }
    let relabel = |x: u32| (kept.binary_search(&x).unwrap() + 1) as u32;
    let images = kept.iter().map(|&i| relabel(p.image(i))).collect();
    (removed, Permutation { images })
}

/// Parses `(1 3 2)`, `(1 3)(2 4)`, `()` or one-line `[3,1,2]`.
pub fn parse_permutation(input: &str) -> Result<Permutation> {
    let s = input.trim();
    if s.starts_with('[') {
        return parse_one_line(s);
    }
    if s.starts_with('(') {
        return parse_cycle_form(s);
    }
    Err(Error::parse(
        0,
        "expected cycle notation \"(1 3 2)\" or one-line notation \"[3,1,2]\"",
    ))
}

fn parse_numbers(body: &str, at: usize) -> Result<Vec<u32>> {
    body.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<u32>()
                .ok()
                .filter(|&v| v >= 1)
                .ok_or_else(|| Error::parse(at, format!("expected a positive integer, got {t:?}")))
        })
        .collect()
}

fn parse_one_line(s: &str) -> Result<Permutation> {
    let inner = s
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| Error::parse(s.len(), "expected closing ']'"))?;
    Permutation::from_images(parse_numbers(inner, 1)?)
}

fn parse_cycle_form(s: &str) -> Result<Permutation> {
    let mut cycles = Vec::new();
    let mut rest = s;
    let mut offset = 0;
    while !rest.trim().is_empty() {
        let trimmed = rest.trim_start();
        offset += rest.len() - trimmed.len();
        rest = trimmed;
        if !rest.starts_with('(') {
            return Err(Error::parse(offset, "expected '('"));
        }
        let close = rest
            .find(')')
            .ok_or_else(|| Error::parse(offset, "unclosed '('"))?;
        cycles.push(parse_numbers(&rest[1..close], offset)?);
        offset += close + 1;
        rest = &rest[close + 1..];
    }
    let m = cycles.iter().flatten().copied().max().unwrap_or(0) as usize;
    let nonempty: Vec<Vec<u32>> = cycles.into_iter().filter(|c| !c.is_empty()).collect();
    Permutation::from_cycles(&nonempty, m)
}

/// Parses `1-3,2-4` or the shorthand `K5`.
pub fn parse_chords(input: &str) -> Result<ChordDiagram> {
    let s = input.trim();
    if let Some(num) = s.strip_prefix('K').or_else(|| s.strip_prefix('k')) {
        let n: u32 = num
            .trim()
            .parse()
            .map_err(|_| Error::parse(1, format!("expected an integer after K, got {num:?}")))?;
        if n == 0 {
            return Err(Error::parse(1, "K requires n ≥ 1"));
        }
        return Ok(ChordDiagram::kn(n));
    }
    let mut pairs = Vec::new();
    for piece in s.split(',') {
        let piece = piece.trim();
        let (a, b) = piece
            .split_once('-')
            .ok_or_else(|| Error::parse(0, format!("expected \"a-b\", got {piece:?}")))?;
        let a: u32 = a
            .trim()
            .parse()
            .map_err(|_| Error::parse(0, format!("bad endpoint {a:?}")))?;
        let b: u32 = b
            .trim()
            .parse()
            .map_err(|_| Error::parse(0, format!("bad endpoint {b:?}")))?;
        pairs.push((a, b));
    }
    ChordDiagram::from_pairs(pairs)
}
