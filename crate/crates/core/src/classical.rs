//! Self-complementary classical codes that seed the quantum construction.
//!
//! Strings are stored as machine words. Position `i` (counting from the
//! left, as printed) is bit `n-1-i` of the word, so the usual integer order
//! coincides with big-endian string order.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::combinat::{self, MAX_ENUM_N};
use crate::error::{Error, Result};

/// `(k, l)` family index together with the local dimension.
///
/// The block length is always `n = 4k + 2l + 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CodeParams {
    pub k: u64,
    pub l: u8,
    #[serde(rename = "D")]
    pub dim: u32,
}

impl CodeParams {
    pub fn new(k: u64, l: u8, dim: u32) -> Result<Self> {
        if l > 1 {
            return Err(Error::InvalidParams(format!("l must be 0 or 1, got {l}")));
        }
        if dim < 2 {
            return Err(Error::InvalidParams(format!("qudit dimension must be >= 2, got {dim}")));
        }
        Ok(Self { k, l, dim })
    }

    /// Split an odd `n >= 3` into `(k, l)`: `l = ((n-3)/2) mod 2`,
    /// `k = (n-3-2l)/4`.
    pub fn from_n(n: u64) -> Result<Self> {
        Self::from_n_dim(n, 2)
    }

    pub fn from_n_dim(n: u64, dim: u32) -> Result<Self> {
        if n < 3 || n.is_multiple_of(2) {
            return Err(Error::InvalidParams(format!("n must be odd and >= 3, got {n}")));
        }
        let l = ((n - 3) / 2) % 2;
        let k = (n - 3 - 2 * l) / 4;
        Self::new(k, l as u8, dim)
    }

    pub fn n(&self) -> u64 {
        4 * self.k + 2 * self.l as u64 + 3
    }

    /// Block length as a `usize`, rejecting lengths beyond the enumeration cap.
    pub fn enum_n(&self) -> Result<usize> {
        let n = self.n();
        if n as usize > MAX_ENUM_N {
            return Err(Error::SizeLimit(format!("n = {n} exceeds enumeration cap {MAX_ENUM_N}")));
        }
        Ok(n as usize)
    }

    /// Generator weights `l, l+2, …, 2k+l`.
    pub fn generator_weights(&self) -> impl Iterator<Item = usize> {
        let l = self.l as usize;
        (0..=self.k as usize).map(move |i| 2 * i + l)
    }
}

/// A binary string of length `n <= 63`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    n: u8,
    bits: u64,
}

impl BitString {
    pub fn new(n: usize, bits: u64) -> Result<Self> {
        if n == 0 || n > MAX_ENUM_N {
            return Err(Error::OutOfRange(format!("bit string length {n} outside 1..={MAX_ENUM_N}")));
        }
        if bits >> n != 0 {
            return Err(Error::OutOfRange(format!("value {bits:#x} does not fit in {n} bits")));
        }
        Ok(Self { n: n as u8, bits })
    }

    pub fn len(&self) -> usize {
        self.n as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    fn mask(&self) -> u64 {
        (1u64 << self.n) - 1
    }

    /// Bit at printed position `i` (0 = leftmost).
    pub fn get(&self, i: usize) -> bool {
        (self.bits >> (self.len() - 1 - i)) & 1 == 1
    }

    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn complement(&self) -> Self {
        Self { n: self.n, bits: !self.bits & self.mask() }
    }

    pub fn distance(&self, other: &Self) -> usize {
        (self.bits ^ other.bits).count_ones() as usize
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.len() > MAX_ENUM_N {
            return Err(Error::OutOfRange(format!("bit string longer than {MAX_ENUM_N}")));
        }
        let mut bits = 0u64;
        for c in s.chars() {
            bits = (bits << 1)
                | match c {
                    '0' => 0,
                    '1' => 1,
                    _ => return Err(Error::Parse(format!("invalid bit {c:?} in {s:?}"))),
                };
        }
        BitString::new(s.len(), bits)
    }
}

impl Serialize for BitString {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Ordered set of distinct codewords of a common length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalCode {
    n: usize,
    words: Vec<BitString>,
    /// Indices into `words` of one representative per complement pair.
    generators: Vec<usize>,
}

impl ClassicalCode {
    /// Build from codewords in the given order. Generators are the first
    /// member of each complement pair encountered; unpaired words count as
    /// their own generator.
    pub fn from_words(words: Vec<BitString>) -> Result<Self> {
        let n = words.first().map(|w| w.len()).unwrap_or(0);
        let mut seen = HashSet::with_capacity(words.len());
        for w in &words {
            if w.len() != n {
                return Err(Error::DimensionMismatch(format!("codeword {w} has length {}, expected {n}", w.len())));
            }
            if !seen.insert(*w) {
                return Err(Error::InvalidParams(format!("duplicate codeword {w}")));
            }
        }
        let mut covered = HashSet::with_capacity(words.len());
        let mut generators = Vec::new();
        for (idx, w) in words.iter().enumerate() {
            if covered.contains(w) {
                continue;
            }
            covered.insert(*w);
            covered.insert(w.complement());
            generators.push(idx);
        }
        Ok(Self { n, words, generators })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[BitString] {
        &self.words
    }

    pub fn generators(&self) -> Vec<BitString> {
        self.generators.iter().map(|&i| self.words[i]).collect()
    }

    /// Newline-delimited binary strings, leftmost position first.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.words.len() * (self.n + 1));
        for w in &self.words {
            out.push_str(&w.to_string());
            out.push('\n');
        }
        out
    }

    /// Parse newline-delimited binary strings. Blank lines and `#` comments
    /// are skipped.
    pub fn from_text(text: &str) -> Result<Self> {
        let words = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(BitString::from_str)
            .collect::<Result<Vec<_>>>()?;
        if words.is_empty() {
            return Err(Error::Parse("no codewords found".into()));
        }
        Self::from_words(words)
    }
}

/// Generators of the family code: every string of weight `2i+l`, `i = 0..=k`,
/// grouped by weight and in canonical order inside each weight class.
pub fn build_generators(params: &CodeParams) -> Result<Vec<BitString>> {
    let n = params.enum_n()?;
    let mut out = Vec::new();
    for w in params.generator_weights() {
        out.extend(combinat::weight_strings(n, w)?);
    }
    Ok(out)
}

/// Generators followed by their complements, in the same order.
pub fn full_code(params: &CodeParams) -> Result<ClassicalCode> {
    let gens = build_generators(params)?;
    let mut words = gens.clone();
    words.extend(gens.iter().map(BitString::complement));
    ClassicalCode::from_words(words)
}

pub fn is_self_complementary(code: &ClassicalCode) -> bool {
    let set: HashSet<BitString> = code.words.iter().copied().collect();
    code.words.iter().all(|w| set.contains(&w.complement()))
}

/// Minimum pairwise Hamming distance together with one closest pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DistanceWitness {
    pub distance: usize,
    pub first: BitString,
    pub second: BitString,
}

pub fn min_distance(code: &ClassicalCode) -> Result<usize> {
    min_distance_witness(code).map(|w| w.distance)
}

pub fn min_distance_witness(code: &ClassicalCode) -> Result<DistanceWitness> {
    if code.len() < 2 {
        return Err(Error::Undefined(format!("code has {} codeword(s); K=1 degenerate code", code.len())));
    }
    let words = &code.words;
    // Per-row minima in parallel; ties resolve to the earliest pair.
    let best = (0..words.len() - 1)
        .into_par_iter()
        .map(|i| {
            let a = words[i];
            let mut best = DistanceWitness { distance: usize::MAX, first: a, second: a };
            for b in &words[i + 1..] {
                let d = a.distance(b);
                if d < best.distance {
                    best = DistanceWitness { distance: d, first: a, second: *b };
                }
            }
            best
        })
        .reduce_with(|x, y| if y.distance < x.distance { y } else { x })
        .expect("at least two codewords");
    Ok(best)
}

#[derive(Debug, Clone, Serialize)]
pub struct PairingDiagnostic {
    pub admissible: bool,
    pub self_complementary: bool,
    pub codewords: usize,
    pub min_distance: Option<usize>,
    /// Closest pair when the distance condition fails.
    pub witness: Option<DistanceWitness>,
    /// First codeword whose complement is absent.
    pub missing_complement_of: Option<BitString>,
    /// Set for the single complement pair (`K = 2`), whose lift is one ket.
    pub degenerate_pair: bool,
    pub note: String,
}

/// Pairing condition for lifting: self-complementary with distance at least 2,
/// or a lone complement pair.
pub fn pairing_admissible(code: &ClassicalCode) -> PairingDiagnostic {
    let set: HashSet<BitString> = code.words.iter().copied().collect();
    let missing = code.words.iter().find(|w| !set.contains(&w.complement())).copied();
    let self_comp = missing.is_none() && !code.is_empty();
    let witness = min_distance_witness(code).ok();
    let min_d = witness.map(|w| w.distance);
    let degenerate_pair = self_comp && code.len() == 2;
    let distance_ok = min_d.is_some_and(|d| d >= 2);
    let admissible = self_comp && (distance_ok || degenerate_pair);
    let note = if code.is_empty() {
        "empty code".to_string()
    } else if !self_comp {
        format!("complement of {} is missing", missing.unwrap())
    } else if degenerate_pair {
        "single complement pair; lifts to a one-dimensional code".to_string()
    } else if !distance_ok {
        "minimum distance 1; lift would not detect single errors".to_string()
    } else {
        format!("self-complementary with minimum distance {}", min_d.unwrap())
    };
    PairingDiagnostic {
        admissible,
        self_complementary: self_comp,
        codewords: code.len(),
        min_distance: min_d,
        witness: if distance_ok { None } else { witness },
        missing_complement_of: missing,
        degenerate_pair,
        note,
    }
}
