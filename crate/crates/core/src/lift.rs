//! Quantum code bases obtained by lifting classical codewords.
//!
//! Kets are kept unnormalized with exact cyclotomic amplitudes. Basis labels
//! are radix-`D` integers with the leftmost site most significant, which for
//! `D = 2` coincides with the [`BitString`] word.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::classical::{self, BitString, ClassicalCode, CodeParams};
use crate::cycint::CycInt;
use crate::error::{Error, Result};

/// Radix-`D` packing of length-`n` dit strings into a `u64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Radix {
    pub n: usize,
    pub dim: u32,
}

impl Radix {
    pub fn new(n: usize, dim: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::OutOfRange("zero-length register".into()));
        }
        if dim < 2 {
            return Err(Error::InvalidParams(format!("dimension must be >= 2, got {dim}")));
        }
        match (dim as u64).checked_pow(n as u32) {
            Some(total) if total <= 1u64 << 63 => Ok(Self { n, dim }),
            _ => Err(Error::SizeLimit(format!("{dim}^{n} basis labels do not fit in 63 bits"))),
        }
    }

    pub fn encode(&self, digits: &[u8]) -> u64 {
        digits.iter().fold(0u64, |acc, &d| acc * self.dim as u64 + d as u64)
    }

    pub fn decode(&self, mut label: u64) -> Vec<u8> {
        let mut out = vec![0u8; self.n];
        for slot in out.iter_mut().rev() {
            *slot = (label % self.dim as u64) as u8;
            label /= self.dim as u64;
        }
        out
    }

    pub fn format(&self, label: u64) -> String {
        DitString { dim: self.dim, digits: self.decode(label) }.to_string()
    }

    pub fn parse(&self, s: &str) -> Result<u64> {
        let ds: DitString = DitString::parse(s, self.dim)?;
        if ds.digits.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "label {s:?} has length {}, expected {}",
                ds.digits.len(),
                self.n
            )));
        }
        Ok(self.encode(&ds.digits))
    }
}

/// A string over `Z_D`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DitString {
    pub dim: u32,
    pub digits: Vec<u8>,
}

impl DitString {
    pub fn from_bits(b: &BitString) -> Self {
        Self { dim: 2, digits: (0..b.len()).map(|i| b.get(i) as u8).collect() }
    }

    pub fn weight(&self) -> usize {
        self.digits.iter().filter(|&&d| d != 0).count()
    }

    /// Digits are written without separators when `D <= 10`, otherwise
    /// comma-separated.
    pub fn parse(s: &str, dim: u32) -> Result<Self> {
        let digits: Vec<u32> = if dim <= 10 {
            s.chars()
                .map(|c| c.to_digit(10).ok_or_else(|| Error::Parse(format!("bad digit {c:?}"))))
                .collect::<Result<_>>()?
        } else {
            s.split(',')
                .map(|t| t.trim().parse::<u32>().map_err(|e| Error::Parse(e.to_string())))
                .collect::<Result<_>>()?
        };
        if digits.is_empty() {
            return Err(Error::Parse("empty label".into()));
        }
        if let Some(d) = digits.iter().find(|&&d| d >= dim) {
            return Err(Error::Parse(format!("digit {d} out of range for D={dim}")));
        }
        Ok(Self { dim, digits: digits.into_iter().map(|d| d as u8).collect() })
    }
}

impl fmt::Display for DitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dim <= 10 {
            for d in &self.digits {
                write!(f, "{d}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.digits.iter().map(|d| d.to_string()).collect();
            f.write_str(&parts.join(","))
        }
    }
}

/// Finitely supported ket with exact amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseKet {
    radix: Radix,
    terms: BTreeMap<u64, CycInt>,
}

impl SparseKet {
    pub fn new(n: usize, dim: u32) -> Result<Self> {
        Ok(Self { radix: Radix::new(n, dim)?, terms: BTreeMap::new() })
    }

    pub fn n(&self) -> usize {
        self.radix.n
    }

    pub fn dim(&self) -> u32 {
        self.radix.dim
    }

    pub fn radix(&self) -> Radix {
        self.radix
    }

    pub fn terms(&self) -> &BTreeMap<u64, CycInt> {
        &self.terms
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    /// Accumulate `amp` onto `label`, dropping the entry if it cancels.
    pub fn add_term(&mut self, label: u64, amp: CycInt) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(label) {
            Entry::Vacant(v) => {
                if !amp.is_zero() {
                    v.insert(amp);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &amp;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn norm_sq(&self) -> CycInt {
        inner(self, self).expect("same dimensions")
    }

    fn check_compat(&self, other_n: usize, other_dim: u32) -> Result<()> {
        if self.n() != other_n || self.dim() != other_dim {
            return Err(Error::DimensionMismatch(format!(
                "(n={}, D={}) vs (n={other_n}, D={other_dim})",
                self.n(),
                self.dim()
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> KetJson {
        KetJson {
            n: self.n(),
            dim: self.dim(),
            terms: self
                .terms
                .iter()
                .map(|(&l, a)| TermJson { label: self.radix.format(l), amp: a.normalized() })
                .collect(),
        }
    }

    pub fn from_json(j: &KetJson) -> Result<Self> {
        let mut ket = SparseKet::new(j.n, j.dim)?;
        for t in &j.terms {
            if t.amp.len() != j.dim as usize {
                return Err(Error::Parse(format!(
                    "amplitude for {} has {} coefficients, expected {}",
                    t.label,
                    t.amp.len(),
                    j.dim
                )));
            }
            let label = ket.radix.parse(&t.label)?;
            ket.add_term(label, CycInt::from_coeffs(t.amp.clone()));
        }
        Ok(ket)
    }

    /// Plain-text rendering, e.g. `|10000>+|01111>`; non-unit amplitudes are
    /// written as `(a)|label>`.
    pub fn to_text(&self) -> String {
        let order: Vec<u64> = self.terms.keys().copied().collect();
        self.to_text_ordered(&order)
    }

    /// Like [`SparseKet::to_text`] with terms listed in `order` first; any
    /// remaining support follows in label order.
    pub fn to_text_ordered(&self, order: &[u64]) -> String {
        let one = CycInt::one(self.dim());
        let listed: HashSet<u64> = order.iter().copied().collect();
        let rest = self.terms.keys().filter(|l| !listed.contains(l));
        let labels = order.iter().filter(|l| self.terms.contains_key(l)).chain(rest);
        let mut out = String::new();
        for (i, l) in labels.enumerate() {
            let a = &self.terms[l];
            let l = *l;
            if i > 0 {
                out.push('+');
            }
            if *a != one {
                out.push_str(&format!("({a})"));
            }
            out.push_str(&format!("|{}>", self.radix.format(l)));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KetJson {
    pub n: usize,
    #[serde(rename = "D")]
    pub dim: u32,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub label: String,
    pub amp: Vec<i64>,
}

/// `ω^phase · X^x Z^z`, acting as `|v⟩ ↦ ω^(phase + z·v) |v + x⟩`.
///
/// `Z` acts first. For qubits `X_i Z_i` is the (non-Hermitian) `Y = XZ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeylOp {
    dim: u32,
    x: Vec<u8>,
    z: Vec<u8>,
    phase: u32,
}

impl WeylOp {
    pub fn new(dim: u32, x: Vec<u8>, z: Vec<u8>, phase: u32) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::DimensionMismatch(format!("x has {} sites, z has {}", x.len(), z.len())));
        }
        if dim < 2 {
            return Err(Error::InvalidParams(format!("dimension must be >= 2, got {dim}")));
        }
        let d = dim as u8;
        let x = x.into_iter().map(|v| v % d).collect();
        let z = z.into_iter().map(|v| v % d).collect();
        Ok(Self { dim, x, z, phase: phase % dim })
    }

    pub fn identity(n: usize, dim: u32) -> Self {
        Self { dim, x: vec![0; n], z: vec![0; n], phase: 0 }
    }

    /// `X^a Z^b` on one site.
    pub fn single_site(n: usize, dim: u32, site: usize, a: u8, b: u8) -> Result<Self> {
        if site >= n {
            return Err(Error::OutOfRange(format!("site {site} outside 0..{n}")));
        }
        let mut x = vec![0; n];
        let mut z = vec![0; n];
        x[site] = a;
        z[site] = b;
        Self::new(dim, x, z, 0)
    }

    /// `X^{⊗n}` raised to `power`.
    pub fn x_all(n: usize, dim: u32, power: u8) -> Self {
        Self { dim, x: vec![power % dim as u8; n], z: vec![0; n], phase: 0 }
    }

    pub fn z_pattern(b: &BitString, dim: u32) -> Self {
        let z = DitString::from_bits(b).digits;
        Self { dim, x: vec![0; z.len()], z, phase: 0 }
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn x(&self) -> &[u8] {
        &self.x
    }

    pub fn z(&self) -> &[u8] {
        &self.z
    }

    pub fn phase(&self) -> u32 {
        self.phase
    }

    pub fn weight(&self) -> usize {
        self.x.iter().zip(&self.z).filter(|(a, b)| **a != 0 || **b != 0).count()
    }

    pub fn is_identity(&self) -> bool {
        self.weight() == 0 && self.phase == 0
    }

    /// `self · other` (apply `other` first).
    pub fn compose(&self, other: &WeylOp) -> Result<WeylOp> {
        if self.n() != other.n() || self.dim != other.dim {
            return Err(Error::DimensionMismatch("composing Weyl operators of different shape".into()));
        }
        let d = self.dim;
        // Z^{z1} X^{x2} = ω^{z1·x2} X^{x2} Z^{z1}
        let cross: u64 = self.z.iter().zip(&other.x).map(|(a, b)| *a as u64 * *b as u64).sum();
        let phase = ((self.phase as u64 + other.phase as u64 + cross) % d as u64) as u32;
        let x = self.x.iter().zip(&other.x).map(|(a, b)| ((*a as u32 + *b as u32) % d) as u8).collect();
        let z = self.z.iter().zip(&other.z).map(|(a, b)| ((*a as u32 + *b as u32) % d) as u8).collect();
        Ok(WeylOp { dim: d, x, z, phase })
    }

    /// Short name: `X2`, `Z0`, `Y4` for qubits; `X^1Z^2@3` otherwise.
    pub fn label(&self) -> String {
        if self.weight() == 0 {
            return "I".into();
        }
        let mut parts = Vec::new();
        for (i, (&a, &b)) in self.x.iter().zip(&self.z).enumerate() {
            if a == 0 && b == 0 {
                continue;
            }
            let s = if self.dim == 2 {
                match (a, b) {
                    (1, 0) => format!("X{i}"),
                    (0, 1) => format!("Z{i}"),
                    _ => format!("Y{i}"),
                }
            } else {
                format!("X^{a}Z^{b}@{i}")
            };
            parts.push(s);
        }
        parts.join(" ")
    }
}

/// Exact image of a ket under a Weyl operator.
pub fn apply_weyl(op: &WeylOp, ket: &SparseKet) -> Result<SparseKet> {
    ket.check_compat(op.n(), op.dim())?;
    let radix = ket.radix;
    let d = radix.dim as u64;
    let mut terms = BTreeMap::new();
    for (&label, amp) in &ket.terms {
        let mut digits = radix.decode(label);
        let mut e = op.phase as u64;
        for ((v, &x), &z) in digits.iter_mut().zip(&op.x).zip(&op.z) {
            e += z as u64 * *v as u64;
            *v = ((*v as u64 + x as u64) % d) as u8;
        }
        terms.insert(radix.encode(&digits), amp.rotate(e));
    }
    Ok(SparseKet { radix, terms })
}

/// `⟨a|b⟩`, conjugating `a`'s amplitudes.
pub fn inner(a: &SparseKet, b: &SparseKet) -> Result<CycInt> {
    a.check_compat(b.n(), b.dim())?;
    let (small, large, small_is_a) = if a.terms.len() <= b.terms.len() { (a, b, true) } else { (b, a, false) };
    let mut acc = CycInt::zero(a.dim());
    for (label, amp) in &small.terms {
        if let Some(other) = large.terms.get(label) {
            let term = if small_is_a { &amp.conj() * other } else { &other.conj() * amp };
            acc += &term;
        }
    }
    Ok(acc)
}

/// `(i, j)` position of a generator: weight class `2i + l` and rank `j`
/// inside that class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct GeneratorIndex {
    pub i: usize,
    pub j: usize,
}

/// Ordered basis of a lifted code.
#[derive(Debug, Clone)]
pub struct QuantumCodeBasis {
    n: usize,
    dim: u32,
    params: Option<CodeParams>,
    kets: Vec<SparseKet>,
    index: Vec<GeneratorIndex>,
    /// Lifted generators, when the basis came from a classical code.
    generators: Vec<BitString>,
}

impl QuantumCodeBasis {
    pub fn empty(n: usize, dim: u32) -> Result<Self> {
        Radix::new(n, dim)?;
        Ok(Self { n, dim, params: None, kets: Vec::new(), index: Vec::new(), generators: Vec::new() })
    }

    /// Wrap arbitrary kets, e.g. a hand-built control basis.
    pub fn from_kets(kets: Vec<SparseKet>) -> Result<Self> {
        let first = kets.first().ok_or_else(|| Error::InvalidParams("empty basis".into()))?;
        let (n, dim) = (first.n(), first.dim());
        for k in &kets {
            k.check_compat(n, dim)?;
        }
        let index = (0..kets.len()).map(|j| GeneratorIndex { i: 0, j }).collect();
        Ok(Self { n, dim, params: None, kets, index, generators: Vec::new() })
    }

    /// Build the family code `C_n` for the given parameters.
    pub fn from_params(params: &CodeParams) -> Result<Self> {
        let gens = classical::build_generators(params)?;
        let mut basis = lift_qudit(&gens, params.dim)?;
        basis.params = Some(*params);
        let l = params.l as usize;
        basis.index = index_by_weight(&gens, |w| (w - l) / 2);
        Ok(basis)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn params(&self) -> Option<&CodeParams> {
        self.params.as_ref()
    }

    pub fn kets(&self) -> &[SparseKet] {
        &self.kets
    }

    pub fn len(&self) -> usize {
        self.kets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kets.is_empty()
    }

    pub fn generator_index(&self) -> &[GeneratorIndex] {
        &self.index
    }

    pub fn position(&self, i: usize, j: usize) -> Option<usize> {
        self.index.iter().position(|g| g.i == i && g.j == j)
    }

    pub fn support_index(&self) -> SupportIndex {
        SupportIndex::new(self)
    }

    /// Dense Gram matrix. Intended for small bases.
    pub fn gram(&self) -> Vec<Vec<CycInt>> {
        let idx = self.support_index();
        let mut g = vec![vec![CycInt::zero(self.dim); self.len()]; self.len()];
        for (b, ket) in self.kets.iter().enumerate() {
            for (a, v) in idx.overlaps(ket) {
                g[a][b] = v;
            }
        }
        g
    }

    /// True iff the Gram matrix equals `scale · I`, checked through support
    /// overlaps only.
    pub fn gram_is_scaled_identity(&self, scale: i64) -> bool {
        let idx = self.support_index();
        let s = CycInt::from_int(self.dim, scale);
        self.kets.iter().enumerate().all(|(b, ket)| {
            let over = idx.overlaps(ket);
            let diag_ok = over.iter().any(|(a, v)| *a == b && *v == s);
            diag_ok && over.iter().all(|(a, _)| *a == b)
        })
    }

    pub fn generators(&self) -> &[BitString] {
        &self.generators
    }

    /// One ket per line. Lifted kets list the generator first and then its
    /// `X^{⊗n}` orbit, e.g. `|10000>+|01111>`.
    pub fn ket_text(&self, a: usize) -> String {
        let ket = &self.kets[a];
        let Some(g) = self.generators.get(a) else {
            return ket.to_text();
        };
        let radix = ket.radix();
        let base = DitString::from_bits(g).digits;
        let order: Vec<u64> = (0..self.dim)
            .map(|c| {
                let digits: Vec<u8> = base.iter().map(|&v| ((v as u32 + c) % self.dim) as u8).collect();
                radix.encode(&digits)
            })
            .collect();
        ket.to_text_ordered(&order)
    }

    pub fn to_text(&self) -> String {
        (0..self.len()).map(|a| self.ket_text(a) + "\n").collect()
    }
}

fn index_by_weight(gens: &[BitString], class: impl Fn(usize) -> usize) -> Vec<GeneratorIndex> {
    let mut counters: HashMap<usize, usize> = HashMap::new();
    gens.iter()
        .map(|g| {
            let c = counters.entry(g.weight()).or_insert(0);
            let out = GeneratorIndex { i: class(g.weight()), j: *c };
            *c += 1;
            out
        })
        .collect()
}

/// Map from basis label to the kets containing it, for fast matrix elements.
#[derive(Debug, Clone)]
pub struct SupportIndex {
    dim: u32,
    by_label: HashMap<u64, Vec<(usize, CycInt)>>,
}

impl SupportIndex {
    pub fn new(basis: &QuantumCodeBasis) -> Self {
        let mut by_label: HashMap<u64, Vec<(usize, CycInt)>> = HashMap::new();
        for (a, ket) in basis.kets.iter().enumerate() {
            for (&l, amp) in &ket.terms {
                by_label.entry(l).or_default().push((a, amp.conj()));
            }
        }
        Self { dim: basis.dim, by_label }
    }

    /// Nonzero `⟨ψ_a|φ⟩` in increasing `a`.
    pub fn overlaps(&self, phi: &SparseKet) -> Vec<(usize, CycInt)> {
        let mut acc: BTreeMap<usize, CycInt> = BTreeMap::new();
        for (l, amp) in &phi.terms {
            if let Some(hits) = self.by_label.get(l) {
                for (a, conj_amp) in hits {
                    *acc.entry(*a).or_insert_with(|| CycInt::zero(self.dim)) += &(conj_amp * amp);
                }
            }
        }
        acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }
}

/// Qubit lift: one ket `|v⟩ + |v̄⟩` per complement pair, in generator order.
pub fn lift_qubit(code: &ClassicalCode) -> Result<QuantumCodeBasis> {
    let diag = classical::pairing_admissible(code);
    if !diag.admissible {
        return Err(Error::Inadmissible(diag.note));
    }
    let n = code.n();
    let one = CycInt::one(2);
    let gens = code.generators();
    let kets = gens
        .iter()
        .map(|g| {
            let mut ket = SparseKet::new(n, 2)?;
            ket.add_term(g.bits(), one.clone());
            ket.add_term(g.complement().bits(), one.clone());
            Ok(ket)
        })
        .collect::<Result<Vec<_>>>()?;
    let index = index_by_weight(&gens, |w| w);
    Ok(QuantumCodeBasis { n, dim: 2, params: None, kets, index, generators: gens })
}

/// Qudit lift: one ket `Σ_c |v + c·(1…1)⟩` per generator.
pub fn lift_qudit(generators: &[BitString], dim: u32) -> Result<QuantumCodeBasis> {
    let n = generators.first().map(|g| g.len()).ok_or_else(|| Error::InvalidParams("no generators".into()))?;
    let radix = Radix::new(n, dim)?;
    let one = CycInt::one(dim);
    let mut seen: HashSet<u64> = HashSet::new();
    let mut owner: HashMap<u64, BitString> = HashMap::new();
    let mut kets = Vec::with_capacity(generators.len());
    for g in generators {
        if g.len() != n {
            return Err(Error::DimensionMismatch(format!("generator {g} has length {}, expected {n}", g.len())));
        }
        let base = DitString::from_bits(g).digits;
        let mut ket = SparseKet { radix, terms: BTreeMap::new() };
        for c in 0..dim {
            let digits: Vec<u8> = base.iter().map(|&v| ((v as u32 + c) % dim) as u8).collect();
            let label = radix.encode(&digits);
            if !seen.insert(label) {
                return Err(Error::OrbitCollision(format!(
                    "label {} of generator {g} already produced by {}",
                    radix.format(label),
                    owner[&label]
                )));
            }
            owner.insert(label, *g);
            ket.terms.insert(label, one.clone());
        }
        kets.push(ket);
    }
    let index = index_by_weight(generators, |w| w);
    Ok(QuantumCodeBasis { n, dim, params: None, kets, index, generators: generators.to_vec() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::full_code;

    fn ket_from(n: usize, dim: u32, labels: &[(&str, i64)]) -> SparseKet {
        let mut k = SparseKet::new(n, dim).unwrap();
        for (l, a) in labels {
            let label = k.radix().parse(l).unwrap();
            k.add_term(label, CycInt::from_int(dim, *a));
        }
        k
    }

    #[test]
    fn qubit_lift_n5_matches_listing() {
        let basis = lift_qubit(&full_code(&CodeParams::new(0, 1, 2).unwrap()).unwrap()).unwrap();
        let text: Vec<String> = (0..basis.len()).map(|a| basis.ket_text(a)).collect();
        assert_eq!(
            text,
            ["|10000>+|01111>", "|01000>+|10111>", "|00100>+|11011>", "|00010>+|11101>", "|00001>+|11110>",]
        );
        let single = lift_qubit(&ClassicalCode::from_text("000\n111\n").unwrap()).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(single.kets()[0].to_text(), "|000>+|111>");
        let b7 = lift_qubit(&full_code(&CodeParams::new(1, 0, 2).unwrap()).unwrap()).unwrap();
        assert_eq!((b7.len(), b7.n()), (22, 7));
    }

    #[test]
    fn lift_rejects_inadmissible() {
        let bad = ClassicalCode::from_text("00000\n11111\n10000\n01111\n").unwrap();
        assert!(matches!(lift_qubit(&bad), Err(Error::Inadmissible(_))));
    }

    #[test]
    fn qutrit_lift() {
        let g: BitString = "10000".parse().unwrap();
        let b = lift_qudit(&[g], 3).unwrap();
        let k = &b.kets()[0];
        let labels: Vec<String> = k.terms().keys().map(|&l| k.radix().format(l)).collect();
        assert_eq!(labels, ["02222", "10000", "21111"]);
        assert_eq!(b.to_text(), "|10000>+|21111>+|02222>\n");
        let qubit = lift_qudit(&[g], 2).unwrap();
        assert_eq!(qubit.kets()[0].to_text(), "|01111>+|10000>");
        assert_eq!(qubit.to_text(), "|10000>+|01111>\n");

        let p = CodeParams::new(0, 1, 3).unwrap();
        let basis = QuantumCodeBasis::from_params(&p).unwrap();
        assert_eq!(basis.len(), 5);
        assert!(basis.gram_is_scaled_identity(3));
    }

    #[test]
    fn orbit_collision_detected() {
        let a: BitString = "000".parse().unwrap();
        let b: BitString = "111".parse().unwrap();
        assert!(matches!(lift_qudit(&[a, b], 2), Err(Error::OrbitCollision(_))));
        assert!(matches!(lift_qudit(&[a, b], 3), Err(Error::OrbitCollision(_))));
        assert!(lift_qudit(&[a], 3).is_ok());
    }

    #[test]
    fn weyl_actions_on_v0() {
        let v0 = ket_from(5, 2, &[("10000", 1), ("01111", 1)]);
        let x0 = WeylOp::single_site(5, 2, 0, 1, 0).unwrap();
        assert_eq!(apply_weyl(&x0, &v0).unwrap(), ket_from(5, 2, &[("00000", 1), ("11111", 1)]));
        let z0 = WeylOp::single_site(5, 2, 0, 0, 1).unwrap();
        assert_eq!(apply_weyl(&z0, &v0).unwrap(), ket_from(5, 2, &[("10000", -1), ("01111", 1)]));
        let id = WeylOp::identity(5, 2);
        assert_eq!(apply_weyl(&id, &v0).unwrap(), v0);
        let wrong = WeylOp::identity(4, 2);
        assert!(apply_weyl(&wrong, &v0).is_err());
    }

    #[test]
    fn inner_products() {
        let v0 = ket_from(5, 2, &[("10000", 1), ("01111", 1)]);
        let v1 = ket_from(5, 2, &[("01000", 1), ("10111", 1)]);
        assert_eq!(inner(&v0, &v0).unwrap().as_integer(), Some(2));
        assert_eq!(inner(&v0, &v1).unwrap().as_integer(), Some(0));
        for site in 0..5 {
            let z = WeylOp::single_site(5, 2, site, 0, 1).unwrap();
            assert_eq!(inner(&v0, &apply_weyl(&z, &v0).unwrap()).unwrap().as_integer(), Some(0));
        }
        assert!(inner(&v0, &ket_from(3, 2, &[("000", 1)])).is_err());
    }

    #[test]
    fn compose_matches_sequential_application() {
        let ket = ket_from(3, 3, &[("012", 1), ("200", 2), ("111", -1)]);
        let a = WeylOp::new(3, vec![1, 0, 2], vec![2, 1, 0], 1).unwrap();
        let b = WeylOp::new(3, vec![0, 2, 1], vec![1, 1, 2], 0).unwrap();
        let seq = apply_weyl(&a, &apply_weyl(&b, &ket).unwrap()).unwrap();
        let comb = apply_weyl(&a.compose(&b).unwrap(), &ket).unwrap();
        assert_eq!(seq, comb);
    }

    #[test]
    fn labels() {
        assert_eq!(WeylOp::single_site(5, 2, 3, 1, 1).unwrap().label(), "Y3");
        assert_eq!(WeylOp::single_site(5, 3, 1, 2, 1).unwrap().label(), "X^2Z^1@1");
        assert_eq!(WeylOp::identity(2, 2).label(), "I");
    }

    #[test]
    fn ket_json_round_trip() {
        let k = ket_from(3, 3, &[("012", 1), ("200", 2)]);
        let j = serde_json::to_string(&k.to_json()).unwrap();
        assert!(j.starts_with(r#"{"n":3,"D":3,"terms":[{"label":"012","amp":[1,0,0]}"#));
        let back: KetJson = serde_json::from_str(&j).unwrap();
        assert_eq!(SparseKet::from_json(&back).unwrap(), k);
    }

    #[test]
    fn radix_limits() {
        assert!(Radix::new(63, 2).is_ok());
        assert!(Radix::new(64, 2).is_err());
        assert!(Radix::new(39, 3).is_ok());
        assert!(Radix::new(41, 3).is_err());
    }
}
