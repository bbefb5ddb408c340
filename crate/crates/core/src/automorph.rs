//! Automorphisms of the family codes within the family
//! `(X^{⊗n})^b Z^f ∘ π`, plus non-family counterexamples.
//!
//! Scope: membership is decided exactly for every `(b, f)` and for the
//! sampled permutations. Local unitaries outside the Pauli-diagonal family
//! are only probed through a fixed counterexample suite; the continuum of
//! local unitaries is not searched.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::classical::{BitString, CodeParams};
use crate::dense::{self, DenseState, Frame, Gate};
use crate::error::{Error, Result};
use crate::lift::{QuantumCodeBasis, SparseKet, SupportIndex};
use crate::linalg;
use crate::projector::{permute_bits, PauliSumOperator};

pub const SCOPE_NOTE: &str = "Exhaustive over b in {0,1} and every Z-pattern f, for the identity, a full cycle and \
the sampled permutations; operators outside the (X^n)^b Z^f family are probed only by the fixed counterexample \
suite, not over all local unitaries.";

/// Largest `n` for the exhaustive `(b, f)` sweep.
pub const MAX_SWEEP_N: usize = 11;
/// Largest `n` for the dense counterexample suite.
pub const MAX_COUNTEREXAMPLE_N: usize = 7;
/// Projection defect above which a unitary is declared to leave the code.
pub const DEFECT_THRESHOLD: f64 = 1e-6;

/// `(X^{⊗n})^b · Z^f ∘ π`: permute first, then `Z^f`, then `X^{⊗n}`.
///
/// `perm[i]` is the site that site `i` moves to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AutomorphismCandidate {
    pub b: bool,
    pub f: BitString,
    pub perm: Vec<usize>,
}

impl AutomorphismCandidate {
    pub fn new(b: bool, f: BitString, perm: Vec<usize>) -> Result<Self> {
        check_perm(&perm, f.len())?;
        Ok(Self { b, f, perm })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(false, BitString::new(n, 0)?, (0..n).collect())
    }

    pub fn n(&self) -> usize {
        self.f.len()
    }

    /// `self ∘ first`, with the sign picked up by reordering:
    /// `X^{b2} Z^{f2} π2 X^{b1} Z^{f1} π1 = (-1)^{b1·|f2|} X^{b1⊕b2} Z^{f2 ⊕ π2(f1)} π2π1`.
    pub fn compose(&self, first: &Self) -> Result<(i8, Self)> {
        let n = self.n();
        if first.n() != n {
            return Err(Error::DimensionMismatch("composing candidates on different registers".into()));
        }
        let sign = if first.b && self.f.weight() % 2 == 1 { -1 } else { 1 };
        let f = BitString::new(n, self.f.bits() ^ permute_bits(first.f.bits(), &self.perm, n))?;
        let perm = first.perm.iter().map(|&p| self.perm[p]).collect();
        Ok((sign, Self { b: self.b ^ first.b, f, perm }))
    }

    /// `U P U†`, term by term.
    pub fn conjugate(&self, p: &PauliSumOperator) -> PauliSumOperator {
        let n = self.n();
        let moved = p.permuted(&self.perm);
        let mut out = PauliSumOperator::new(n, p.den_log2());
        for (&(x, z), &v) in moved.terms() {
            let mut sign = if (self.f.bits() & x).count_ones().is_multiple_of(2) { 1 } else { -1 };
            if self.b && z.count_ones() % 2 == 1 {
                sign = -sign;
            }
            out.add_term(x, z, sign * v);
        }
        out
    }
}

fn check_perm(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::DimensionMismatch(format!("permutation of {} sites for n = {n}", perm.len())));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidParams(format!("{perm:?} is not a permutation")));
        }
    }
    Ok(())
}

pub fn apply_candidate(c: &AutomorphismCandidate, ket: &SparseKet) -> Result<SparseKet> {
    if ket.dim() != 2 || ket.n() != c.n() {
        return Err(Error::DimensionMismatch(format!(
            "candidate on {} qubits applied to (n={}, D={})",
            c.n(),
            ket.n(),
            ket.dim()
        )));
    }
    let n = c.n();
    let ones = (1u64 << n) - 1;
    let mut out = SparseKet::new(n, 2)?;
    for (&v, amp) in ket.terms() {
        let mut w = permute_bits(v, &c.perm, n);
        let mut a = amp.clone();
        if (w & c.f.bits()).count_ones() % 2 == 1 {
            a = -a;
        }
        if c.b {
            w ^= ones;
        }
        out.add_term(w, a);
    }
    Ok(out)
}

/// Exact membership test for the span of a qubit basis: a ket lies in the
/// span iff its squared projection `b^T G^{-1} b` equals its squared norm.
pub struct Membership {
    index: SupportIndex,
    gram: GramForm,
}

enum GramForm {
    Diagonal(Vec<i64>),
    Dense(Vec<Vec<BigRational>>),
}

impl Membership {
    pub fn new(basis: &QuantumCodeBasis) -> Result<Self> {
        if basis.dim() != 2 {
            return Err(Error::InvalidParams("membership test is implemented for qubit codes".into()));
        }
        let index = basis.support_index();
        let mut diag = Vec::with_capacity(basis.len());
        let mut off_diagonal = false;
        for (a, ket) in basis.kets().iter().enumerate() {
            for (b, v) in index.overlaps(ket) {
                if a == b {
                    diag.push(v.as_integer().expect("integer Gram entry"));
                } else {
                    off_diagonal = true;
                }
            }
        }
        let gram = if !off_diagonal && diag.len() == basis.len() {
            GramForm::Diagonal(diag)
        } else {
            let g = basis.gram();
            GramForm::Dense(
                g.iter()
                    .map(|row| row.iter().map(|v| BigRational::from_integer(v.as_integer().unwrap().into())).collect())
                    .collect(),
            )
        };
        Ok(Self { index, gram })
    }

    pub fn contains(&self, ket: &SparseKet) -> bool {
        let norm = BigRational::from_integer(ket.norm_sq().as_integer().expect("integer norm").into());
        let overlaps = self.index.overlaps(ket);
        let proj = match &self.gram {
            GramForm::Diagonal(d) => overlaps
                .iter()
                .map(|(a, v)| {
                    let x = v.as_integer().unwrap();
                    BigRational::new(BigInt::from(x * x), BigInt::from(d[*a]))
                })
                .fold(BigRational::zero(), |acc, t| acc + t),
            GramForm::Dense(g) => {
                let mut rhs = vec![BigRational::zero(); g.len()];
                for (a, v) in &overlaps {
                    rhs[*a] = BigRational::from_integer(v.as_integer().unwrap().into());
                }
                match linalg::solve_rational(g.clone(), rhs.clone()) {
                    Some(x) => x.iter().zip(&rhs).fold(BigRational::zero(), |acc, (p, q)| acc + p * q),
                    None => return false,
                }
            }
        };
        proj == norm
    }
}

pub fn preserves_codespace(c: &AutomorphismCandidate, basis: &QuantumCodeBasis) -> Result<bool> {
    let m = Membership::new(basis)?;
    preserves_with(c, basis, &m)
}

fn preserves_with(c: &AutomorphismCandidate, basis: &QuantumCodeBasis, m: &Membership) -> Result<bool> {
    for ket in basis.kets() {
        if !m.contains(&apply_candidate(c, ket)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Serialize)]
pub struct PermutationResult {
    pub index: usize,
    pub kind: &'static str,
    pub perm: Vec<usize>,
    pub candidates: usize,
    pub preserved: usize,
    pub preserved_even: usize,
    pub preserved_odd: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub perm_index: usize,
    pub b: bool,
    pub f: BitString,
    pub preserved: bool,
    pub expected: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParityLawReport {
    pub params: CodeParams,
    pub n: usize,
    pub seed: u64,
    pub perm_samples: usize,
    pub permutations: Vec<PermutationResult>,
    pub violations: Vec<Violation>,
    pub parity_law_holds: bool,
    pub scope: &'static str,
}

/// Identity, the full cycle `i → i+1`, then `samples` seeded random
/// permutations.
pub fn permutation_family(n: usize, samples: usize, seed: u64) -> Vec<(&'static str, Vec<usize>)> {
    let mut out = vec![("identity", (0..n).collect()), ("cycle", (0..n).map(|i| (i + 1) % n).collect())];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let mut p: Vec<usize> = (0..n).collect();
        p.shuffle(&mut rng);
        out.push(("random", p));
    }
    out
}

/// Sweep all `(b, f)` against each permutation; the family predicts
/// preservation exactly when `|f|` is even.
pub fn verify_parity_law(params: &CodeParams, perm_samples: usize, seed: u64) -> Result<ParityLawReport> {
    if params.dim != 2 {
        return Err(Error::InvalidParams("automorphism sweep is for qubit codes".into()));
    }
    let n = params.enum_n()?;
    if n > MAX_SWEEP_N {
        return Err(Error::SizeLimit(format!("n = {n} exceeds sweep limit {MAX_SWEEP_N}")));
    }
    let basis = QuantumCodeBasis::from_params(params)?;
    let membership = Membership::new(&basis)?;
    let perms = permutation_family(n, perm_samples, seed);
    let mut permutations = Vec::with_capacity(perms.len());
    let mut violations = Vec::new();
    for (idx, (kind, perm)) in perms.into_iter().enumerate() {
        let outcomes: Vec<(bool, u64, bool)> = (0..2u64 << n)
            .into_par_iter()
            .map(|code| {
                let b = code >> n == 1;
                let f = code & ((1 << n) - 1);
                let cand = AutomorphismCandidate { b, f: BitString::new(n, f).unwrap(), perm: perm.clone() };
                let ok = preserves_with(&cand, &basis, &membership).expect("shapes match");
                (b, f, ok)
            })
            .collect();
        let mut res = PermutationResult {
            index: idx,
            kind,
            perm: perm.clone(),
            candidates: outcomes.len(),
            preserved: 0,
            preserved_even: 0,
            preserved_odd: 0,
        };
        for (b, f, ok) in outcomes {
            let even = f.count_ones() % 2 == 0;
            if ok {
                res.preserved += 1;
                if even {
                    res.preserved_even += 1;
                } else {
                    res.preserved_odd += 1;
                }
            }
            if ok != even {
                violations.push(Violation {
                    perm_index: idx,
                    b,
                    f: BitString::new(n, f).unwrap(),
                    preserved: ok,
                    expected: even,
                });
            }
        }
        permutations.push(res);
    }
    Ok(ParityLawReport {
        params: *params,
        n,
        seed,
        perm_samples,
        permutations,
        parity_law_holds: violations.is_empty(),
        violations,
        scope: SCOPE_NOTE,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CounterexampleResult {
    pub name: &'static str,
    pub site: usize,
    pub max_defect: f64,
    pub fails_preservation: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CounterexampleReport {
    pub params: CodeParams,
    pub threshold: f64,
    pub results: Vec<CounterexampleResult>,
    /// Every probed unitary leaves the codespace.
    pub all_fail: bool,
}

/// Largest `1 - ||P U ψ̂_a||²` over the normalized basis kets.
pub fn projection_defect(basis: &QuantumCodeBasis, gate: &Gate, site: usize) -> Result<f64> {
    let frame = orthonormal_frame(basis)?;
    let mut worst: f64 = 0.0;
    for v in &frame.vectors {
        worst = worst.max(frame.defect(&v.apply_gate(gate, site)?));
    }
    Ok(worst)
}

/// Normalized dense copies of the (mutually orthogonal) basis kets.
pub fn orthonormal_frame(basis: &QuantumCodeBasis) -> Result<Frame> {
    let vectors = basis
        .kets()
        .iter()
        .map(|k| DenseState::from_sparse(k).map(DenseState::normalized))
        .collect::<Result<Vec<_>>>()?;
    Ok(Frame { vectors })
}

/// Single-site Hadamard, `diag(1, i)` and lone `X` on site 0; each is
/// expected to move some code ket out of the codespace.
pub fn counterexample_suite(params: &CodeParams) -> Result<CounterexampleReport> {
    if params.dim != 2 {
        return Err(Error::InvalidParams("counterexample suite is for qubit codes".into()));
    }
    let n = params.enum_n()?;
    if n > MAX_COUNTEREXAMPLE_N {
        return Err(Error::SizeLimit(format!("n = {n} exceeds counterexample limit {MAX_COUNTEREXAMPLE_N}")));
    }
    let basis = QuantumCodeBasis::from_params(params)?;
    let suite: [(&'static str, Gate); 3] =
        [("hadamard", dense::hadamard()), ("phase_diag_1_i", dense::phase_gate()), ("single_site_x", dense::pauli_x())];
    let results = suite
        .iter()
        .map(|(name, g)| {
            let d = projection_defect(&basis, g, 0)?;
            Ok(CounterexampleResult { name, site: 0, max_defect: d, fails_preservation: d > DEFECT_THRESHOLD })
        })
        .collect::<Result<Vec<_>>>()?;
    let all_fail = results.iter().all(|r| r.fails_preservation);
    Ok(CounterexampleReport { params: *params, threshold: DEFECT_THRESHOLD, results, all_fail })
}

/// Exact check that `U P U† = P` for the family projector.
pub fn commutes_with_projector(c: &AutomorphismCandidate, p: &PauliSumOperator) -> bool {
    c.conjugate(p) == *p
}

/// Ket-level consistency: the sign bookkeeping of [`AutomorphismCandidate::compose`]
/// reproduces sequential application.
pub fn composition_consistent(
    second: &AutomorphismCandidate,
    first: &AutomorphismCandidate,
    ket: &SparseKet,
) -> Result<bool> {
    let seq = apply_candidate(second, &apply_candidate(first, ket)?)?;
    let (sign, combined) = second.compose(first)?;
    let mut direct = apply_candidate(&combined, ket)?;
    if sign < 0 {
        let mut neg = SparseKet::new(ket.n(), 2)?;
        for (&l, a) in direct.terms() {
            neg.add_term(l, -a.clone());
        }
        direct = neg;
    }
    Ok(seq == direct)
}

/// Per-weight histogram of which `f` preserve the code, for quick display.
pub fn parity_histogram(report: &ParityLawReport) -> BTreeMap<&'static str, usize> {
    let mut h = BTreeMap::new();
    let (even, odd) = report.permutations.iter().fold((0, 0), |(e, o), p| (e + p.preserved_even, o + p.preserved_odd));
    h.insert("preserved_even_f", even);
    h.insert("preserved_odd_f", odd);
    h
}
