//! Exact Knill-Laflamme checks for single-site errors.
//!
//! A code detects an error `E` iff `⟨ψ_a|E|ψ_b⟩ = c_E δ_ab` for every pair
//! of basis kets. Distance 2 means this holds for every weight-1 Weyl
//! operator. Erasure correction at a known site then follows: for `E`, `F`
//! supported on that site, `E†F` is again a weight-≤1 operator up to phase.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::classical::CodeParams;
use crate::cycint::CycInt;
use crate::error::{Error, Result};
use crate::lift::{apply_weyl, QuantumCodeBasis, SupportIndex, WeylOp};
use crate::linalg;

/// Offending matrix elements kept per report.
pub const MAX_WITNESSES: usize = 64;

/// Largest block length accepted by [`error_span_rank`].
pub const MAX_SPAN_N: usize = 13;

pub const ERASURE_COROLLARY: &str = "For an erasure at site i, every pair E, F of operators supported on i \
gives E^dag F proportional to a weight-<=1 Weyl operator; the weight-1 conditions checked here together \
with the Gram condition therefore give <psi_a|E^dag F|psi_b> = c_EF delta_ab, so any single erasure at a \
known location is correctable.";

/// All single-site non-identity Weyl operators, site by site. For qubits the
/// per-site order is `X, Z, Y`.
pub fn weight_one_ops(n: usize, dim: u32) -> Vec<WeylOp> {
    let d = dim as u8;
    let mut per_site: Vec<(u8, u8)> =
        (0..d).flat_map(|a| (0..d).map(move |b| (a, b))).filter(|&(a, b)| (a, b) != (0, 0)).collect();
    per_site.sort_by_key(|&(a, b)| (a != 0 && b != 0, b, a));
    (0..n)
        .flat_map(|site| {
            per_site.iter().map(move |&(a, b)| WeylOp::single_site(n, dim, site, a, b).expect("site in range"))
        })
        .collect()
}

/// Sparse `M × M` matrix of exact matrix elements.
#[derive(Debug, Clone, PartialEq)]
pub struct KlMatrix {
    size: usize,
    dim: u32,
    entries: BTreeMap<(usize, usize), CycInt>,
}

impl KlMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, a: usize, b: usize) -> CycInt {
        self.entries.get(&(a, b)).cloned().unwrap_or_else(|| CycInt::zero(self.dim))
    }

    /// Nonzero entries in row-major order.
    pub fn nonzero(&self) -> impl Iterator<Item = (&(usize, usize), &CycInt)> {
        self.entries.iter()
    }

    pub fn to_dense(&self) -> Vec<Vec<CycInt>> {
        (0..self.size).map(|a| (0..self.size).map(|b| self.get(a, b)).collect()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// `Ok(c)` when the matrix equals `c · I`, else the offending entries in
    /// row-major order (diagonal entries are measured against `(0,0)`).
    pub fn scalar_of_identity(&self) -> std::result::Result<CycInt, Vec<(usize, usize, CycInt)>> {
        let c = if self.size == 0 { CycInt::zero(self.dim) } else { self.get(0, 0) };
        let mut bad = Vec::new();
        for (&(a, b), v) in &self.entries {
            if a != b {
                bad.push((a, b, v.clone()));
            }
        }
        for a in 1..self.size {
            let v = self.get(a, a);
            if v != c {
                bad.push((a, a, v));
            }
        }
        if bad.is_empty() {
            Ok(c)
        } else {
            bad.sort_by_key(|(a, b, _)| (*a, *b));
            Err(bad)
        }
    }
}

fn check_shape(basis: &QuantumCodeBasis, e: &WeylOp) -> Result<()> {
    if basis.n() != e.n() || basis.dim() != e.dim() {
        return Err(Error::DimensionMismatch(format!(
            "basis (n={}, D={}) vs operator (n={}, D={})",
            basis.n(),
            basis.dim(),
            e.n(),
            e.dim()
        )));
    }
    Ok(())
}

/// `⟨ψ_a|E|ψ_b⟩` for all `a, b`, computed through support overlaps.
pub fn kl_matrix(basis: &QuantumCodeBasis, e: &WeylOp) -> Result<KlMatrix> {
    kl_matrix_indexed(basis, &basis.support_index(), e)
}

fn kl_matrix_indexed(basis: &QuantumCodeBasis, index: &SupportIndex, e: &WeylOp) -> Result<KlMatrix> {
    check_shape(basis, e)?;
    let mut entries = BTreeMap::new();
    for (b, ket) in basis.kets().iter().enumerate() {
        let image = apply_weyl(e, ket)?;
        for (a, v) in index.overlaps(&image) {
            entries.insert((a, b), v);
        }
    }
    Ok(KlMatrix { size: basis.len(), dim: basis.dim(), entries })
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorSummary {
    pub op: String,
    /// `c_E` as normalized cyclotomic coefficients; absent when the matrix is
    /// not proportional to the identity.
    pub c_e: Option<CycInt>,
    pub proportional: bool,
    pub nonzero_entries: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub op: String,
    pub a: usize,
    pub b: usize,
    pub value: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct KlReport {
    pub n: usize,
    #[serde(rename = "D")]
    pub dim: u32,
    pub params: Option<CodeParams>,
    pub basis_size: usize,
    /// `"exact"` for prime `D`, `"numeric"` otherwise.
    pub arithmetic: &'static str,
    pub gram_scale: Option<String>,
    pub errors_checked: usize,
    pub pass: bool,
    /// Every `c_E` is zero.
    pub nondegenerate: bool,
    pub errors: Vec<ErrorSummary>,
    pub witnesses: Vec<Witness>,
    pub total_offending: usize,
    pub erasure_corollary: &'static str,
}

impl KlReport {
    pub fn first_witness(&self) -> Option<&Witness> {
        self.witnesses.first()
    }
}

/// Check the detection condition for every weight-1 error.
pub fn verify_distance2(basis: &QuantumCodeBasis) -> KlReport {
    let index = basis.support_index();
    let ops = weight_one_ops(basis.n(), basis.dim());
    let results: Vec<(ErrorSummary, Vec<Witness>)> = ops
        .par_iter()
        .map(|e| {
            let m = kl_matrix_indexed(basis, &index, e).expect("operators built for this basis");
            let label = e.label();
            let nonzero = m.entries.len();
            match m.scalar_of_identity() {
                Ok(c) => {
                    (ErrorSummary { op: label, c_e: Some(c), proportional: true, nonzero_entries: nonzero }, vec![])
                }
                Err(bad) => {
                    let w = bad
                        .into_iter()
                        .map(|(a, b, v)| Witness { op: label.clone(), a, b, value: v.to_string() })
                        .collect();
                    (ErrorSummary { op: label, c_e: None, proportional: false, nonzero_entries: nonzero }, w)
                }
            }
        })
        .collect();

    let gram_scale = basis.kets().first().map(|k| k.norm_sq());
    let gram_ok = gram_scale
        .as_ref()
        .and_then(|s| s.as_integer())
        .map_or(basis.is_empty(), |s| s > 0 && basis.gram_is_scaled_identity(s));

    let mut errors = Vec::with_capacity(results.len());
    let mut witnesses = Vec::new();
    let mut total_offending = 0;
    for (summary, w) in results {
        total_offending += w.len();
        for item in w {
            if witnesses.len() < MAX_WITNESSES {
                witnesses.push(item);
            }
        }
        errors.push(summary);
    }
    let pass = gram_ok && errors.iter().all(|e| e.proportional);
    let nondegenerate = pass && errors.iter().all(|e| e.c_e.as_ref().is_some_and(CycInt::is_zero));
    KlReport {
        n: basis.n(),
        dim: basis.dim(),
        params: basis.params().copied(),
        basis_size: basis.len(),
        arithmetic: if crate::cycint::is_prime(basis.dim()) { "exact" } else { "numeric" },
        gram_scale: gram_scale.map(|s| s.to_string()),
        errors_checked: ops.len(),
        pass,
        nondegenerate,
        errors,
        witnesses,
        total_offending,
        erasure_corollary: ERASURE_COROLLARY,
    }
}

/// Rank over the rationals of the code kets together with all their
/// weight-1 error images (qubits only).
pub fn error_span_rank(basis: &QuantumCodeBasis) -> Result<usize> {
    if basis.dim() != 2 {
        return Err(Error::InvalidParams("span rank is defined for qubit codes only".into()));
    }
    if basis.n() > MAX_SPAN_N {
        return Err(Error::SizeLimit(format!("n = {} exceeds span-rank limit {MAX_SPAN_N}", basis.n())));
    }
    let ops = weight_one_ops(basis.n(), 2);
    let mut vectors = Vec::with_capacity(basis.len() * (ops.len() + 1));
    let to_int = |k: &crate::lift::SparseKet| -> BTreeMap<u64, i64> {
        k.terms().iter().map(|(&l, a)| (l, a.as_integer().expect("qubit amplitudes are integers"))).collect()
    };
    for ket in basis.kets() {
        vectors.push(to_int(ket));
        for e in &ops {
            vectors.push(to_int(&apply_weyl(e, ket)?));
        }
    }
    Ok(linalg::sparse_rank(&vectors))
}
