//! The code projector as an exact Pauli sum.
//!
//! `P = 2^{-n} (I + X^{⊗n}) Σ_s K(2s) Σ_{|x|=2s} Z^x`, where `K(2s)` sums,
//! over the generator weight classes, the character sum
//! `Σ_{|w|=m} (-1)^{x·w}` for any `|x| = 2s`.
//!
//! Terms are stored in the normal form `X^x Z^z` (qubits, no `i` factors),
//! so products only produce signs: `(X^a Z^b)(X^c Z^d) = (-1)^{b·c} X^{a⊕c} Z^{b⊕d}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::classical::{BitString, CodeParams};
use crate::combinat::{self, binom_i};
use crate::error::{Error, Result};
use crate::lift::{apply_weyl, QuantumCodeBasis, SparseKet};
use crate::verifier::weight_one_ops;

/// Largest block length for which projectors are materialized.
pub const MAX_PROJECTOR_N: usize = 15;

/// `Σ_t (-1)^t C(2s,t) C(n-2s, m-t)`: the sum of `(-1)^{x·w}` over all
/// `|w| = m`, for any fixed `x` of weight `2s`.
pub fn derived_coeff(s: u64, m: u64, n: u64) -> BigInt {
    let two_s = 2 * s;
    let mut acc = BigInt::zero();
    for t in 0..=two_s.min(m) {
        let term = binom_i(two_s, t as i64) * binom_i(n.saturating_sub(two_s), m as i64 - t as i64);
        if t % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Literal evaluation of the alternative closed form
/// `2 Σ_{t=0}^{2i+l} C(2s,t) C(n-2s, 2i+l-t) (s-t)` for `s > 0`, and
/// `C(n, 2i+l)` for `s = 0`.
pub fn printed_coeff(s: u64, i: u64, l: u64, n: u64) -> BigInt {
    let m = 2 * i + l;
    if s == 0 {
        return binom_i(n, m as i64);
    }
    let two_s = 2 * s;
    let mut acc = BigInt::zero();
    for t in 0..=m {
        acc += binom_i(two_s, t as i64) * binom_i(n.saturating_sub(two_s), m as i64 - t as i64) * (s as i64 - t as i64);
    }
    acc * 2
}

/// `K(2s)` for the family code: `Σ_i derived_coeff(s, 2i+l, n)`.
pub fn projector_coeff(params: &CodeParams, s: u64) -> BigInt {
    let n = params.n();
    params.generator_weights().map(|m| derived_coeff(s, m as u64, n)).sum()
}

/// Rational-weighted sum of qubit Pauli terms `X^x Z^z` with a common
/// power-of-two denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliSumOperator {
    n: usize,
    den_log2: u32,
    /// `(x, z) → numerator`, canonical order by `(x, z)`; no zero entries.
    terms: BTreeMap<(u64, u64), i128>,
}

impl PauliSumOperator {
    pub fn new(n: usize, den_log2: u32) -> Self {
        Self { n, den_log2, terms: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn den_log2(&self) -> u32 {
        self.den_log2
    }

    pub fn terms(&self) -> &BTreeMap<(u64, u64), i128> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn all_ones(&self) -> u64 {
        (1u64 << self.n) - 1
    }

    /// Numerator of `(x, z)` at the operator's denominator.
    pub fn coeff(&self, x: u64, z: u64) -> i128 {
        self.terms.get(&(x, z)).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, x: u64, z: u64, num: i128) {
        let e = self.terms.entry((x, z)).or_insert(0);
        *e += num;
        if *e == 0 {
            self.terms.remove(&(x, z));
        }
    }

    /// Reduce the denominator as far as the numerators allow.
    pub fn normalize(&mut self) {
        while self.den_log2 > 0 && self.terms.values().all(|v| v % 2 == 0) {
            for v in self.terms.values_mut() {
                *v /= 2;
            }
            self.den_log2 -= 1;
        }
    }

    pub fn normalized(mut self) -> Self {
        self.normalize();
        self
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!("{} vs {} qubits", self.n, other.n)));
        }
        let rhs: Vec<((u64, u64), i128)> = other.terms.iter().map(|(k, v)| (*k, *v)).collect();
        let partials: Vec<BTreeMap<(u64, u64), i128>> = self
            .terms
            .par_iter()
            .map(|(&(a, b), &u)| {
                let mut acc = BTreeMap::new();
                for &((c, d), v) in &rhs {
                    let sign = if (b & c).count_ones() % 2 == 0 { 1 } else { -1 };
                    *acc.entry((a ^ c, b ^ d)).or_insert(0) += sign * u * v;
                }
                acc
            })
            .collect();
        let mut out = Self::new(self.n, self.den_log2 + other.den_log2);
        for part in partials {
            for ((x, z), v) in part {
                out.add_term(x, z, v);
            }
        }
        Ok(out.normalized())
    }

    /// Hermitian adjoint: `(X^x Z^z)† = (-1)^{x·z} X^x Z^z`.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::new(self.n, self.den_log2);
        for (&(x, z), &v) in &self.terms {
            let sign = if (x & z).count_ones() % 2 == 0 { 1 } else { -1 };
            out.add_term(x, z, sign * v);
        }
        out
    }

    /// Trace as `(numerator, log2 denominator)` of a rational.
    pub fn trace(&self) -> (BigInt, u32) {
        let num = BigInt::from(self.coeff(0, 0)) << self.n;
        (num, self.den_log2)
    }

    /// Exact trace when it is an integer.
    pub fn trace_integer(&self) -> Option<BigInt> {
        let (num, d) = self.trace();
        let den = BigInt::one() << d;
        (&num % &den).is_zero().then(|| num / den)
    }

    /// Apply to an integer-amplitude qubit ket. Returns numerators over
    /// `2^den_log2`.
    pub fn apply(&self, ket: &SparseKet) -> Result<BTreeMap<u64, i128>> {
        if ket.dim() != 2 || ket.n() != self.n {
            return Err(Error::DimensionMismatch("projector applies to qubit kets of matching length".into()));
        }
        let mut out: BTreeMap<u64, i128> = BTreeMap::new();
        for (&v, amp) in ket.terms() {
            let a = amp.as_integer().expect("integer qubit amplitude") as i128;
            for (&(x, z), &c) in &self.terms {
                let sign = if (z & v).count_ones() % 2 == 0 { 1 } else { -1 };
                *out.entry(v ^ x).or_insert(0) += sign * c * a;
            }
        }
        out.retain(|_, v| *v != 0);
        Ok(out)
    }

    /// Relabel sites: site `i` goes to `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut out = Self::new(self.n, self.den_log2);
        for (&(x, z), &v) in &self.terms {
            out.add_term(permute_bits(x, perm, self.n), permute_bits(z, perm, self.n), v);
        }
        out
    }

    pub fn to_export(&self) -> Vec<ExportTerm> {
        let ones = self.all_ones();
        let den = BigInt::one() << self.den_log2;
        self.terms
            .iter()
            .filter(|((x, _), _)| *x == 0 || *x == ones)
            .map(|(&(x, z), &v)| ExportTerm {
                x: BitString::new(self.n, z).expect("fits").to_string(),
                with_xn: x == ones,
                num: v.to_string(),
                den: den.to_string(),
            })
            .collect()
    }
}

/// Move the bit at printed position `i` to position `perm[i]`.
pub fn permute_bits(v: u64, perm: &[usize], n: usize) -> u64 {
    let mut out = 0;
    for (i, &p) in perm.iter().enumerate() {
        if (v >> (n - 1 - i)) & 1 == 1 {
            out |= 1 << (n - 1 - p);
        }
    }
    out
}

/// One exported term `(1/den)·num·(X^{⊗n})^{withXn} Z^x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExportTerm {
    pub x: String,
    #[serde(rename = "withXn")]
    pub with_xn: bool,
    pub num: String,
    pub den: String,
}

/// Build the projector from the character-sum coefficients.
pub fn build_projector(params: &CodeParams) -> Result<PauliSumOperator> {
    if params.dim != 2 {
        return Err(Error::InvalidParams("projector is built for qubit codes only".into()));
    }
    let n = params.enum_n()?;
    if n > MAX_PROJECTOR_N {
        return Err(Error::SizeLimit(format!("n = {n} exceeds projector limit {MAX_PROJECTOR_N}")));
    }
    let coeffs: Vec<i128> = (0..=(n as u64 - 1) / 2)
        .map(|s| projector_coeff(params, s).to_i128().expect("coefficient fits in i128"))
        .collect();
    let ones = (1u64 << n) - 1;
    let mut p = PauliSumOperator::new(n, n as u32);
    for z in 0..(1u64 << n) {
        let w = z.count_ones() as usize;
        if !w.is_multiple_of(2) {
            continue;
        }
        let k = coeffs[w / 2];
        p.add_term(0, z, k);
        p.add_term(ones, z, k);
    }
    Ok(p)
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProjectorReport {
    pub params: CodeParams,
    pub n: usize,
    pub terms: usize,
    pub expected_terms: usize,
    pub k_values: Vec<String>,
    pub trace: String,
    pub codespace_size: String,
    pub checks: Vec<CheckOutcome>,
    pub pass: bool,
}

/// Exact algebraic checks on the projector: idempotence, self-adjointness,
/// trace, action on code kets and on their weight-1 error images, and the
/// `(I + X^{⊗n}) Z^{even}` term structure.
pub fn projector_selfcheck(params: &CodeParams) -> Result<ProjectorReport> {
    let p = build_projector(params)?;
    let basis = QuantumCodeBasis::from_params(params)?;
    let m = combinat::codespace_size(params);
    Ok(selfcheck_operator(params, &p, &basis, &m.into()))
}

/// Run the self-check against an arbitrary operator (used for soundness
/// controls on mutated projectors).
pub fn selfcheck_operator(
    params: &CodeParams,
    p: &PauliSumOperator,
    basis: &QuantumCodeBasis,
    expected_trace: &BigInt,
) -> ProjectorReport {
    let n = p.n();
    let mut checks = Vec::new();

    let sq = p.multiply(p).expect("same size");
    let norm = p.clone().normalized();
    let idem = sq == norm;
    let idem_detail = if idem { "P*P equals P term by term".to_string() } else { first_difference(&sq, &norm) };
    checks.push(CheckOutcome { name: "idempotent", pass: idem, detail: idem_detail });

    let adj = p.adjoint();
    let herm = adj == *p;
    checks.push(CheckOutcome {
        name: "self_adjoint",
        pass: herm,
        detail: if herm { "P^dag equals P".into() } else { first_difference(&adj, p) },
    });

    let trace_ok = p.trace_integer().as_ref() == Some(expected_trace);
    let (tn, td) = p.trace();
    let trace_text = format!("{tn}/2^{td}");
    checks.push(CheckOutcome {
        name: "trace",
        pass: trace_ok,
        detail: format!("trace {trace_text}, expected {expected_trace}"),
    });

    let scale = 1i128 << p.den_log2();
    let fixes: Option<String> = basis.kets().iter().enumerate().find_map(|(a, ket)| {
        let img = p.apply(ket).ok()?;
        let want: BTreeMap<u64, i128> =
            ket.terms().iter().map(|(&l, v)| (l, v.as_integer().unwrap() as i128 * scale)).collect();
        (img != want).then(|| format!("P psi_{a} != psi_{a}"))
    });
    checks.push(CheckOutcome {
        name: "fixes_code",
        pass: fixes.is_none(),
        detail: fixes.unwrap_or_else(|| format!("P psi_a = psi_a for all {} kets", basis.len())),
    });

    let ops = weight_one_ops(n, 2);
    let kills: Option<String> = basis.kets().iter().enumerate().find_map(|(a, ket)| {
        ops.iter().find_map(|e| {
            let img = apply_weyl(e, ket).ok()?;
            let out = p.apply(&img).ok()?;
            (!out.is_empty()).then(|| format!("P {} psi_{a} != 0", e.label()))
        })
    });
    checks.push(CheckOutcome {
        name: "annihilates_errors",
        pass: kills.is_none(),
        detail: kills.unwrap_or_else(|| format!("P E psi_a = 0 for {} errors x {} kets", ops.len(), basis.len())),
    });

    let ones = (1u64 << n) - 1;
    let structure = p.terms().iter().find_map(|(&(x, z), &v)| {
        if x != 0 && x != ones {
            return Some(format!("term with X-part {x:#b}"));
        }
        if z.count_ones() % 2 != 0 {
            return Some(format!("odd-weight Z-part {z:#b}"));
        }
        let partner = if x == 0 { ones } else { 0 };
        (p.coeff(partner, z) != v).then(|| format!("unpaired (I + X^n) coefficient at z={z:#b}"))
    });
    checks.push(CheckOutcome {
        name: "structure",
        pass: structure.is_none(),
        detail: structure.unwrap_or_else(|| "only (I + X^n) Z^x terms with |x| even".into()),
    });

    let k_values = (0..=(n as u64 - 1) / 2).map(|s| projector_coeff(params, s).to_string()).collect();
    let pass = checks.iter().all(|c| c.pass);
    ProjectorReport {
        params: *params,
        n,
        terms: p.len(),
        expected_terms: 2 * (1usize << (n - 1)),
        k_values,
        trace: trace_text,
        codespace_size: expected_trace.to_string(),
        checks,
        pass,
    }
}

fn first_difference(a: &PauliSumOperator, b: &PauliSumOperator) -> String {
    let mut keys: Vec<(u64, u64)> = a.terms().keys().chain(b.terms().keys()).copied().collect();
    keys.sort_unstable();
    keys.dedup();
    let lhs = |k: &(u64, u64)| BigInt::from(a.coeff(k.0, k.1)) << b.den_log2();
    let rhs = |k: &(u64, u64)| BigInt::from(b.coeff(k.0, k.1)) << a.den_log2();
    match keys.iter().find(|k| lhs(k) != rhs(k)) {
        Some(&(x, z)) => format!(
            "first differing term x={x:#b} z={z:#b}: {}/2^{} vs {}/2^{}",
            a.coeff(x, z),
            a.den_log2(),
            b.coeff(x, z),
            b.den_log2()
        ),
        None => "denominators differ".into(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditRow {
    pub s: u64,
    pub i: u64,
    pub weight: u64,
    pub derived: String,
    pub printed: String,
    pub equal: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditSum {
    pub s: u64,
    pub derived: String,
    pub printed: String,
    pub equal: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditTable {
    pub params: CodeParams,
    pub n: u64,
    pub rows: Vec<AuditRow>,
    pub sums: Vec<AuditSum>,
    pub mismatches: usize,
}

/// Compare the character-sum coefficients with the alternative closed form,
/// per `(s, i)` and summed over `i`. Mismatches are recorded, not fatal.
pub fn audit_printed_formula(params: &CodeParams) -> AuditTable {
    let n = params.n();
    let l = params.l as u64;
    let mut rows = Vec::new();
    let mut sums = Vec::new();
    for s in 0..=(n - 1) / 2 {
        let mut dsum = BigInt::zero();
        let mut psum = BigInt::zero();
        for i in 0..=params.k {
            let d = derived_coeff(s, 2 * i + l, n);
            let p = printed_coeff(s, i, l, n);
            rows.push(AuditRow {
                s,
                i,
                weight: 2 * i + l,
                derived: d.to_string(),
                printed: p.to_string(),
                equal: d == p,
            });
            dsum += d;
            psum += p;
        }
        sums.push(AuditSum { s, derived: dsum.to_string(), printed: psum.to_string(), equal: dsum == psum });
    }
    let mismatches = rows.iter().filter(|r| !r.equal).count();
    AuditTable { params: *params, n, rows, sums, mismatches }
}
