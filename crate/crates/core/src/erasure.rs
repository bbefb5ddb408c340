//! Single-erasure correction, simulated numerically.
//!
//! An erased qubit at a known site is modelled as the four-Pauli twirl on
//! that site. The recovery measures which of the subspaces `E·C` the state
//! lies in (`E ∈ {I, X, Z, Y}` on the site) and undoes `E`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::automorph::orthonormal_frame;
use crate::classical::CodeParams;
use crate::dense::{self, DenseState, Frame, Gate};
use crate::error::{Error, Result};
use crate::lift::QuantumCodeBasis;
use crate::verifier;

/// Largest block length for encoding and fidelity runs.
pub const MAX_ERASURE_N: usize = 11;

/// Required minimum fidelity.
pub const FIDELITY_TOL: f64 = 1e-9;

/// Residual norm² below which a Gram-Schmidt vector counts as dependent.
const DEPENDENT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SitePauli {
    I,
    X,
    Z,
    Y,
}

impl SitePauli {
    pub const ALL: [SitePauli; 4] = [SitePauli::I, SitePauli::X, SitePauli::Z, SitePauli::Y];

    fn gate(self) -> Option<Gate> {
        match self {
            SitePauli::I => None,
            SitePauli::X => Some(dense::pauli_x()),
            SitePauli::Z => Some(dense::pauli_z()),
            SitePauli::Y => Some(dense::pauli_xz()),
        }
    }

    pub fn apply(self, v: &DenseState, site: usize) -> Result<DenseState> {
        match self.gate() {
            None => Ok(v.clone()),
            Some(g) => v.apply_gate(&g, site),
        }
    }

    pub fn apply_dagger(self, v: &DenseState, site: usize) -> Result<DenseState> {
        match self.gate() {
            None => Ok(v.clone()),
            Some(g) => v.apply_gate(&dense::dagger(&g), site),
        }
    }
}

/// A probabilistic mixture of (possibly unnormalized) pure states.
#[derive(Debug, Clone)]
pub struct MixedState {
    pub branches: Vec<(f64, DenseState)>,
}

impl MixedState {
    pub fn pure(v: DenseState) -> Self {
        Self { branches: vec![(1.0, v)] }
    }

    pub fn n(&self) -> usize {
        self.branches.first().map_or(0, |(_, v)| v.n())
    }

    pub fn trace(&self) -> f64 {
        self.branches.iter().map(|(w, v)| w * v.norm_sq()).sum()
    }

    /// `tr ρ²`, from the branch overlaps.
    pub fn purity(&self) -> f64 {
        let mut p = 0.0;
        for (wi, vi) in &self.branches {
            for (wj, vj) in &self.branches {
                p += wi * wj * vi.inner(vj).norm_sqr();
            }
        }
        p
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn expectation(&self, psi: &DenseState) -> f64 {
        self.branches.iter().map(|(w, v)| w * psi.inner(v).norm_sqr()).sum()
    }

    /// Probabilities of reading 0 and 1 on `site`.
    pub fn site_probabilities(&self, site: usize) -> Result<(f64, f64)> {
        let n = self.n();
        if site >= n {
            return Err(Error::OutOfRange(format!("site {site} outside 0..{n}")));
        }
        let bit = 1usize << (n - 1 - site);
        let (mut p0, mut p1) = (0.0, 0.0);
        for (w, v) in &self.branches {
            for (i, a) in v.amps().iter().enumerate() {
                if i & bit == 0 {
                    p0 += w * a.norm_sqr();
                } else {
                    p1 += w * a.norm_sqr();
                }
            }
        }
        Ok((p0, p1))
    }

    /// Row-major `2^n × 2^n` density matrix; small `n` only.
    pub fn to_density(&self) -> Result<Vec<Complex64>> {
        let n = self.n();
        if n > 8 {
            return Err(Error::SizeLimit(format!("density matrices limited to n <= 8, got {n}")));
        }
        let d = 1usize << n;
        let mut rho = vec![Complex64::new(0.0, 0.0); d * d];
        for (w, v) in &self.branches {
            let a = v.amps();
            for r in 0..d {
                for c in 0..d {
                    rho[r * d + c] += *w * a[r] * a[c].conj();
                }
            }
        }
        Ok(rho)
    }
}

/// `Σ_a logical_a ψ_a/√2`, normalized.
pub fn encode(params: &CodeParams, logical: &[Complex64]) -> Result<DenseState> {
    if params.dim != 2 {
        return Err(Error::InvalidParams("encoding is implemented for qubits".into()));
    }
    let n = params.enum_n()?;
    if n > MAX_ERASURE_N {
        return Err(Error::SizeLimit(format!("n = {n} exceeds encoding limit {MAX_ERASURE_N}")));
    }
    let frame = orthonormal_frame(&QuantumCodeBasis::from_params(params)?)?;
    encode_in(&frame, logical)
}

/// Encode into an arbitrary orthonormal frame.
pub fn encode_in(frame: &Frame, logical: &[Complex64]) -> Result<DenseState> {
    if logical.len() != frame.vectors.len() {
        return Err(Error::DimensionMismatch(format!(
            "logical vector has {} entries, code dimension is {}",
            logical.len(),
            frame.vectors.len()
        )));
    }
    let first = frame.vectors.first().ok_or_else(|| Error::InvalidParams("empty code".into()))?;
    let mut out = DenseState::zeros(first.n())?;
    for (c, e) in logical.iter().zip(&frame.vectors) {
        out.axpy(*c, e);
    }
    if out.norm_sq() == 0.0 {
        return Err(Error::InvalidParams("logical vector is zero".into()));
    }
    Ok(out.normalized())
}

/// Replace the qubit at `site` by the maximally mixed state.
pub fn erase(state: &DenseState, site: usize) -> Result<MixedState> {
    erase_mixed(&MixedState::pure(state.clone()), site)
}

pub fn erase_mixed(rho: &MixedState, site: usize) -> Result<MixedState> {
    let mut branches = Vec::with_capacity(4 * rho.branches.len());
    for (w, v) in &rho.branches {
        for e in SitePauli::ALL {
            branches.push((w / 4.0, e.apply(v, site)?));
        }
    }
    Ok(MixedState { branches })
}

/// The same twirl applied to an explicit density matrix.
pub fn erase_density(rho: &[Complex64], n: usize, site: usize) -> Result<Vec<Complex64>> {
    let d = 1usize << n;
    if rho.len() != d * d || site >= n {
        return Err(Error::DimensionMismatch(format!("density of size {} for n = {n}, site {site}", rho.len())));
    }
    let bit = 1usize << (n - 1 - site);
    // The twirl zeroes every element whose row and column differ on `site`
    // and averages the two diagonal blocks.
    let mut out = vec![Complex64::new(0.0, 0.0); d * d];
    for r in 0..d {
        for c in 0..d {
            if (r ^ c) & bit != 0 {
                continue;
            }
            let v = (rho[r * d + c] + rho[(r ^ bit) * d + (c ^ bit)]) * 0.5;
            out[r * d + c] = v;
        }
    }
    Ok(out)
}

/// One recovery branch: the subspace attributed to `E`, then `E†`.
#[derive(Debug, Clone)]
pub struct RecoveryBranch {
    pub error: SitePauli,
    pub frame: Frame,
}

#[derive(Debug, Clone)]
pub struct RecoveryChannel {
    pub n: usize,
    pub site: usize,
    pub branches: Vec<RecoveryBranch>,
}

impl RecoveryChannel {
    /// Dimensions of the four image subspaces, in `I, X, Z, Y` order.
    pub fn image_dims(&self) -> Vec<usize> {
        self.branches.iter().map(|b| b.frame.vectors.len()).collect()
    }

    /// Kraus images `K_E ρ K_E†`.
    pub fn apply(&self, rho: &MixedState) -> Result<MixedState> {
        let mut out = Vec::with_capacity(rho.branches.len() * self.branches.len());
        for (w, v) in &rho.branches {
            for b in &self.branches {
                let projected = b.frame.project(v);
                out.push((*w, b.error.apply_dagger(&projected, self.site)?));
            }
        }
        Ok(MixedState { branches: out })
    }

    /// `||Σ_E Π_E v - v||`; zero iff `v` lies in the covered span.
    pub fn completeness_defect(&self, v: &DenseState) -> f64 {
        let mut acc = DenseState::zeros(v.n()).expect("same size as v");
        for b in &self.branches {
            acc.axpy(Complex64::new(1.0, 0.0), &b.frame.project(v));
        }
        acc.axpy(Complex64::new(-1.0, 0.0), v);
        acc.norm_sq().sqrt()
    }

    /// Largest `|⟨e|f⟩|` between vectors of different branches.
    pub fn max_cross_overlap(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.branches.iter().enumerate() {
            for b in &self.branches[i + 1..] {
                for u in &a.frame.vectors {
                    for v in &b.frame.vectors {
                        worst = worst.max(u.inner(v).norm());
                    }
                }
            }
        }
        worst
    }
}

/// Recovery for a verified nondegenerate code at `site`.
pub fn build_recovery(params: &CodeParams, site: usize) -> Result<RecoveryChannel> {
    let basis = erasure_basis(params)?;
    let report = verifier::verify_distance2(&basis);
    if !report.pass || !report.nondegenerate {
        return Err(Error::Degenerate(format!(
            "code with n = {} is not a verified nondegenerate distance-2 code",
            basis.n()
        )));
    }
    recovery_from_frame(&orthonormal_frame(&basis)?, site, true)
}

fn erasure_basis(params: &CodeParams) -> Result<QuantumCodeBasis> {
    if params.dim != 2 {
        return Err(Error::InvalidParams("erasure simulation is implemented for qubits".into()));
    }
    let n = params.enum_n()?;
    if n > MAX_ERASURE_N {
        return Err(Error::SizeLimit(format!("n = {n} exceeds erasure limit {MAX_ERASURE_N}")));
    }
    QuantumCodeBasis::from_params(params)
}

/// Build the recovery from the code frame. With `verified`, the images
/// `E·C` are known to be orthonormal and mutually orthogonal and are used
/// directly. Otherwise they are orthogonalized in `I, X, Z, Y` order, so an
/// image already covered by an earlier branch is attributed to that branch.
pub fn recovery_from_frame(code: &Frame, site: usize, verified: bool) -> Result<RecoveryChannel> {
    let n = code.vectors.first().map(DenseState::n).ok_or_else(|| Error::InvalidParams("empty code".into()))?;
    if site >= n {
        return Err(Error::OutOfRange(format!("site {site} outside 0..{n}")));
    }
    let mut accepted: Vec<DenseState> = Vec::new();
    let mut branches = Vec::with_capacity(4);
    for e in SitePauli::ALL {
        let images = code.vectors.iter().map(|v| e.apply(v, site)).collect::<Result<Vec<_>>>()?;
        let vectors = if verified {
            images
        } else {
            let mut kept = Vec::new();
            for mut v in images {
                for u in &accepted {
                    let c = u.inner(&v);
                    v.axpy(-c, u);
                }
                let nrm = v.norm_sq();
                if nrm > DEPENDENT_TOL {
                    v.scale(Complex64::new(1.0 / nrm.sqrt(), 0.0));
                    accepted.push(v.clone());
                    kept.push(v);
                }
            }
            kept
        };
        branches.push(RecoveryBranch { error: e, frame: Frame { vectors } });
    }
    Ok(RecoveryChannel { n, site, branches })
}

/// Seeded logical states: independent standard normal real and imaginary
/// parts, normalized.
pub fn random_logical(rng: &mut ChaCha8Rng, m: usize) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..m)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex64::new(re, im)
        })
        .collect();
    let nrm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    for c in &mut v {
        *c /= nrm;
    }
    v
}

/// `⟨ψ| R(erase(|ψ⟩⟨ψ|)) |ψ⟩`.
pub fn erasure_fidelity(channel: &RecoveryChannel, psi: &DenseState) -> Result<f64> {
    let erased = erase(psi, channel.site)?;
    Ok(channel.apply(&erased)?.expectation(psi))
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialResult {
    pub site: usize,
    pub trial: usize,
    pub fidelity: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SiteSummary {
    pub site: usize,
    pub image_dims: Vec<usize>,
    pub min_fidelity: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FidelityReport {
    pub label: String,
    pub n: usize,
    pub code_dimension: usize,
    pub seed: u64,
    pub trials: usize,
    pub sites: Vec<SiteSummary>,
    pub results: Vec<TrialResult>,
    pub min_fidelity: f64,
    pub mean_fidelity: f64,
    /// Largest `||Σ_E Π_E φ - φ||` over all erased branches.
    pub completeness_max_dev: f64,
    /// Largest `|tr erase(ρ) - 1|`.
    pub trace_max_dev: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Fidelity runs over every site (or just `site`) of the family code.
pub fn fidelity_experiment(
    params: &CodeParams,
    trials: usize,
    seed: u64,
    site: Option<usize>,
) -> Result<FidelityReport> {
    let basis = erasure_basis(params)?;
    let report = verifier::verify_distance2(&basis);
    if !report.pass || !report.nondegenerate {
        return Err(Error::Degenerate(format!("n = {} code failed verification", basis.n())));
    }
    let label = format!("k={},l={}", params.k, params.l);
    fidelity_experiment_frame(&label, &orthonormal_frame(&basis)?, true, trials, seed, site)
}

/// Same experiment for an arbitrary set of mutually orthogonal kets. The
/// recovery is built without any verification, which is what makes it a
/// useful control for codes that violate the detection conditions.
pub fn fidelity_experiment_basis(
    label: &str,
    basis: &QuantumCodeBasis,
    trials: usize,
    seed: u64,
    site: Option<usize>,
) -> Result<FidelityReport> {
    if basis.dim() != 2 {
        return Err(Error::InvalidParams("erasure simulation is implemented for qubits".into()));
    }
    if basis.n() > MAX_ERASURE_N {
        return Err(Error::SizeLimit(format!("n = {} exceeds erasure limit {MAX_ERASURE_N}", basis.n())));
    }
    fidelity_experiment_frame(label, &orthonormal_frame(basis)?, false, trials, seed, site)
}

fn fidelity_experiment_frame(
    label: &str,
    code: &Frame,
    verified: bool,
    trials: usize,
    seed: u64,
    site: Option<usize>,
) -> Result<FidelityReport> {
    let n = code.vectors.first().map(DenseState::n).ok_or_else(|| Error::InvalidParams("empty code".into()))?;
    let sites: Vec<usize> = match site {
        Some(s) if s >= n => return Err(Error::OutOfRange(format!("site {s} outside 0..{n}"))),
        Some(s) => vec![s],
        None => (0..n).collect(),
    };
    let channels = sites.par_iter().map(|&s| recovery_from_frame(code, s, verified)).collect::<Result<Vec<_>>>()?;

    // Draw every logical state up front, in (site, trial) order, so the
    // parallel evaluation below cannot change which state goes where.
    let m = code.vectors.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let jobs: Vec<(usize, usize, Vec<Complex64>)> = (0..sites.len())
        .flat_map(|si| (0..trials).map(move |t| (si, t)))
        .map(|(si, t)| (si, t, random_logical(&mut rng, m)))
        .collect();

    let evaluated = jobs
        .par_iter()
        .map(|(si, t, logical)| {
            let ch = &channels[*si];
            let psi = encode_in(code, logical)?;
            let erased = erase(&psi, ch.site)?;
            let trace_dev = (erased.trace() - 1.0).abs();
            let complete = erased.branches.iter().map(|(_, v)| ch.completeness_defect(v)).fold(0.0f64, f64::max);
            let fidelity = ch.apply(&erased)?.expectation(&psi);
            Ok((TrialResult { site: ch.site, trial: *t, fidelity }, complete, trace_dev))
        })
        .collect::<Result<Vec<_>>>()?;

    let results: Vec<TrialResult> = evaluated.iter().map(|(r, _, _)| r.clone()).collect();
    let completeness_max_dev = evaluated.iter().map(|e| e.1).fold(0.0, f64::max);
    let trace_max_dev = evaluated.iter().map(|e| e.2).fold(0.0, f64::max);
    let min_fidelity = results.iter().map(|r| r.fidelity).fold(f64::INFINITY, f64::min);
    let mean_fidelity = if results.is_empty() {
        f64::NAN
    } else {
        results.iter().map(|r| r.fidelity).sum::<f64>() / results.len() as f64
    };
    let site_summaries = channels
        .iter()
        .map(|ch| SiteSummary {
            site: ch.site,
            image_dims: ch.image_dims(),
            min_fidelity: results
                .iter()
                .filter(|r| r.site == ch.site)
                .map(|r| r.fidelity)
                .fold(f64::INFINITY, f64::min),
        })
        .collect();
    let pass = !results.is_empty()
        && min_fidelity >= 1.0 - FIDELITY_TOL
        && completeness_max_dev < 1e-10
        && trace_max_dev < 1e-12;
    Ok(FidelityReport {
        label: label.to_string(),
        n,
        code_dimension: m,
        seed,
        trials,
        sites: site_summaries,
        results,
        min_fidelity,
        mean_fidelity,
        completeness_max_dev,
        trace_max_dev,
        tolerance: FIDELITY_TOL,
        pass,
    })
}

/// `{|00000⟩+|11111⟩, |10000⟩+|01111⟩}`: orthogonal, but `X` on site 0 maps
/// one ket onto the other, so the pair does not detect that error.
pub fn bad_control_basis() -> Result<QuantumCodeBasis> {
    let params = CodeParams::new(0, 1, 2)?;
    let full = QuantumCodeBasis::from_params(&params)?;
    let radix = full.kets()[0].radix();
    let mk = |a: &str, b: &str| -> Result<crate::lift::SparseKet> {
        let mut k = crate::lift::SparseKet::new(5, 2)?;
        k.add_term(radix.parse(a)?, crate::cycint::CycInt::from_int(2, 1));
        k.add_term(radix.parse(b)?, crate::cycint::CycInt::from_int(2, 1));
        Ok(k)
    };
    QuantumCodeBasis::from_kets(vec![mk("00000", "11111")?, mk("10000", "01111")?])
}
