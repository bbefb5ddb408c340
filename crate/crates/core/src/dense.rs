//! Double-precision state vectors for the numeric parts (erasure simulation,
//! non-Pauli counterexamples).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lift::SparseKet;

/// Largest register simulated densely.
pub const MAX_DENSE_N: usize = 14;

pub type Gate = [[Complex64; 2]; 2];

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn hadamard() -> Gate {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]]
}

/// `diag(1, i)`.
pub fn phase_gate() -> Gate {
    [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]]
}

pub fn pauli_x() -> Gate {
    [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]
}

pub fn pauli_z() -> Gate {
    [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]]
}

/// `XZ`, matching the exact-arithmetic convention.
pub fn pauli_xz() -> Gate {
    [[c(0.0, 0.0), c(-1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]
}

pub fn dagger(g: &Gate) -> Gate {
    [[g[0][0].conj(), g[1][0].conj()], [g[0][1].conj(), g[1][1].conj()]]
}

/// An `n`-qubit amplitude vector; index bit `n-1-i` is site `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    n: usize,
    amps: Vec<Complex64>,
}

impl DenseState {
    pub fn zeros(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_DENSE_N {
            return Err(Error::SizeLimit(format!("dense simulation supports 1..={MAX_DENSE_N} qubits, got {n}")));
        }
        Ok(Self { n, amps: vec![Complex64::new(0.0, 0.0); 1 << n] })
    }

    pub fn from_amps(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1 << n {
            return Err(Error::DimensionMismatch(format!("{} amplitudes for {n} qubits", amps.len())));
        }
        Ok(Self { n, amps })
    }

    /// Numeric copy of an integer-amplitude qubit ket.
    pub fn from_sparse(ket: &SparseKet) -> Result<Self> {
        if ket.dim() != 2 {
            return Err(Error::InvalidParams("dense states are qubit-only".into()));
        }
        let mut s = Self::zeros(ket.n())?;
        for (&l, a) in ket.terms() {
            s.amps[l as usize] = a.to_complex();
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn scale(&mut self, s: Complex64) {
        for a in &mut self.amps {
            *a *= s;
        }
    }

    pub fn normalized(mut self) -> Self {
        let nrm = self.norm_sq().sqrt();
        if nrm > 0.0 {
            self.scale(Complex64::new(1.0 / nrm, 0.0));
        }
        self
    }

    pub fn axpy(&mut self, alpha: Complex64, other: &DenseState) {
        for (a, b) in self.amps.iter_mut().zip(&other.amps) {
            *a += alpha * b;
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &DenseState) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn apply_gate(&self, gate: &Gate, site: usize) -> Result<DenseState> {
        if site >= self.n {
            return Err(Error::OutOfRange(format!("site {site} outside 0..{}", self.n)));
        }
        let bit = 1usize << (self.n - 1 - site);
        let mut out = self.amps.clone();
        for i in 0..self.amps.len() {
            if i & bit != 0 {
                continue;
            }
            let (a0, a1) = (self.amps[i], self.amps[i | bit]);
            out[i] = gate[0][0] * a0 + gate[0][1] * a1;
            out[i | bit] = gate[1][0] * a0 + gate[1][1] * a1;
        }
        Ok(DenseState { n: self.n, amps: out })
    }
}

/// Orthonormal frame spanning a subspace; projections and membership.
#[derive(Debug, Clone)]
pub struct Frame {
    pub vectors: Vec<DenseState>,
}

impl Frame {
    /// `Σ_a |e_a⟩⟨e_a|v⟩`.
    pub fn project(&self, v: &DenseState) -> DenseState {
        let mut out = DenseState { n: v.n, amps: vec![Complex64::new(0.0, 0.0); v.amps.len()] };
        for e in &self.vectors {
            out.axpy(e.inner(v), e);
        }
        out
    }

    /// `1 - ||P v||²` for unit `v`.
    pub fn defect(&self, v: &DenseState) -> f64 {
        let captured: f64 = self.vectors.iter().map(|e| e.inner(v).norm_sqr()).sum();
        v.norm_sq() - captured
    }
}
