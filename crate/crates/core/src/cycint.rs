//! Integer combinations of `D`-th roots of unity.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Serialize, Serializer};

/// Tolerance for zero tests when `D` is composite.
pub const NUMERIC_ZERO_TOL: f64 = 1e-12;

pub fn is_prime(d: u32) -> bool {
    if d < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= d {
        if d.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

/// `Σ_j a_j ω^j` with `ω = exp(2πi/D)`.
///
/// Coefficients are not reduced; for prime `D` two values are equal iff
/// their coefficient difference is constant, which [`CycInt::is_zero`]
/// tests exactly. Composite `D` falls back to numeric evaluation.
#[derive(Debug, Clone)]
pub struct CycInt {
    coeffs: Vec<i64>,
}

impl CycInt {
    pub fn zero(dim: u32) -> Self {
        Self { coeffs: vec![0; dim as usize] }
    }

    pub fn from_int(dim: u32, v: i64) -> Self {
        let mut c = Self::zero(dim);
        c.coeffs[0] = v;
        c
    }

    pub fn one(dim: u32) -> Self {
        Self::from_int(dim, 1)
    }

    /// `ω^e`.
    pub fn root(dim: u32, e: u64) -> Self {
        let mut c = Self::zero(dim);
        c.coeffs[(e % dim as u64) as usize] = 1;
        c
    }

    pub fn from_coeffs(coeffs: Vec<i64>) -> Self {
        assert!(coeffs.len() >= 2, "cyclotomic dimension must be >= 2");
        Self { coeffs }
    }

    pub fn dim(&self) -> u32 {
        self.coeffs.len() as u32
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Exact for prime `D`.
    pub fn is_exact(&self) -> bool {
        is_prime(self.dim())
    }

    pub fn is_zero(&self) -> bool {
        if self.is_exact() {
            let first = self.coeffs[0];
            self.coeffs.iter().all(|&c| c == first)
        } else {
            self.to_complex().norm() < NUMERIC_ZERO_TOL
        }
    }

    /// Complex conjugate: `ω^j ↦ ω^{-j}`.
    pub fn conj(&self) -> Self {
        let d = self.coeffs.len();
        let mut out = vec![0; d];
        for (j, &a) in self.coeffs.iter().enumerate() {
            out[(d - j) % d] = a;
        }
        Self { coeffs: out }
    }

    /// Multiply by `ω^e`.
    pub fn rotate(&self, e: u64) -> Self {
        let d = self.coeffs.len();
        let shift = (e % d as u64) as usize;
        let mut out = vec![0; d];
        for (j, &a) in self.coeffs.iter().enumerate() {
            out[(j + shift) % d] = a;
        }
        Self { coeffs: out }
    }

    /// Canonical representative with last coefficient zero (unique for prime `D`).
    pub fn normalized(&self) -> Vec<i64> {
        if !self.is_exact() {
            return self.coeffs.clone();
        }
        let last = *self.coeffs.last().unwrap();
        self.coeffs.iter().map(|c| c - last).collect()
    }

    /// Integer value when the number is rational (exact only for prime `D`).
    pub fn as_integer(&self) -> Option<i64> {
        if !self.is_exact() {
            let z = self.to_complex();
            let r = z.re.round();
            return ((z - Complex64::new(r, 0.0)).norm() < NUMERIC_ZERO_TOL).then_some(r as i64);
        }
        let n = self.normalized();
        n[1..].iter().all(|&c| c == 0).then_some(n[0])
    }

    pub fn to_complex(&self) -> Complex64 {
        let d = self.coeffs.len() as f64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, &a)| Complex64::from_polar(a as f64, 2.0 * std::f64::consts::PI * j as f64 / d))
            .sum()
    }

    fn check_dim(&self, other: &Self) {
        assert_eq!(self.coeffs.len(), other.coeffs.len(), "cyclotomic dimension mismatch");
    }
}

impl PartialEq for CycInt {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs.len() == other.coeffs.len() && (self.clone() - other.clone()).is_zero()
    }
}

impl Add for CycInt {
    type Output = CycInt;
    fn add(mut self, rhs: CycInt) -> CycInt {
        self += &rhs;
        self
    }
}

impl AddAssign<&CycInt> for CycInt {
    fn add_assign(&mut self, rhs: &CycInt) {
        self.check_dim(rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl Sub for CycInt {
    type Output = CycInt;
    fn sub(self, rhs: CycInt) -> CycInt {
        self + (-rhs)
    }
}

impl Neg for CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt { coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl Mul for &CycInt {
    type Output = CycInt;
    fn mul(self, rhs: &CycInt) -> CycInt {
        self.check_dim(rhs);
        let d = self.coeffs.len();
        let mut out = vec![0; d];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[(i + j) % d] += a * b;
            }
        }
        CycInt { coeffs: out }
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(v) = self.as_integer() {
            return write!(f, "{v}");
        }
        let mut first = true;
        for (j, &a) in self.normalized().iter().enumerate() {
            if a == 0 {
                continue;
            }
            if !first {
                f.write_str(if a < 0 { "-" } else { "+" })?;
            } else if a < 0 {
                f.write_str("-")?;
            }
            first = false;
            match (a.abs(), j) {
                (m, 0) => write!(f, "{m}")?,
                (1, j) => write!(f, "w^{j}")?,
                (m, j) => write!(f, "{m}w^{j}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Serialized as the normalized coefficient list.
impl Serialize for CycInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.normalized().serialize(s)
    }
}
