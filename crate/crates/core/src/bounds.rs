//! Code-size benchmarks for odd block lengths: the distance-2 upper bound
//! `2^{n-2}(1 - 1/(n-1))`, the best additive codes, the `3·2^{n-4}`
//! nonadditive family, and `M(n)` for this construction.

use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::combinat::{self, log2_big};
use crate::error::{Error, Result};

/// Exact upper bound and its integer floor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RainsBound {
    pub exact: BigRational,
    pub floor: BigUint,
}

pub fn rains_bound(n: u64) -> Result<RainsBound> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::InvalidParams(format!("bound is stated for odd n >= 3, got {n}")));
    }
    let pow = BigInt::one() << (n - 2);
    let exact = BigRational::new(pow * BigInt::from(n - 2), BigInt::from(n - 1));
    let floor = exact.numer().div_floor(exact.denom()).to_biguint().expect("positive");
    Ok(RainsBound { exact, floor })
}

/// `2^{n-2}` for even `n`, `2^{n-3}` for odd `n`.
pub fn additive_best(n: u64) -> Result<BigUint> {
    if n < 3 {
        return Err(Error::InvalidParams(format!("additive record needs n >= 3, got {n}")));
    }
    let k = if n.is_multiple_of(2) { n - 2 } else { n - 3 };
    Ok(BigUint::one() << k)
}

/// `3·2^{n-4}`.
pub fn rains_family_size(n: u64) -> Result<BigUint> {
    if n < 5 {
        return Err(Error::InvalidParams(format!("3*2^(n-4) family needs n >= 5, got {n}")));
    }
    Ok(BigUint::from(3u32) << (n - 4))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Winner {
    ThisFamily,
    RainsFamily,
    Tie,
}

impl Winner {
    pub fn as_str(&self) -> &'static str {
        match self {
            Winner::ThisFamily => "this_family",
            Winner::RainsFamily => "rains_family",
            Winner::Tie => "tie",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsRow {
    pub n: u64,
    #[serde(rename = "M")]
    pub m: String,
    pub rains_bound: String,
    pub rains_bound_floor: String,
    pub additive: String,
    pub rains_family: String,
    pub winner: Winner,
    pub within_bound: bool,
    pub beats_additive: bool,
    #[serde(skip)]
    pub values: RowValues,
}

/// Raw values behind a [`BoundsRow`].
#[derive(Debug, Clone, Default)]
pub struct RowValues {
    pub m: BigUint,
    pub bound_floor: BigUint,
    pub additive: BigUint,
    pub rains_family: BigUint,
}

pub fn bounds_row(n: u64) -> Result<BoundsRow> {
    let m = combinat::codespace_size_for_n(n)?;
    let bound = rains_bound(n)?;
    let additive = additive_best(n)?;
    let family = rains_family_size(n)?;
    let winner = match m.cmp(&family) {
        std::cmp::Ordering::Greater => Winner::ThisFamily,
        std::cmp::Ordering::Less => Winner::RainsFamily,
        std::cmp::Ordering::Equal => Winner::Tie,
    };
    Ok(BoundsRow {
        n,
        m: m.to_string(),
        rains_bound: bound.exact.to_string(),
        rains_bound_floor: bound.floor.to_string(),
        additive: additive.to_string(),
        rains_family: family.to_string(),
        winner,
        within_bound: m <= bound.floor,
        beats_additive: m > additive,
        values: RowValues { m, bound_floor: bound.floor, additive, rains_family: family },
    })
}

/// One row per odd `n` in `[5, n_max]`. Formula-only, so large `n_max` is fine.
pub fn crossover_table(n_max: u64) -> Result<Vec<BoundsRow>> {
    if n_max < 5 {
        return Err(Error::InvalidParams(format!("n_max must be >= 5, got {n_max}")));
    }
    (5..=n_max).step_by(2).map(bounds_row).collect()
}

pub fn table_csv(rows: &[BoundsRow]) -> String {
    let mut out = String::from("n,M,rains_bound_floor,additive,rains_family,winner\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.n,
            r.m,
            r.rains_bound_floor,
            r.additive,
            r.rains_family,
            r.winner.as_str()
        );
    }
    out
}

/// `(log2 M(n), n - 2 - (1/ln 2)·sqrt(2/(π(n-1))))`.
pub fn encoded_qubits(n: u64) -> Result<(f64, f64)> {
    let m = combinat::codespace_size_for_n(n)?;
    let approx = n as f64 - 2.0 - (2.0 / (std::f64::consts::PI * (n - 1) as f64)).sqrt() / std::f64::consts::LN_2;
    Ok((log2_big(&m), approx))
}

/// `1 - M(n)/2^{n-2}`, evaluated exactly and rounded once.
pub fn gap(n: u64) -> Result<f64> {
    let m = BigInt::from(combinat::codespace_size_for_n(n)?);
    let den = BigInt::one() << (n - 2);
    Ok(combinat::ratio_to_f64(&(&den - m), &den))
}
