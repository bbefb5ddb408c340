//! Exact combinatorics: big-integer binomials, weight-class enumeration,
//! codespace-size formulas and their asymptotics.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::classical::{BitString, CodeParams};
use crate::error::{Error, Result};

/// Largest block length supported by the machine-word enumeration paths.
pub const MAX_ENUM_N: usize = 63;

/// Exact binomial coefficient `C(n, m)`, zero when `m` lies outside `0..=n`.
pub fn binom(n: u64, m: i64) -> BigUint {
    if m < 0 || m as u64 > n {
        return BigUint::zero();
    }
    let m = (m as u64).min(n - m as u64);
    let mut acc = BigUint::one();
    for t in 0..m {
        acc *= n - t;
        acc /= t + 1;
    }
    acc
}

/// Signed variant of [`binom`], convenient for alternating sums.
pub fn binom_i(n: u64, m: i64) -> BigInt {
    BigInt::from(binom(n, m))
}

/// All weight-`w` strings of length `n`, in decreasing big-endian integer
/// order (so `10…0` comes first).
pub fn weight_strings(n: usize, w: usize) -> Result<Vec<BitString>> {
    if n == 0 || n > MAX_ENUM_N {
        return Err(Error::OutOfRange(format!("string length {n} outside 1..={MAX_ENUM_N}")));
    }
    if w > n {
        return Err(Error::OutOfRange(format!("weight {w} exceeds length {n}")));
    }
    let count = binom(n as u64, w as i64)
        .to_usize()
        .ok_or_else(|| Error::SizeLimit(format!("C({n},{w}) does not fit in memory")))?;
    let mut out = Vec::with_capacity(count);
    if w == 0 {
        out.push(BitString::new(n, 0)?);
        return Ok(out);
    }
    // Largest weight-w value: w ones at the top.
    let mut cur: u64 = ((1u64 << w) - 1) << (n - w);
    loop {
        out.push(BitString::new(n, cur)?);
        match prev_same_weight(cur) {
            Some(p) => cur = p,
            None => break,
        }
    }
    debug_assert_eq!(out.len(), count);
    Ok(out)
}

/// Next smaller integer with the same popcount, or `None` at the minimum.
fn prev_same_weight(v: u64) -> Option<u64> {
    // Find the lowest `10` pair (a one with a zero below it), move the one
    // down, and pack all ones below it directly underneath.
    let trailing_ones = (!v).trailing_zeros();
    if trailing_ones == 64 {
        return None;
    }
    let rest = v >> trailing_ones;
    if rest == 0 {
        return None;
    }
    let zeros = rest.trailing_zeros();
    let pivot = trailing_ones + zeros;
    let cleared = v & !((1u64 << (pivot + 1)) - 1);
    let ones_below = trailing_ones + 1;
    let block = ((1u64 << ones_below) - 1) << (pivot - ones_below);
    Some(cleared | block)
}

/// `M(k,l)` by the closed form, cross-checked against the defining sum.
pub fn codespace_size(params: &CodeParams) -> BigUint {
    let closed = codespace_size_closed(params.k, params.l);
    let sum = codespace_size_sum(params.k, params.l);
    assert_eq!(closed, sum, "closed form and explicit sum disagree for (k,l)=({},{})", params.k, params.l);
    closed
}

/// `2^(4k+2l+1) - C(4k+2l+2, 2k+l+1)/2`.
pub fn codespace_size_closed(k: u64, l: u8) -> BigUint {
    let l = l as u64;
    let pow = BigUint::one() << (4 * k + 2 * l + 1);
    let central = binom(4 * k + 2 * l + 2, (2 * k + l + 1) as i64);
    pow - (central >> 1u32)
}

/// `Σ_{i=0..k} C(4k+2l+3, 2i+l)`, walking the binomial row incrementally.
pub fn codespace_size_sum(k: u64, l: u8) -> BigUint {
    let l = l as u64;
    let n = 4 * k + 2 * l + 3;
    let top = 2 * k + l;
    let mut row = BigUint::one();
    let mut total = BigUint::zero();
    for m in 0..=top {
        if m >= l && (m - l).is_multiple_of(2) {
            total += &row;
        }
        row *= n - m;
        row /= m + 1;
    }
    total
}

/// `M` as a function of an odd block length.
pub fn codespace_size_for_n(n: u64) -> Result<BigUint> {
    Ok(codespace_size(&CodeParams::from_n(n)?))
}

/// Fraction `M(n) / 2^(n-2)` of the ambient `2^(n-2)`, with its large-`n`
/// estimate.
#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticFraction {
    pub n: u64,
    /// Exact ratio numerator and denominator, reduced.
    pub exact_num: String,
    pub exact_den: String,
    pub exact: f64,
    /// `1 - sqrt(2/(π(n-1)))`.
    pub approx: f64,
}

pub fn asymptotic_fraction(n: u64) -> Result<AsymptoticFraction> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::InvalidParams(format!("asymptotic fraction needs odd n >= 3, got {n}")));
    }
    let half = (n - 1) / 2;
    let central = BigInt::from(binom(n - 1, half as i64));
    let den = BigInt::one() << (n - 1);
    let ratio = BigRational::one() - BigRational::new(central, den);
    let exact = ratio_to_f64(ratio.numer(), ratio.denom());
    let approx = 1.0 - (2.0 / (std::f64::consts::PI * (n - 1) as f64)).sqrt();
    Ok(AsymptoticFraction {
        n,
        exact_num: ratio.numer().to_string(),
        exact_den: ratio.denom().to_string(),
        exact,
        approx,
    })
}

/// `num / den` as an `f64` without overflowing intermediate conversions.
pub fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    // Shift so that the quotient keeps ~64 significant bits.
    let shift = den.bits() as i64 - num.bits() as i64 + 64;
    let scaled = if shift >= 0 { (num << shift as u64) / den } else { (num >> (-shift) as u64) / den };
    scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-shift as i32)
}

/// Base-2 logarithm of a positive big integer.
pub fn log2_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 64 {
        return x.to_f64().unwrap().log2();
    }
    let top = (x >> (bits - 64)).to_f64().unwrap();
    top.log2() + (bits - 64) as f64
}
