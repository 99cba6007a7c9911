//! The lower-bound constants `√2`, `2/√(2√2−1)` and `√(8/π)` in big-integer
//! fixed point, and the empirical `nz(N)/√N` table they are compared with.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::digits::DigitSequence;
use crate::error::Result;
use crate::isqrt::isqrt;

/// Fractional bits of every fixed-point constant.
pub const PRECISION: u64 = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constant {
    pub name: &'static str,
    pub expression: &'static str,
    /// `⌊value·2^PRECISION⌋` up to a few units in the last place.
    pub scaled: BigUint,
}

impl Constant {
    pub fn to_f64(&self) -> f64 {
        fixed_to_f64(&self.scaled)
    }

    /// Decimal expansion truncated to `places` digits after the point.
    pub fn decimal(&self, places: usize) -> String {
        let digits = (&self.scaled * BigUint::from(10u32).pow(places as u32)) >> PRECISION;
        let s = format!("{digits:0>width$}", width = places + 1);
        let (int_part, frac_part) = s.split_at(s.len() - places);
        format!("{int_part}.{frac_part}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremConstants {
    /// `√2`
    pub c1: Constant,
    /// `2/√(2√2−1)`
    pub c2: Constant,
    /// `√(8/π)`
    pub c3: Constant,
}

fn one() -> BigUint {
    BigUint::one() << PRECISION
}

fn fixed_sqrt(x: &BigUint) -> BigUint {
    isqrt(&(x << PRECISION))
}

fn fixed_div(num: &BigUint, den: &BigUint) -> BigUint {
    (num << PRECISION) / den
}

fn fixed_mul(a: &BigUint, b: &BigUint) -> BigUint {
    (a * b) >> PRECISION
}

fn fixed_to_f64(x: &BigUint) -> f64 {
    // Keep 64 significant bits before converting.
    let shift = PRECISION.saturating_sub(64);
    (x >> shift).to_f64().unwrap_or(f64::INFINITY) / 2f64.powi((PRECISION - shift) as i32)
}

/// `arctan(1/x)` in fixed point with `guard` extra bits.
fn arctan_inv(x: u64, bits: u64) -> BigInt {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power = (BigInt::one() << bits) / &x;
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    sum
}

/// `π·2^PRECISION` by Machin's formula `π = 16·atan(1/5) − 4·atan(1/239)`.
pub fn pi_scaled() -> BigUint {
    const GUARD: u64 = 32;
    let bits = PRECISION + GUARD;
    let pi = BigInt::from(16) * arctan_inv(5, bits) - BigInt::from(4) * arctan_inv(239, bits);
    (pi >> GUARD).to_biguint().expect("π is positive")
}

fn sqrt2_scaled() -> BigUint {
    fixed_sqrt(&(one() * 2u32))
}

/// `2√2 − 1`, scaled.
fn two_sqrt2_minus_one() -> BigUint {
    sqrt2_scaled() * 2u32 - one()
}

pub fn theorem_constants() -> TheoremConstants {
    let c1 = sqrt2_scaled();
    let c2 = fixed_div(&(one() * 2u32), &fixed_sqrt(&two_sqrt2_minus_one()));
    let c3 = fixed_sqrt(&fixed_div(&(one() * 8u32), &pi_scaled()));
    TheoremConstants {
        c1: Constant {
            name: "c1",
            expression: "sqrt(2)",
            scaled: c1,
        },
        c2: Constant {
            name: "c2",
            expression: "2/sqrt(2*sqrt(2)-1)",
            scaled: c2,
        },
        c3: Constant {
            name: "c3",
            expression: "sqrt(8/pi)",
            scaled: c3,
        },
    }
}

/// `(2√2 − 1)·λ²` for a scaled `λ`.
pub fn threshold_product(lambda: &BigUint) -> BigUint {
    fixed_mul(&two_sqrt2_minus_one(), &fixed_mul(lambda, lambda))
}

/// The contradiction threshold written per `√(2N)`: with `nz(N) = λ·√(2N)`
/// the bound `c2·√N` corresponds to `λ* = c2/√2 = √(2/(2√2−1))`, where
/// `(2√2−1)·λ*² = 2`.
#[derive(Debug, Clone)]
pub struct Threshold {
    pub lambda: BigUint,
    /// `|(2√2−1)·λ*² − 2|`
    pub residual: f64,
}

pub fn contradiction_threshold() -> Threshold {
    let c = theorem_constants();
    let lambda = fixed_div(&c.c2.scaled, &sqrt2_scaled());
    let product = BigInt::from(threshold_product(&lambda));
    let target = BigInt::from(one() * 2u32);
    let diff = (product - target).abs().to_biguint().unwrap();
    Threshold {
        lambda,
        residual: fixed_to_f64(&diff),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioRow {
    #[serde(rename = "N")]
    pub n: u64,
    pub nz: u64,
    pub ratio: f64,
    pub c1_sqrt_n: f64,
    pub c2_sqrt_n: f64,
}

/// `nz(N)`, `nz(N)/√N` and the two proven lower-bound curves at each `N`.
pub fn nz_ratio_scan(seq: &DigitSequence, n_list: &[u64]) -> Result<Vec<RatioRow>> {
    let c = theorem_constants();
    let (c1, c2) = (c.c1.to_f64(), c.c2.to_f64());
    n_list
        .iter()
        .map(|&n| {
            let nz = seq.nz(n)?;
            let root = (n as f64).sqrt();
            Ok(RatioRow {
                n,
                nz,
                ratio: if nz == 0 { 0.0 } else { nz as f64 / root },
                c1_sqrt_n: c1 * root,
                c2_sqrt_n: c2 * root,
            })
        })
        .collect()
}
