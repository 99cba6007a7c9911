//! The representation function `r(n) = #{(i, j) : i + j = n, a_i = a_j = 1}`.
//!
//! Two independent implementations: a direct pair count, and a packed
//! squaring that places each digit in its own `w`-bit field of one big
//! integer so that a single multiplication yields every coefficient.

use std::io::Write;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;

use crate::digits::DigitSequence;
use crate::error::{Error, Result};

/// Above this `n_max` [`r_sequence`] uses the packed squaring.
pub const FAST_THRESHOLD: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convolution {
    Naive,
    Packed,
    /// Packed above [`FAST_THRESHOLD`], naive otherwise.
    Auto,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RSequence {
    values: Vec<u64>,
    // prefix[n] = r(0) + … + r(n − 1)
    prefix: Vec<u64>,
    radicand: Option<u64>,
}

impl RSequence {
    fn new(values: Vec<u64>, radicand: Option<u64>) -> Result<Self> {
        let mut prefix = Vec::with_capacity(values.len() + 1);
        let mut acc = 0u64;
        prefix.push(0);
        for &v in &values {
            acc = acc
                .checked_add(v)
                .ok_or(Error::Overflow("prefix sum of r"))?;
            prefix.push(acc);
        }
        Ok(RSequence {
            values,
            prefix,
            radicand,
        })
    }

    pub fn n_max(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// Radicand of the expansion these values came from, if any.
    pub fn radicand(&self) -> Option<u64> {
        self.radicand
    }

    pub fn get(&self, n: u64) -> Result<u64> {
        self.values.get(n as usize).copied().ok_or(Error::Range {
            lo: n,
            hi: n,
            len: self.values.len() as u64,
        })
    }

    /// `Σ_{n=a}^{b} r(n)`.
    pub fn sum(&self, a: u64, b: u64) -> Result<u64> {
        if a > b || b > self.n_max() {
            return Err(Error::Range {
                lo: a,
                hi: b,
                len: self.values.len() as u64,
            });
        }
        Ok(self.prefix[b as usize + 1] - self.prefix[a as usize])
    }

    /// CSV dump with header `n,r`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(["n", "r"])?;
        for (n, r) in self.values.iter().enumerate() {
            wtr.write_record([n.to_string(), r.to_string()])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// `Σ_{n=a}^{b} r(n)`.
pub fn sum_r(r: &RSequence, a: u64, b: u64) -> Result<u64> {
    r.sum(a, b)
}

fn checked_digits(seq: &DigitSequence, n_max: u64) -> Result<&[u8]> {
    let digits = seq.unit_digits()?;
    seq.check_precision(n_max)?;
    Ok(&digits[..=n_max as usize])
}

pub fn r_naive(seq: &DigitSequence, n_max: u64) -> Result<RSequence> {
    let digits = checked_digits(seq, n_max)?;
    RSequence::new(pair_counts_naive(digits), Some(seq.radicand()))
}

pub fn r_fast(seq: &DigitSequence, n_max: u64) -> Result<RSequence> {
    let digits = checked_digits(seq, n_max)?;
    RSequence::new(pair_counts_packed(digits), Some(seq.radicand()))
}

pub fn r_sequence(seq: &DigitSequence, n_max: u64, method: Convolution) -> Result<RSequence> {
    match method {
        Convolution::Naive => r_naive(seq, n_max),
        Convolution::Packed => r_fast(seq, n_max),
        Convolution::Auto if n_max > FAST_THRESHOLD => r_fast(seq, n_max),
        Convolution::Auto => r_naive(seq, n_max),
    }
}

/// `r` over an arbitrary 0/1 slice `a_0..a_{L−1}`, for `n < L`.
pub fn r_from_digits(digits: &[u8], method: Convolution) -> Result<RSequence> {
    if digits.is_empty() {
        return Err(Error::Precondition("empty digit slice".into()));
    }
    let values = match method {
        Convolution::Naive => pair_counts_naive(digits),
        Convolution::Packed => pair_counts_packed(digits),
        Convolution::Auto if digits.len() as u64 > FAST_THRESHOLD + 1 => pair_counts_packed(digits),
        Convolution::Auto => pair_counts_naive(digits),
    };
    RSequence::new(values, None)
}

/// Ordered pair count over the positions of ones.
pub fn pair_counts_naive(digits: &[u8]) -> Vec<u64> {
    let n_max = digits.len() - 1;
    let ones: Vec<usize> = (0..digits.len()).filter(|&i| digits[i] == 1).collect();
    let mut r = vec![0u64; digits.len()];
    for &i in &ones {
        for &j in ones.iter().take_while(|&&j| i + j <= n_max) {
            r[i + j] += 1;
        }
    }
    r
}

/// Width in bits of one packed field: `⌈log₂(n_max + 2)⌉`, enough to hold any
/// coefficient `≤ n_max + 1` without carrying into the next field.
pub fn field_width(n_max: u64) -> u32 {
    64 - (n_max + 1).leading_zeros()
}

/// Kronecker substitution: `P = Σ a_i 2^(w·i)`, then field `n` of `P²` is the
/// coefficient `Σ_{i+j=n} a_i a_j`.
pub fn pair_counts_packed(digits: &[u8]) -> Vec<u64> {
    let n_max = digits.len() as u64 - 1;
    let w = field_width(n_max) as u64;

    let total_bits = w * digits.len() as u64;
    let mut words = vec![0u32; total_bits.div_ceil(32) as usize];
    for (i, _) in digits.iter().enumerate().filter(|(_, &a)| a == 1) {
        let pos = w * i as u64;
        words[(pos / 32) as usize] |= 1 << (pos % 32);
    }
    let packed = BigUint::new(words);
    let square = &packed * &packed;
    let limbs = square.to_u64_digits();

    let mask = (1u64 << w) - 1;
    (0..=n_max)
        .map(|n| {
            let pos = w * n;
            let (limb, off) = ((pos / 64) as usize, pos % 64);
            let lo = limbs.get(limb).copied().unwrap_or(0) >> off;
            let hi = if off + w > 64 {
                limbs.get(limb + 1).copied().unwrap_or(0) << (64 - off)
            } else {
                0
            };
            (lo | hi) & mask
        })
        .collect()
}

/// `d − Σ_{n=0}^{N} r(n)·2^(−n)`, exactly. Equals `T(N)·2^(−N)`.
pub fn normalization_deficit(r: &RSequence, d: u64, n: u64) -> Result<BigRational> {
    if n > r.n_max() {
        return Err(Error::PrecisionExceeded {
            requested: n,
            available: r.n_max(),
        });
    }
    // Σ r(k)·2^(N−k) over the common denominator 2^N.
    let numerator = r.values[..=n as usize]
        .iter()
        .fold(BigInt::from(0), |acc, &v| (acc << 1u32) + BigInt::from(v));
    let denominator = BigInt::one() << n;
    let sum = BigRational::new(numerator, denominator.clone());
    Ok(BigRational::from_integer(BigInt::from(d)) - sum)
}
