//! Exact binary expansions of `√d`.
//!
//! A [`DigitSequence`] stores `ℓ + N` bits of `⌊√d·2^N⌋`, most significant
//! first. Digit `a_i` weighs `2^(−i)`, so for `1 ≤ d ≤ 3` (one integer bit)
//! the stored bits are exactly `a_0, a_1, …, a_N`.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::isqrt::isqrt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitSequence {
    radicand: u64,
    frac_bits: u64,
    int_bits: u8,
    bits: Vec<u8>,
}

/// Expand `√d` to `frac_bits` places after the binary point, truncating.
pub fn expand_sqrt(d: u64, frac_bits: u64) -> Result<DigitSequence> {
    if d == 0 {
        return Err(Error::ZeroRadicand);
    }
    let scaled = BigUint::from(d) << (2 * frac_bits);
    let root = isqrt(&scaled);
    let bits = root.to_radix_be(2);
    let int_bits = (bits.len() as u64 - frac_bits) as u8;
    Ok(DigitSequence {
        radicand: d,
        frac_bits,
        int_bits,
        bits,
    })
}

impl DigitSequence {
    /// Rebuild a sequence from stored parts, checking the defining inequality
    /// `D² ≤ d·4^N < (D+1)²`.
    pub fn from_parts(radicand: u64, int_bits: u8, frac_bits: u64, bits: Vec<u8>) -> Result<Self> {
        if radicand == 0 {
            return Err(Error::ZeroRadicand);
        }
        if bits.len() as u64 != int_bits as u64 + frac_bits {
            return Err(Error::Cache(format!(
                "expected {} bits, found {}",
                int_bits as u64 + frac_bits,
                bits.len()
            )));
        }
        if bits.iter().any(|&b| b > 1) || bits.first() != Some(&1) {
            return Err(Error::Cache("bits must be 0/1 with a leading one".into()));
        }
        let seq = DigitSequence {
            radicand,
            frac_bits,
            int_bits,
            bits,
        };
        if !seq.satisfies_invariant() {
            return Err(Error::Cache(format!(
                "bits are not the truncated square root of {radicand}"
            )));
        }
        Ok(seq)
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    /// Number of digits after the binary point, `N`.
    pub fn frac_bits(&self) -> u64 {
        self.frac_bits
    }

    /// Number of digits at and before the binary point, `ℓ`.
    pub fn int_bits(&self) -> u8 {
        self.int_bits
    }

    /// All `ℓ + N` bits, most significant first.
    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn fractional(&self) -> &[u8] {
        &self.bits[self.int_bits as usize..]
    }

    /// The integer `D = ⌊√d·2^N⌋` whose binary representation is `bits`.
    pub fn to_integer(&self) -> BigUint {
        BigUint::from_radix_be(&self.bits, 2).expect("bits are 0/1")
    }

    /// `D² ≤ d·4^N < (D+1)²`, checked exactly.
    pub fn satisfies_invariant(&self) -> bool {
        let root = self.to_integer();
        let scaled = BigUint::from(self.radicand) << (2 * self.frac_bits);
        let next = &root + 1u32;
        &root * &root <= scaled && scaled < &next * &next
    }

    /// Fractional digit of weight `2^(−n)`, for `1 ≤ n ≤ N`.
    pub fn frac_digit(&self, n: u64) -> Option<u8> {
        if n == 0 || n > self.frac_bits {
            return None;
        }
        Some(self.bits[self.int_bits as usize - 1 + n as usize])
    }

    /// The digits `a_0, …, a_N` for a sequence with one integer bit.
    pub fn unit_digits(&self) -> Result<&[u8]> {
        if self.int_bits != 1 {
            return Err(Error::LayoutUnsupported {
                int_bits: self.int_bits,
            });
        }
        Ok(&self.bits)
    }

    /// Ones among `a_1..a_N`, strictly after the binary point.
    pub fn nz(&self, n: u64) -> Result<u64> {
        let digits = self.unit_digits()?;
        self.check_precision(n)?;
        Ok(count_ones(&digits[1..=n as usize]))
    }

    /// Ones among `a_0..a_N`.
    pub fn nz_star(&self, n: u64) -> Result<u64> {
        let digits = self.unit_digits()?;
        self.check_precision(n)?;
        Ok(count_ones(&digits[..=n as usize]))
    }

    /// The same expansion cut to `frac_bits` places. Truncation of the
    /// floor root is again the floor root, so this equals
    /// `expand_sqrt(d, frac_bits)`.
    pub fn truncated(&self, frac_bits: u64) -> Result<DigitSequence> {
        self.check_precision(frac_bits)?;
        let len = self.int_bits as usize + frac_bits as usize;
        Ok(DigitSequence {
            radicand: self.radicand,
            frac_bits,
            int_bits: self.int_bits,
            bits: self.bits[..len].to_vec(),
        })
    }

    pub(crate) fn check_precision(&self, n: u64) -> Result<()> {
        if n > self.frac_bits {
            return Err(Error::PrecisionExceeded {
                requested: n,
                available: self.frac_bits,
            });
        }
        Ok(())
    }
}

fn count_ones(bits: &[u8]) -> u64 {
    bits.iter().map(|&b| b as u64).sum()
}

/// Prefix counts of ones over a 0/1 digit slice `a_0, a_1, …`, for
/// constant-time `nz`/`nz_star` queries inside the bound scans.
#[derive(Debug, Clone)]
pub struct DigitProfile {
    digits: Vec<u8>,
    // ones[i] = #{j < i : a_j = 1}
    ones: Vec<u64>,
    even_ones: Vec<u64>,
}

impl DigitProfile {
    pub fn new(digits: &[u8]) -> Self {
        let mut ones = Vec::with_capacity(digits.len() + 1);
        let mut even_ones = Vec::with_capacity(digits.len() + 1);
        let (mut all, mut even) = (0u64, 0u64);
        ones.push(0);
        even_ones.push(0);
        for (i, &a) in digits.iter().enumerate() {
            all += a as u64;
            if i % 2 == 0 {
                even += a as u64;
            }
            ones.push(all);
            even_ones.push(even);
        }
        DigitProfile {
            digits: digits.to_vec(),
            ones,
            even_ones,
        }
    }

    pub fn from_sequence(seq: &DigitSequence) -> Result<Self> {
        Ok(Self::new(seq.unit_digits()?))
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    /// Largest usable index.
    pub fn max_index(&self) -> u64 {
        self.digits.len() as u64 - 1
    }

    pub fn digit(&self, i: u64) -> Result<u8> {
        self.check(i)?;
        Ok(self.digits[i as usize])
    }

    /// Ones among `a_0..=a_n`.
    pub fn nz_star(&self, n: u64) -> Result<u64> {
        self.check(n)?;
        Ok(self.ones[n as usize + 1])
    }

    /// Ones among `a_1..=a_n`.
    pub fn nz(&self, n: u64) -> Result<u64> {
        Ok(self.nz_star(n)? - self.digits[0] as u64)
    }

    /// Ones among `a_lo..=a_hi`.
    pub fn ones_between(&self, lo: u64, hi: u64) -> Result<u64> {
        self.check(hi)?;
        if lo > hi {
            return Err(Error::Range {
                lo,
                hi,
                len: self.digits.len() as u64,
            });
        }
        Ok(self.ones[hi as usize + 1] - self.ones[lo as usize])
    }

    /// Ones at even indices `i ≤ n` (index 0 counts as even).
    pub fn even_ones(&self, n: u64) -> Result<u64> {
        self.check(n)?;
        Ok(self.even_ones[n as usize + 1])
    }

    /// Ones at odd indices `i ≤ n`.
    pub fn odd_ones(&self, n: u64) -> Result<u64> {
        Ok(self.nz_star(n)? - self.even_ones(n)?)
    }

    /// `#{1 ≤ R ≤ n : R even, a_{R/2} = 1}`: the indices where `r(R)` is odd.
    /// Equal to `nz(⌊n/2⌋)`.
    pub fn exceptional(&self, n: u64) -> Result<u64> {
        self.check(n / 2)?;
        self.nz(n / 2)
    }

    fn check(&self, n: u64) -> Result<()> {
        if n >= self.digits.len() as u64 {
            return Err(Error::PrecisionExceeded {
                requested: n,
                available: self.max_index(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bit_string(bits: &[u8]) -> String {
        bits.iter().map(|b| char::from(b'0' + b)).collect()
    }

    #[test]
    fn sqrt2_to_five_places() {
        let seq = expand_sqrt(2, 5).unwrap();
        assert_eq!(seq.int_bits(), 1);
        assert_eq!(bit_string(seq.bits()), "101101");
        assert_eq!(seq.to_integer(), BigUint::from(45u32));
    }

    #[test]
    fn perfect_square_has_trailing_zeros() {
        let seq = expand_sqrt(4, 3).unwrap();
        assert_eq!(seq.int_bits(), 2);
        assert_eq!(bit_string(seq.bits()), "10000");
        assert!(matches!(
            seq.nz(1),
            Err(Error::LayoutUnsupported { int_bits: 2 })
        ));
    }

    #[test]
    fn three_root_two() {
        let seq = expand_sqrt(18, 6).unwrap();
        assert_eq!(seq.int_bits(), 3);
        assert_eq!(bit_string(seq.bits()), "100001111");
        assert_eq!(bit_string(seq.fractional()), "001111");
        assert_eq!(seq.frac_digit(3), Some(1));
        assert_eq!(seq.frac_digit(2), Some(0));
        assert_eq!(seq.frac_digit(7), None);
    }

    #[test]
    fn zero_radicand_rejected() {
        assert!(matches!(expand_sqrt(0, 4), Err(Error::ZeroRadicand)));
    }

    #[test]
    fn nz_counts() {
        let seq = expand_sqrt(2, 20).unwrap();
        assert_eq!(bit_string(&seq.fractional()[..10]), "0110101000");
        assert_eq!(seq.nz(10).unwrap(), 4);
        assert_eq!(seq.nz(1).unwrap(), 0);
        assert_eq!(seq.nz_star(4).unwrap(), 3);
        assert_eq!(seq.nz_star(0).unwrap(), 1);
        assert_eq!(seq.nz_star(8).unwrap(), 5);
        assert!(matches!(
            seq.nz(21),
            Err(Error::PrecisionExceeded {
                requested: 21,
                available: 20
            })
        ));
    }

    #[test]
    fn nz_of_one_is_zero() {
        // √1 keeps the one-integer-bit layout with all fractional digits zero.
        let seq = expand_sqrt(1, 8).unwrap();
        assert_eq!(seq.nz(8).unwrap(), 0);
        assert_eq!(seq.nz_star(8).unwrap(), 1);
    }

    #[test]
    fn profile_matches_direct_counts() {
        let seq = expand_sqrt(2, 300).unwrap();
        let profile = DigitProfile::from_sequence(&seq).unwrap();
        for n in 0..=300 {
            assert_eq!(profile.nz_star(n).unwrap(), seq.nz_star(n).unwrap());
            assert_eq!(profile.nz(n).unwrap(), seq.nz(n).unwrap());
            assert_eq!(
                profile.even_ones(n).unwrap() + profile.odd_ones(n).unwrap(),
                profile.nz_star(n).unwrap()
            );
        }
        // Exceptional indices up to 8 for √2: R = 4 (a_2) and R = 6 (a_3).
        assert_eq!(profile.exceptional(8).unwrap(), 2);
        assert!(profile.nz(301).is_err());
    }

    #[test]
    fn from_parts_rejects_wrong_bits() {
        let seq = expand_sqrt(3, 40).unwrap();
        let ok = DigitSequence::from_parts(3, 1, 40, seq.bits().to_vec()).unwrap();
        assert_eq!(ok, seq);

        let mut bad = seq.bits().to_vec();
        bad[17] ^= 1;
        assert!(DigitSequence::from_parts(3, 1, 40, bad).is_err());
        assert!(DigitSequence::from_parts(2, 1, 40, seq.bits().to_vec()).is_err());
    }

    proptest! {
        #[test]
        fn defining_inequality(d in 1u64..=100, n in 0u64..400) {
            let seq = expand_sqrt(d, n).unwrap();
            prop_assert!(seq.satisfies_invariant());
            prop_assert_eq!(seq.bits().len() as u64, seq.int_bits() as u64 + n);
            // 2^(ℓ−1) ≤ D·2^(−N) < 2^ℓ
            let root = seq.to_integer();
            prop_assert_eq!(root.bits(), seq.int_bits() as u64 + n);
        }

        #[test]
        fn prefix_stability(d in 1u64..=100, n in 0u64..300, extra in 0u64..200) {
            let short = expand_sqrt(d, n).unwrap();
            let long = expand_sqrt(d, n + extra).unwrap();
            prop_assert!(long.bits().starts_with(short.bits()));
            prop_assert_eq!(long.truncated(n).unwrap(), short);
        }

        #[test]
        fn nz_star_minus_nz_is_leading_digit(n in 0u64..500) {
            let seq = expand_sqrt(3, 500).unwrap();
            let a0 = seq.bits()[0] as u64;
            if n >= 1 {
                prop_assert_eq!(seq.nz_star(n).unwrap() - seq.nz(n).unwrap(), a0);
            }
            prop_assert!(seq.nz_star(n).unwrap() >= a0);
        }
    }
}
