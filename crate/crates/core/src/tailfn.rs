//! The tail function `T(R) = Σ_{m≥1} r(m+R)·2^(−m)`.
//!
//! Since `Σ_n r(n)·2^(−n) = d`, the infinite tail has the finite closed form
//! `T(R) = d·2^R − Σ_{n=0}^{R} r(n)·2^(R−n)`, exact whenever `r(0..=R)` is.
//! Consecutive values satisfy `2·T(R−1) = T(R) + r(R)`.
//!
//! Values are bounded by `R + 2` (from `r(n) ≤ n + 1`), so they are stored
//! as `u64`; all arithmetic is checked and a violation is reported as an
//! error rather than wrapped.

use std::io::Write;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::spectrum::RSequence;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TSequence {
    values: Vec<u64>,
    prefix: Vec<u64>,
    radicand: u64,
}

impl TSequence {
    fn new(values: Vec<u64>, radicand: u64) -> Result<Self> {
        let mut prefix = Vec::with_capacity(values.len() + 1);
        let mut acc = 0u64;
        prefix.push(0);
        for &v in &values {
            acc = acc
                .checked_add(v)
                .ok_or(Error::Overflow("prefix sum of T"))?;
            prefix.push(acc);
        }
        Ok(TSequence {
            values,
            prefix,
            radicand,
        })
    }

    pub fn r_max(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    pub fn get(&self, big_r: u64) -> Result<u64> {
        self.values
            .get(big_r as usize)
            .copied()
            .ok_or(Error::Range {
                lo: big_r,
                hi: big_r,
                len: self.values.len() as u64,
            })
    }

    /// `Σ_{R=a}^{b} T(R)`.
    pub fn sum(&self, a: u64, b: u64) -> Result<u64> {
        if a > b || b > self.r_max() {
            return Err(Error::Range {
                lo: a,
                hi: b,
                len: self.values.len() as u64,
            });
        }
        Ok(self.prefix[b as usize + 1] - self.prefix[a as usize])
    }

    /// CSV dump with header `R,T,r,parity_exception`; `digits` are `a_0, a_1, …`.
    pub fn write_csv<W: Write>(&self, r: &RSequence, digits: &[u8], out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(["R", "T", "r", "parity_exception"])?;
        for (big_r, &t) in self.values.iter().enumerate() {
            let exception = big_r % 2 == 0 && digits.get(big_r / 2) == Some(&1);
            wtr.write_record([
                big_r.to_string(),
                t.to_string(),
                r.get(big_r as u64)?.to_string(),
                u8::from(exception).to_string(),
            ])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// `Σ_{R=a}^{b} T(R)`.
pub fn sum_t(t: &TSequence, a: u64, b: u64) -> Result<u64> {
    t.sum(a, b)
}

fn check_inputs(r: &RSequence, d: u64, r_max: u64) -> Result<()> {
    if let Some(found) = r.radicand() {
        if found != d {
            return Err(Error::RadicandMismatch { expected: d, found });
        }
    }
    if r_max > r.n_max() {
        return Err(Error::PrecisionExceeded {
            requested: r_max,
            available: r.n_max(),
        });
    }
    Ok(())
}

/// `T(0..=r_max)` by forward recurrence from `T(0) = d − r(0)`, confirmed
/// against the closed form at `r_max`.
pub fn t_sequence(r: &RSequence, d: u64, r_max: u64) -> Result<TSequence> {
    check_inputs(r, d, r_max)?;
    let rv = r.values();
    let mut values = Vec::with_capacity(r_max as usize + 1);
    let mut current = d
        .checked_sub(rv[0])
        .ok_or_else(|| Error::Precondition(format!("r(0) = {} exceeds d = {d}", rv[0])))?;
    values.push(current);
    for (big_r, &r_here) in rv.iter().enumerate().take(r_max as usize + 1).skip(1) {
        let doubled = current
            .checked_mul(2)
            .ok_or(Error::Overflow("T recurrence"))?;
        current = doubled.checked_sub(r_here).ok_or_else(|| {
            Error::Precondition(format!(
                "T({big_r}) would be negative; r is not the representation function of √{d}"
            ))
        })?;
        values.push(current);
    }

    let endpoint = t_closed_form(r, d, r_max)?;
    if endpoint != BigInt::from(current) {
        return Err(Error::Precondition(format!(
            "recurrence gives T({r_max}) = {current}, closed form gives {endpoint}"
        )));
    }
    TSequence::new(values, d)
}

/// `T(R) = d·2^R − Σ_{n=0}^{R} r(n)·2^(R−n)` as one exact big-integer
/// evaluation.
///
/// The weighted sum is assembled one bit plane at a time: plane `b` holds bit
/// `b` of every `r(n)` at position `R − n`, so no plane has overlapping terms.
pub fn t_closed_form(r: &RSequence, d: u64, big_r: u64) -> Result<BigInt> {
    check_inputs(r, d, big_r)?;
    let rv = &r.values()[..=big_r as usize];
    let planes = rv.iter().map(|v| 64 - v.leading_zeros()).max().unwrap_or(0);

    let words = (big_r as usize + 1).div_ceil(64);
    let mut weighted = BigUint::default();
    for b in 0..planes {
        let mut plane = vec![0u64; words];
        for (n, &v) in rv.iter().enumerate() {
            if (v >> b) & 1 == 1 {
                let pos = big_r as usize - n;
                plane[pos / 64] |= 1 << (pos % 64);
            }
        }
        weighted += biguint_from_u64_words(&plane) << b;
    }
    let scaled = BigUint::from(d) << big_r;
    Ok(BigInt::from(scaled) - BigInt::from(weighted))
}

/// Closed-form values for every `R ≤ r_max`, carrying the exact dyadic partial
/// sum `Σ_{n≤R} r(n)·2^(R−n)` and `d·2^R` as separate big integers.
///
/// Quadratic in `r_max`; shares no state with the recurrence in
/// [`t_sequence`], which is what makes it a useful cross-check.
pub fn t_closed_form_all(r: &RSequence, d: u64, r_max: u64) -> Result<Vec<BigInt>> {
    check_inputs(r, d, r_max)?;
    let mut partial = BigUint::default();
    let mut scaled = BigUint::from(d);
    let mut out = Vec::with_capacity(r_max as usize + 1);
    for (big_r, &v) in r.values()[..=r_max as usize].iter().enumerate() {
        if big_r > 0 {
            partial <<= 1u32;
            scaled <<= 1u32;
        }
        partial += v;
        out.push(BigInt::from(scaled.clone()) - BigInt::from(partial.clone()));
    }
    Ok(out)
}

/// Narrow closed-form values to `u64`, failing on negative or huge entries.
pub fn to_machine_values(values: &[BigInt]) -> Result<Vec<u64>> {
    values
        .iter()
        .map(|v| {
            if v.is_negative() {
                Err(Error::Precondition(format!("negative tail value {v}")))
            } else {
                v.to_u64().ok_or(Error::Overflow("tail value"))
            }
        })
        .collect()
}

fn biguint_from_u64_words(words: &[u64]) -> BigUint {
    let halves: Vec<u32> = words
        .iter()
        .flat_map(|&w| [w as u32, (w >> 32) as u32])
        .collect();
    BigUint::new(halves)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digits::expand_sqrt;
    use crate::spectrum::{r_fast, r_from_digits, r_naive, Convolution};

    fn sqrt_tables(d: u64, n: u64) -> (RSequence, TSequence) {
        let seq = expand_sqrt(d, n).unwrap();
        let r = r_fast(&seq, n).unwrap();
        let t = t_sequence(&r, d, n).unwrap();
        (r, t)
    }

    #[test]
    fn sqrt2_first_values() {
        let (r, t) = sqrt_tables(2, 20);
        assert_eq!(&t.values()[..8], &[1, 2, 2, 2, 3, 2, 3, 2]);
        assert_eq!(t.get(8).unwrap(), 2);
        // T(4) = 2·T(3) − r(4)
        assert_eq!(t.get(4).unwrap(), 2 * t.get(3).unwrap() - r.get(4).unwrap());
        assert_eq!(t.get(0).unwrap(), 2 - r.get(0).unwrap());
    }

    #[test]
    fn sqrt3_seed() {
        let seq = expand_sqrt(3, 8).unwrap();
        assert_eq!(seq.bits(), &[1, 1, 0, 1, 1, 1, 0, 1, 1]);
        let r = r_naive(&seq, 8).unwrap();
        let t = t_sequence(&r, 3, 8).unwrap();
        assert_eq!(t.get(0).unwrap(), 2);
    }

    #[test]
    fn sums() {
        let (_, t) = sqrt_tables(2, 20);
        assert_eq!(sum_t(&t, 1, 8).unwrap(), 18);
        assert_eq!(sum_t(&t, 0, 5).unwrap(), 12);
        assert_eq!(sum_t(&t, 7, 7).unwrap(), t.get(7).unwrap());
        assert!(matches!(sum_t(&t, 3, 2), Err(Error::Range { .. })));
        assert!(matches!(sum_t(&t, 0, 21), Err(Error::Range { .. })));
    }

    #[test]
    fn closed_form_routes_agree_with_recurrence() {
        for d in [2u64, 3] {
            let (r, t) = sqrt_tables(d, 3000);
            let all = t_closed_form_all(&r, d, 3000).unwrap();
            assert_eq!(to_machine_values(&all).unwrap(), t.values());
            for big_r in [0u64, 1, 2, 63, 64, 65, 1000, 2999, 3000] {
                assert_eq!(
                    t_closed_form(&r, d, big_r).unwrap(),
                    BigInt::from(t.get(big_r).unwrap())
                );
            }
        }
    }

    #[test]
    fn tail_identities_sqrt2() {
        let seq = expand_sqrt(2, 5000).unwrap();
        let digits = seq.unit_digits().unwrap();
        let (r, t) = sqrt_tables(2, 5000);
        for big_r in 1..=5000u64 {
            let (tr, rr) = (t.get(big_r).unwrap(), r.get(big_r).unwrap());
            assert_eq!(2 * t.get(big_r - 1).unwrap(), tr + rr);
            assert!(tr >= 1);
            assert_eq!(tr % 2, rr % 2);
            let exceptional = big_r % 2 == 0 && digits[big_r as usize / 2] == 1;
            if !exceptional {
                assert!(tr >= 2, "T({big_r}) = {tr}");
            }
        }
    }

    #[test]
    fn rejects_mismatched_inputs() {
        let seq = expand_sqrt(2, 30).unwrap();
        let r = r_naive(&seq, 30).unwrap();
        assert!(matches!(
            t_sequence(&r, 3, 10),
            Err(Error::RadicandMismatch {
                expected: 3,
                found: 2
            })
        ));
        assert!(matches!(
            t_sequence(&r, 2, 31),
            Err(Error::PrecisionExceeded { .. })
        ));
        // Digits that are not those of √2 drive the recurrence negative.
        let fake = r_from_digits(&[1, 1, 1, 1, 1, 1], Convolution::Naive).unwrap();
        assert!(matches!(
            t_sequence(&fake, 2, 5),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn csv_dump() {
        let seq = expand_sqrt(2, 8).unwrap();
        let r = r_naive(&seq, 4).unwrap();
        let t = t_sequence(&r, 2, 4).unwrap();
        let mut out = Vec::new();
        t.write_csv(&r, seq.unit_digits().unwrap(), &mut out)
            .unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "R,T,r,parity_exception\n0,1,1,1\n1,2,0,0\n2,2,2,0\n3,2,2,0\n4,3,1,1\n"
        );
    }
}
