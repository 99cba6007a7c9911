//! Cross-checks between the expansions of `√2` and `3√2 = √18`, and the
//! improved pointwise bound forced by two shifted pairs of ones.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use serde::Serialize;

use crate::bounds::{int, BoundReport, Direction};
use crate::digits::{DigitProfile, DigitSequence};
use crate::error::{Error, Result};
use crate::spectrum::RSequence;
use crate::tailfn::TSequence;

pub const FORCING_PATTERN: &str = "0100";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PatternHits {
    pub pattern: String,
    /// Fractional start positions, increasing.
    pub positions: Vec<u64>,
}

fn parse_pattern(pattern: &str) -> Result<Vec<u8>> {
    if pattern.is_empty() {
        return Err(Error::BadPattern);
    }
    pattern
        .bytes()
        .map(|c| match c {
            b'0' => Ok(0),
            b'1' => Ok(1),
            _ => Err(Error::BadPattern),
        })
        .collect()
}

/// Every start position `1 ≤ p ≤ N` where the fractional digits
/// `a_p, a_{p+1}, …` spell `pattern`; overlapping occurrences included.
pub fn find_pattern(seq: &DigitSequence, pattern: &str, n: u64) -> Result<PatternHits> {
    let want = parse_pattern(pattern)?;
    // The last occurrence ends at a_{N+|pattern|−1}.
    seq.check_precision(n + want.len() as u64 - 1)?;
    let frac = seq.fractional();
    let positions = (1..=n)
        .filter(|&p| {
            let start = p as usize - 1;
            frac[start..start + want.len()] == want[..]
        })
        .collect();
    Ok(PatternHits {
        pattern: pattern.to_string(),
        positions,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub n: u64,
    pub b_n: u8,
    pub b_n1: u8,
}

/// JSON shape of the `forcing-check` output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ForcingReport {
    pub pattern: String,
    #[serde(rename = "N")]
    pub n: u64,
    pub occurrences: u64,
    pub violations: Vec<Violation>,
    #[serde(skip)]
    pub positions: Vec<u64>,
}

impl ForcingReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

fn expect_radicand(seq: &DigitSequence, d: u64) -> Result<()> {
    if seq.radicand() != d {
        return Err(Error::RadicandMismatch {
            expected: d,
            found: seq.radicand(),
        });
    }
    Ok(())
}

/// For every `0100` starting at fractional position `n ≤ N` of `√2`, the
/// digits of `√18` of weight `2^(−n)` and `2^(−n−1)` should both be 1.
/// Both expansions are indexed by weight, so their integer parts (one and
/// three bits) do not shift the comparison.
pub fn check_forcing(
    sqrt2: &DigitSequence,
    sqrt18: &DigitSequence,
    n: u64,
) -> Result<ForcingReport> {
    expect_radicand(sqrt2, 2)?;
    expect_radicand(sqrt18, 18)?;
    sqrt18.check_precision(n + 3)?;
    let hits = find_pattern(sqrt2, FORCING_PATTERN, n)?;
    let violations = hits
        .positions
        .iter()
        .filter_map(|&p| {
            let b_n = sqrt18.frac_digit(p).expect("checked precision");
            let b_n1 = sqrt18.frac_digit(p + 1).expect("checked precision");
            (b_n != 1 || b_n1 != 1).then_some(Violation { n: p, b_n, b_n1 })
        })
        .collect();
    Ok(ForcingReport {
        pattern: FORCING_PATTERN.to_string(),
        n,
        occurrences: hits.positions.len() as u64,
        violations,
        positions: hits.positions,
    })
}

/// `D₁₈ − 3·D₂` at the common precision; truncation makes it 0, 1 or 2 when
/// the two expansions are consistent.
pub fn scaled_consistency_gap(sqrt2: &DigitSequence, sqrt18: &DigitSequence) -> Result<u64> {
    expect_radicand(sqrt2, 2)?;
    expect_radicand(sqrt18, 18)?;
    let bits = sqrt2.frac_bits().min(sqrt18.frac_bits());
    let d2 = sqrt2.truncated(bits)?.to_integer() * 3u32;
    let d18 = sqrt18.truncated(bits)?.to_integer();
    if d18 < d2 {
        return Err(Error::Precondition(format!(
            "⌊3√2·2^{bits}⌋ is below 3·⌊√2·2^{bits}⌋"
        )));
    }
    let gap: BigUint = d18 - d2;
    u64::try_from(gap).map_err(|_| Error::Overflow("consistency gap"))
}

/// Result of [`check_pair_bound`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairBound {
    pub n: u64,
    pub m: u64,
    pub k: u64,
    pub witnesses: Vec<(u64, u64)>,
    /// `r(n+m+k) ≥ 4`
    pub r_bound: BoundReport,
    /// `T(n+m+k−1) ≥ 3`
    pub t_bound: BoundReport,
}

impl PairBound {
    pub fn pass(&self) -> bool {
        self.r_bound.pass && self.t_bound.pass
    }
}

/// The ordered pairs `(n, m+k), (m+k, n), (n+k, m), (m, n+k)`, checked to be
/// four distinct pairs of ones summing to `n + m + k`.
///
/// Distinctness needs `n ≠ m`, `k ≥ 1` and `|n − m| ≠ k`; when `m = n + k`
/// the first two pairs coincide.
pub fn pair_witnesses(profile: &DigitProfile, n: u64, m: u64, k: u64) -> Result<Vec<(u64, u64)>> {
    if n == m {
        return Err(Error::Precondition("n and m must differ".into()));
    }
    if k == 0 || n.abs_diff(m) == k {
        return Err(Error::Precondition(format!(
            "witness pairs coincide for n={n}, m={m}, k={k}"
        )));
    }
    for i in [n, n + k, m, m + k] {
        if profile.digit(i)? != 1 {
            return Err(Error::Precondition(format!("a_{i} is not 1")));
        }
    }
    let pairs = vec![(n, m + k), (m + k, n), (n + k, m), (m, n + k)];
    let distinct: BTreeSet<_> = pairs.iter().collect();
    if distinct.len() != 4 || pairs.iter().any(|&(i, j)| i + j != n + m + k) {
        return Err(Error::Precondition(format!(
            "witness pairs for n={n}, m={m}, k={k} are not four distinct representations"
        )));
    }
    Ok(pairs)
}

pub fn check_pair_bound(
    profile: &DigitProfile,
    r: &RSequence,
    t: &TSequence,
    n: u64,
    m: u64,
    k: u64,
) -> Result<PairBound> {
    let witnesses = pair_witnesses(profile, n, m, k)?;
    let s = n + m + k;
    let r_bound = BoundReport::new(
        "pair_r",
        s,
        Some(k),
        Direction::Lower,
        int(r.get(s)?),
        int(4),
    );
    let t_bound = BoundReport::new(
        "pair_T",
        s - 1,
        Some(k),
        Direction::Lower,
        int(t.get(s - 1)?),
        int(3),
    );
    Ok(PairBound {
        n,
        m,
        k,
        witnesses,
        r_bound,
        t_bound,
    })
}

#[derive(Debug, Clone, Default)]
pub struct PairScan {
    pub checked: u64,
    /// Pairs with `m = n + k`, whose witnesses are not distinct.
    pub overlapping: u64,
    pub failures: Vec<PairBound>,
}

/// Every `n < m` with `a_n = a_{n+k} = a_m = a_{m+k} = 1` and `m + k ≤ limit`.
pub fn scan_pair_bounds(
    profile: &DigitProfile,
    r: &RSequence,
    t: &TSequence,
    k: u64,
    limit: u64,
) -> Result<PairScan> {
    if k == 0 {
        return Err(Error::Precondition("gap k must be positive".into()));
    }
    if limit < k {
        return Ok(PairScan::default());
    }
    let starts: Vec<u64> = (0..=limit - k)
        .map(|i| Ok((i, profile.digit(i)? == 1 && profile.digit(i + k)? == 1)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter_map(|(i, hit)| hit.then_some(i))
        .collect();

    let mut scan = PairScan::default();
    for (idx, &n) in starts.iter().enumerate() {
        for &m in &starts[idx + 1..] {
            if m == n + k {
                scan.overlapping += 1;
                continue;
            }
            let s = n + m + k;
            scan.checked += 1;
            if r.get(s)? < 4 || t.get(s - 1)? < 3 {
                scan.failures
                    .push(check_pair_bound(profile, r, t, n, m, k)?);
            }
        }
    }
    Ok(scan)
}
