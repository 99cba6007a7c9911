//! Finite-`N` forms of the sum inequalities relating `r`, `T` and the digit
//! counts, each evaluated in exact rational arithmetic.
//!
//! Asymptotic error terms are replaced by explicit quantities:
//!
//! * the `O(nz)` loss in the lower sums is `E(N) = #{1 ≤ R ≤ N : R even,
//!   a_{R/2} = 1}`, the number of `R` where `r(R)` is odd;
//! * the `O(1)` tail in the first upper bound is `(N + 3)/2^K` with
//!   `K = ⌊log₂ N⌋`, from `r(n) ≤ n + 1`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::digits::DigitProfile;
use crate::error::{Error, Result};
use crate::spectrum::RSequence;
use crate::tailfn::TSequence;

/// Which side is expected to be larger.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Direction {
    /// `lhs ≤ rhs`
    Upper,
    /// `lhs ≥ rhs`
    Lower,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub name: String,
    pub n: u64,
    pub k: Option<u64>,
    pub direction: Direction,
    pub lhs: BigRational,
    pub rhs: BigRational,
    /// `rhs − lhs` for upper bounds, `lhs − rhs` for lower bounds.
    pub margin: BigRational,
    pub pass: bool,
}

impl BoundReport {
    pub fn new(
        name: impl Into<String>,
        n: u64,
        k: Option<u64>,
        direction: Direction,
        lhs: BigRational,
        rhs: BigRational,
    ) -> Self {
        let margin = match direction {
            Direction::Upper => &rhs - &lhs,
            Direction::Lower => &lhs - &rhs,
        };
        let pass = !margin.is_negative();
        BoundReport {
            name: name.into(),
            n,
            k,
            direction,
            lhs,
            rhs,
            margin,
            pass,
        }
    }

    /// `−1`, `0` or `1`.
    pub fn margin_sign(&self) -> i8 {
        if self.margin.is_zero() {
            0
        } else if self.margin.is_positive() {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.direction {
            Direction::Upper => "<=",
            Direction::Lower => ">=",
        };
        write!(f, "{} N={}", self.name, self.n)?;
        if let Some(k) = self.k {
            write!(f, " K={k}")?;
        }
        write!(
            f,
            ": {} {op} {} (margin {}) {}",
            self.lhs,
            self.rhs,
            self.margin,
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

pub(crate) fn int(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub(crate) fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn dyadic(num: u64, exp: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::one() << exp)
}

/// `⌊log₂ n⌋` for `n ≥ 1`.
pub fn floor_log2(n: u64) -> u64 {
    63 - n.leading_zeros() as u64
}

/// Breakpoints `0 = b_0 < b_1 < … < b_m = N`; intervals are `I_1 = [0, b_1]`
/// and `I_k = (b_{k−1}, b_k]` for `k ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalPartition {
    breakpoints: Vec<u64>,
}

impl IntervalPartition {
    pub fn new(breakpoints: Vec<u64>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::InvalidPartition(
                "need at least two breakpoints".into(),
            ));
        }
        if breakpoints[0] != 0 {
            return Err(Error::InvalidPartition("first breakpoint must be 0".into()));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPartition(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        Ok(IntervalPartition { breakpoints })
    }

    /// `m` intervals with `b_k = ⌊k·N/m⌋`.
    pub fn uniform(n: u64, m: u64) -> Result<Self> {
        if m == 0 || n < m {
            return Err(Error::InvalidPartition(format!(
                "cannot split [0, {n}] into {m} nonempty intervals"
            )));
        }
        let bps = (0..=m)
            .map(|k| (k as u128 * n as u128 / m as u128) as u64)
            .collect();
        Self::new(bps)
    }

    pub fn n(&self) -> u64 {
        *self.breakpoints.last().unwrap()
    }

    /// Number of intervals `m`.
    pub fn len(&self) -> usize {
        self.breakpoints.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn breakpoints(&self) -> &[u64] {
        &self.breakpoints
    }

    /// Inclusive index range `(lo, hi)` of interval `k` (0-based).
    pub fn interval(&self, k: usize) -> (u64, u64) {
        let lo = if k == 0 { 0 } else { self.breakpoints[k] + 1 };
        (lo, self.breakpoints[k + 1])
    }

    /// Interval pair `(k, l)` may contribute to `i + j ≤ N`: the left
    /// endpoints satisfy `b_{k−1} + b_{l−1} < N`. This never excludes a pair
    /// that actually contributes.
    pub fn pair_included(&self, k: usize, l: usize) -> bool {
        self.breakpoints[k] + self.breakpoints[l] < self.n()
    }
}

fn need_t(t: &TSequence, upto: u64) -> Result<()> {
    if upto > t.r_max() {
        return Err(Error::PrecisionExceeded {
            requested: upto,
            available: t.r_max(),
        });
    }
    Ok(())
}

fn need_r(r: &RSequence, upto: u64) -> Result<()> {
    if upto > r.n_max() {
        return Err(Error::PrecisionExceeded {
            requested: upto,
            available: r.n_max(),
        });
    }
    Ok(())
}

fn positive(n: u64, what: &str, min: u64) -> Result<()> {
    if n < min {
        return Err(Error::Precondition(format!(
            "{what} needs N ≥ {min}, got {n}"
        )));
    }
    Ok(())
}

/// `T(R−1) ≥ r(R)/2 + 1` for even `r(R)`, `≥ r(R)/2 + 1/2` for odd.
pub fn check_pointwise_lower(t: &TSequence, r: &RSequence, big_r: u64) -> Result<BoundReport> {
    positive(big_r, "pointwise_lower", 1)?;
    need_t(t, big_r - 1)?;
    need_r(r, big_r)?;
    let rr = r.get(big_r)?;
    let rhs = ratio(rr, 2) + if rr % 2 == 0 { int(1) } else { ratio(1, 2) };
    Ok(BoundReport::new(
        "pointwise_lower",
        big_r,
        None,
        Direction::Lower,
        int(t.get(big_r - 1)?),
        rhs,
    ))
}

/// `Σ_{R=0}^{N−1} T(R) ≥ ½·Σ_{R=1}^{N} r(R) + N − ½·E(N)`.
pub fn check_basic_lower_sum(
    t: &TSequence,
    r: &RSequence,
    profile: &DigitProfile,
    n: u64,
) -> Result<BoundReport> {
    positive(n, "basic_lower_sum", 1)?;
    need_t(t, n - 1)?;
    need_r(r, n)?;
    let lhs = int(t.sum(0, n - 1)?);
    let rhs = ratio(r.sum(1, n)?, 2) + int(n) - ratio(profile.exceptional(n)?, 2);
    Ok(BoundReport::new(
        "basic_lower_sum",
        n,
        None,
        Direction::Lower,
        lhs,
        rhs,
    ))
}

/// `Σ_{R=0}^{N−K} T(R) ≤ Σ_{R=1}^{N} r(R) + (N + 3)/2^K`, `K = ⌊log₂ N⌋`.
pub fn check_first_upper(t: &TSequence, r: &RSequence, n: u64) -> Result<BoundReport> {
    positive(n, "first_upper", 2)?;
    let k = floor_log2(n);
    need_t(t, n - k)?;
    need_r(r, n)?;
    let lhs = int(t.sum(0, n - k)?);
    let rhs = int(r.sum(1, n)?) + dyadic(n + 3, k);
    Ok(BoundReport::new(
        "first_upper",
        n,
        Some(k),
        Direction::Upper,
        lhs,
        rhs,
    ))
}

/// `Σ_{R=1}^{N} r(R) ≤ nz*(N)²`, with `nz*` counting from index 0.
pub fn check_basic_upper(r: &RSequence, profile: &DigitProfile, n: u64) -> Result<BoundReport> {
    need_r(r, n)?;
    let lhs = if n == 0 { 0 } else { r.sum(1, n)? };
    let ones = profile.nz_star(n)?;
    Ok(BoundReport::new(
        "basic_upper",
        n,
        None,
        Direction::Upper,
        int(lhs),
        int(ones * ones),
    ))
}

/// `Σ_{R=1}^{N} T(R) ≥ 2N − E(N)`.
pub fn check_refined_lower(t: &TSequence, profile: &DigitProfile, n: u64) -> Result<BoundReport> {
    positive(n, "refined_lower", 1)?;
    need_t(t, n)?;
    let lhs = int(t.sum(1, n)?);
    let rhs = int(2 * n) - int(profile.exceptional(n)?);
    Ok(BoundReport::new(
        "refined_lower",
        n,
        None,
        Direction::Lower,
        lhs,
        rhs,
    ))
}

/// One-count per interval, `c_k = #{i ∈ I_k : a_i = 1}`.
pub fn interval_counts(profile: &DigitProfile, partition: &IntervalPartition) -> Result<Vec<u64>> {
    (0..partition.len())
        .map(|k| {
            let (lo, hi) = partition.interval(k);
            profile.ones_between(lo, hi)
        })
        .collect()
}

/// `Σ_{R=1}^{N} r(R) ≤ Σ_{(k,l) included} c_k·c_l` over ordered interval pairs.
pub fn interval_upper_bound(
    r: &RSequence,
    profile: &DigitProfile,
    partition: &IntervalPartition,
) -> Result<BoundReport> {
    let n = partition.n();
    need_r(r, n)?;
    let counts = interval_counts(profile, partition)?;
    let mut rhs = 0u64;
    for (k, &ck) in counts.iter().enumerate() {
        for (l, &cl) in counts.iter().enumerate() {
            if partition.pair_included(k, l) {
                rhs += ck * cl;
            }
        }
    }
    Ok(BoundReport::new(
        format!("interval_upper_m{}", partition.len()),
        n,
        None,
        Direction::Upper,
        int(r.sum(1, n)?),
        int(rhs),
    ))
}
