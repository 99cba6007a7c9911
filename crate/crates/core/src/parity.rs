//! Splitting the digit and pair counts by index parity.
//!
//! `nz₀(N)`/`nz₁(N)` count ones at even/odd indices `i ≤ 2N + 1`. Even sums
//! `i + j` come from two even or two odd indices, odd sums from one of each,
//! which gives the two pair-count bounds below.
//!
//! For the sum of `T` along even arguments, `Σ_{R=0}^{M} T(2R)` with
//! `M = N − K` expands to `Σ_j c_j·r(j)` where `c_j ≤ 2/3` for odd `j` and
//! `c_j ≤ 1/3` for even `j`. Every `j ≤ 2N + 1` is therefore covered by
//! `r(1)/2 + Σ_{R=1}^{N} (r(2R+1) + r(2R)/2)`, and using `r(j) ≤ j + 1` the
//! remaining `j ≥ 2N + 2` contribute at most `(4N + 8)/(3·4^K)`. The check
//! uses the looser `(2N + 3)/2^K`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::bounds::{floor_log2, int, ratio, BoundReport, Direction};
use crate::digits::DigitProfile;
use crate::error::{Error, Result};
use crate::spectrum::RSequence;
use crate::tailfn::TSequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ParityCounts {
    #[serde(rename = "N")]
    pub n: u64,
    pub nz0: u64,
    pub nz1: u64,
}

impl ParityCounts {
    /// `nz₀ + nz₁`, which is `nz*(2N + 1)`.
    pub fn total(&self) -> u64 {
        self.nz0 + self.nz1
    }

    /// `½(nz₀² + nz₁²) + 2·nz₀·nz₁ = ½s² − nz₀² + s·nz₀` with `s = nz₀ + nz₁`,
    /// compared after doubling both sides.
    pub fn quadratic_form_identity_holds(&self) -> bool {
        let (a, b) = (self.nz0 as i128, self.nz1 as i128);
        let s = a + b;
        a * a + b * b + 4 * a * b == s * s - 2 * a * a + 2 * s * a
    }
}

pub fn parity_counts(profile: &DigitProfile, n: u64) -> Result<ParityCounts> {
    let top = 2 * n + 1;
    Ok(ParityCounts {
        n,
        nz0: profile.even_ones(top)?,
        nz1: profile.odd_ones(top)?,
    })
}

/// Prefix sums of `r` and `T` along even and odd arguments.
#[derive(Debug, Clone)]
pub struct ProgressionSums {
    // [i] = Σ_{R<i} r(2R), Σ_{R<i} r(2R+1), Σ_{R<i} T(2R)
    r_even: Vec<u64>,
    r_odd: Vec<u64>,
    t_even: Vec<u64>,
}

fn strided_prefix(values: &[u64], start: usize) -> Vec<u64> {
    let mut out = vec![0];
    let mut acc = 0;
    for &v in values.iter().skip(start).step_by(2) {
        acc += v;
        out.push(acc);
    }
    out
}

impl ProgressionSums {
    pub fn new(r: &RSequence, t: &TSequence) -> Self {
        ProgressionSums {
            r_even: strided_prefix(r.values(), 0),
            r_odd: strided_prefix(r.values(), 1),
            t_even: strided_prefix(t.values(), 0),
        }
    }

    /// Sums of `r` only, for digit strings that are not an expansion of any
    /// `√d` (where `T` is undefined).
    pub fn pairs_only(r: &RSequence) -> Self {
        ProgressionSums {
            r_even: strided_prefix(r.values(), 0),
            r_odd: strided_prefix(r.values(), 1),
            t_even: vec![0],
        }
    }

    fn get(table: &[u64], n: u64, what: &'static str) -> Result<u64> {
        table
            .get(n as usize + 1)
            .copied()
            .ok_or_else(|| Error::Precondition(format!("{what} not available up to R = {n}")))
    }

    /// `Σ_{R=0}^{n} r(2R)`
    pub fn r_even(&self, n: u64) -> Result<u64> {
        Self::get(&self.r_even, n, "r(2R)")
    }

    /// `Σ_{R=0}^{n} r(2R+1)`
    pub fn r_odd(&self, n: u64) -> Result<u64> {
        Self::get(&self.r_odd, n, "r(2R+1)")
    }

    /// `Σ_{R=0}^{n} T(2R)`
    pub fn t_even(&self, n: u64) -> Result<u64> {
        Self::get(&self.t_even, n, "T(2R)")
    }
}

/// `Σ_{R=0}^{N} r(2R) ≤ nz₀² + nz₁²`.
pub fn check_even_r_bound(sums: &ProgressionSums, pc: &ParityCounts) -> Result<BoundReport> {
    Ok(BoundReport::new(
        "even_r",
        pc.n,
        None,
        Direction::Upper,
        int(sums.r_even(pc.n)?),
        int(pc.nz0 * pc.nz0 + pc.nz1 * pc.nz1),
    ))
}

/// `Σ_{R=0}^{N} r(2R+1) ≤ 2·nz₀·nz₁`.
pub fn check_odd_r_bound(sums: &ProgressionSums, pc: &ParityCounts) -> Result<BoundReport> {
    Ok(BoundReport::new(
        "odd_r",
        pc.n,
        None,
        Direction::Upper,
        int(sums.r_odd(pc.n)?),
        int(2 * pc.nz0 * pc.nz1),
    ))
}

/// `(2N + 3)/2^K`, `K = ⌊log₂ N⌋`.
pub fn even_t_tail(n: u64) -> BigRational {
    let k = floor_log2(n);
    BigRational::new(BigInt::from(2 * n + 3), BigInt::from(1) << k)
}

/// `Σ_{R=0}^{N−K} T(2R) ≤ r(1)/2 + Σ_{R=1}^{N} (r(2R+1) + r(2R)/2) + (2N + 3)/2^K`.
pub fn check_even_t_sum(sums: &ProgressionSums, r: &RSequence, n: u64) -> Result<BoundReport> {
    if n < 2 {
        return Err(Error::Precondition(format!(
            "even_T_sum needs N ≥ 2, got {n}"
        )));
    }
    let k = floor_log2(n);
    let lhs = int(sums.t_even(n - k)?);
    let r1 = r.get(1)?;
    let odd = sums.r_odd(n)? - r1;
    let even = sums.r_even(n)? - r.get(0)?;
    let rhs = ratio(r1, 2) + int(odd) + ratio(even, 2) + even_t_tail(n);
    Ok(BoundReport::new(
        "even_T_sum",
        n,
        Some(k),
        Direction::Upper,
        lhs,
        rhs,
    ))
}

/// The even-argument lower sum `Σ_{R=0}^{N−K} T(2R) ≥ 2(N−K+1) − nz*(N−K)`
/// chained with [`check_even_t_sum`] and the two pair-count bounds:
///
/// `2(N−K+1) − nz*(N−K) − (2N+3)/2^K ≤ ½(nz₀² + nz₁²) + 2·nz₀·nz₁`.
pub fn check_parity_combined(profile: &DigitProfile, pc: &ParityCounts) -> Result<BoundReport> {
    let n = pc.n;
    if n < 2 {
        return Err(Error::Precondition(format!(
            "parity_combined needs N ≥ 2, got {n}"
        )));
    }
    let k = floor_log2(n);
    let m = n - k;
    let lhs = int(2 * (m + 1)) - int(profile.nz_star(m)?) - even_t_tail(n);
    let rhs = ratio(pc.nz0 * pc.nz0 + pc.nz1 * pc.nz1, 2) + int(2 * pc.nz0 * pc.nz1);
    Ok(BoundReport::new(
        "parity_combined",
        n,
        Some(k),
        Direction::Upper,
        lhs,
        rhs,
    ))
}
