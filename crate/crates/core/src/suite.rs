//! Whole-expansion verification. [`Analysis`] holds every table for one
//! `√d`; the identity suite and bound families run over it, and
//! [`random_properties`] covers random digit strings.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::{
    check_basic_lower_sum, check_basic_upper, check_first_upper, check_pointwise_lower,
    check_refined_lower, interval_upper_bound, BoundReport, IntervalPartition,
};
use crate::digits::{DigitProfile, DigitSequence};
use crate::error::Result;
use crate::parity::{
    check_even_r_bound, check_even_t_sum, check_odd_r_bound, check_parity_combined, parity_counts,
    ProgressionSums,
};
use crate::spectrum::{
    normalization_deficit, pair_counts_naive, pair_counts_packed, r_from_digits, r_naive,
    r_sequence, Convolution, RSequence,
};
use crate::tailfn::{t_closed_form_all, t_sequence, to_machine_values, TSequence};

pub const DEFAULT_SEED: u64 = 0x5eed_d161;
pub const INTERVAL_COUNTS: [u64; 5] = [1, 2, 4, 8, 16];

/// All tables for one expansion with a single integer bit.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub digits: DigitSequence,
    pub profile: DigitProfile,
    pub r: RSequence,
    pub t: TSequence,
    pub sums: ProgressionSums,
}

impl Analysis {
    pub fn new(digits: DigitSequence, method: Convolution) -> Result<Self> {
        let n = digits.frac_bits();
        let profile = DigitProfile::from_sequence(&digits)?;
        let r = r_sequence(&digits, n, method)?;
        let t = t_sequence(&r, digits.radicand(), n)?;
        let sums = ProgressionSums::new(&r, &t);
        Ok(Analysis {
            digits,
            profile,
            r,
            t,
            sums,
        })
    }

    pub fn frac_bits(&self) -> u64 {
        self.digits.frac_bits()
    }

    /// Largest `N` for the odd/even checks, which read up to index `2N + 1`.
    pub fn max_parity_n(&self) -> u64 {
        self.frac_bits().saturating_sub(1) / 2
    }

    /// The five first-order bound families plus the interval bounds for
    /// each `m` in `interval_counts` with `m ≤ N`.
    pub fn inequality_reports(&self, n: u64, interval_counts: &[u64]) -> Result<Vec<BoundReport>> {
        let mut out = Vec::with_capacity(5 + interval_counts.len());
        if n >= 1 {
            out.push(check_pointwise_lower(&self.t, &self.r, n)?);
            out.push(check_basic_lower_sum(&self.t, &self.r, &self.profile, n)?);
        }
        if n >= 2 {
            out.push(check_first_upper(&self.t, &self.r, n)?);
        }
        out.push(check_basic_upper(&self.r, &self.profile, n)?);
        if n >= 1 {
            out.push(check_refined_lower(&self.t, &self.profile, n)?);
        }
        out.extend(self.interval_reports(n, interval_counts)?);
        Ok(out)
    }

    pub fn interval_reports(&self, n: u64, interval_counts: &[u64]) -> Result<Vec<BoundReport>> {
        interval_counts
            .iter()
            .filter(|&&m| m >= 1 && m <= n)
            .map(|&m| {
                let p = IntervalPartition::uniform(n, m)?;
                interval_upper_bound(&self.r, &self.profile, &p)
            })
            .collect()
    }

    pub fn parity_reports(&self, n: u64) -> Result<Vec<BoundReport>> {
        let pc = parity_counts(&self.profile, n)?;
        let mut out = vec![
            check_even_r_bound(&self.sums, &pc)?,
            check_odd_r_bound(&self.sums, &pc)?,
        ];
        if n >= 2 {
            out.push(check_even_t_sum(&self.sums, &self.r, n)?);
            out.push(check_parity_combined(&self.profile, &pc)?);
        }
        Ok(out)
    }
}

/// Outcome of one exact identity checked at many indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub checked: u64,
    pub failures: u64,
    pub first_failure: Option<u64>,
}

impl IdentityCheck {
    fn new(name: &'static str) -> Self {
        IdentityCheck {
            name,
            checked: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, at: u64, ok: bool) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            self.first_failure.get_or_insert(at);
        }
    }

    pub fn pass(&self) -> bool {
        self.failures == 0 && self.checked > 0
    }
}

impl std::fmt::Display for IdentityCheck {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{:<32} checked {:>9}  failures {:>6}  {}",
            self.name,
            self.checked,
            self.failures,
            if self.pass() { "PASS" } else { "FAIL" }
        )?;
        if let Some(at) = self.first_failure {
            write!(f, " (first at {at})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct IdentityLimits {
    /// Prefix on which the naive convolution is recomputed and compared.
    pub naive_cross_check: u64,
    /// Prefix on which the quadratic closed-form evaluation of `T` runs.
    pub closed_form: u64,
}

impl Default for IdentityLimits {
    fn default() -> Self {
        IdentityLimits {
            naive_cross_check: 1 << 13,
            closed_form: 100_000,
        }
    }
}

pub fn identity_suite(a: &Analysis, limits: IdentityLimits) -> Result<Vec<IdentityCheck>> {
    let n = a.frac_bits();
    let digits = a.profile.digits();
    let rv = a.r.values();
    let tv = a.t.values();

    let mut invariant = IdentityCheck::new("digits_floor_sqrt");
    invariant.record(n, a.digits.satisfies_invariant());

    let mut trivial = IdentityCheck::new("r_at_most_n_plus_1");
    let mut parity_law = IdentityCheck::new("r_odd_iff_even_index_one");
    for (i, &v) in rv.iter().enumerate() {
        trivial.record(i as u64, v <= i as u64 + 1);
        let expect_odd = i % 2 == 0 && digits[i / 2] == 1;
        parity_law.record(i as u64, (v % 2 == 1) == expect_odd);
    }

    let mut recurrence = IdentityCheck::new("t_recurrence");
    let mut positive = IdentityCheck::new("t_positive");
    let mut t_parity = IdentityCheck::new("t_parity_matches_r");
    let mut two = IdentityCheck::new("t_at_least_2_off_exceptions");
    for big_r in 0..tv.len() {
        positive.record(big_r as u64, tv[big_r] >= 1);
        let exceptional = big_r % 2 == 0 && digits[big_r / 2] == 1;
        if !exceptional {
            two.record(big_r as u64, tv[big_r] >= 2);
        }
        if big_r >= 1 {
            recurrence.record(big_r as u64, 2 * tv[big_r - 1] == tv[big_r] + rv[big_r]);
            t_parity.record(big_r as u64, tv[big_r] % 2 == rv[big_r] % 2);
        }
    }

    let mut closed = IdentityCheck::new("t_closed_form_matches");
    let cf_n = n.min(limits.closed_form);
    let cf = to_machine_values(&t_closed_form_all(&a.r, a.digits.radicand(), cf_n)?)?;
    for (big_r, (x, y)) in cf.iter().zip(tv).enumerate() {
        closed.record(big_r as u64, x == y);
    }

    let mut normalization = IdentityCheck::new("normalization_deficit");
    {
        use num_bigint::BigInt;
        use num_rational::BigRational;
        use num_traits::{One, Zero};
        // The deficit at N is T(N)/2^N; spot-check the explicit bound at a
        // spread of points rather than all of them (each costs O(N²) bits).
        let step = (cf_n / 16).max(1);
        for m in (0..=cf_n).step_by(step as usize).chain([cf_n]) {
            let deficit = normalization_deficit(&a.r, a.digits.radicand(), m)?;
            let bound = BigRational::new(BigInt::from(m + 3), BigInt::one() << m);
            normalization.record(m, deficit >= BigRational::zero() && deficit <= bound);
        }
    }

    let mut conv = IdentityCheck::new("r_packed_matches_naive");
    let cc = n.min(limits.naive_cross_check);
    let naive = r_naive(&a.digits, cc)?;
    for (i, (x, y)) in naive.values().iter().zip(rv).enumerate() {
        conv.record(i as u64, x == y);
    }

    let mut pc_total = IdentityCheck::new("parity_counts_total");
    let mut pc_quad = IdentityCheck::new("parity_quadratic_form");
    for m in 0..=a.max_parity_n() {
        if 2 * m + 1 > n {
            break;
        }
        let pc = parity_counts(&a.profile, m)?;
        pc_total.record(m, pc.total() == a.profile.nz_star(2 * m + 1)?);
        pc_quad.record(m, pc.quadratic_form_identity_holds());
    }

    Ok(vec![
        invariant,
        trivial,
        parity_law,
        recurrence,
        positive,
        t_parity,
        two,
        closed,
        normalization,
        conv,
        pc_total,
        pc_quad,
    ])
}

fn random_digits(rng: &mut ChaCha8Rng, max_len: usize) -> Vec<u8> {
    let len = rng.gen_range(1..=max_len);
    // Vary the density so sparse and dense strings both appear.
    let p: f64 = rng.gen_range(0.05..0.95);
    (0..len).map(|_| u8::from(rng.gen_bool(p))).collect()
}

fn random_partition(rng: &mut ChaCha8Rng, n: u64, max_m: u64) -> Result<IntervalPartition> {
    let m = rng.gen_range(1..=max_m.min(n));
    let mut inner: Vec<u64> = (0..m - 1).map(|_| rng.gen_range(1..n)).collect();
    inner.sort_unstable();
    inner.dedup();
    let mut bps = vec![0];
    bps.extend(inner);
    bps.push(n);
    IntervalPartition::new(bps)
}

/// Seeded checks of the purely combinatorial statements on random 0/1
/// strings. Partitions have at most 8 intervals, uniform or random.
pub fn random_properties(seed: u64, cases: usize, max_len: usize) -> Result<Vec<IdentityCheck>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut conv = IdentityCheck::new("random_packed_matches_naive");
    let mut law = IdentityCheck::new("random_r_parity_law");
    let mut interval = IdentityCheck::new("random_interval_soundness");
    let mut parity = IdentityCheck::new("random_parity_r_bounds");

    for case in 0..cases as u64 {
        let digits = random_digits(&mut rng, max_len);
        let naive = pair_counts_naive(&digits);
        conv.record(case, naive == pair_counts_packed(&digits));
        law.record(
            case,
            naive
                .iter()
                .enumerate()
                .all(|(i, &v)| v % 2 == u64::from(i % 2 == 0 && digits[i / 2] == 1)),
        );

        let r = r_from_digits(&digits, Convolution::Packed)?;
        let profile = DigitProfile::new(&digits);
        let n = digits.len() as u64 - 1;
        if n >= 1 {
            let mut ok = true;
            for m in 1..=8u64.min(n) {
                let p = IntervalPartition::uniform(n, m)?;
                ok &= interval_upper_bound(&r, &profile, &p)?.pass;
            }
            for _ in 0..8 {
                let p = random_partition(&mut rng, n, 8)?;
                ok &= interval_upper_bound(&r, &profile, &p)?.pass;
            }
            interval.record(case, ok);
        }

        if digits.len() >= 2 {
            let sums = ProgressionSums::pairs_only(&r);
            let mut ok = true;
            for m in 0..=(n - 1) / 2 {
                let pc = parity_counts(&profile, m)?;
                ok &= check_even_r_bound(&sums, &pc)?.pass && check_odd_r_bound(&sums, &pc)?.pass;
            }
            parity.record(case, ok);
        }
    }
    Ok(vec![conv, law, interval, parity])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digits::expand_sqrt;

    #[test]
    fn identities_hold_for_small_expansions() {
        for d in [2u64, 3] {
            let a = Analysis::new(expand_sqrt(d, 3000).unwrap(), Convolution::Auto).unwrap();
            for check in identity_suite(&a, IdentityLimits::default()).unwrap() {
                assert!(check.pass(), "d={d}: {check}");
            }
        }
    }

    #[test]
    fn bound_families_pass() {
        let a = Analysis::new(expand_sqrt(2, 500).unwrap(), Convolution::Naive).unwrap();
        for n in 0..=500 {
            for rep in a.inequality_reports(n, &INTERVAL_COUNTS).unwrap() {
                assert!(rep.pass, "{rep}");
            }
        }
        for n in 0..=a.max_parity_n() {
            for rep in a.parity_reports(n).unwrap() {
                assert!(rep.pass, "{rep}");
            }
        }
        assert!(a.parity_reports(a.max_parity_n() + 1).is_err());
    }

    #[test]
    fn report_counts() {
        let a = Analysis::new(expand_sqrt(2, 100).unwrap(), Convolution::Naive).unwrap();
        assert_eq!(a.inequality_reports(0, &INTERVAL_COUNTS).unwrap().len(), 1);
        assert_eq!(a.inequality_reports(1, &INTERVAL_COUNTS).unwrap().len(), 5);
        assert_eq!(
            a.inequality_reports(16, &INTERVAL_COUNTS).unwrap().len(),
            10
        );
    }

    #[test]
    fn random_properties_are_seeded() {
        let first = random_properties(7, 20, 300).unwrap();
        let second = random_properties(7, 20, 300).unwrap();
        assert_eq!(first, second);
        assert!(first.iter().all(IdentityCheck::pass));
    }
}
