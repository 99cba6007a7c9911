//! Integer square roots of arbitrary-precision integers.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// Calculate the integer square root `⌊√n⌋`.
///
/// Recursive Newton iteration: the root of the top half of `n` seeds a single
/// Newton step at full precision, so the working precision doubles at each
/// level and the cost is dominated by the last division.
pub fn isqrt(n: &BigUint) -> BigUint {
    if n.bits() <= 128 {
        let small = n.to_u128().expect("fits in 128 bits");
        return BigUint::from(small.isqrt());
    }

    // n = hi·4^k + lo with hi keeping roughly half of the bits.
    let k = (n.bits() - 1) / 4;
    let hi = n >> (2 * k);
    let seed = isqrt(&hi) << k;

    // One Newton step from below lands at or above ⌊√n⌋ (AM-GM), within a
    // small constant of it.
    let mut x: BigUint = (&seed + n / &seed) >> 1u32;
    while &x * &x > *n {
        x -= 1u32;
    }
    loop {
        let next = &x + 1u32;
        if &next * &next <= *n {
            x = next;
        } else {
            return x;
        }
    }
}

/// Bit-by-bit restoring square root.
///
/// Quadratic in the bit length. Kept as an independent reference for
/// [`isqrt`]: it shares no arithmetic path with the Newton iteration.
pub fn isqrt_restoring(n: &BigUint) -> BigUint {
    if n.is_zero() {
        return BigUint::zero();
    }
    let mut remainder = n.clone();
    let mut root = BigUint::zero();
    // Highest power of four not exceeding n.
    let mut bit = BigUint::one() << (((n.bits() - 1) / 2) * 2);

    while !bit.is_zero() {
        let trial = &root + &bit;
        if remainder >= trial {
            remainder -= &trial;
            root = (root >> 1u32) + &bit;
        } else {
            root >>= 1u32;
        }
        bit >>= 2u32;
    }
    root
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn spec_examples() {
        assert_eq!(isqrt(&big(0)), big(0));
        assert_eq!(isqrt(&big(16)), big(4));
        assert_eq!(isqrt(&big(2048)), big(45));
        assert_eq!(isqrt_restoring(&big(2048)), big(45));
    }

    #[test]
    fn small_values_match_restoring() {
        for n in 0..5000u64 {
            assert_eq!(isqrt(&big(n)), isqrt_restoring(&big(n)), "n = {n}");
        }
    }

    #[test]
    fn perfect_squares_and_neighbours() {
        for shift in [60u32, 64, 100, 128, 129, 200, 777] {
            let r = (BigUint::one() << shift) + 12345u32;
            let sq = &r * &r;
            assert_eq!(isqrt(&sq), r);
            assert_eq!(isqrt(&(&sq - 1u32)), &r - 1u32);
            assert_eq!(isqrt(&(&sq + 1u32)), r);
        }
    }

    proptest! {
        #[test]
        fn floor_property(bytes in proptest::collection::vec(any::<u8>(), 0..96)) {
            let n = BigUint::from_bytes_le(&bytes);
            let r = isqrt(&n);
            prop_assert!(&r * &r <= n);
            let r1 = &r + 1u32;
            prop_assert!(&r1 * &r1 > n);
            prop_assert_eq!(r, isqrt_restoring(&n));
        }
    }
}
