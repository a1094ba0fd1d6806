//! The Cantor pairing on arbitrary-precision naturals.
//!
//! Digging folds a pair of copy indices into one; its inverse unfolds
//! them again. Both directions must be exact for tokens to find their
//! way back out of nested exponentials.

use crate::token::Nat;

/// `pair(n, m) = n + (n + m)(n + m + 1) / 2`.
pub fn pair(n: &Nat, m: &Nat) -> Nat {
    let s = n + m;
    n + &s * (&s + 1u32) / 2u32
}

/// Inverse of [`pair`]: `unpair(pair(n, m)) == (n, m)`.
pub fn unpair(k: &Nat) -> (Nat, Nat) {
    // Index of the diagonal containing k.
    let w = ((k * 8u32 + 1u32).sqrt() - 1u32) / 2u32;
    let base = &w * (&w + 1u32) / 2u32;
    let n = k - base;
    let m = &w - &n;
    (n, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_values() {
        let p = |n: u32, m: u32| pair(&Nat::from(n), &Nat::from(m));
        assert_eq!(p(0, 0), Nat::from(0u32));
        assert_eq!(p(0, 1), Nat::from(1u32));
        assert_eq!(p(1, 0), Nat::from(2u32));
        assert_eq!(p(0, 2), Nat::from(3u32));
        assert_eq!(p(1, 1), Nat::from(4u32));
        assert_eq!(p(2, 0), Nat::from(5u32));
    }

    #[test]
    fn unpair_covers_an_initial_segment() {
        for k in 0u32..200 {
            let k = Nat::from(k);
            let (n, m) = unpair(&k);
            assert_eq!(pair(&n, &m), k);
        }
    }

    proptest! {
        #[test]
        fn round_trip(n in 0u128..u128::MAX / 4, m in 0u128..u128::MAX / 4) {
            let (n, m) = (Nat::from(n), Nat::from(m));
            let (n2, m2) = unpair(&pair(&n, &m));
            prop_assert_eq!(n, n2);
            prop_assert_eq!(m, m2);
        }

        #[test]
        fn round_trip_wide(bits_n in 0usize..400, bits_m in 0usize..400, seed in any::<u64>()) {
            // Indices far beyond machine-word width must survive the trip.
            let n = Nat::from(seed) << bits_n;
            let m = (Nat::from(seed) << bits_m) + 1u32;
            let (n2, m2) = unpair(&pair(&n, &m));
            prop_assert_eq!(n, n2);
            prop_assert_eq!(m, m2);
        }
    }
}
