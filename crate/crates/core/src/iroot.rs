//! Exact integer roots.

/// `base^exp`, or `None` on overflow past `u128`.
pub fn checked_pow(base: u64, exp: u32) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base as u128)?;
    }
    Some(acc)
}

/// `floor(x^(1/e))` for `e >= 1`, computed with integer Newton iteration.
///
/// The result `r` always satisfies `r^e <= x < (r + 1)^e`.
pub fn iroot(x: u64, e: u32) -> u64 {
    assert!(e >= 1, "root exponent must be positive");
    if e == 1 || x < 2 {
        return x;
    }
    if e >= 64 {
        return 1;
    }
    // Start above the root: 2^ceil(bits/e) > x^(1/e).
    let bits = 64 - x.leading_zeros();
    let mut r: u128 = 1u128 << bits.div_ceil(e);
    let x128 = x as u128;
    let e128 = e as u128;
    loop {
        // r_next = ((e-1) r + x / r^(e-1)) / e, decreasing until it reaches the floor root.
        let pow = checked_pow(r as u64, e - 1).unwrap_or(u128::MAX);
        let next = ((e128 - 1) * r + x128 / pow) / e128;
        if next >= r {
            break;
        }
        r = next;
    }
    let mut r = r as u64;
    while checked_pow(r, e).is_none_or(|p| p > x128) {
        r -= 1;
    }
    while checked_pow(r + 1, e).is_some_and(|p| p <= x128) {
        r += 1;
    }
    r
}

/// Whether `x` is a perfect `e`-th power of a positive integer.
pub fn is_perfect_power(x: u64, e: u32) -> bool {
    x >= 1 && checked_pow(iroot(x, e), e) == Some(x as u128)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_cases() {
        assert_eq!(iroot(27, 3), 3);
        assert_eq!(iroot(26, 3), 2);
        assert_eq!(iroot(1000, 3), 10);
        assert_eq!(iroot(999, 3), 9);
        assert_eq!(iroot(0, 5), 0);
        assert_eq!(iroot(1, 5), 1);
        assert_eq!(iroot(u64::MAX, 2), 4_294_967_295);
        assert_eq!(iroot(u64::MAX, 63), 2);
        assert_eq!(iroot(u64::MAX, 64), 1);
        assert!(is_perfect_power(27, 3));
        assert!(!is_perfect_power(28, 3));
        assert!(!is_perfect_power(0, 2));
    }

    #[test]
    fn near_perfect_powers() {
        for e in 2..=6u32 {
            for b in 2..2000u64 {
                let Some(p) = checked_pow(b, e) else { break };
                if p > u64::MAX as u128 {
                    break;
                }
                let p = p as u64;
                assert_eq!(iroot(p, e), b);
                assert_eq!(iroot(p - 1, e), b - 1);
                if p < u64::MAX {
                    assert_eq!(iroot(p + 1, e), b);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn root_brackets_input(x in any::<u64>(), e in 1u32..12) {
            let r = iroot(x, e);
            prop_assert!(checked_pow(r, e).unwrap() <= x as u128);
            prop_assert!(checked_pow(r + 1, e).is_none_or(|p| p > x as u128));
        }
    }
}
