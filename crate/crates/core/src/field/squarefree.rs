//! Square-free decomposition of integers, used to normalize tower generators.

use super::{FieldError, FieldResult};
use num::bigint::BigInt;
use num::traits::{One, Signed, Zero};

/// Trial-division bound; square factors p^2 with p <= BOUND are extracted.
const BOUND: u64 = 100_000;

/// Exact square root of a non-negative integer, if it is a perfect square.
pub fn perfect_square_root(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    if n.is_zero() {
        return Some(BigInt::zero());
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// Write `n = s^2 * f` with `f` square-free (sign carried by `f`, `s > 0`).
///
/// Complete for |n| whose square factors all have a prime side below the
/// trial-division bound; the remaining cofactor is additionally checked for
/// being a perfect square. Inputs beyond that range are rejected rather than
/// silently mis-normalized.
pub fn square_free_decompose(n: &BigInt) -> FieldResult<(BigInt, BigInt)> {
    if n.is_zero() {
        return Err(FieldError::InvalidDescriptor(
            "square-free part of 0 is undefined".into(),
        ));
    }
    let negative = n.is_negative();
    let mut m = n.abs();
    let mut s = BigInt::one();
    let mut f = BigInt::one();

    let divide_out = |m: &mut BigInt, p: u64, s: &mut BigInt, f: &mut BigInt| {
        let pb = BigInt::from(p);
        let mut count = 0u32;
        while (&*m % &pb).is_zero() {
            *m /= &pb;
            count += 1;
        }
        if count > 0 {
            for _ in 0..(count / 2) {
                *s *= &pb;
            }
            if count % 2 == 1 {
                *f *= &pb;
            }
        }
    };

    divide_out(&mut m, 2, &mut s, &mut f);
    let mut p = 3u64;
    while p <= BOUND {
        if BigInt::from(p).pow(2) > m {
            break;
        }
        divide_out(&mut m, p, &mut s, &mut f);
        p += 2;
    }
    if !m.is_one() {
        if let Some(r) = perfect_square_root(&m) {
            s *= r;
        } else if m < BigInt::from(BOUND).pow(2) {
            // no prime factor below BOUND and below BOUND^2: m is prime
            f *= m;
        } else {
            // m has no small factors; it may still hide a large square
            let r = m.sqrt();
            if &r * &r == m {
                s *= r;
            } else {
                // m square-free unless it contains p^2 with p > BOUND,
                // which would make m > BOUND^2; we cannot rule that out
                // here, so fail loudly instead of guessing.
                return Err(FieldError::InvalidDescriptor(format!(
                    "cannot certify square-free part of {n}: unfactored cofactor {m}"
                )));
            }
        }
    }
    if negative {
        f = -f;
    }
    Ok((s, f))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decomposes_small_integers() {
        let cases: [(i64, i64, i64); 6] = [
            (8, 2, 2),
            (1, 1, 1),
            (-4, 2, -1),
            (12, 2, 3),
            (49, 7, 1),
            (-18, 3, -2),
        ];
        for (n, s, f) in cases {
            let (qs, qf) = square_free_decompose(&BigInt::from(n)).unwrap();
            assert_eq!((qs, qf), (BigInt::from(s), BigInt::from(f)), "n = {n}");
        }
    }

    #[test]
    fn perfect_squares_detected() {
        assert_eq!(
            perfect_square_root(&BigInt::from(144)),
            Some(BigInt::from(12))
        );
        assert_eq!(perfect_square_root(&BigInt::from(145)), None);
        assert_eq!(perfect_square_root(&BigInt::from(-4)), None);
    }
}
