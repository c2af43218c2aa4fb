//! Counting bounds for mode entanglement of n indistinguishable particles in
//! m modes.
//!
//! The outcome space is spanned by compositions n = n_1 + … + n_m (ordered,
//! zeros allowed), so it has N = binom(n+m−1, m−1) elements. Any split of it
//! into parties of sizes k·l = N gives useful entanglement at most
//! log₂ min(k, l); optimizing over splits yields log₂(N/p) with p the
//! smallest divisor of N not below √N.

use num_integer::Integer;

use crate::error::{Error, Result};

/// Composition count binom(n+m−1, m−1), computed exactly.
pub fn composition_count(n: u64, m: u64) -> Result<u128> {
    if n < 1 {
        return Err(Error::InvalidParameter(format!("particle count must be at least 1, got {n}")));
    }
    if m < 2 {
        return Err(Error::InvalidParameter(format!("mode count must be at least 2, got {m}")));
    }
    let top = (n as u128).checked_add(m as u128 - 1).ok_or(Error::Overflow("composition count"))?;
    binomial(top, (m - 1) as u128)
}

/// binom(top, k) by the multiplicative formula, dividing out common factors
/// before each multiply so intermediates stay as small as the result allows.
fn binomial(top: u128, k: u128) -> Result<u128> {
    let k = k.min(top - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        // acc · (top − k + i) / i is an integer at every step
        let mut num = top - k + i;
        let mut den = i;
        let g = num.gcd(&den);
        num /= g;
        den /= g;
        let g = acc.gcd(&den);
        acc /= g;
        den /= g;
        debug_assert_eq!(den, 1);
        acc = acc.checked_mul(num).ok_or(Error::Overflow("composition count"))?;
    }
    Ok(acc)
}

/// Smallest divisor of `n` that is at least √n, i.e. the smallest possible
/// max(k, l) over factorizations k·l = n.
pub fn divisor_infimum(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidParameter("divisor infimum of 0".into()));
    }
    let root = n.isqrt();
    let small = (1..=root).rev().find(|&d| n.is_multiple_of(d)).unwrap_or(1);
    Ok(n / small)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin; the first twelve prime bases are exact for
/// every 64-bit input.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSystem {
    pub n: u64,
    pub m: u64,
    pub compositions: u64,
    pub prime: bool,
    pub p: u64,
    /// log₂(N/p).
    pub bound_bits: f64,
    /// log₂(N/2).
    pub weak_bound_bits: f64,
}

impl ModeSystem {
    /// For prime N the strong bound is 0 while the weak one stays positive
    /// (except N = 2), so the weak form is not tight there.
    pub fn weak_bound_loose_for_prime(&self) -> bool {
        self.prime && self.weak_bound_bits > 0.0
    }
}

pub fn useful_entanglement_bound(n: u64, m: u64) -> Result<ModeSystem> {
    let count = composition_count(n, m)?;
    let compositions = u64::try_from(count).map_err(|_| Error::Overflow("composition count exceeds 64 bits"))?;
    let p = divisor_infimum(compositions)?;
    let partner = compositions / p;
    // N/p is an integer, so the log is exact for prime N
    let bound_bits = (partner as f64).log2();
    let weak_bound_bits = (compositions as f64).log2() - 1.0;
    Ok(ModeSystem { n, m, compositions, prime: is_prime(compositions), p, bound_bits, weak_bound_bits })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn enumerate(n: u64, m: u64) -> u64 {
        if m == 1 {
            return 1;
        }
        (0..=n).map(|first| enumerate(n - first, m - 1)).sum()
    }

    fn trial_prime(n: u64) -> bool {
        n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn counts() {
        assert_eq!(composition_count(1, 2).unwrap(), 2);
        assert_eq!(composition_count(2, 2).unwrap(), 3);
        assert_eq!(composition_count(3, 3).unwrap(), 10);
        for n in 1..=8 {
            assert_eq!(composition_count(n, 2).unwrap(), n as u128 + 1);
            for m in 2..=5 {
                assert_eq!(composition_count(n, m).unwrap(), enumerate(n, m) as u128, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn large_count_is_exact() {
        // binom(60, 30)
        assert_eq!(composition_count(30, 31).unwrap(), 118_264_581_564_861_424);
        assert!(matches!(composition_count(200, 100), Err(Error::Overflow(_))));
    }

    #[test]
    fn invalid_arguments() {
        assert!(composition_count(0, 2).is_err());
        assert!(composition_count(1, 1).is_err());
        assert!(divisor_infimum(0).is_err());
    }

    #[test]
    fn infimum_examples() {
        assert_eq!(divisor_infimum(1).unwrap(), 1);
        assert_eq!(divisor_infimum(2).unwrap(), 2);
        assert_eq!(divisor_infimum(12).unwrap(), 4);
        assert_eq!(divisor_infimum(16).unwrap(), 4);
        assert_eq!(divisor_infimum(97).unwrap(), 97);
    }

    #[test]
    fn primality_matches_trial_division() {
        assert!(is_prime(2));
        assert!(!is_prime(1));
        assert!(!is_prime(10));
        for n in 0..20_000 {
            assert_eq!(is_prime(n), trial_prime(n), "n={n}");
        }
        assert!(is_prime(18_446_744_073_709_551_557));
        // Carmichael number, then a base-2 strong pseudoprime
        assert!(!is_prime(561));
        assert!(!is_prime(2047));
    }

    #[test]
    fn bound_examples() {
        let s = useful_entanglement_bound(1, 2).unwrap();
        assert_eq!((s.compositions, s.p, s.bound_bits), (2, 2, 0.0));
        let s = useful_entanglement_bound(2, 2).unwrap();
        assert!(s.prime);
        assert_eq!(s.bound_bits, 0.0);
        assert!(s.weak_bound_loose_for_prime());
        assert!(!useful_entanglement_bound(1, 2).unwrap().weak_bound_loose_for_prime());
        let s = useful_entanglement_bound(3, 2).unwrap();
        assert_eq!((s.compositions, s.p), (4, 2));
        assert!((s.bound_bits - 1.0).abs() < 1e-15);
        assert!((s.weak_bound_bits - 1.0).abs() < 1e-15);
    }

    #[test]
    fn perfect_squares_split_evenly() {
        for r in 2..200u64 {
            let p = divisor_infimum(r * r).unwrap();
            assert_eq!(p, r);
        }
    }
}
