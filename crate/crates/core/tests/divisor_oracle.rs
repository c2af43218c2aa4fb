use mspace_core::modes::{composition_count, divisor_infimum, is_prime};

const LIMIT: usize = 1_000_000;

/// min over factor pairs k·l = n of max(k, l), from a divisor sieve.
fn sieve_infimum() -> Vec<u64> {
    let mut best = vec![u64::MAX; LIMIT + 1];
    for k in 1..=LIMIT {
        for n in (k..=LIMIT).step_by(k) {
            let l = n / k;
            best[n] = best[n].min(k.max(l) as u64);
        }
    }
    best
}

#[test]
fn infimum_matches_full_enumeration() {
    let oracle = sieve_infimum();
    for (n, &expected) in oracle.iter().enumerate().skip(1) {
        let p = divisor_infimum(n as u64).unwrap();
        assert_eq!(p, expected, "n={n}");
        assert!(p * p >= n as u64 && n as u64 / p <= p);
    }
}

#[test]
fn primes_are_their_own_infimum() {
    for n in 2..50_000u64 {
        if is_prime(n) {
            assert_eq!(divisor_infimum(n).unwrap(), n);
        }
    }
}

fn compositions(n: u64, m: u64) -> Vec<Vec<u64>> {
    if m == 1 {
        return vec![vec![n]];
    }
    (0..=n)
        .flat_map(|first| {
            compositions(n - first, m - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

#[test]
fn counts_match_enumerated_compositions() {
    for n in 1..=6 {
        for m in 2..=3 {
            let all = compositions(n, m);
            assert!(all.iter().all(|c| c.iter().sum::<u64>() == n));
            assert_eq!(composition_count(n, m).unwrap(), all.len() as u128);
        }
    }
}
