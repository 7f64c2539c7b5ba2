//! Sieves for primes and the divisor function.

use crate::error::{invalid, Result};

/// Default upper limit for sieving.
pub const DEFAULT_SIEVE_LIMIT: u64 = 10_000_000;

/// All primes `p <= limit` by the sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

/// The first `count` primes, sieving no further than `limit`.
pub fn first_primes(count: usize, limit: u64) -> Result<Vec<u64>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    // p_k < k (ln k + ln ln k) for k >= 6
    let k = count as f64;
    let estimate = if count < 6 {
        13
    } else {
        (k * (k.ln() + k.ln().ln())).ceil() as u64 + 1
    };
    if estimate > limit {
        return Err(invalid(format!(
            "{count} primes need a sieve beyond the limit {limit}"
        )));
    }
    let mut primes = primes_up_to(estimate);
    primes.truncate(count);
    Ok(primes)
}

/// d(n) for 0 <= n <= limit (d(0) is reported as 0).
pub fn divisor_counts(limit: u64) -> Vec<u32> {
    let n = limit as usize;
    let mut d = vec![0u32; n + 1];
    for i in 1..=n {
        let mut j = i;
        while j <= n {
            d[j] += 1;
            j += i;
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(primes_up_to(1).is_empty());
        assert_eq!(first_primes(3, 100).unwrap(), vec![2, 3, 5]);
        assert_eq!(primes_up_to(100_000).len(), 9592);
    }

    #[test]
    fn first_primes_respects_limit() {
        assert_eq!(first_primes(1000, DEFAULT_SIEVE_LIMIT).unwrap()[999], 7919);
        assert!(first_primes(1000, 100).is_err());
    }

    #[test]
    fn divisor_function_matches_trial_division() {
        let d = divisor_counts(500);
        for n in 1..=500u32 {
            let brute = (1..=n).filter(|k| n % k == 0).count() as u32;
            assert_eq!(d[n as usize], brute, "n = {n}");
        }
    }
}
