//! Small numeric helpers shared across modules.

/// Iterated base-2 logarithm: the number of times `n ↦ ⌊log₂ n⌋` must be
/// applied before the value drops to 1 or below.
///
/// `log_star(1) = 0`, `log_star(2) = 1`, `log_star(16) = 3`,
/// `log_star(2^16) = log_star(2^20) = 4`.
pub fn log_star(mut n: u64) -> u32 {
    let mut count = 0;
    while n > 1 {
        n = floor_log2(n);
        count += 1;
    }
    count
}

/// `⌊log₂ n⌋` for `n ≥ 1`.
pub fn floor_log2(n: u64) -> u64 {
    assert!(n >= 1);
    63 - u64::from(n.leading_zeros())
}

/// `⌈log₂ n⌉` for `n ≥ 1`: the number of bits needed to index `n` values.
pub fn ceil_log2(n: u64) -> usize {
    assert!(n >= 1);
    if n == 1 {
        0
    } else {
        64 - (n - 1).leading_zeros() as usize
    }
}

/// `⌈3·log₂ n⌉` for `n ≥ 1`, computed exactly as `⌈log₂ n³⌉`.
pub fn ceil_3_log2(n: u64) -> usize {
    assert!(n >= 1);
    let cube = u128::from(n) * u128::from(n) * u128::from(n);
    if cube == 1 {
        0
    } else {
        128 - (cube - 1).leading_zeros() as usize
    }
}

/// All primes up to and including `limit`, by sieve.
pub fn primes_up_to(limit: usize) -> Vec<u64> {
    let mut sieve = vec![true; limit + 1];
    let mut out = Vec::new();
    for p in 2..=limit {
        if sieve[p] {
            out.push(p as u64);
            let mut q = p * p;
            while q <= limit {
                sieve[q] = false;
                q += p;
            }
        }
    }
    out
}

/// Wilson score interval for a binomial proportion.
///
/// Returns `(low, high)` for `successes` out of `trials` at normal quantile
/// `z` (1.96 for 95%).
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    assert!(trials > 0);
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = p + z2 / (2.0 * n);
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    (
        ((center - half) / denom).max(0.0),
        ((center + half) / denom).min(1.0),
    )
}
