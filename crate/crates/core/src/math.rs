//! Small exact-arithmetic helpers.

#[allow(unused_imports)]
use num_traits::Float;

/// Binomial coefficient as an exact integer; `None` on overflow.
pub fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) after the multiply.
        acc = acc.checked_mul(u128::from(n - i))? / u128::from(i + 1);
    }
    Some(acc)
}

/// Binomial coefficient as `f64` (exact for all `n <= 64`).
pub fn binomial(n: u64, k: u64) -> f64 {
    match binomial_u128(n, k) {
        Some(v) => v as f64,
        None => ln_binomial(n, k).exp(),
    }
}

/// `ln n!` by direct summation; adequate for the atom counts used here.
pub fn ln_factorial(n: u64) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

pub fn ln_binomial(n: u64, k: u64) -> f64 {
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// Number of symmetric states of `n` atoms over four modes, `(n+1)(n+2)(n+3)/6`.
pub(crate) fn tetrahedral(n: usize) -> usize {
    (n + 1) * (n + 2) * (n + 3) / 6
}
