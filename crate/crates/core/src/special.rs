//! Small combinatorial helpers shared by the numerical modules.

/// `n!` as a float. Exact for `n <= 22`, correctly rounded beyond that up to overflow at 171.
pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Natural log of `n!`, accumulated as a sum of logs so that large orders never overflow.
pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Binomial coefficient `C(n, k)` computed multiplicatively; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round_if_small()
}

trait RoundIfSmall {
    fn round_if_small(self) -> Self;
}

impl RoundIfSmall for f64 {
    // Multiplicative binomials are exact up to roundoff; snap them to integers while that is lossless.
    fn round_if_small(self) -> Self {
        if self < 9.0e15 {
            self.round()
        } else {
            self
        }
    }
}

/// `sqrt(a! / b!)`, routed through logs once either argument passes 20.
pub fn sqrt_factorial_ratio(a: usize, b: usize) -> f64 {
    if a.max(b) <= 20 {
        (factorial(a) / factorial(b)).sqrt()
    } else {
        (0.5 * (ln_factorial(a) - ln_factorial(b))).exp()
    }
}
