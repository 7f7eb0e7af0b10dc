//! Euler–Maclaurin summation for `ζ(s)`.

use num_complex::Complex64;
use num_traits::Float;

use crate::special::BERNOULLI_RATIO;

/// Number of leading terms summed directly for `ζ(σ + it)`.
///
/// With this choice the ratio of consecutive correction terms stays below
/// roughly 1/4 for the depths used here.
pub fn cutoff(t: f64) -> u64 {
    ((t.abs() + 43.0) / core::f64::consts::PI).ceil() as u64
}

/// `Σ_{n ≥ m} n^{-s}` by Euler–Maclaurin, `m ≥ 1`, `s ≠ 1`.
pub fn tail(s: Complex64, m: f64, depth: usize) -> Complex64 {
    let ln_m = m.ln();
    let m_pow = (-s * ln_m).exp(); // m^{-s}
    let mut total = m_pow * m / (s - 1.0) + m_pow * 0.5;
    // term_k = c_k (s)_{2k-1} m^{1-s-2k}
    let inv_m2 = 1.0 / (m * m);
    let mut rising = s; // (s)_{1}
    let mut pow = m_pow / m; // m^{-s-1}
    for (k, c) in BERNOULLI_RATIO.iter().take(depth).enumerate() {
        let term = rising * pow * *c;
        total += term;
        if term.norm() < 1e-17 * total.norm() {
            break;
        }
        let j = 2.0 * k as f64 + 1.0;
        rising = rising * (s + j) * (s + j + 1.0);
        pow *= inv_m2;
    }
    total
}

/// `Σ_{1 ≤ n < m} n^{-s}`.
pub fn head(s: Complex64, m: u64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    // Summing from the small terms up keeps the rounding error tied to the
    // size of the result.
    for n in (1..m).rev() {
        let ln_n = (n as f64).ln();
        let mag = (-s.re * ln_n).exp();
        let (sin, cos) = (s.im * ln_n).sin_cos();
        acc += Complex64::new(mag * cos, -mag * sin);
    }
    acc
}

/// `ζ(s)` for `s ≠ 1`.
pub fn zeta(s: Complex64, depth: usize) -> Complex64 {
    let m = cutoff(s.im).max(if s.re < 1.0 { 10 } else { 2 });
    head(s, m) + tail(s, m as f64, depth)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_matches_direct_sum_for_large_sigma() {
        let s = Complex64::new(3.0, 2.0);
        let direct: Complex64 = (50..200_000u64).map(|n| (-s * (n as f64).ln()).exp()).sum();
        // remainder beyond 200000 is about 200000^{-2}/2
        let rest = tail(s, 200_000.0, 25);
        assert!((tail(s, 50.0, 25) - direct - rest).norm() < 1e-15);
    }

    #[test]
    fn known_values() {
        let z2 = zeta(Complex64::new(2.0, 0.0), 25);
        assert!((z2.re - core::f64::consts::PI.powi(2) / 6.0).abs() < 1e-15);
        let zh = zeta(Complex64::new(0.5, 0.0), 25);
        assert!((zh.re + 1.460_354_508_809_586_8).abs() < 1e-14);
    }
}
