//! Special functions used across the crate: the Gaussian `Φ`, complex
//! log-gamma, the Riemann–Siegel theta function and the sine/cosine
//! integrals.

use core::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use num_traits::Float;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `ln(2π)`.
pub const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// `B_{2k} / (2k)!` for `k = 1..=25`.
pub const BERNOULLI_RATIO: [f64; 25] = [
    0.08333333333333333,
    -0.001388888888888889,
    3.306878306878307e-05,
    -8.267195767195768e-07,
    2.08767569878681e-08,
    -5.284190138687493e-10,
    1.3382536530684679e-11,
    -3.3896802963225827e-13,
    8.586062056277845e-15,
    -2.174868698558062e-16,
    5.5090028283602295e-18,
    -1.3954464685812522e-19,
    3.534707039629467e-21,
    -8.953517427037546e-23,
    2.267952452337683e-24,
    -5.744790668872202e-26,
    1.455172475614865e-27,
    -3.6859949406653103e-29,
    9.336734257095045e-31,
    -2.36502241570063e-32,
    5.990671762482134e-34,
    -1.5174548844682903e-35,
    3.843758125454189e-37,
    -9.736353072646691e-39,
    2.466247044200681e-40,
];

/// `B_{2k} / (2k(2k-1))`, the Stirling series coefficients.
const STIRLING: [f64; 12] = [
    0.08333333333333333,
    -0.002777777777777778,
    0.0007936507936507937,
    -0.0005952380952380953,
    0.0008417508417508417,
    -0.0019175269175269176,
    0.00641025641025641,
    -0.029550653594771242,
    0.17964437236883057,
    -1.3924322169059011,
    13.402864044168393,
    -156.84828462600203,
];

/// The Gaussian `Φ(x) = exp(-x²/2)`.
#[inline]
pub fn phi(x: f64) -> f64 {
    (-0.5 * x * x).exp()
}

/// Principal-branch `ln Γ(z)` for `Re z > 0`, continuous in `Im z`.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    debug_assert!(z.re > 0.0, "ln_gamma needs Re z > 0");
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.norm() < 16.0 {
        shift += w.ln();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut power = inv;
    for c in STIRLING {
        series += power * c;
        power *= inv2;
    }
    (w - 0.5) * w.ln() - w + 0.5 * LN_2PI + series - shift
}

/// Riemann–Siegel theta: `θ(t) = Im ln Γ(1/4 + it/2) − (t/2) ln π`.
///
/// Odd in `t`. Uses the asymptotic series above `|t| = 50`.
pub fn theta(t: f64) -> f64 {
    if t < 0.0 {
        return -theta(-t);
    }
    if t >= 50.0 {
        let inv = 1.0 / t;
        let inv2 = inv * inv;
        let main = 0.5 * t * (t / (2.0 * PI)).ln() - 0.5 * t - PI / 8.0;
        let corr = inv
            * (1.0 / 48.0
                + inv2
                    * (7.0 / 5760.0
                        + inv2 * (31.0 / 80640.0 + inv2 * (127.0 / 430080.0 + inv2 * (511.0 / 1216512.0)))));
        return main + corr;
    }
    ln_gamma(Complex64::new(0.25, 0.5 * t)).im - 0.5 * t * PI.ln()
}

/// `θ'(t)`, used to size Gram-style steps.
pub fn theta_prime(t: f64) -> f64 {
    let t = t.abs().max(1.0);
    0.5 * (t / (2.0 * PI)).ln()
}

/// Sine and cosine integrals: returns `(Ci(x), π/2 − Si(x))` for `x > 0`.
///
/// The complement is returned directly because tails `∫_x^∞ sin(u)/u du`
/// are what the Fourier tail formulas need and forming `π/2 − Si` by
/// subtraction loses digits for large `x`.
pub fn cos_sin_integrals(x: f64) -> (f64, f64) {
    assert!(x > 0.0, "cos_sin_integrals needs x > 0");
    if x <= 2.0 {
        // Power series; all terms are bounded by 2 so cancellation is mild.
        let mut si = 0.0;
        let mut ci = 0.0;
        // term_k = (-1)^k x^(2k+1) / (2k+1)!, starts at x
        let mut odd = x;
        let mut even = 1.0;
        for k in 0..40 {
            let kf = k as f64;
            si += odd / (2.0 * kf + 1.0);
            if k > 0 {
                ci += even / (2.0 * kf);
            }
            even = -odd * x / (2.0 * kf + 2.0);
            odd = even * x / (2.0 * kf + 3.0);
            if odd.abs() < 1e-18 && even.abs() < 1e-18 {
                break;
            }
        }
        return (EULER_GAMMA + x.ln() + ci, FRAC_PI_2 - si);
    }
    // Continued fraction for E1(ix) (modified Lentz).
    let tiny = 1e-300;
    let mut b = Complex64::new(1.0, x);
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 2..200 {
        let a = -((i - 1) as f64).powi(2);
        b += 2.0;
        d = (d * a + b).inv();
        c = b + c.inv() * a;
        let del = c * d;
        h *= del;
        if (del.re - 1.0).abs() + del.im.abs() < 1e-16 {
            break;
        }
    }
    let e1 = Complex64::new(x.cos(), -x.sin()) * h;
    (-e1.re, -e1.im)
}

/// `∫_u^∞ cos(b x) / x² dx` for `u > 0`.
pub fn cos_over_square_tail(b: f64, u: f64) -> f64 {
    let b = b.abs();
    if b == 0.0 {
        return 1.0 / u;
    }
    let (_, si_c) = cos_sin_integrals(b * u);
    (b * u).cos() / u - b * si_c
}

/// `∫_{lo}^{hi} ln|x| dx`.
pub fn integral_ln_abs(lo: f64, hi: f64) -> f64 {
    let anti = |x: f64| if x == 0.0 { 0.0 } else { x * x.abs().ln() - x };
    anti(hi) - anti(lo)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_gamma_matches_known_values() {
        // ln Γ(1/2) = ln √π, ln Γ(5) = ln 24
        let v = ln_gamma(Complex64::new(0.5, 0.0));
        assert!((v.re - 0.5 * PI.ln()).abs() < 1e-14);
        assert!(v.im.abs() < 1e-15);
        let v = ln_gamma(Complex64::new(5.0, 0.0));
        assert!((v.re - 24f64.ln()).abs() < 1e-13);
        // |Γ(1/2 + iy)|² = π / cosh(π y)
        let y = 3.7;
        let v = ln_gamma(Complex64::new(0.5, y));
        assert!((2.0 * v.re - (PI / (PI * y).cosh()).ln()).abs() < 1e-12);
    }

    #[test]
    fn theta_branches_agree() {
        for &t in &[50.0, 60.0, 123.4, 200.0] {
            let asym = theta(t);
            let direct = ln_gamma(Complex64::new(0.25, 0.5 * t)).im - 0.5 * t * PI.ln();
            assert!((asym - direct).abs() < 1e-11, "t={t}: {asym} vs {direct}");
        }
        assert_eq!(theta(0.0), 0.0);
        assert!((theta(-7.5) + theta(7.5)).abs() < 1e-15);
    }

    #[test]
    fn sine_cosine_integrals() {
        // Reference values (Abramowitz & Stegun tables).
        let (ci, sic) = cos_sin_integrals(1.0);
        assert!((ci - 0.337_403_922_900_968_1).abs() < 1e-14);
        assert!((FRAC_PI_2 - sic - 0.946_083_070_367_183).abs() < 1e-14);
        let (ci, sic) = cos_sin_integrals(10.0);
        assert!((ci + 0.045_456_433_004_455_37).abs() < 1e-14);
        assert!((FRAC_PI_2 - sic - 1.658_347_594_218_874).abs() < 1e-14);
        // continuity across the switch point
        let (a, b) = cos_sin_integrals(2.0);
        let (c, d) = cos_sin_integrals(2.0 + 1e-12);
        assert!((a - c).abs() < 1e-11 && (b - d).abs() < 1e-11);
    }

    #[test]
    fn cos_tail_large_argument() {
        // ∫_u^∞ cos(bx)/x² dx = -sin(bu)/(b u²) + 2cos(bu)/(b² u³) + O(u⁻⁴)
        let (b, u) = (3.0, 400.0);
        let approx = -(b * u).sin() / (b * u * u) + 2.0 * (b * u).cos() / (b * b * u * u * u);
        assert!((cos_over_square_tail(b, u) - approx).abs() < 1e-10);
        assert_eq!(cos_over_square_tail(0.0, 4.0), 0.25);
    }
}
