//! Riemann–Siegel formula for Hardy's `Z(t)`, with corrections up to `C_4`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Float;

use crate::special::theta;

const CENTERS: usize = 33;
const ORDER: usize = 26;
const CONTOUR: usize = 64;
const RADIUS: f64 = 0.25;

/// Number of main-sum terms `floor(sqrt(t/2π))`.
pub fn main_terms(t: f64) -> u64 {
    (t / (2.0 * PI)).sqrt().floor() as u64
}

fn psi(p: Complex64) -> Complex64 {
    let num = ((p * p - p - 1.0 / 16.0) * (2.0 * PI)).cos();
    let den = (p * (2.0 * PI)).cos();
    num / den
}

/// Taylor tables of `Ψ(p) = cos(2π(p² − p − 1/16)) / cos(2πp)` on `[0, 1]`.
#[derive(Debug, Clone)]
pub struct RsTables {
    // ORDER Taylor coefficients per center, flattened
    coeffs: Vec<f64>,
}

impl Default for RsTables {
    fn default() -> Self {
        Self::new()
    }
}

impl RsTables {
    pub fn new() -> Self {
        let mut coeffs = alloc::vec![0.0; CENTERS * ORDER];
        for i in 0..CENTERS {
            let c = i as f64 / (CENTERS - 1) as f64;
            // Cauchy integrals on a circle; Ψ is entire, the offsets keep the
            // samples away from the removable points of the quotient.
            let samples: Vec<(Complex64, Complex64)> = (0..CONTOUR)
                .map(|j| {
                    let phi = 2.0 * PI * (j as f64 + 0.5) / CONTOUR as f64;
                    let w = Complex64::from_polar(1.0, phi);
                    (w, psi(Complex64::new(c, 0.0) + w * RADIUS))
                })
                .collect();
            for k in 0..ORDER {
                let mut acc = Complex64::new(0.0, 0.0);
                for &(w, v) in &samples {
                    acc += v * w.powi(-(k as i32));
                }
                coeffs[i * ORDER + k] = acc.re / CONTOUR as f64 / RADIUS.powi(k as i32);
            }
        }
        Self { coeffs }
    }

    /// `[Ψ(p), Ψ'(p), …, Ψ^(12)(p)]` for `p ∈ [0, 1]`.
    pub fn psi_derivatives(&self, p: f64) -> [f64; 13] {
        let i = ((p * (CENTERS - 1) as f64).round().max(0.0) as usize).min(CENTERS - 1);
        let c = i as f64 / (CENTERS - 1) as f64;
        let a = &self.coeffs[i * ORDER..(i + 1) * ORDER];
        let d = p - c;
        let mut out = [0.0; 13];
        for (k, slot) in out.iter_mut().enumerate() {
            // Σ_j a_j j!/(j-k)! d^{j-k}
            let mut acc = 0.0;
            for j in (k..ORDER).rev() {
                let mut f = 1.0;
                for m in (j - k + 1)..=j {
                    f *= m as f64;
                }
                acc = acc * d + a[j] * f;
            }
            *slot = acc;
        }
        out
    }

    /// Remainder `(−1)^{m−1} a^{−1/2} Σ_k C_k a^{−k}` with `a = sqrt(t/2π)`.
    pub fn remainder(&self, t: f64) -> f64 {
        let a = (t / (2.0 * PI)).sqrt();
        let m = main_terms(t);
        let p = a - m as f64;
        let d = self.psi_derivatives(p);
        let pi2 = PI * PI;
        let pi4 = pi2 * pi2;
        let pi6 = pi4 * pi2;
        let pi8 = pi4 * pi4;
        let c0 = d[0];
        let c1 = -d[3] / (96.0 * pi2);
        let c2 = d[2] / (64.0 * pi2) + d[6] / (18432.0 * pi4);
        let c3 = -d[1] / (64.0 * pi2) - d[5] / (3840.0 * pi4) - d[9] / (5_308_416.0 * pi6);
        let c4 = d[0] / (128.0 * pi2)
            + 19.0 * d[4] / (24576.0 * pi4)
            + 11.0 * d[8] / (5_898_240.0 * pi6)
            + d[12] / (2_038_431_744.0 * pi8);
        let inv = 1.0 / a;
        let series = c0 + inv * (c1 + inv * (c2 + inv * (c3 + inv * c4)));
        let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
        sign * inv.sqrt() * series
    }

    /// `Z(t)` for `t ≥ 2π`.
    pub fn hardy_z(&self, t: f64) -> f64 {
        let th = theta(t);
        let mut acc = 0.0;
        for n in 1..=main_terms(t) {
            let nf = n as f64;
            acc += (th - t * nf.ln()).cos() / nf.sqrt();
        }
        2.0 * acc + self.remainder(t)
    }

    /// `Z(t0 + k h)` for `k = 0..out.len()`, sharing the main-sum phases
    /// through a rotation recurrence. Requires `t0 ≥ 2π` and `h > 0`.
    pub fn hardy_z_grid(&self, t0: f64, h: f64, out: &mut [f64]) {
        let count = out.len();
        if count == 0 {
            return;
        }
        let m_of = |k: usize| main_terms(t0 + k as f64 * h);
        let m_max = m_of(count - 1);
        let mut sums = alloc::vec![Complex64::new(0.0, 0.0); count];
        for n in 1..=m_max {
            // first grid index where the term n belongs to the main sum
            let t_n = 2.0 * PI * (n * n) as f64;
            let mut first = if t_n <= t0 { 0 } else { ((t_n - t0) / h).ceil() as usize };
            while first > 0 && m_of(first - 1) >= n {
                first -= 1;
            }
            while first < count && m_of(first) < n {
                first += 1;
            }
            if first >= count {
                break;
            }
            let nf = n as f64;
            crate::resonator::dirichlet_on_grid(
                [(1.0 / nf.sqrt(), nf.ln())],
                t0 + first as f64 * h,
                h,
                &mut sums[first..],
            );
        }
        for (k, slot) in out.iter_mut().enumerate() {
            let t = t0 + k as f64 * h;
            let rot = Complex64::from_polar(1.0, theta(t));
            *slot = 2.0 * (rot * sums[k]).re + self.remainder(t);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_table_matches_closed_form() {
        let tab = RsTables::new();
        for &p in &[0.0, 0.1, 0.3, 0.5, 0.77, 0.99] {
            let d = tab.psi_derivatives(p);
            let exact = psi(Complex64::new(p, 0.0)).re;
            assert!((d[0] - exact).abs() < 1e-13, "p={p}");
            // first derivative by central difference
            let h = 1e-5;
            let fd = (psi(Complex64::new(p + h, 0.0)).re - psi(Complex64::new(p - h, 0.0)).re) / (2.0 * h);
            assert!((d[1] - fd).abs() < 1e-6, "p={p}");
        }
    }

    #[test]
    fn grid_matches_pointwise() {
        let tab = RsTables::new();
        // spans the main-sum change at 2π·13² ≈ 1061.86
        let (t0, h) = (1050.0, 0.05);
        let mut out = alloc::vec![0.0; 600];
        tab.hardy_z_grid(t0, h, &mut out);
        for k in (0..600).step_by(37) {
            let t = t0 + k as f64 * h;
            assert!((out[k] - tab.hardy_z(t)).abs() < 1e-10, "t={t}");
        }
    }
}
