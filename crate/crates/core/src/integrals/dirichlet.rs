//! Kernel-damped Dirichlet series `Σ c_n K̂(log n) n^{−σ−it}`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Float;

use crate::kernels::Kernel;
use crate::primes::primes_in;
use crate::quadrature::Quadrature;
use crate::Result;

/// Which coefficients multiply `K̂(log n) n^{−σ−it}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Flavor {
    /// `c_n = 1`.
    Zeta,
    /// `c_n = Λ(n)/log n`.
    LogZeta,
    /// `(1/π) Im` of the `LogZeta` sum (at `σ = 1/2`).
    S,
    /// `(1/π) Re Σ Λ(n)/log² n K̂(log n) n^{−σ−it}`; the companion
    /// `O(n^{−2})` terms are reported as a bound.
    S1,
}

/// A truncated or accelerated Dirichlet sum with its error budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirichletSum {
    pub value: Complex64,
    /// Number of terms summed explicitly.
    pub terms: u64,
    /// Bound on what was left out (tail, truncation, acceleration error).
    pub truncation_bound: f64,
    /// For [`Flavor::S1`]: bound on the `O(n^{−2})` companion series.
    pub correction_bound: f64,
    /// For [`Flavor::S1`]: the companion series `−(1/π) Re Σ Λ(n)/log² n K̂(log n) n^{−2−it}` itself.
    pub correction: f64,
}

/// Tuning for [`dirichlet_rhs`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirichletOptions {
    /// Terms below `|K̂(log n)| n^{-σ}` of this size are negligible.
    pub negligible: f64,
    /// Largest prime power enumerated for the prime-power flavors.
    pub prime_power_limit: u64,
}

impl Default for DirichletOptions {
    fn default() -> Self {
        Self { negligible: 1e-20, prime_power_limit: 200_000_000 }
    }
}

/// Largest `y = log n` at which `|K̂(y)| e^{(1−σ)y}` can still exceed `negligible`.
pub fn log_cutoff(kernel: &Kernel, sigma: f64, negligible: f64) -> f64 {
    match *kernel {
        Kernel::Fejer { width } => 2.0 * width,
        Kernel::OddGauss { scale: s } | Kernel::EvenGauss { scale: s } => {
            // −y²/(2s²) + (1−σ)y + log(3 + y/s) < log(negligible)
            let b = (1.0 - sigma).max(0.0);
            let mut y = s;
            for _ in 0..50 {
                let slack = -negligible.ln() + (3.0 + y / s).ln() + 1.0;
                let next = s * s * b + s * (s * s * b * b + 2.0 * slack).sqrt();
                if (next - y).abs() < 1e-9 {
                    break;
                }
                y = next;
            }
            y
        }
    }
}

/// `f(x) = K̂(log x) x^{−σ−it}` for real `x ≥ 1`.
fn term(kernel: &Kernel, sigma: f64, t: f64, x: f64) -> Complex64 {
    let l = x.ln();
    kernel.fourier(l) * Complex64::from_polar((-sigma * l).exp(), -t * l)
}

/// Gregory-corrected tail `Σ_{n ≥ a} f(n)` for a smooth, slowly varying `f`.
fn gregory_tail(kernel: &Kernel, sigma: f64, t: f64, a: u64, y_max: f64) -> Result<(Complex64, f64)> {
    let f: Vec<Complex64> = (0..7).map(|k| term(kernel, sigma, t, (a + k) as f64)).collect();
    let mut diffs = Vec::with_capacity(6);
    let mut row = f.clone();
    for _ in 0..6 {
        row = row.windows(2).map(|w| w[1] - w[0]).collect();
        diffs.push(row[0]);
    }
    let ya = (a as f64).ln();
    let q = Quadrature::new(1e-17, 1e-14).with_max_intervals(100_000);
    let panels = (((y_max - ya) * (1.0 + t.abs()) / 2.0).ceil() as usize).clamp(4, 50_000);
    let pts: Vec<f64> = (0..=panels).map(|k| ya + (y_max - ya) * k as f64 / panels as f64).collect();
    // ∫_a^∞ f(x) dx with x = e^y
    let integral = q.integrate_best_effort(
        |y: f64| kernel.fourier(y) * Complex64::from_polar(((1.0 - sigma) * y).exp(), -t * y),
        &pts,
    );
    let corr = f[0] * 0.5 - diffs[0] / 12.0 + diffs[1] / 24.0 - diffs[2] * (19.0 / 720.0) + diffs[3] * (3.0 / 160.0)
        - diffs[4] * (863.0 / 60480.0);
    // next Gregory coefficient is 275/24192
    let err = diffs[5].norm() * (275.0 / 24192.0) + integral.error;
    Ok((integral.value + corr, err))
}

/// Right-hand side `Σ c_n K̂(log n) n^{−σ−it}` for the chosen flavor.
pub fn dirichlet_rhs(kernel: &Kernel, sigma: f64, t: f64, flavor: Flavor, opts: &DirichletOptions) -> Result<DirichletSum> {
    match flavor {
        Flavor::Zeta => zeta_flavor(kernel, sigma, t, opts),
        _ => prime_power_flavor(kernel, sigma, t, flavor, opts),
    }
}

fn zeta_flavor(kernel: &Kernel, sigma: f64, t: f64, opts: &DirichletOptions) -> Result<DirichletSum> {
    let y_max = log_cutoff(kernel, sigma, opts.negligible);
    let support = kernel.fourier_support();
    if let Kernel::Fejer { width } = *kernel {
        // exactly finite: K̂(log n) = 0 once n ≥ e^{2w}
        let last = (2.0 * width).exp().ceil() as u64;
        let mut acc = Complex64::new(0.0, 0.0);
        let mut terms = 0;
        for n in (1..=last).rev() {
            let l = (n as f64).ln();
            if l >= support {
                continue;
            }
            acc += term(kernel, sigma, t, n as f64);
            terms += 1;
        }
        return Ok(DirichletSum { value: acc, terms, truncation_bound: 0.0, correction_bound: 0.0, correction: 0.0 });
    }
    let direct_end = y_max.exp();
    let switch = (50.0 * t.abs()).max(1000.0);
    if direct_end <= switch {
        let last = direct_end.ceil() as u64;
        let mut acc = Complex64::new(0.0, 0.0);
        for n in (1..=last).rev() {
            acc += term(kernel, sigma, t, n as f64);
        }
        let bound = opts.negligible * direct_end;
        return Ok(DirichletSum { value: acc, terms: last, truncation_bound: bound, correction_bound: 0.0, correction: 0.0 });
    }
    let a = switch.ceil() as u64;
    let mut acc = Complex64::new(0.0, 0.0);
    for n in (1..a).rev() {
        acc += term(kernel, sigma, t, n as f64);
    }
    let (tail, err) = gregory_tail(kernel, sigma, t, a, y_max)?;
    Ok(DirichletSum {
        value: acc + tail,
        terms: a - 1,
        truncation_bound: err + opts.negligible,
        correction_bound: 0.0,
        correction: 0.0,
    })
}

/// Calls `visit(n, p)` for every prime power `n = p^k` with `2 ≤ n ≤ limit`.
pub fn for_each_prime_power(limit: u64, mut visit: impl FnMut(u64, u64)) {
    const SEG: u64 = 1 << 22;
    let mut lo = 0;
    while lo < limit {
        let hi = limit.min(lo + SEG);
        for p in primes_in(lo, hi) {
            let mut n = p;
            loop {
                visit(n, p);
                match n.checked_mul(p) {
                    Some(m) if m <= limit => n = m,
                    _ => break,
                }
            }
        }
        lo = hi;
    }
}

fn prime_power_flavor(
    kernel: &Kernel,
    sigma: f64,
    t: f64,
    flavor: Flavor,
    opts: &DirichletOptions,
) -> Result<DirichletSum> {
    let y_max = log_cutoff(kernel, sigma, opts.negligible).min(kernel.fourier_support());
    let wanted = y_max.exp().ceil();
    let limit = if wanted >= opts.prime_power_limit as f64 { opts.prime_power_limit } else { wanted as u64 };
    let power = if flavor == Flavor::S1 { 2 } else { 1 };
    let mut acc = Complex64::new(0.0, 0.0);
    let mut corr = 0.0;
    let mut companion = Complex64::new(0.0, 0.0);
    let mut terms = 0;
    for_each_prime_power(limit, |n, p| {
        let l = (n as f64).ln();
        let k_hat = kernel.fourier(l);
        if k_hat.norm() == 0.0 {
            return;
        }
        let c = (p as f64).ln() / l.powi(power);
        acc += k_hat * Complex64::from_polar(c * (-sigma * l).exp(), -t * l);
        if flavor == Flavor::S1 {
            corr += c * k_hat.norm() * (-2.0 * l).exp();
            companion += k_hat * Complex64::from_polar(c * (-2.0 * l).exp(), -t * l);
        }
        terms += 1;
    });
    // Tail beyond the enumerated range, with the prime-power density 1/log x.
    let truncation_bound = if (limit as f64) < wanted {
        let q = Quadrature::new(1e-20, 1e-6);
        let lo = (limit as f64).ln();
        q.integrate_best_effort(
            |y: f64| kernel.fourier(y).norm() * ((1.0 - sigma) * y).exp() / y.powi(power),
            &[lo, y_max.max(lo)],
        )
        .value
            * 1.1
    } else {
        opts.negligible * wanted
    };
    let value = match flavor {
        Flavor::S => Complex64::new(acc.im / PI, 0.0),
        Flavor::S1 => Complex64::new(acc.re / PI, 0.0),
        _ => acc,
    };
    let scale = if matches!(flavor, Flavor::S | Flavor::S1) { 1.0 / PI } else { 1.0 };
    Ok(DirichletSum {
        value,
        terms,
        truncation_bound: truncation_bound * scale,
        correction_bound: corr * scale,
        correction: -companion.re * scale,
    })
}
