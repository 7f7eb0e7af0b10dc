//! Left-hand sides `∫ g(σ + i(t+u)) K(u) du` of the convolution formulas.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use crate::kernels::Kernel;
use crate::quadrature::Quadrature;
use crate::special::{cos_over_square_tail, phi};
use crate::zeta::euler_maclaurin;
use crate::zeta::{ZeroSet, ZetaEngine};
use crate::{Error, Result};

/// The function convolved against the kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Integrand {
    /// `ζ(σ + iτ)`.
    Zeta,
    /// `log ζ(σ + iτ)`.
    LogZeta,
    /// `S(τ)`; `σ` must be 1/2.
    S,
    /// `S₁(τ) − h(τ) = (1/π) ∫_{1/2}^2 log|ζ(σ' + iτ)| dσ'`; `σ` must be 1/2.
    S1,
}

/// Tolerances and tail controls for [`convolution_lhs`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvolutionOptions {
    pub abs_tol: f64,
    pub max_intervals: usize,
    /// Gaussian kernels are cut where `|K(u)|` falls below this.
    pub kernel_floor: f64,
    /// Fejér: split `ζ = D_X + E_X` at this length.
    pub fejer_split: u64,
    /// Fejér: `E_X` is integrated out to `|u| = fejer_reach`.
    pub fejer_reach: f64,
}

impl Default for ConvolutionOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-9, max_intervals: 200_000, kernel_floor: 1e-17, fejer_split: 10_000, fejer_reach: 3000.0 }
    }
}

/// A convolution value with its error budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvolutionValue {
    pub value: Complex64,
    pub quadrature_error: f64,
    /// Bound on the neglected part of the `u`-line.
    pub tail_bound: f64,
    pub evaluations: usize,
}

/// `|u|` beyond which `|K(u)| < floor` for the Gaussian families.
pub fn gaussian_reach(kernel: &Kernel, floor: f64) -> f64 {
    let s = kernel.parameter();
    let mut x = 1.0;
    for _ in 0..60 {
        // s Φ(s u) = floor, or s (s u) Φ(s u) = floor for the odd family
        let extra = match kernel {
            Kernel::OddGauss { .. } => (s * x).ln(),
            _ => s.ln(),
        };
        let next = (2.0 * ((extra - floor.ln()).max(0.0))).sqrt();
        if (next - x).abs() < 1e-12 {
            break;
        }
        x = next;
    }
    x / s
}

fn sample(engine: &ZetaEngine, integrand: Integrand, sigma: f64, tau: f64) -> Result<Complex64> {
    match integrand {
        Integrand::Zeta => engine.zeta(sigma, tau),
        Integrand::LogZeta => engine.log_zeta(sigma, tau),
        Integrand::S => Ok(Complex64::new(engine.s_of(tau)?, 0.0)),
        Integrand::S1 => Ok(Complex64::new(engine.horizontal_log_integral(tau, 0.5, 2.0)?, 0.0)),
    }
}

/// Breakpoints on `[a, b]`: a uniform panel grid plus the points where the
/// integrand is singular (`u = −t`, and `u = ±γ − t` for ordinates `γ`).
fn breakpoints(a: f64, b: f64, panel: f64, singular: &[f64]) -> Vec<f64> {
    let n = ((b - a) / panel).ceil().max(1.0) as usize;
    let mut pts: Vec<f64> = (0..=n).map(|k| a + (b - a) * k as f64 / n as f64).collect();
    pts.extend(singular.iter().copied().filter(|&x| x > a && x < b));
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|x, y| (*x - *y).abs() < 1e-12);
    pts
}

/// `∫ g(σ + i(t+u)) K(u) du` over the real line.
///
/// For `S`, `S₁` and `log ζ` on the critical line the zero ordinates up to
/// `|t| + reach` must be supplied.
pub fn convolution_lhs(
    engine: &ZetaEngine,
    zeros: Option<&ZeroSet>,
    sigma: f64,
    t: f64,
    kernel: &Kernel,
    integrand: Integrand,
    opts: &ConvolutionOptions,
) -> Result<ConvolutionValue> {
    if !(0.5..1.0).contains(&sigma) {
        return Err(Error::Domain(format!("sigma = {sigma} must satisfy 1/2 <= sigma < 1")));
    }
    if matches!(integrand, Integrand::S | Integrand::S1) && sigma != 0.5 {
        return Err(Error::Domain(format!("{integrand:?} lives on the critical line, got sigma = {sigma}")));
    }
    match kernel {
        Kernel::Fejer { .. } => {
            if integrand != Integrand::Zeta {
                return Err(Error::Domain(format!(
                    "the Fejér kernel decays like 1/u²; {integrand:?} convolutions are only available for Gaussian kernels"
                )));
            }
            fejer_zeta(engine, sigma, t, kernel, opts)
        }
        _ => gaussian(engine, zeros, sigma, t, kernel, integrand, opts),
    }
}

fn singular_points(zeros: Option<&ZeroSet>, integrand: Integrand, sigma: f64, t: f64, reach: f64) -> Result<Vec<f64>> {
    let mut pts = Vec::new();
    if integrand == Integrand::Zeta {
        return Ok(pts);
    }
    // log ζ, S and S₁ all change behaviour at τ = 0
    pts.push(-t);
    if sigma == 0.5 {
        let top = t.abs() + reach;
        let zs = zeros.ok_or_else(|| Error::Precondition(format!("zero ordinates up to {top} are required")))?;
        if zs.height < top {
            return Err(Error::Precondition(format!("zero ordinates cover {} but {top} is required", zs.height)));
        }
        for &g in &zs.ordinates {
            if g > top {
                break;
            }
            pts.push(g - t);
            pts.push(-g - t);
        }
    }
    Ok(pts)
}

fn gaussian(
    engine: &ZetaEngine,
    zeros: Option<&ZeroSet>,
    sigma: f64,
    t: f64,
    kernel: &Kernel,
    integrand: Integrand,
    opts: &ConvolutionOptions,
) -> Result<ConvolutionValue> {
    let reach = gaussian_reach(kernel, opts.kernel_floor);
    let singular = singular_points(zeros, integrand, sigma, t, reach)?;
    let panel = (0.5f64).min(1.0 / kernel.parameter());
    let pts = breakpoints(-reach, reach, panel, &singular);
    let q = Quadrature::new(opts.abs_tol, 0.0).with_max_intervals(opts.max_intervals);
    let mut failure = None;
    let r = q.integrate_best_effort(
        |u: f64| match sample(engine, integrand, sigma, t + u) {
            Ok(v) => v * kernel.value_real(u),
            Err(e) => {
                failure.get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        },
        &pts,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    if r.error > opts.abs_tol {
        return Err(Error::QuadratureFailure { achieved: r.error, requested: opts.abs_tol });
    }
    // |∫_{|u|>reach} K| for Gaussians, times a generous bound on |g|
    let s = kernel.parameter();
    let mass = match kernel {
        Kernel::EvenGauss { .. } => 2.0 * gaussian_upper_tail(s * reach),
        _ => 2.0 * phi(s * reach),
    };
    let g_bound = 10.0 * (t.abs() + reach + 10.0).ln();
    Ok(ConvolutionValue {
        value: r.value,
        quadrature_error: r.error,
        tail_bound: mass * g_bound,
        evaluations: r.evaluations,
    })
}

/// `∫_x^∞ Φ(y) dy ≤ Φ(x)/x`.
fn gaussian_upper_tail(x: f64) -> f64 {
    phi(x) / x.max(1e-300)
}

/// Fejér kernel against `ζ`: direct quadrature on `|u| ≤ |t| + 60`, then
/// `ζ = D_X + E_X` with the `D_X` tail in closed form and `E_X` integrated
/// out to `fejer_reach`.
fn fejer_zeta(engine: &ZetaEngine, sigma: f64, t: f64, kernel: &Kernel, opts: &ConvolutionOptions) -> Result<ConvolutionValue> {
    let w = kernel.parameter();
    let u0 = t.abs() + 60.0;
    let u1 = opts.fejer_reach.max(2.0 * u0);
    let x = opts.fejer_split;
    let xf = x as f64;
    if t.abs() + u1 >= 2.0 * core::f64::consts::PI * xf {
        return Err(Error::InvalidParams(format!("fejer_split = {x} is too short for reach {u1}")));
    }
    let q = Quadrature::new(opts.abs_tol * 0.25, 0.0).with_max_intervals(opts.max_intervals);
    let mut failure = None;
    let pts = breakpoints(-u0, u0, 0.5, &[]);
    let core_part = q.integrate_best_effort(
        |u: f64| match engine.zeta(sigma, t + u) {
            Ok(v) => v * kernel.value_real(u),
            Err(e) => {
                failure.get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        },
        &pts,
    );
    if let Some(e) = failure {
        return Err(e);
    }

    // ∫_{|u|>U0} n^{-σ-i(t+u)} K(u) du = n^{-σ-it} T(log n)
    let c2 = |a: f64| cos_over_square_tail(a, u0);
    let mut d_tail = Complex64::new(0.0, 0.0);
    for n in (1..=x).rev() {
        let a = (n as f64).ln();
        let weight = (c2(a) - 0.5 * c2(a + 2.0 * w) - 0.5 * c2(a - 2.0 * w)) / w;
        d_tail += Complex64::from_polar((-sigma * a).exp(), -t * a) * weight;
    }

    let e_x = |u: f64| euler_maclaurin::tail(Complex64::new(sigma, t + u), xf + 1.0, 25) * kernel.value_real(u);
    let right = breakpoints(u0, u1, 0.5, &[]);
    let left: Vec<f64> = breakpoints(-u1, -u0, 0.5, &[]);
    let qe = Quadrature::new(opts.abs_tol * 0.25, 0.0).with_max_intervals(opts.max_intervals);
    let e_right = qe.integrate_best_effort(e_x, &right);
    let e_left = qe.integrate_best_effort(e_x, &left);

    // beyond U1: |E_X| ≈ X^{1−σ}/|τ|, oscillating at log X and log X ± 2w,
    // so one integration by parts gains a factor 1/min frequency
    let freq = (xf.ln() - 2.0 * w).abs().min(xf.ln()).max(1.0 / u1);
    let amp = xf.powf(1.0 - sigma) / (u1 - t.abs());
    let far = 2.0 * 2.0 * amp / (w * u1 * u1 * freq);

    let error = core_part.error + e_right.error + e_left.error;
    if error > opts.abs_tol {
        return Err(Error::QuadratureFailure { achieved: error, requested: opts.abs_tol });
    }
    Ok(ConvolutionValue {
        value: core_part.value + d_tail + e_right.value + e_left.value,
        quadrature_error: error,
        tail_bound: far,
        evaluations: core_part.evaluations + e_right.evaluations + e_left.evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reach_meets_floor() {
        let k = Kernel::EvenGauss { scale: 2.4 };
        let r = gaussian_reach(&k, 1e-17);
        assert!((k.value_real(r).abs() / 1e-17 - 1.0).abs() < 1e-6);
        let k = Kernel::OddGauss { scale: 2.4 };
        let r = gaussian_reach(&k, 1e-17);
        assert!((k.value_real(r).abs() / 1e-17 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn domain_guards() {
        let e = ZetaEngine::default();
        let k = Kernel::EvenGauss { scale: 2.0 };
        let o = ConvolutionOptions::default();
        assert!(matches!(convolution_lhs(&e, None, 1.0, 5.0, &k, Integrand::Zeta, &o), Err(Error::Domain(_))));
        assert!(matches!(convolution_lhs(&e, None, 0.6, 5.0, &k, Integrand::S, &o), Err(Error::Domain(_))));
        assert!(matches!(convolution_lhs(&e, None, 0.5, 20.0, &k, Integrand::S, &o), Err(Error::Precondition(_))));
        let f = Kernel::Fejer { width: 2.0 };
        assert!(matches!(convolution_lhs(&e, None, 0.6, 5.0, &f, Integrand::LogZeta, &o), Err(Error::Domain(_))));
    }

    #[test]
    fn conjugate_symmetry() {
        let e = ZetaEngine::default();
        let k = Kernel::EvenGauss { scale: 2.0 };
        let o = ConvolutionOptions::default();
        let a = convolution_lhs(&e, None, 0.7, 12.5, &k, Integrand::Zeta, &o).unwrap();
        let b = convolution_lhs(&e, None, 0.7, -12.5, &k, Integrand::Zeta, &o).unwrap();
        assert!((a.value - b.value.conj()).norm() < 1e-9);
    }
}
