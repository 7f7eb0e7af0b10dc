//! The three kernel families: Fejér, odd Gaussian and even Gaussian, with
//! closed-form Fourier transforms `K̂(ξ) = ∫ K(x) e^{−ixξ} dx` and majorants
//! over the strip `σ − 2 ≤ Im z ≤ 0`.

use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Float;

use crate::quadrature::Quadrature;
use crate::special::{cos_over_square_tail, phi};
use crate::{Error, Result};

const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

/// A kernel family with its parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", content = "params"))]
pub enum Kernel {
    /// `K(z) = sin²(wz) / (w z²)`.
    Fejer { width: f64 },
    /// `K(z) = −s² z Φ(sz)`.
    OddGauss { scale: f64 },
    /// `K(z) = s Φ(sz)`.
    EvenGauss { scale: f64 },
}

impl Kernel {
    /// Fejér kernel of width `ε log T`.
    pub fn fejer(epsilon: f64, t: f64) -> Result<Self> {
        Self::Fejer { width: epsilon * t.ln() }.validated()
    }

    /// Odd Gaussian with scale `log log T`.
    pub fn odd_gauss(t: f64) -> Result<Self> {
        Self::OddGauss { scale: t.ln().ln() }.validated()
    }

    /// Even Gaussian with scale `log log T`.
    pub fn even_gauss(t: f64) -> Result<Self> {
        Self::EvenGauss { scale: t.ln().ln() }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        let p = self.parameter();
        if p > 0.0 && p.is_finite() {
            Ok(self)
        } else {
            Err(Error::InvalidParams(alloc::format!("kernel parameter must be positive and finite, got {p}")))
        }
    }

    pub fn parameter(&self) -> f64 {
        match *self {
            Kernel::Fejer { width } => width,
            Kernel::OddGauss { scale } | Kernel::EvenGauss { scale } => scale,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Kernel::Fejer { .. } => "fejer",
            Kernel::OddGauss { .. } => "odd_gauss",
            Kernel::EvenGauss { .. } => "even_gauss",
        }
    }

    /// `K(z)` for complex `z`; all three families are entire.
    pub fn value(&self, z: Complex64) -> Complex64 {
        match *self {
            Kernel::Fejer { width: w } => {
                let u = z * w;
                if u.norm() < 1e-3 {
                    // sin(u)/u = 1 − u²/6 + u⁴/120 − u⁶/5040
                    let u2 = u * u;
                    let sinc = 1.0 - u2 * (1.0 / 6.0 - u2 * (1.0 / 120.0 - u2 / 5040.0));
                    sinc * sinc * w
                } else {
                    let s = u.sin();
                    s * s / (z * z * w)
                }
            }
            Kernel::OddGauss { scale: s } => -(z * s * s) * (-(z * z) * (0.5 * s * s)).exp(),
            Kernel::EvenGauss { scale: s } => (-(z * z) * (0.5 * s * s)).exp() * s,
        }
    }

    /// `K(x)` for real `x`.
    pub fn value_real(&self, x: f64) -> f64 {
        match *self {
            Kernel::Fejer { width: w } => {
                let u = w * x;
                if u.abs() < 1e-3 {
                    let u2 = u * u;
                    let sinc = 1.0 - u2 * (1.0 / 6.0 - u2 * (1.0 / 120.0 - u2 / 5040.0));
                    w * sinc * sinc
                } else {
                    let s = u.sin();
                    s * s / (w * x * x)
                }
            }
            Kernel::OddGauss { scale: s } => -s * s * x * phi(s * x),
            Kernel::EvenGauss { scale: s } => s * phi(s * x),
        }
    }

    /// Closed-form `K̂(ξ)`.
    pub fn fourier(&self, xi: f64) -> Complex64 {
        match *self {
            Kernel::Fejer { width: w } => Complex64::new(PI * (1.0 - xi.abs() / (2.0 * w)).max(0.0), 0.0),
            Kernel::OddGauss { scale: s } => Complex64::new(0.0, SQRT_2PI * xi / s * phi(xi / s)),
            Kernel::EvenGauss { scale: s } => Complex64::new(SQRT_2PI * phi(xi / s), 0.0),
        }
    }

    /// `|K̂(ξ)|` vanishes (Fejér) or drops below `1e-300` beyond this point.
    pub fn fourier_support(&self) -> f64 {
        match *self {
            Kernel::Fejer { width } => 2.0 * width,
            // Φ(x) < 1e-300 for x > 37.2
            Kernel::OddGauss { scale } | Kernel::EvenGauss { scale } => 37.2 * scale,
        }
    }

    /// Upper bound for `max |K(x + iy)|` over `σ − 2 ≤ y ≤ 0`.
    pub fn majorant(&self, sigma: f64, x: f64) -> f64 {
        let y = (2.0 - sigma).max(0.0);
        let x = x.abs();
        match *self {
            Kernel::Fejer { width: w } => {
                // |sin(wz)/(wz)| ≤ sinh(w|z|)/(w|z|) and |sin(wz)|² ≤ cosh²(wy)
                let r = (x * x + y * y).sqrt();
                let v = w * r;
                let near = if v < 1e-8 { w } else { w * (v.sinh() / v).powi(2) };
                if x == 0.0 {
                    near
                } else {
                    near.min((w * y).cosh().powi(2) / (w * x * x))
                }
            }
            Kernel::OddGauss { scale: s } => {
                s * s * (x * x + y * y).sqrt() * (-0.5 * s * s * (x * x - y * y)).exp()
            }
            Kernel::EvenGauss { scale: s } => s * (-0.5 * s * s * (x * x - y * y)).exp(),
        }
    }

    /// `K̂(ξ)` by quadrature, as an independent check of [`Kernel::fourier`].
    pub fn fourier_numeric(&self, xi: f64) -> Result<Complex64> {
        let q = Quadrature::new(1e-13, 1e-13).with_max_intervals(20_000);
        match *self {
            Kernel::Fejer { width: w } => {
                // even kernel: 2∫_0^X K cos + exact tail beyond X
                let x_max = 60.0;
                let pts: alloc::vec::Vec<f64> = (0..=120).map(|k| k as f64 * 0.5).collect();
                let body = q.integrate_with_breaks(|x: f64| self.value_real(x) * (x * xi).cos(), &pts)?;
                // sin²(wx) = (1 − cos 2wx)/2
                let tail = (cos_over_square_tail(xi, x_max)
                    - 0.5 * cos_over_square_tail(2.0 * w + xi, x_max)
                    - 0.5 * cos_over_square_tail(2.0 * w - xi, x_max))
                    / (2.0 * w);
                Ok(Complex64::new(2.0 * (body.value + tail), 0.0))
            }
            Kernel::OddGauss { scale: s } | Kernel::EvenGauss { scale: s } => {
                // Φ(sx) < 1e-20 beyond s|x| = 9.6
                let x_max = 9.6 / s;
                let n = ((x_max * (1.0 + xi.abs() / s)).ceil() as usize).clamp(8, 4000);
                let pts: alloc::vec::Vec<f64> = (0..=n).map(|k| x_max * k as f64 / n as f64).collect();
                if matches!(self, Kernel::EvenGauss { .. }) {
                    let r = q.integrate_with_breaks(|x: f64| self.value_real(x) * (x * xi).cos(), &pts)?;
                    Ok(Complex64::new(2.0 * r.value, 0.0))
                } else {
                    // odd kernel: −2i ∫_0^X K sin
                    let r = q.integrate_with_breaks(|x: f64| self.value_real(x) * (x * xi).sin(), &pts)?;
                    Ok(Complex64::new(0.0, -2.0 * r.value))
                }
            }
        }
    }
}
