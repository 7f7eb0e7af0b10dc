//! Adaptive Gauss–Kronrod quadrature (7/15 points) and Gauss–Legendre rules.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use num_traits::Float;

use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639,
    0.949_107_912_342_758_525,
    0.864_864_423_359_769_073,
    0.741_531_185_599_394_440,
    0.586_087_235_467_691_130,
    0.405_845_151_377_397_167,
    0.207_784_955_007_898_468,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_553,
    0.104_790_010_322_250_184,
    0.140_653_259_715_525_919,
    0.169_004_726_639_267_903,
    0.190_350_578_064_785_410,
    0.204_432_940_075_298_892,
    0.209_482_141_084_727_828,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693,
    0.279_705_391_489_276_668,
    0.381_830_050_505_118_945,
    0.417_959_183_673_469_388,
];

/// Values that can be integrated: real or complex.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<T> {
    pub value: T,
    /// Estimated absolute error.
    pub error: f64,
    pub evaluations: usize,
}

/// Tolerances and budget for [`Quadrature::integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self { abs_tol: 1e-12, rel_tol: 1e-10, max_intervals: 2000 }
    }
}

struct Piece<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Piece<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl<T> Eq for Piece<T> {}
impl<T> PartialOrd for Piece<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Piece<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One 15-point Kronrod panel on `[a, b]`: `(value, error estimate)`.
pub fn gk15<T: QuadValue, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> (T, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut vals = [(T::zero(), T::zero()); 7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        vals[j] = (f1, f2);
        kron = kron + (f1 + f2) * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + (f1 + f2) * WG[j / 2];
        }
    }
    // QUADPACK-style error scaling against the mean deviation.
    let mean = kron * 0.5;
    let mut asc = WGK[7] * (fc - mean).magnitude();
    for j in 0..7 {
        asc += WGK[j] * ((vals[j].0 - mean).magnitude() + (vals[j].1 - mean).magnitude());
    }
    let h_abs = h.abs();
    let asc = asc * h_abs;
    let mut err = (kron - gauss).magnitude() * h_abs;
    if asc != 0.0 && err != 0.0 {
        err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
    }
    (kron * h, err.max(f64::EPSILON * 50.0 * (kron * h).magnitude()))
}

impl Quadrature {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        Self { abs_tol, rel_tol, ..Self::default() }
    }

    pub fn with_max_intervals(mut self, n: usize) -> Self {
        self.max_intervals = n;
        self
    }

    /// Integrates `f` over `[a, b]`.
    pub fn integrate<T: QuadValue, F: FnMut(f64) -> T>(&self, f: F, a: f64, b: f64) -> Result<QuadResult<T>> {
        self.integrate_with_breaks(f, &[a, b])
    }

    /// Integrates over `[pts[0], pts[last]]`, starting with the given breakpoints
    /// (which must be sorted) as initial panels.
    pub fn integrate_with_breaks<T: QuadValue, F: FnMut(f64) -> T>(
        &self,
        mut f: F,
        pts: &[f64],
    ) -> Result<QuadResult<T>> {
        let r = self.run(&mut f, pts);
        let tol = self.abs_tol.max(self.rel_tol * r.value.magnitude());
        if r.error <= tol {
            Ok(r)
        } else {
            Err(Error::QuadratureFailure { achieved: r.error, requested: tol })
        }
    }

    /// Like [`integrate_with_breaks`](Self::integrate_with_breaks) but returns
    /// the best estimate even when the tolerance was not met.
    pub fn integrate_best_effort<T: QuadValue, F: FnMut(f64) -> T>(&self, mut f: F, pts: &[f64]) -> QuadResult<T> {
        self.run(&mut f, pts)
    }

    fn run<T: QuadValue, F: FnMut(f64) -> T>(&self, f: &mut F, pts: &[f64]) -> QuadResult<T> {
        let mut heap = BinaryHeap::new();
        let mut evaluations = 0;
        let mut total = T::zero();
        let mut err = 0.0;
        for w in pts.windows(2) {
            if w[1] == w[0] {
                continue;
            }
            let (v, e) = gk15(f, w[0], w[1]);
            evaluations += 15;
            total = total + v;
            err += e;
            heap.push(Piece { a: w[0], b: w[1], value: v, error: e });
        }
        while heap.len() < self.max_intervals.max(1) {
            let tol = self.abs_tol.max(self.rel_tol * total.magnitude());
            if err <= tol {
                break;
            }
            let Some(worst) = heap.pop() else { break };
            let m = 0.5 * (worst.a + worst.b);
            if m <= worst.a.min(worst.b) || m >= worst.a.max(worst.b) {
                // interval can no longer be split in floating point
                heap.push(worst);
                break;
            }
            let (v1, e1) = gk15(f, worst.a, m);
            let (v2, e2) = gk15(f, m, worst.b);
            evaluations += 30;
            total = total - worst.value + v1 + v2;
            err += e1 + e2 - worst.error;
            heap.push(Piece { a: worst.a, b: m, value: v1, error: e1 });
            heap.push(Piece { a: m, b: worst.b, value: v2, error: e2 });
        }
        // Re-sum to avoid drift from the running updates.
        let mut value = T::zero();
        let mut error = 0.0;
        for p in heap.iter() {
            value = value + p.value;
            error += p.error;
        }
        QuadResult { value, error, evaluations }
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0);
    let mut x = alloc::vec![0.0; n];
    let mut w = alloc::vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (core::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { z } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = nf * (z * p - pm1) / (z * z - 1.0);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exactness() {
        // the embedded Gauss rule is exact to degree 13, so the estimate vanishes
        let (v, e) = gk15(&mut |x: f64| x.powi(12) - 3.0 * x.powi(7), -1.0, 2.0);
        let exact = (2f64.powi(13) + 1.0) / 13.0 - 3.0 * (2f64.powi(8) - 1.0) / 8.0;
        assert!((v - exact).abs() < 1e-12 * exact.abs(), "{v} {exact}");
        assert!(e < 1e-10);
        // Kronrod alone is exact to degree 22
        let (v, _) = gk15(&mut |x: f64| x.powi(22), -1.0, 1.0);
        assert!((v - 2.0 / 23.0).abs() < 1e-15);
    }

    #[test]
    fn adaptive_handles_peaks_and_complex() {
        let q = Quadrature::new(1e-13, 1e-12);
        let r = q.integrate(|x: f64| 1.0 / (1e-4 + x * x), -1.0, 1.0).unwrap();
        let exact = 2.0 * 100.0 * (100.0f64).atan();
        assert!((r.value - exact).abs() < 1e-9, "{}", r.value - exact);
        let r = q
            .integrate(|x: f64| Complex64::new(0.0, 3.0 * x).exp(), 0.0, core::f64::consts::PI)
            .unwrap();
        let exact = (Complex64::new(0.0, 3.0 * core::f64::consts::PI).exp() - 1.0) / Complex64::new(0.0, 3.0);
        assert!((r.value - exact).norm() < 1e-13);
    }

    #[test]
    fn budget_failure_reported() {
        let q = Quadrature::new(1e-15, 0.0).with_max_intervals(3);
        let r = q.integrate(|x: f64| (1.0 / x).sin(), 1e-3, 1.0);
        assert!(matches!(r, Err(Error::QuadratureFailure { .. })));
    }

    #[test]
    fn legendre_rules() {
        for n in [1, 2, 5, 16, 33] {
            let (x, w) = gauss_legendre(n);
            let s: f64 = w.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n}");
            // exact for degree 2n-1
            let d = 2 * n - 2;
            let m: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(d as i32)).sum();
            assert!((m - 2.0 / (d as f64 + 1.0)).abs() < 1e-12, "n={n}");
        }
    }
}
