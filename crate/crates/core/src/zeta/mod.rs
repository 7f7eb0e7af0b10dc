//! The zeta function on and near the critical line: `ζ(σ+it)`, Hardy's
//! `Z(t)`, `log ζ`, `S(t)`, `S₁(t)`, zero ordinates and `N(t)`.

mod argument;
pub mod euler_maclaurin;
pub mod riemann_siegel;
mod zeros;

use alloc::format;

use num_complex::Complex64;
use num_traits::Float;

pub use zeros::{CriticalSample, ZeroSet};

use crate::special::theta;
use crate::{Error, Result};
use riemann_siegel::RsTables;

/// Numerical policy shared by all zeta evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PrecisionPolicy {
    /// Significant decimal digits of the working arithmetic; only double
    /// precision (15 or 16) is available.
    pub working_digits: u32,
    pub quadrature_abs_tol: f64,
    pub zero_isolation_tol: f64,
    /// Largest `|t|` accepted by the Euler–Maclaurin evaluator.
    pub max_height: f64,
    /// Use the Riemann–Siegel formula on the critical line above this height.
    pub riemann_siegel_above: Option<f64>,
    /// Number of Euler–Maclaurin correction terms (at most 25).
    pub em_depth: usize,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        Self {
            working_digits: 15,
            quadrature_abs_tol: 1e-10,
            zero_isolation_tol: 1e-10,
            max_height: 5000.0,
            riemann_siegel_above: None,
            em_depth: 25,
        }
    }
}

impl PrecisionPolicy {
    /// The default policy with Riemann–Siegel switched on above `t = 200`.
    pub fn fast() -> Self {
        Self { riemann_siegel_above: Some(200.0), ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(15..=16).contains(&self.working_digits) {
            return Err(Error::InvalidParams(format!(
                "working_digits = {} is not available; only double precision (15 or 16) is supported",
                self.working_digits
            )));
        }
        if !(self.quadrature_abs_tol > 0.0 && self.zero_isolation_tol > 0.0) {
            return Err(Error::InvalidParams("tolerances must be positive".into()));
        }
        if !(self.max_height > 0.0) {
            return Err(Error::InvalidParams("max_height must be positive".into()));
        }
        if let Some(h) = self.riemann_siegel_above {
            if !(h >= 2.0 * core::f64::consts::PI) {
                return Err(Error::InvalidParams("riemann_siegel_above must be at least 2π".into()));
            }
        }
        if self.em_depth == 0 || self.em_depth > 25 {
            return Err(Error::InvalidParams("em_depth must lie in 1..=25".into()));
        }
        Ok(())
    }
}

/// Evaluator bundling a policy with precomputed tables.
#[derive(Debug, Clone)]
pub struct ZetaEngine {
    policy: PrecisionPolicy,
    rs: RsTables,
    // ∫_{1/2}^∞ log|ζ(σ)| dσ
    real_axis_log_integral: f64,
}

impl Default for ZetaEngine {
    fn default() -> Self {
        Self::new(PrecisionPolicy::default()).expect("default policy is valid")
    }
}

impl ZetaEngine {
    pub fn new(policy: PrecisionPolicy) -> Result<Self> {
        policy.validate()?;
        let mut engine = Self { policy, rs: RsTables::new(), real_axis_log_integral: 0.0 };
        engine.real_axis_log_integral = argument::real_axis_log_integral(&engine)?;
        Ok(engine)
    }

    pub fn policy(&self) -> &PrecisionPolicy {
        &self.policy
    }

    fn use_rs(&self, t: f64) -> bool {
        self.policy.riemann_siegel_above.is_some_and(|h| t.abs() > h)
    }

    /// `ζ(σ + it)`.
    pub fn zeta(&self, sigma: f64, t: f64) -> Result<Complex64> {
        if !(sigma.is_finite() && t.is_finite()) {
            return Err(Error::Domain(format!("non-finite argument ({sigma}, {t})")));
        }
        if sigma == 1.0 && t == 0.0 {
            return Err(Error::PoleAt1);
        }
        if sigma == 0.5 && self.use_rs(t) {
            let z = self.rs.hardy_z(t.abs());
            let v = Complex64::from_polar(z, -theta(t.abs()));
            return Ok(if t < 0.0 { v.conj() } else { v });
        }
        if t.abs() > self.policy.max_height {
            return Err(Error::HeightOutOfRange { height: t, max: self.policy.max_height });
        }
        if sigma < 0.0 {
            return Err(Error::Domain(format!("sigma = {sigma} is left of the supported half-plane")));
        }
        Ok(euler_maclaurin::zeta(Complex64::new(sigma, t), self.policy.em_depth))
    }

    /// Hardy's `Z(t) = e^{iθ(t)} ζ(1/2 + it)`, an even real function.
    pub fn hardy_z(&self, t: f64) -> Result<f64> {
        let t = t.abs();
        if self.use_rs(t) {
            return Ok(self.rs.hardy_z(t));
        }
        let v = self.zeta(0.5, t)?;
        Ok((Complex64::from_polar(1.0, theta(t)) * v).re)
    }

    /// `Z` on the grid `t0 + k h`; uses the shared-phase Riemann–Siegel sum
    /// where the policy allows it.
    pub fn hardy_z_grid(&self, t0: f64, h: f64, out: &mut [f64]) -> Result<()> {
        if out.is_empty() {
            return Ok(());
        }
        if t0 >= 0.0 && h > 0.0 {
            if let Some(edge) = self.policy.riemann_siegel_above {
                // pointwise below the threshold, shared phases above it
                let first = if t0 > edge { 0 } else { (((edge - t0) / h).floor() as usize + 1).min(out.len()) };
                let (low, high) = out.split_at_mut(first);
                for (k, slot) in low.iter_mut().enumerate() {
                    *slot = self.hardy_z(t0 + k as f64 * h)?;
                }
                if !high.is_empty() {
                    self.rs.hardy_z_grid(t0 + first as f64 * h, h, high);
                }
                return Ok(());
            }
        }
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = self.hardy_z(t0 + k as f64 * h)?;
        }
        Ok(())
    }

    /// The Riemann–Siegel phase `θ(t)`.
    pub fn theta(&self, t: f64) -> f64 {
        theta(t)
    }

    /// `log ζ(σ + it)` with the argument fixed by continuous variation from
    /// `+∞ + it`; extended to `t < 0` by conjugation. At `t = 0` the
    /// imaginary part is the mean of the two one-sided limits.
    pub fn log_zeta(&self, sigma: f64, t: f64) -> Result<Complex64> {
        argument::log_zeta(self, sigma, t)
    }

    /// `S(t) = arg ζ(1/2 + it) / π`, odd in `t`, mean of one-sided limits at
    /// ordinates.
    pub fn s_of(&self, t: f64) -> Result<f64> {
        argument::s_of(self, t)
    }

    /// `S₁(t)` through `π S₁(t) = ∫_{1/2}^∞ log|ζ(σ+it)| dσ − ∫_{1/2}^∞ log|ζ(σ)| dσ`,
    /// which needs no zero ordinates.
    pub fn s1_littlewood(&self, t: f64) -> Result<f64> {
        argument::s1_littlewood(self, t)
    }

    /// `(1/π) ∫_{lo}^{hi} log|ζ(σ + it)| dσ`.
    pub fn horizontal_log_integral(&self, t: f64, lo: f64, hi: f64) -> Result<f64> {
        argument::horizontal_log_integral(self, t, lo, hi)
    }

    /// `∫_{1/2}^∞ log|ζ(σ)| dσ`.
    pub fn real_axis_log_integral(&self) -> f64 {
        self.real_axis_log_integral
    }

    /// Zero ordinates in `(0, height]`, found by sign changes of `Z` and
    /// verified against the argument principle.
    pub fn zeros(&self, height: f64) -> Result<ZeroSet> {
        ZeroSet::compute(self, height)
    }
}

/// `Λ(n)`: `log p` if `n = p^k`, otherwise 0.
pub fn von_mangoldt(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            return if m == 1 { (p as f64).ln() } else { 0.0 };
        }
        p += 1;
    }
    // n itself is prime
    (m as f64).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn zeta_reference_values() {
        let e = ZetaEngine::default();
        let z = e.zeta(2.0, 0.0).unwrap();
        assert!((z.re - PI * PI / 6.0).abs() < 1e-14 && z.im == 0.0);
        let z = e.zeta(0.5, 0.0).unwrap();
        assert!((z.re + 1.460_354_508_809_586_8).abs() < 1e-14);
        assert_eq!(e.zeta(1.0, 0.0), Err(Error::PoleAt1));
        let a = e.zeta(0.7, 33.3).unwrap();
        let b = e.zeta(0.7, -33.3).unwrap();
        assert!((a - b.conj()).norm() < 1e-15);
        assert!(matches!(e.zeta(0.6, 6000.0), Err(Error::HeightOutOfRange { .. })));
    }

    #[test]
    fn hardy_z_first_zero_and_origin() {
        let e = ZetaEngine::default();
        assert!((e.hardy_z(0.0).unwrap() + 1.460_354_508_809_586_8).abs() < 1e-14);
        assert!(e.hardy_z(14.134_725_141_734_693).unwrap().abs() < 1e-13);
        let z = e.hardy_z(37.5).unwrap();
        assert!((z.abs() - e.zeta(0.5, 37.5).unwrap().norm()).abs() < 1e-13);
    }

    #[test]
    fn riemann_siegel_agrees_with_euler_maclaurin() {
        let em = ZetaEngine::default();
        let rs = ZetaEngine::new(PrecisionPolicy::fast()).unwrap();
        // the truncation error of the asymptotic series falls like t^{-11/4}
        for &(t, tol) in &[(250.0, 5e-9), (512.3, 1e-9), (1000.0, 1e-10), (2345.6, 1e-11), (4999.0, 1e-11)] {
            let a = em.hardy_z(t).unwrap();
            let b = rs.hardy_z(t).unwrap();
            assert!((a - b).abs() < tol, "t={t}: {a} vs {b}");
        }
    }

    #[test]
    fn von_mangoldt_values() {
        assert_eq!(von_mangoldt(1), 0.0);
        assert_eq!(von_mangoldt(8), 2f64.ln());
        assert_eq!(von_mangoldt(6), 0.0);
        assert_eq!(von_mangoldt(97), 97f64.ln());
        assert_eq!(von_mangoldt(3 * 3 * 3 * 3), 3f64.ln());
        assert_eq!(von_mangoldt(2 * 49), 0.0);
    }

    #[test]
    fn policy_validation() {
        let p = PrecisionPolicy { working_digits: 30, ..PrecisionPolicy::default() };
        assert!(ZetaEngine::new(p).is_err());
    }
}
