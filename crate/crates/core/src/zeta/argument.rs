//! Continuous variation of `arg ζ` along horizontal segments, and the
//! quantities built from it.

use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Float;

use super::ZetaEngine;
use crate::quadrature::Quadrature;
use crate::special::integral_ln_abs;
use crate::Result;

// Beyond this abscissa log|ζ| < 2^{-60}; the remaining tail is below 1e-18.
const SIGMA_FAR: f64 = 60.0;
const SIGMA_BREAKS: [f64; 7] = [0.5, 1.0, 2.0, 4.0, 8.0, 16.0, SIGMA_FAR];
const MAX_STEP: f64 = 0.25;
const MIN_STEP: f64 = 1e-9;

pub(super) fn log_zeta(engine: &ZetaEngine, sigma: f64, t: f64) -> Result<Complex64> {
    if t < 0.0 {
        return log_zeta(engine, sigma, -t).map(|v| v.conj());
    }
    if t == 0.0 {
        let v = engine.zeta(sigma, 0.0)?;
        return Ok(Complex64::new(v.norm().ln(), 0.0));
    }
    let mut x = 2.0;
    let mut z = engine.zeta(2.0, t)?;
    if sigma >= 2.0 {
        // ζ stays in the disc |ζ − 1| < 1 here, so the principal branch is
        // the continuous one
        return Ok(engine.zeta(sigma, t)?.ln());
    }
    let mut arg = z.arg();
    let mut step = MAX_STEP;
    while x > sigma {
        let target = (x - step).max(sigma);
        let zn = engine.zeta(target, t)?;
        let d = (zn / z).arg();
        let ratio = zn.norm() / z.norm();
        let suspicious = d.abs() > PI / 4.0 || !(0.125..=8.0).contains(&ratio);
        if suspicious && step > MIN_STEP {
            step *= 0.5;
            continue;
        }
        arg += d;
        x = target;
        z = zn;
        step = (2.0 * step).min(MAX_STEP);
    }
    Ok(Complex64::new(z.norm().ln(), arg))
}

pub(super) fn s_of(engine: &ZetaEngine, t: f64) -> Result<f64> {
    if t == 0.0 {
        return Ok(0.0);
    }
    if t < 0.0 {
        return s_of(engine, -t).map(|v| -v);
    }
    if engine.zeta(0.5, t)?.norm() < 1e-8 {
        // at (or numerically at) an ordinate: mean of the one-sided limits
        let d = 1e-6;
        let lo = log_zeta(engine, 0.5, t - d)?.im;
        let hi = log_zeta(engine, 0.5, t + d)?.im;
        return Ok(0.5 * (lo + hi) / PI);
    }
    Ok(log_zeta(engine, 0.5, t)?.im / PI)
}

pub(super) fn horizontal_log_integral(engine: &ZetaEngine, t: f64, lo: f64, hi: f64) -> Result<f64> {
    let q = Quadrature::new(engine.policy.quadrature_abs_tol, 1e-12);
    let mut breaks = alloc::vec![lo];
    breaks.extend(SIGMA_BREAKS.iter().copied().filter(|&b| b > lo && b < hi));
    breaks.push(hi);
    let mut err = None;
    let r = q.integrate_with_breaks(
        |s: f64| match engine.zeta(s, t) {
            Ok(v) => v.norm().ln(),
            Err(e) => {
                err.get_or_insert(e);
                0.0
            }
        },
        &breaks,
    );
    if let Some(e) = err {
        return Err(e);
    }
    Ok(r?.value / PI)
}

pub(super) fn s1_littlewood(engine: &ZetaEngine, t: f64) -> Result<f64> {
    let t = t.abs();
    if t == 0.0 {
        return Ok(0.0);
    }
    let far = horizontal_log_integral(engine, t, 0.5, SIGMA_FAR)?;
    Ok(far - engine.real_axis_log_integral / PI)
}

/// `∫_{1/2}^∞ log|ζ(σ)| dσ`, splitting off the logarithmic singularity at 1.
pub(super) fn real_axis_log_integral(engine: &ZetaEngine) -> Result<f64> {
    let q = Quadrature::new(1e-13, 1e-13);
    let smooth = q.integrate_with_breaks(
        |s: f64| {
            let v = super::euler_maclaurin::zeta(Complex64::new(s, 0.0), engine.policy.em_depth);
            ((s - 1.0) * v.re).abs().ln()
        },
        &SIGMA_BREAKS,
    )?;
    Ok(smooth.value - integral_ln_abs(0.5 - 1.0, SIGMA_FAR - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_axis_constant() {
        // independent high-precision quadrature
        let e = ZetaEngine::default();
        assert!((e.real_axis_log_integral() - 2.567_789_453_152_909).abs() < 1e-11);
    }

    #[test]
    fn log_zeta_matches_principal_log_right_of_two() {
        let e = ZetaEngine::default();
        let a = e.log_zeta(2.5, 17.0).unwrap();
        let b = e.zeta(2.5, 17.0).unwrap().ln();
        assert!((a - b).norm() < 1e-15);
        let c = e.log_zeta(0.6, -17.0).unwrap();
        let d = e.log_zeta(0.6, 17.0).unwrap();
        assert!((c - d.conj()).norm() < 1e-15);
        // exp(log ζ) = ζ
        let z = e.zeta(0.6, 17.0).unwrap();
        assert!((d.exp() - z).norm() < 1e-13);
    }

    #[test]
    fn s_is_odd_and_zero_at_origin() {
        let e = ZetaEngine::default();
        assert_eq!(e.s_of(0.0).unwrap(), 0.0);
        for &t in &[5.0, 21.3, 48.2, 77.7] {
            assert_eq!(e.s_of(-t).unwrap(), -e.s_of(t).unwrap());
        }
    }

    #[test]
    fn s_jumps_by_one_at_first_zero() {
        let e = ZetaEngine::default();
        let g = 14.134_725_141_734_693;
        let jump = e.s_of(g + 1e-4).unwrap() - e.s_of(g - 1e-4).unwrap();
        assert!((jump - 1.0).abs() < 1e-3, "{jump}");
        let mid = e.s_of(g).unwrap();
        assert!((mid - 0.5 * (e.s_of(g + 1e-6).unwrap() + e.s_of(g - 1e-6).unwrap())).abs() < 1e-6);
    }
}
