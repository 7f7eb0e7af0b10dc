//! Zero ordinates on the critical line, `N(t)` and `S₁(t)` by quadrature.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Float;

use super::ZetaEngine;
use crate::quadrature::Quadrature;
use crate::{Error, Result};

const BASE_STEP: f64 = 0.1;
const CHECKPOINT_SPACING: f64 = 20.0;
const MAX_REFINE: u32 = 6;

/// Zero ordinates `0 < γ ≤ height` with isolation radii.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ZeroSet {
    pub height: f64,
    pub ordinates: Vec<f64>,
    /// Each zero lies within `radius` of its ordinate.
    pub radii: Vec<f64>,
}

/// Values of the zeta stack at one point of the critical line.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CriticalSample {
    pub t: f64,
    pub zeta_half: Complex64,
    pub z: f64,
    pub n_count: u64,
    pub s: f64,
    pub s1: f64,
}

impl ZeroSet {
    /// Assembles a set from cached ordinates (sorted ascending).
    pub fn from_parts(height: f64, ordinates: Vec<f64>, radii: Vec<f64>) -> Result<Self> {
        if ordinates.len() != radii.len() {
            return Err(Error::InvalidParams("ordinate and radius lists differ in length".into()));
        }
        if ordinates.windows(2).any(|w| w[0] >= w[1]) || ordinates.iter().any(|&g| g <= 0.0 || g > height) {
            return Err(Error::InvalidParams("ordinates must be increasing and lie in (0, height]".into()));
        }
        Ok(Self { height, ordinates, radii })
    }

    pub fn compute(engine: &ZetaEngine, height: f64) -> Result<Self> {
        if !(height > 0.0 && height.is_finite()) {
            return Err(Error::InvalidParams(alloc::format!("height must be positive, got {height}")));
        }
        let tol = engine.policy().zero_isolation_tol;
        let mut ordinates = Vec::new();
        let mut radii = Vec::new();
        let mut a = 0.0;
        while a < height {
            let b = (a + CHECKPOINT_SPACING).min(height);
            let mut level = 0;
            loop {
                let step = BASE_STEP / f64::from(1u32 << level);
                let found = scan(engine, a, b, step, tol)?;
                let check = checkpoint(&ordinates, &found, b);
                let expected = argument_count(engine, check)?;
                let below = ordinates.iter().chain(found.iter().map(|z| &z.0)).filter(|&&g| g < check).count();
                if expected == below as i64 {
                    for (g, r) in found {
                        ordinates.push(g);
                        radii.push(r);
                    }
                    break;
                }
                level += 1;
                if level > MAX_REFINE {
                    return Err(Error::ZeroCountMismatch { height: check, found: below, expected });
                }
            }
            a = b;
        }
        Ok(Self { height, ordinates, radii })
    }

    /// `N(t)`, the number of ordinates in `(0, t)`.
    pub fn count(&self, t: f64, tol: f64) -> Result<u64> {
        if t > self.height {
            return Err(Error::HeightOutOfRange { height: t, max: self.height });
        }
        let t_abs = t.abs();
        let idx = self.ordinates.partition_point(|&g| g < t_abs);
        for j in [idx.wrapping_sub(1), idx] {
            if let Some(&g) = self.ordinates.get(j) {
                if (g - t_abs).abs() <= tol.max(self.radii[j]) {
                    return Err(Error::OrdinateTooClose { t, tol });
                }
            }
        }
        if t <= 0.0 {
            return Ok(0);
        }
        Ok(idx as u64)
    }

    /// `S₁(t) = ∫₀ᵗ S(τ) dτ` by panel quadrature of `S` with the ordinates as
    /// breakpoints; even in `t`.
    pub fn s1(&self, engine: &ZetaEngine, t: f64) -> Result<f64> {
        let t = t.abs();
        if t > self.height {
            return Err(Error::HeightOutOfRange { height: t, max: self.height });
        }
        if t == 0.0 {
            return Ok(0.0);
        }
        let mut pts = alloc::vec![0.0];
        pts.extend(self.ordinates.iter().copied().filter(|&g| g < t));
        pts.push(t);
        let q = Quadrature::new(engine.policy().quadrature_abs_tol * 0.1, 1e-12).with_max_intervals(100_000);
        let mut err = None;
        let r = q.integrate_with_breaks(
            |x: f64| match engine.s_of(x) {
                Ok(v) => v,
                Err(e) => {
                    err.get_or_insert(e);
                    0.0
                }
            },
            &pts,
        );
        if let Some(e) = err {
            return Err(e);
        }
        Ok(r?.value)
    }

    /// `S₁(t)` from the closed form `Σ_{γ<t}(t − γ) − t − (1/π)∫₀ᵗ θ`, valid when
    /// every zero up to `t` is on the line and in the set.
    pub fn s1_from_ordinates(&self, engine: &ZetaEngine, t: f64) -> Result<f64> {
        let t = t.abs();
        if t > self.height {
            return Err(Error::HeightOutOfRange { height: t, max: self.height });
        }
        let sum: f64 = self.ordinates.iter().filter(|&&g| g < t).map(|g| t - g).sum();
        let q = Quadrature::new(1e-12, 1e-13);
        let mut pts = alloc::vec![0.0];
        let mut x = 25.0;
        while x < t {
            pts.push(x);
            x += 25.0;
        }
        pts.push(t);
        let th = q.integrate_with_breaks(|x: f64| engine.theta(x), &pts)?;
        Ok(sum - t - th.value / PI)
    }

    /// `h(t) = S₁(t) − (1/π)∫_{1/2}^2 log|ζ(σ+it)| dσ`.
    pub fn h_diag(&self, engine: &ZetaEngine, t: f64) -> Result<f64> {
        self.count(t, engine.policy().zero_isolation_tol)?;
        Ok(self.s1(engine, t)? - engine.horizontal_log_integral(t, 0.5, 2.0)?)
    }

    /// The full stack of values at `t` (`0 < t ≤ height`, not an ordinate).
    pub fn sample(&self, engine: &ZetaEngine, t: f64) -> Result<CriticalSample> {
        let n_count = self.count(t, engine.policy().zero_isolation_tol)?;
        Ok(CriticalSample {
            t,
            zeta_half: engine.zeta(0.5, t)?,
            z: engine.hardy_z(t)?,
            n_count,
            s: engine.s_of(t)?,
            s1: self.s1(engine, t)?,
        })
    }
}

// Picks a verification point at or below b that sits in a gap between zeros.
fn checkpoint(known: &[f64], found: &[(f64, f64)], b: f64) -> f64 {
    let mut all: Vec<f64> = known.iter().rev().take(2).copied().collect();
    all.extend(found.iter().map(|z| z.0));
    all.sort_by(f64::total_cmp);
    let near = all.iter().any(|&g| (g - b).abs() < 0.02);
    if !near {
        return b;
    }
    // midpoint of the last gap below b
    let below: Vec<f64> = all.iter().copied().filter(|&g| g < b + 0.02).collect();
    match below.len() {
        0 | 1 => b - 0.05,
        n => 0.5 * (below[n - 2] + below[n - 1]),
    }
}

fn argument_count(engine: &ZetaEngine, t: f64) -> Result<i64> {
    if t <= 0.0 {
        return Ok(0);
    }
    let v = engine.theta(t) / PI + 1.0 + engine.s_of(t)?;
    Ok(v.round() as i64)
}

// Sign changes of Z on (a, b] refined to brackets of half-width ≤ tol.
fn scan(engine: &ZetaEngine, a: f64, b: f64, step: f64, tol: f64) -> Result<Vec<(f64, f64)>> {
    let n = ((b - a) / step).ceil().max(1.0) as usize;
    let h = (b - a) / n as f64;
    let mut vals = alloc::vec![0.0; n + 1];
    engine.hardy_z_grid(a, h, &mut vals)?;
    vals[n] = engine.hardy_z(b)?;
    let mut out = Vec::new();
    for k in 0..n {
        let (x0, x1) = (a + k as f64 * h, if k + 1 == n { b } else { a + (k + 1) as f64 * h });
        let (f0, f1) = (vals[k], vals[k + 1]);
        if f0 == 0.0 {
            // an exact grid zero is recorded by the interval ending there
            continue;
        }
        if f1 == 0.0 {
            out.push((x1, 0.0));
        } else if f0 * f1 < 0.0 {
            out.push(refine(engine, x0, x1, f0, f1, tol)?);
        }
    }
    Ok(out)
}

// Safeguarded secant: returns (ordinate, radius).
fn refine(engine: &ZetaEngine, mut lo: f64, mut hi: f64, mut flo: f64, mut fhi: f64, tol: f64) -> Result<(f64, f64)> {
    for _ in 0..200 {
        if hi - lo <= 2.0 * tol {
            break;
        }
        let width = hi - lo;
        let mut x = lo - flo * (hi - lo) / (fhi - flo);
        if !(x > lo && x < hi) {
            x = 0.5 * (lo + hi);
        }
        let fx = engine.hardy_z(x)?;
        if fx == 0.0 {
            return Ok((x, 0.0));
        }
        if (fx < 0.0) == (flo < 0.0) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
        // probe a step of tol past the estimate to close the bracket quickly
        let probe = if lo == x { (x + tol).min(hi) } else { (x - tol).max(lo) };
        if probe > lo && probe < hi {
            let fp = engine.hardy_z(probe)?;
            if (fp < 0.0) == (flo < 0.0) {
                lo = probe;
                flo = fp;
            } else {
                hi = probe;
                fhi = fp;
            }
        }
        if hi - lo > 0.5 * width {
            // slow progress: bisect
            let m = 0.5 * (lo + hi);
            let fm = engine.hardy_z(m)?;
            if (fm < 0.0) == (flo < 0.0) {
                lo = m;
                flo = fm;
            } else {
                hi = m;
                fhi = fm;
            }
        }
    }
    Ok((0.5 * (lo + hi), 0.5 * (hi - lo)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_zeros_and_counts() {
        let e = ZetaEngine::default();
        let zs = e.zeros(40.0).unwrap();
        assert_eq!(zs.ordinates.len(), 6);
        assert!((zs.ordinates[0] - 14.134_725_141_734_693).abs() < 1e-9);
        assert!((zs.ordinates[1] - 21.022_039_638_771_554).abs() < 1e-9);
        assert_eq!(zs.count(14.0, 1e-10).unwrap(), 0);
        assert_eq!(zs.count(15.0, 1e-10).unwrap(), 1);
        assert!(matches!(zs.count(zs.ordinates[2], 1e-10), Err(Error::OrdinateTooClose { .. })));
    }

    #[test]
    fn cached_parts_validated() {
        assert!(ZeroSet::from_parts(10.0, alloc::vec![3.0, 2.0], alloc::vec![0.0, 0.0]).is_err());
        assert!(ZeroSet::from_parts(10.0, alloc::vec![3.0], alloc::vec![]).is_err());
        assert!(ZeroSet::from_parts(10.0, alloc::vec![3.0, 12.0], alloc::vec![0.0, 0.0]).is_err());
    }
}
