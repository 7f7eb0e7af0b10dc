//! Pole contributions: the residue term of the `ζ` convolution formula and
//! the branch-cut term of the `log ζ` formula.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::kernels::Kernel;
use crate::quadrature::Quadrature;
use crate::Result;

/// Candidate forms of the pole term in the `ζ` convolution formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ResidueConvention {
    /// `+2π K(−t − i(1−σ))`.
    Statement,
    /// `−2π K(t − i(1−σ))`.
    Proof,
    /// `−2π K(−t − i(1−σ))`; the form that closes the identity.
    Closing,
}

impl ResidueConvention {
    pub const ALL: [ResidueConvention; 3] = [Self::Statement, Self::Proof, Self::Closing];

    pub fn name(self) -> &'static str {
        match self {
            Self::Statement => "statement",
            Self::Proof => "proof",
            Self::Closing => "closing",
        }
    }
}

/// The convention used unless a caller asks otherwise.
pub const RESIDUE_CONVENTION: ResidueConvention = ResidueConvention::Closing;

/// Additive pole term so that `lhs = dirichlet_rhs + residue_term`.
pub fn residue_term(sigma: f64, t: f64, kernel: &Kernel, convention: ResidueConvention) -> Complex64 {
    let shift = 1.0 - sigma;
    match convention {
        ResidueConvention::Statement => kernel.value(Complex64::new(-t, -shift)) * (2.0 * PI),
        ResidueConvention::Proof => kernel.value(Complex64::new(t, -shift)) * (-2.0 * PI),
        ResidueConvention::Closing => kernel.value(Complex64::new(-t, -shift)) * (-2.0 * PI),
    }
}

/// `−2π ∫_0^{1−σ} K(−t − iα) dα`, the contribution of the cut of `log ζ`
/// from `s = 1` back to the line `Re s = σ`.
pub fn logzeta_pole_term(sigma: f64, t: f64, kernel: &Kernel) -> Result<Complex64> {
    let q = Quadrature::new(1e-15, 1e-13);
    let r = q.integrate(|a: f64| kernel.value(Complex64::new(-t, -a)), 0.0, 1.0 - sigma)?;
    Ok(r.value * (-2.0 * PI))
}

/// Picks the convention whose residual `|gap − term|` has the smallest
/// maximum over the supplied closure gaps `(σ, t, kernel, lhs − dirichlet)`.
/// Returns the winner and the maximal residual of every candidate.
pub fn resolve_residue_convention(
    gaps: &[(f64, f64, Kernel, Complex64)],
) -> (ResidueConvention, Vec<(ResidueConvention, f64)>) {
    let mut scores = Vec::new();
    for c in ResidueConvention::ALL {
        let worst = gaps
            .iter()
            .map(|(sigma, t, k, gap)| (*gap - residue_term(*sigma, *t, k, c)).norm())
            .fold(0.0, f64::max);
        scores.push((c, worst));
    }
    let best = scores.iter().min_by(|a, b| a.1.total_cmp(&b.1)).map(|s| s.0).unwrap_or(RESIDUE_CONVENTION);
    (best, scores)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_at_origin_near_one() {
        let k = Kernel::EvenGauss { scale: 1.5 };
        let v = residue_term(1.0 - 1e-12, 0.0, &k, RESIDUE_CONVENTION);
        assert!(v.im == 0.0 || v.im.abs() < 1e-20);
        assert!((v.re + 2.0 * PI * k.value_real(0.0)).abs() < 1e-9);
    }

    #[test]
    fn bounded_by_majorant() {
        for k in [Kernel::Fejer { width: 2.0 }, Kernel::EvenGauss { scale: 2.4 }, Kernel::OddGauss { scale: 2.4 }] {
            for &(sigma, t) in &[(0.5, 10.0), (0.6, 40.0), (0.75, 3.0)] {
                for c in ResidueConvention::ALL {
                    assert!(residue_term(sigma, t, &k, c).norm() <= 2.0 * PI * k.majorant(sigma, t) * (1.0 + 1e-12));
                }
            }
        }
    }

    #[test]
    fn pole_term_matches_closed_form() {
        // even Gaussian: ∫_0^c s e^{-s²(−t−iα)²/2} dα has no elementary form,
        // but for t = 0 it is s ∫_0^c e^{s²α²/2} dα, a real number
        let k = Kernel::EvenGauss { scale: 1.0 };
        let v = logzeta_pole_term(0.5, 0.0, &k).unwrap();
        let mut simpson = 0.0;
        let n = 2000;
        for i in 0..=n {
            let a = 0.5 * i as f64 / n as f64;
            let w = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            simpson += w * (0.5 * a * a).exp();
        }
        simpson *= 0.5 / n as f64 / 3.0;
        assert!((v.re + 2.0 * PI * simpson).abs() < 1e-12 && v.im.abs() < 1e-15);
    }

    #[test]
    fn resolver_picks_exact_match() {
        let k = Kernel::EvenGauss { scale: 2.0 };
        let gaps: Vec<_> = [(0.6, 1.0), (0.5, 0.3)]
            .iter()
            .map(|&(s, t)| (s, t, k, residue_term(s, t, &k, ResidueConvention::Proof)))
            .collect();
        let (best, scores) = resolve_residue_convention(&gaps);
        assert_eq!(best, ResidueConvention::Proof);
        assert_eq!(scores.len(), 3);
    }
}
