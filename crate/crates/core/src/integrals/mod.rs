//! Both sides of the kernel convolution formulas for `ζ`, `log ζ`, `S` and
//! `S₁`, and the resonated integrals with their pair-sum identities and
//! inequalities.

mod convolution;
mod dirichlet;
mod moments;
mod residue;

use alloc::string::String;

use num_complex::Complex64;

pub use convolution::{convolution_lhs, gaussian_reach, ConvolutionOptions, ConvolutionValue, Integrand};
pub use dirichlet::{dirichlet_rhs, for_each_prime_power, log_cutoff, DirichletOptions, DirichletSum, Flavor};
pub use moments::{
    base_check, divisor_weighted_sum, lemma_m2log_lower, ll2_quantity, min_fourier_up_to, pair_sum, rf_check,
    weighted_moment, BaseCheck, M2LogReport, Ll2Report, MomentOptions, MomentValue, MomentWeight, PairSum, Shift,
    PAIR_CUTOFF,
};
pub use residue::{logzeta_pole_term, residue_term, resolve_residue_convention, ResidueConvention, RESIDUE_CONVENTION};

use crate::kernels::Kernel;
use crate::zeta::{ZeroSet, ZetaEngine};
use crate::Result;

/// Error budget attached to an identity check.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Budget {
    pub quadrature_error: f64,
    /// Neglected tails of the integral and the series.
    pub truncation_bound: f64,
    /// Known-size terms deliberately left out of the right-hand side.
    pub correction_bound: f64,
    pub evaluations: usize,
    pub terms: u64,
}

impl Budget {
    pub fn total(&self) -> f64 {
        self.quadrature_error + self.truncation_bound + self.correction_bound
    }
}

/// One evaluated identity: `residual = |lhs − rhs|`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IdentityReport {
    pub check_id: String,
    pub sigma: f64,
    pub t: f64,
    pub kernel: Kernel,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
    pub budget: Budget,
}

impl IdentityReport {
    fn new(check_id: &str, sigma: f64, t: f64, kernel: Kernel, lhs: Complex64, rhs: Complex64, budget: Budget) -> Self {
        Self { check_id: check_id.into(), sigma, t, kernel, lhs, rhs, residual: (lhs - rhs).norm(), budget }
    }
}

/// `∫ ζ(σ+i(t+u)) K(u) du` against `Σ K̂(log n) n^{−σ−it}` plus the pole term.
pub fn zeta_identity(
    engine: &ZetaEngine,
    sigma: f64,
    t: f64,
    kernel: &Kernel,
    convention: ResidueConvention,
) -> Result<IdentityReport> {
    let lhs = convolution_lhs(engine, None, sigma, t, kernel, Integrand::Zeta, &ConvolutionOptions::default())?;
    let rhs = dirichlet_rhs(kernel, sigma, t, Flavor::Zeta, &DirichletOptions::default())?;
    let pole = residue_term(sigma, t, kernel, convention);
    let budget = Budget {
        quadrature_error: lhs.quadrature_error,
        truncation_bound: lhs.tail_bound + rhs.truncation_bound,
        correction_bound: 0.0,
        evaluations: lhs.evaluations,
        terms: rhs.terms,
    };
    let id = alloc::format!("zeta/{}", convention.name());
    Ok(IdentityReport::new(&id, sigma, t, *kernel, lhs.value, rhs.value + pole, budget))
}

/// `∫ log ζ(σ+i(t+u)) K(u) du` against the prime-power series; with
/// `include_pole` the branch-cut term is added and the identity is exact
/// (no zeros off the line at these heights).
pub fn logzeta_identity(
    engine: &ZetaEngine,
    zeros: Option<&ZeroSet>,
    sigma: f64,
    t: f64,
    kernel: &Kernel,
    include_pole: bool,
) -> Result<IdentityReport> {
    let lhs = convolution_lhs(engine, zeros, sigma, t, kernel, Integrand::LogZeta, &ConvolutionOptions::default())?;
    let rhs = dirichlet_rhs(kernel, sigma, t, Flavor::LogZeta, &DirichletOptions::default())?;
    let pole = if include_pole { logzeta_pole_term(sigma, t, kernel)? } else { Complex64::new(0.0, 0.0) };
    let budget = Budget {
        quadrature_error: lhs.quadrature_error,
        truncation_bound: lhs.tail_bound + rhs.truncation_bound,
        correction_bound: 0.0,
        evaluations: lhs.evaluations,
        terms: rhs.terms,
    };
    let id = if include_pole { "logzeta/exact" } else { "logzeta" };
    Ok(IdentityReport::new(id, sigma, t, *kernel, lhs.value, rhs.value + pole, budget))
}

/// `∫ S(t+u) K(u) du` against `(1/π) Im Σ Λ(n)/log n K̂(log n) n^{−1/2−it}`.
pub fn s_identity(engine: &ZetaEngine, zeros: &ZeroSet, t: f64, kernel: &Kernel) -> Result<IdentityReport> {
    let lhs = convolution_lhs(engine, Some(zeros), 0.5, t, kernel, Integrand::S, &ConvolutionOptions::default())?;
    let rhs = dirichlet_rhs(kernel, 0.5, t, Flavor::S, &DirichletOptions::default())?;
    let budget = Budget {
        quadrature_error: lhs.quadrature_error,
        truncation_bound: lhs.tail_bound + rhs.truncation_bound,
        correction_bound: 0.0,
        evaluations: lhs.evaluations,
        terms: rhs.terms,
    };
    Ok(IdentityReport::new("S", 0.5, t, *kernel, lhs.value, rhs.value, budget))
}

/// `∫ (S₁ − h)(t+u) K(u) du` against `(1/π) Re Σ Λ(n)/log² n K̂(log n) n^{−1/2−it}`.
/// The `n^{−2}` companion terms are carried as a bound, or added exactly
/// with `exact_companion`.
pub fn s1_identity(
    engine: &ZetaEngine,
    zeros: &ZeroSet,
    t: f64,
    kernel: &Kernel,
    exact_companion: bool,
) -> Result<IdentityReport> {
    let lhs = convolution_lhs(engine, Some(zeros), 0.5, t, kernel, Integrand::S1, &ConvolutionOptions::default())?;
    let rhs = dirichlet_rhs(kernel, 0.5, t, Flavor::S1, &DirichletOptions::default())?;
    let (value, correction_bound, id) = if exact_companion {
        (rhs.value.re + rhs.correction, 0.0, "S1/exact")
    } else {
        (rhs.value.re, rhs.correction_bound, "S1")
    };
    let budget = Budget {
        quadrature_error: lhs.quadrature_error,
        truncation_bound: lhs.tail_bound + rhs.truncation_bound,
        correction_bound,
        evaluations: lhs.evaluations,
        terms: rhs.terms,
    };
    Ok(IdentityReport::new(id, 0.5, t, *kernel, lhs.value, Complex64::new(value, 0.0), budget))
}

/// `V(t) = max_{σ−2 ≤ y ≤ 0} |K(t + iy)|`.
pub fn strip_envelope(kernel: &Kernel, sigma: f64, t: f64) -> f64 {
    kernel.majorant(sigma, t)
}
