use core::f64::consts::PI;

use resonance_core::integrals::*;
use resonance_core::kernels::Kernel;
use resonance_core::zeta::ZetaEngine;
use resonance_core::Complex64;

fn gauss_scale() -> f64 {
    1e5f64.ln().ln()
}

#[test]
fn residue_convention_resolves_to_closing() {
    let e = ZetaEngine::default();
    let points = [
        (0.6, 40.0, Kernel::Fejer { width: 2.0 }),
        (0.5, 10.0, Kernel::Fejer { width: 2.0 }),
        (0.75, 100.0, Kernel::Fejer { width: 2.0 }),
        (0.5, 10.0, Kernel::Fejer { width: 5.0 }),
        (0.6, 3.0, Kernel::EvenGauss { scale: 0.8 }),
    ];
    let gaps: Vec<_> = points
        .iter()
        .map(|&(sigma, t, k)| {
            let r = zeta_identity(&e, sigma, t, &k, RESIDUE_CONVENTION).unwrap();
            (sigma, t, k, r.lhs - (r.rhs - residue_term(sigma, t, &k, RESIDUE_CONVENTION)))
        })
        .collect();
    let (best, scores) = resolve_residue_convention(&gaps);
    assert_eq!(best, ResidueConvention::Closing);
    for (c, worst) in scores {
        if c == ResidueConvention::Closing {
            assert!(worst < 1e-6, "{worst}");
        } else {
            assert!(worst > 1e-3, "{c:?} closes unexpectedly: {worst}");
        }
    }
}

#[test]
fn zeta_identity_closes_at_sample_points() {
    let e = ZetaEngine::default();
    for k in [Kernel::EvenGauss { scale: gauss_scale() }, Kernel::Fejer { width: 5.0 }] {
        let r = zeta_identity(&e, 0.6, 40.0, &k, RESIDUE_CONVENTION).unwrap();
        assert!(r.residual <= 1e-6, "{r:?}");
        assert!(r.budget.total() < 1e-7);
    }
}

#[test]
fn fejer_rhs_has_compact_support() {
    let w = 5.0;
    let r = dirichlet_rhs(&Kernel::Fejer { width: w }, 0.6, 40.0, Flavor::Zeta, &DirichletOptions::default()).unwrap();
    assert_eq!(r.terms, (2.0 * w).exp().floor() as u64);
}

#[test]
fn convolution_is_linear_in_the_kernel() {
    let e = ZetaEngine::default();
    let o = ConvolutionOptions::default();
    let k1 = Kernel::EvenGauss { scale: 1.5 };
    let k2 = Kernel::OddGauss { scale: 1.5 };
    let a = convolution_lhs(&e, None, 0.6, 25.0, &k1, Integrand::Zeta, &o).unwrap().value;
    let b = convolution_lhs(&e, None, 0.6, 25.0, &k2, Integrand::Zeta, &o).unwrap().value;
    // 2 K₁ − 3 K₂ integrated directly
    let q = resonance_core::quadrature::Quadrature::new(1e-12, 0.0).with_max_intervals(100_000);
    let reach = gaussian_reach(&k1, 1e-17).max(gaussian_reach(&k2, 1e-17));
    let pts: Vec<f64> = (0..=64).map(|i| -reach + 2.0 * reach * i as f64 / 64.0).collect();
    let c = q
        .integrate_with_breaks(
            |u: f64| e.zeta(0.6, 25.0 + u).unwrap() * (2.0 * k1.value_real(u) - 3.0 * k2.value_real(u)),
            &pts,
        )
        .unwrap()
        .value;
    assert!((c - (a * 2.0 - b * 3.0)).norm() < 1e-9);
}

#[test]
fn logzeta_identity_is_exact_with_branch_term() {
    let e = ZetaEngine::default();
    let zs = e.zeros(60.0).unwrap();
    let k = Kernel::EvenGauss { scale: gauss_scale() };
    for sigma in [0.5, 0.6] {
        let r = logzeta_identity(&e, Some(&zs), sigma, 40.0, &k, true).unwrap();
        assert!(r.residual < 1e-8, "{r:?}");
    }
    // without it the gap is exactly the branch term
    let k = Kernel::EvenGauss { scale: 0.5 };
    let zs = e.zeros(120.0).unwrap();
    let r = logzeta_identity(&e, Some(&zs), 0.6, 8.0, &k, false).unwrap();
    let pole = logzeta_pole_term(0.6, 8.0, &k).unwrap();
    assert!(pole.norm() > 1e-4);
    assert!(((r.lhs - r.rhs) - pole).norm() < 1e-8);
}

#[test]
fn s_identity_residual_is_the_branch_term() {
    let e = ZetaEngine::default();
    let zs = e.zeros(150.0).unwrap();
    let k = Kernel::OddGauss { scale: 0.2 };
    let r = s_identity(&e, &zs, 30.0, &k).unwrap();
    let pole = logzeta_pole_term(0.5, 30.0, &k).unwrap().im / PI;
    assert!((r.lhs.re - r.rhs.re - pole).abs() < 1e-10);
    assert!(r.residual <= strip_envelope(&k, 0.5, 30.0));
}

#[test]
fn s1_identity_with_companion_terms() {
    let e = ZetaEngine::default();
    let zs = e.zeros(60.0).unwrap();
    let k = Kernel::EvenGauss { scale: 1.0 };
    let exact = s1_identity(&e, &zs, 30.0, &k, true).unwrap();
    assert!(exact.residual < 1e-10, "{exact:?}");
    let bounded = s1_identity(&e, &zs, 30.0, &k, false).unwrap();
    assert!(bounded.residual <= bounded.budget.total());
}

#[test]
fn logzeta_rhs_lives_on_prime_powers() {
    let k = Kernel::EvenGauss { scale: 0.3 };
    let r = dirichlet_rhs(&k, 0.5, 0.0, Flavor::LogZeta, &DirichletOptions::default()).unwrap();
    let mut expect = Complex64::new(0.0, 0.0);
    for n in 2u64..2000 {
        let lam = resonance_core::zeta::von_mangoldt(n);
        if lam > 0.0 {
            let l = (n as f64).ln();
            expect += k.fourier(l) * (lam / l) * (-0.5 * l).exp();
        }
    }
    assert!((r.value - expect).norm() < 1e-14);
}
