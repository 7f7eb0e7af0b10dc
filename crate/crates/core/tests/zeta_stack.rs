use core::f64::consts::PI;

use resonance_core::zeta::{PrecisionPolicy, ZetaEngine};
use resonance_core::Error;

fn rvm_main(t: f64) -> f64 {
    (t / (2.0 * PI)) * (t / (2.0 * PI * core::f64::consts::E)).ln() + 7.0 / 8.0
}

#[test]
fn zero_count_to_one_hundred() {
    let e = ZetaEngine::default();
    let zs = e.zeros(100.0).unwrap();
    assert_eq!(zs.count(100.0, 1e-10).unwrap(), 29);
    assert_eq!(zs.count(14.0, 1e-10).unwrap(), 0);
    assert_eq!(zs.count(15.0, 1e-10).unwrap(), 1);
    // N is nondecreasing and Z changes sign at each ordinate
    for (g, r) in zs.ordinates.iter().zip(&zs.radii) {
        assert!(*r <= 1e-10);
        let a = e.hardy_z(g - 1e-6).unwrap();
        let b = e.hardy_z(g + 1e-6).unwrap();
        assert!(a * b < 0.0, "no sign change at {g}");
    }
}

#[test]
fn riemann_von_mangoldt_residual() {
    let e = ZetaEngine::default();
    let zs = e.zeros(100.0).unwrap();
    let mut worst: f64 = 0.0;
    let mut t = 20.0;
    while t <= 100.0 {
        if let Ok(n) = zs.count(t, 1e-6) {
            let s = e.s_of(t).unwrap();
            worst = worst.max((s - (n as f64 - rvm_main(t))).abs());
        }
        t += 0.37;
    }
    assert!(worst <= 0.05, "worst residual {worst}");
}

#[test]
fn s_jumps_at_first_three_zeros() {
    let e = ZetaEngine::default();
    let zs = e.zeros(30.0).unwrap();
    for &g in zs.ordinates.iter().take(3) {
        let jump = e.s_of(g + 1e-4).unwrap() - e.s_of(g - 1e-4).unwrap();
        assert!((jump - 1.0).abs() < 1e-3, "jump {jump} at {g}");
    }
}

#[test]
fn s1_at_fifty_by_three_routes() {
    let e = ZetaEngine::default();
    let zs = e.zeros(60.0).unwrap();
    let reference = -1.198_763_566_018_62;
    let quad = zs.s1(&e, 50.0).unwrap();
    let closed = zs.s1_from_ordinates(&e, 50.0).unwrap();
    let little = e.s1_littlewood(50.0).unwrap();
    assert!((quad - reference).abs() < 1e-6, "{quad}");
    assert!((closed - reference).abs() < 1e-9, "{closed}");
    assert!((little - reference).abs() < 1e-8, "{little}");
    assert_eq!(zs.s1(&e, -50.0).unwrap(), quad);
    assert_eq!(zs.s1(&e, 0.0).unwrap(), 0.0);
}

#[test]
fn s1_derivative_is_s() {
    let e = ZetaEngine::default();
    let zs = e.zeros(40.0).unwrap();
    for &t in &[17.3, 26.0, 35.5] {
        let h = 1e-3;
        let d = (zs.s1_from_ordinates(&e, t + h).unwrap() - zs.s1_from_ordinates(&e, t - h).unwrap()) / (2.0 * h);
        assert!((d - e.s_of(t).unwrap()).abs() < 1e-4, "t={t}");
    }
}

#[test]
fn h_is_bounded_on_grid() {
    let e = ZetaEngine::default();
    let zs = e.zeros(100.0).unwrap();
    let mut worst: f64 = 0.0;
    let mut t = 10.0;
    while t <= 100.0 {
        match zs.h_diag(&e, t) {
            Ok(h) => {
                // h(t) = (1/π)(∫_2^∞ log|ζ| − ∫_{1/2}^∞ log|ζ(σ)|)
                let alt = e.horizontal_log_integral(t, 2.0, 60.0).unwrap() - e.real_axis_log_integral() / PI;
                assert!((h - alt).abs() < 1e-6, "t={t}: {h} vs {alt}");
                worst = worst.max(h.abs());
            }
            Err(Error::OrdinateTooClose { .. }) => {}
            Err(err) => panic!("{err}"),
        }
        t += 2.5;
    }
    // recorded grid maximum: 0.956398
    assert!(worst < 0.9564, "{worst}");
}

#[test]
fn z_matches_zeta_modulus_on_dense_grid() {
    let e = ZetaEngine::default();
    for k in 0..1000 {
        let t = 0.1 + k as f64 * 0.2;
        let z = e.hardy_z(t).unwrap();
        let v = e.zeta(0.5, t).unwrap();
        assert!((z.abs() - v.norm()).abs() < 1e-9, "t={t}");
    }
}

#[test]
fn fast_policy_on_the_line() {
    let e = ZetaEngine::new(PrecisionPolicy::fast()).unwrap();
    let t = 1.0e5;
    let z = e.hardy_z(t).unwrap();
    assert!((e.zeta(0.5, t).unwrap().norm() - z.abs()).abs() < 1e-12);
    assert!(matches!(e.zeta(0.6, t), Err(Error::HeightOutOfRange { .. })));
}
