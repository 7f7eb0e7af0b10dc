//! The verification suite behind `resonance verify`: convolution identities,
//! pair-sum identities, the combinatorial inequalities, kernel transforms,
//! the zeta stack and the resonance lift.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use resonance_core::integrals::*;
use resonance_core::kernels::Kernel;
use resonance_core::quadrature::Quadrature;
use resonance_core::resonator::ResonatorSet;
use resonance_core::special::phi;
use resonance_core::zeta::{PrecisionPolicy, ZeroSet, ZetaEngine};
use resonance_core::Error;

use crate::config::Resolved;
use crate::error::Result;
use crate::parallel;

/// One line of the pass/fail summary. Report-only checks have `hard = false`
/// and never fail a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    #[serde(with = "nonfinite")]
    pub value: f64,
    #[serde(with = "nonfinite")]
    pub bound: f64,
    pub passed: bool,
    pub hard: bool,
    pub detail: String,
}

impl Check {
    fn at_most(id: &str, value: f64, bound: f64, detail: String) -> Self {
        Self { id: id.into(), value, bound, passed: value <= bound, hard: true, detail }
    }

    fn holds(id: &str, ok: bool, value: f64, bound: f64, detail: String) -> Self {
        Self { id: id.into(), value, bound, passed: ok, hard: true, detail }
    }

    fn report(id: &str, value: f64, detail: String) -> Self {
        Self { id: id.into(), value, bound: f64::NAN, passed: true, hard: false, detail }
    }
}

// JSON has no inf or NaN; those are written as strings.
mod nonfinite {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else {
            s.serialize_str(&x.to_string())
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Flat CSV form of an [`IdentityReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityRow {
    pub check_id: String,
    pub sigma: f64,
    pub t: f64,
    pub kernel: String,
    pub kernel_param: f64,
    pub lhs_re: f64,
    pub lhs_im: f64,
    pub rhs_re: f64,
    pub rhs_im: f64,
    pub residual: f64,
    pub quadrature_error: f64,
    pub truncation_bound: f64,
    pub correction_bound: f64,
    pub evaluations: usize,
    pub terms: u64,
}

impl From<&IdentityReport> for IdentityRow {
    fn from(r: &IdentityReport) -> Self {
        Self {
            check_id: r.check_id.clone(),
            sigma: r.sigma,
            t: r.t,
            kernel: r.kernel.name().into(),
            kernel_param: r.kernel.parameter(),
            lhs_re: r.lhs.re,
            lhs_im: r.lhs.im,
            rhs_re: r.rhs.re,
            rhs_im: r.rhs.im,
            residual: r.residual,
            quadrature_error: r.budget.quadrature_error,
            truncation_bound: r.budget.truncation_bound,
            correction_bound: r.budget.correction_bound,
            evaluations: r.budget.evaluations,
            terms: r.budget.terms,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct SuiteOutput {
    pub checks: Vec<Check>,
    pub identities: Vec<IdentityReport>,
}

impl SuiteOutput {
    pub fn hard_failures(&self) -> usize {
        self.checks.iter().filter(|c| c.hard && !c.passed).count()
    }
}

pub const A1_SIGMAS: [f64; 3] = [0.5, 0.6, 0.75];
pub const A1_HEIGHTS: [f64; 3] = [10.0, 40.0, 100.0];
pub const A7_HEIGHTS: [f64; 3] = [30.0, 60.0, 90.0];
pub const A7_SCALE: f64 = 0.2;
const ZERO_HEIGHT: f64 = 200.0;

/// The convolution-identity kernels at height `t`.
pub fn a1_kernels(t: f64) -> Result<[Kernel; 3]> {
    Ok([Kernel::even_gauss(t)?, Kernel::Fejer { width: 2.0 }, Kernel::Fejer { width: 5.0 }])
}

pub fn run_suite(r: &Resolved, pool: &rayon::ThreadPool) -> Result<SuiteOutput> {
    // identities need Euler–Maclaurin accuracy; the lift needs Riemann–Siegel heights
    let exact = ZetaEngine::new(PrecisionPolicy { riemann_siegel_above: None, ..r.policy })?;
    let fast = ZetaEngine::new(r.policy)?;
    let tol = r.config.verify.residual_tol;
    let mut out = SuiteOutput::default();

    convention(&exact, &mut out)?;
    convolution_grid(&exact, pool, r.params.t, tol, &mut out)?;
    let zeros = exact.zeros(ZERO_HEIGHT)?;
    branch_identities(&exact, &zeros, r.params.t, tol, &mut out)?;

    let set = ResonatorSet::build(&r.params)?;
    pair_sums(&fast, &set, r.config.verify.pair_rel_tol, &mut out)?;
    inequalities(&set, &mut out)?;
    transforms(&r.params, &mut out)?;
    zeta_stack(&exact, &fast, &zeros, &mut out)?;
    if r.config.verify.lift {
        let lift = parallel::lift(pool, &fast, &set, MomentOptions::default().half_width_sd)?;
        out.checks.push(Check::holds(
            "A6/lift",
            lift.ratio > 1.0,
            lift.ratio,
            1.0,
            format!("weighted {:.6} / unweighted {:.6} over {} nodes", lift.weighted, lift.unweighted, lift.nodes),
        ));
    }
    s_envelope_check(&exact, &zeros, &mut out)?;
    let ll2 = ll2_quantity(&set);
    let has_prime = set.support.iter().any(|e| e.factors.len() == 1);
    out.checks.push(Check::holds(
        "A8/ll2",
        !has_prime || ll2.value > 0.0,
        ll2.value,
        0.0,
        format!("comparison γ√(L1 L3/L2) = {:.6}, ratio {:.6}", ll2.comparison, ll2.ratio()),
    ));
    Ok(out)
}

fn convention(e: &ZetaEngine, out: &mut SuiteOutput) -> Result<()> {
    let points = [
        (0.6, 40.0, Kernel::Fejer { width: 2.0 }),
        (0.5, 10.0, Kernel::Fejer { width: 2.0 }),
        (0.75, 100.0, Kernel::Fejer { width: 2.0 }),
        (0.5, 10.0, Kernel::Fejer { width: 5.0 }),
        (0.6, 3.0, Kernel::EvenGauss { scale: 0.8 }),
    ];
    let mut gaps = Vec::new();
    for (sigma, t, k) in points {
        let r = zeta_identity(e, sigma, t, &k, RESIDUE_CONVENTION)?;
        gaps.push((sigma, t, k, r.lhs - (r.rhs - residue_term(sigma, t, &k, RESIDUE_CONVENTION))));
    }
    let (best, scores) = resolve_residue_convention(&gaps);
    let detail = scores.iter().map(|(c, w)| format!("{} {w:.2e}", c.name())).collect::<Vec<_>>().join(", ");
    let worst = scores.iter().find(|s| s.0 == best).map_or(f64::NAN, |s| s.1);
    out.checks.push(Check::holds("A1/residue_convention", best == RESIDUE_CONVENTION, worst, 1e-6, detail));
    Ok(())
}

fn convolution_grid(
    e: &ZetaEngine,
    pool: &rayon::ThreadPool,
    t_scale: f64,
    tol: f64,
    out: &mut SuiteOutput,
) -> Result<()> {
    for k in a1_kernels(t_scale)? {
        let points: Vec<(f64, f64)> =
            A1_SIGMAS.iter().flat_map(|&s| A1_HEIGHTS.iter().map(move |&t| (s, t))).collect();
        let reports = parallel::map(pool, &points, |&(s, t)| zeta_identity(e, s, t, &k, RESIDUE_CONVENTION));
        let reports = reports.into_iter().collect::<std::result::Result<Vec<_>, _>>()?;
        let worst = reports.iter().map(|r| r.residual).fold(0.0, f64::max);
        let id = format!("A1/zeta/{}({:.4})", k.name(), k.parameter());
        out.checks.push(Check::at_most(&id, worst, tol, format!("worst of {} points", reports.len())));
        out.identities.extend(reports);
    }
    Ok(())
}

fn branch_identities(e: &ZetaEngine, zeros: &ZeroSet, t_scale: f64, tol: f64, out: &mut SuiteOutput) -> Result<()> {
    let k = Kernel::even_gauss(t_scale)?;
    let mut worst: f64 = 0.0;
    for sigma in [0.5, 0.6] {
        let r = logzeta_identity(e, Some(zeros), sigma, 40.0, &k, true)?;
        worst = worst.max(r.residual);
        out.identities.push(r);
    }
    out.checks.push(Check::at_most("logzeta/exact", worst, tol, "t = 40, sigma in {0.5, 0.6}".into()));

    let k1 = Kernel::EvenGauss { scale: 1.0 };
    let exact = s1_identity(e, zeros, 30.0, &k1, true)?;
    out.checks.push(Check::at_most("S1/exact", exact.residual, tol, "t = 30".into()));
    out.identities.push(exact);
    let bounded = s1_identity(e, zeros, 30.0, &k1, false)?;
    out.checks.push(Check::at_most(
        "S1/bounded",
        bounded.residual,
        bounded.budget.total(),
        "companion n^-2 terms carried as a bound".into(),
    ));
    out.identities.push(bounded);

    // the S identity misses exactly the imaginary part of the branch term
    let ks = Kernel::OddGauss { scale: A7_SCALE };
    let s = s_identity(e, zeros, 30.0, &ks)?;
    let pole = logzeta_pole_term(0.5, 30.0, &ks)?.im / PI;
    let gap = (s.lhs.re - s.rhs.re - pole).abs();
    out.checks.push(Check::at_most("S/branch", gap, tol, format!("residual {:.3e} = branch term {pole:.3e}", s.residual)));
    out.identities.push(s);
    Ok(())
}

fn pair_sums(fast: &ZetaEngine, set: &ResonatorSet, rel_tol: f64, out: &mut SuiteOutput) -> Result<()> {
    let t = set.params.t;
    let m = weighted_moment(fast, MomentWeight::One, set, t, &MomentOptions::default())?;
    let p = pair_sum(set, t, Shift::Unit);
    let rel = (m.value.re - p.total).abs() / p.total.abs();
    out.checks.push(Check::at_most(
        "A2/pair_sum",
        rel,
        rel_tol,
        format!("quadrature {:.12e} vs pairs {:.12e}, {} nodes, |M'| = {}", m.value.re, p.total, m.nodes, set.reps.len()),
    ));
    Ok(())
}

fn inequalities(set: &ResonatorSet, out: &mut SuiteOutput) -> Result<()> {
    let (r2, f2) = rf_check(set);
    out.checks.push(Check::holds("A3/rf", r2 <= f2, r2, f2, "sum r^2 <= 3 sum f^2".into()));
    let mut violations = 0;
    let mut worst = f64::NEG_INFINITY;
    for &k in &set.blocks.primes {
        let b = base_check(set, k);
        if !b.holds() {
            violations += 1;
        }
        worst = worst.max(b.lhs - b.rhs);
    }
    out.checks.push(Check::holds(
        "A3/base",
        violations == 0,
        violations as f64,
        0.0,
        format!("{} primes, largest lhs - rhs {worst:.3e}", set.blocks.primes.len()),
    ));
    out.checks.push(Check::holds("A3/divisor_closed", set.is_divisor_closed(), 0.0, 0.0, String::new()));
    out.checks.push(Check::holds("A3/caps", set.caps_respected(), 0.0, 0.0, String::new()));
    let m2 = lemma_m2log_lower(set, set.params.t, |_| 1.0)?;
    out.checks.push(Check::holds(
        "lemma/m2log",
        m2.holds(),
        m2.integral,
        m2.constant * m2.bound,
        "a_p = 1".into(),
    ));
    Ok(())
}

fn transforms(params: &resonance_core::resonator::ResonatorParams, out: &mut SuiteOutput) -> Result<()> {
    let t = params.t;
    let families = [
        Kernel::Fejer { width: 2.0 },
        Kernel::Fejer { width: 5.0 },
        Kernel::fejer(params.epsilon, t)?,
        Kernel::odd_gauss(t)?,
        Kernel::even_gauss(t)?,
    ];
    for k in families {
        let reach = match k {
            Kernel::Fejer { width } => 2.5 * width,
            _ => 4.0 * k.parameter(),
        };
        let mut worst: f64 = 0.0;
        for i in 0..20 {
            let xi = -reach + 2.0 * reach * (i as f64 + 0.37) / 20.0;
            worst = worst.max((k.fourier_numeric(xi)? - k.fourier(xi)).norm());
        }
        out.checks.push(Check::at_most(&format!("A4/{}({:.4})", k.name(), k.parameter()), worst, 1e-8, "20 points".into()));
    }
    let q = Quadrature::new(1e-12, 1e-12);
    let mut worst: f64 = 0.0;
    for x in [0.0, 0.5, 1.3, 2.9] {
        let v = q.integrate(|u: f64| phi(u) * (u * x).cos(), -12.0, 12.0)?.value;
        worst = worst.max((v - (2.0 * PI).sqrt() * phi(x)).abs());
    }
    out.checks.push(Check::at_most("A4/phi_hat", worst, 1e-10, String::new()));
    Ok(())
}

fn zeta_stack(exact: &ZetaEngine, fast: &ZetaEngine, zeros: &ZeroSet, out: &mut SuiteOutput) -> Result<()> {
    let n100 = zeros.count(100.0, 1e-10)?;
    out.checks.push(Check::holds("A5/N(100)", n100 == 29, n100 as f64, 29.0, String::new()));

    let mut worst: f64 = 0.0;
    let mut t = 20.0;
    while t <= 100.0 {
        match zeros.count(t, 1e-6) {
            Ok(n) => {
                let main = (t / (2.0 * PI)) * (t / (2.0 * PI * std::f64::consts::E)).ln() + 7.0 / 8.0;
                worst = worst.max((exact.s_of(t)? - (n as f64 - main)).abs());
            }
            Err(Error::OrdinateTooClose { .. }) => {}
            Err(err) => return Err(err.into()),
        }
        t += 0.37;
    }
    out.checks.push(Check::at_most("A5/riemann_von_mangoldt", worst, 0.05, "20 <= t <= 100".into()));

    let mut worst: f64 = 0.0;
    for &g in zeros.ordinates.iter().take(3) {
        let jump = exact.s_of(g + 1e-4)? - exact.s_of(g - 1e-4)?;
        worst = worst.max((jump - 1.0).abs());
    }
    out.checks.push(Check::at_most("A5/S_jumps", worst, 1e-3, "first three ordinates".into()));

    let mut z = vec![0.0; 1000];
    fast.hardy_z_grid(0.1, 0.2, &mut z)?;
    let mut worst: f64 = 0.0;
    for (k, zk) in z.iter().enumerate() {
        let t = 0.1 + k as f64 * 0.2;
        worst = worst.max((zk.abs() - exact.zeta(0.5, t)?.norm()).abs());
    }
    out.checks.push(Check::at_most("A5/abs_Z", worst, 1e-9, "1000 points on (0, 200)".into()));

    let quad = zeros.s1(exact, 50.0)?;
    let closed = zeros.s1_from_ordinates(exact, 50.0)?;
    out.checks.push(Check::at_most(
        "A5/S1_routes",
        (quad - closed).abs(),
        1e-6,
        format!("S1(50) = {quad:.12}"),
    ));
    Ok(())
}

/// Residual of the `S` identity over the strip envelope `V(t)`. Only the
/// order of magnitude is claimed, so this is reported, not asserted.
fn s_envelope_check(e: &ZetaEngine, zeros: &ZeroSet, out: &mut SuiteOutput) -> Result<()> {
    for k in [Kernel::OddGauss { scale: A7_SCALE }, Kernel::EvenGauss { scale: A7_SCALE }] {
        let mut ratios = Vec::new();
        for t in A7_HEIGHTS {
            let r = s_identity(e, zeros, t, &k)?;
            ratios.push(r.residual / strip_envelope(&k, 0.5, t));
            out.identities.push(r);
        }
        let c = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let detail = ratios.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>().join(", ");
        out.checks.push(Check::report(&format!("A7/{}", k.name()), c, format!("residual/V at t = 30, 60, 90: {detail}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checks_survive_json_with_nonfinite_values() {
        let checks = vec![
            Check::report("r", f64::INFINITY, String::new()),
            Check::at_most("a", 1e-9, 1e-6, "x".into()),
        ];
        let text = serde_json::to_string(&checks).unwrap();
        let back: Vec<Check> = serde_json::from_str(&text).unwrap();
        assert_eq!(back[0].value, f64::INFINITY);
        assert!(back[0].bound.is_nan());
        assert_eq!(back[1], checks[1]);
    }
}
