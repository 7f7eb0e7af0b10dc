//! Resonator-guided search for large `|ζ(1/2+it)|`, `|S(t)|` and `S₁(t)`,
//! the growth curves they are compared with, and an unguided control arm.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::resonator::ResonatorSet;
use crate::special::phi;
use crate::zeta::ZetaEngine;
use crate::{Error, Result};

/// What a scan maximises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Target {
    AbsZeta,
    #[cfg_attr(feature = "serde", serde(rename = "abs_s"))]
    AbsS,
    #[cfg_attr(feature = "serde", serde(rename = "s1"))]
    S1,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::AbsZeta => "abs_zeta",
            Target::AbsS => "abs_s",
            Target::S1 => "s1",
        }
    }
}

/// `√(log T log₃T / log₂T)`, or with `(log₂T)³` for `S₁`.
fn growth_scale(t: f64, target: Target) -> Result<f64> {
    if !(t > core::f64::consts::E.exp()) {
        return Err(Error::Domain(format!("T = {t} must exceed e^e so that log log log T > 0")));
    }
    let l1 = t.ln();
    let l2 = l1.ln();
    let l3 = l2.ln();
    Ok(match target {
        Target::S1 => (l1 * l3 / (l2 * l2 * l2)).sqrt(),
        _ => (l1 * l3 / l2).sqrt(),
    })
}

/// The benchmark growth curve: `exp(c g(T))` for `|ζ|`, `c g(T)` for `S` and `S₁`.
pub fn benchmark_curve(t: f64, c: f64, target: Target) -> Result<f64> {
    let g = growth_scale(t, target)?;
    Ok(match target {
        Target::AbsZeta => (c * g).exp(),
        _ => c * g,
    })
}

/// The `c` for which [`benchmark_curve`] equals `value`.
pub fn solve_benchmark_c(t: f64, value: f64, target: Target) -> Result<f64> {
    let g = growth_scale(t, target)?;
    Ok(match target {
        Target::AbsZeta => value.ln() / g,
        _ => value / g,
    })
}

/// `|ζ(1/2+it)|`, `|S(t)|` or `S₁(t)`.
pub fn target_value(engine: &ZetaEngine, target: Target, t: f64) -> Result<f64> {
    Ok(match target {
        Target::AbsZeta => engine.hardy_z(t)?.abs(),
        Target::AbsS => engine.s_of(t)?.abs(),
        Target::S1 => engine.s1_littlewood(t)?,
    })
}

/// Evaluation budget of a scan.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScanBudget {
    /// Points of the coarse `|R|²Φ` grid.
    pub grid_points: usize,
    /// Resonator peaks that are refined.
    pub candidates: usize,
    /// Target evaluations spread over each candidate window.
    pub probes: usize,
    /// Golden-section steps per candidate.
    pub golden_steps: usize,
    /// Hard cap on target evaluations.
    pub max_evaluations: usize,
}

impl Default for ScanBudget {
    fn default() -> Self {
        Self { grid_points: 200_000, candidates: 16, probes: 9, golden_steps: 30, max_evaluations: 100_000 }
    }
}

impl ScanBudget {
    /// Target evaluations a full scan spends.
    pub fn evaluations(&self) -> usize {
        self.candidates * (self.probes + self.golden_steps)
    }
}

/// A refined local maximum.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Peak {
    pub t: f64,
    pub value: f64,
    /// `|R(t)|²`.
    pub resonator: f64,
    /// Strictly increasing `(t, value)` improvements found while refining.
    pub trace: Vec<(f64, f64)>,
}

/// Quantiles of the target under uniform sampling.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Quantiles {
    pub q50: f64,
    pub q90: f64,
    pub q99: f64,
    pub q999: f64,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScanReport {
    pub target: Target,
    pub beta: f64,
    pub t_max: f64,
    /// Sorted by descending value.
    pub peaks: Vec<Peak>,
    pub c: f64,
    /// `benchmark_curve(T, c, target)`.
    pub benchmark: f64,
    /// The `c` whose curve passes through the top peak.
    pub solved_c: Option<f64>,
    pub baseline: Option<Quantiles>,
    pub budget: ScanBudget,
    pub evaluations: usize,
}

/// Mean zero spacing `2π / log(t/2π)`, floored for small `t`.
fn zero_spacing(t: f64) -> f64 {
    2.0 * PI / (t / (2.0 * PI)).ln().max(1.0)
}

struct Counter {
    used: usize,
    cap: usize,
}

impl Counter {
    fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.cap {
            return Err(Error::BudgetExceeded(format!("more than {} target evaluations", self.cap)));
        }
        Ok(())
    }
}

/// Local maxima of `|R|²Φ(t/T)` on the coarse grid, best first, at least
/// `separation` apart.
pub fn resonator_candidates(set: &ResonatorSet, lo: f64, hi: f64, points: usize, count: usize) -> Vec<(f64, f64)> {
    if points < 3 || hi <= lo {
        return Vec::new();
    }
    let t_scale = set.params.t;
    let h = (hi - lo) / (points - 1) as f64;
    let mut weight = vec![0.0; points];
    const CHUNK: usize = 1 << 16;
    let mut start = 0;
    while start < points {
        let len = CHUNK.min(points - start);
        let t0 = lo + start as f64 * h;
        for (k, r) in set.values_on_grid(t0, h, len).iter().enumerate() {
            let t = t0 + k as f64 * h;
            weight[start + k] = r.norm_sqr() * phi(t / t_scale);
        }
        start += len;
    }
    let mut maxima: Vec<(f64, f64)> = (0..points)
        .filter(|&i| (i == 0 || weight[i] >= weight[i - 1]) && (i + 1 == points || weight[i] > weight[i + 1]))
        .map(|i| (lo + i as f64 * h, weight[i]))
        .collect();
    maxima.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.total_cmp(&b.0)));
    let mut picked: Vec<(f64, f64)> = Vec::new();
    for m in maxima {
        if picked.len() == count {
            break;
        }
        if picked.iter().all(|p| (p.0 - m.0).abs() >= zero_spacing(m.0)) {
            picked.push(m);
        }
    }
    picked
}

/// Maximises the target near `centre`: probes the window `±spacing`, then
/// golden-section refines around the best probe. For `|ζ|` the refinement
/// runs on the signed, smooth `Z(t)`.
fn refine(
    engine: &ZetaEngine,
    target: Target,
    centre: f64,
    lo: f64,
    hi: f64,
    budget: &ScanBudget,
    counter: &mut Counter,
) -> Result<(f64, f64, Vec<(f64, f64)>)> {
    let width = zero_spacing(centre);
    let a = (centre - width).max(lo);
    let b = (centre + width).min(hi);
    let probes = budget.probes.max(2);
    let signed = |t: f64, counter: &mut Counter| -> Result<f64> {
        counter.tick()?;
        Ok(match target {
            Target::AbsZeta => engine.hardy_z(t)?,
            _ => target_value(engine, target, t)?,
        })
    };
    let mut best = (a, f64::NEG_INFINITY, 1.0);
    let step = (b - a) / (probes - 1) as f64;
    for i in 0..probes {
        let t = a + i as f64 * step;
        let v = signed(t, counter)?;
        let (mag, sign) = match target {
            Target::AbsZeta => (v.abs(), if v < 0.0 { -1.0 } else { 1.0 }),
            _ => (v, 1.0),
        };
        if mag > best.1 {
            best = (t, mag, sign);
        }
    }
    let sign = best.2;
    let mut trace = vec![(best.0, best.1)];
    let (mut x0, mut x3) = ((best.0 - step).max(lo), (best.0 + step).min(hi));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = x3 - g * (x3 - x0);
    let mut x2 = x0 + g * (x3 - x0);
    let mut f1 = sign * signed(x1, counter)?;
    let mut f2 = sign * signed(x2, counter)?;
    let record = |t: f64, v: f64, trace: &mut Vec<(f64, f64)>| {
        let mag = if target == Target::AbsZeta { v.abs() } else { v };
        if mag > trace.last().map_or(f64::NEG_INFINITY, |p| p.1) {
            trace.push((t, mag));
        }
    };
    record(x1, f1, &mut trace);
    record(x2, f2, &mut trace);
    for _ in 2..budget.golden_steps.max(2) {
        if f1 >= f2 {
            x3 = x2;
            x2 = x1;
            f2 = f1;
            x1 = x3 - g * (x3 - x0);
            f1 = sign * signed(x1, counter)?;
            record(x1, f1, &mut trace);
        } else {
            x0 = x1;
            x1 = x2;
            f1 = f2;
            x2 = x0 + g * (x3 - x0);
            f2 = sign * signed(x2, counter)?;
            record(x2, f2, &mut trace);
        }
    }
    let &(t, v) = trace.last().expect("trace holds the best probe");
    Ok((t, v, trace))
}

/// Resonator-guided scan of `[T^β, T]` where `T` is the resonator height.
pub fn resonant_scan(
    engine: &ZetaEngine,
    set: &ResonatorSet,
    beta: f64,
    target: Target,
    c: f64,
    budget: &ScanBudget,
) -> Result<ScanReport> {
    let t_max = set.params.t;
    if !(0.0..1.0).contains(&beta) {
        return Err(Error::InvalidParams(format!("beta = {beta} must lie in [0, 1)")));
    }
    if set.params.kappa >= 1.0 - beta {
        return Err(Error::Precondition(format!(
            "kappa = {} must be below 1 - beta = {}",
            set.params.kappa,
            1.0 - beta
        )));
    }
    let benchmark = benchmark_curve(t_max, c, target)?;
    let lo = t_max.powf(beta).max(1.0);
    let candidates = resonator_candidates(set, lo, t_max, budget.grid_points, budget.candidates);
    let mut counter = Counter { used: 0, cap: budget.max_evaluations };
    let mut peaks = Vec::with_capacity(candidates.len());
    for &(centre, _) in &candidates {
        let (t, value, trace) = refine(engine, target, centre, lo, t_max, budget, &mut counter)?;
        peaks.push(Peak { t, value, resonator: set.value(t).norm_sqr(), trace });
    }
    peaks.sort_by(|a, b| b.value.total_cmp(&a.value).then(a.t.total_cmp(&b.t)));
    let solved_c = match peaks.first() {
        Some(p) => Some(solve_benchmark_c(t_max, p.value, target)?),
        None => None,
    };
    Ok(ScanReport {
        target,
        beta,
        t_max,
        peaks,
        c,
        benchmark,
        solved_c,
        baseline: None,
        budget: *budget,
        evaluations: counter.used,
    })
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let i = pos.floor() as usize;
    let frac = pos - i as f64;
    if i + 1 < sorted.len() {
        sorted[i] + frac * (sorted[i + 1] - sorted[i])
    } else {
        sorted[i]
    }
}

/// Uniform random `t ∈ [T^β, T]` from a seeded ChaCha8 stream.
pub fn baseline_samples(t_max: f64, beta: f64, samples: usize, seed: u64) -> Vec<f64> {
    let lo = t_max.powf(beta).max(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
            lo + u * (t_max - lo)
        })
        .collect()
}

/// Quantiles of the target over `samples` uniform points.
pub fn baseline_scan(
    engine: &ZetaEngine,
    t_max: f64,
    beta: f64,
    target: Target,
    samples: usize,
    seed: u64,
) -> Result<Quantiles> {
    if samples == 0 {
        return Err(Error::InvalidParams("baseline needs at least one sample".into()));
    }
    let mut values = baseline_samples(t_max, beta, samples, seed)
        .into_iter()
        .map(|t| target_value(engine, target, t))
        .collect::<Result<Vec<f64>>>()?;
    Ok(quantiles_of(&mut values, seed))
}

/// Quantiles of already evaluated samples (sorted in place).
pub fn quantiles_of(values: &mut [f64], seed: u64) -> Quantiles {
    values.sort_by(f64::total_cmp);
    Quantiles {
        q50: quantile(values, 0.5),
        q90: quantile(values, 0.9),
        q99: quantile(values, 0.99),
        q999: quantile(values, 0.999),
        samples: values.len(),
        seed,
    }
}

/// Scan plus a control arm with the same number of target evaluations.
pub fn hunt(
    engine: &ZetaEngine,
    set: &ResonatorSet,
    beta: f64,
    target: Target,
    c: f64,
    budget: &ScanBudget,
    seed: u64,
) -> Result<ScanReport> {
    let mut report = resonant_scan(engine, set, beta, target, c, budget)?;
    let samples = report.evaluations.max(1);
    report.baseline = Some(baseline_scan(engine, report.t_max, beta, target, samples, seed)?);
    Ok(report)
}

/// Running sums for the resonance lift on a uniform grid over `t ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LiftSums {
    /// `Σ |ζ| |R|² Φ`.
    pub zeta_resonated: f64,
    /// `Σ |R|² Φ`.
    pub resonated: f64,
    /// `Σ |ζ| Φ`.
    pub zeta_plain: f64,
    /// `Σ Φ`.
    pub plain: f64,
    pub nodes: usize,
}

impl LiftSums {
    pub fn merge(&mut self, other: &LiftSums) {
        self.zeta_resonated += other.zeta_resonated;
        self.resonated += other.resonated;
        self.zeta_plain += other.zeta_plain;
        self.plain += other.plain;
        self.nodes += other.nodes;
    }

    pub fn report(&self) -> LiftReport {
        let weighted = self.zeta_resonated / self.resonated;
        let unweighted = self.zeta_plain / self.plain;
        LiftReport { weighted, unweighted, ratio: weighted / unweighted, nodes: self.nodes }
    }
}

/// `∫|ζ||R|²Φ / ∫|R|²Φ` against `∫|ζ|Φ / ∫Φ`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LiftReport {
    pub weighted: f64,
    pub unweighted: f64,
    pub ratio: f64,
    pub nodes: usize,
}

/// Grid `(step, node count)` for the lift: fine enough for `|R|²` and for
/// `|ζ|` near its zeros, out to `half_width_sd · T`.
pub fn lift_grid(set: &ResonatorSet, half_width_sd: f64) -> (f64, usize) {
    let t = set.params.t;
    let omega = match (set.reps.first(), set.reps.last()) {
        (Some(a), Some(b)) => b.log - a.log,
        _ => 0.0,
    };
    let h = (0.9 * 2.0 * PI / (omega + 8.6 / t)).min(0.25);
    (h, (half_width_sd * t / h).ceil() as usize + 1)
}

/// Lift sums over grid nodes `k0..k1` (node `k` at `t = k h`). Node 0 has
/// weight 1 and every other node weight 2, folding in `t < 0` by symmetry.
pub fn lift_partial(engine: &ZetaEngine, set: &ResonatorSet, h: f64, k0: usize, k1: usize) -> Result<LiftSums> {
    let t_scale = set.params.t;
    let mut sums = LiftSums::default();
    const CHUNK: usize = 1 << 16;
    let mut z = vec![0.0; CHUNK];
    let mut start = k0;
    while start < k1 {
        let len = CHUNK.min(k1 - start);
        let t0 = start as f64 * h;
        let r = set.values_on_grid(t0, h, len);
        engine.hardy_z_grid(t0, h, &mut z[..len])?;
        for k in 0..len {
            let w = if start + k == 0 { 1.0 } else { 2.0 };
            let p = phi((t0 + k as f64 * h) / t_scale) * w;
            let rr = r[k].norm_sqr() * p;
            let za = z[k].abs();
            sums.zeta_resonated += za * rr;
            sums.resonated += rr;
            sums.zeta_plain += za * p;
            sums.plain += p;
        }
        sums.nodes += len;
        start += len;
    }
    Ok(sums)
}

/// Single-threaded resonance lift.
pub fn resonance_lift(engine: &ZetaEngine, set: &ResonatorSet, half_width_sd: f64) -> Result<LiftReport> {
    let (h, count) = lift_grid(set, half_width_sd);
    Ok(lift_partial(engine, set, h, 0, count)?.report())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resonator::ResonatorParams;
    use crate::zeta::PrecisionPolicy;

    #[test]
    fn benchmark_values() {
        let v = benchmark_curve(1e6, 1.0, Target::AbsZeta).unwrap();
        assert!((v - 9.523_247_940_176_25).abs() < 1e-10, "{v}");
        assert_eq!(benchmark_curve(1e6, 0.0, Target::AbsZeta).unwrap(), 1.0);
        assert!(matches!(benchmark_curve(15.0, 1.0, Target::AbsZeta), Err(Error::Domain(_))));
        assert!(benchmark_curve(16.0, 1.0, Target::S1).is_ok());
        let c = solve_benchmark_c(1e6, v, Target::AbsZeta).unwrap();
        assert!((c - 1.0).abs() < 1e-13);
        let s = benchmark_curve(1e6, 2.0, Target::AbsS).unwrap();
        assert!((solve_benchmark_c(1e6, s, Target::AbsS).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn benchmark_increases_beyond_tower() {
        // log₃ grows slowly; the zeta curve increases on this grid
        let mut prev = 0.0;
        for k in 4..40 {
            let v = benchmark_curve(10f64.powi(k), 1.0, Target::AbsZeta).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn quantiles_monotone_and_seeded() {
        let e = ZetaEngine::default();
        let a = baseline_scan(&e, 2000.0, 0.0, Target::AbsZeta, 300, 7).unwrap();
        let b = baseline_scan(&e, 2000.0, 0.0, Target::AbsZeta, 300, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.q50 <= a.q90 && a.q90 <= a.q99 && a.q99 <= a.q999);
        let s = baseline_samples(2000.0, 0.5, 1000, 3);
        assert!(s.iter().all(|&t| (2000f64.sqrt()..=2000.0).contains(&t)));
    }

    fn small_set(t: f64, kappa: f64) -> ResonatorSet {
        let p = ResonatorParams::at_height(t, kappa, 0.5, 1.5, 0.1)
            .unwrap()
            .with_override(10.0, 40.0)
            .with_element_cap(3);
        ResonatorSet::build(&p).unwrap()
    }

    #[test]
    fn scan_contract() {
        let e = ZetaEngine::default();
        let set = small_set(3000.0, 0.5);
        let budget = ScanBudget { grid_points: 20_000, candidates: 4, probes: 7, golden_steps: 20, max_evaluations: 1000 };
        let r = resonant_scan(&e, &set, 0.2, Target::AbsZeta, 1.0, &budget).unwrap();
        assert_eq!(r.peaks.len(), 4);
        assert!(r.peaks.windows(2).all(|w| w[0].value >= w[1].value));
        for p in &r.peaks {
            assert!(p.t >= 3000f64.powf(0.2) && p.t <= 3000.0);
            assert!((p.value - e.hardy_z(p.t).unwrap().abs()).abs() < 1e-9);
            assert!(p.trace.windows(2).all(|w| w[1].1 > w[0].1));
        }
        assert_eq!(r.benchmark, benchmark_curve(3000.0, 1.0, Target::AbsZeta).unwrap());
        let again = resonant_scan(&e, &set, 0.2, Target::AbsZeta, 1.0, &budget).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn scan_guards() {
        let e = ZetaEngine::default();
        let set = small_set(3000.0, 0.5);
        let b = ScanBudget { grid_points: 1000, candidates: 2, probes: 5, golden_steps: 5, max_evaluations: 3 };
        assert!(matches!(resonant_scan(&e, &set, 0.6, Target::AbsZeta, 1.0, &b), Err(Error::Precondition(_))));
        assert!(matches!(resonant_scan(&e, &set, 0.1, Target::AbsZeta, 1.0, &b), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn lift_grid_split_is_consistent() {
        let e = ZetaEngine::new(PrecisionPolicy::fast()).unwrap();
        let set = small_set(300.0, 0.5);
        let (h, n) = lift_grid(&set, 13.0);
        let whole = lift_partial(&e, &set, h, 0, n).unwrap();
        let mut parts = lift_partial(&e, &set, h, 0, n / 3).unwrap();
        parts.merge(&lift_partial(&e, &set, h, n / 3, n).unwrap());
        assert!((whole.report().ratio - parts.report().ratio).abs() < 1e-10);
        assert_eq!(whole.nodes, n);
    }
}
