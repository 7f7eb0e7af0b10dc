//! Resonated integrals `∫ g(t) |R(t)|² Φ(t/T) dt`, their pair-sum forms and
//! the combinatorial inequalities behind them.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Float;

use crate::kernels::Kernel;
use crate::resonator::ResonatorSet;
use crate::special::phi;
use crate::zeta::ZetaEngine;
use crate::{Error, Result};

const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

/// `|T log(km/n)|` beyond which pair terms are dropped (`Φ(9) ≈ 2.6e−18`).
pub const PAIR_CUTOFF: f64 = 9.0;

/// The shifts `k` in `Φ(T log(km/n))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shift<'a> {
    /// `k = 1`.
    Unit,
    Integer(u64),
    /// Weighted shifts `(k, w_k)`, summed as `Σ_k w_k Σ_{m,n} ...`.
    Weighted(&'a [(u64, f64)]),
}

/// `√(2π) T Σ_k w_k Σ_{m,n∈𝓜′} r(m) r(n) Φ(T log(km/n))`, split into
/// exact-match terms (`km = n`, to rounding) and the rest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairSum {
    pub total: f64,
    pub diagonal: f64,
    pub off_diagonal: f64,
    /// Number of retained `(k, m, n)` triples.
    pub pairs: usize,
}

impl PairSum {
    /// `off_diagonal / (√(2π) T Σ r²)`.
    pub fn off_diagonal_ratio(&self, set: &ResonatorSet) -> f64 {
        self.off_diagonal / (SQRT_2PI * set.params.t * set.sum_r_squared())
    }
}

pub fn pair_sum(set: &ResonatorSet, t_scale: f64, shift: Shift<'_>) -> PairSum {
    let unit = [(1u64, 1.0)];
    let single;
    let shifts: &[(u64, f64)] = match shift {
        Shift::Unit => &unit,
        Shift::Integer(k) => {
            single = [(k, 1.0)];
            &single
        }
        Shift::Weighted(w) => w,
    };
    let reps = &set.reps;
    let window = PAIR_CUTOFF / t_scale;
    let (mut diag, mut off, mut pairs) = (0.0, 0.0, 0usize);
    for &(k, wk) in shifts {
        if wk == 0.0 {
            continue;
        }
        let lk = (k as f64).ln();
        let mut lo = 0;
        for (i, m) in reps.iter().enumerate() {
            let centre = lk + m.log;
            while lo < reps.len() && reps[lo].log < centre - window {
                lo += 1;
            }
            let mut j = lo;
            while j < reps.len() && reps[j].log <= centre + window {
                let x = t_scale * (centre - reps[j].log);
                let v = wk * m.r * reps[j].r * phi(x);
                let exact = if k == 1 { i == j } else { x.abs() < 1e-9 };
                if exact {
                    diag += v;
                } else {
                    off += v;
                }
                pairs += 1;
                j += 1;
            }
        }
    }
    let c = SQRT_2PI * t_scale;
    PairSum { total: c * (diag + off), diagonal: c * diag, off_diagonal: c * off, pairs }
}

/// The factor `g(t)` in a resonated integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MomentWeight<'a> {
    One,
    /// `|ζ(1/2 + it)|`.
    AbsZeta,
    /// `S(t)`; odd, so the symmetric integral vanishes.
    S,
    /// `S₁(t)` through the horizontal `log|ζ|` integral.
    S1,
    /// `Σ c_k k^{−1/2−it}` for the listed `(k, c_k)`.
    Dirichlet(&'a [(u64, f64)]),
}

/// Trapezoid-rule controls for [`weighted_moment`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentOptions {
    /// `|t| ≤ half_width_sd · T`; the default puts `Φ` below `1e−37`.
    pub half_width_sd: f64,
    /// Fraction of the aliasing-free step actually used.
    pub step_safety: f64,
    /// Largest step for weights that are not band-limited.
    pub max_step: f64,
    pub max_nodes: usize,
}

impl Default for MomentOptions {
    fn default() -> Self {
        Self { half_width_sd: (2.0 * 37.0 * 10f64.ln()).sqrt(), step_safety: 0.9, max_step: 0.25, max_nodes: 50_000_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentValue {
    pub value: Complex64,
    pub step: f64,
    pub half_width: f64,
    pub nodes: usize,
}

/// Maximal frequency `log(max m′) − log(min m′)` of `|R|²`.
fn spread(set: &ResonatorSet) -> f64 {
    match (set.reps.first(), set.reps.last()) {
        (Some(a), Some(b)) => b.log - a.log,
        _ => 0.0,
    }
}

/// `∫ g(t) |R(t)|² Φ(t/T) dt` by the trapezoid rule on `t ≥ 0` using the
/// parity of `|R|²Φ`.
///
/// For `g = 1` and Dirichlet weights the integrand is band-limited up to
/// the Gaussian tail of `Φ̂`, so the step `2π/(Ω + 8.6/T)` makes the rule
/// exact to rounding.
pub fn weighted_moment(
    engine: &ZetaEngine,
    weight: MomentWeight<'_>,
    set: &ResonatorSet,
    t_scale: f64,
    opts: &MomentOptions,
) -> Result<MomentValue> {
    if !(t_scale > 0.0) {
        return Err(Error::InvalidParams(format!("T = {t_scale} must be positive")));
    }
    let mut omega = spread(set);
    if let MomentWeight::Dirichlet(c) = weight {
        omega += c.iter().map(|&(k, _)| (k as f64).ln()).fold(0.0, f64::max);
    }
    let mut h = opts.step_safety * 2.0 * PI / (omega + 8.6 / t_scale);
    if !matches!(weight, MomentWeight::One | MomentWeight::Dirichlet(_)) {
        h = h.min(opts.max_step);
    }
    let half = opts.half_width_sd * t_scale;
    let count = (half / h).ceil() as usize + 1;
    if count > opts.max_nodes {
        return Err(Error::BudgetExceeded(format!("{count} quadrature nodes exceed the budget of {}", opts.max_nodes)));
    }
    if matches!(weight, MomentWeight::S) {
        return Ok(MomentValue { value: Complex64::new(0.0, 0.0), step: h, half_width: half, nodes: 0 });
    }
    const CHUNK: usize = 1 << 16;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut zbuf = vec![0.0; CHUNK];
    let mut gbuf = vec![Complex64::new(0.0, 0.0); CHUNK];
    let mut start = 0;
    while start < count {
        let len = CHUNK.min(count - start);
        let t0 = start as f64 * h;
        let r = set.values_on_grid(t0, h, len);
        match weight {
            MomentWeight::AbsZeta => engine.hardy_z_grid(t0, h, &mut zbuf[..len])?,
            MomentWeight::S1 => {
                for (k, slot) in zbuf[..len].iter_mut().enumerate() {
                    *slot = engine.s1_littlewood(t0 + k as f64 * h)?;
                }
            }
            MomentWeight::Dirichlet(c) => {
                gbuf[..len].fill(Complex64::new(0.0, 0.0));
                crate::resonator::dirichlet_on_grid(
                    c.iter().map(|&(k, ck)| (ck / (k as f64).sqrt(), (k as f64).ln())),
                    t0,
                    h,
                    &mut gbuf[..len],
                );
            }
            _ => {}
        }
        for k in 0..len {
            let t = t0 + k as f64 * h;
            let w = r[k].norm_sqr() * phi(t / t_scale);
            // g(−t) = conj g(t) for real coefficients, so only Re g survives
            let g = match weight {
                MomentWeight::One => 1.0,
                MomentWeight::AbsZeta => zbuf[k].abs(),
                MomentWeight::S1 => zbuf[k],
                MomentWeight::Dirichlet(_) => gbuf[k].re,
                MomentWeight::S => 0.0,
            };
            let factor = if start + k == 0 { 1.0 } else { 2.0 };
            acc += Complex64::new(factor * w * g, 0.0);
        }
        start += len;
    }
    Ok(MomentValue { value: acc * h, step: h, half_width: half, nodes: count })
}

/// `(Σ r², 3 Σ f²)`; the first never exceeds the second.
pub fn rf_check(set: &ResonatorSet) -> (f64, f64) {
    (set.sum_r_squared(), 3.0 * set.sum_f_squared())
}

/// Both sides of the shifted-sum inequality for a prime `k`:
/// `Σ_{m,n∈𝓜, mk=n} f(m)f(n)` and `Σ_{|km′/n′−1| ≤ 3/T} r(m′)r(n′)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaseCheck {
    pub k: u64,
    pub lhs: f64,
    pub rhs: f64,
}

impl BaseCheck {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }
}

pub fn base_check(set: &ResonatorSet, k: u64) -> BaseCheck {
    let mut lhs = 0.0;
    let mut buf = Vec::new();
    for e in &set.support {
        if e.factors.binary_search(&k).is_ok() {
            buf.clear();
            buf.extend(e.factors.iter().copied().filter(|&p| p != k));
            if let Some(i) = set.find(&buf) {
                lhs += set.support[i].weight * e.weight;
            }
        }
    }
    let t = set.params.t;
    let lk = (k as f64).ln();
    let (below, above) = ((3.0 / t).ln_1p(), (-3.0 / t).ln_1p());
    let reps = &set.reps;
    let mut rhs = 0.0;
    let mut lo = 0;
    for m in reps {
        // |km′/n′ − 1| ≤ 3/T  ⇔  log n′ ∈ [log km′ − log(1+3/T), log km′ − log(1−3/T)]
        let (a, b) = (lk + m.log - below, lk + m.log - above);
        while lo < reps.len() && reps[lo].log < a - 1e-12 {
            lo += 1;
        }
        let mut j = lo;
        while j < reps.len() && reps[j].log <= b + 1e-12 {
            let ratio = (lk + m.log - reps[j].log).exp();
            if (ratio - 1.0).abs() <= 3.0 / t {
                rhs += m.r * reps[j].r;
            }
            j += 1;
        }
    }
    BaseCheck { k, lhs, rhs }
}

/// `f(p)` for the primes of `𝓜` (elements with one factor).
fn prime_weights(set: &ResonatorSet) -> Vec<(u64, f64)> {
    set.support.iter().filter(|e| e.factors.len() == 1).map(|e| (e.factors[0], e.weight)).collect()
}

/// `Σ_{n∈𝓜} f(n)² Σ_{p|n} 1/(f(p)√p)`.
pub fn divisor_weighted_sum(set: &ResonatorSet) -> f64 {
    let fp = prime_weights(set);
    let lookup = |p: u64| fp.binary_search_by_key(&p, |x| x.0).ok().map(|i| fp[i].1);
    let mut total = 0.0;
    for e in &set.support {
        let inner: f64 = e
            .factors
            .iter()
            .filter_map(|&p| lookup(p).filter(|&w| w > 0.0).map(|w| 1.0 / (w * (p as f64).sqrt())))
            .sum();
        total += e.weight * e.weight * inner;
    }
    total
}

/// The normalised divisor sum and its comparison value `γ√(log N log₃N/log₂N)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ll2Report {
    pub value: f64,
    /// `Π_{p∈P} (1 + f(p)²)`.
    pub normalizer: f64,
    pub comparison: f64,
}

impl Ll2Report {
    pub fn ratio(&self) -> f64 {
        self.value / self.comparison
    }
}

pub fn ll2_quantity(set: &ResonatorSet) -> Ll2Report {
    let mut fp = prime_weights(set);
    fp.sort_by_key(|x| x.0);
    let normalizer: f64 = fp.iter().map(|&(_, w)| 1.0 + w * w).product();
    let value = divisor_weighted_sum(set) / normalizer;
    let (l1, l2, l3) = set.params.logs();
    Ll2Report { value, normalizer, comparison: set.params.gamma * (l1 * l3 / l2).sqrt() }
}

/// The chain of bounds for `∫ G |R|² Φ` with `G = Σ_{p∈P} a_p p^{−1/2−it}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct M2LogReport {
    /// `T (min a_p) Σ_{n∈𝓜} f(n)² Σ_{p|n} 1/(f(p)√p)`.
    pub bound: f64,
    /// `√(2π) min Φ(T log(1 ± 3/T))`, the constant linking the pair sum to `bound`.
    pub constant: f64,
    /// The integral itself, as an exact pair sum.
    pub integral: f64,
    pub min_a: f64,
}

impl M2LogReport {
    pub fn holds(&self) -> bool {
        self.integral >= self.constant * self.bound * (1.0 - 1e-12)
    }
}

pub fn lemma_m2log_lower(set: &ResonatorSet, t_scale: f64, a: impl Fn(u64) -> f64) -> Result<M2LogReport> {
    let coeffs: Vec<(u64, f64)> = set.blocks.primes.iter().map(|&p| (p, a(p))).collect();
    if let Some(&(p, v)) = coeffs.iter().find(|c| !(c.1 >= 0.0)) {
        return Err(Error::InvalidParams(format!("a_{p} = {v} must be nonnegative")));
    }
    let min_a = coeffs.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
    let min_a = if min_a.is_finite() { min_a } else { 0.0 };
    let weighted: Vec<(u64, f64)> = coeffs.iter().map(|&(p, v)| (p, v / (p as f64).sqrt())).collect();
    let integral = pair_sum(set, t_scale, Shift::Weighted(&weighted)).total;
    let edge = phi(t_scale * (3.0 / t_scale).ln_1p()).min(phi(t_scale * (-3.0 / t_scale).ln_1p()));
    Ok(M2LogReport {
        bound: t_scale * min_a * divisor_weighted_sum(set),
        constant: SQRT_2PI * edge,
        integral,
        min_a,
    })
}

/// `min_{1 ≤ n ≤ limit} Re K̂(log n)`.
pub fn min_fourier_up_to(kernel: &Kernel, limit: f64) -> f64 {
    let last = limit.floor().max(1.0) as u64;
    (1..=last).map(|n| kernel.fourier((n as f64).ln()).re).fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resonator::ResonatorParams;

    fn desk(lo: f64, hi: f64, cap: u32) -> ResonatorSet {
        let p = ResonatorParams::with_size(10_000, 10_000.0, 0.5, 1.5, 0.1)
            .unwrap()
            .with_override(lo, hi)
            .with_element_cap(cap);
        ResonatorSet::build(&p).unwrap()
    }

    fn unit_only() -> ResonatorSet {
        let mut set = desk(58.0, 60.0, 1);
        set.support.truncate(1);
        set.reps = crate::resonator::bin_representatives(&set.support, set.params.t);
        set
    }

    #[test]
    fn singleton_moment() {
        // only n = 1: one diagonal term
        let set = unit_only();
        assert_eq!(set.support.len(), 1);
        let ps = pair_sum(&set, 1000.0, Shift::Unit);
        assert!((ps.total - SQRT_2PI * 1000.0).abs() < 1e-9);
        assert_eq!(ps.off_diagonal, 0.0);
        let e = ZetaEngine::default();
        let m = weighted_moment(&e, MomentWeight::One, &set, 1000.0, &MomentOptions::default()).unwrap();
        assert!((m.value.re - ps.total).abs() < 1e-9 * ps.total);
    }

    #[test]
    fn moment_matches_pair_sum() {
        let set = desk(20.0, 60.0, 3);
        let e = ZetaEngine::default();
        let t = 500.0;
        let ps = pair_sum(&set, t, Shift::Unit);
        let m = weighted_moment(&e, MomentWeight::One, &set, t, &MomentOptions::default()).unwrap();
        assert!(((m.value.re - ps.total) / ps.total).abs() < 1e-9);
        assert!(ps.total >= ps.diagonal);
    }

    #[test]
    fn dirichlet_moment_matches_shifted_pairs() {
        let set = desk(20.0, 40.0, 2);
        let e = ZetaEngine::default();
        let t = 300.0;
        let c = [(23u64, 0.7), (29, 1.3), (31, 0.0)];
        let m = weighted_moment(&e, MomentWeight::Dirichlet(&c), &set, t, &MomentOptions::default()).unwrap();
        let w: Vec<(u64, f64)> = c.iter().map(|&(k, a)| (k, a / (k as f64).sqrt())).collect();
        let ps = pair_sum(&set, t, Shift::Weighted(&w));
        assert!(((m.value.re - ps.total) / ps.total).abs() < 1e-9, "{} {}", m.value.re, ps.total);
        assert!(m.value.re > 0.0 && m.value.im == 0.0);
    }

    #[test]
    fn inequalities_on_small_sets() {
        for (lo, hi, cap) in [(20.0, 60.0, 3), (55.0, 90.0, 4)] {
            let set = desk(lo, hi, cap);
            let (r, f3) = rf_check(&set);
            assert!(r <= f3);
            for &p in &set.blocks.primes {
                let b = base_check(&set, p);
                assert!(b.holds(), "{b:?}");
                assert!(b.lhs > 0.0);
            }
        }
    }

    #[test]
    fn ll2_edge_cases() {
        let set = unit_only();
        assert_eq!(ll2_quantity(&set).value, 0.0);
        let set = desk(58.0, 60.0, 1);
        assert_eq!(set.support.len(), 2);
        let f = set.support[1].weight;
        let expect = f * f / ((1.0 + f * f) * f * 59f64.sqrt());
        assert!((ll2_quantity(&set).value - expect).abs() < 1e-15);
    }

    #[test]
    fn lemma_bound_scales_and_holds() {
        let set = desk(20.0, 60.0, 3);
        let t = 800.0;
        let one = lemma_m2log_lower(&set, t, |p| 1.0 + (p % 7) as f64).unwrap();
        let two = lemma_m2log_lower(&set, t, |p| 2.0 * (1.0 + (p % 7) as f64)).unwrap();
        assert!(one.holds());
        assert!((two.bound - 2.0 * one.bound).abs() < 1e-9 * one.bound);
        assert!((two.integral - 2.0 * one.integral).abs() < 1e-9 * one.integral);
        let zero = lemma_m2log_lower(&set, t, |_| 0.0).unwrap();
        assert_eq!(zero.bound, 0.0);
        assert!(zero.integral >= 0.0);
        assert!(lemma_m2log_lower(&set, t, |_| -1.0).is_err());
    }

    #[test]
    fn fejer_minimum_on_short_range() {
        let k = Kernel::Fejer { width: 2.0 };
        // n ≤ e^2 means log n ≤ w, so K̂ ≥ π/2
        let m = min_fourier_up_to(&k, 2f64.exp());
        assert!(m >= PI / 2.0 && m <= PI);
    }
}
