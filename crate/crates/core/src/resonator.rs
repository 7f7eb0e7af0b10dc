//! The resonator: prime blocks, the multiplicative weight `f`, the capped
//! square-free support `𝓜`, and the binned coefficients `r(m_j)` on `𝓜′`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::E;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{Float, One};

use crate::primes::primes_in;
use crate::{Error, Result};

/// Tunables for building a resonator.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ResonatorParams {
    /// Size budget `N = floor(T^κ)`.
    pub n: u64,
    /// Scan height `T`.
    pub t: f64,
    pub gamma: f64,
    pub a: f64,
    pub kappa: f64,
    /// Fejér width parameter; the kernel width is `ε log T`.
    pub epsilon: f64,
    /// Explicit prime window `(lo, hi]` replacing the asymptotic range.
    pub block_override: Option<(f64, f64)>,
    /// Maximum number of prime factors per support element.
    pub element_cap: Option<u32>,
    /// Hard limit on `|𝓜|`.
    pub support_limit: usize,
}

pub const DEFAULT_SUPPORT_LIMIT: usize = 2_000_000;

impl ResonatorParams {
    /// Parameters at height `t` with `N = floor(t^kappa)`.
    pub fn at_height(t: f64, kappa: f64, gamma: f64, a: f64, epsilon: f64) -> Result<Self> {
        if !(t > 1.0 && t.is_finite()) {
            return Err(Error::InvalidParams(format!("T must be finite and > 1, got {t}")));
        }
        if !(kappa > 0.0 && kappa <= 1.0) {
            return Err(Error::InvalidParams(format!("kappa must lie in (0, 1], got {kappa}")));
        }
        let n = size_for(t, kappa);
        let p = Self {
            n,
            t,
            gamma,
            a,
            kappa,
            epsilon,
            block_override: None,
            element_cap: None,
            support_limit: DEFAULT_SUPPORT_LIMIT,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parameters with a prescribed `N` at height `t`; `κ` is set to
    /// `log N / log T` so that `N = floor(T^κ)` holds.
    pub fn with_size(n: u64, t: f64, gamma: f64, a: f64, epsilon: f64) -> Result<Self> {
        if !(t > 1.0 && t.is_finite()) {
            return Err(Error::InvalidParams(format!("T must be finite and > 1, got {t}")));
        }
        let kappa = (n as f64).ln() / t.ln();
        let p = Self {
            n,
            t,
            gamma,
            a,
            kappa,
            epsilon,
            block_override: None,
            element_cap: None,
            support_limit: DEFAULT_SUPPORT_LIMIT,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_override(mut self, lo: f64, hi: f64) -> Self {
        self.block_override = Some((lo, hi));
        self
    }

    pub fn with_element_cap(mut self, cap: u32) -> Self {
        self.element_cap = Some(cap);
        self
    }

    pub fn with_support_limit(mut self, limit: usize) -> Self {
        self.support_limit = limit;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: alloc::string::String| Err(Error::InvalidParams(m));
        // log log log N must be positive, i.e. N > e^e.
        if self.n < 16 {
            return bad(format!("N must be at least 16, got {}", self.n));
        }
        if !(self.t > 1.0 && self.t.is_finite()) {
            return bad(format!("T must be finite and > 1, got {}", self.t));
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return bad(format!("gamma must lie in (0, 1), got {}", self.gamma));
        }
        if !(self.a > 1.0 && self.a * self.gamma < 1.0) {
            return bad(format!("need 1 < a < 1/gamma, got a = {}, gamma = {}", self.a, self.gamma));
        }
        if !(self.kappa > 0.0 && self.kappa <= 1.0) {
            return bad(format!("kappa must lie in (0, 1], got {}", self.kappa));
        }
        if size_for(self.t, self.kappa) != self.n {
            return bad(format!("N = {} is not floor(T^kappa) = {}", self.n, size_for(self.t, self.kappa)));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return bad(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if let Some((lo, hi)) = self.block_override {
            if !(lo >= 0.0 && lo <= hi && hi.is_finite()) {
                return bad(format!("block override ({lo}, {hi}] is not a valid interval"));
            }
        }
        if self.element_cap == Some(0) {
            return bad("element_cap must be positive".into());
        }
        Ok(())
    }

    /// `(log N, log log N, log log log N)`.
    pub fn logs(&self) -> (f64, f64, f64) {
        let l1 = (self.n as f64).ln();
        let l2 = l1.ln();
        (l1, l2, l2.ln())
    }

    /// The width `ε log T` of the Fejér kernel attached to these parameters.
    pub fn fejer_width(&self) -> f64 {
        self.epsilon * self.t.ln()
    }
}

// A tiny relative nudge keeps exact powers such as 10^(0.8*5) from
// rounding down.
fn size_for(t: f64, kappa: f64) -> u64 {
    (t.powf(kappa) * (1.0 + 1e-12)).floor() as u64
}

/// One block `P_k` of primes with its factor cap.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Block {
    pub k: u32,
    pub lo: f64,
    pub hi: f64,
    pub primes: Vec<u64>,
    pub cap: u32,
}

/// The prime set `P` split into blocks.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PrimeBlocks {
    pub lo: f64,
    pub hi: f64,
    pub primes: Vec<u64>,
    pub blocks: Vec<Block>,
}

impl PrimeBlocks {
    /// Block index of `p`, if `p ∈ P`.
    pub fn block_of(&self, p: u64) -> Option<usize> {
        self.blocks.iter().position(|b| b.primes.binary_search(&p).is_ok())
    }
}

/// Cap `floor(a log N / (k² log log log N))`.
pub fn block_cap(params: &ResonatorParams, k: u32) -> u32 {
    let (l1, _, l3) = params.logs();
    let c = params.a * l1 / ((k as f64).powi(2) * l3);
    // the nudge absorbs rounding when the quotient is an exact integer
    (c * (1.0 + 1e-12)).floor().min(u32::MAX as f64) as u32
}

pub fn build_blocks(params: &ResonatorParams) -> Result<PrimeBlocks> {
    params.validate()?;
    if let Some((lo, hi)) = params.block_override {
        let primes = primes_in(lo.floor() as u64, hi.floor() as u64);
        // primes_in works with integer bounds; (lo, hi] for real lo means p > lo.
        let primes: Vec<u64> = primes.into_iter().filter(|&p| (p as f64) > lo).collect();
        if primes.is_empty() {
            return Err(Error::EmptyRange);
        }
        let cap = block_cap(params, 1);
        return Ok(PrimeBlocks {
            lo,
            hi,
            primes: primes.clone(),
            blocks: vec![Block { k: 1, lo, hi, primes, cap }],
        });
    }
    let (l1, l2, _) = params.logs();
    let base = l1 * l2;
    let lo = E * base;
    let top = l2.powf(params.gamma).exp() * base;
    let count = l2.powf(params.gamma).floor() as u32;
    let primes = sieve_real(lo, top);
    if primes.is_empty() {
        return Err(Error::EmptyRange);
    }
    let mut blocks = Vec::new();
    for k in 1..=count {
        let b_lo = (k as f64).exp() * base;
        let b_hi = ((k + 1) as f64).exp().min(l2.powf(params.gamma).exp()) * base;
        let ps: Vec<u64> = primes.iter().copied().filter(|&p| (p as f64) > b_lo && (p as f64) <= b_hi).collect();
        blocks.push(Block { k, lo: b_lo, hi: b_hi, primes: ps, cap: block_cap(params, k) });
    }
    Ok(PrimeBlocks { lo, hi: top, primes, blocks })
}

/// Primes in the real interval `(lo, hi]`.
pub fn sieve_real(lo: f64, hi: f64) -> Vec<u64> {
    if !(hi >= lo) || hi < 2.0 {
        return Vec::new();
    }
    let lo = lo.max(0.0);
    primes_in(lo.floor() as u64, hi.floor() as u64)
        .into_iter()
        .filter(|&p| (p as f64) > lo)
        .collect()
}

/// `f(p) = sqrt(L1 L2 / L3) / (sqrt(p) (log p − L2 − L3))` for `p ∈ P`, else 0.
pub fn weight_f(p: u64, params: &ResonatorParams, blocks: &PrimeBlocks) -> Result<f64> {
    if blocks.primes.binary_search(&p).is_err() {
        return Ok(0.0);
    }
    prime_weight(p, params)
}

fn prime_weight(p: u64, params: &ResonatorParams) -> Result<f64> {
    let (l1, l2, l3) = params.logs();
    let pf = p as f64;
    let denom = pf.ln() - l2 - l3;
    if denom <= 0.0 {
        return Err(Error::DegenerateWeight(p));
    }
    Ok((l1 * l2 / l3).sqrt() / (pf.sqrt() * denom))
}

/// A square-free support element, stored by its prime factors.
#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    /// Ascending prime factors; empty for `n = 1`.
    pub factors: Vec<u64>,
    pub log: f64,
    /// `f(n)`.
    pub weight: f64,
}

impl Element {
    pub fn value(&self) -> BigUint {
        self.factors.iter().fold(BigUint::one(), |acc, &p| acc * p)
    }

    pub fn value_u64(&self) -> Option<u64> {
        self.factors.iter().try_fold(1u64, |acc, &p| acc.checked_mul(p))
    }
}

/// A bin representative `m_j` with coefficient `r(m_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Representative {
    pub bin: i64,
    /// Index into [`ResonatorSet::support`].
    pub element: usize,
    pub log: f64,
    pub r: f64,
}

/// The support `𝓜` with weights and the binned representatives `𝓜′`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResonatorSet {
    pub params: ResonatorParams,
    pub blocks: PrimeBlocks,
    /// Sorted by ascending `log`.
    pub support: Vec<Element>,
    /// Sorted by ascending bin index.
    pub reps: Vec<Representative>,
    /// Bin edges are powers of this ratio, `1 + 1/T`.
    pub bin_ratio: f64,
}

/// Depth-first enumeration of `𝓜` (including the empty product 1).
pub fn enumerate_support(blocks: &PrimeBlocks, params: &ResonatorParams) -> Result<Vec<Element>> {
    let mut primes: Vec<(u64, usize, f64, f64)> = Vec::new();
    for (bi, b) in blocks.blocks.iter().enumerate() {
        for &p in &b.primes {
            primes.push((p, bi, (p as f64).ln(), prime_weight(p, params)?));
        }
    }
    primes.sort_unstable_by_key(|x| x.0);
    let caps: Vec<u32> = blocks.blocks.iter().map(|b| b.cap).collect();
    let total_cap = params.element_cap.unwrap_or(u32::MAX);
    let mut out = Vec::new();
    let mut counts = vec![0u32; caps.len()];
    let mut stack = Vec::new();
    dfs(
        &primes,
        &caps,
        total_cap,
        params.support_limit,
        0,
        &mut counts,
        &mut stack,
        0.0,
        1.0,
        &mut out,
    )?;
    out.sort_by(|a, b| a.log.total_cmp(&b.log));
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    primes: &[(u64, usize, f64, f64)],
    caps: &[u32],
    total_cap: u32,
    limit: usize,
    start: usize,
    counts: &mut [u32],
    stack: &mut Vec<u64>,
    log: f64,
    weight: f64,
    out: &mut Vec<Element>,
) -> Result<()> {
    if out.len() >= limit {
        return Err(Error::BudgetExceeded(format!("support exceeds the limit of {limit} elements")));
    }
    out.push(Element { factors: stack.clone(), log, weight });
    if stack.len() as u32 >= total_cap {
        return Ok(());
    }
    for i in start..primes.len() {
        let (p, b, lp, fp) = primes[i];
        if counts[b] >= caps[b] {
            continue;
        }
        counts[b] += 1;
        stack.push(p);
        dfs(primes, caps, total_cap, limit, i + 1, counts, stack, log + lp, weight * fp, out)?;
        stack.pop();
        counts[b] -= 1;
    }
    Ok(())
}

/// Bin index of `log n` for bins `[(1+1/T)^j, (1+1/T)^{j+1})`.
pub fn bin_index(log: f64, t: f64) -> i64 {
    (log / (1.0 / t).ln_1p()).floor() as i64
}

/// Representatives `m_j` and `r(m_j)² = Σ f(n)²` over `n` in bins `j−1, j, j+1`.
pub fn bin_representatives(support: &[Element], t: f64) -> Vec<Representative> {
    // (bin, element index, sum of f² in this bin), support sorted by log
    let mut bins: Vec<(i64, usize, f64)> = Vec::new();
    for (i, e) in support.iter().enumerate() {
        let j = bin_index(e.log, t);
        match bins.last_mut() {
            Some(last) if last.0 == j => {
                if is_smaller(e, &support[last.1]) {
                    last.1 = i;
                }
                last.2 += e.weight * e.weight;
            }
            _ => bins.push((j, i, e.weight * e.weight)),
        }
    }
    let mut reps = Vec::with_capacity(bins.len());
    for (idx, &(j, i, own)) in bins.iter().enumerate() {
        let mut sq = own;
        if idx > 0 && bins[idx - 1].0 == j - 1 {
            sq += bins[idx - 1].2;
        }
        if idx + 1 < bins.len() && bins[idx + 1].0 == j + 1 {
            sq += bins[idx + 1].2;
        }
        reps.push(Representative { bin: j, element: i, log: support[i].log, r: sq.sqrt() });
    }
    reps
}

fn is_smaller(a: &Element, b: &Element) -> bool {
    if (a.log - b.log).abs() > 1e-9 {
        return a.log < b.log;
    }
    a.value() < b.value()
}

impl ResonatorSet {
    pub fn build(params: &ResonatorParams) -> Result<Self> {
        let blocks = build_blocks(params)?;
        let support = enumerate_support(&blocks, params)?;
        let reps = bin_representatives(&support, params.t);
        Ok(Self { params: params.clone(), blocks, support, reps, bin_ratio: 1.0 + 1.0 / params.t })
    }

    /// `R(t) = Σ r(m) m^{-it}`.
    pub fn value(&self, t: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for rep in &self.reps {
            let (s, c) = (t * rep.log).sin_cos();
            acc += Complex64::new(rep.r * c, -rep.r * s);
        }
        acc
    }

    /// `R(t0 + k h)` for `k = 0..count`, by phase rotation.
    pub fn values_on_grid(&self, t0: f64, h: f64, count: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); count];
        dirichlet_on_grid(self.reps.iter().map(|r| (r.r, r.log)), t0, h, &mut out);
        out
    }

    /// `R(0) = Σ r(m)`.
    pub fn value_at_zero(&self) -> f64 {
        self.reps.iter().map(|r| r.r).sum()
    }

    pub fn sum_f_squared(&self) -> f64 {
        self.support.iter().map(|e| e.weight * e.weight).sum()
    }

    pub fn sum_r_squared(&self) -> f64 {
        self.reps.iter().map(|r| r.r * r.r).sum()
    }

    /// Every divisor of every element is again an element.
    pub fn is_divisor_closed(&self) -> bool {
        let set: BTreeSet<&[u64]> = self.support.iter().map(|e| e.factors.as_slice()).collect();
        let mut buf = Vec::new();
        self.support.iter().all(|e| {
            (0..e.factors.len()).all(|skip| {
                buf.clear();
                buf.extend(e.factors.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, &p)| p));
                set.contains(buf.as_slice())
            })
        })
    }

    /// Every element is square-free with at most `cap_k` factors from block `k`.
    pub fn caps_respected(&self) -> bool {
        self.support.iter().all(|e| {
            let mut counts = vec![0u32; self.blocks.blocks.len()];
            for w in e.factors.windows(2) {
                if w[0] >= w[1] {
                    return false;
                }
            }
            for &p in &e.factors {
                match self.blocks.block_of(p) {
                    Some(b) => counts[b] += 1,
                    None => return false,
                }
            }
            counts.iter().zip(&self.blocks.blocks).all(|(c, b)| *c <= b.cap)
                && self.params.element_cap.map_or(true, |cap| e.factors.len() as u32 <= cap)
        })
    }

    /// Index of the element with the given factor list.
    pub fn find(&self, factors: &[u64]) -> Option<usize> {
        let log: f64 = factors.iter().map(|&p| (p as f64).ln()).sum();
        let start = self.support.partition_point(|e| e.log < log - 1e-9);
        self.support[start..]
            .iter()
            .take_while(|e| e.log <= log + 1e-9)
            .position(|e| e.factors == factors)
            .map(|i| i + start)
    }
}

/// Accumulates `Σ c e^{-i t λ}` at `t = t0 + k h` into `out`, for terms `(c, λ)`.
pub fn dirichlet_on_grid<I: IntoIterator<Item = (f64, f64)>>(terms: I, t0: f64, h: f64, out: &mut [Complex64]) {
    const RENORM: usize = 256;
    for (c, lam) in terms {
        let (s, co) = (h * lam).sin_cos();
        let step = Complex64::new(co, -s);
        let mut k = 0;
        while k < out.len() {
            let (s0, c0) = ((t0 + k as f64 * h) * lam).sin_cos();
            let mut z = Complex64::new(c * c0, -c * s0);
            let end = (k + RENORM).min(out.len());
            for slot in &mut out[k..end] {
                *slot += z;
                z *= step;
            }
            k = end;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn desk() -> ResonatorParams {
        ResonatorParams::with_size(10_000, 1e5, 0.5, 1.5, 0.1).unwrap()
    }

    #[test]
    fn desk_blocks() {
        let p = desk();
        let b = build_blocks(&p).unwrap();
        assert_eq!(b.primes, vec![59, 61, 67, 71, 73, 79, 83, 89]);
        assert_eq!(b.blocks.len(), 1);
        assert_eq!(b.blocks[0].cap, 17);
        assert!((b.lo - 55.588_769_947_436).abs() < 1e-9);
        assert!((b.hi - 90.745_356_978_883).abs() < 1e-9);
    }

    #[test]
    fn weight_at_59() {
        let p = desk();
        let b = build_blocks(&p).unwrap();
        let f = weight_f(59, &p, &b).unwrap();
        assert!((f - 0.622_141_095_477_48).abs() < 1e-12, "{f}");
        assert_eq!(weight_f(53, &p, &b).unwrap(), 0.0);
    }

    #[test]
    fn degenerate_weight_is_refused() {
        let p = desk().with_override(1.0, 10.0);
        let b = build_blocks(&p).unwrap();
        assert_eq!(b.primes, vec![2, 3, 5, 7]);
        assert_eq!(b.blocks.len(), 1);
        assert_eq!(enumerate_support(&b, &p), Err(Error::DegenerateWeight(2)));
    }

    #[test]
    fn empty_override() {
        let p = desk().with_override(90.0, 96.0);
        assert_eq!(build_blocks(&p), Err(Error::EmptyRange));
    }

    #[test]
    fn two_prime_support() {
        let p = desk().with_override(58.0, 61.0);
        let set = ResonatorSet::build(&p).unwrap();
        let vals: Vec<u64> = set.support.iter().map(|e| e.value_u64().unwrap()).collect();
        assert_eq!(vals, vec![1, 59, 61, 59 * 61]);
        let f59 = set.support[1].weight;
        let f61 = set.support[2].weight;
        assert_eq!(set.support[3].weight, f59 * f61);
        assert!(set.is_divisor_closed());
    }

    #[test]
    fn support_limit_enforced() {
        let p = desk().with_support_limit(100);
        assert!(matches!(ResonatorSet::build(&p), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn param_validation() {
        assert!(ResonatorParams::with_size(15, 1e5, 0.5, 1.5, 0.1).is_err());
        assert!(ResonatorParams::with_size(100, 1e5, 0.5, 2.0, 0.1).is_err());
        assert!(ResonatorParams::with_size(100, 1e5, 1.0, 0.5, 0.1).is_err());
        assert!(ResonatorParams::with_size(100, 1e5, 0.5, 1.5, 0.0).is_err());
        let p = ResonatorParams::at_height(1e5, 0.8, 0.5, 1.5, 0.1).unwrap();
        assert_eq!(p.n, 10_000);
        let mut q = p.clone();
        q.n = 9_999;
        assert!(q.validate().is_err());
    }

    #[test]
    fn grid_matches_direct() {
        let set = ResonatorSet::build(&desk()).unwrap();
        let vals = set.values_on_grid(1234.5, 0.37, 700);
        for k in [0, 1, 255, 256, 257, 699] {
            let d = set.value(1234.5 + k as f64 * 0.37);
            assert!((vals[k] - d).norm() < 1e-9 * set.value_at_zero(), "k={k}");
        }
    }

    #[test]
    fn bins_pick_minimum_and_widen() {
        let mk = |log: f64, w: f64| Element { factors: Vec::new(), log, weight: w };
        let t = 10.0;
        let step = (0.1f64).ln_1p();
        // two in bin 5, one in bin 6, one in bin 9
        let support = vec![
            mk(5.2 * step, 1.0),
            mk(5.6 * step, 2.0),
            mk(6.5 * step, 3.0),
            mk(9.1 * step, 4.0),
        ];
        let reps = bin_representatives(&support, t);
        assert_eq!(reps.len(), 3);
        assert_eq!((reps[0].bin, reps[0].element), (5, 0));
        assert!((reps[0].r - (1.0f64 + 4.0 + 9.0).sqrt()).abs() < 1e-15);
        assert!((reps[1].r - (1.0f64 + 4.0 + 9.0).sqrt()).abs() < 1e-15);
        assert_eq!(reps[2].r, 4.0);
    }
}
