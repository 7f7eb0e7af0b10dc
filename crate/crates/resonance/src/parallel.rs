//! Worker pool and data-parallel drivers. Work is split into chunks whose
//! boundaries do not depend on the thread count, and partial results are
//! merged in chunk order, so output is identical for any pool size.

use rayon::prelude::*;

use resonance_core::hunt::{lift_grid, lift_partial, LiftReport, LiftSums};
use resonance_core::resonator::ResonatorSet;
use resonance_core::zeta::ZetaEngine;

use crate::error::{CliError, Result};

/// Caps the number of worker threads.
pub const THREADS_ENV: &str = "RESONANCE_THREADS";

const LIFT_CHUNK: usize = 1 << 18;

pub fn pool() -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var(THREADS_ENV) {
        let n: usize = raw
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Config(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
        b = b.num_threads(n);
    }
    b.build().map_err(|e| CliError::Config(format!("thread pool: {e}")))
}

/// Ordered parallel map.
pub fn map<T: Sync, U: Send>(
    pool: &rayon::ThreadPool,
    items: &[T],
    f: impl Fn(&T) -> U + Sync + Send,
) -> Vec<U> {
    pool.install(|| items.par_iter().map(f).collect())
}

pub fn lift(pool: &rayon::ThreadPool, engine: &ZetaEngine, set: &ResonatorSet, half_width_sd: f64) -> Result<LiftReport> {
    lift_chunked(pool, engine, set, half_width_sd, LIFT_CHUNK)
}

fn lift_chunked(
    pool: &rayon::ThreadPool,
    engine: &ZetaEngine,
    set: &ResonatorSet,
    half_width_sd: f64,
    chunk: usize,
) -> Result<LiftReport> {
    let (h, count) = lift_grid(set, half_width_sd);
    let chunks: Vec<(usize, usize)> = (0..count).step_by(chunk).map(|k0| (k0, (k0 + chunk).min(count))).collect();
    let parts = map(pool, &chunks, |&(k0, k1)| lift_partial(engine, set, h, k0, k1));
    let mut total = LiftSums::default();
    for p in parts {
        total.merge(&p?);
    }
    Ok(total.report())
}

#[cfg(test)]
mod tests {
    use super::*;
    use resonance_core::resonator::ResonatorParams;
    use resonance_core::zeta::PrecisionPolicy;

    #[test]
    fn lift_does_not_depend_on_threads() {
        let p = ResonatorParams::with_size(1000, 2000.0, 0.5, 1.5, 0.1).unwrap().with_override(40.0, 60.0);
        let set = ResonatorSet::build(&p).unwrap();
        let e = ZetaEngine::new(PrecisionPolicy::fast()).unwrap();
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let three = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let a = lift_chunked(&one, &e, &set, 6.0, 5000).unwrap();
        let b = lift_chunked(&three, &e, &set, 6.0, 5000).unwrap();
        assert_eq!(a, b);
        let (h, count) = lift_grid(&set, 6.0);
        // chunked sums agree with a single pass up to reassociation
        let whole = lift_partial(&e, &set, h, 0, count).unwrap().report();
        assert!((whole.ratio - a.ratio).abs() < 1e-12);
    }
}
