//! On-disk forms of resonator sets and zero caches. Support elements can
//! exceed `u64`, so their values are written as decimal strings.

use std::path::Path;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use resonance_core::resonator::{Element, PrimeBlocks, Representative, ResonatorParams, ResonatorSet};
use resonance_core::zeta::ZeroSet;

use crate::artifact::{read_envelope, Envelope};
use crate::config::RunConfig;
use crate::error::{CliError, Result};

pub const SET_KIND: &str = "resonator_set";
pub const SET_VERSION: u32 = 1;
pub const ZEROS_KIND: &str = "zero_cache";
pub const ZEROS_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementRecord {
    pub n: String,
    pub factors: Vec<u64>,
    pub f: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepRecord {
    pub bin: i64,
    /// Index into the support list.
    pub element: usize,
    pub n: String,
    pub r: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetSummary {
    pub support_size: usize,
    pub reps_size: usize,
    pub sum_f_squared: f64,
    pub sum_r_squared: f64,
    pub divisor_closed: bool,
    pub caps_respected: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetFile {
    pub params: ResonatorParams,
    pub blocks: PrimeBlocks,
    pub bin_ratio: f64,
    pub summary: SetSummary,
    pub support: Vec<ElementRecord>,
    pub reps: Vec<RepRecord>,
}

impl SetFile {
    pub fn from_set(set: &ResonatorSet) -> Self {
        let support = set
            .support
            .iter()
            .map(|e| ElementRecord { n: e.value().to_string(), factors: e.factors.clone(), f: e.weight })
            .collect();
        let reps = set
            .reps
            .iter()
            .map(|r| RepRecord { bin: r.bin, element: r.element, n: set.support[r.element].value().to_string(), r: r.r })
            .collect();
        Self {
            params: set.params.clone(),
            blocks: set.blocks.clone(),
            bin_ratio: set.bin_ratio,
            summary: SetSummary {
                support_size: set.support.len(),
                reps_size: set.reps.len(),
                sum_f_squared: set.sum_f_squared(),
                sum_r_squared: set.sum_r_squared(),
                divisor_closed: set.is_divisor_closed(),
                caps_respected: set.caps_respected(),
            },
            support,
            reps,
        }
    }

    /// Reassembles the set, checking every stored value against its factors.
    pub fn into_set(self) -> std::result::Result<ResonatorSet, String> {
        let mut support = Vec::with_capacity(self.support.len());
        for (i, rec) in self.support.into_iter().enumerate() {
            let e = Element {
                // same summation order as the enumeration
                log: rec.factors.iter().fold(0.0, |acc, &p| acc + (p as f64).ln()),
                factors: rec.factors,
                weight: rec.f,
            };
            let n: BigUint = rec.n.parse().map_err(|_| format!("support[{i}]: {:?} is not an integer", rec.n))?;
            if e.value() != n {
                return Err(format!("support[{i}]: {} is not the product of its factors", rec.n));
            }
            support.push(e);
        }
        let mut reps = Vec::with_capacity(self.reps.len());
        for (i, rec) in self.reps.into_iter().enumerate() {
            let e = support.get(rec.element).ok_or_else(|| format!("reps[{i}]: element {} out of range", rec.element))?;
            if e.value().to_string() != rec.n {
                return Err(format!("reps[{i}]: value {} does not match element {}", rec.n, rec.element));
            }
            reps.push(Representative { bin: rec.bin, element: rec.element, log: e.log, r: rec.r });
        }
        Ok(ResonatorSet { params: self.params, blocks: self.blocks, support, reps, bin_ratio: self.bin_ratio })
    }
}

pub fn set_envelope(config: &RunConfig, set: &ResonatorSet) -> Envelope<SetFile> {
    Envelope::new(SET_KIND, SET_VERSION, config, SetFile::from_set(set))
}

/// Loads a resonator set artifact. With `rebuild`, the set is rebuilt from
/// its parameters and must match the file exactly.
pub fn load_set(path: &Path, rebuild: bool) -> Result<(RunConfig, ResonatorSet)> {
    let env: Envelope<SetFile> = read_envelope(path, SET_KIND, SET_VERSION)?;
    let bad = |reason: String| CliError::Artifact { path: path.to_path_buf(), reason };
    let set = env.payload.into_set().map_err(bad)?;
    if rebuild {
        let fresh = ResonatorSet::build(&set.params)?;
        if fresh != set {
            return Err(bad("stored set differs from a rebuild of its parameters".into()));
        }
    }
    Ok((env.config, set))
}

pub fn zeros_envelope(config: &RunConfig, zeros: &ZeroSet) -> Envelope<ZeroSet> {
    Envelope::new(ZEROS_KIND, ZEROS_VERSION, config, zeros.clone())
}

/// Loads a zero cache, re-validating its ordering.
pub fn load_zeros(path: &Path) -> Result<ZeroSet> {
    let env: Envelope<ZeroSet> = read_envelope(path, ZEROS_KIND, ZEROS_VERSION)?;
    let z = env.payload;
    ZeroSet::from_parts(z.height, z.ordinates, z.radii)
        .map_err(|e| CliError::Artifact { path: path.to_path_buf(), reason: e.to_string() })
}
