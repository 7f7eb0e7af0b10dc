//! Run configuration: one TOML document with nested sections, overridable
//! key by key from the command line.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use resonance_core::hunt::{ScanBudget, Target};
use resonance_core::resonator::{ResonatorParams, DEFAULT_SUPPORT_LIMIT};
use resonance_core::zeta::PrecisionPolicy;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Build,
    Verify,
    Hunt,
    Sample,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Build => "build",
            Command::Verify => "verify",
            Command::Hunt => "hunt",
            Command::Sample => "sample",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub params: ParamsConfig,
    pub precision: PrecisionConfig,
    pub output_dir: PathBuf,
    pub seed: u64,
    pub format: Format,
    pub hunt: HuntConfig,
    pub sample: SampleConfig,
    pub verify: VerifyConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: Command::Verify,
            params: ParamsConfig::default(),
            precision: PrecisionConfig::default(),
            output_dir: PathBuf::from("resonance-out"),
            seed: 0,
            format: Format::Json,
            hunt: HuntConfig::default(),
            sample: SampleConfig::default(),
            verify: VerifyConfig::default(),
        }
    }
}

/// Resonator parameters. Give either `kappa` (then `N = floor(T^κ)`) or `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParamsConfig {
    pub t: f64,
    pub kappa: Option<f64>,
    pub n: Option<u64>,
    pub gamma: f64,
    pub a: f64,
    pub epsilon: f64,
    pub block_override: Option<[f64; 2]>,
    pub element_cap: Option<u32>,
    pub support_limit: usize,
}

impl Default for ParamsConfig {
    fn default() -> Self {
        Self {
            t: 1e5,
            kappa: None,
            n: None,
            gamma: 0.5,
            a: 1.5,
            epsilon: 0.1,
            block_override: None,
            element_cap: None,
            support_limit: DEFAULT_SUPPORT_LIMIT,
        }
    }
}

pub const DEFAULT_KAPPA: f64 = 0.8;

impl ParamsConfig {
    pub fn resolve(&self) -> Result<ResonatorParams> {
        let mut p = match (self.kappa, self.n) {
            (Some(_), Some(_)) => return Err(CliError::Config("params: give either kappa or n, not both".into())),
            (None, Some(n)) => ResonatorParams::with_size(n, self.t, self.gamma, self.a, self.epsilon),
            (k, None) => {
                ResonatorParams::at_height(self.t, k.unwrap_or(DEFAULT_KAPPA), self.gamma, self.a, self.epsilon)
            }
        }
        .map_err(|e| CliError::Config(format!("params: {e}")))?;
        if let Some([lo, hi]) = self.block_override {
            p = p.with_override(lo, hi);
        }
        if let Some(cap) = self.element_cap {
            p = p.with_element_cap(cap);
        }
        p = p.with_support_limit(self.support_limit);
        p.validate().map_err(|e| CliError::Config(format!("params: {e}")))?;
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PrecisionConfig {
    pub working_digits: u32,
    pub quadrature_abs_tol: f64,
    pub zero_isolation_tol: f64,
    pub max_height: f64,
    /// Riemann–Siegel on the critical line above `riemann_siegel_above`.
    pub riemann_siegel: bool,
    pub riemann_siegel_above: f64,
    pub em_depth: usize,
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        let p = PrecisionPolicy::fast();
        Self {
            working_digits: p.working_digits,
            quadrature_abs_tol: p.quadrature_abs_tol,
            zero_isolation_tol: p.zero_isolation_tol,
            max_height: p.max_height,
            riemann_siegel: true,
            riemann_siegel_above: p.riemann_siegel_above.unwrap_or(200.0),
            em_depth: p.em_depth,
        }
    }
}

impl PrecisionConfig {
    pub fn resolve(&self) -> Result<PrecisionPolicy> {
        let p = PrecisionPolicy {
            working_digits: self.working_digits,
            quadrature_abs_tol: self.quadrature_abs_tol,
            zero_isolation_tol: self.zero_isolation_tol,
            max_height: self.max_height,
            riemann_siegel_above: self.riemann_siegel.then_some(self.riemann_siegel_above),
            em_depth: self.em_depth,
        };
        p.validate().map_err(|e| CliError::Config(format!("precision: {e}")))?;
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HuntConfig {
    pub target: Target,
    pub beta: f64,
    pub c: f64,
    pub baseline: bool,
    pub grid_points: usize,
    pub candidates: usize,
    pub probes: usize,
    pub golden_steps: usize,
    pub max_evaluations: usize,
}

impl Default for HuntConfig {
    fn default() -> Self {
        let b = ScanBudget::default();
        Self {
            target: Target::AbsZeta,
            beta: 0.0,
            c: 1.0,
            baseline: true,
            grid_points: b.grid_points,
            candidates: b.candidates,
            probes: b.probes,
            golden_steps: b.golden_steps,
            max_evaluations: b.max_evaluations,
        }
    }
}

impl HuntConfig {
    pub fn budget(&self) -> Result<ScanBudget> {
        if !(0.0..1.0).contains(&self.beta) {
            return Err(CliError::Config(format!("hunt.beta must lie in [0, 1), got {}", self.beta)));
        }
        if !self.c.is_finite() {
            return Err(CliError::Config("hunt.c must be finite".into()));
        }
        if self.grid_points < 3 || self.candidates == 0 || self.probes < 3 {
            return Err(CliError::Config("hunt: need grid_points >= 3, candidates >= 1, probes >= 3".into()));
        }
        Ok(ScanBudget {
            grid_points: self.grid_points,
            candidates: self.candidates,
            probes: self.probes,
            golden_steps: self.golden_steps,
            max_evaluations: self.max_evaluations,
        })
    }
}

/// The `t`-grid `start, start + step, ...` up to `end` for `sample`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SampleConfig {
    pub start: f64,
    pub end: f64,
    pub step: f64,
    /// Reuse ordinates from an earlier `zeros.json` when its height suffices.
    pub zero_cache: Option<PathBuf>,
}

impl Default for SampleConfig {
    fn default() -> Self {
        Self { start: 10.0, end: 100.0, step: 0.5, zero_cache: None }
    }
}

pub const MAX_SAMPLE_POINTS: usize = 1_000_000;

impl SampleConfig {
    pub fn grid(&self) -> Result<Vec<f64>> {
        if !(self.start > 0.0 && self.end >= self.start && self.step > 0.0 && self.end.is_finite()) {
            return Err(CliError::Config(format!(
                "sample: need 0 < start <= end and step > 0, got start = {}, end = {}, step = {}",
                self.start, self.end, self.step
            )));
        }
        let count = ((self.end - self.start) / self.step * (1.0 + 1e-12)).floor() as usize + 1;
        if count > MAX_SAMPLE_POINTS {
            return Err(CliError::Config(format!("sample: {count} points exceed {MAX_SAMPLE_POINTS}")));
        }
        Ok((0..count).map(|k| self.start + k as f64 * self.step).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    /// Include the resonance lift, the slowest check.
    pub lift: bool,
    pub residual_tol: f64,
    pub pair_rel_tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { lift: true, residual_tol: 1e-6, pair_rel_tol: 1e-6 }
    }
}

/// A config with every derived quantity checked.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub config: RunConfig,
    pub params: ResonatorParams,
    pub policy: PrecisionPolicy,
}

impl RunConfig {
    pub fn resolve(self) -> Result<Resolved> {
        if self.output_dir.as_os_str().is_empty() {
            return Err(CliError::Config("output_dir must not be empty".into()));
        }
        let params = self.params.resolve()?;
        let policy = self.precision.resolve()?;
        match self.command {
            Command::Hunt => {
                self.hunt.budget()?;
            }
            Command::Sample => {
                let grid = self.sample.grid()?;
                if grid.last().is_some_and(|&t| t > policy.max_height) {
                    return Err(CliError::Config(format!(
                        "sample.end = {} exceeds precision.max_height = {}",
                        self.sample.end, policy.max_height
                    )));
                }
            }
            Command::Verify => {
                if !(self.verify.residual_tol > 0.0 && self.verify.pair_rel_tol > 0.0) {
                    return Err(CliError::Config("verify tolerances must be positive".into()));
                }
            }
            Command::Build => {}
        }
        Ok(Resolved { config: self, params, policy })
    }
}

/// Reads `path` (if any), applies `section.key=value` overrides, and
/// deserializes. Override values are parsed as TOML, falling back to a
/// plain string.
pub fn load(path: Option<&Path>, overrides: &[(String, String)]) -> Result<RunConfig> {
    let mut doc = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?;
            text.parse::<toml::Table>().map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?
        }
        None => toml::Table::new(),
    };
    for (key, raw) in overrides {
        set_dotted(&mut doc, key, parse_value(raw))?;
    }
    toml::Value::Table(doc).try_into().map_err(|e: toml::de::Error| CliError::Config(e.to_string()))
}

fn parse_value(raw: &str) -> toml::Value {
    format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}

fn set_dotted(doc: &mut toml::Table, key: &str, value: toml::Value) -> Result<()> {
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(CliError::Config(format!("bad override key {key:?}")));
    }
    let (last, path) = parts.split_last().expect("split yields at least one part");
    let mut table = doc;
    for part in path {
        let entry = table.entry(part.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        table = match entry {
            toml::Value::Table(t) => t,
            _ => return Err(CliError::Config(format!("override {key:?}: {part} is not a section"))),
        };
    }
    table.insert(last.to_string(), value);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<RunConfig> {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.toml");
        std::fs::write(&p, text).unwrap();
        load(Some(&p), &[])
    }

    #[test]
    fn defaults_are_the_desk_resonator() {
        let r = RunConfig::default().resolve().unwrap();
        assert_eq!(r.params.n, 10_000);
        assert_eq!(r.params.t, 1e5);
        assert_eq!(r.policy, PrecisionPolicy::fast());
    }

    #[test]
    fn file_and_overrides() {
        let c = parse("command = \"hunt\"\nseed = 7\n[params]\nt = 1e4\nn = 1000\n[hunt]\ntarget = \"abs_s\"\n").unwrap();
        assert_eq!(c.command, Command::Hunt);
        assert_eq!(c.params.n, Some(1000));
        assert_eq!(c.hunt.target, Target::AbsS);
        let c = load(None, &[("params.t".into(), "20000".into()), ("format".into(), "csv".into())]).unwrap();
        assert_eq!(c.params.t, 20000.0);
        assert_eq!(c.format, Format::Csv);
    }

    #[test]
    fn schema_errors() {
        assert!(parse("bogus = 1").is_err());
        assert!(parse("[params]\nt = \"high\"").is_err());
        assert!(parse("[params]\nkappa = 0.5\nn = 100").unwrap().resolve().is_err());
        assert!(parse("[params]\ngamma = 0.9\na = 1.5").unwrap().resolve().is_err());
        assert!(parse("[precision]\nworking_digits = 30").unwrap().resolve().is_err());
        assert!(load(None, &[("params.t.x".into(), "1".into())]).is_err());
    }

    #[test]
    fn sample_grid() {
        let g = SampleConfig { start: 10.0, end: 11.0, step: 0.25, zero_cache: None }.grid().unwrap();
        assert_eq!(g, vec![10.0, 10.25, 10.5, 10.75, 11.0]);
        assert!(SampleConfig { step: 0.0, ..SampleConfig::default() }.grid().is_err());
    }
}
