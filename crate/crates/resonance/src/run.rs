//! The four commands. Every payload is computed before anything is written,
//! so a failed run leaves no artifacts behind.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use resonance_core::hunt::{hunt, resonant_scan, ScanReport};
use resonance_core::resonator::ResonatorSet;
use resonance_core::zeta::{CriticalSample, ZetaEngine};
use resonance_core::Error;

use crate::artifact::{csv_artifact, Batch, Envelope};
use crate::config::{Command, Format, Resolved, RunConfig};
use crate::error::{CliError, Result, EXIT_ASSERTION, EXIT_PASS};
use crate::formats::{load_zeros, set_envelope, zeros_envelope};
use crate::suite::{run_suite, Check, IdentityRow};
use crate::parallel;

pub const SET_FILE: &str = "resonator_set.json";
pub const IDENTITIES_FILE: &str = "identities.csv";
pub const SAMPLES_FILE: &str = "samples.csv";
pub const ZEROS_FILE: &str = "zeros.json";

#[derive(Debug)]
pub struct Outcome {
    pub exit: u8,
    pub written: Vec<PathBuf>,
    /// Human-readable report lines.
    pub lines: Vec<String>,
}

pub fn run(config: RunConfig) -> Result<Outcome> {
    let r = config.resolve()?;
    let pool = parallel::pool()?;
    let mut batch = Batch::default();
    let mut lines = Vec::new();
    let mut exit = EXIT_PASS;
    match r.config.command {
        Command::Build => build(&r, &mut batch, &mut lines)?,
        Command::Verify => exit = verify(&r, &pool, &mut batch, &mut lines)?,
        Command::Hunt => scan(&r, &mut batch, &mut lines)?,
        Command::Sample => sample(&r, &pool, &mut batch, &mut lines)?,
    }
    let written = batch.commit(&r.config.output_dir)?;
    Ok(Outcome { exit, written, lines })
}

fn build(r: &Resolved, batch: &mut Batch, lines: &mut Vec<String>) -> Result<()> {
    let set = ResonatorSet::build(&r.params)?;
    let env = set_envelope(&r.config, &set);
    let s = &env.payload.summary;
    lines.push(format!(
        "N = {}, T = {}, |P| = {}, |M| = {}, |M'| = {}, sum f^2 = {:.6}, sum r^2 = {:.6}",
        r.params.n,
        r.params.t,
        set.blocks.primes.len(),
        s.support_size,
        s.reps_size,
        s.sum_f_squared,
        s.sum_r_squared
    ));
    lines.push(format!("content_sha256 {}", env.content_sha256));
    batch.add(SET_FILE, env.to_bytes());
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifySummary {
    pub passed: usize,
    pub failed: usize,
    pub reported: usize,
    pub checks: Vec<Check>,
}

fn check_line(c: &Check) -> String {
    let status = match (c.hard, c.passed) {
        (false, _) => "REPORT",
        (true, true) => "PASS",
        (true, false) => "FAIL",
    };
    if c.hard {
        format!("{status:6} {:32} {:.3e} (bound {:.3e}) {}", c.id, c.value, c.bound, c.detail)
    } else {
        format!("{status:6} {:32} {:.3e} {}", c.id, c.value, c.detail)
    }
}

fn verify(r: &Resolved, pool: &rayon::ThreadPool, batch: &mut Batch, lines: &mut Vec<String>) -> Result<u8> {
    let out = run_suite(r, pool)?;
    lines.extend(out.checks.iter().map(check_line));
    let failed = out.hard_failures();
    let summary = VerifySummary {
        passed: out.checks.iter().filter(|c| c.hard && c.passed).count(),
        failed,
        reported: out.checks.iter().filter(|c| !c.hard).count(),
        checks: out.checks.clone(),
    };
    lines.push(format!("{} passed, {} failed, {} reported", summary.passed, summary.failed, summary.reported));
    let rows: Vec<IdentityRow> = out.identities.iter().map(IdentityRow::from).collect();
    batch.add(IDENTITIES_FILE, csv_artifact(&r.config, &[], &rows)?.bytes);
    match r.config.format {
        Format::Json => batch.add("summary.json", Envelope::new("verify_summary", 1, &r.config, summary).to_bytes()),
        Format::Csv => {
            let extra = vec![format!("passed: {}", summary.passed), format!("failed: {}", summary.failed)];
            batch.add("summary.csv", csv_artifact(&r.config, &extra, &summary.checks)?.bytes);
        }
    }
    Ok(if failed == 0 { EXIT_PASS } else { EXIT_ASSERTION })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PeakRow {
    pub rank: usize,
    pub t: f64,
    pub value: f64,
    pub resonator: f64,
    pub refinements: usize,
}

fn scan(r: &Resolved, batch: &mut Batch, lines: &mut Vec<String>) -> Result<()> {
    let h = &r.config.hunt;
    let budget = h.budget()?;
    let engine = ZetaEngine::new(r.policy)?;
    let set = ResonatorSet::build(&r.params)?;
    let report = if h.baseline {
        hunt(&engine, &set, h.beta, h.target, h.c, &budget, r.config.seed)?
    } else {
        resonant_scan(&engine, &set, h.beta, h.target, h.c, &budget)?
    };
    lines.extend(scan_lines(&report));
    match r.config.format {
        Format::Json => batch.add("scan.json", Envelope::new("scan_report", 1, &r.config, report).to_bytes()),
        Format::Csv => {
            let rows: Vec<PeakRow> = report
                .peaks
                .iter()
                .enumerate()
                .map(|(i, p)| PeakRow {
                    rank: i + 1,
                    t: p.t,
                    value: p.value,
                    resonator: p.resonator,
                    refinements: p.trace.len(),
                })
                .collect();
            batch.add("scan.csv", csv_artifact(&r.config, &scan_header(&report), &rows)?.bytes);
        }
    }
    Ok(())
}

fn scan_header(rep: &ScanReport) -> Vec<String> {
    let mut v = vec![
        format!("target: {}", rep.target.name()),
        format!("beta: {}", rep.beta),
        format!("t_max: {}", rep.t_max),
        format!("c: {}", rep.c),
        format!("benchmark: {}", rep.benchmark),
        format!("solved_c: {}", rep.solved_c.map_or("none".into(), |c| c.to_string())),
        format!("evaluations: {}", rep.evaluations),
        format!(
            "budget: grid_points={} candidates={} probes={} golden_steps={} max_evaluations={}",
            rep.budget.grid_points,
            rep.budget.candidates,
            rep.budget.probes,
            rep.budget.golden_steps,
            rep.budget.max_evaluations
        ),
    ];
    if let Some(q) = &rep.baseline {
        v.push(format!(
            "baseline: q50={} q90={} q99={} q999={} samples={} seed={}",
            q.q50, q.q90, q.q99, q.q999, q.samples, q.seed
        ));
    }
    v
}

fn scan_lines(rep: &ScanReport) -> Vec<String> {
    let mut v: Vec<String> = rep
        .peaks
        .iter()
        .take(5)
        .enumerate()
        .map(|(i, p)| format!("#{:<2} t = {:.6}  {} = {:.6}  |R|^2 = {:.4e}", i + 1, p.t, rep.target.name(), p.value, p.resonator))
        .collect();
    v.push(format!("benchmark(c = {}) = {:.6}, solved c = {:?}", rep.c, rep.benchmark, rep.solved_c));
    if let Some(q) = &rep.baseline {
        v.push(format!("baseline q50 {:.4} q90 {:.4} q99 {:.4} q99.9 {:.4}", q.q50, q.q90, q.q99, q.q999));
    }
    v
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRow {
    pub t: f64,
    #[serde(rename = "ReZeta")]
    pub re_zeta: f64,
    #[serde(rename = "ImZeta")]
    pub im_zeta: f64,
    #[serde(rename = "Z")]
    pub z: f64,
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "S")]
    pub s: f64,
    #[serde(rename = "S1")]
    pub s1: f64,
}

impl From<CriticalSample> for SampleRow {
    fn from(c: CriticalSample) -> Self {
        Self { t: c.t, re_zeta: c.zeta_half.re, im_zeta: c.zeta_half.im, z: c.z, n: c.n_count, s: c.s, s1: c.s1 }
    }
}

fn sample(r: &Resolved, pool: &rayon::ThreadPool, batch: &mut Batch, lines: &mut Vec<String>) -> Result<()> {
    let grid = r.config.sample.grid()?;
    let end = *grid.last().expect("grid is never empty");
    let engine = ZetaEngine::new(r.policy)?;
    let cached = match &r.config.sample.zero_cache {
        Some(p) => Some(load_zeros(p)?).filter(|z| z.height >= end),
        None => None,
    };
    let zeros = match cached {
        Some(z) => z,
        None => engine.zeros(end)?,
    };
    let results = parallel::map(pool, &grid, |&t| zeros.sample(&engine, t));
    let mut rows = Vec::with_capacity(grid.len());
    let mut skipped = Vec::new();
    for (t, res) in grid.iter().zip(results) {
        match res {
            Ok(c) => rows.push(SampleRow::from(c)),
            Err(Error::OrdinateTooClose { .. }) => skipped.push(*t),
            Err(e) => return Err(CliError::Core(e)),
        }
    }
    lines.push(format!("{} samples, {} zeros up to {}, {} skipped at ordinates", rows.len(), zeros.ordinates.len(), zeros.height, skipped.len()));
    let extra: Vec<String> = skipped.iter().map(|t| format!("skipped: t = {t} lies on an ordinate")).collect();
    batch.add(SAMPLES_FILE, csv_artifact(&r.config, &extra, &rows)?.bytes);
    batch.add(ZEROS_FILE, zeros_envelope(&r.config, &zeros).to_bytes());
    Ok(())
}
