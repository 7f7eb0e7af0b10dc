use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use resonance::config::{self, Command};
use resonance::error::EXIT_CONFIG;
use resonance::run::run;

/// Resonator-guided extreme value studies of the Riemann zeta function.
///
/// Settings come from an optional TOML file; flags and `--set key=value`
/// override it. RESONANCE_THREADS caps the worker count.
#[derive(Parser)]
#[command(name = "resonance", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the resonator and write resonator_set.json.
    Build(Common),
    /// Run the identity and inequality suite.
    Verify(Common),
    /// Search for large values guided by the resonator.
    Hunt(Common),
    /// Evaluate zeta, Z, N, S and S1 on a t-grid.
    Sample(Common),
}

#[derive(Args)]
struct Common {
    /// TOML config file.
    #[arg(short, long)]
    config: Option<PathBuf>,
    #[arg(short, long)]
    output_dir: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// json or csv.
    #[arg(long)]
    format: Option<String>,
    /// Scan height T.
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    /// Resonator size N (instead of kappa).
    #[arg(long)]
    n: Option<u64>,
    /// Override any key, e.g. `--set hunt.target=abs_s`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl Common {
    fn overrides(&self, command: Command) -> Result<Vec<(String, String)>, String> {
        let mut v = vec![("command".to_string(), format!("\"{}\"", command.name()))];
        if let Some(d) = &self.output_dir {
            v.push(("output_dir".into(), toml_string(&d.to_string_lossy())));
        }
        if let Some(s) = self.seed {
            v.push(("seed".into(), s.to_string()));
        }
        if let Some(f) = &self.format {
            v.push(("format".into(), toml_string(f)));
        }
        for (key, val) in [("params.t", self.t), ("params.kappa", self.kappa)] {
            if let Some(x) = val {
                v.push((key.into(), format!("{x:?}")));
            }
        }
        if let Some(n) = self.n {
            v.push(("params.n".into(), n.to_string()));
        }
        for kv in &self.set {
            let (k, val) = kv.split_once('=').ok_or_else(|| format!("--set expects KEY=VALUE, got {kv:?}"))?;
            v.push((k.trim().to_string(), val.trim().to_string()));
        }
        Ok(v)
    }
}

fn toml_string(s: &str) -> String {
    toml::Value::String(s.to_string()).to_string()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, common) = match &cli.command {
        Cmd::Build(c) => (Command::Build, c),
        Cmd::Verify(c) => (Command::Verify, c),
        Cmd::Hunt(c) => (Command::Hunt, c),
        Cmd::Sample(c) => (Command::Sample, c),
    };
    let overrides = match common.overrides(command) {
        Ok(o) => o,
        Err(msg) => {
            eprintln!("error: config error: {msg}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let outcome = config::load(common.config.as_deref(), &overrides).and_then(run);
    match outcome {
        Ok(o) => {
            for line in &o.lines {
                println!("{line}");
            }
            for p in &o.written {
                println!("wrote {}", p.display());
            }
            ExitCode::from(o.exit)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
