use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use grouptrack::report::{self, PlotInputs};
use grouptrack::sim::{monte_carlo, ConfigIssue, RunOptions};
use grouptrack::{Mode, ScenarioConfig};
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Steps excluded from the post-burn-in summary statistics.
const BURN_IN: usize = 20;
const VERBOSE_HYPOTHESES: usize = 10;

#[derive(Parser, Debug)]
#[command(name = "grouptrack", version, about = "Group target tracking scenario runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the Monte Carlo scenario and write results.
    Run(RunArgs),
    /// Check a configuration file and show how it differs from the defaults.
    Validate {
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Turn the CSV files of a run into tidy plotting series.
    Plotdata {
        /// Directory written by `run`.
        #[arg(long, env = "GROUPTRACK_OUT", default_value = "results")]
        results: PathBuf,
        /// Defaults to the results directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Augmented,
    Baseline,
    Both,
}

impl ModeArg {
    fn modes(self) -> Vec<Mode> {
        match self {
            ModeArg::Augmented => vec![Mode::Augmented],
            ModeArg::Baseline => vec![Mode::Baseline],
            ModeArg::Both => Mode::ALL.to_vec(),
        }
    }
}

#[derive(clap::Args, Debug)]
struct RunArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, env = "GROUPTRACK_OUT", default_value = "results")]
    out: PathBuf,
    /// Seed of the first trial.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, value_enum, default_value = "both")]
    mode: ModeArg,
    /// Proximity threshold for grouping, m.
    #[arg(long)]
    group_threshold: Option<f64>,
    /// Ranked-assignment budget per update.
    #[arg(long)]
    hypotheses: Option<usize>,
    /// Also dump posterior densities and top hypotheses of the first trial.
    #[arg(long)]
    verbose: bool,
}

/// An error together with the process exit code it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn config_error(error: anyhow::Error) -> Failure {
    Failure { code: 2, error }
}

fn runtime_error(error: anyhow::Error) -> Failure {
    Failure { code: 3, error }
}

fn load_config(path: Option<&Path>) -> Result<ScenarioConfig> {
    let Some(path) = path else {
        return Ok(ScenarioConfig::default());
    };
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    ScenarioConfig::from_toml(&text).with_context(|| format!("parsing {}", path.display()))
}

fn issues_error(issues: &[ConfigIssue]) -> anyhow::Error {
    let lines: Vec<String> = issues.iter().map(|i| format!("  {i}")).collect();
    anyhow::anyhow!("invalid configuration:\n{}", lines.join("\n"))
}

fn config_hash(config: &ScenarioConfig) -> String {
    hex::encode(Sha256::digest(config.to_toml().as_bytes()))
}

fn flatten(prefix: &str, value: &toml::Value, out: &mut BTreeMap<String, String>) {
    match value {
        toml::Value::Table(t) => {
            for (k, v) in t {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, out);
            }
        }
        other => {
            out.insert(prefix.to_string(), other.to_string());
        }
    }
}

fn diff_against_defaults(config: &ScenarioConfig) -> Result<Vec<String>> {
    let mut ours = BTreeMap::new();
    let mut defaults = BTreeMap::new();
    flatten("", &toml::Value::try_from(config)?, &mut ours);
    flatten("", &toml::Value::try_from(ScenarioConfig::default())?, &mut defaults);
    Ok(ours
        .iter()
        .filter(|(k, v)| defaults.get(*k) != Some(v))
        .map(|(k, v)| match defaults.get(k) {
            Some(d) => format!("{k} = {v} (default {d})"),
            None => format!("{k} = {v}"),
        })
        .collect())
}

#[derive(Serialize)]
struct RunManifest {
    version: &'static str,
    config_hash: String,
    modes: Vec<Mode>,
    trials: usize,
    seeds: [u64; 2],
    burn_in: usize,
    out_dir: PathBuf,
    files: Vec<String>,
    /// Wall-clock seconds per trial, per mode.
    trial_runtimes_s: BTreeMap<Mode, Vec<f64>>,
}

fn write(dir: &Path, name: &str, contents: &str, files: &mut Vec<String>) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    files.push(name.to_string());
    Ok(())
}

fn cmd_run(args: RunArgs) -> Result<(), Failure> {
    let mut config = load_config(args.config.as_deref()).map_err(config_error)?;
    if let Some(seed) = args.seed {
        config.scenario.base_seed = seed;
    }
    if let Some(trials) = args.trials {
        config.scenario.mc_trials = trials;
    }
    if let Some(eps) = args.group_threshold {
        // the flag moves the estimator's gate, not the scenario's
        config.truth.proximity_m.get_or_insert(config.grouping.group_threshold_m);
        config.grouping.group_threshold_m = eps;
    }
    if let Some(k) = args.hypotheses {
        config.filter.hypotheses = k;
    }
    config.validate().map_err(|issues| config_error(issues_error(&issues)))?;

    let modes = args.mode.modes();
    let options = RunOptions {
        record_states: args.verbose,
        record_hypotheses: if args.verbose { VERBOSE_HYPOTHESES } else { 0 },
    };
    let mc = monte_carlo(&config, &modes, options)
        .context("filter run failed")
        .map_err(runtime_error)?;

    let out = &args.out;
    fs::create_dir_all(out)
        .with_context(|| format!("creating {}", out.display()))
        .map_err(runtime_error)?;
    let mut files = Vec::new();
    let first_runs: Vec<_> = mc.modes.iter().filter_map(|m| m.trials.first()).collect();
    let summary = report::summary(&mc, config.scenario.steps, BURN_IN);
    (|| -> Result<()> {
        write(out, "config.toml", &config.to_toml(), &mut files)?;
        write(out, "steps.csv", &report::steps_csv(&mc), &mut files)?;
        write(out, "trials.csv", &report::trials_csv(&mc), &mut files)?;
        if let Some(r) = &mc.first_realization {
            write(out, "truth.csv", &report::truth_csv(&r.truth), &mut files)?;
            write(out, "measurements.csv", &report::measurements_csv(&r.measurements), &mut files)?;
        }
        write(out, "estimates.csv", &report::estimates_csv(first_runs.iter().copied()), &mut files)?;
        write(out, "groups.csv", &report::groups_csv(first_runs.iter().copied()), &mut files)?;
        if args.verbose {
            for run in &first_runs {
                write(out, &format!("states_{}.jsonl", run.mode), &report::states_jsonl(&run.states)?, &mut files)?;
                let hyps = report::hypotheses_jsonl(&run.hypotheses)?;
                write(out, &format!("hypotheses_{}.jsonl", run.mode), &hyps, &mut files)?;
            }
        }
        write(out, "summary.json", &serde_json::to_string_pretty(&summary)?, &mut files)?;
        let manifest = RunManifest {
            version: env!("CARGO_PKG_VERSION"),
            config_hash: config_hash(&config),
            modes: modes.clone(),
            trials: config.scenario.mc_trials,
            seeds: [
                mc.seeds.first().copied().unwrap_or_default(),
                mc.seeds.last().copied().unwrap_or_default(),
            ],
            burn_in: BURN_IN,
            out_dir: out.clone(),
            files: files.clone(),
            trial_runtimes_s: mc
                .modes
                .iter()
                .map(|m| (m.mode, m.trials.iter().map(|t| t.runtime_s).collect()))
                .collect(),
        };
        write(out, "manifest.json", &serde_json::to_string_pretty(&manifest)?, &mut files)?;
        Ok(())
    })()
    .map_err(runtime_error)?;

    for m in &summary.modes {
        let s = &m.after_burn_in;
        println!(
            "{:<9} mean OSPA {:.2} m, exact cardinality {:.1}%, exact group count {:.1}% (steps {}-{})",
            m.mode,
            s.mean_ospa,
            100.0 * s.exact_cardinality_rate,
            100.0 * s.exact_group_rate,
            s.first_step,
            s.last_step
        );
    }
    println!("results written to {}", out.display());
    Ok(())
}

fn cmd_validate(path: Option<PathBuf>) -> Result<(), Failure> {
    let config = load_config(path.as_deref()).map_err(config_error)?;
    config.validate().map_err(|issues| config_error(issues_error(&issues)))?;
    let diff = diff_against_defaults(&config).map_err(config_error)?;
    println!("configuration ok (sha256 {})", config_hash(&config));
    if diff.is_empty() {
        println!("identical to the defaults");
    } else {
        println!("differs from the defaults in:");
        for line in diff {
            println!("  {line}");
        }
    }
    Ok(())
}

fn cmd_plotdata(results: PathBuf, out: Option<PathBuf>) -> Result<(), Failure> {
    let read = |name: &str| {
        let path = results.join(name);
        fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))
    };
    let (steps, truth, estimates, measurements) = (|| -> Result<_> {
        Ok((read("steps.csv")?, read("truth.csv")?, read("estimates.csv")?, read("measurements.csv")?))
    })()
    .map_err(config_error)?;
    let series = report::plot_series(&PlotInputs {
        steps: &steps,
        truth: &truth,
        estimates: &estimates,
        measurements: &measurements,
    })
    .map_err(|e| config_error(e.into()))?;
    let out = out.unwrap_or(results);
    (|| -> Result<()> {
        fs::create_dir_all(&out)?;
        for (name, contents) in &series {
            fs::write(out.join(name), contents).with_context(|| format!("writing {name}"))?;
            println!("{}", out.join(name).display());
        }
        Ok(())
    })()
    .map_err(runtime_error)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Validate { config } => cmd_validate(config),
        Command::Plotdata { results, out } => cmd_plotdata(results, out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
