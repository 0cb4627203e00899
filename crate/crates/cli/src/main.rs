use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use mindc_cli::{
    profile_data, run_suite, settings_grid, status_counts, time_summary, write_records,
    InstanceSource, Metric, NamedSetting, RunRecord, SuiteSpec,
};
use mindc_core::engine::{solve, Settings, STANDARD_SETTINGS};
use mindc_core::instances::{save_instance, ProblemKind, ProblemSpec};

#[derive(Parser)]
#[command(
    name = "mindc",
    version,
    about = "Packing and kissing problems by spatial branch and bound"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a single instance and print the result.
    Solve(SolveArgs),
    /// Run a grid of settings over a set of instances and write a CSV.
    Suite(SuiteArgs),
    /// Turn a results CSV into performance-profile curves.
    Profile(ProfileArgs),
    /// Write a generated instance as JSON.
    Export(ExportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Problem {
    PackSphere,
    PackBox,
    Kissing,
}

impl From<Problem> for ProblemKind {
    fn from(p: Problem) -> Self {
        match p {
            Problem::PackSphere => ProblemKind::PackInSphere,
            Problem::PackBox => ProblemKind::PackInBox,
            Problem::Kissing => ProblemKind::Kissing,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    Time,
    Gap,
}

#[derive(Args)]
struct Engine {
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
    heur: u8,
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
    pair: u8,
    /// Simplex-cut depth frequency: 0 (off), 1 or 10.
    #[arg(long, default_value_t = 0, value_parser = parse_cutfreq)]
    cutfreq: u32,
    #[arg(long, default_value_t = 0.005)]
    gap: f64,
    /// Seconds.
    #[arg(long, default_value_t = 7200.0)]
    time_limit: f64,
    #[arg(long)]
    node_limit: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_cutfreq(s: &str) -> Result<u32, String> {
    match s.parse() {
        Ok(v @ (0 | 1 | 10)) => Ok(v),
        _ => Err("expected 0, 1 or 10".into()),
    }
}

impl Engine {
    fn settings(&self, rotsym: bool) -> Settings {
        Settings {
            heur: self.heur,
            pair: self.pair,
            rotsym,
            cutfreq: self.cutfreq,
            gap: self.gap,
            time_limit: self.time_limit,
            node_limit: self.node_limit.unwrap_or(u64::MAX),
            seed: self.seed,
            ..Settings::default()
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_enum, required_unless_present = "instance")]
    problem: Option<Problem>,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// JSON instance file instead of a generated problem.
    #[arg(long, conflicts_with = "problem")]
    instance: Option<PathBuf>,
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
    rotsym: u8,
    /// Named setting (`default`, `heur_0_pair_0`, ...) overriding --heur/--pair.
    #[arg(long)]
    setting: Option<String>,
    #[command(flatten)]
    engine: Engine,
    /// Also write the result as a one-row CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SuiteArgs {
    #[arg(long, value_enum)]
    problem: Option<Problem>,
    /// Point counts, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "2")]
    n: Vec<usize>,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// JSON instance files (repeatable), in addition to any generated problem.
    #[arg(long)]
    instance: Vec<PathBuf>,
    /// Setting names, comma separated; defaults to all five.
    #[arg(long, value_delimiter = ',')]
    settings: Vec<String>,
    /// Rotation-cut variants to run, e.g. `0,1`.
    #[arg(long, value_delimiter = ',', default_value = "0", value_parser = clap::value_parser!(u8).range(0..=1))]
    rotsym: Vec<u8>,
    #[command(flatten)]
    engine: Engine,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ProfileArgs {
    /// Results CSV written by `suite`.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "time")]
    metric: MetricArg,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long, value_enum)]
    problem: Problem,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.cmd {
        Command::Solve(a) => cmd_solve(a),
        Command::Suite(a) => cmd_suite(a),
        Command::Profile(a) => {
            let metric = match a.metric {
                MetricArg::Time => Metric::Time,
                MetricArg::Gap => Metric::Gap,
            };
            let p = profile_data(&a.input, metric, &a.out)?;
            println!(
                "{} instances, {} settings, {} points -> {}",
                p.instances.len(),
                p.settings.len(),
                p.points.len(),
                a.out.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Export(a) => {
            let inst = ProblemSpec::new(a.problem.into(), a.n, a.dim).build();
            save_instance(&inst, &a.out)?;
            println!("{} -> {}", inst.name, a.out.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn cmd_solve(a: SolveArgs) -> anyhow::Result<ExitCode> {
    let src = match (a.problem, a.instance) {
        (Some(p), None) => InstanceSource::Generated(ProblemSpec::new(p.into(), a.n, a.dim)),
        (None, Some(f)) => InstanceSource::File(f),
        _ => bail!("give either --problem or --instance"),
    };
    let base = a.engine.settings(a.rotsym == 1);
    let named = match &a.setting {
        Some(l) => NamedSetting::parse(l, &base)?,
        None => NamedSetting::from_settings(base),
    };
    if let Err(e) = named.settings.check() {
        bail!("{e}");
    }
    let inst = src.load()?;
    let r = solve(&inst, &named.settings);
    println!("instance   {}", src.name());
    println!("setting    {}", named.name);
    println!("status     {}", r.status);
    match r.incumbent_value {
        Some(v) => println!("primal     {v:.9}"),
        None => println!("primal     -"),
    }
    println!("dual       {:.9}", r.dual_bound);
    println!("gap        {:.3e}", r.gap);
    println!("nodes      {}", r.nodes);
    println!("time       {:.3}s", r.time);
    println!("cuts       {}", r.cuts_added);
    if let Some(x) = &r.incumbent_point {
        println!("point      {x:?}");
    }
    if let Some(out) = a.out {
        write_records(
            &[RunRecord::from_result(&src.name(), &named.name, &r)],
            &out,
        )?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_suite(a: SuiteArgs) -> anyhow::Result<ExitCode> {
    let mut instances: Vec<InstanceSource> = Vec::new();
    if let Some(p) = a.problem {
        for &n in &a.n {
            instances.push(InstanceSource::Generated(ProblemSpec::new(
                p.into(),
                n,
                a.dim,
            )));
        }
    }
    instances.extend(a.instance.into_iter().map(InstanceSource::File));
    if instances.is_empty() {
        bail!("no instances: give --problem and/or --instance");
    }
    let labels: Vec<&str> = if a.settings.is_empty() {
        STANDARD_SETTINGS.to_vec()
    } else {
        a.settings.iter().map(String::as_str).collect()
    };
    let rot: Vec<bool> = a.rotsym.iter().map(|&r| r == 1).collect();
    let grid = settings_grid(&labels, &rot, &a.engine.settings(false)).context("settings")?;
    let suite = SuiteSpec {
        instances,
        jobs: a.jobs.max(1),
    };
    let outcome = run_suite(&suite, &grid, &a.out)?;
    println!("{} runs -> {}", outcome.records.len(), a.out.display());
    for (status, k) in status_counts(&outcome.records) {
        println!("  {status:<11} {k}");
    }
    for (s, m) in time_summary(&outcome.records) {
        println!("  {s:<22} sgm time {m:.3}s");
    }
    if outcome.failures > 0 {
        eprintln!("{} runs failed", outcome.failures);
        return Ok(ExitCode::FAILURE);
    }
    Ok(ExitCode::SUCCESS)
}
