//! Experiment driver: run a grid of settings over a set of instances, write
//! one CSV row per run and turn the rows into performance-profile curves.

use std::collections::BTreeMap;
use std::fs::File;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use mindc_core::engine::{solve, Settings, SolveResult, SolveStatus, STANDARD_SETTINGS};
use mindc_core::instances::{load_instance, ProblemSpec};
use mindc_core::Instance;

/// Status written for runs that could not be carried out.
pub const ERROR_STATUS: &str = "Error";

/// Times below this are treated as equal when forming ratios.
pub const TIME_FLOOR: f64 = 1e-3;
/// Gaps below this are treated as equal when forming ratios.
pub const GAP_FLOOR: f64 = 1e-9;

/// One line of the results table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    #[serde(rename = "instance")]
    pub instance_name: String,
    #[serde(rename = "setting")]
    pub setting_name: String,
    pub status: String,
    pub primal: Option<f64>,
    pub dual: Option<f64>,
    pub gap: f64,
    pub nodes: u64,
    pub time_s: f64,
    pub cuts: u64,
    pub red_prop1: u64,
    pub red_locatelli: u64,
    pub red_pair_geo: u64,
    pub red_pair_bisect: u64,
}

impl RunRecord {
    pub fn from_result(instance: &str, setting: &str, r: &SolveResult) -> Self {
        let red = &r.reductions_by_algorithm;
        RunRecord {
            instance_name: instance.to_string(),
            setting_name: setting.to_string(),
            status: r.status.to_string(),
            primal: r.incumbent_value,
            dual: Some(r.dual_bound),
            gap: r.gap,
            nodes: r.nodes,
            time_s: r.time,
            cuts: r.cuts_added,
            red_prop1: red.prop1,
            red_locatelli: red.locatelli,
            red_pair_geo: red.pair_geo,
            red_pair_bisect: red.pair_bisect,
        }
    }

    pub fn failed(instance: &str, setting: &str) -> Self {
        RunRecord {
            instance_name: instance.to_string(),
            setting_name: setting.to_string(),
            status: ERROR_STATUS.to_string(),
            primal: None,
            dual: None,
            gap: f64::INFINITY,
            nodes: 0,
            time_s: 0.0,
            cuts: 0,
            red_prop1: 0,
            red_locatelli: 0,
            red_pair_geo: 0,
            red_pair_bisect: 0,
        }
    }

    /// Terminated with the requested gap (or proven optimal/infeasible).
    pub fn solved(&self) -> bool {
        ["Optimal", "GapReached", "Infeasible"].contains(&self.status.as_str())
    }
}

/// Where an instance comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum InstanceSource {
    Generated(ProblemSpec),
    File(PathBuf),
}

impl InstanceSource {
    /// Name used in the `instance` column; available even if loading fails.
    pub fn name(&self) -> String {
        match self {
            InstanceSource::Generated(spec) => spec.name(),
            InstanceSource::File(p) => p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| p.display().to_string()),
        }
    }

    pub fn load(&self) -> anyhow::Result<Instance> {
        match self {
            InstanceSource::Generated(spec) => Ok(spec.build()),
            InstanceSource::File(p) => {
                load_instance(p).with_context(|| format!("loading {}", p.display()))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteSpec {
    pub instances: Vec<InstanceSource>,
    /// Instances solved concurrently; 1 runs everything in order.
    pub jobs: usize,
}

/// A setting together with the name it is reported under.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedSetting {
    pub name: String,
    pub settings: Settings,
}

impl NamedSetting {
    /// Parses `default` or `heur_H_pair_P` on top of `base`. Runs with
    /// rotation cuts get the suffix `_rotsym`.
    pub fn parse(label: &str, base: &Settings) -> anyhow::Result<Self> {
        let Some(settings) = Settings::from_label(label, base) else {
            bail!(
                "unknown setting '{label}' (expected one of {})",
                STANDARD_SETTINGS.join(", ")
            );
        };
        Ok(NamedSetting::from_settings(settings))
    }

    pub fn from_settings(settings: Settings) -> Self {
        let mut name = settings.label();
        if settings.rotsym {
            name.push_str("_rotsym");
        }
        NamedSetting { name, settings }
    }
}

/// `labels × rotsym` on top of `base`, labels outermost.
pub fn settings_grid(
    labels: &[&str],
    rotsym: &[bool],
    base: &Settings,
) -> anyhow::Result<Vec<NamedSetting>> {
    let mut out = Vec::new();
    for &l in labels {
        for &r in rotsym {
            let b = Settings {
                rotsym: r,
                ..base.clone()
            };
            out.push(NamedSetting::parse(l, &b)?);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOutcome {
    pub records: Vec<RunRecord>,
    pub failures: usize,
}

fn run_one(name: &str, instance: &Instance, s: &NamedSetting) -> RunRecord {
    if let Err(e) = s.settings.check() {
        log::error!("{name} / {}: {e}", s.name);
        return RunRecord::failed(name, &s.name);
    }
    match catch_unwind(AssertUnwindSafe(|| solve(instance, &s.settings))) {
        Ok(r) => {
            log::info!(
                "{name} / {}: {} primal={:?} dual={:.6} nodes={} {:.2}s",
                s.name,
                r.status,
                r.incumbent_value,
                r.dual_bound,
                r.nodes,
                r.time
            );
            RunRecord::from_result(name, &s.name, &r)
        }
        Err(_) => {
            log::error!("{name} / {}: solver panicked", s.name);
            RunRecord::failed(name, &s.name)
        }
    }
}

fn run_instance(src: &InstanceSource, settings: &[NamedSetting]) -> Vec<RunRecord> {
    let name = src.name();
    match src.load() {
        Ok(inst) => settings.iter().map(|s| run_one(&name, &inst, s)).collect(),
        Err(e) => {
            log::error!("{name}: {e:#}");
            settings
                .iter()
                .map(|s| RunRecord::failed(&name, &s.name))
                .collect()
        }
    }
}

/// Runs every `(instance, setting)` pair and writes the records to `out` in
/// instance-major order. Failed runs are recorded with status `Error`.
pub fn run_suite(
    suite: &SuiteSpec,
    settings: &[NamedSetting],
    out: &Path,
) -> anyhow::Result<SuiteOutcome> {
    let per_instance: Vec<Vec<RunRecord>> = if suite.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(suite.jobs)
            .build()
            .context("building thread pool")?;
        pool.install(|| {
            suite
                .instances
                .par_iter()
                .map(|src| run_instance(src, settings))
                .collect()
        })
    } else {
        suite
            .instances
            .iter()
            .map(|src| run_instance(src, settings))
            .collect()
    };
    let records: Vec<RunRecord> = per_instance.into_iter().flatten().collect();
    write_records(&records, out)?;
    let failures = records.iter().filter(|r| r.status == ERROR_STATUS).count();
    Ok(SuiteOutcome { records, failures })
}

pub fn write_records(records: &[RunRecord], out: &Path) -> anyhow::Result<()> {
    let mut w =
        csv::Writer::from_path(out).with_context(|| format!("creating {}", out.display()))?;
    if records.is_empty() {
        w.write_record(RECORD_HEADER)?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub const RECORD_HEADER: [&str; 13] = [
    "instance",
    "setting",
    "status",
    "primal",
    "dual",
    "gap",
    "nodes",
    "time_s",
    "cuts",
    "red_prop1",
    "red_locatelli",
    "red_pair_geo",
    "red_pair_bisect",
];

pub fn read_records(path: &Path) -> anyhow::Result<Vec<RunRecord>> {
    let mut r =
        csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let mut out = Vec::new();
    for (i, row) in r.deserialize().enumerate() {
        out.push(row.with_context(|| format!("{}: row {}", path.display(), i + 1))?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Time,
    Gap,
}

/// One point of a step curve: the fraction of instances whose ratio to the
/// best setting is at most `ratio`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub setting: String,
    pub ratio: f64,
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    /// Instances the curves are computed over.
    pub instances: Vec<String>,
    /// Settings in order of first appearance in the input.
    pub settings: Vec<String>,
    pub points: Vec<ProfilePoint>,
}

impl Profile {
    pub fn curve(&self, setting: &str) -> Vec<(f64, f64)> {
        self.points
            .iter()
            .filter(|p| p.setting == setting)
            .map(|p| (p.ratio, p.fraction))
            .collect()
    }
}

fn metric_value(r: &RunRecord, metric: Metric) -> f64 {
    match metric {
        Metric::Time if r.solved() => r.time_s.max(TIME_FLOOR),
        Metric::Time => f64::INFINITY,
        Metric::Gap if r.status == ERROR_STATUS => f64::INFINITY,
        Metric::Gap => r.gap.max(GAP_FLOOR),
    }
}

/// Dolan–Moré curves. The time profile uses the instances solved by at least
/// one setting, the gap profile those solved by none. Unsolved runs (time) or
/// runs without a primal value (gap) never reach a finite ratio.
pub fn compute_profile(records: &[RunRecord], metric: Metric) -> Profile {
    let mut settings: Vec<String> = Vec::new();
    let mut by_instance: BTreeMap<&str, BTreeMap<&str, &RunRecord>> = BTreeMap::new();
    for r in records {
        if !settings.contains(&r.setting_name) {
            settings.push(r.setting_name.clone());
        }
        by_instance
            .entry(&r.instance_name)
            .or_default()
            .insert(&r.setting_name, r);
    }
    let keep = |runs: &BTreeMap<&str, &RunRecord>| {
        let any_solved = runs.values().any(|r| r.solved());
        match metric {
            Metric::Time => any_solved,
            Metric::Gap => !any_solved,
        }
    };
    let instances: Vec<&str> = by_instance
        .iter()
        .filter(|(_, runs)| keep(runs))
        .map(|(&k, _)| k)
        .collect();

    let mut ratios: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for &inst in &instances {
        let runs = &by_instance[inst];
        let value = |s: &str| {
            runs.get(s)
                .map_or(f64::INFINITY, |r| metric_value(r, metric))
        };
        let best = settings
            .iter()
            .map(|s| value(s))
            .fold(f64::INFINITY, f64::min);
        for s in &settings {
            let v = value(s);
            let ratio = if v.is_finite() {
                v / best
            } else if best.is_infinite() && runs.contains_key(s.as_str()) {
                1.0
            } else {
                f64::INFINITY
            };
            ratios.entry(s).or_default().push(ratio);
        }
    }

    let mut points = Vec::new();
    let total = instances.len() as f64;
    if !instances.is_empty() {
        for s in &settings {
            let mut rs: Vec<f64> = ratios[s.as_str()]
                .iter()
                .copied()
                .filter(|r| r.is_finite())
                .collect();
            rs.sort_by(f64::total_cmp);
            let mut taus = vec![1.0];
            taus.extend(rs.iter().copied().filter(|&r| r > 1.0));
            taus.dedup();
            for tau in taus {
                let hit = rs.iter().filter(|&&r| r <= tau).count() as f64;
                points.push(ProfilePoint {
                    setting: s.clone(),
                    ratio: tau,
                    fraction: hit / total,
                });
            }
        }
    }
    Profile {
        instances: instances.into_iter().map(String::from).collect(),
        settings,
        points,
    }
}

/// Reads a results CSV and writes the profile curves as
/// `setting,ratio,fraction` rows. An empty instance set yields a header-only
/// file and a warning.
pub fn profile_data(csv_path: &Path, metric: Metric, out: &Path) -> anyhow::Result<Profile> {
    let records = read_records(csv_path)?;
    let profile = compute_profile(&records, metric);
    if profile.instances.is_empty() {
        log::warn!("no instances qualify for the {metric:?} profile; writing an empty table");
    }
    let file = File::create(out).with_context(|| format!("creating {}", out.display()))?;
    let mut w = csv::Writer::from_writer(file);
    if profile.points.is_empty() {
        w.write_record(["setting", "ratio", "fraction"])?;
    }
    for p in &profile.points {
        w.serialize(p)?;
    }
    w.flush()?;
    Ok(profile)
}

/// `exp(mean(ln(v + shift))) − shift`.
pub fn shifted_geometric_mean(values: &[f64], shift: f64) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let s: f64 = values.iter().map(|v| (v + shift).ln()).sum();
    (s / values.len() as f64).exp() - shift
}

/// Per setting: shifted geometric mean of `time_s` (shift 1 s) over all runs,
/// with unsolved runs counted at their recorded time.
pub fn time_summary(records: &[RunRecord]) -> Vec<(String, f64)> {
    let mut order: Vec<String> = Vec::new();
    let mut times: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for r in records {
        if !order.contains(&r.setting_name) {
            order.push(r.setting_name.clone());
        }
        times
            .entry(r.setting_name.clone())
            .or_default()
            .push(r.time_s);
    }
    order
        .into_iter()
        .map(|s| {
            let m = shifted_geometric_mean(&times[&s], 1.0);
            (s, m)
        })
        .collect()
}

/// Status counts, used by the command line summary.
pub fn status_counts(records: &[RunRecord]) -> BTreeMap<String, usize> {
    let mut m = BTreeMap::new();
    for r in records {
        *m.entry(r.status.clone()).or_insert(0) += 1;
    }
    m
}

/// Checks a status string against the solver's vocabulary.
pub fn is_known_status(s: &str) -> bool {
    s == ERROR_STATUS
        || [
            SolveStatus::Optimal,
            SolveStatus::GapReached,
            SolveStatus::TimeLimit,
            SolveStatus::NodeLimit,
            SolveStatus::Infeasible,
        ]
        .iter()
        .any(|st| st.to_string() == s)
}
