use std::fmt;
use std::ops::AddAssign;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    /// `false` replaces every distance-constraint reduction by plain interval
    /// bound tightening of the quadratic expression (the `default` setting).
    pub reductions: bool,
    /// 0: facet shrinking plus interval propagation; 1: interval propagation
    /// only. With `pair = 1` it also picks the pair method: 0 geometric,
    /// 1 bisection.
    pub heur: u8,
    /// 1 enables reductions from pairs of constraints sharing a point.
    pub pair: u8,
    /// Separate rotation cuts on instances with rotational symmetry.
    pub rotsym: bool,
    /// Separate simplex cuts at every `cutfreq`-th depth; 0 disables them.
    pub cutfreq: u32,
    pub lex_rows: bool,
    pub lex_cols: bool,
    pub gap: f64,
    pub time_limit: f64,
    pub node_limit: u64,
    pub seed: u64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            reductions: true,
            heur: 0,
            pair: 0,
            rotsym: false,
            cutfreq: 0,
            lex_rows: true,
            lex_cols: false,
            gap: 0.005,
            time_limit: 7200.0,
            node_limit: u64::MAX,
            seed: 0,
        }
    }
}

impl Settings {
    pub fn with_heur_pair(heur: u8, pair: u8) -> Self {
        Settings {
            heur,
            pair,
            ..Settings::default()
        }
    }

    /// Interval tightening only; no technique specific to distance constraints.
    pub fn plain() -> Self {
        Settings {
            reductions: false,
            ..Settings::default()
        }
    }

    /// Setting label used in result tables: `default` or `heur_H_pair_P`.
    pub fn label(&self) -> String {
        if self.reductions {
            format!("heur_{}_pair_{}", self.heur, self.pair)
        } else {
            "default".to_string()
        }
    }

    /// Inverse of [`Settings::label`] on top of `base`.
    pub fn from_label(label: &str, base: &Settings) -> Option<Self> {
        if label == "default" {
            return Some(Settings {
                reductions: false,
                ..base.clone()
            });
        }
        let rest = label.strip_prefix("heur_")?;
        let (h, p) = rest.split_once("_pair_")?;
        let heur: u8 = h.parse().ok()?;
        let pair: u8 = p.parse().ok()?;
        (heur <= 1 && pair <= 1).then(|| Settings {
            reductions: true,
            heur,
            pair,
            ..base.clone()
        })
    }

    pub fn check(&self) -> Result<(), String> {
        if self.heur > 1 || self.pair > 1 {
            return Err("heur and pair must be 0 or 1".into());
        }
        if ![0, 1, 10].contains(&self.cutfreq) {
            return Err("cutfreq must be 0, 1 or 10".into());
        }
        if !(self.gap > 0.0) {
            return Err("gap must be positive".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SolveStatus {
    Optimal,
    GapReached,
    TimeLimit,
    NodeLimit,
    Infeasible,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SolveStatus::Optimal => "Optimal",
            SolveStatus::GapReached => "GapReached",
            SolveStatus::TimeLimit => "TimeLimit",
            SolveStatus::NodeLimit => "NodeLimit",
            SolveStatus::Infeasible => "Infeasible",
        };
        f.write_str(s)
    }
}

/// Number of bound changes (or cuts) contributed by each technique.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counters {
    pub fbbt: u64,
    pub prop1: u64,
    pub locatelli: u64,
    pub pair_geo: u64,
    pub pair_bisect: u64,
    pub lex: u64,
    pub norm: u64,
    pub linear: u64,
    pub simplex_cuts: u64,
    pub rotation_cuts: u64,
}

impl AddAssign for Counters {
    fn add_assign(&mut self, o: Self) {
        self.fbbt += o.fbbt;
        self.prop1 += o.prop1;
        self.locatelli += o.locatelli;
        self.pair_geo += o.pair_geo;
        self.pair_bisect += o.pair_bisect;
        self.lex += o.lex;
        self.norm += o.norm;
        self.linear += o.linear;
        self.simplex_cuts += o.simplex_cuts;
        self.rotation_cuts += o.rotation_cuts;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub incumbent_value: Option<f64>,
    pub incumbent_point: Option<Vec<f64>>,
    pub dual_bound: f64,
    pub gap: f64,
    pub nodes: u64,
    pub time: f64,
    pub cuts_added: u64,
    pub reductions_by_algorithm: Counters,
}

/// The five standard settings, from no distance-specific reductions upward.
pub const STANDARD_SETTINGS: [&str; 5] = [
    "default",
    "heur_0_pair_0",
    "heur_1_pair_0",
    "heur_0_pair_1",
    "heur_1_pair_1",
];

/// `(dual − primal) / max(|primal|, 1e-9)`; infinite without a primal value.
pub fn relative_gap(dual: f64, primal: Option<f64>) -> f64 {
    match primal {
        Some(p) => ((dual - p) / p.abs().max(1e-9)).max(0.0),
        None => f64::INFINITY,
    }
}
