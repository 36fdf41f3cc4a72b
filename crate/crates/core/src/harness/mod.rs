//! Seeded verification suites and their JSON-lines reports.

pub mod gen;
pub mod oracles;
mod suites;

use std::time::Instant;

use rand::SeedableRng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use gen::Rng8;

pub use suites::{suite, Suite, SUITES};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct Config {
    pub moduli: Vec<u64>,
    pub max_vertices: usize,
    pub max_arrows: usize,
    /// Cap on the cardinality of each vertex module.
    pub max_cardinality: u128,
    pub trials: usize,
    pub seed: u64,
    pub suites: Vec<String>,
    /// Record wall-clock durations; off by default so reports are reproducible.
    pub timing: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            moduli: vec![2, 3, 4, 8, 9],
            max_vertices: 6,
            max_arrows: 8,
            max_cardinality: 4096,
            trials: 200,
            seed: 0,
            suites: vec!["all".into()],
            timing: false,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        if self.moduli.is_empty() {
            return Err(Error::input("moduli", "must not be empty"));
        }
        for &m in &self.moduli {
            crate::zn::Modulus::new(m).map_err(|e| Error::input("moduli", e.to_string()))?;
        }
        if self.max_vertices == 0 || self.max_cardinality < 2 {
            return Err(Error::input("caps", "caps must be positive"));
        }
        for s in &self.suites {
            if s != "all" && suite(s).is_none() {
                return Err(Error::input("suites", format!("unknown suite `{s}`")));
            }
        }
        Ok(())
    }

    /// Suites selected by name, in registry order.
    pub fn selected(&self) -> Vec<&'static Suite> {
        if self.suites.iter().any(|s| s == "all") {
            return SUITES.iter().collect();
        }
        SUITES.iter().filter(|s| self.suites.iter().any(|n| n == s.name)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub suite: String,
    pub trial: usize,
    pub seed: u64,
    pub instance: String,
    pub verdicts: serde_json::Value,
    pub pass: bool,
    pub ms: u64,
}

impl TrialReport {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

/// What one trial produced.
pub struct Outcome {
    pub instance: String,
    pub verdicts: serde_json::Value,
    pub pass: bool,
}

/// Per-trial seed: the first eight bytes of SHA-256 over the master seed, suite id and index.
pub fn derive_seed(master: u64, suite: &str, trial: usize) -> u64 {
    let mut h = Sha256::new();
    h.update(master.to_le_bytes());
    h.update(suite.as_bytes());
    h.update((trial as u64).to_le_bytes());
    let d = h.finalize();
    u64::from_le_bytes(d[..8].try_into().expect("eight bytes"))
}

fn run_one(cfg: &Config, trial: usize, name: &str, f: suites::TrialFn) -> TrialReport {
    let seed = derive_seed(cfg.seed, name, trial);
    let mut rng = Rng8::seed_from_u64(seed);
    let start = Instant::now();
    let out = f(&mut rng, cfg, trial);
    let ms = if cfg.timing { start.elapsed().as_millis() as u64 } else { 0 };
    match out {
        Ok(o) => TrialReport {
            suite: name.into(),
            trial,
            seed,
            instance: o.instance,
            verdicts: o.verdicts,
            pass: o.pass,
            ms,
        },
        Err(e) => TrialReport {
            suite: name.into(),
            trial,
            seed,
            instance: String::new(),
            verdicts: serde_json::json!({ "error": e.to_string() }),
            pass: false,
            ms,
        },
    }
}

/// Runs one trial of a suite; replays exactly what a full run reports for that index.
pub fn replay(s: &Suite, cfg: &Config, trial: usize) -> TrialReport {
    run_one(cfg, trial, s.name, s.trial)
}

/// Runs a suite's trials in parallel and returns them in index order.
pub fn run_suite(s: &Suite, cfg: &Config, trials: usize) -> Vec<TrialReport> {
    let n = s.fixed_trials.unwrap_or(trials);
    (0..n).into_par_iter().map(|i| run_one(cfg, i, s.name, s.trial)).collect()
}

/// Runs the negative controls of a suite and summarises them in one record:
/// it passes when at least one corrupted instance was caught.
pub fn run_controls(s: &Suite, cfg: &Config, trials: usize) -> Option<TrialReport> {
    let name = format!("{}:control", s.name);
    let runs = run_control_records(s, cfg, trials);
    s.control?;
    let detected = runs.iter().filter(|r| r.pass).count();
    Some(TrialReport {
        suite: name.clone(),
        trial: 0,
        seed: derive_seed(cfg.seed, &name, 0),
        instance: String::new(),
        verdicts: serde_json::json!({ "controls": trials, "detected": detected }),
        pass: detected > 0,
        ms: if cfg.timing { runs.iter().map(|r| r.ms).sum() } else { 0 },
    })
}

/// The individual negative-control records of a suite.
pub fn run_control_records(s: &Suite, cfg: &Config, trials: usize) -> Vec<TrialReport> {
    let Some(control) = s.control else {
        return Vec::new();
    };
    let name = format!("{}:control", s.name);
    (0..trials).into_par_iter().map(|i| run_one(cfg, i, &name, control)).collect()
}

/// Number of negative-control instances per suite.
pub const CONTROL_TRIALS: usize = 20;

/// Every selected suite followed by its control summary.
pub fn run(cfg: &Config) -> Result<Vec<TrialReport>> {
    cfg.validate()?;
    let mut out = Vec::new();
    for s in cfg.selected() {
        out.extend(run_suite(s, cfg, cfg.trials));
        out.extend(run_controls(s, cfg, CONTROL_TRIALS.min(cfg.trials.max(1))));
    }
    Ok(out)
}
