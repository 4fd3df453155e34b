//! Scenario runners. Each returns a typed result for programmatic use and a
//! [`Report`] for the output files.

use crate::config::{ConfigErrors, ScenarioConfig, ScenarioKind};
use crate::output::Report;

pub mod array;
pub mod comb;
pub mod custom;
pub mod gain;
pub mod sweep;
pub mod swap;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Config(#[from] ConfigErrors),
    #[error("{0}")]
    Core(#[from] contomech_core::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Failed(String),
}

pub fn run(cfg: &ScenarioConfig) -> Result<Report, RunError> {
    log::info!("running scenario {}", cfg.scenario.name());
    match cfg.scenario {
        ScenarioKind::Custom => custom::run(cfg).map(|r| r.report),
        ScenarioKind::Comb => comb::run(&cfg.comb).map(|r| r.report()),
        ScenarioKind::BackwardGain => gain::run(&cfg.gain).map(|r| r.report()),
        ScenarioKind::IntermodalSwap => swap::run(&cfg.swap).map(|r| r.report()),
        ScenarioKind::ArrayConvergence => array::run(&cfg.array).map(|r| r.report()),
        ScenarioKind::RegimeSweep => sweep::run(&cfg.sweep).map(|r| r.report()),
    }
}

/// Least-squares line through `(x, y)`: `(slope, intercept)`.
pub fn fit_line(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}
