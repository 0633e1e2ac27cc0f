//! File formats and command-line driver for `nmteleport-core`.

pub mod config;
pub mod emit;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use nmteleport_core::scenarios::{run_scenario, sweep_points, LabeledSeries};
use rayon::prelude::*;
use thiserror::Error;

use crate::config::{ConfigError, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("invalid run: {0}")]
    Model(#[from] nmteleport_core::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) | RunError::Model(_) => EXIT_CONFIG,
            RunError::Io { .. } => EXIT_IO,
        }
    }
}

/// Computes every series a configuration asks for. Sweep members run in
/// parallel; the result order follows `sweep_values`.
pub fn compute(cfg: &RunConfig) -> Result<Vec<LabeledSeries>, nmteleport_core::Error> {
    let base = cfg.protocol_params()?;
    match (cfg.sweep_axis, &cfg.sweep_values) {
        (Some(axis), Some(values)) => sweep_points(&base, axis, values)?
            .into_par_iter()
            .map(|(label, params)| {
                Ok(LabeledSeries {
                    label,
                    records: run_scenario(&params)?,
                })
            })
            .collect(),
        _ => Ok(vec![LabeledSeries {
            label: cfg.scenario.to_string(),
            records: run_scenario(&base)?,
        }]),
    }
}

pub fn emit(series: &[LabeledSeries], cfg: &RunConfig) -> Result<(), RunError> {
    let io_err = |path: &Option<PathBuf>| {
        let name = path
            .as_ref()
            .map_or_else(|| "<stdout>".to_string(), |p| p.display().to_string());
        move |source| RunError::Io { path: name, source }
    };
    match &cfg.output_path {
        Some(path) => {
            let file = File::create(path).map_err(io_err(&cfg.output_path))?;
            let mut w = BufWriter::new(file);
            emit::write(&mut w, series, cfg.format)
                .and_then(|_| w.flush())
                .map_err(io_err(&cfg.output_path))
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            emit::write(&mut w, series, cfg.format)
                .and_then(|_| w.flush())
                .map_err(io_err(&None))
        }
    }
}

pub fn run(cfg: &RunConfig) -> Result<(), RunError> {
    let series = compute(cfg)?;
    emit(&series, cfg)
}
