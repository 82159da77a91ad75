//! Batch runner for the named experiments: parses a flat config, runs each
//! seed, and writes one CSV per run plus rows of `summary.csv`.

pub mod config;
pub mod experiments;
pub mod output;

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

pub use config::{parse_config_text, parse_seeds, split_overrides, Params, RunConfig};
pub use experiments::{find, Experiment, REGISTRY};
pub use output::{Cell, SummaryRow, Table};

/// Default output directory when neither `--out` nor the config sets one.
pub const OUT_ENV: &str = "SMOOTHCONVEX_OUT";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Numeric(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) | CliError::Csv(_) => 1,
        }
    }
}

impl From<smoothconvex_core::Error> for CliError {
    fn from(e: smoothconvex_core::Error) -> Self {
        match e {
            smoothconvex_core::Error::Numeric(_) => CliError::Numeric(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

pub fn registry_listing() -> String {
    REGISTRY.iter().map(|e| e.name).collect::<Vec<_>>().join(", ")
}

/// Run one experiment for one seed and write `<experiment>_<seed>.csv`.
pub fn run(config: &RunConfig) -> Result<SummaryRow, CliError> {
    let exp = find(&config.experiment).ok_or_else(|| {
        CliError::Config(format!("unknown experiment `{}`; available: {}", config.experiment, registry_listing()))
    })?;
    let params = Params::resolve(exp.name, exp.params, &config.overrides)?;
    let start = Instant::now();
    let table = (exp.run)(&params, config.seed)?;
    table.check_finite(exp.name)?;
    std::fs::create_dir_all(&config.output_dir)?;
    output::write_table(&config.output_dir.join(format!("{}_{}.csv", exp.name, config.seed)), &table)?;
    let runtime_ms = start.elapsed().as_millis();
    log::info!("{} seed {}: final metric {} in {runtime_ms} ms", exp.name, config.seed, table.final_metric);
    Ok(SummaryRow {
        experiment: exp.name.to_string(),
        seed: config.seed,
        final_metric: table.final_metric,
        slope: table.slope,
        runtime_ms,
    })
}

/// Run every seed (on `jobs` threads) and append the summaries in seed order.
pub fn run_seeds(base: &RunConfig, seeds: &[u64], jobs: usize) -> Result<Vec<SummaryRow>, CliError> {
    let one = |seed: u64| run(&RunConfig { seed, ..base.clone() });
    let results: Vec<Result<SummaryRow, CliError>> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| CliError::Config(format!("cannot start {jobs} jobs: {e}")))?;
        pool.install(|| seeds.par_iter().map(|&s| one(s)).collect())
    } else {
        seeds.iter().map(|&s| one(s)).collect()
    };
    let rows = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    output::append_summary(&base.output_dir.join("summary.csv"), &rows)?;
    Ok(rows)
}

/// Settings gathered from the command line before merging with a config file.
#[derive(Debug, Clone, Default)]
pub struct Invocation {
    pub experiment: String,
    pub seed: Option<String>,
    pub config: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub overrides: Vec<(String, String)>,
}

/// Merge config file, environment and flags (flags win), then run.
pub fn execute(inv: &Invocation) -> Result<Vec<SummaryRow>, CliError> {
    let mut file = match &inv.config {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", p.display())))?;
            parse_config_text(&text)?
        }
        None => Default::default(),
    };
    let file_seed = file.remove("seed");
    let file_out = file.remove("out").map(PathBuf::from);
    let file_jobs = file.remove("jobs");
    let mut overrides = file;
    overrides.extend(inv.overrides.iter().cloned());

    let seeds = parse_seeds(inv.seed.as_deref().or(file_seed.as_deref()).unwrap_or("0"))?;
    let jobs = match (inv.jobs, file_jobs) {
        (Some(j), _) => j,
        (None, Some(j)) => j.parse().map_err(|_| CliError::Config(format!("invalid jobs `{j}`")))?,
        (None, None) => 1,
    };
    let output_dir = inv
        .out
        .clone()
        .or(file_out)
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| Path::new("results").to_path_buf());
    let base = RunConfig { experiment: inv.experiment.clone(), seed: seeds[0], overrides, output_dir };
    run_seeds(&base, &seeds, jobs.max(1))
}
