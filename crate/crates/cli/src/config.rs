use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::CliError;

/// Keys handled by the runner itself rather than by an experiment.
pub const RUNNER_KEYS: &[&str] = &["seed", "out", "jobs"];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub experiment: String,
    pub seed: u64,
    pub overrides: BTreeMap<String, String>,
    pub output_dir: PathBuf,
}

/// Parse flat `key = value` text. `#` starts a comment; blank lines are skipped.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("config line {}: expected `key = value`, got `{line}`", n + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(CliError::Config(format!("config line {}: empty key", n + 1)));
        }
        out.insert(k.to_string(), v.to_string());
    }
    Ok(out)
}

/// Split `--key=value` arguments that are not runner flags out of `args`.
///
/// Returns the remaining arguments (for clap) and the overrides in order.
pub fn split_overrides(args: impl IntoIterator<Item = String>) -> (Vec<String>, Vec<(String, String)>) {
    let mut rest = Vec::new();
    let mut overrides = Vec::new();
    for arg in args {
        let kv = arg.strip_prefix("--").and_then(|s| s.split_once('='));
        match kv {
            Some((k, v)) if !k.is_empty() && !RUNNER_KEYS.contains(&k) && k != "config" => {
                overrides.push((k.to_string(), v.to_string()))
            }
            _ => rest.push(arg),
        }
    }
    (rest, overrides)
}

/// Parse `--seed` values: a single integer, a comma list or an inclusive range `a..b`.
pub fn parse_seeds(s: &str) -> Result<Vec<u64>, CliError> {
    let bad = || CliError::Config(format!("invalid seed list `{s}`"));
    let mut seeds = Vec::new();
    for part in s.split(',').map(str::trim) {
        if let Some((a, b)) = part.split_once("..") {
            let (a, b): (u64, u64) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
            if a > b {
                return Err(bad());
            }
            seeds.extend(a..=b);
        } else {
            seeds.push(part.parse().map_err(|_| bad())?);
        }
    }
    Ok(seeds)
}

/// Resolved experiment parameters: defaults overlaid with validated overrides.
#[derive(Debug, Clone)]
pub struct Params {
    experiment: &'static str,
    values: BTreeMap<&'static str, String>,
}

impl Params {
    pub fn resolve(
        experiment: &'static str,
        defaults: &[(&'static str, &'static str)],
        overrides: &BTreeMap<String, String>,
    ) -> Result<Self, CliError> {
        let mut values: BTreeMap<&'static str, String> = defaults.iter().map(|(k, v)| (*k, v.to_string())).collect();
        for (k, v) in overrides {
            match defaults.iter().find(|(d, _)| d == k) {
                Some((key, _)) => {
                    values.insert(key, v.clone());
                }
                None => {
                    let mut valid: Vec<&str> = defaults.iter().map(|(k, _)| *k).collect();
                    valid.extend(RUNNER_KEYS);
                    return Err(CliError::Config(format!(
                        "unknown key `{k}` for experiment {experiment}; valid keys: {}",
                        valid.join(", ")
                    )));
                }
            }
        }
        Ok(Params { experiment, values })
    }

    fn raw(&self, key: &str) -> &str {
        self.values.get(key).unwrap_or_else(|| panic!("{} has no parameter `{key}`", self.experiment))
    }

    fn invalid(&self, key: &str, what: &str) -> CliError {
        CliError::Config(format!("{}: `{key} = {}` is not {what}", self.experiment, self.raw(key)))
    }

    pub fn f64(&self, key: &str) -> Result<f64, CliError> {
        self.raw(key).parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| self.invalid(key, "a finite number"))
    }

    pub fn usize(&self, key: &str) -> Result<usize, CliError> {
        self.raw(key).parse().map_err(|_| self.invalid(key, "a non-negative integer"))
    }

    pub fn u64(&self, key: &str) -> Result<u64, CliError> {
        self.raw(key).parse().map_err(|_| self.invalid(key, "a non-negative integer"))
    }

    pub fn f64_list(&self, key: &str) -> Result<Vec<f64>, CliError> {
        let list: Option<Vec<f64>> =
            self.raw(key).split(',').map(|s| s.trim().parse::<f64>().ok().filter(|v| v.is_finite())).collect();
        list.filter(|l| !l.is_empty()).ok_or_else(|| self.invalid(key, "a comma-separated list of numbers"))
    }
}
