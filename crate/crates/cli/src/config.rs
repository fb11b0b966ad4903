//! Effective run configuration: built-in defaults, then the config file, then flags.
//!
//! The config file is flat TOML whose keys are the long flag names, e.g.
//!
//! ```toml
//! delta = 0.02
//! gamma = "0:10:11"
//! seed = 42
//! net-rates = true
//! ```

use std::path::Path;

use anyhow::{anyhow, bail, Context};
use serde::Serialize;

use lucas_ez::sweep::Axis;

/// Output rendering. `json` is one object per record (JSON lines for tables).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Format> {
        match s {
            "text" => Ok(Format::Text),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => bail!("unknown format `{other}` (expected text, csv or json)"),
        }
    }
}

pub const DEFAULT_DELTA: &str = "0.02";
pub const DEFAULT_GAMMA: &str = "10";
pub const DEFAULT_PSI: &str = "1.5";
pub const DEFAULT_MU: &str = "0.018";
pub const DEFAULT_SIGMA: &str = "0.036";
pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_DRAWS: usize = lucas_ez::euler::DEFAULT_DRAWS;
pub const DEFAULT_PERIODS: usize = 10_000;
pub const DEFAULT_GAMMA_FROM: f64 = 2.0;
pub const DEFAULT_GAMMA_TO: f64 = 10.0;
pub const DEFAULT_Q0: f64 = 1.0;
pub const DEFAULT_MANIFEST: &str = "run_manifest.json";

/// Economy parameters are kept as the text supplied so sweep axes
/// (`lo:hi:n`, lists) and single values share one representation.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct RunConfig {
    pub delta: String,
    pub gamma: String,
    pub psi: String,
    pub mu: String,
    pub sigma: String,
    pub seed: u64,
    pub draws: usize,
    pub periods: usize,
    pub format: Format,
    pub output: Option<String>,
    pub manifest: String,
    pub net_rates: bool,
    pub threads: Option<usize>,
    pub antithetic: bool,
    pub gamma_from: f64,
    pub gamma_to: f64,
    pub q0: f64,
    pub path_csv: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            delta: DEFAULT_DELTA.into(),
            gamma: DEFAULT_GAMMA.into(),
            psi: DEFAULT_PSI.into(),
            mu: DEFAULT_MU.into(),
            sigma: DEFAULT_SIGMA.into(),
            seed: DEFAULT_SEED,
            draws: DEFAULT_DRAWS,
            periods: DEFAULT_PERIODS,
            format: Format::Text,
            output: None,
            manifest: DEFAULT_MANIFEST.into(),
            net_rates: false,
            threads: None,
            antithetic: false,
            gamma_from: DEFAULT_GAMMA_FROM,
            gamma_to: DEFAULT_GAMMA_TO,
            q0: DEFAULT_Q0,
            path_csv: None,
        }
    }
}

/// Economy parameters as single values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    pub delta: f64,
    pub gamma: f64,
    pub psi: f64,
    pub mu: f64,
    pub sigma: f64,
}

fn single(name: &str, text: &str) -> anyhow::Result<f64> {
    let axis: Axis = text.parse().with_context(|| format!("--{name}"))?;
    match axis.points()?.as_slice() {
        [v] => Ok(*v),
        _ => bail!("InvalidRange: --{name} takes a single value here, got `{text}`"),
    }
}

fn axis(name: &str, text: &str) -> anyhow::Result<Axis> {
    let axis: Axis = text.parse().with_context(|| format!("--{name}"))?;
    axis.points().with_context(|| format!("--{name}"))?;
    Ok(axis)
}

impl RunConfig {
    pub fn params(&self) -> anyhow::Result<Params> {
        self.params_at_gamma(single("gamma", &self.gamma)?)
    }

    /// Single-valued parameters with `gamma` supplied by the caller.
    pub fn params_at_gamma(&self, gamma: f64) -> anyhow::Result<Params> {
        Ok(Params {
            delta: single("delta", &self.delta)?,
            gamma,
            psi: single("psi", &self.psi)?,
            mu: single("mu", &self.mu)?,
            sigma: single("sigma", &self.sigma)?,
        })
    }

    pub fn grid(&self) -> anyhow::Result<lucas_ez::sweep::GridSpec> {
        Ok(lucas_ez::sweep::GridSpec {
            gamma: axis("gamma", &self.gamma)?,
            psi: axis("psi", &self.psi)?,
            delta: axis("delta", &self.delta)?,
            mu: axis("mu", &self.mu)?,
            sigma: axis("sigma", &self.sigma)?,
        })
    }

    /// Applies a config file on top of the current values.
    pub fn merge_file(&mut self, path: &Path) -> anyhow::Result<()> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| anyhow!("IoFailure: cannot read config {}: {e}", path.display()))?;
        let table: toml::Table = text
            .parse()
            .map_err(|e| anyhow!("InvalidConfig: {}: {e}", path.display()))?;
        for (key, value) in &table {
            self.set(key, value)
                .with_context(|| format!("InvalidConfig: key `{key}` in {}", path.display()))?;
        }
        Ok(())
    }

    fn set(&mut self, key: &str, value: &toml::Value) -> anyhow::Result<()> {
        use toml::Value;
        let text = || -> anyhow::Result<String> {
            match value {
                Value::String(s) => Ok(s.clone()),
                Value::Integer(i) => Ok(i.to_string()),
                Value::Float(f) => Ok(f.to_string()),
                other => bail!("expected a number or string, got {}", other.type_str()),
            }
        };
        let float = || -> anyhow::Result<f64> {
            match value {
                Value::Integer(i) => Ok(*i as f64),
                Value::Float(f) => Ok(*f),
                Value::String(s) => s.trim().parse().map_err(|_| anyhow!("not a number: `{s}`")),
                other => bail!("expected a number, got {}", other.type_str()),
            }
        };
        let count = || -> anyhow::Result<usize> {
            match value {
                Value::Integer(i) if *i >= 0 => Ok(*i as usize),
                Value::Float(f) if *f >= 0.0 && f.fract() == 0.0 && *f <= 9e15 => Ok(*f as usize),
                other => bail!("expected a non-negative integer, got {other}"),
            }
        };
        let flag = || -> anyhow::Result<bool> {
            value.as_bool().ok_or_else(|| anyhow!("expected true or false"))
        };
        match key {
            "delta" => self.delta = text()?,
            "gamma" => self.gamma = text()?,
            "psi" => self.psi = text()?,
            "mu" => self.mu = text()?,
            "sigma" => self.sigma = text()?,
            "seed" => self.seed = count()? as u64,
            "draws" => self.draws = count()?,
            "periods" => self.periods = count()?,
            "format" => self.format = text()?.parse()?,
            "output" => self.output = Some(text()?),
            "manifest" => self.manifest = text()?,
            "net-rates" => self.net_rates = flag()?,
            "threads" => self.threads = Some(count()?),
            "antithetic" => self.antithetic = flag()?,
            "gamma-from" => self.gamma_from = float()?,
            "gamma-to" => self.gamma_to = float()?,
            "q0" => self.q0 = float()?,
            "path-csv" => self.path_csv = Some(text()?),
            _ => bail!("unknown key"),
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn file(contents: &str) -> tempfile::NamedTempFile {
        use std::io::Write;
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn defaults_are_the_baseline() {
        let p = RunConfig::default().params().unwrap();
        assert_eq!(
            p,
            Params {
                delta: 0.02,
                gamma: 10.0,
                psi: 1.5,
                mu: 0.018,
                sigma: 0.036
            }
        );
    }

    #[test]
    fn file_values_override_defaults() {
        let f = file("psi = 0.5\ngamma = \"0:10:11\"\nseed = 42\nnet-rates = true\nformat = \"csv\"\ngamma-from = 3\n");
        let mut cfg = RunConfig::default();
        cfg.merge_file(f.path()).unwrap();
        assert_eq!(cfg.psi, "0.5");
        assert_eq!(cfg.gamma, "0:10:11");
        assert_eq!(cfg.seed, 42);
        assert!(cfg.net_rates);
        assert_eq!(cfg.format, Format::Csv);
        assert_eq!(cfg.gamma_from, 3.0);
        assert!(cfg.params().is_err());
        assert_eq!(cfg.grid().unwrap().gamma.points().unwrap().len(), 11);
    }

    #[test]
    fn unknown_and_mistyped_keys_are_rejected() {
        let mut cfg = RunConfig::default();
        assert!(cfg.merge_file(file("colour = 1\n").path()).is_err());
        assert!(cfg.merge_file(file("seed = -1\n").path()).is_err());
        assert!(cfg.merge_file(file("antithetic = 1\n").path()).is_err());
        assert!(cfg.merge_file(file("format = \"xml\"\n").path()).is_err());
        assert!(cfg.merge_file(file("[section]\nseed = 1\n").path()).is_err());
    }

    #[test]
    fn reversed_range_is_invalid() {
        let cfg = RunConfig {
            gamma: "5:1:3".into(),
            ..RunConfig::default()
        };
        let err = format!("{:#}", cfg.grid().unwrap_err());
        assert!(err.contains("InvalidRange"), "{err}");
    }
}
