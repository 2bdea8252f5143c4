use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use serde::Deserialize;

/// `start:stop:count`, inclusive on both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| if i + 1 == self.count { self.stop } else { self.start + step * i as f64 })
            .collect()
    }
}

impl FromStr for Sweep {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, c] = parts.as_slice() else {
            return Err(format!("sweep '{s}' must have the form start:stop:count"));
        };
        let start: f64 = a.trim().parse().map_err(|_| format!("bad sweep start '{a}'"))?;
        let stop: f64 = b.trim().parse().map_err(|_| format!("bad sweep stop '{b}'"))?;
        let count: usize = c.trim().parse().map_err(|_| format!("bad sweep count '{c}'"))?;
        if count < 2 {
            return Err(format!("sweep count must be at least 2, got {count}"));
        }
        if !(start < stop) || !start.is_finite() || !stop.is_finite() {
            return Err(format!("sweep needs finite start < stop, got {start}:{stop}"));
        }
        Ok(Self { start, stop, count })
    }
}

impl fmt::Display for Sweep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.count)
    }
}

/// Flags shared by every subcommand. Unset flags fall back to the config
/// file, then to the defaults of [`RunConfig`].
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Ambient dimension N (>= 4).
    #[arg(long = "N", value_name = "N")]
    pub n: Option<u32>,
    /// Coupling parameter mu >= 0.
    #[arg(long, conflicts_with = "mu_sweep")]
    pub mu: Option<f64>,
    /// Sweep over mu as start:stop:count.
    #[arg(long = "mu-sweep", value_name = "START:STOP:COUNT")]
    pub mu_sweep: Option<Sweep>,
    /// lambda as a fraction of the discrete first eigenvalue.
    #[arg(long = "lambda-frac")]
    pub lambda_frac: Option<f64>,
    /// Ball radius.
    #[arg(long = "R", value_name = "R")]
    pub radius: Option<f64>,
    /// Interior grid nodes.
    #[arg(long = "M", value_name = "M")]
    pub nodes: Option<usize>,
    /// Output file for the CSV table (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed for every random choice.
    #[arg(long)]
    pub seed: Option<u64>,
    /// JSON file with flat keys N, mu, mu_sweep, lambda_frac, R, M, out, seed, profile.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Where `solve` writes the profile CSV.
    #[arg(long)]
    pub profile: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    #[serde(rename = "N")]
    n: Option<u32>,
    mu: Option<f64>,
    mu_sweep: Option<String>,
    lambda_frac: Option<f64>,
    #[serde(rename = "R")]
    radius: Option<f64>,
    #[serde(rename = "M")]
    nodes: Option<usize>,
    out: Option<PathBuf>,
    seed: Option<u64>,
    profile: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MuSpec {
    Single(f64),
    Sweep(Sweep),
}

impl MuSpec {
    pub fn values(&self) -> Vec<f64> {
        match self {
            MuSpec::Single(m) => vec![*m],
            MuSpec::Sweep(s) => s.values(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub n: u32,
    pub mu: MuSpec,
    pub lambda_frac: f64,
    pub radius: f64,
    pub nodes: usize,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub profile: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n: 4,
            mu: MuSpec::Single(0.1),
            lambda_frac: 0.5,
            radius: 1.0,
            nodes: 512,
            out: None,
            seed: 0,
            profile: None,
        }
    }
}

fn read_file(path: &Path) -> Result<FileConfig, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
}

impl RunConfig {
    /// Merge flags over the config file over the defaults.
    pub fn resolve(flags: &Flags) -> Result<Self, String> {
        let file = match &flags.config {
            Some(p) => read_file(p)?,
            None => FileConfig::default(),
        };
        let d = Self::default();
        let file_sweep = file.mu_sweep.as_deref().map(str::parse::<Sweep>).transpose()?;
        let mu = match (flags.mu, flags.mu_sweep) {
            (Some(m), _) => MuSpec::Single(m),
            (None, Some(s)) => MuSpec::Sweep(s),
            (None, None) => match (file.mu, file_sweep) {
                (Some(_), Some(_)) => return Err("config sets both mu and mu_sweep".into()),
                (Some(m), None) => MuSpec::Single(m),
                (None, Some(s)) => MuSpec::Sweep(s),
                (None, None) => d.mu,
            },
        };
        let cfg = Self {
            n: flags.n.or(file.n).unwrap_or(d.n),
            mu,
            lambda_frac: flags.lambda_frac.or(file.lambda_frac).unwrap_or(d.lambda_frac),
            radius: flags.radius.or(file.radius).unwrap_or(d.radius),
            nodes: flags.nodes.or(file.nodes).unwrap_or(d.nodes),
            out: flags.out.clone().or(file.out),
            seed: flags.seed.or(file.seed).unwrap_or(d.seed),
            profile: flags.profile.clone().or(file.profile),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), String> {
        if self.n < 4 {
            return Err(format!("--N must be at least 4, got {}", self.n));
        }
        for mu in self.mu.values() {
            if !(mu >= 0.0) || !mu.is_finite() {
                return Err(format!("mu must be finite and >= 0, got {mu}"));
            }
        }
        if !(self.radius > 0.0) || !self.radius.is_finite() {
            return Err(format!("--R must be positive, got {}", self.radius));
        }
        if !self.lambda_frac.is_finite() {
            return Err(format!("--lambda-frac must be finite, got {}", self.lambda_frac));
        }
        Ok(())
    }
}
