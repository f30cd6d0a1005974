use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Everything a suite run depends on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub m: f64,
    pub lambda: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub grid_n: usize,
    pub grid_l: f64,
    pub phase_n: usize,
    pub phase_l: f64,
    pub seed: u64,
    pub fast: bool,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub dump_states: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            m: 1.0,
            lambda: 0.5,
            alpha: 1.0,
            beta: 1.0,
            gamma: 1.0,
            grid_n: 128,
            grid_l: 10.0,
            phase_n: 24,
            phase_l: 6.0,
            seed: 7,
            fast: false,
            out: None,
            dump_states: None,
        }
    }
}

/// Command-line values; each one set wins over the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<f64>,
    /// sets lambda = m² θ
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    #[arg(long = "grid-n")]
    pub grid_n: Option<usize>,
    #[arg(long = "grid-l")]
    pub grid_l: Option<f64>,
    #[arg(long = "phase-n")]
    pub phase_n: Option<usize>,
    #[arg(long = "phase-l")]
    pub phase_l: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// FFT quadrature for quantization
    #[arg(long)]
    pub fast: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// write binary grid-function dumps into this directory
    #[arg(long = "dump-states")]
    pub dump_states: Option<PathBuf>,
}

fn value<T: std::str::FromStr>(key: &str, raw: &str) -> Result<T, CliError> {
    raw.parse().map_err(|_| CliError::Config(format!("invalid value for {key}: '{raw}'")))
}

fn parse_bool(key: &str, raw: &str) -> Result<bool, CliError> {
    match raw {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(CliError::Config(format!("invalid value for {key}: '{raw}'"))),
    }
}

/// The coupling as given by one source.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Coupling {
    Lambda(f64),
    Theta(f64),
}

fn coupling(lambda: Option<f64>, theta: Option<f64>, source: &str) -> Result<Option<Coupling>, CliError> {
    match (lambda, theta) {
        (Some(_), Some(_)) => Err(CliError::Config(format!("{source} sets both lambda and theta"))),
        (Some(l), None) => Ok(Some(Coupling::Lambda(l))),
        (None, Some(t)) => Ok(Some(Coupling::Theta(t))),
        (None, None) => Ok(None),
    }
}

impl RunConfig {
    /// Apply a `key = value` file, then the flags, then validate. `#` starts
    /// a comment.
    pub fn parse(file: &str, flags: &Overrides) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        let (mut file_lambda, mut file_theta) = (None, None);
        for (no, raw) in file.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, val)) = line.split_once('=') else {
                return Err(CliError::Config(format!("line {}: expected key = value", no + 1)));
            };
            let (key, val) = (key.trim(), val.trim());
            match key {
                "m" => cfg.m = value(key, val)?,
                "lambda" => file_lambda = Some(value(key, val)?),
                "theta" => file_theta = Some(value(key, val)?),
                "alpha" => cfg.alpha = value(key, val)?,
                "beta" => cfg.beta = value(key, val)?,
                "gamma" => cfg.gamma = value(key, val)?,
                "grid_n" => cfg.grid_n = value(key, val)?,
                "grid_l" => cfg.grid_l = value(key, val)?,
                "phase_n" => cfg.phase_n = value(key, val)?,
                "phase_l" => cfg.phase_l = value(key, val)?,
                "seed" => cfg.seed = value(key, val)?,
                "fast" => cfg.fast = parse_bool(key, val)?,
                _ => return Err(CliError::Config(format!("line {}: unknown key '{key}'", no + 1))),
            }
        }
        let from_file = coupling(file_lambda, file_theta, "config file")?;
        let from_flags = coupling(flags.lambda, flags.theta, "command line")?;

        let f = flags;
        cfg.m = f.m.unwrap_or(cfg.m);
        cfg.alpha = f.alpha.unwrap_or(cfg.alpha);
        cfg.beta = f.beta.unwrap_or(cfg.beta);
        cfg.gamma = f.gamma.unwrap_or(cfg.gamma);
        cfg.grid_n = f.grid_n.unwrap_or(cfg.grid_n);
        cfg.grid_l = f.grid_l.unwrap_or(cfg.grid_l);
        cfg.phase_n = f.phase_n.unwrap_or(cfg.phase_n);
        cfg.phase_l = f.phase_l.unwrap_or(cfg.phase_l);
        cfg.seed = f.seed.unwrap_or(cfg.seed);
        cfg.fast |= f.fast;
        cfg.out = f.out.clone();
        cfg.dump_states = f.dump_states.clone();

        // θ is converted with the final mass
        match from_flags.or(from_file) {
            Some(Coupling::Lambda(l)) => cfg.lambda = l,
            Some(Coupling::Theta(t)) => cfg.lambda = cfg.m * cfg.m * t,
            None => {}
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: &str| Err(CliError::Config(msg.into()));
        if !(self.m > 0.0) || !self.m.is_finite() {
            return bad("m must be positive");
        }
        for (name, v) in [("lambda", self.lambda), ("alpha", self.alpha), ("beta", self.beta), ("gamma", self.gamma)] {
            if !v.is_finite() {
                return Err(CliError::Config(format!("{name} must be finite")));
            }
        }
        if self.grid_n < 8 || !self.grid_n.is_power_of_two() {
            return bad("grid_n must be a power of two, at least 8");
        }
        if !(self.grid_l > 0.0) || !self.grid_l.is_finite() {
            return bad("grid_l must be positive");
        }
        if self.phase_n == 0 {
            return bad("phase_n must be positive");
        }
        if !(self.phase_l > 0.0) || !self.phase_l.is_finite() {
            return bad("phase_l must be positive");
        }
        Ok(())
    }

    pub fn theta(&self) -> f64 {
        self.lambda / (self.m * self.m)
    }
}
