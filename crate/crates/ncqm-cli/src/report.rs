use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::CliError;

/// How `measured` is compared with `expected`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// `|measured - expected| <= tolerance`
    Abs,
    /// `|measured - expected| <= tolerance·|expected|`
    Rel,
    /// `measured <= expected`
    AtMost,
    /// `measured >= expected`
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub id: String,
    pub paper_ref: String,
    pub measured: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub mode: Mode,
    pub pass: bool,
}

impl Record {
    fn new(id: impl Into<String>, tag: &str, measured: f64, expected: f64, tolerance: f64, mode: Mode) -> Self {
        let pass = match mode {
            Mode::Abs => (measured - expected).abs() <= tolerance,
            Mode::Rel => (measured - expected).abs() <= tolerance * expected.abs(),
            Mode::AtMost => measured <= expected,
            Mode::AtLeast => measured >= expected,
        };
        Self { id: id.into(), paper_ref: tag.into(), measured, expected, tolerance, mode, pass }
    }

    pub fn abs(id: impl Into<String>, tag: &str, measured: f64, expected: f64, tolerance: f64) -> Self {
        Self::new(id, tag, measured, expected, tolerance, Mode::Abs)
    }

    pub fn rel(id: impl Into<String>, tag: &str, measured: f64, expected: f64, tolerance: f64) -> Self {
        Self::new(id, tag, measured, expected, tolerance, Mode::Rel)
    }

    /// A residual that must stay below `bound`.
    pub fn at_most(id: impl Into<String>, tag: &str, measured: f64, bound: f64) -> Self {
        Self::new(id, tag, measured, bound, 0.0, Mode::AtMost)
    }

    pub fn at_least(id: impl Into<String>, tag: &str, measured: f64, bound: f64) -> Self {
        Self::new(id, tag, measured, bound, 0.0, Mode::AtLeast)
    }

    /// A yes/no property, recorded as 1 or 0.
    pub fn holds(id: impl Into<String>, tag: &str, ok: bool) -> Self {
        Self::new(id, tag, ok as u8 as f64, 1.0, 0.0, Mode::Abs)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub crate_version: String,
    pub os: String,
    pub arch: String,
}

impl Environment {
    pub fn current() -> Self {
        Self {
            crate_version: env!("CARGO_PKG_VERSION").into(),
            os: std::env::consts::OS.into(),
            arch: std::env::consts::ARCH.into(),
        }
    }
}

/// First line of a report. The timestamp is the only field that changes
/// between identical runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub suite: String,
    pub timestamp: u64,
    pub environment: Environment,
    pub config: RunConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub header: Header,
    pub records: Vec<Record>,
}

impl Report {
    pub fn new(suite: &str, cfg: &RunConfig, records: Vec<Record>) -> Self {
        let timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let header = Header { suite: suite.into(), timestamp, environment: Environment::current(), config: cfg.clone() };
        Self { header, records }
    }

    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> Vec<&Record> {
        self.records.iter().filter(|r| !r.pass).collect()
    }

    /// Header object on the first line, one record per following line.
    pub fn to_json_lines(&self) -> Result<String, CliError> {
        let mut out = serde_json::to_string(&self.header)?;
        out.push('\n');
        for r in &self.records {
            out.push_str(&serde_json::to_string(r)?);
            out.push('\n');
        }
        Ok(out)
    }

    pub fn from_json_lines(text: &str) -> Result<Self, CliError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: Header = serde_json::from_str(lines.next().ok_or_else(|| CliError::Config("empty report".into()))?)?;
        let records = lines.map(serde_json::from_str).collect::<Result<Vec<Record>, _>>()?;
        Ok(Self { header, records })
    }
}
