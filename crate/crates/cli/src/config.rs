use std::fmt;
use std::path::PathBuf;

use mquant_core::{Base, FamilyKind};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Quantize,
    Sweep,
    Bounds,
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    File(PathBuf),
    Family(FamilyKind),
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::File(path) => write!(f, "{}", path.display()),
            Source::Family(kind) => write!(f, "{kind}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodChoice {
    Vd,
    Id,
    #[default]
    Both,
}

impl MethodChoice {
    pub fn vd(self) -> bool {
        matches!(self, MethodChoice::Vd | MethodChoice::Both)
    }

    pub fn id(self) -> bool {
        matches!(self, MethodChoice::Id | MethodChoice::Both)
    }
}

/// Inclusive range of precisions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MRange {
    pub start: u64,
    pub end: u64,
    pub step: u64,
}

impl MRange {
    pub fn single(m: u64) -> Self {
        MRange {
            start: m,
            end: m,
            step: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.start == 0 {
            return Err(CliError::Config("M must be at least 1".into()));
        }
        if self.start > self.end {
            return Err(CliError::Config(format!(
                "M range start {} exceeds end {}",
                self.start, self.end
            )));
        }
        if self.step == 0 {
            return Err(CliError::Config("M step must be at least 1".into()));
        }
        Ok(())
    }

    pub fn values(&self) -> impl Iterator<Item = u64> + '_ {
        (self.start..=self.end).step_by(usize::try_from(self.step).unwrap_or(usize::MAX))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub source: Source,
    pub m: MRange,
    pub method: MethodChoice,
    pub base: Base,
    pub normalize: bool,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.m.validate()?;
        if self.command != Command::Sweep && self.m.start != self.m.end {
            return Err(CliError::Config("only sweep accepts a range of M".into()));
        }
        Ok(())
    }

    /// The single precision used by every command except sweep.
    pub fn single_m(&self) -> u64 {
        self.m.start
    }
}
