//! Report envelopes, output routing and exit codes.

use std::path::Path;

use anyhow::{anyhow, Context};
use serde::Serialize;
use shotgun_core::Error;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Exit status: 1 usage, 2 unreadable input, 3 budget exhausted, 1 otherwise.
#[derive(Debug)]
pub enum Failure {
    Usage(anyhow::Error),
    Input(anyhow::Error),
    Budget(anyhow::Error),
    Other(anyhow::Error),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) | Failure::Other(_) => 1,
            Failure::Input(_) => 2,
            Failure::Budget(_) => 3,
        }
    }

    pub fn error(&self) -> &anyhow::Error {
        match self {
            Failure::Usage(e) | Failure::Input(e) | Failure::Budget(e) | Failure::Other(e) => e,
        }
    }

    pub fn usage(msg: impl std::fmt::Display) -> Failure {
        Failure::Usage(anyhow!("{msg}"))
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

pub type CmdResult<T = ()> = Result<T, Failure>;

/// Any error while reading `path` (syntax, out-of-range vertex, I/O) is an
/// input failure.
pub fn read<T>(r: shotgun_core::Result<T>, path: &Path) -> CmdResult<T> {
    r.map_err(|e| Failure::Input(anyhow::Error::new(e).context(format!("reading {}", path.display()))))
}

/// Core errors outside of input reading.
pub fn core<T>(r: shotgun_core::Result<T>) -> CmdResult<T> {
    r.map_err(|e| match e {
        Error::BudgetExhausted { .. } => Failure::Budget(e.into()),
        Error::InvalidProbability(_) | Error::InvalidParameter(_) => Failure::Usage(e.into()),
        other => Failure::Other(other.into()),
    })
}

#[derive(Serialize)]
struct Envelope<'a, C: Serialize, R: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    config: &'a C,
    result: &'a R,
}

pub fn envelope<C: Serialize, R: Serialize>(command: &str, config: &C, result: &R) -> CmdResult<String> {
    let mut s = serde_json::to_string_pretty(&Envelope {
        tool: "shotgun",
        version: VERSION,
        command,
        config,
        result,
    })
    .context("serializing report")?;
    s.push('\n');
    Ok(s)
}

pub fn emit(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(p) => std::fs::write(p, text)
            .with_context(|| format!("writing {}", p.display()))
            .map_err(Failure::Other),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
