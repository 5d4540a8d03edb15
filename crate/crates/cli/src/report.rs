use std::fmt::Write as _;
use std::path::Path;

use clap::ValueEnum;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use robust_duality::instance::{parse_instance, LoadError, LoadedInstance};

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug)]
pub enum CliError {
    Load(String),
    Usage(String),
    Numeric(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Numeric(_) => 2,
            _ => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Load(m) | CliError::Usage(m) | CliError::Numeric(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<LoadError> for CliError {
    fn from(e: LoadError) -> Self {
        CliError::Load(e.to_string())
    }
}

impl From<robust_duality::Error> for CliError {
    fn from(e: robust_duality::Error) -> Self {
        CliError::Numeric(e.to_string())
    }
}

pub struct Output {
    pub json: Value,
    pub text: String,
    pub csv: Option<String>,
}

impl Output {
    pub fn emit(&self, format: Format, out: Option<&Path>) -> Result<(), CliError> {
        let body = match format {
            Format::Text => self.text.clone(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).map_err(|e| CliError::Io(e.to_string()))?;
                s.push('\n');
                s
            }
            Format::Csv => self.csv.clone().ok_or_else(|| CliError::Usage("csv output is available for wsup, farkas, sweep and gap".into()))?,
        };
        match out {
            Some(path) => std::fs::write(path, body).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
            None => {
                print!("{body}");
                Ok(())
            }
        }
    }
}

/// Instance together with the sha256 digest of its file bytes.
pub struct Source {
    pub loaded: LoadedInstance,
    pub digest: String,
}

impl Source {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let bytes = std::fs::read(path).map_err(|e| CliError::Load(format!("{}: {e}", path.display())))?;
        let text = String::from_utf8(bytes.clone()).map_err(|_| CliError::Load(format!("{}: not UTF-8", path.display())))?;
        let loaded = parse_instance(&text)?;
        Ok(Source { loaded, digest: hex::encode(Sha256::digest(&bytes)) })
    }

    pub fn echo(&self) -> Value {
        json!({ "name": self.loaded.name, "sha256": self.digest })
    }

    pub fn header(&self, command: &str) -> String {
        format!("{command}: instance {} (sha256 {})\n", self.loaded.name, self.digest)
    }
}

pub fn vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| num(*x)).collect();
    format!("({})", parts.join(", "))
}

pub fn num(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else if x != 0.0 && (x.abs() < 1e-4 || x.abs() >= 1e15) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

/// Non-finite values as strings so JSON keeps them.
pub fn jnum(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(num(x))
    }
}

pub fn csv_rows(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        let cells: Vec<String> = r.iter().map(|c| if c.contains(',') || c.contains('"') { format!("\"{}\"", c.replace('"', "\"\"")) } else { c.clone() }).collect();
        let _ = writeln!(s, "{}", cells.join(","));
    }
    s
}
