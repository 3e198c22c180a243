//! Reading inputs: Cayley tables, band patterns, colour instances.

use std::io::Read;

use sha2::{Digest, Sha256};

use semimatch::band::{builtin_b7, parse_band, write_band, ZeroRectBand};
use semimatch::semigroup::{parse_cayley, FiniteSemigroup};

use crate::error::CliError;

pub struct RawInput {
    pub source: String,
    pub text: String,
}

impl RawInput {
    pub fn read(path: &str) -> Result<Self, CliError> {
        let text = if path == "builtin:b7" {
            write_band(&builtin_b7())
        } else if path == "-" {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf).map_err(|e| CliError::Io(format!("stdin: {e}")))?;
            buf
        } else {
            std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?
        };
        Ok(Self { source: path.to_string(), text })
    }

    pub fn digest(&self) -> String {
        let hash = Sha256::digest(self.text.as_bytes());
        let hex: String = hash.iter().map(|b| format!("{b:02x}")).collect();
        format!("sha256:{hex}")
    }
}

/// A semigroup input, remembering whether it was given as a band.
pub enum Algebra {
    Cayley(FiniteSemigroup),
    Band(ZeroRectBand),
}

impl Algebra {
    pub fn semigroup(&self) -> FiniteSemigroup {
        match self {
            Algebra::Cayley(s) => s.clone(),
            Algebra::Band(b) => b.to_semigroup(),
        }
    }
}

/// The first non-blank, non-comment line decides the format: one number is
/// a Cayley table, two numbers a band pattern.
pub fn parse_algebra(raw: &RawInput) -> Result<Algebra, CliError> {
    let header = raw
        .text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .ok_or_else(|| CliError::Parse(format!("{}: empty input", raw.source)))?;
    match header.split_whitespace().count() {
        1 => Ok(Algebra::Cayley(parse_cayley(&raw.text)?)),
        2 => Ok(Algebra::Band(parse_band(&raw.text)?)),
        _ => Err(CliError::Parse(format!(
            "{}: first line must be `n` (Cayley table) or `m n` (band pattern)",
            raw.source
        ))),
    }
}

pub fn read_band(path: &str) -> Result<(RawInput, ZeroRectBand), CliError> {
    let raw = RawInput::read(path)?;
    let band = parse_band(&raw.text)?;
    Ok((raw, band))
}
