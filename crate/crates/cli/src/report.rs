//! Versioned JSON run reports with embedded, re-checkable witnesses.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use semimatch::band::ZeroRectBand;
use semimatch::colour::{verify_plan, Ball, ColourInstance, ExchangePlan};
use semimatch::matching::{verify_involution_matching, verify_permutation_matching, HallViolator};
use semimatch::semigroup::FiniteSemigroup;
use semimatch::transform::{enumerate, Family};

use crate::error::CliError;

pub const SCHEMA: &str = "semimatch-run-report";
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: String,
    pub schema_version: u32,
    pub tool_version: String,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<InputRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub verdicts: BTreeMap<String, bool>,
    pub witnesses: Vec<Witness>,
    #[serde(default)]
    pub details: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        Self {
            schema: SCHEMA.to_string(),
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            input: None,
            seed: None,
            verdicts: BTreeMap::new(),
            witnesses: Vec::new(),
            details: serde_json::Value::Null,
            timing_ms: None,
        }
    }

    pub fn verdict(&mut self, name: &str, value: bool) {
        self.verdicts.insert(name.to_string(), value);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputRecord {
    pub source: String,
    pub digest: String,
    pub subject: Subject,
}

/// The algebra the witnesses refer to, embedded so a report stands alone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Subject {
    Cayley {
        table: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
    Band {
        pattern: Vec<String>,
    },
    Colour {
        girls: usize,
        colours: usize,
        balls: Vec<(usize, usize)>,
    },
    /// A band together with the matching a colour instance was derived from.
    DerivedColour {
        pattern: Vec<String>,
        matching: Vec<usize>,
        girls: usize,
        colours: usize,
        balls: Vec<(usize, usize)>,
    },
    Generated {
        family: Family,
        n: usize,
    },
    Search,
}

pub fn pattern_strings(b: &ZeroRectBand) -> Vec<String> {
    b.pattern().iter().map(|r| r.iter().map(|&e| if e { '1' } else { '0' }).collect()).collect()
}

pub fn band_from_strings(pattern: &[String]) -> Result<ZeroRectBand, CliError> {
    let rows = pattern
        .iter()
        .map(|r| {
            r.chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(CliError::Parse(format!("bad pattern cell {c:?}"))),
                })
                .collect()
        })
        .collect::<Result<Vec<Vec<bool>>, _>>()?;
    Ok(ZeroRectBand::new(rows)?)
}

impl Subject {
    pub fn cayley(s: &FiniteSemigroup) -> Self {
        Subject::Cayley { table: s.rows(), labels: s.labels().map(<[String]>::to_vec) }
    }

    pub fn band(b: &ZeroRectBand) -> Self {
        Subject::Band { pattern: pattern_strings(b) }
    }

    pub fn colour(inst: &ColourInstance) -> Self {
        Subject::Colour {
            girls: inst.girls(),
            colours: inst.colours(),
            balls: inst.balls().iter().map(|b| (b.girl, b.colour)).collect(),
        }
    }

    fn semigroup(&self) -> Result<Option<FiniteSemigroup>, CliError> {
        Ok(match self {
            Subject::Cayley { table, labels } => Some(FiniteSemigroup::new(table.clone(), labels.clone())?),
            Subject::Band { pattern } | Subject::DerivedColour { pattern, .. } => {
                Some(band_from_strings(pattern)?.to_semigroup())
            }
            Subject::Generated { family, n } => {
                Some(enumerate(*family, *n, usize::MAX).map_err(CliError::from)?.semigroup)
            }
            Subject::Colour { .. } | Subject::Search => None,
        })
    }

    fn instance(&self) -> Result<Option<ColourInstance>, CliError> {
        match self {
            Subject::Colour { girls, colours, balls } | Subject::DerivedColour { girls, colours, balls, .. } => {
                let balls = balls.iter().map(|&(girl, colour)| Ball { girl, colour }).collect();
                Ok(Some(ColourInstance::new(*girls, *colours, balls)?))
            }
            _ => Ok(None),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    PermutationMatching { images: Vec<usize> },
    HPreservingMatching { images: Vec<usize> },
    InvolutionMatching { images: Vec<usize> },
    HallViolator { subset: Vec<usize>, image: Vec<usize> },
    ExchangePlan { pairing: Vec<usize> },
    /// A matching and an involution matching of a band given by its pattern.
    BandMatching { pattern: Vec<String>, images: Vec<usize>, involution: bool },
    /// A band with a matching where the engine found no involution matching.
    Separator { pattern: Vec<String>, matching: Vec<usize> },
    /// A matching of a generated transformation monoid.
    FamilyMatching { family: Family, n: usize, images: Vec<usize> },
}

impl Witness {
    fn name(&self) -> &'static str {
        match self {
            Witness::PermutationMatching { .. } => "permutation-matching",
            Witness::HPreservingMatching { .. } => "h-preserving-matching",
            Witness::InvolutionMatching { .. } => "involution-matching",
            Witness::HallViolator { .. } => "hall-violator",
            Witness::ExchangePlan { .. } => "exchange-plan",
            Witness::BandMatching { .. } => "band-matching",
            Witness::Separator { .. } => "separator",
            Witness::FamilyMatching { .. } => "family-matching",
        }
    }
}

fn subject_semigroup(s: &Option<FiniteSemigroup>, what: &str) -> Result<FiniteSemigroup, CliError> {
    s.clone().ok_or_else(|| CliError::Verification(format!("{what} witness without a semigroup subject")))
}

/// Re-checks every witness against the embedded subject. Returns one line
/// per witness, or the first failure.
pub fn verify_report(report: &RunReport) -> Result<Vec<String>, CliError> {
    if report.schema != SCHEMA || report.schema_version != SCHEMA_VERSION {
        return Err(CliError::Parse(format!(
            "unsupported report schema {} v{}",
            report.schema, report.schema_version
        )));
    }
    let subject = report.input.as_ref().map(|i| &i.subject);
    let semigroup = match subject {
        Some(s) => s.semigroup()?,
        None => None,
    };
    let instance = match subject {
        Some(s) => s.instance()?,
        None => None,
    };
    let mut lines = Vec::new();
    for (k, w) in report.witnesses.iter().enumerate() {
        let ok = match w {
            Witness::PermutationMatching { images } => {
                verify_permutation_matching(&subject_semigroup(&semigroup, w.name())?, images).unwrap_or(false)
            }
            Witness::HPreservingMatching { images } => {
                let s = subject_semigroup(&semigroup, w.name())?;
                verify_permutation_matching(&s, images).unwrap_or(false)
                    && semimatch::matching::is_h_preserving(&s.green_relations(), images)
            }
            Witness::InvolutionMatching { images } => {
                verify_involution_matching(&subject_semigroup(&semigroup, w.name())?, images).unwrap_or(false)
            }
            Witness::HallViolator { subset, image } => {
                let s = subject_semigroup(&semigroup, w.name())?;
                subset.iter().all(|&a| a < s.order())
                    && HallViolator { subset: subset.clone(), image: image.clone() }.verify(&s)
            }
            Witness::ExchangePlan { pairing } => {
                let inst = instance
                    .as_ref()
                    .ok_or_else(|| CliError::Verification("exchange plan without a colour instance".into()))?;
                match ExchangePlan::new(pairing.clone()) {
                    Ok(plan) => verify_plan(inst, &plan).unwrap_or(false),
                    Err(_) => false,
                }
            }
            Witness::BandMatching { pattern, images, involution } => {
                let s = band_from_strings(pattern)?.to_semigroup();
                if *involution {
                    verify_involution_matching(&s, images).unwrap_or(false)
                } else {
                    verify_permutation_matching(&s, images).unwrap_or(false)
                }
            }
            Witness::Separator { pattern, matching } => {
                let s = band_from_strings(pattern)?.to_semigroup();
                verify_permutation_matching(&s, matching).unwrap_or(false)
                    && semimatch::matching::find_involution_matching(&s).map(|i| i.is_none()).unwrap_or(false)
            }
            Witness::FamilyMatching { family, n, images } => {
                let s = enumerate(*family, *n, usize::MAX)?.semigroup;
                verify_permutation_matching(&s, images).unwrap_or(false)
            }
        };
        if !ok {
            return Err(CliError::Verification(format!("witness {k} ({}) fails verification", w.name())));
        }
        lines.push(format!("witness {k} ({}): ok", w.name()));
    }
    Ok(lines)
}
