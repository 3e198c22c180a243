//! Experimental probes: matchings of order-preserving monoids, and the hunt
//! for a 0-rectangular band with a matching but no involution matching.
//!
//! A minimal semigroup with a matching but no involution matching has a
//! 0-rectangular band as one of its principal factors, which is why the
//! second probe only looks at bands.

use serde::{Deserialize, Serialize};

use crate::band::{all_regular_bands, random_band, BandError, ZeroRectBand};
use crate::matching::{
    find_involution_matching_in, find_permutation_matching_in, hall_violator_in, InverseGraph, InvolutionMatching,
    PermutationMatching,
};
use crate::oracle::{involution_backtracking, permutation_backtracking};
use crate::transform::{count_order_preserving, enumerate, Family, TransformError, DEFAULT_CAP};

/// Orders up to which the exhaustive oracles are run alongside the engine.
pub const ORACLE_PERMUTATION_LIMIT: usize = 10;
pub const ORACLE_INVOLUTION_LIMIT: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderPreservingFinding {
    pub n: usize,
    pub order: usize,
    /// `C(2n−1, n−1)` from the recurrence in [`count_order_preserving`].
    pub expected_order: u64,
    pub has_matching: bool,
    pub matching: Option<PermutationMatching>,
    /// Size of the Hall violator when no matching exists.
    pub violator_size: Option<usize>,
    /// Exhaustive permutation search, when requested and small enough.
    pub oracle_agrees: Option<bool>,
    /// Involution decision, computed only up to `involution_up_to`.
    pub has_involution: Option<bool>,
}

/// Decides matching existence for `O_n`.
pub fn probe_order_preserving(n: usize, oracle: bool, involution_up_to: usize) -> Result<OrderPreservingFinding, TransformError> {
    let on = enumerate(Family::On, n, DEFAULT_CAP)?;
    let s = &on.semigroup;
    let graph = InverseGraph::build(s)?;
    let matching = find_permutation_matching_in(&graph);
    let violator_size = matching.is_none().then(|| hall_violator_in(&graph).map(|v| v.subset.len())).flatten();
    let oracle_agrees =
        (oracle && s.order() <= ORACLE_PERMUTATION_LIMIT).then(|| permutation_backtracking(s).is_some() == matching.is_some());
    let has_involution = (n <= involution_up_to).then(|| find_involution_matching_in(&graph).is_some());
    Ok(OrderPreservingFinding {
        n,
        order: on.order(),
        expected_order: count_order_preserving(n),
        has_matching: matching.is_some(),
        matching,
        violator_size,
        oracle_agrees,
        has_involution,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Q4Config {
    pub rows: (usize, usize),
    pub cols: (usize, usize),
    /// Shapes with at most this many cells are enumerated exhaustively.
    pub exhaustive_cells: usize,
    pub densities: Vec<f64>,
    /// Samples per density for shapes above the threshold.
    pub samples: usize,
    pub seed: u64,
    /// Cross-check the involution decision by backtracking on small bands.
    pub oracle: bool,
}

impl Default for Q4Config {
    fn default() -> Self {
        Self {
            rows: (1, 3),
            cols: (1, 4),
            exhaustive_cells: 12,
            densities: vec![0.3, 0.5, 0.7],
            samples: 20,
            seed: 0,
            oracle: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeSummary {
    pub rows: usize,
    pub cols: usize,
    pub mode: SearchMode,
    pub bands: usize,
    pub with_matching: usize,
    pub with_involution: usize,
    pub oracle_checked: usize,
}

/// A band with a verified matching and no involution matching.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Separator {
    pub pattern: Vec<String>,
    pub matching: PermutationMatching,
    /// Exhaustive backtracking confirmed there is no involution matching.
    pub oracle_confirms: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disagreement {
    pub pattern: Vec<String>,
    pub engine: bool,
    pub oracle: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Q4Report {
    pub shapes: Vec<ShapeSummary>,
    pub separators: Vec<Separator>,
    pub disagreements: Vec<Disagreement>,
}

fn pattern_strings(b: &ZeroRectBand) -> Vec<String> {
    b.pattern().iter().map(|r| r.iter().map(|&e| if e { '1' } else { '0' }).collect()).collect()
}

pub fn search_q4(config: &Q4Config) -> Result<Q4Report, BandError> {
    let (r0, r1) = config.rows;
    let (c0, c1) = config.cols;
    if r0 == 0 || c0 == 0 || r0 > r1 || c0 > c1 || r1 > 8 || c1 > 16 || config.exhaustive_cells > 20 {
        return Err(BandError::ParameterOutOfRange(format!(
            "shape range {r0}..={r1} x {c0}..={c1} with exhaustive threshold {}",
            config.exhaustive_cells
        )));
    }
    let mut report = Q4Report { shapes: Vec::new(), separators: Vec::new(), disagreements: Vec::new() };
    for m in r0..=r1 {
        for n in c0..=c1 {
            let exhaustive = m * n <= config.exhaustive_cells;
            let bands: Vec<ZeroRectBand> = if exhaustive {
                all_regular_bands(m, n).collect()
            } else {
                let mut v = Vec::new();
                for (k, &d) in config.densities.iter().enumerate() {
                    for t in 0..config.samples as u64 {
                        let seed = config.seed ^ ((m as u64) << 48 | (n as u64) << 40 | (k as u64) << 32 | t);
                        v.push(random_band(m, n, d, seed)?);
                    }
                }
                v
            };
            let mut summary = ShapeSummary {
                rows: m,
                cols: n,
                mode: if exhaustive { SearchMode::Exhaustive } else { SearchMode::Sampled },
                bands: bands.len(),
                with_matching: 0,
                with_involution: 0,
                oracle_checked: 0,
            };
            for b in &bands {
                let s = b.to_semigroup();
                let graph = InverseGraph::build(&s).expect("bands are regular");
                let Some(matching) = find_permutation_matching_in(&graph) else {
                    continue;
                };
                summary.with_matching += 1;
                let involution: Option<InvolutionMatching> = find_involution_matching_in(&graph);
                summary.with_involution += usize::from(involution.is_some());
                let oracle = (config.oracle && s.order() <= ORACLE_INVOLUTION_LIMIT).then(|| {
                    summary.oracle_checked += 1;
                    involution_backtracking(&s).is_some()
                });
                if let Some(o) = oracle {
                    if o != involution.is_some() {
                        report.disagreements.push(Disagreement {
                            pattern: pattern_strings(b),
                            engine: involution.is_some(),
                            oracle: o,
                        });
                    }
                }
                if involution.is_none() {
                    report.separators.push(Separator {
                        pattern: pattern_strings(b),
                        matching,
                        oracle_confirms: oracle.map(|o| !o),
                    });
                }
            }
            report.shapes.push(summary);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_order_preserving_probe() {
        let f = probe_order_preserving(3, true, 3).unwrap();
        assert_eq!(f.order, 10);
        assert_eq!(f.expected_order, 10);
        assert_eq!(f.oracle_agrees, Some(true));
    }

    #[test]
    fn tiny_q4_run_is_deterministic() {
        let config = Q4Config { rows: (1, 2), cols: (1, 3), exhaustive_cells: 4, samples: 3, ..Default::default() };
        let a = search_q4(&config).unwrap();
        let b = search_q4(&config).unwrap();
        assert_eq!(a, b);
        assert!(a.shapes.iter().any(|s| s.mode == SearchMode::Sampled));
        assert!(a.disagreements.is_empty());
    }

    #[test]
    fn rejects_bad_ranges() {
        let config = Q4Config { rows: (0, 2), ..Default::default() };
        assert!(search_q4(&config).is_err());
    }
}
