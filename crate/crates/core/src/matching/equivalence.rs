//! Cross-check of the equivalent characterizations of matching existence:
//! the global matching, the Hall condition, the principal factors, the
//! H-quotient bands, and an H-preserving matching lifted from the quotients.

use serde::{Deserialize, Serialize};

use super::{
    assemble_global_matching, find_involution_matching_in, find_permutation_matching, find_permutation_matching_in,
    hall_violator_in, involution_from_cycles, is_h_preserving, lift_h_matching, verify_permutation_matching,
    HallViolator, InverseGraph, InvolutionMatching, MatchingError, PermutationMatching,
};
use crate::semigroup::{h_quotient, principal_factors, FiniteSemigroup};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorVerdict {
    pub d_class: usize,
    pub size: usize,
    pub zero_adjoined: bool,
    pub has_matching: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientVerdict {
    pub d_class: usize,
    pub rows: usize,
    pub cols: usize,
    pub pattern: Vec<String>,
    pub has_matching: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    /// A permutation matching of the whole semigroup.
    pub matching: Option<PermutationMatching>,
    /// The matching read as a system of distinct representatives of the `V(a)`.
    pub transversal: bool,
    /// `A` with `|A| > |V(A)|`, when the Hall condition fails.
    pub hall_violator: Option<HallViolator>,
    /// Lifted from the quotient matchings; checked to preserve H.
    pub h_preserving_matching: Option<PermutationMatching>,
    pub factors: Vec<FactorVerdict>,
    pub quotients: Vec<QuotientVerdict>,
    /// Verdicts in the order: matching, transversal, Hall condition,
    /// H-preserving matching, every factor, every quotient.
    pub verdicts: [bool; 6],
    pub involution: Option<InvolutionMatching>,
    /// Result of splitting the cycles of `matching`, when it succeeds.
    pub cycle_split_involution: Option<InvolutionMatching>,
    /// A matching exists but no involution matching does.
    pub separates_matching_from_involution: bool,
}

impl EquivalenceReport {
    pub fn has_matching(&self) -> bool {
        self.verdicts[0]
    }
}

/// Computes every verdict independently and fails if they disagree.
pub fn equivalence_report(s: &FiniteSemigroup) -> Result<EquivalenceReport, MatchingError> {
    let graph = InverseGraph::build(s)?;
    let matching = find_permutation_matching_in(&graph);
    let hall_violator = hall_violator_in(&graph);

    let transversal = matching.as_ref().is_some_and(|p| {
        let mut reps = p.images().to_vec();
        reps.sort_unstable();
        reps.dedup();
        reps.len() == s.order() && s.elements().all(|a| graph.contains(a, p.images()[a]))
    });

    let factors = principal_factors(s)?;
    let mut factor_verdicts = Vec::with_capacity(factors.len());
    let mut quotient_verdicts = Vec::with_capacity(factors.len());
    let mut lifted = Vec::with_capacity(factors.len());
    for f in &factors {
        let factor_matching = find_permutation_matching(&f.semigroup)?;
        factor_verdicts.push(FactorVerdict {
            d_class: f.source_d_class,
            size: f.members.len(),
            zero_adjoined: f.zero_adjoined,
            has_matching: factor_matching.is_some(),
        });
        let band = h_quotient(f)?;
        let q = find_permutation_matching(&band.to_semigroup())?;
        quotient_verdicts.push(QuotientVerdict {
            d_class: f.source_d_class,
            rows: band.rows(),
            cols: band.cols(),
            pattern: band
                .pattern()
                .iter()
                .map(|r| r.iter().map(|&e| if e { '1' } else { '0' }).collect())
                .collect(),
            has_matching: q.is_some(),
        });
        if let Some(q) = q {
            lifted.push(lift_h_matching(f, &q)?);
        }
    }

    let all_factors = factor_verdicts.iter().all(|v| v.has_matching);
    let all_quotients = quotient_verdicts.iter().all(|v| v.has_matching);
    let h_preserving_matching = if all_quotients {
        let p = assemble_global_matching(s, &factors, &lifted)?;
        if !is_h_preserving(&s.green_relations(), p.images()) {
            return Err(MatchingError::EquivalenceViolation("lifted matching does not preserve H".into()));
        }
        Some(p)
    } else {
        None
    };

    let verdicts = [
        matching.is_some(),
        transversal,
        hall_violator.is_none(),
        h_preserving_matching.is_some(),
        all_factors,
        all_quotients,
    ];
    if verdicts.iter().any(|&v| v != verdicts[0]) {
        return Err(MatchingError::EquivalenceViolation(format!("verdicts {verdicts:?}")));
    }
    if let Some(p) = &matching {
        if !verify_permutation_matching(s, p.images())? {
            return Err(MatchingError::EquivalenceViolation("returned matching fails verification".into()));
        }
    }
    if let Some(v) = &hall_violator {
        if !v.verify(s) {
            return Err(MatchingError::EquivalenceViolation("Hall certificate fails verification".into()));
        }
    }

    let involution = find_involution_matching_in(&graph);
    let cycle_split_involution = matching.as_ref().and_then(|p| involution_from_cycles(s, p));
    if cycle_split_involution.is_some() && involution.is_none() {
        return Err(MatchingError::EquivalenceViolation(
            "cycle splitting found an involution the exact search missed".into(),
        ));
    }
    let separates_matching_from_involution = matching.is_some() && involution.is_none();

    Ok(EquivalenceReport {
        matching,
        transversal,
        hall_violator,
        h_preserving_matching,
        factors: factor_verdicts,
        quotients: quotient_verdicts,
        verdicts,
        involution,
        cycle_split_involution,
        separates_matching_from_involution,
    })
}
