//! Permutation matchings (bijections sending each element to one of its
//! inverses) and involution matchings.

mod equivalence;

pub use equivalence::{equivalence_report, FactorVerdict, QuotientVerdict, EquivalenceReport};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::bipartite::{alternating_reach, hopcroft_karp};
use crate::graph::blossom::maximum_matching;
use crate::semigroup::{h_quotient, EggBox, FiniteSemigroup, PrincipalFactor, SemigroupError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("semigroup is not regular: element {witness} has no inverse")]
    NotRegular { witness: usize },
    #[error("not a permutation of 0..{order}")]
    NotAPermutation { order: usize },
    #[error("element {element} has no inverse in its target H-class")]
    NoInverseInTargetCell { element: usize },
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("equivalent matching criteria disagree: {0}")]
    EquivalenceViolation(String),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
}

/// Mutual-inverse graph of a semigroup.
///
/// `inverses[a]` is `V(a)` in increasing order; `a` is self-eligible when
/// `a ∈ V(a)`, i.e. `a = a³`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseGraph {
    inverses: Vec<Vec<usize>>,
    self_eligible: Vec<bool>,
}

impl InverseGraph {
    pub fn build(s: &FiniteSemigroup) -> Result<Self, MatchingError> {
        let inverses = s.inverse_sets();
        if let Some(witness) = inverses.iter().position(Vec::is_empty) {
            return Err(MatchingError::NotRegular { witness });
        }
        Ok(Self::from_inverse_sets(inverses))
    }

    /// Graph from explicit symmetric inverse sets, e.g. a subgraph of
    /// strong inverses. Lists are sorted and deduplicated.
    pub fn from_inverse_sets(mut inverses: Vec<Vec<usize>>) -> Self {
        for l in &mut inverses {
            l.sort_unstable();
            l.dedup();
        }
        let self_eligible = inverses.iter().enumerate().map(|(a, l)| l.binary_search(&a).is_ok()).collect();
        Self { inverses, self_eligible }
    }

    pub fn order(&self) -> usize {
        self.inverses.len()
    }

    /// `V(a)`, including `a` itself when self-eligible.
    pub fn inverses(&self, a: usize) -> &[usize] {
        &self.inverses[a]
    }

    /// Degree of `a` in the two-copy bipartite graph, `|V(a)|`.
    pub fn degree(&self, a: usize) -> usize {
        self.inverses[a].len()
    }

    /// Neighbours of `a` other than `a`.
    pub fn neighbors(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        self.inverses[a].iter().copied().filter(move |&b| b != a)
    }

    pub fn is_self_eligible(&self, a: usize) -> bool {
        self.self_eligible[a]
    }

    pub fn self_eligible(&self) -> Vec<usize> {
        (0..self.order()).filter(|&a| self.self_eligible[a]).collect()
    }

    /// Undirected edges `{a, b}` with `a < b`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.order())
            .flat_map(|a| self.inverses[a].iter().filter(move |&&b| b > a).map(move |&b| (a, b)))
            .collect()
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.inverses[a].binary_search(&b).is_ok()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.order()).all(|a| self.inverses[a].iter().all(|&b| self.contains(b, a)))
    }
}

/// A bijection `p` of the elements with `p[a] ∈ V(a)` for all `a`.
///
/// The constructors only check that `images` is a permutation; use
/// [`verify_permutation_matching`] to check the inverse condition.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PermutationMatching(Vec<usize>);

impl PermutationMatching {
    pub fn new(images: Vec<usize>) -> Result<Self, MatchingError> {
        check_permutation(&images)?;
        Ok(Self(images))
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn into_images(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_involution(&self) -> bool {
        self.0.iter().enumerate().all(|(a, &b)| self.0[b] == a)
    }

    /// Cycles, each starting at its least element, ordered by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.0[x];
            }
            out.push(cycle);
        }
        out
    }
}

fn check_permutation(images: &[usize]) -> Result<(), MatchingError> {
    let n = images.len();
    let mut hit = vec![false; n];
    for &b in images {
        if b >= n || hit[b] {
            return Err(MatchingError::NotAPermutation { order: n });
        }
        hit[b] = true;
    }
    Ok(())
}

impl fmt::Display for PermutationMatching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for PermutationMatching {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let images = s
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| format!("bad image {t:?}")))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(images).map_err(|e| e.to_string())
    }
}

/// A permutation matching that is its own inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct InvolutionMatching(PermutationMatching);

impl InvolutionMatching {
    pub fn new(images: Vec<usize>) -> Result<Self, MatchingError> {
        let p = PermutationMatching::new(images)?;
        if !p.is_involution() {
            return Err(MatchingError::NotAPermutation { order: p.len() });
        }
        Ok(Self(p))
    }

    pub(crate) fn from_images_unchecked(images: Vec<usize>) -> Self {
        debug_assert!(PermutationMatching::new(images.clone()).is_ok_and(|p| p.is_involution()));
        Self(PermutationMatching(images))
    }

    pub fn images(&self) -> &[usize] {
        self.0.images()
    }

    pub fn as_permutation(&self) -> &PermutationMatching {
        &self.0
    }

    /// 2-cycles `(a, b)` with `a < b`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.images().iter().enumerate().filter(|&(a, &b)| a < b).map(|(a, &b)| (a, b)).collect()
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        self.images().iter().enumerate().filter(|&(a, &b)| a == b).map(|(a, _)| a).collect()
    }
}

impl TryFrom<Vec<usize>> for InvolutionMatching {
    type Error = MatchingError;

    fn try_from(v: Vec<usize>) -> Result<Self, Self::Error> {
        Self::new(v)
    }
}

impl From<InvolutionMatching> for Vec<usize> {
    fn from(m: InvolutionMatching) -> Self {
        m.0 .0
    }
}

impl fmt::Display for InvolutionMatching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A set `A` with `|A| > |V(A)|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HallViolator {
    pub subset: Vec<usize>,
    pub image: Vec<usize>,
}

impl HallViolator {
    /// Re-derives `V(A)` from the definition and checks the inequality.
    pub fn verify(&self, s: &FiniteSemigroup) -> bool {
        let mut image: Vec<usize> = self.subset.iter().flat_map(|&a| s.inverses_of(a)).collect();
        image.sort_unstable();
        image.dedup();
        image == self.image && self.subset.len() > image.len()
    }
}

fn bipartite_adj(g: &InverseGraph) -> Vec<Vec<usize>> {
    (0..g.order()).map(|a| g.inverses(a).to_vec()).collect()
}

pub fn build_inverse_graph(s: &FiniteSemigroup) -> Result<InverseGraph, MatchingError> {
    InverseGraph::build(s)
}

/// A permutation matching, found as a perfect matching of the two-copy
/// bipartite inverse graph.
pub fn find_permutation_matching(s: &FiniteSemigroup) -> Result<Option<PermutationMatching>, MatchingError> {
    Ok(find_permutation_matching_in(&InverseGraph::build(s)?))
}

pub fn find_permutation_matching_in(g: &InverseGraph) -> Option<PermutationMatching> {
    let m = hopcroft_karp(&bipartite_adj(g), g.order());
    m.is_perfect()
        .then(|| PermutationMatching(m.left_to_right.into_iter().map(|x| x.expect("perfect")).collect()))
}

/// A König certificate `A` with `|A| > |V(A)|`, or `None` when a
/// permutation matching exists.
pub fn hall_violator(s: &FiniteSemigroup) -> Result<Option<HallViolator>, MatchingError> {
    Ok(hall_violator_in(&InverseGraph::build(s)?))
}

pub fn hall_violator_in(g: &InverseGraph) -> Option<HallViolator> {
    let adj = bipartite_adj(g);
    let m = hopcroft_karp(&adj, g.order());
    let root = m.left_to_right.iter().position(Option::is_none)?;
    let (subset, image) = alternating_reach(&adj, &m, root);
    Some(HallViolator { subset, image })
}

/// `true` iff `a·p[a]·a = a` and `p[a]·a·p[a] = p[a]` for every `a`.
pub fn verify_permutation_matching(s: &FiniteSemigroup, p: &[usize]) -> Result<bool, MatchingError> {
    if p.len() != s.order() {
        return Err(MatchingError::NotAPermutation { order: s.order() });
    }
    check_permutation(p)?;
    Ok(s.elements().all(|a| s.are_mutual_inverses(a, p[a])))
}

/// A verified permutation matching that is also an involution.
pub fn verify_involution_matching(s: &FiniteSemigroup, p: &[usize]) -> Result<bool, MatchingError> {
    Ok(verify_permutation_matching(s, p)? && p.iter().enumerate().all(|(a, &b)| p[b] == a))
}

/// `a H b ⇒ p[a] H p[b]`.
pub fn is_h_preserving(eb: &EggBox, p: &[usize]) -> bool {
    let mut target: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
    p.iter().enumerate().all(|(a, &b)| *target.entry(eb.h_class(a)).or_insert(eb.h_class(b)) == eb.h_class(b))
}

/// Lifts a matching `q` of the H-quotient band of `factor` to the factor:
/// `a` goes to its unique inverse in the H-class that `q` assigns to `H_a`.
pub fn lift_h_matching(factor: &PrincipalFactor, q: &PermutationMatching) -> Result<PermutationMatching, MatchingError> {
    let band = h_quotient(factor)?;
    if q.len() != band.order() {
        return Err(MatchingError::DomainMismatch(format!(
            "quotient matching has {} images, band has {} elements",
            q.len(),
            band.order()
        )));
    }
    let s = &factor.semigroup;
    let eb = s.green_relations();
    let d = eb
        .d_classes()
        .iter()
        .find(|d| !(factor.zero_adjoined && d.elements == [0]))
        .expect("h_quotient succeeded");
    let mut images = vec![0; s.order()];
    for a in factor.nonzero() {
        let (i, j) = eb.position(a);
        let (k, l) = band.coords(q.images()[band.element(i, j)]).ok_or(MatchingError::NoInverseInTargetCell { element: a })?;
        let image = d.cells[k][l]
            .iter()
            .copied()
            .find(|&b| s.are_mutual_inverses(a, b))
            .ok_or(MatchingError::NoInverseInTargetCell { element: a })?;
        images[a] = image;
    }
    PermutationMatching::new(images)
}

/// Union of per-factor matchings, translated back to global indices.
pub fn assemble_global_matching(
    s: &FiniteSemigroup,
    factors: &[PrincipalFactor],
    parts: &[PermutationMatching],
) -> Result<PermutationMatching, MatchingError> {
    if factors.len() != parts.len() {
        return Err(MatchingError::DomainMismatch(format!("{} factors but {} matchings", factors.len(), parts.len())));
    }
    let mut images = vec![usize::MAX; s.order()];
    for (f, part) in factors.iter().zip(parts) {
        if part.len() != f.semigroup.order() {
            return Err(MatchingError::DomainMismatch(format!(
                "matching for D-class {} has {} images, factor has {} elements",
                f.source_d_class,
                part.len(),
                f.semigroup.order()
            )));
        }
        if let Some(z) = f.zero() {
            if part.images()[z] != z {
                return Err(MatchingError::DomainMismatch(format!("matching of D-class {} moves the zero", f.source_d_class)));
            }
        }
        for x in f.nonzero() {
            let a = f.global(x).expect("nonzero index");
            let b = f.global(part.images()[x]).ok_or_else(|| {
                MatchingError::DomainMismatch(format!("element {a} is sent to the adjoined zero"))
            })?;
            if images[a] != usize::MAX {
                return Err(MatchingError::DomainMismatch(format!("element {a} covered twice")));
            }
            images[a] = b;
        }
    }
    if let Some(a) = images.iter().position(|&b| b == usize::MAX) {
        return Err(MatchingError::DomainMismatch(format!("element {a} lies in no factor")));
    }
    let p = PermutationMatching::new(images)?;
    if !verify_permutation_matching(s, p.images())? {
        return Err(MatchingError::DomainMismatch("assembled map is not a matching".into()));
    }
    Ok(p)
}

/// Splits the cycles of a matching into an involution: even cycles into
/// consecutive pairs, odd cycles by fixing their least self-eligible member.
/// `None` when some odd cycle has no self-eligible member.
pub fn involution_from_cycles(s: &FiniteSemigroup, p: &PermutationMatching) -> Option<InvolutionMatching> {
    let mut images: Vec<usize> = (0..p.len()).collect();
    for cycle in p.cycles() {
        let len = cycle.len();
        let start = if len % 2 == 0 {
            0
        } else {
            let pos = (0..len)
                .filter(|&k| s.are_mutual_inverses(cycle[k], cycle[k]))
                .min_by_key(|&k| cycle[k])?;
            pos + 1
        };
        let pairs = len / 2;
        for t in 0..pairs {
            let a = cycle[(start + 2 * t) % len];
            let b = cycle[(start + 2 * t + 1) % len];
            images[a] = b;
            images[b] = a;
        }
    }
    Some(InvolutionMatching::from_images_unchecked(images))
}

/// An involution matching, decided as a perfect matching of two copies of
/// the inverse graph joined at each self-eligible vertex. Copy-internal
/// pairs become 2-cycles and cross edges become fixed points.
pub fn find_involution_matching(s: &FiniteSemigroup) -> Result<Option<InvolutionMatching>, MatchingError> {
    Ok(find_involution_matching_in(&InverseGraph::build(s)?))
}

pub fn find_involution_matching_in(g: &InverseGraph) -> Option<InvolutionMatching> {
    let n = g.order();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); 2 * n];
    for a in 0..n {
        for b in g.neighbors(a) {
            adj[a].push(b);
            adj[n + a].push(n + b);
        }
        if g.is_self_eligible(a) {
            adj[a].push(n + a);
            adj[n + a].push(a);
        }
    }
    for l in &mut adj {
        l.sort_unstable();
    }
    let mate = maximum_matching(&adj);
    let images = (0..n)
        .map(|a| match mate[a]? {
            b if b == n + a => Some(a),
            b if b < n => Some(b),
            _ => unreachable!("copy-one vertices only meet copy one or their own twin"),
        })
        .collect::<Option<Vec<usize>>>()?;
    Some(InvolutionMatching::from_images_unchecked(images))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::band::{builtin_b7, ZeroRectBand};
    use crate::semigroup::principal_factors;

    fn semilattice_chain(k: usize) -> FiniteSemigroup {
        let t = (0..k).map(|a| (0..k).map(|b: usize| a.min(b)).collect()).collect();
        FiniteSemigroup::new(t, None).unwrap()
    }

    #[test]
    fn b7_graph_degrees() {
        let b = builtin_b7();
        let g = build_inverse_graph(&b.to_semigroup()).unwrap();
        let x = b.element(1, 1);
        assert_eq!(g.degree(x), 1);
        assert_eq!(g.inverses(x), &[b.element(0, 0)]);
        assert!(!g.is_self_eligible(x));
        assert!(g.is_symmetric());
    }

    #[test]
    fn semilattice_graph_is_edgeless() {
        let g = build_inverse_graph(&semilattice_chain(4)).unwrap();
        assert_eq!(g.edges(), vec![]);
        assert_eq!(g.self_eligible(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn b7_has_no_matching_and_certificate() {
        let b = builtin_b7();
        let s = b.to_semigroup();
        assert_eq!(find_permutation_matching(&s).unwrap(), None);
        let v = hall_violator(&s).unwrap().unwrap();
        assert_eq!(v.subset, vec![b.element(1, 1), b.element(1, 2)]);
        assert_eq!(v.image, vec![b.element(0, 0)]);
        assert!(v.verify(&s));
    }

    #[test]
    fn full_band_identity_is_a_matching() {
        let s = ZeroRectBand::full(2, 2).unwrap().to_semigroup();
        let id: Vec<usize> = s.elements().collect();
        assert!(verify_permutation_matching(&s, &id).unwrap());
        assert!(find_permutation_matching(&s).unwrap().is_some());
        assert!(hall_violator(&s).unwrap().is_none());
    }

    #[test]
    fn every_bijection_of_rectangular_band_is_a_matching() {
        let s = crate::semigroup::tests::rect_band(2, 2);
        let p = vec![2, 3, 1, 0];
        assert!(verify_permutation_matching(&s, &p).unwrap());
    }

    #[test]
    fn swap_in_semilattice_is_not_a_matching() {
        let s = semilattice_chain(3);
        assert!(!verify_permutation_matching(&s, &[1, 0, 2]).unwrap());
        assert!(matches!(
            verify_permutation_matching(&s, &[0, 0, 2]),
            Err(MatchingError::NotAPermutation { .. })
        ));
    }

    #[test]
    fn involution_from_three_cycle_of_idempotents() {
        // 3x3 rectangular band, cycle 0 -> 1 -> 2 -> 0 on the first row
        let s = crate::semigroup::tests::rect_band(3, 3);
        let mut p: Vec<usize> = s.elements().collect();
        p[0] = 1;
        p[1] = 2;
        p[2] = 0;
        let p = PermutationMatching::new(p).unwrap();
        let inv = involution_from_cycles(&s, &p).unwrap();
        assert_eq!(&inv.images()[..3], &[0, 2, 1]);
        assert!(verify_involution_matching(&s, inv.images()).unwrap());
    }

    #[test]
    fn involution_from_cycles_keeps_short_cycles() {
        let s = crate::semigroup::tests::rect_band(2, 2);
        let p = PermutationMatching::new(vec![1, 0, 2, 3]).unwrap();
        assert_eq!(involution_from_cycles(&s, &p).unwrap().images(), p.images());
    }

    #[test]
    fn three_cycle_without_self_eligible_member_fails() {
        // off-diagonal pattern: the diagonal cells are pairwise mutually
        // inverse and none is idempotent
        let b = ZeroRectBand::new(vec![vec![false, true, true], vec![true, false, true], vec![true, true, false]])
            .unwrap();
        let s = b.to_semigroup();
        let (x, y, z) = (b.element(0, 0), b.element(1, 1), b.element(2, 2));
        let mut images: Vec<usize> = s.elements().collect();
        images[x] = y;
        images[y] = z;
        images[z] = x;
        assert!(verify_permutation_matching(&s, &images).unwrap());
        let p = PermutationMatching::new(images).unwrap();
        assert!(involution_from_cycles(&s, &p).is_none());
        // the verdict is about this matching only
        assert!(find_involution_matching(&s).unwrap().is_some());
    }

    #[test]
    fn semilattice_involution_is_identity() {
        let s = semilattice_chain(4);
        let inv = find_involution_matching(&s).unwrap().unwrap();
        assert_eq!(inv.images(), &[0, 1, 2, 3]);
    }

    #[test]
    fn b7_has_no_involution() {
        assert!(find_involution_matching(&builtin_b7().to_semigroup()).unwrap().is_none());
    }

    #[test]
    fn group_quotient_lifts_to_group_inverse() {
        let t = (0..5).map(|a| (0..5).map(|b| (a + b) % 5).collect()).collect();
        let s = FiniteSemigroup::new(t, None).unwrap();
        let f = &principal_factors(&s).unwrap()[0];
        let band = h_quotient(f).unwrap();
        let q = find_permutation_matching(&band.to_semigroup()).unwrap().unwrap();
        let lifted = lift_h_matching(f, &q).unwrap();
        assert_eq!(lifted.images(), &[0, 4, 3, 2, 1]);
    }

    #[test]
    fn transpose_lifts_to_itself_on_trivial_groups() {
        let band = ZeroRectBand::full(2, 2).unwrap();
        let s = band.to_semigroup();
        let f = &principal_factors(&s).unwrap()[1];
        assert!(f.zero_adjoined);
        assert_eq!(f.semigroup.rows(), s.rows());
        let transpose: Vec<usize> = (0..5)
            .map(|x| band.coords(x).map_or(0, |(i, j)| band.element(j, i)))
            .collect();
        let q = PermutationMatching::new(transpose.clone()).unwrap();
        assert_eq!(lift_h_matching(f, &q).unwrap().images(), transpose.as_slice());
    }

    #[test]
    fn non_matching_quotient_is_rejected_by_lift() {
        // 2x2 identity pattern: (0,1) has inverse (1,0) only
        let band = ZeroRectBand::new(vec![vec![true, false], vec![false, true]]).unwrap();
        let s = band.to_semigroup();
        let f = &principal_factors(&s).unwrap()[1];
        let id = PermutationMatching::new((0..5).collect()).unwrap();
        assert!(matches!(lift_h_matching(f, &id), Err(MatchingError::NoInverseInTargetCell { .. })));
    }

    #[test]
    fn assemble_rejects_missing_part() {
        let s = semilattice_chain(3);
        let factors = principal_factors(&s).unwrap();
        let parts: Vec<PermutationMatching> = factors[..2]
            .iter()
            .map(|f| find_permutation_matching(&f.semigroup).unwrap().unwrap())
            .collect();
        assert!(matches!(
            assemble_global_matching(&s, &factors, &parts),
            Err(MatchingError::DomainMismatch(_))
        ));
    }

    #[test]
    fn single_d_class_assembly_is_the_part() {
        let s = crate::semigroup::tests::rect_band(2, 3);
        let factors = principal_factors(&s).unwrap();
        let part = find_permutation_matching(&factors[0].semigroup).unwrap().unwrap();
        let global = assemble_global_matching(&s, &factors, std::slice::from_ref(&part)).unwrap();
        assert_eq!(global, part);
    }

    #[test]
    fn matching_text_round_trip() {
        let p: PermutationMatching = "2 0 1".parse().unwrap();
        assert_eq!(p.to_string(), "2 0 1");
        assert!("0 0 1".parse::<PermutationMatching>().is_err());
    }
}
