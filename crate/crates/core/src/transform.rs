//! Transformation monoids on `{0, …, n−1}` at small `n`.
//!
//! Maps act on the right: the product `αβ` applies `α` first, so
//! `x(αβ) = (xα)β`. With this convention `α R β` iff `ker α = ker β`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::bipartite::hopcroft_karp;
use crate::matching::{verify_permutation_matching, InverseGraph, MatchingError, PermutationMatching};
use crate::semigroup::FiniteSemigroup;

pub const DEFAULT_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("{family} on {n} points has more than {cap} elements")]
    TooLarge { family: Family, n: usize, cap: usize },
    #[error("semigroup has {size} elements, above the cap {cap}")]
    OverCap { size: usize, cap: usize },
    #[error("operation needs the full transformation monoid, got {0}")]
    NotTn(Family),
    #[error("no elements of rank {0}")]
    InvalidRank(usize),
    #[error("not a perfect matching of the Q-class graph")]
    NotPerfect,
    #[error("unknown family {0:?}; expected one of Tn, PTn, On, OPn, Pn")]
    UnknownFamily(String),
    #[error(transparent)]
    Matching(#[from] MatchingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// All maps.
    Tn,
    /// All partial maps.
    PTn,
    /// Order-preserving maps.
    On,
    /// Orientation-preserving maps.
    OPn,
    /// Orientation-preserving or orientation-reversing maps.
    Pn,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Tn => "Tn",
            Family::PTn => "PTn",
            Family::On => "On",
            Family::OPn => "OPn",
            Family::Pn => "Pn",
        })
    }
}

impl FromStr for Family {
    type Err = TransformError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "tn" | "t" => Ok(Family::Tn),
            "ptn" | "pt" => Ok(Family::PTn),
            "on" | "o" => Ok(Family::On),
            "opn" | "op" => Ok(Family::OPn),
            "pn" | "p" | "oprn" | "opr" => Ok(Family::Pn),
            _ => Err(TransformError::UnknownFamily(s.to_string())),
        }
    }
}

/// Image of a point, or undefined for partial maps.
pub const UNDEFINED: u8 = u8::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Transformation(Vec<u8>);

impl Transformation {
    pub fn new(images: Vec<u8>) -> Self {
        Self(images)
    }

    pub fn images(&self) -> &[u8] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// `self` then `other`.
    pub fn then(&self, other: &Transformation) -> Transformation {
        Transformation(
            self.0
                .iter()
                .map(|&x| if x == UNDEFINED { UNDEFINED } else { other.0[x as usize] })
                .collect(),
        )
    }

    pub fn rank(&self) -> usize {
        let mut seen = [false; 256];
        self.0.iter().filter(|&&x| x != UNDEFINED && !std::mem::replace(&mut seen[x as usize], true)).count()
    }

    /// Sorted sizes of the kernel classes (defined points only).
    pub fn kernel_signature(&self) -> Vec<usize> {
        let mut sizes: HashMap<u8, usize> = HashMap::new();
        for &x in self.0.iter().filter(|&&x| x != UNDEFINED) {
            *sizes.entry(x).or_default() += 1;
        }
        let mut sig: Vec<usize> = sizes.into_values().collect();
        sig.sort_unstable();
        sig
    }

    fn label(&self) -> String {
        let sym = |x: u8| if x == UNDEFINED { "-".to_string() } else { x.to_string() };
        if self.0.len() <= 10 {
            self.0.iter().map(|&x| sym(x)).collect()
        } else {
            self.0.iter().map(|&x| sym(x)).collect::<Vec<_>>().join(",")
        }
    }
}

impl fmt::Display for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

fn descents(seq: &[u8], cyclic: bool) -> usize {
    let n = seq.len();
    let upto = if cyclic { n } else { n.saturating_sub(1) };
    (0..upto).filter(|&i| seq[i] > seq[(i + 1) % n]).count()
}

fn ascents(seq: &[u8], cyclic: bool) -> usize {
    let n = seq.len();
    let upto = if cyclic { n } else { n.saturating_sub(1) };
    (0..upto).filter(|&i| seq[i] < seq[(i + 1) % n]).count()
}

impl Family {
    fn partial(self) -> bool {
        self == Family::PTn
    }

    /// Whether a prefix can still extend to a member of the family.
    fn prefix_ok(self, prefix: &[u8]) -> bool {
        match self {
            Family::Tn | Family::PTn => true,
            Family::On => prefix.windows(2).all(|w| w[0] <= w[1]),
            Family::OPn => descents(prefix, false) <= 1,
            Family::Pn => descents(prefix, false) <= 1 || ascents(prefix, false) <= 1,
        }
    }

    pub fn contains(self, seq: &[u8]) -> bool {
        match self {
            Family::Tn => seq.iter().all(|&x| x != UNDEFINED),
            Family::PTn => true,
            Family::On => self.prefix_ok(seq),
            Family::OPn => descents(seq, true) <= 1,
            Family::Pn => descents(seq, true) <= 1 || ascents(seq, true) <= 1,
        }
    }
}

/// An enumerated transformation monoid with its element dictionary.
#[derive(Debug, Clone)]
pub struct TransformationMonoid {
    pub family: Family,
    pub degree: usize,
    pub elements: Vec<Transformation>,
    pub semigroup: FiniteSemigroup,
}

impl TransformationMonoid {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, t: &Transformation) -> Option<usize> {
        self.elements.binary_search(t).ok()
    }
}

/// All members of `family` on `n` points in lexicographic order of image
/// sequences (undefined sorts last), with the composition table.
pub fn enumerate(family: Family, n: usize, cap: usize) -> Result<TransformationMonoid, TransformError> {
    assert!(n >= 1 && n < usize::from(UNDEFINED), "degree must be in 1..255");
    let symbols: Vec<u8> = (0..n as u8).chain(family.partial().then_some(UNDEFINED)).collect();
    let mut elements = Vec::new();
    let mut prefix = Vec::with_capacity(n);
    if !generate(family, n, &symbols, &mut prefix, &mut elements, cap) {
        return Err(TransformError::TooLarge { family, n, cap });
    }
    let elements: Vec<Transformation> = elements.into_iter().map(Transformation).collect();

    let base = (n + 1) as u64;
    let code = |t: &[u8]| t.iter().fold(0u64, |acc, &x| acc * base + if x == UNDEFINED { n as u64 } else { x as u64 });
    let dense = (n as u32) * (base as f64).log2().ceil() as u32 <= 26;
    let lookup: Box<dyn Fn(&[u8]) -> u32> = if dense {
        let mut table = vec![u32::MAX; base.pow(n as u32) as usize];
        for (i, t) in elements.iter().enumerate() {
            table[code(&t.0) as usize] = i as u32;
        }
        Box::new(move |t| table[code(t) as usize])
    } else {
        let map: HashMap<u64, u32> = elements.iter().enumerate().map(|(i, t)| (code(&t.0), i as u32)).collect();
        Box::new(move |t| map[&code(t)])
    };

    let size = elements.len();
    let mut table = Vec::with_capacity(size * size);
    let mut buf = vec![0u8; n];
    for a in &elements {
        for b in &elements {
            for (slot, &x) in buf.iter_mut().zip(&a.0) {
                *slot = if x == UNDEFINED { UNDEFINED } else { b.0[x as usize] };
            }
            let idx = lookup(&buf);
            debug_assert_ne!(idx, u32::MAX, "family closed under composition");
            table.push(idx);
        }
    }
    let labels = elements.iter().map(Transformation::label).collect();
    let semigroup = FiniteSemigroup::from_flat_trusted(size, table, Some(labels));
    Ok(TransformationMonoid { family, degree: n, elements, semigroup })
}

fn generate(family: Family, n: usize, symbols: &[u8], prefix: &mut Vec<u8>, out: &mut Vec<Vec<u8>>, cap: usize) -> bool {
    if prefix.len() == n {
        if family.contains(prefix) {
            if out.len() == cap {
                return false;
            }
            out.push(prefix.clone());
        }
        return true;
    }
    for &s in symbols {
        prefix.push(s);
        let ok = !family.prefix_ok(prefix) || generate(family, n, symbols, prefix, out, cap);
        prefix.pop();
        if !ok {
            return false;
        }
    }
    true
}

/// A union of R-classes of `T_n` of one rank sharing a kernel signature.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QClass {
    pub rank: usize,
    pub signature: Vec<usize>,
    pub elements: Vec<usize>,
}

/// Q-classes of the rank-`rank` D-class of `T_n`, ordered by signature.
pub fn q_class_partition(tm: &TransformationMonoid, rank: usize) -> Result<Vec<QClass>, TransformError> {
    if tm.family != Family::Tn {
        return Err(TransformError::NotTn(tm.family));
    }
    let mut by_sig: std::collections::BTreeMap<Vec<usize>, Vec<usize>> = Default::default();
    for (i, t) in tm.elements.iter().enumerate() {
        if t.rank() == rank {
            by_sig.entry(t.kernel_signature()).or_default().push(i);
        }
    }
    if by_sig.is_empty() {
        return Err(TransformError::InvalidRank(rank));
    }
    Ok(by_sig.into_iter().map(|(signature, elements)| QClass { rank, signature, elements }).collect())
}

/// The common number of inverses inside `q` of each member, if constant.
pub fn q_class_regular_degree(graph: &InverseGraph, q: &QClass) -> Option<usize> {
    let degree = |a: usize| graph.inverses(a).iter().filter(|b| q.elements.binary_search(b).is_ok()).count();
    let d = degree(q.elements[0]);
    q.elements.iter().all(|&a| degree(a) == d).then_some(d)
}

/// A perfect matching of the two-copy graph on `q` using inverses inside `q`,
/// as pairs `(a, b′)` in global indices.
pub fn q_class_perfect_matching(graph: &InverseGraph, q: &QClass) -> Option<Vec<(usize, usize)>> {
    let local = |b: &usize| q.elements.binary_search(b).ok();
    let adj: Vec<Vec<usize>> = q.elements.iter().map(|&a| graph.inverses(a).iter().filter_map(local).collect()).collect();
    let m = hopcroft_karp(&adj, q.elements.len());
    m.is_perfect().then(|| {
        m.left_to_right
            .iter()
            .enumerate()
            .map(|(i, j)| (q.elements[i], q.elements[j.expect("perfect")]))
            .collect()
    })
}

/// Follows `a₁, b₁′, b₁ = a₂, b₂′, …` around each cycle of the perfect
/// matching. Returns the cycles; successive members are mutual inverses.
pub fn matching_from_q_perfect_matching(q: &QClass, pm: &[(usize, usize)]) -> Result<Vec<Vec<usize>>, TransformError> {
    let mut next: HashMap<usize, usize> = HashMap::new();
    let mut hit: HashMap<usize, bool> = HashMap::new();
    for &(a, b) in pm {
        if q.elements.binary_search(&a).is_err() || q.elements.binary_search(&b).is_err() {
            return Err(TransformError::NotPerfect);
        }
        if next.insert(a, b).is_some() || hit.insert(b, true).is_some() {
            return Err(TransformError::NotPerfect);
        }
    }
    if next.len() != q.elements.len() {
        return Err(TransformError::NotPerfect);
    }
    let mut visited: HashMap<usize, bool> = HashMap::new();
    let mut cycles = Vec::new();
    for &start in &q.elements {
        if visited.contains_key(&start) {
            continue;
        }
        let mut cycle = vec![start];
        visited.insert(start, true);
        let mut a = next[&start];
        while a != start {
            visited.insert(a, true);
            cycle.push(a);
            a = next[&a];
        }
        cycles.push(cycle);
    }
    Ok(cycles)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QClassSummary {
    pub rank: usize,
    pub signature: Vec<usize>,
    pub size: usize,
    pub degree: Option<usize>,
    pub cycles: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QPipelineResult {
    pub matching: PermutationMatching,
    pub classes: Vec<QClassSummary>,
}

/// A permutation matching of `T_n` assembled from cycle-chased perfect
/// matchings of its Q-classes.
pub fn tn_matching_via_q_classes(tm: &TransformationMonoid) -> Result<QPipelineResult, TransformError> {
    if tm.family != Family::Tn {
        return Err(TransformError::NotTn(tm.family));
    }
    let graph = InverseGraph::build(&tm.semigroup)?;
    let mut images = vec![usize::MAX; tm.order()];
    let mut classes = Vec::new();
    for rank in 1..=tm.degree {
        for q in q_class_partition(tm, rank)? {
            let degree = q_class_regular_degree(&graph, &q);
            let pm = q_class_perfect_matching(&graph, &q).ok_or(TransformError::NotPerfect)?;
            let cycles = matching_from_q_perfect_matching(&q, &pm)?;
            for cycle in &cycles {
                for (k, &a) in cycle.iter().enumerate() {
                    images[a] = cycle[(k + 1) % cycle.len()];
                }
            }
            classes.push(QClassSummary {
                rank,
                signature: q.signature.clone(),
                size: q.elements.len(),
                degree,
                cycles: cycles.len(),
            });
        }
    }
    let matching = PermutationMatching::new(images)?;
    if !verify_permutation_matching(&tm.semigroup, matching.images())? {
        return Err(TransformError::NotPerfect);
    }
    Ok(QPipelineResult { matching, classes })
}

/// Whether the subsemigroup on `elems` is an inverse semigroup: regular
/// with commuting idempotents.
fn is_inverse_subsemigroup(s: &FiniteSemigroup, elems: &[usize]) -> bool {
    let idempotents: Vec<usize> = elems.iter().copied().filter(|&e| s.is_idempotent(e)).collect();
    let commute = idempotents
        .iter()
        .all(|&e| idempotents.iter().all(|&f| s.mul(e, f) == s.mul(f, e)));
    commute && elems.iter().all(|&a| elems.iter().any(|&x| s.mul3(a, x, a) == a))
}

/// The subgraph of mutual-inverse pairs `{a, b}` for which `⟨a, b⟩` is an
/// inverse subsemigroup.
pub fn strong_inverse_pairs(s: &FiniteSemigroup, cap: usize) -> Result<InverseGraph, TransformError> {
    if s.order() > cap {
        return Err(TransformError::OverCap { size: s.order(), cap });
    }
    let full = InverseGraph::build(s)?;
    let mut strong: Vec<Vec<usize>> = vec![Vec::new(); s.order()];
    for a in s.elements() {
        for &b in full.inverses(a).iter().filter(|&&b| b >= a) {
            let sub = s.generated_subsemigroup(&[a, b]);
            if is_inverse_subsemigroup(s, &sub) {
                strong[a].push(b);
                if a != b {
                    strong[b].push(a);
                }
            }
        }
    }
    Ok(InverseGraph::from_inverse_sets(strong))
}

/// Number of order-preserving maps of an `n`-chain, counted by a
/// last-value recurrence independent of any enumeration.
pub fn count_order_preserving(n: usize) -> u64 {
    // ways[v]: nondecreasing sequences of the current length ending in v
    let mut ways = vec![1u64; n];
    for _ in 1..n {
        let mut acc = 0;
        for w in ways.iter_mut() {
            acc += *w;
            *w = acc;
        }
    }
    ways.iter().sum()
}
