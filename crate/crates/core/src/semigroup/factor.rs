use super::{EggBox, FiniteSemigroup, SemigroupError};
use crate::band::ZeroRectBand;

/// The principal factor `D ∪ {0}` of a D-class, or `D` alone when `D` is
/// the minimal ideal.
///
/// When a zero is adjoined it is index 0 and the members of `D` follow in
/// increasing global order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrincipalFactor {
    pub semigroup: FiniteSemigroup,
    pub source_d_class: usize,
    pub zero_adjoined: bool,
    /// Global elements of the D-class, sorted; `members[k]` is factor index `k + offset`.
    pub members: Vec<usize>,
}

impl PrincipalFactor {
    fn offset(&self) -> usize {
        usize::from(self.zero_adjoined)
    }

    pub fn zero(&self) -> Option<usize> {
        self.zero_adjoined.then_some(0)
    }

    /// Factor index of a global element of the source D-class.
    pub fn factor_index(&self, global: usize) -> Option<usize> {
        self.members.binary_search(&global).ok().map(|k| k + self.offset())
    }

    /// Global element for a nonzero factor index.
    pub fn global(&self, index: usize) -> Option<usize> {
        index.checked_sub(self.offset()).and_then(|k| self.members.get(k).copied())
    }

    /// Nonzero factor indices.
    pub fn nonzero(&self) -> std::ops::Range<usize> {
        self.offset()..self.semigroup.order()
    }
}

fn is_ideal(s: &FiniteSemigroup, eb: &EggBox, d: usize, members: &[usize]) -> bool {
    members
        .iter()
        .all(|&a| s.elements().all(|x| eb.d_class(s.mul(a, x)) == d && eb.d_class(s.mul(x, a)) == d))
}

/// One factor per D-class, in D-class order.
pub fn principal_factors(s: &FiniteSemigroup) -> Result<Vec<PrincipalFactor>, SemigroupError> {
    s.require_regular()?;
    let eb = s.green_relations();
    Ok(eb
        .d_classes()
        .iter()
        .enumerate()
        .map(|(d, class)| build_factor(s, &eb, d, &class.elements))
        .collect())
}

fn build_factor(s: &FiniteSemigroup, eb: &EggBox, d: usize, members: &[usize]) -> PrincipalFactor {
    let zero_adjoined = !is_ideal(s, eb, d, members);
    let offset = usize::from(zero_adjoined);
    let k = members.len() + offset;
    let mut table = Vec::with_capacity(k * k);
    if zero_adjoined {
        table.extend(std::iter::repeat_n(0u32, k));
    }
    for &a in members {
        if zero_adjoined {
            table.push(0);
        }
        for &b in members {
            let p = s.mul(a, b);
            let idx = if eb.d_class(p) == d {
                members.binary_search(&p).unwrap() + offset
            } else {
                0
            };
            table.push(idx as u32);
        }
    }
    let labels = s.labels().map(|l| {
        let mut out: Vec<String> = Vec::with_capacity(k);
        if zero_adjoined {
            out.push("0".to_string());
        }
        out.extend(members.iter().map(|&a| l[a].clone()));
        out
    });
    PrincipalFactor {
        semigroup: FiniteSemigroup::from_flat_trusted(k, table, labels),
        source_d_class: d,
        zero_adjoined,
        members: members.to_vec(),
    }
}

/// The H-quotient of a completely (0-)simple factor as an idempotent pattern.
///
/// A zero-free factor (completely simple) yields the all-true pattern.
pub fn h_quotient(factor: &PrincipalFactor) -> Result<ZeroRectBand, SemigroupError> {
    let eb = factor.semigroup.green_relations();
    let nonzero: Vec<&super::DClass> = eb
        .d_classes()
        .iter()
        .filter(|d| !(factor.zero_adjoined && d.elements == [0]))
        .collect();
    let [d] = nonzero.as_slice() else {
        return Err(SemigroupError::NotZeroSimple);
    };
    ZeroRectBand::new(d.group.clone()).map_err(|_| SemigroupError::NotZeroSimple)
}
