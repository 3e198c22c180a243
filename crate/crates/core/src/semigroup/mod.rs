//! Finite semigroups given by Cayley table.
//!
//! Elements are the indices `0..n`. The product `a·b` is `table[a][b]`.
//! Labels are cosmetic and never consulted by any algorithm.

mod factor;
pub(crate) mod format;
mod green;
mod report;

pub use factor::{h_quotient, principal_factors, PrincipalFactor};
pub use format::{parse_cayley, write_cayley, ParseError};
pub use green::{DClass, EggBox};
pub use report::{structure_report, StructureReport};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemigroupError {
    #[error("table is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("empty semigroup")]
    Empty,
    #[error("table entry {a}*{b} = {value} is out of range")]
    EntryOutOfRange { a: usize, b: usize, value: usize },
    #[error("product is not associative on ({a}, {b}, {c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("label count {labels} does not match order {order}")]
    LabelCount { labels: usize, order: usize },
    #[error("semigroup is not regular: element {witness} has no inverse")]
    NotRegular { witness: usize },
    #[error("principal factor is not completely 0-simple")]
    NotZeroSimple,
}

/// A finite semigroup stored as a flat row-major Cayley table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSemigroup {
    order: usize,
    table: Vec<u32>,
    labels: Option<Vec<String>>,
}

impl FiniteSemigroup {
    /// Builds a semigroup from table rows and validates it (range and associativity).
    pub fn new(rows: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self, SemigroupError> {
        let s = Self::from_rows(rows, labels)?;
        s.validate()?;
        Ok(s)
    }

    /// Builds a semigroup without the O(n³) associativity check.
    ///
    /// Entries are still range-checked. Intended for tables produced by
    /// composing functions, where associativity holds by construction.
    pub fn from_rows_trusted(rows: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self, SemigroupError> {
        let s = Self::from_rows(rows, labels)?;
        s.check_range()?;
        Ok(s)
    }

    pub(crate) fn from_flat_trusted(order: usize, table: Vec<u32>, labels: Option<Vec<String>>) -> Self {
        debug_assert_eq!(table.len(), order * order);
        debug_assert!(table.iter().all(|&x| (x as usize) < order));
        Self { order, table, labels }
    }

    fn from_rows(rows: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self, SemigroupError> {
        let order = rows.len();
        if order == 0 {
            return Err(SemigroupError::Empty);
        }
        if let Some(l) = &labels {
            if l.len() != order {
                return Err(SemigroupError::LabelCount { labels: l.len(), order });
            }
        }
        let mut table = Vec::with_capacity(order * order);
        for (a, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(SemigroupError::NotSquare { row: a, len: row.len(), expected: order });
            }
            for (b, &v) in row.iter().enumerate() {
                let v = u32::try_from(v).map_err(|_| SemigroupError::EntryOutOfRange { a, b, value: v })?;
                table.push(v);
            }
        }
        Ok(Self { order, table, labels })
    }

    fn check_range(&self) -> Result<(), SemigroupError> {
        let n = self.order;
        for (k, &v) in self.table.iter().enumerate() {
            if v as usize >= n {
                return Err(SemigroupError::EntryOutOfRange { a: k / n, b: k % n, value: v as usize });
            }
        }
        Ok(())
    }

    /// Range check followed by the exhaustive associativity check.
    /// Reports the lexicographically first failing triple.
    pub fn validate(&self) -> Result<(), SemigroupError> {
        self.check_range()?;
        let n = self.order;
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(SemigroupError::NotAssociative { a, b, c });
                    }
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    pub fn mul3(&self, a: usize, b: usize, c: usize) -> usize {
        self.mul(self.mul(a, b), c)
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn row(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        self.table[a * self.order..(a + 1) * self.order].iter().map(|&x| x as usize)
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|a| self.row(a).collect()).collect()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, SemigroupError> {
        if labels.len() != self.order {
            return Err(SemigroupError::LabelCount { labels: labels.len(), order: self.order });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Display name of an element: its label if present, else its index.
    pub fn label(&self, a: usize) -> String {
        match &self.labels {
            Some(l) => l[a].clone(),
            None => a.to_string(),
        }
    }

    pub fn is_idempotent(&self, a: usize) -> bool {
        self.mul(a, a) == a
    }

    pub fn idempotents(&self) -> Vec<usize> {
        self.elements().filter(|&a| self.is_idempotent(a)).collect()
    }

    /// `b ∈ V(a)`: `aba = a` and `bab = b`.
    #[inline]
    pub fn are_mutual_inverses(&self, a: usize, b: usize) -> bool {
        self.mul3(a, b, a) == a && self.mul3(b, a, b) == b
    }

    /// The inverse set `V(a)` in increasing order.
    pub fn inverses_of(&self, a: usize) -> Vec<usize> {
        self.elements().filter(|&b| self.are_mutual_inverses(a, b)).collect()
    }

    /// `V(a)` for every element.
    pub fn inverse_sets(&self) -> Vec<Vec<usize>> {
        self.elements().map(|a| self.inverses_of(a)).collect()
    }

    /// Returns `Err(witness)` with the first element having no inverse.
    ///
    /// `a` is regular iff `axa = a` for some `x`, and then `xax ∈ V(a)`.
    pub fn regularity_check(&self) -> Result<(), usize> {
        for a in self.elements() {
            if !self.elements().any(|x| self.mul3(a, x, a) == a) {
                return Err(a);
            }
        }
        Ok(())
    }

    pub fn is_regular(&self) -> bool {
        self.regularity_check().is_ok()
    }

    pub(crate) fn require_regular(&self) -> Result<(), SemigroupError> {
        self.regularity_check().map_err(|witness| SemigroupError::NotRegular { witness })
    }

    /// The idempotent power `a^ω`.
    pub fn idempotent_power(&self, a: usize) -> usize {
        let mut x = a;
        // a^k for increasing k; the first idempotent power is reached within n steps.
        for _ in 0..=self.order {
            if self.is_idempotent(x) {
                return x;
            }
            x = self.mul(x, a);
        }
        unreachable!("finite semigroup element without idempotent power")
    }

    /// `a` lies in a subgroup iff `a·a^ω = a`.
    pub fn is_group_element(&self, a: usize) -> bool {
        self.mul(a, self.idempotent_power(a)) == a
    }

    /// Closure of `generators` under the product, sorted.
    pub fn generated_subsemigroup(&self, generators: &[usize]) -> Vec<usize> {
        let mut member = vec![false; self.order];
        let mut elems: Vec<usize> = Vec::new();
        for &g in generators {
            if !member[g] {
                member[g] = true;
                elems.push(g);
            }
        }
        let mut i = 0;
        while i < elems.len() {
            let x = elems[i];
            let mut j = 0;
            while j < elems.len() {
                let y = elems[j];
                for p in [self.mul(x, y), self.mul(y, x)] {
                    if !member[p] {
                        member[p] = true;
                        elems.push(p);
                    }
                }
                j += 1;
            }
            i += 1;
        }
        elems.sort_unstable();
        elems
    }

    /// The subsemigroup on a product-closed subset, reindexed in the given order.
    pub fn restrict(&self, subset: &[usize]) -> Option<FiniteSemigroup> {
        let mut index = vec![usize::MAX; self.order];
        for (k, &x) in subset.iter().enumerate() {
            index[x] = k;
        }
        let k = subset.len();
        let mut table = Vec::with_capacity(k * k);
        for &x in subset {
            for &y in subset {
                let p = index[self.mul(x, y)];
                if p == usize::MAX {
                    return None;
                }
                table.push(p as u32);
            }
        }
        let labels = self.labels.as_ref().map(|l| subset.iter().map(|&x| l[x].clone()).collect());
        Some(Self::from_flat_trusted(k, table, labels))
    }

    pub fn green_relations(&self) -> EggBox {
        EggBox::compute(self)
    }
}
