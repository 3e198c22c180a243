//! 0-rectangular bands given by their idempotent pattern.
//!
//! The nonzero elements are pairs `(i, j)` with `0 ≤ i < m`, `0 ≤ j < n`, and
//! `(i, j)(k, l) = (i, l)` when `E[k][j]`, otherwise `0`. In the semigroup
//! realization the zero is index 0 and `(i, j)` is index `1 + i·n + j`.
//! Display labels use 1-based coordinates, `(1,1)` for index 1.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::bipartite::hopcroft_karp;
use crate::graph::flow::FlowNetwork;
use crate::matching::{self, InvolutionMatching, PermutationMatching};
use crate::semigroup::format::{content_lines, syntax};
use crate::semigroup::{structure_report, FiniteSemigroup, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BandError {
    #[error("band must have at least one row and one column")]
    Empty,
    #[error("pattern row {row} has {len} entries, expected {expected}")]
    Ragged { row: usize, len: usize, expected: usize },
    #[error("idempotent pattern has empty rows {rows:?} or columns {cols:?}")]
    NotRegularPattern { rows: Vec<usize>, cols: Vec<usize> },
    #[error("row count {m} does not divide column count {n}")]
    NotDivisible { m: usize, n: usize },
    #[error("band is not orthodox")]
    NotOrthodox,
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
}

/// A regular 0-rectangular band: every row and column of `E` has a true entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ZeroRectBand {
    rows: usize,
    cols: usize,
    pattern: Vec<Vec<bool>>,
}

/// The 7-element orthodox 0-rectangular band with no permutation matching.
///
/// In 1-based coordinates its idempotents are `(1,2)`, `(1,3)`, `(2,1)`;
/// `(2,2)` and `(2,3)` share the single inverse `(1,1)`.
pub fn builtin_b7() -> ZeroRectBand {
    ZeroRectBand::new(vec![vec![false, true, true], vec![true, false, false]]).expect("B7 pattern is regular")
}

impl ZeroRectBand {
    pub fn new(pattern: Vec<Vec<bool>>) -> Result<Self, BandError> {
        let rows = pattern.len();
        let cols = pattern.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 {
            return Err(BandError::Empty);
        }
        for (row, r) in pattern.iter().enumerate() {
            if r.len() != cols {
                return Err(BandError::Ragged { row, len: r.len(), expected: cols });
            }
        }
        let empty_rows: Vec<usize> = (0..rows).filter(|&i| !pattern[i].iter().any(|&e| e)).collect();
        let empty_cols: Vec<usize> = (0..cols).filter(|&j| !pattern.iter().any(|r| r[j])).collect();
        if !empty_rows.is_empty() || !empty_cols.is_empty() {
            return Err(BandError::NotRegularPattern { rows: empty_rows, cols: empty_cols });
        }
        Ok(Self { rows, cols, pattern })
    }

    pub fn full(rows: usize, cols: usize) -> Result<Self, BandError> {
        Self::new(vec![vec![true; cols]; rows])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn pattern(&self) -> &[Vec<bool>] {
        &self.pattern
    }

    #[inline]
    pub fn is_idempotent(&self, i: usize, j: usize) -> bool {
        self.pattern[i][j]
    }

    /// `n / m` when `m` divides `n`.
    pub fn aspect_ratio(&self) -> Option<usize> {
        self.cols.is_multiple_of(self.rows).then_some(self.cols / self.rows)
    }

    fn require_ratio(&self) -> Result<usize, BandError> {
        self.aspect_ratio().ok_or(BandError::NotDivisible { m: self.rows, n: self.cols })
    }

    /// Number of elements including the zero.
    pub fn order(&self) -> usize {
        self.rows * self.cols + 1
    }

    pub fn element(&self, i: usize, j: usize) -> usize {
        1 + i * self.cols + j
    }

    /// Coordinates of a nonzero element index.
    pub fn coords(&self, x: usize) -> Option<(usize, usize)> {
        (x >= 1 && x < self.order()).then(|| ((x - 1) / self.cols, (x - 1) % self.cols))
    }

    pub fn product(&self, x: usize, y: usize) -> usize {
        match (self.coords(x), self.coords(y)) {
            (Some((i, j)), Some((k, l))) if self.pattern[k][j] => self.element(i, l),
            _ => 0,
        }
    }

    pub fn to_semigroup(&self) -> FiniteSemigroup {
        let n = self.order();
        let table: Vec<u32> = (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .map(|(x, y)| self.product(x, y) as u32)
            .collect();
        let labels = (0..n)
            .map(|x| match self.coords(x) {
                Some((i, j)) => format!("({},{})", i + 1, j + 1),
                None => "0".to_string(),
            })
            .collect();
        FiniteSemigroup::from_flat_trusted(n, table, Some(labels))
    }

    /// `(i,j)` and `(k,l)` are mutually inverse iff `E[k][j]` and `E[i][l]`.
    pub fn mutual_inverses(&self, x: (usize, usize), y: (usize, usize)) -> bool {
        let ((i, j), (k, l)) = (x, y);
        self.pattern[k][j] && self.pattern[i][l]
    }

    /// Transposed pattern (the dual band).
    pub fn transpose(&self) -> Self {
        let pattern = (0..self.cols).map(|j| (0..self.rows).map(|i| self.pattern[i][j]).collect()).collect();
        Self { rows: self.cols, cols: self.rows, pattern }
    }

    /// Row and column counting condition for `a = n / m`: every set `T` of rows
    /// meets at least `a·|T|` columns through idempotents, and every set of
    /// columns meets at least `|T| / a` rows.
    ///
    /// Decided by max-flow with row capacity `a` and column capacity 1. A
    /// saturating flow gives both inequalities; otherwise the source side of
    /// a minimum cut is a violating row set.
    pub fn row_column_condition(&self) -> Result<RowColumnOutcome, BandError> {
        let a = self.require_ratio()?;
        let (m, n) = (self.rows, self.cols);
        let (source, sink) = (m + n, m + n + 1);
        let mut net = FlowNetwork::new(m + n + 2);
        for i in 0..m {
            net.add_edge(source, i, a as u64);
            for j in 0..n {
                if self.pattern[i][j] {
                    net.add_edge(i, m + j, 1);
                }
            }
        }
        for j in 0..n {
            net.add_edge(m + j, sink, 1);
        }
        if net.max_flow(source, sink) == n as u64 {
            return Ok(RowColumnOutcome { holds: true, violation: None });
        }
        let reach = net.residual_reach(source);
        let rows: Vec<usize> = (0..m).filter(|&i| reach[i]).collect();
        let columns = self.columns_met(&rows);
        debug_assert!(columns.len() < a * rows.len());
        Ok(RowColumnOutcome { holds: false, violation: Some(RowColumnViolation::Rows { rows, columns }) })
    }

    /// Columns meeting any of `rows` in an idempotent.
    pub fn columns_met(&self, rows: &[usize]) -> Vec<usize> {
        (0..self.cols).filter(|&j| rows.iter().any(|&i| self.pattern[i][j])).collect()
    }

    /// Rows meeting any of `cols` in an idempotent.
    pub fn rows_met(&self, cols: &[usize]) -> Vec<usize> {
        (0..self.rows).filter(|&i| cols.iter().any(|&j| self.pattern[i][j])).collect()
    }

    /// A family of `a` injections rows → columns with disjoint ranges covering
    /// every column, each sending a row to an idempotent position.
    ///
    /// Row copies are matched to columns in slot-major order with lowest-index
    /// tie-breaking; each row's columns are then dealt to slots in increasing
    /// column order.
    pub fn harem_functions(&self) -> Result<Option<HaremFamily>, BandError> {
        let a = self.require_ratio()?;
        let m = self.rows;
        let adj: Vec<Vec<usize>> = (0..a * m)
            .map(|copy| {
                let i = copy % m;
                (0..self.cols).filter(|&j| self.pattern[i][j]).collect()
            })
            .collect();
        let matching = hopcroft_karp(&adj, self.cols);
        if !matching.is_perfect() {
            return Ok(None);
        }
        let mut per_row: Vec<Vec<usize>> = vec![Vec::with_capacity(a); m];
        for (copy, col) in matching.left_to_right.iter().enumerate() {
            per_row[copy % m].push(col.expect("perfect matching"));
        }
        per_row.iter_mut().for_each(|c| c.sort_unstable());
        let maps: Vec<Vec<usize>> = (0..a).map(|t| (0..m).map(|i| per_row[i][t]).collect()).collect();
        Ok(Some(HaremFamily::new(m, self.cols, maps)))
    }

    /// The involution `(i, j) ↦ (π_t⁻¹(j), π_t(i))` where `j` lies in the
    /// range of `π_t`, with `0 ↦ 0`. Output is in original coordinates.
    pub fn harem_involution(&self) -> Result<Option<HaremInvolution>, BandError> {
        let Some(harem) = self.harem_functions()? else {
            return Ok(None);
        };
        let m = self.rows;
        let mut images = vec![0; self.order()];
        for i in 0..m {
            for j in 0..self.cols {
                let label = harem.column_label[j];
                let (t, r) = (label / m, label % m);
                debug_assert_eq!(harem.maps[t][r], j);
                images[self.element(i, j)] = self.element(r, harem.maps[t][i]);
            }
        }
        let matching = InvolutionMatching::from_images_unchecked(images);
        Ok(Some(HaremInvolution { column_relabel: harem.column_label.clone(), harem, matching }))
    }

    /// Blocks of an orthodox pattern and whether their column/row ratios agree.
    pub fn similarity_check(&self) -> Result<SimilarityReport, BandError> {
        let s = self.to_semigroup();
        if !structure_report(&s).orthodox {
            return Err(BandError::NotOrthodox);
        }
        let blocks = self.blocks();
        let (r0, c0) = (blocks[0].rows.len(), blocks[0].cols.len());
        let similar = blocks.iter().all(|b| b.cols.len() * r0 == c0 * b.rows.len());
        let matching_exists = matching::find_permutation_matching(&s)
            .expect("band semigroups are regular")
            .is_some();
        Ok(SimilarityReport { blocks, similar, matching_exists, agrees: similar == matching_exists })
    }

    /// Connected components of the row/column idempotent incidence, ordered
    /// by least row.
    pub fn blocks(&self) -> Vec<Block> {
        let mut row_block = vec![usize::MAX; self.rows];
        let mut col_block = vec![usize::MAX; self.cols];
        let mut blocks = Vec::new();
        for start in 0..self.rows {
            if row_block[start] != usize::MAX {
                continue;
            }
            let id = blocks.len();
            let mut block = Block { rows: vec![start], cols: Vec::new() };
            row_block[start] = id;
            let mut frontier = vec![start];
            while let Some(i) = frontier.pop() {
                for j in 0..self.cols {
                    if self.pattern[i][j] && col_block[j] == usize::MAX {
                        col_block[j] = id;
                        block.cols.push(j);
                        for k in 0..self.rows {
                            if self.pattern[k][j] && row_block[k] == usize::MAX {
                                row_block[k] = id;
                                block.rows.push(k);
                                frontier.push(k);
                            }
                        }
                    }
                }
            }
            block.rows.sort_unstable();
            block.cols.sort_unstable();
            blocks.push(block);
        }
        blocks
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowColumnOutcome {
    pub holds: bool,
    pub violation: Option<RowColumnViolation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum RowColumnViolation {
    /// Rows meeting fewer than `a·|rows|` columns.
    Rows { rows: Vec<usize>, columns: Vec<usize> },
    /// Columns meeting fewer than `|columns| / a` rows.
    Columns { columns: Vec<usize>, rows: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HaremFamily {
    pub rows: usize,
    pub cols: usize,
    /// `maps[t][i] = π_t(i)`.
    pub maps: Vec<Vec<usize>>,
    /// Column `π_t(i)` is labelled `t·m + i`.
    pub column_label: Vec<usize>,
}

impl HaremFamily {
    fn new(rows: usize, cols: usize, maps: Vec<Vec<usize>>) -> Self {
        let mut column_label = vec![usize::MAX; cols];
        for (t, map) in maps.iter().enumerate() {
            for (i, &j) in map.iter().enumerate() {
                column_label[j] = t * rows + i;
            }
        }
        Self { rows, cols, maps, column_label }
    }

    /// Disjoint ranges covering all columns, injective maps, idempotent positions.
    pub fn is_valid_for(&self, band: &ZeroRectBand) -> bool {
        let mut hit = vec![false; self.cols];
        for map in &self.maps {
            if map.len() != self.rows {
                return false;
            }
            for (i, &j) in map.iter().enumerate() {
                if j >= self.cols || hit[j] || !band.is_idempotent(i, j) {
                    return false;
                }
                hit[j] = true;
            }
        }
        hit.iter().all(|&h| h) && self.maps.len() * self.rows == self.cols
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HaremInvolution {
    pub harem: HaremFamily,
    /// Original column → relabelled column `t·m + r`.
    pub column_relabel: Vec<usize>,
    pub matching: InvolutionMatching,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimilarityReport {
    pub blocks: Vec<Block>,
    pub similar: bool,
    pub matching_exists: bool,
    pub agrees: bool,
}

/// Seeded random regular pattern; resamples until every row and column is nonempty.
pub fn random_band(rows: usize, cols: usize, density: f64, seed: u64) -> Result<ZeroRectBand, BandError> {
    if rows == 0 || cols == 0 {
        return Err(BandError::ParameterOutOfRange(format!("dimensions {rows}x{cols}")));
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(BandError::ParameterOutOfRange(format!("density {density} not in (0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    const ATTEMPTS: usize = 1 << 20;
    for _ in 0..ATTEMPTS {
        let pattern: Vec<Vec<bool>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_bool(density)).collect()).collect();
        if let Ok(b) = ZeroRectBand::new(pattern) {
            return Ok(b);
        }
    }
    Err(BandError::ParameterOutOfRange(format!(
        "density {density} too low to sample a regular {rows}x{cols} pattern"
    )))
}

/// Every regular `rows × cols` pattern, in increasing bitmask order
/// (bit `i·cols + j` is `E[i][j]`).
pub fn all_regular_bands(rows: usize, cols: usize) -> impl Iterator<Item = ZeroRectBand> {
    assert!(rows * cols < 32, "exhaustive enumeration is limited to fewer than 32 cells");
    (0u32..1 << (rows * cols)).filter_map(move |mask| {
        let pattern = (0..rows)
            .map(|i| (0..cols).map(|j| mask >> (i * cols + j) & 1 == 1).collect())
            .collect();
        ZeroRectBand::new(pattern).ok()
    })
}

/// Band text format: `m n`, then `m` lines of `n` characters `0`/`1`.
pub fn parse_band(text: &str) -> Result<ZeroRectBand, ParseError> {
    let mut lines = content_lines(text);
    let (l0, header) = lines.next().ok_or_else(|| ParseError::Truncated("missing `m n` line".into()))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| syntax(l0, format!("bad dimension {t:?}"))))
        .collect::<Result<_, _>>()?;
    let [m, n] = dims[..] else {
        return Err(syntax(l0, "first line must be `m n`"));
    };
    let mut pattern = Vec::with_capacity(m);
    for (ln, line) in lines {
        if line.starts_with('#') {
            continue;
        }
        if pattern.len() == m {
            return Err(syntax(ln, "extra pattern row"));
        }
        let row: Vec<bool> = line
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(syntax(ln, format!("unexpected character {other:?}"))),
            })
            .collect::<Result<_, _>>()?;
        if row.len() != n {
            return Err(syntax(ln, format!("expected {n} cells, got {}", row.len())));
        }
        pattern.push(row);
    }
    if pattern.len() != m {
        return Err(ParseError::Truncated(format!("expected {m} pattern rows, got {}", pattern.len())));
    }
    Ok(ZeroRectBand::new(pattern)?)
}

pub fn write_band(b: &ZeroRectBand) -> String {
    let mut out = format!("{} {}\n", b.rows, b.cols);
    for row in &b.pattern {
        out.extend(row.iter().map(|&e| if e { '1' } else { '0' }));
        out.push('\n');
    }
    out
}

/// Convenience: a permutation matching of the band semigroup, if any.
pub fn band_matching(b: &ZeroRectBand) -> Option<PermutationMatching> {
    matching::find_permutation_matching(&b.to_semigroup()).expect("band semigroups are regular")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::{verify_involution_matching, verify_permutation_matching};

    #[test]
    fn b7_shape() {
        let b = builtin_b7();
        let s = b.to_semigroup();
        assert_eq!(s.order(), 7);
        s.validate().unwrap();
        assert!(s.is_regular());
        assert_eq!(s.label(b.element(1, 1)), "(2,2)");
    }

    #[test]
    fn b7_inverse_of_2_2_is_only_1_1() {
        let b = builtin_b7();
        assert!(b.mutual_inverses((1, 1), (0, 0)));
        assert!(!b.mutual_inverses((1, 1), (0, 1)));
        let s = b.to_semigroup();
        assert_eq!(s.inverses_of(b.element(1, 1)), vec![b.element(0, 0)]);
        assert_eq!(s.inverses_of(b.element(1, 2)), vec![b.element(0, 0)]);
    }

    #[test]
    fn one_by_one_band_is_two_element_semilattice() {
        let s = ZeroRectBand::full(1, 1).unwrap().to_semigroup();
        assert_eq!(s.rows(), vec![vec![0, 0], vec![0, 1]]);
    }

    #[test]
    fn full_two_by_two_is_all_idempotent() {
        let s = ZeroRectBand::full(2, 2).unwrap().to_semigroup();
        assert_eq!(s.order(), 5);
        assert_eq!(s.idempotents().len(), 5);
    }

    #[test]
    fn irregular_pattern_rejected() {
        let err = ZeroRectBand::new(vec![vec![true, true, true, true], vec![false; 4]]).unwrap_err();
        assert_eq!(err, BandError::NotRegularPattern { rows: vec![1], cols: vec![] });
    }

    #[test]
    fn row_column_full_pattern_holds() {
        assert!(ZeroRectBand::full(2, 4).unwrap().row_column_condition().unwrap().holds);
        assert_eq!(
            builtin_b7().row_column_condition().unwrap_err(),
            BandError::NotDivisible { m: 2, n: 3 }
        );
    }

    #[test]
    fn row_column_violation_is_certified() {
        // row 1 only meets column 0, so it cannot take two columns
        let b = ZeroRectBand::new(vec![vec![true, true, true, true], vec![true, false, false, false]]).unwrap();
        let out = b.row_column_condition().unwrap();
        assert!(!out.holds);
        let Some(RowColumnViolation::Rows { rows, columns }) = out.violation else { panic!() };
        assert!(columns.len() < 2 * rows.len());
        assert_eq!(columns, b.columns_met(&rows));
    }

    #[test]
    fn harem_of_full_two_by_four() {
        let h = ZeroRectBand::full(2, 4).unwrap().harem_functions().unwrap().unwrap();
        assert_eq!(h.maps, vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn harem_right_zero_case() {
        let b = ZeroRectBand::full(1, 5).unwrap();
        let h = b.harem_functions().unwrap().unwrap();
        assert_eq!(h.maps, (0..5).map(|t| vec![t]).collect::<Vec<_>>());
        assert!(h.is_valid_for(&b));
    }

    #[test]
    fn square_full_band_gives_transpose() {
        let b = ZeroRectBand::full(3, 3).unwrap();
        let inv = b.harem_involution().unwrap().unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(inv.matching.images()[b.element(i, j)], b.element(j, i));
            }
        }
    }

    #[test]
    fn prop23_on_two_by_four_verifies() {
        let b = ZeroRectBand::full(2, 4).unwrap();
        let s = b.to_semigroup();
        let inv = b.harem_involution().unwrap().unwrap();
        assert!(verify_permutation_matching(&s, inv.matching.images()).unwrap());
        assert!(verify_involution_matching(&s, inv.matching.images()).unwrap());
        for x in 1..s.order() {
            let y = inv.matching.images()[x];
            assert!(b.mutual_inverses(b.coords(x).unwrap(), b.coords(y).unwrap()));
        }
    }

    #[test]
    fn b7_not_similar() {
        let r = builtin_b7().similarity_check().unwrap();
        assert!(!r.similar && !r.matching_exists && r.agrees);
        assert_eq!(r.blocks.len(), 2);
    }

    #[test]
    fn block_diagonal_similar() {
        let b = ZeroRectBand::new(vec![vec![true, true, false, false], vec![false, false, true, true]]).unwrap();
        let r = b.similarity_check().unwrap();
        assert!(r.similar && r.matching_exists);
    }

    #[test]
    fn similarity_requires_orthodox() {
        // (0,0),(0,1),(1,1) idempotent but (1,0) not: not a union of rectangles
        let b = ZeroRectBand::new(vec![vec![true, true], vec![false, true]]).unwrap();
        assert_eq!(b.similarity_check().unwrap_err(), BandError::NotOrthodox);
    }

    #[test]
    fn random_band_is_deterministic() {
        assert_eq!(random_band(2, 4, 0.5, 42).unwrap(), random_band(2, 4, 0.5, 42).unwrap());
        assert_eq!(random_band(2, 2, 1.0, 9).unwrap(), ZeroRectBand::full(2, 2).unwrap());
        assert!(random_band(2, 2, 0.0, 1).is_err());
    }

    #[test]
    fn band_text_round_trip() {
        let b = builtin_b7();
        assert_eq!(write_band(&b), "2 3\n011\n100\n");
        assert_eq!(parse_band(&write_band(&b)).unwrap(), b);
    }

    #[test]
    fn regular_pattern_count_two_by_two() {
        // patterns with no empty row/column: 7 of 16
        assert_eq!(all_regular_bands(2, 2).count(), 7);
    }
}
