//! Exhaustive reference checks.
//!
//! Everything here works from the definitions (products in the Cayley table,
//! explicit subset scans, backtracking) and shares no code with the graph
//! algorithms, so the two can be compared.

use crate::band::ZeroRectBand;
use crate::semigroup::FiniteSemigroup;

fn inverse_lists(s: &FiniteSemigroup) -> Vec<Vec<usize>> {
    let n = s.order();
    (0..n)
        .map(|a| (0..n).filter(|&b| s.mul3(a, b, a) == a && s.mul3(b, a, b) == b).collect())
        .collect()
}

/// Hall condition `|A| ≤ |V(A)|` over all subsets. Returns the first
/// violating subset in increasing bitmask order.
pub fn hall_subset_scan(s: &FiniteSemigroup) -> Result<(), Vec<usize>> {
    let n = s.order();
    assert!(n <= 24, "subset scan limited to 24 elements");
    let inv = inverse_lists(s);
    let masks: Vec<u32> = inv.iter().map(|l| l.iter().fold(0u32, |m, &b| m | 1 << b)).collect();
    for subset in 1u32..1 << n {
        let mut image = 0u32;
        let mut rest = subset;
        while rest != 0 {
            image |= masks[rest.trailing_zeros() as usize];
            rest &= rest - 1;
        }
        if image.count_ones() < subset.count_ones() {
            return Err((0..n).filter(|&a| subset >> a & 1 == 1).collect());
        }
    }
    Ok(())
}

/// A permutation matching by backtracking over elements in index order.
pub fn permutation_backtracking(s: &FiniteSemigroup) -> Option<Vec<usize>> {
    fn go(a: usize, inv: &[Vec<usize>], used: &mut [bool], p: &mut Vec<usize>) -> bool {
        if a == inv.len() {
            return true;
        }
        for &b in &inv[a] {
            if !used[b] {
                used[b] = true;
                p.push(b);
                if go(a + 1, inv, used, p) {
                    return true;
                }
                p.pop();
                used[b] = false;
            }
        }
        false
    }
    let inv = inverse_lists(s);
    let mut p = Vec::with_capacity(s.order());
    go(0, &inv, &mut vec![false; s.order()], &mut p).then_some(p)
}

/// An involution matching by backtracking: the least unassigned element is
/// either fixed (when `a ∈ V(a)`) or paired with an unassigned inverse.
pub fn involution_backtracking(s: &FiniteSemigroup) -> Option<Vec<usize>> {
    fn go(inv: &[Vec<usize>], p: &mut [Option<usize>]) -> bool {
        let Some(a) = p.iter().position(Option::is_none) else {
            return true;
        };
        for &b in &inv[a] {
            if p[b].is_none() {
                p[a] = Some(b);
                p[b] = Some(a);
                if go(inv, p) {
                    return true;
                }
                p[a] = None;
                p[b] = None;
            }
        }
        false
    }
    let inv = inverse_lists(s);
    let mut p = vec![None; s.order()];
    go(&inv, &mut p).then(|| p.into_iter().map(|x| x.expect("complete")).collect())
}

/// Both counting inequalities for `a = n / m` by scanning every row subset
/// and every column subset.
pub fn row_column_subset_scan(b: &ZeroRectBand) -> Option<bool> {
    let (m, n) = (b.rows(), b.cols());
    if n % m != 0 || n > 24 {
        return None;
    }
    let a = n / m;
    let rows_ok = (1u32..1 << m).all(|t| {
        let rows: Vec<usize> = (0..m).filter(|&i| t >> i & 1 == 1).collect();
        let met = (0..n).filter(|&j| rows.iter().any(|&i| b.is_idempotent(i, j))).count();
        met >= a * rows.len()
    });
    let cols_ok = (1u32..1 << n).all(|t| {
        let cols: Vec<usize> = (0..n).filter(|&j| t >> j & 1 == 1).collect();
        let met = (0..m).filter(|&i| cols.iter().any(|&j| b.is_idempotent(i, j))).count();
        met * a >= cols.len()
    });
    Some(rows_ok && cols_ok)
}

/// Green's R, L and D by direct comparison of principal ideals as sets.
/// Returns `(r, l, d)` with `r[a][b]` iff `a R b`, and so on.
#[allow(clippy::type_complexity)]
pub fn green_naive(s: &FiniteSemigroup) -> (Vec<Vec<bool>>, Vec<Vec<bool>>, Vec<Vec<bool>>) {
    use std::collections::BTreeSet;
    let n = s.order();
    let right: Vec<BTreeSet<usize>> = (0..n)
        .map(|a| std::iter::once(a).chain((0..n).map(|x| s.mul(a, x))).collect())
        .collect();
    let left: Vec<BTreeSet<usize>> = (0..n)
        .map(|a| std::iter::once(a).chain((0..n).map(|x| s.mul(x, a))).collect())
        .collect();
    let r: Vec<Vec<bool>> = (0..n).map(|a| (0..n).map(|b| right[a] == right[b]).collect()).collect();
    let l: Vec<Vec<bool>> = (0..n).map(|a| (0..n).map(|b| left[a] == left[b]).collect()).collect();
    let d = (0..n).map(|a| (0..n).map(|b| (0..n).any(|c| r[a][c] && l[c][b])).collect()).collect();
    (r, l, d)
}
