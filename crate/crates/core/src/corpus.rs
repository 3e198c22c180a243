//! Seeded random regular semigroups for cross-checking.
//!
//! Each entry is a pure function of its seed, so a corpus run can be
//! reproduced entry by entry.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::band::random_band;
use crate::semigroup::FiniteSemigroup;
use crate::transform::Transformation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CorpusKind {
    Band,
    ReesMatrix,
    Brandt,
    Transformations,
    Semilattice,
    Group,
    Clifford,
    WithIdentity,
    WithZero,
}

const KINDS: [CorpusKind; 9] = [
    CorpusKind::Band,
    CorpusKind::ReesMatrix,
    CorpusKind::Brandt,
    CorpusKind::Transformations,
    CorpusKind::Semilattice,
    CorpusKind::Group,
    CorpusKind::Clifford,
    CorpusKind::WithIdentity,
    CorpusKind::WithZero,
];

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub seed: u64,
    pub kind: CorpusKind,
    pub description: String,
    pub semigroup: FiniteSemigroup,
}

/// `count` entries with seeds `base, base + 1, …`, each of order at most
/// `max_order` (which must be at least 2).
pub fn corpus(count: usize, base: u64, max_order: usize) -> Vec<CorpusEntry> {
    (0..count as u64).map(|k| corpus_entry(base + k, max_order)).collect()
}

/// The entry for one seed. Always regular and of order `≤ max_order`.
pub fn corpus_entry(seed: u64, max_order: usize) -> CorpusEntry {
    assert!(max_order >= 2, "corpus needs room for at least two elements");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kind = *KINDS.choose(&mut rng).expect("nonempty");
    let (description, semigroup) = build(kind, &mut rng, max_order);
    debug_assert!(semigroup.is_regular() && semigroup.order() <= max_order, "{description}");
    CorpusEntry { seed, kind, description, semigroup }
}

fn build(kind: CorpusKind, rng: &mut ChaCha8Rng, max: usize) -> (String, FiniteSemigroup) {
    match kind {
        CorpusKind::Band if max >= 3 => {
            let (m, n) = loop {
                let m = rng.gen_range(1..=3);
                let n = rng.gen_range(1..=4);
                if m * n < max {
                    break (m, n);
                }
            };
            let density = [0.3, 0.5, 0.7, 0.9][rng.gen_range(0..4)];
            let b = random_band(m, n, density, rng.gen()).expect("parameters in range");
            (format!("0-rectangular band {m}x{n}"), b.to_semigroup())
        }
        CorpusKind::ReesMatrix if max >= 3 => {
            let (m, n, k) = loop {
                let (m, n, k) = (rng.gen_range(1..=3), rng.gen_range(1..=3), rng.gen_range(1..=3));
                if m * n * k < max {
                    break (m, n, k);
                }
            };
            let p = random_sandwich(rng, m, n, k);
            (format!("Rees matrix {m}x{n} over Z_{k}"), rees_matrix(m, n, k, &p))
        }
        CorpusKind::Brandt if max >= 5 => {
            let options: Vec<(usize, usize)> =
                [(1, 1), (1, 2), (2, 1), (2, 2), (3, 1)].into_iter().filter(|&(m, k)| m * m * k < max).collect();
            let &(m, k) = options.choose(rng).expect("B_2 fits");
            let p: Vec<Vec<Option<usize>>> =
                (0..m).map(|l| (0..m).map(|i| (l == i).then_some(0)).collect()).collect();
            (format!("Brandt B_{m} over Z_{k}"), rees_matrix(m, m, k, &p))
        }
        CorpusKind::Transformations => {
            for _ in 0..64 {
                let degree = rng.gen_range(2..=4);
                let gens: Vec<Transformation> = (0..rng.gen_range(1..=3))
                    .map(|_| Transformation::new((0..degree).map(|_| rng.gen_range(0..degree as u8)).collect()))
                    .collect();
                if let Some(s) = transformation_closure(&gens, max) {
                    if s.is_regular() {
                        let names: Vec<String> = gens.iter().map(ToString::to_string).collect();
                        return (format!("<{}> in T_{degree}", names.join(", ")), s);
                    }
                }
            }
            build(CorpusKind::Semilattice, rng, max)
        }
        CorpusKind::Semilattice => {
            let size = rng.gen_range(1..=max.min(12));
            let s = random_semilattice(rng, size);
            (format!("semilattice of order {}", s.order()), s)
        }
        CorpusKind::Group => {
            let k = rng.gen_range(1..=max.min(12));
            match rng.gen_range(0..3) {
                0 if max >= 6 => (String::from("S_3"), permutation_group(&[vec![1, 2, 0], vec![1, 0, 2]])),
                1 if max >= 8 => (String::from("D_4"), permutation_group(&[vec![1, 2, 3, 0], vec![0, 3, 2, 1]])),
                _ => (format!("Z_{k}"), cyclic_group(k)),
            }
        }
        CorpusKind::Clifford if max >= 4 => {
            let (l, k) = loop {
                let (l, k) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
                if l * k <= max {
                    break (l, k);
                }
            };
            let s = direct_product(&random_semilattice(rng, l), &cyclic_group(k));
            (format!("semilattice of order {} times Z_{k}", s.order() / k), s)
        }
        CorpusKind::WithIdentity | CorpusKind::WithZero => {
            let inner_kind = *KINDS[..7].choose(rng).expect("nonempty");
            let (inner, base) = build(inner_kind, rng, max - 1);
            if kind == CorpusKind::WithIdentity {
                (format!("({inner}) with identity"), adjoin(&base, true))
            } else {
                (format!("({inner}) with zero"), adjoin(&base, false))
            }
        }
        _ => build(CorpusKind::Group, rng, max),
    }
}

/// Sandwich matrix `P` (`n` rows by `m` columns) over `Z_k ∪ {0}` with no
/// zero row or column.
fn random_sandwich(rng: &mut ChaCha8Rng, m: usize, n: usize, k: usize) -> Vec<Vec<Option<usize>>> {
    loop {
        let p: Vec<Vec<Option<usize>>> = (0..n)
            .map(|_| (0..m).map(|_| rng.gen_bool(0.6).then(|| rng.gen_range(0..k))).collect())
            .collect();
        let rows_ok = p.iter().all(|r| r.iter().any(Option::is_some));
        let cols_ok = (0..m).all(|i| p.iter().any(|r| r[i].is_some()));
        if rows_ok && cols_ok {
            return p;
        }
    }
}

/// `M⁰[Z_k; m, n; P]`: zero at index 0, `(i, g, λ)` at `1 + (i·k + g)·n + λ`,
/// with `(i, g, λ)(j, h, μ) = (i, g + p[λ][j] + h, μ)` or zero.
pub fn rees_matrix(m: usize, n: usize, k: usize, p: &[Vec<Option<usize>>]) -> FiniteSemigroup {
    let size = 1 + m * n * k;
    let decode = |x: usize| {
        let x = x - 1;
        (x / (k * n), x / n % k, x % n)
    };
    let rows = (0..size)
        .map(|x| {
            (0..size)
                .map(|y| {
                    if x == 0 || y == 0 {
                        return 0;
                    }
                    let ((i, g, l), (j, h, mu)) = (decode(x), decode(y));
                    match p[l][j] {
                        Some(c) => 1 + (i * k + (g + c + h) % k) * n + mu,
                        None => 0,
                    }
                })
                .collect()
        })
        .collect();
    FiniteSemigroup::new(rows, None).expect("Rees matrix product is associative")
}

pub fn cyclic_group(k: usize) -> FiniteSemigroup {
    let rows = (0..k).map(|a| (0..k).map(|b| (a + b) % k).collect()).collect();
    FiniteSemigroup::new(rows, None).expect("addition mod k is associative")
}

fn permutation_group(generators: &[Vec<u8>]) -> FiniteSemigroup {
    let gens: Vec<Transformation> = generators.iter().cloned().map(Transformation::new).collect();
    transformation_closure(&gens, usize::MAX).expect("finite")
}

/// The subsemigroup of a full transformation monoid generated by `gens`,
/// or `None` once it exceeds `max` elements.
fn transformation_closure(gens: &[Transformation], max: usize) -> Option<FiniteSemigroup> {
    let mut elems: Vec<Transformation> = gens.to_vec();
    elems.sort();
    elems.dedup();
    let mut frontier = elems.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for a in &frontier {
            for g in gens {
                let c = a.then(g);
                if let Err(pos) = elems.binary_search(&c) {
                    elems.insert(pos, c.clone());
                    next.push(c);
                    if elems.len() > max {
                        return None;
                    }
                }
            }
        }
        frontier = next;
    }
    let rows = elems
        .iter()
        .map(|a| elems.iter().map(|b| elems.binary_search(&a.then(b)).expect("closed")).collect())
        .collect();
    let labels = elems.iter().map(ToString::to_string).collect();
    Some(FiniteSemigroup::new(rows, Some(labels)).expect("composition is associative"))
}

/// A union-closed family of subsets of a 4-element set with at most
/// `size` members (at least one).
fn random_semilattice(rng: &mut ChaCha8Rng, size: usize) -> FiniteSemigroup {
    let mut sets: Vec<u8> = vec![rng.gen_range(0..16)];
    for _ in 0..size * 2 {
        let x: u8 = rng.gen_range(0..16);
        let mut candidate = sets.clone();
        candidate.push(x);
        loop {
            let mut grown = candidate.clone();
            for &a in &candidate {
                for &b in &candidate {
                    grown.push(a | b);
                }
            }
            grown.sort_unstable();
            grown.dedup();
            if grown.len() == candidate.len() {
                break;
            }
            candidate = grown;
        }
        if candidate.len() <= size {
            sets = candidate;
        }
    }
    sets.sort_unstable();
    sets.dedup();
    let rows = sets
        .iter()
        .map(|&a| sets.iter().map(|&b| sets.binary_search(&(a | b)).expect("union closed")).collect())
        .collect();
    FiniteSemigroup::new(rows, None).expect("union is associative")
}

pub fn direct_product(s: &FiniteSemigroup, t: &FiniteSemigroup) -> FiniteSemigroup {
    let (n, m) = (s.order(), t.order());
    let rows = (0..n * m)
        .map(|x| (0..n * m).map(|y| s.mul(x / m, y / m) * m + t.mul(x % m, y % m)).collect())
        .collect();
    FiniteSemigroup::new(rows, None).expect("products of semigroups are semigroups")
}

/// Adjoins a new identity (or zero) as the last element.
pub fn adjoin(s: &FiniteSemigroup, identity: bool) -> FiniteSemigroup {
    let n = s.order();
    let rows = (0..=n)
        .map(|a| {
            (0..=n)
                .map(|b| match (a == n, b == n) {
                    (false, false) => s.mul(a, b),
                    _ if !identity => n,
                    (true, _) => b,
                    (false, true) => a,
                })
                .collect()
        })
        .collect();
    FiniteSemigroup::new(rows, None).expect("adjoining keeps associativity")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entries_are_regular_and_bounded() {
        for e in corpus(300, 0, 12) {
            assert!(e.semigroup.is_regular(), "{}", e.description);
            assert!(e.semigroup.order() <= 12, "{}", e.description);
        }
    }

    #[test]
    fn entries_depend_only_on_seed() {
        let a = corpus_entry(42, 12);
        let b = corpus_entry(42, 12);
        assert_eq!(a.description, b.description);
        assert_eq!(a.semigroup.rows(), b.semigroup.rows());
    }

    #[test]
    fn every_kind_appears() {
        let kinds: std::collections::HashSet<CorpusKind> = corpus(300, 0, 12).into_iter().map(|e| e.kind).collect();
        assert_eq!(kinds.len(), KINDS.len());
    }

    #[test]
    fn brandt_b2_is_inverse() {
        let p = vec![vec![Some(0), None], vec![None, Some(0)]];
        let b2 = rees_matrix(2, 2, 1, &p);
        assert_eq!(b2.order(), 5);
        assert!(b2.elements().all(|a| b2.inverses_of(a).len() == 1));
    }

    #[test]
    fn small_groups_have_expected_orders() {
        assert_eq!(permutation_group(&[vec![1, 2, 0], vec![1, 0, 2]]).order(), 6);
        assert_eq!(permutation_group(&[vec![1, 2, 3, 0], vec![0, 3, 2, 1]]).order(), 8);
    }

    #[test]
    fn adjoined_identity_and_zero() {
        let z2 = cyclic_group(2);
        let with_one = adjoin(&z2, true);
        assert_eq!(with_one.mul(2, 1), 1);
        let with_zero = adjoin(&z2, false);
        assert_eq!(with_zero.mul(2, 1), 2);
    }
}
