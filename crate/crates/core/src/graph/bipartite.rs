//! Hopcroft–Karp maximum bipartite matching with a König deficiency witness.

use std::collections::VecDeque;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteMatching {
    pub left_to_right: Vec<Option<usize>>,
    pub right_to_left: Vec<Option<usize>>,
    pub size: usize,
}

impl BipartiteMatching {
    pub fn is_left_perfect(&self) -> bool {
        self.size == self.left_to_right.len()
    }

    pub fn is_perfect(&self) -> bool {
        self.is_left_perfect() && self.size == self.right_to_left.len()
    }
}

const INF: usize = usize::MAX;

/// Maximum matching of the bipartite graph with left vertices `0..adj.len()`
/// and right vertices `0..n_right`. Neighbours are tried in the order given,
/// so sorted adjacency yields lowest-index tie-breaking.
pub fn hopcroft_karp(adj: &[Vec<usize>], n_right: usize) -> BipartiteMatching {
    let n_left = adj.len();
    let mut left_to_right = vec![None; n_left];
    let mut right_to_left = vec![None; n_right];
    let mut dist = vec![INF; n_left];
    let mut size = 0;

    // greedy start
    for u in 0..n_left {
        if let Some(&v) = adj[u].iter().find(|&&v| right_to_left[v].is_none()) {
            left_to_right[u] = Some(v);
            right_to_left[v] = Some(u);
            size += 1;
        }
    }

    let mut next = vec![0usize; n_left];
    while bfs(adj, &left_to_right, &right_to_left, &mut dist) {
        next.iter_mut().for_each(|x| *x = 0);
        for u in 0..n_left {
            if left_to_right[u].is_none() && dfs(u, adj, &mut left_to_right, &mut right_to_left, &mut dist, &mut next) {
                size += 1;
            }
        }
    }
    BipartiteMatching { left_to_right, right_to_left, size }
}

fn bfs(
    adj: &[Vec<usize>],
    left_to_right: &[Option<usize>],
    right_to_left: &[Option<usize>],
    dist: &mut [usize],
) -> bool {
    let mut queue = VecDeque::new();
    for (u, m) in left_to_right.iter().enumerate() {
        if m.is_none() {
            dist[u] = 0;
            queue.push_back(u);
        } else {
            dist[u] = INF;
        }
    }
    let mut found = false;
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            match right_to_left[v] {
                None => found = true,
                Some(w) if dist[w] == INF => {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
                Some(_) => {}
            }
        }
    }
    found
}

fn dfs(
    u: usize,
    adj: &[Vec<usize>],
    left_to_right: &mut [Option<usize>],
    right_to_left: &mut [Option<usize>],
    dist: &mut [usize],
    next: &mut [usize],
) -> bool {
    while next[u] < adj[u].len() {
        let v = adj[u][next[u]];
        next[u] += 1;
        let ok = match right_to_left[v] {
            None => true,
            Some(w) => dist[w] == dist[u].wrapping_add(1) && dfs(w, adj, left_to_right, right_to_left, dist, next),
        };
        if ok {
            left_to_right[u] = Some(v);
            right_to_left[v] = Some(u);
            return true;
        }
    }
    dist[u] = INF;
    false
}

/// Left vertices reachable by alternating paths from `root` (an unmatched
/// left vertex) and their neighbourhood.
///
/// For a maximum matching every reached right vertex is matched, so the
/// left set exceeds its neighbourhood by exactly one.
pub fn alternating_reach(adj: &[Vec<usize>], m: &BipartiteMatching, root: usize) -> (Vec<usize>, Vec<usize>) {
    let mut seen_left = vec![false; adj.len()];
    let mut seen_right = vec![false; m.right_to_left.len()];
    let mut queue = VecDeque::from([root]);
    seen_left[root] = true;
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !seen_right[v] {
                seen_right[v] = true;
                if let Some(w) = m.right_to_left[v] {
                    if !seen_left[w] {
                        seen_left[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
    }
    let left = (0..adj.len()).filter(|&u| seen_left[u]).collect();
    let right = (0..seen_right.len()).filter(|&v| seen_right[v]).collect();
    (left, right)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_on_cycle() {
        let adj = vec![vec![0, 1], vec![1, 2], vec![2, 0]];
        let m = hopcroft_karp(&adj, 3);
        assert!(m.is_perfect());
    }

    #[test]
    fn deficiency_witness() {
        // left 1 and 2 both only see right 0
        let adj = vec![vec![0, 1], vec![0], vec![0]];
        let m = hopcroft_karp(&adj, 2);
        assert_eq!(m.size, 2);
        let root = m.left_to_right.iter().position(Option::is_none).unwrap();
        let (a, na) = alternating_reach(&adj, &m, root);
        assert_eq!(a.len(), na.len() + 1);
        assert_eq!(na, vec![0]);
    }

    #[test]
    fn needs_augmenting_path() {
        // greedy matches 0-0 first; 1 only sees 0
        let adj = vec![vec![0, 1], vec![0]];
        let m = hopcroft_karp(&adj, 2);
        assert_eq!(m.left_to_right, vec![Some(1), Some(0)]);
    }
}
