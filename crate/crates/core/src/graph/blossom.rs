//! Edmonds' blossom algorithm for maximum cardinality matching in general graphs.

use std::collections::VecDeque;

/// Maximum matching of an undirected graph given by adjacency lists.
/// Returns `mate[v]`. Vertices and neighbours are scanned in index order.
pub fn maximum_matching(adj: &[Vec<usize>]) -> Vec<Option<usize>> {
    let n = adj.len();
    let mut mate: Vec<Option<usize>> = vec![None; n];

    for u in 0..n {
        if mate[u].is_none() {
            if let Some(&v) = adj[u].iter().find(|&&v| v != u && mate[v].is_none()) {
                mate[u] = Some(v);
                mate[v] = Some(u);
            }
        }
    }

    let mut search = Search::new(n);
    for root in 0..n {
        if mate[root].is_none() {
            if let Some(end) = search.find_path(adj, &mate, root) {
                // flip the augmenting path ending at `end`
                let mut v = Some(end);
                while let Some(x) = v {
                    let pv = search.parent[x].expect("augmenting path is rooted");
                    let next = mate[pv];
                    mate[x] = Some(pv);
                    mate[pv] = Some(x);
                    v = next;
                }
            }
        }
    }
    mate
}

struct Search {
    parent: Vec<Option<usize>>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    queue: VecDeque<usize>,
}

impl Search {
    fn new(n: usize) -> Self {
        Self {
            parent: vec![None; n],
            base: (0..n).collect(),
            used: vec![false; n],
            in_blossom: vec![false; n],
            queue: VecDeque::new(),
        }
    }

    fn lca(&self, mate: &[Option<usize>], mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; mate.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            match mate[a] {
                Some(m) => a = self.parent[m].expect("even vertex on tree path"),
                None => break,
            }
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[mate[b].expect("odd-side vertex is matched")].expect("tree path");
        }
    }

    fn mark_path(&mut self, mate: &[Option<usize>], mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            let m = mate[v].expect("blossom vertex is matched");
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[m]] = true;
            self.parent[v] = Some(child);
            child = m;
            v = self.parent[m].expect("tree path");
        }
    }

    fn find_path(&mut self, adj: &[Vec<usize>], mate: &[Option<usize>], root: usize) -> Option<usize> {
        let n = adj.len();
        self.used.iter_mut().for_each(|x| *x = false);
        self.parent.iter_mut().for_each(|x| *x = None);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.queue.clear();
        self.used[root] = true;
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for &to in &adj[v] {
                if to == v || self.base[v] == self.base[to] || mate[v] == Some(to) {
                    continue;
                }
                let to_is_even = to == root || mate[to].is_some_and(|m| self.parent[m].is_some());
                if to_is_even {
                    let cur = self.lca(mate, v, to);
                    self.in_blossom.iter_mut().for_each(|x| *x = false);
                    self.mark_path(mate, v, cur, to);
                    self.mark_path(mate, to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to].is_none() {
                    self.parent[to] = Some(v);
                    match mate[to] {
                        None => return Some(to),
                        Some(m) => {
                            self.used[m] = true;
                            self.queue.push_back(m);
                        }
                    }
                }
            }
        }
        None
    }
}
