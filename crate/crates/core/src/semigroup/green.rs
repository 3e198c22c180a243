use std::collections::HashMap;

use super::FiniteSemigroup;

/// One D-class laid out as an egg-box: rows are R-classes, columns are L-classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DClass {
    /// Members in increasing order.
    pub elements: Vec<usize>,
    /// Global R-class ids of the rows, ordered by least member.
    pub r_classes: Vec<usize>,
    /// Global L-class ids of the columns, ordered by least member.
    pub l_classes: Vec<usize>,
    /// `cells[row][col]` is the H-class at that position, sorted.
    pub cells: Vec<Vec<Vec<usize>>>,
    /// `group[row][col]` iff the H-class contains an idempotent.
    pub group: Vec<Vec<bool>>,
}

impl DClass {
    pub fn rows(&self) -> usize {
        self.r_classes.len()
    }

    pub fn cols(&self) -> usize {
        self.l_classes.len()
    }

    pub fn h_size(&self) -> usize {
        self.cells[0][0].len()
    }

    pub fn is_regular(&self) -> bool {
        self.group.iter().flatten().any(|&g| g)
    }
}

/// Green's relations of a finite semigroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EggBox {
    r_class: Vec<usize>,
    l_class: Vec<usize>,
    h_class: Vec<usize>,
    d_class: Vec<usize>,
    row_of: Vec<usize>,
    col_of: Vec<usize>,
    d_classes: Vec<DClass>,
}

fn classes_by_ideal(s: &FiniteSemigroup, ideal: impl Fn(usize, &mut [u64])) -> Vec<usize> {
    let n = s.order();
    let words = n.div_ceil(64);
    let mut ids: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut class = Vec::with_capacity(n);
    for a in 0..n {
        let mut bits = vec![0u64; words];
        ideal(a, &mut bits);
        let next = ids.len();
        class.push(*ids.entry(bits).or_insert(next));
    }
    class
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

impl EggBox {
    /// R and L from equality of the principal one-sided ideals `aS¹` and
    /// `S¹a`; D as the connected components of the R/L incidence.
    pub fn compute(s: &FiniteSemigroup) -> Self {
        let n = s.order();
        let set = |bits: &mut [u64], x: usize| bits[x / 64] |= 1 << (x % 64);
        let r_class = classes_by_ideal(s, |a, bits| {
            set(bits, a);
            for x in s.row(a) {
                set(bits, x);
            }
        });
        let l_class = classes_by_ideal(s, |a, bits| {
            set(bits, a);
            for x in 0..n {
                set(bits, s.mul(x, a));
            }
        });
        let nr = r_class.iter().max().map_or(0, |m| m + 1);
        let nl = l_class.iter().max().map_or(0, |m| m + 1);

        let mut parent: Vec<usize> = (0..nr + nl).collect();
        for a in 0..n {
            let (x, y) = (find(&mut parent, r_class[a]), find(&mut parent, nr + l_class[a]));
            if x != y {
                parent[x.max(y)] = x.min(y);
            }
        }
        // D-classes numbered by least member; elements are visited in order.
        let mut d_of_root: HashMap<usize, usize> = HashMap::new();
        let mut d_class = Vec::with_capacity(n);
        let mut members: Vec<Vec<usize>> = Vec::new();
        for a in 0..n {
            let root = find(&mut parent, r_class[a]);
            let next = d_of_root.len();
            let d = *d_of_root.entry(root).or_insert(next);
            if d == members.len() {
                members.push(Vec::new());
            }
            members[d].push(a);
            d_class.push(d);
        }

        let mut row_of = vec![0; n];
        let mut col_of = vec![0; n];
        let mut d_classes = Vec::with_capacity(members.len());
        for elements in members {
            let mut r_classes: Vec<usize> = Vec::new();
            let mut l_classes: Vec<usize> = Vec::new();
            for &a in &elements {
                if !r_classes.contains(&r_class[a]) {
                    r_classes.push(r_class[a]);
                }
                if !l_classes.contains(&l_class[a]) {
                    l_classes.push(l_class[a]);
                }
            }
            let mut cells = vec![vec![Vec::new(); l_classes.len()]; r_classes.len()];
            let mut group = vec![vec![false; l_classes.len()]; r_classes.len()];
            for &a in &elements {
                let i = r_classes.iter().position(|&r| r == r_class[a]).unwrap();
                let j = l_classes.iter().position(|&l| l == l_class[a]).unwrap();
                row_of[a] = i;
                col_of[a] = j;
                cells[i][j].push(a);
                if s.is_idempotent(a) {
                    group[i][j] = true;
                }
            }
            d_classes.push(DClass { elements, r_classes, l_classes, cells, group });
        }

        let mut h_ids: HashMap<(usize, usize), usize> = HashMap::new();
        let h_class = (0..n)
            .map(|a| {
                let next = h_ids.len();
                *h_ids.entry((r_class[a], l_class[a])).or_insert(next)
            })
            .collect();

        Self { r_class, l_class, h_class, d_class, row_of, col_of, d_classes }
    }

    pub fn r_class(&self, a: usize) -> usize {
        self.r_class[a]
    }

    pub fn l_class(&self, a: usize) -> usize {
        self.l_class[a]
    }

    pub fn h_class(&self, a: usize) -> usize {
        self.h_class[a]
    }

    pub fn d_class(&self, a: usize) -> usize {
        self.d_class[a]
    }

    pub fn d_classes(&self) -> &[DClass] {
        &self.d_classes
    }

    /// `(row, col)` of `a` inside its D-class.
    pub fn position(&self, a: usize) -> (usize, usize) {
        (self.row_of[a], self.col_of[a])
    }

    pub fn h_cell(&self, a: usize) -> &[usize] {
        let (i, j) = self.position(a);
        &self.d_classes[self.d_class[a]].cells[i][j]
    }

    pub fn h_related(&self, a: usize, b: usize) -> bool {
        self.h_class[a] == self.h_class[b]
    }

    pub fn in_group_cell(&self, a: usize) -> bool {
        let (i, j) = self.position(a);
        self.d_classes[self.d_class[a]].group[i][j]
    }

    pub fn r_class_count(&self) -> usize {
        self.r_class.iter().max().map_or(0, |m| m + 1)
    }

    pub fn l_class_count(&self) -> usize {
        self.l_class.iter().max().map_or(0, |m| m + 1)
    }
}
