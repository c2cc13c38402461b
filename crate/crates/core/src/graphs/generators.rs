//! Generators for the graph families with closed-form complexities.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Graph;
use crate::error::{Error, Result};

/// Path `0 - 1 - ... - (d-1)`.
pub fn make_path(d: usize) -> Result<Graph> {
    Graph::from_edges(d, (1..d).map(|i| (i - 1, i)))
}

pub fn make_complete(d: usize) -> Result<Graph> {
    Graph::from_edges(d, (0..d).flat_map(|i| (i + 1..d).map(move |j| (i, j))))
}

/// Star with centre 0.
pub fn make_star(d: usize) -> Result<Graph> {
    if d < 2 {
        return Err(Error::InvalidDimension { min: 2, got: d });
    }
    Graph::from_edges(d, (1..d).map(|i| (0, i)))
}

/// Hub vertex 0 joined to every vertex of a `k`-regular graph on `1..d`.
///
/// The regular part is the circulant on `d - 1` vertices with offsets
/// `±1..±k/2`, plus the antipodal offset when `k` is odd. With
/// `relabel_seed` set, the vertices `1..d` are shuffled, which yields a
/// different (isomorphic) labelled realization.
pub fn make_hub_k_regular(d: usize, k: usize, relabel_seed: Option<u64>) -> Result<Graph> {
    if d < 2 {
        return Err(Error::InvalidDimension { min: 2, got: d });
    }
    let ring = d - 1;
    if k > 0 && k >= ring {
        return Err(Error::Infeasible(format!(
            "no {k}-regular graph on {ring} vertices (need k < {ring})"
        )));
    }
    if k % 2 == 1 && ring % 2 == 1 {
        return Err(Error::Infeasible(format!(
            "no {k}-regular graph on {ring} vertices (k and vertex count both odd)"
        )));
    }

    let mut label: Vec<usize> = (1..d).collect();
    if let Some(seed) = relabel_seed {
        label.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }

    let mut g = Graph::empty(d)?;
    for v in 1..d {
        g.set_edge(0, v, true);
    }
    let mut offsets: Vec<usize> = (1..=k / 2).collect();
    if k % 2 == 1 {
        offsets.push(ring / 2);
    }
    for i in 0..ring {
        for &s in &offsets {
            let j = (i + s) % ring;
            g.set_edge(label[i], label[j], true);
        }
    }
    Ok(g)
}

/// Number of vertices of the complete `m`-ary tree with `h` levels.
pub fn m_ary_tree_size(m: usize, h: usize) -> usize {
    (0..h).map(|l| m.pow(l as u32)).sum()
}

/// Complete `m`-ary tree with `h` levels (the root alone is `h = 1`),
/// numbered breadth-first: the children of `v` are `m*v + 1 ..= m*v + m`.
pub fn make_m_ary_tree(m: usize, h: usize) -> Result<Graph> {
    if m < 2 {
        return Err(Error::Infeasible(format!("arity must be at least 2, got {m}")));
    }
    if h < 1 {
        return Err(Error::Infeasible("tree needs at least one level".into()));
    }
    let d = m_ary_tree_size(m, h);
    Graph::from_edges(d, (1..d).map(|v| ((v - 1) / m, v)))
}

/// Column sizes of the glued tree: `1, 2, .., 2^n, .., 2, 1`.
fn glued_columns(n: usize) -> Vec<usize> {
    (0..=2 * n).map(|c| 1usize << c.min(2 * n - c)).collect()
}

/// Layout of a glued binary tree: vertices are numbered column by column,
/// left to right, so the entrance is 0 and the exit is the last vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluedTree {
    pub n: usize,
    /// First vertex index of each of the `2n + 1` columns.
    pub column_start: Vec<usize>,
}

impl GluedTree {
    pub fn new(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::Infeasible("glued tree order must be at least 1".into()));
        }
        if n > 24 {
            return Err(Error::Infeasible(format!("glued tree order {n} is too large")));
        }
        let mut column_start = Vec::with_capacity(2 * n + 2);
        let mut acc = 0;
        for size in glued_columns(n) {
            column_start.push(acc);
            acc += size;
        }
        column_start.push(acc);
        Ok(Self { n, column_start })
    }

    pub fn dim(&self) -> usize {
        *self.column_start.last().unwrap()
    }

    pub fn entrance(&self) -> usize {
        0
    }

    pub fn exit(&self) -> usize {
        self.dim() - 1
    }

    /// Vertex range of column `c`.
    pub fn column(&self, c: usize) -> std::ops::Range<usize> {
        self.column_start[c]..self.column_start[c + 1]
    }

    /// Leaves of the shorter (left) tree; each carries two glue edges.
    pub fn glue_column(&self) -> std::ops::Range<usize> {
        self.column(self.n - 1)
    }

    pub fn graph(&self) -> Graph {
        let mut g = Graph::empty(self.dim()).expect("non-empty");
        let n = self.n;
        for c in 0..2 * n {
            let (narrow, wide) = if c < n { (c, c + 1) } else { (c + 1, c) };
            let (ns, ws) = (self.column_start[narrow], self.column_start[wide]);
            for j in 0..self.column(narrow).len() {
                g.set_edge(ns + j, ws + 2 * j, true);
                g.set_edge(ns + j, ws + 2 * j + 1, true);
            }
        }
        g
    }
}

/// Glued binary tree `G_n`: a binary tree with `n` levels and one with
/// `n + 1` levels, each leaf `j` of the smaller tree joined to leaves
/// `2j` and `2j + 1` of the larger one. Entrance is vertex 0, exit is the
/// last vertex, and there are `3 * 2^n - 2` vertices in `2n + 1` columns.
pub fn make_glued_tree(n: usize) -> Result<Graph> {
    Ok(GluedTree::new(n)?.graph())
}
