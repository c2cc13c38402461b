//! Undirected simple graphs whose adjacency matrix is the walk Hamiltonian.
//!
//! Adjacency is stored as one bit-packed row per vertex. Vertex 0 is the
//! distinguished vertex everywhere in this crate: the Krylov seed, the DFS
//! root for connectivity, and the hub / path end / tree root / entrance
//! produced by the generators.

mod format;
mod generators;

pub use format::{parse_graph, serialize_graph, GraphFormat};
pub use generators::{
    m_ary_tree_size, make_complete, make_glued_tree, make_hub_k_regular, make_m_ary_tree, make_path,
    make_star, GluedTree,
};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    dim: usize,
    words: usize,
    rows: Vec<u64>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("dim", &self.dim)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    /// Edgeless graph on `dim` vertices.
    pub fn empty(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension { min: 1, got: 0 });
        }
        let words = dim.div_ceil(64);
        Ok(Self {
            dim,
            words,
            rows: vec![0; words * dim],
        })
    }

    /// Builds a graph from an edge list, rejecting self-loops, out-of-range
    /// endpoints and repeated edges (in either orientation).
    pub fn from_edges<I>(dim: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::empty(dim)?;
        for (i, j) in edges {
            g.add_edge(i, j)?;
        }
        Ok(g)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.dim {
            Err(Error::VertexOutOfRange {
                vertex: v,
                dim: self.dim,
            })
        } else {
            Ok(())
        }
    }

    /// Adds edge `{i, j}`; fails on self-loops and duplicates.
    pub fn add_edge(&mut self, i: usize, j: usize) -> Result<()> {
        self.check_vertex(i)?;
        self.check_vertex(j)?;
        if i == j {
            return Err(Error::SelfLoop(i));
        }
        if self.has_edge(i, j) {
            let (lo, hi) = (i.min(j), i.max(j));
            return Err(Error::DuplicateEdge(lo, hi));
        }
        self.set_edge(i, j, true);
        Ok(())
    }

    /// Sets or clears edge `{i, j}` without validation beyond `i != j`.
    ///
    /// Panics if either index is out of range or `i == j`.
    pub fn set_edge(&mut self, i: usize, j: usize, present: bool) {
        assert!(i != j, "self-loop at vertex {i}");
        assert!(i < self.dim && j < self.dim, "vertex out of range");
        let (wi, bi) = (j / 64, j % 64);
        let (wj, bj) = (i / 64, i % 64);
        if present {
            self.rows[i * self.words + wi] |= 1 << bi;
            self.rows[j * self.words + wj] |= 1 << bj;
        } else {
            self.rows[i * self.words + wi] &= !(1 << bi);
            self.rows[j * self.words + wj] &= !(1 << bj);
        }
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        if i >= self.dim || j >= self.dim {
            return false;
        }
        self.rows[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub(crate) fn row(&self, i: usize) -> &[u64] {
        &self.rows[i * self.words..(i + 1) * self.words]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.dim).map(|i| self.degree(i)).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        (0..self.dim).map(|i| self.degree(i)).sum::<usize>() / 2
    }

    /// Neighbours of `i` in ascending order.
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(i).iter().enumerate().flat_map(|(w, &bits)| {
            BitIter(bits).map(move |b| w * 64 + b)
        })
    }

    /// Edges `(i, j)` with `i < j`, sorted lexicographically.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.dim).flat_map(move |i| self.neighbors(i).filter(move |&j| j > i).map(move |j| (i, j)))
    }

    /// Dense adjacency matrix (the Hamiltonian with unit hopping).
    pub fn adjacency_matrix(&self) -> DMatrix<f64> {
        let mut h = DMatrix::zeros(self.dim, self.dim);
        for (i, j) in self.edges() {
            h[(i, j)] = 1.0;
            h[(j, i)] = 1.0;
        }
        h
    }

    /// `out = A x`.
    pub(crate) fn apply(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim);
        debug_assert_eq!(out.len(), self.dim);
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (w, &bits) in self.row(i).iter().enumerate() {
                let mut rest = bits;
                while rest != 0 {
                    acc += x[w * 64 + rest.trailing_zeros() as usize];
                    rest &= rest - 1;
                }
            }
            *o = acc;
        }
    }

    /// Graph with vertices relabelled so that old vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.dim {
            return Err(Error::InvalidArgument(format!(
                "permutation length {} != dimension {}",
                perm.len(),
                self.dim
            )));
        }
        let mut seen = vec![false; self.dim];
        for &p in perm {
            self.check_vertex(p)?;
            if std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidArgument(format!("{p} repeated in permutation")));
            }
        }
        Self::from_edges(self.dim, self.edges().map(|(i, j)| (perm[i], perm[j])))
    }

    pub fn is_connected(&self) -> bool {
        is_connected(self)
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(b)
    }
}

/// True iff a depth-first search from vertex 0 reaches every vertex.
pub fn is_connected(g: &Graph) -> bool {
    let words = g.words;
    let mut visited = vec![0u64; words];
    let mut stack = Vec::with_capacity(g.dim);
    visited[0] |= 1;
    stack.push(0usize);
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for (w, (&bits, seen)) in g.row(v).iter().zip(visited.iter_mut()).enumerate() {
            let fresh = bits & !*seen;
            *seen |= fresh;
            for b in BitIter(fresh) {
                stack.push(w * 64 + b);
                count += 1;
            }
        }
    }
    count == g.dim
}
