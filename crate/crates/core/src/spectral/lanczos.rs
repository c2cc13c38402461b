//! Lanczos tridiagonalization seeded at a single vertex.
//!
//! `K_0 = e_seed`, then `b_{n+1} K_{n+1} = H K_n - a_n K_n - b_n K_{n-1}`
//! with full reorthogonalization against every earlier `K_j` at every step.
//! The recurrence stops once the residual norm drops to
//! `1e-10 * max(1, max_degree)`; the number of vectors produced is the
//! Krylov dimension.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graphs::Graph;

#[derive(Debug, Clone)]
pub struct KrylovDecomposition {
    /// Row `n` is `K_n` in the vertex basis.
    pub basis: DMatrix<f64>,
    /// Diagonal coefficients `a_n`.
    pub a: Vec<f64>,
    /// Off-diagonal coefficients; `b[0] = 0`, `b[n]` couples `K_{n-1}` and `K_n`.
    pub b: Vec<f64>,
    pub seed: usize,
}

impl KrylovDecomposition {
    pub fn krylov_dim(&self) -> usize {
        self.a.len()
    }
}

/// Reusable buffers so that repeated evaluations do not allocate.
#[derive(Debug, Default, Clone)]
pub(crate) struct LanczosWorkspace {
    /// Row-major, `krylov_dim x dim`.
    pub basis: Vec<f64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    w: Vec<f64>,
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    // four independent partial sums so the loop is not latency bound
    let mut acc = [0.0; 4];
    let (xc, yc) = (x.chunks_exact(4), y.chunks_exact(4));
    let tail: f64 = xc.remainder().iter().zip(yc.remainder()).map(|(a, b)| a * b).sum();
    for (a, b) in xc.zip(yc) {
        for k in 0..4 {
            acc[k] += a[k] * b[k];
        }
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

impl LanczosWorkspace {
    /// Runs the recurrence; returns the Krylov dimension. Caller guarantees
    /// `seed < g.dim()`.
    pub fn run(&mut self, g: &Graph, seed: usize) -> usize {
        let dim = g.dim();
        let eps = 1e-10 * (g.max_degree() as f64).max(1.0);

        self.basis.clear();
        self.basis.resize(dim, 0.0);
        self.basis[seed] = 1.0;
        self.a.clear();
        self.b.clear();
        self.b.push(0.0);
        self.w.resize(dim, 0.0);

        for n in 0.. {
            let (done, current) = self.basis.split_at(n * dim);
            g.apply(current, &mut self.w);
            let a = dot(current, &self.w);
            self.a.push(a);
            axpy(-a, current, &mut self.w);
            if n > 0 {
                axpy(-self.b[n], &done[(n - 1) * dim..], &mut self.w);
            }

            // Full reorthogonalization; repeated once if it removed a large
            // fraction of the vector.
            let mut norm = dot(&self.w, &self.w).sqrt();
            for _ in 0..2 {
                for k in self.basis.chunks_exact(dim) {
                    let c = dot(k, &self.w);
                    axpy(-c, k, &mut self.w);
                }
                let after = dot(&self.w, &self.w).sqrt();
                let settled = after > 0.7 * norm;
                norm = after;
                if settled {
                    break;
                }
            }

            if n + 1 == dim || norm <= eps {
                return n + 1;
            }
            self.b.push(norm);
            let inv = 1.0 / norm;
            self.basis.extend(self.w.iter().map(|x| x * inv));
        }
        unreachable!()
    }
}

/// Krylov basis and Lanczos coefficients of `g` seeded at `seed`.
pub fn lanczos(g: &Graph, seed: usize) -> Result<KrylovDecomposition> {
    if seed >= g.dim() {
        return Err(Error::VertexOutOfRange {
            vertex: seed,
            dim: g.dim(),
        });
    }
    let mut ws = LanczosWorkspace::default();
    let kd = ws.run(g, seed);
    Ok(KrylovDecomposition {
        basis: DMatrix::from_row_slice(kd, g.dim(), &ws.basis[..kd * g.dim()]),
        a: ws.a,
        b: ws.b,
        seed,
    })
}

/// The `d_K x d_K` tridiagonal matrix `B H B^T`.
pub fn krylov_hamiltonian(kd: &KrylovDecomposition) -> DMatrix<f64> {
    let n = kd.krylov_dim();
    let mut t = DMatrix::zeros(n, n);
    for i in 0..n {
        t[(i, i)] = kd.a[i];
        if i > 0 {
            t[(i, i - 1)] = kd.b[i];
            t[(i - 1, i)] = kd.b[i];
        }
    }
    t
}
