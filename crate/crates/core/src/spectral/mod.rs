//! Real symmetric eigensolvers and Krylov tridiagonalization.

mod lanczos;
pub(crate) mod tridiagonal;

pub use lanczos::{krylov_hamiltonian, lanczos, KrylovDecomposition};
pub(crate) use lanczos::LanczosWorkspace;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Largest tolerated `|H_ij - H_ji|` accepted by [`eigh`].
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// Eigenvalues closer than this (relative to the spectral range, floored at
/// one) are treated as a single degenerate level.
pub fn grouping_tolerance(eigenvalues: &[f64]) -> f64 {
    let range = match (eigenvalues.first(), eigenvalues.last()) {
        (Some(lo), Some(hi)) => hi - lo,
        _ => 0.0,
    };
    1e-8 * range.max(1.0)
}

/// Eigenpairs of a real symmetric matrix, ascending, with degenerate levels
/// grouped.
#[derive(Debug, Clone)]
pub struct SpectralData {
    pub eigenvalues: Vec<f64>,
    /// Column `m` is the eigenvector for `eigenvalues[m]`.
    pub eigenvectors: DMatrix<f64>,
    /// Disjoint runs of consecutive indices covering `0..D`.
    pub degeneracy_groups: Vec<Vec<usize>>,
}

impl SpectralData {
    fn from_unsorted(values: Vec<f64>, vectors: DMatrix<f64>) -> Self {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let eigenvalues: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        let eigenvectors = DMatrix::from_fn(vectors.nrows(), order.len(), |r, c| vectors[(r, order[c])]);
        let degeneracy_groups = group_levels(&eigenvalues, grouping_tolerance(&eigenvalues));
        Self {
            eigenvalues,
            eigenvectors,
            degeneracy_groups,
        }
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_degenerate(&self) -> bool {
        self.degeneracy_groups.iter().any(|g| g.len() > 1)
    }
}

/// Splits ascending `values` into runs whose spread is at most `tol`.
pub fn group_levels(values: &[f64], tol: f64) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut start = 0;
    for (i, &v) in values.iter().enumerate() {
        match groups.last_mut() {
            Some(g) if v - values[start] <= tol => g.push(i),
            _ => {
                start = i;
                groups.push(vec![i]);
            }
        }
    }
    groups
}

/// Dense symmetric eigendecomposition.
pub fn eigh(h: &DMatrix<f64>) -> Result<SpectralData> {
    if !h.is_square() {
        return Err(Error::InvalidArgument(format!(
            "matrix is {}x{}, expected square",
            h.nrows(),
            h.ncols()
        )));
    }
    let asym = (h - h.transpose()).amax();
    if asym > SYMMETRY_TOLERANCE {
        return Err(Error::NotSymmetric(asym));
    }
    if h.nrows() == 0 {
        return Ok(SpectralData::from_unsorted(Vec::new(), DMatrix::zeros(0, 0)));
    }
    let sym = (h + h.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    Ok(SpectralData::from_unsorted(
        eig.eigenvalues.iter().copied().collect(),
        eig.eigenvectors,
    ))
}

/// Eigendecomposition of the symmetric tridiagonal matrix with diagonal `a`
/// and off-diagonal `off` (`off[i]` couples `i` and `i + 1`).
pub fn eigh_tridiagonal(a: &[f64], off: &[f64]) -> Result<SpectralData> {
    let n = a.len();
    if off.len() + 1 != n && !(n == 0 && off.is_empty()) {
        return Err(Error::InvalidArgument(format!(
            "off-diagonal has length {}, expected {}",
            off.len(),
            n.saturating_sub(1)
        )));
    }
    let mut d = a.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    let mut z = vec![0.0; n * n];
    tridiagonal::set_identity(&mut z, n);
    if !tridiagonal::ql_implicit(&mut d, &mut e, &mut z) {
        return Err(Error::InvalidArgument("tridiagonal QL failed to converge".into()));
    }
    Ok(SpectralData::from_unsorted(d, DMatrix::from_column_slice(n, n, &z)))
}
