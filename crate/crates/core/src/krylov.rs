//! Spread complexity `C(t)`, its long-time average, finite-time averages
//! and the vertex limiting distribution.
//!
//! Everything except the limiting distribution lives in the Krylov
//! subspace: it is invariant under `H` and contains the seed, and its
//! tridiagonal Hamiltonian is unreduced, hence has a simple spectrum. The
//! naive time-average formula is therefore exact there even when the full
//! adjacency spectrum is degenerate.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::spectral::{eigh, tridiagonal, LanczosWorkspace};

/// Weights `w_n` attached to the Krylov vectors.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightSequence {
    /// `w_n = n`.
    #[default]
    Linear,
    Custom(Vec<f64>),
}

impl WeightSequence {
    /// Validated custom weights: finite, `w_0 >= 0`, strictly increasing.
    pub fn custom(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidWeights("empty weight list".into()));
        }
        if values.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidWeights("weights must be finite".into()));
        }
        if values[0] < 0.0 {
            return Err(Error::InvalidWeights(format!("w_0 = {} is negative", values[0])));
        }
        if let Some(i) = values.windows(2).position(|p| p[1] <= p[0]) {
            return Err(Error::InvalidWeights(format!(
                "weights not strictly increasing at index {}",
                i + 1
            )));
        }
        Ok(Self::Custom(values))
    }

    /// The first `len` weights.
    pub fn values(&self, len: usize) -> Result<Vec<f64>> {
        match self {
            Self::Linear => Ok((0..len).map(|n| n as f64).collect()),
            Self::Custom(v) if v.len() >= len => Ok(v[..len].to_vec()),
            Self::Custom(v) => Err(Error::InvalidWeights(format!(
                "{} weights supplied, {len} needed",
                v.len()
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexityReport {
    pub seed: usize,
    #[serde(rename = "d_K")]
    pub krylov_dim: usize,
    pub kappa: Vec<f64>,
    pub cbar: f64,
    pub weights: Vec<f64>,
    /// Whether the full adjacency spectrum has grouped degeneracies.
    pub degenerate: bool,
}

fn check_seed(g: &Graph, seed: usize) -> Result<()> {
    if seed >= g.dim() {
        return Err(Error::VertexOutOfRange {
            vertex: seed,
            dim: g.dim(),
        });
    }
    Ok(())
}

/// Spectral data of the Krylov tridiagonal for one seeded graph.
#[derive(Debug, Clone)]
pub struct SpreadDynamics {
    /// Eigenvalues of the Krylov tridiagonal (unsorted).
    energies: Vec<f64>,
    /// Row-major `d_K x d_K`; row `m` is the eigenvector of `energies[m]`
    /// expressed in the Krylov basis.
    modes: Vec<f64>,
    krylov_dim: usize,
}

impl SpreadDynamics {
    pub fn new(g: &Graph, seed: usize) -> Result<Self> {
        check_seed(g, seed)?;
        let mut ws = LanczosWorkspace::default();
        let kd = ws.run(g, seed);
        let mut modes = vec![0.0; kd * kd];
        tridiagonal::set_identity(&mut modes, kd);
        let mut energies = ws.a;
        let mut off = ws.b[1..].to_vec();
        off.push(0.0);
        if !tridiagonal::ql_implicit(&mut energies, &mut off, &mut modes) {
            return Err(Error::InvalidArgument("tridiagonal QL failed to converge".into()));
        }
        Ok(Self {
            energies,
            modes,
            krylov_dim: kd,
        })
    }

    pub fn krylov_dim(&self) -> usize {
        self.krylov_dim
    }

    fn mode(&self, n: usize, m: usize) -> f64 {
        self.modes[m * self.krylov_dim + n]
    }

    /// Time-averaged occupation of each Krylov vector.
    pub fn kappa(&self) -> Vec<f64> {
        kappa_from_modes(&self.modes, self.krylov_dim)
    }

    /// `C(t)` for the first `d_K` weights `w`.
    pub fn complexity_at(&self, t: f64, w: &[f64]) -> f64 {
        let kd = self.krylov_dim;
        let phases: Vec<Complex64> = (0..kd)
            .map(|m| Complex64::from_polar(self.mode(0, m), -self.energies[m] * t))
            .collect();
        (0..kd)
            .map(|n| {
                let amp: Complex64 = (0..kd).map(|m| phases[m] * self.mode(n, m)).sum();
                w[n] * amp.norm_sqr()
            })
            .sum()
    }

    /// `(1/T) ∫_0^T C(t) dt` evaluated in closed form.
    ///
    /// With `A_ml = U_0m U_0l Σ_n w_n U_nm U_nl` the average is
    /// `Σ_ml A_ml sinc((E_l - E_m) T)`; the imaginary parts cancel because
    /// `A` is symmetric.
    pub fn time_average(&self, horizon: f64, w: &[f64]) -> f64 {
        let kd = self.krylov_dim;
        let mut total = 0.0;
        for m in 0..kd {
            for l in m..kd {
                let weight: f64 = (0..kd).map(|n| w[n] * self.mode(n, m) * self.mode(n, l)).sum();
                let a = self.mode(0, m) * self.mode(0, l) * weight;
                if l == m {
                    total += a;
                } else {
                    total += 2.0 * a * sinc((self.energies[l] - self.energies[m]) * horizon);
                }
            }
        }
        total
    }
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

fn kappa_from_modes(modes: &[f64], kd: usize) -> Vec<f64> {
    let mut kappa = vec![0.0; kd];
    for mode in modes.chunks_exact(kd) {
        let overlap = mode[0] * mode[0];
        for (k, u) in kappa.iter_mut().zip(mode) {
            *k += overlap * u * u;
        }
    }
    kappa
}

/// `C(t) = Σ_n w_n |<K_n|ψ(t)>|²` with `ψ(t) = exp(-iHt) |seed>`.
pub fn complexity_at_time(g: &Graph, seed: usize, t: f64, w: &WeightSequence) -> Result<f64> {
    if !t.is_finite() {
        return Err(Error::InvalidArgument(format!("time {t} is not finite")));
    }
    let dyn_ = SpreadDynamics::new(g, seed)?;
    Ok(dyn_.complexity_at(t, &w.values(dyn_.krylov_dim())?))
}

/// Long-time averaged occupation `κ_n` of each Krylov vector.
pub fn kappa_profile(g: &Graph, seed: usize) -> Result<Vec<f64>> {
    Ok(SpreadDynamics::new(g, seed)?.kappa())
}

/// Long-time average `C̄ = Σ_n w_n κ_n`, plus the data behind it.
pub fn cbar(g: &Graph, seed: usize, w: &WeightSequence) -> Result<ComplexityReport> {
    let kappa = kappa_profile(g, seed)?;
    let weights = w.values(kappa.len())?;
    let cbar = kappa.iter().zip(&weights).map(|(k, w)| k * w).sum();
    let degenerate = eigh(&g.adjacency_matrix())?.is_degenerate();
    Ok(ComplexityReport {
        seed,
        krylov_dim: kappa.len(),
        kappa,
        cbar,
        weights,
        degenerate,
    })
}

/// `(1/T) ∫_0^T C(t) dt` for finite `T > 0`.
pub fn finite_time_average(g: &Graph, seed: usize, horizon: f64, w: &WeightSequence) -> Result<f64> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidArgument(format!("horizon {horizon} must be positive and finite")));
    }
    let dyn_ = SpreadDynamics::new(g, seed)?;
    Ok(dyn_.time_average(horizon, &w.values(dyn_.krylov_dim())?))
}

/// Long-time average probability `χ_i` of finding the walker at vertex `i`.
///
/// Uses eigenspace projectors of the full adjacency matrix,
/// `χ_i = Σ_λ |<v_i| P_λ |seed>|²`, which stays well defined when levels
/// are degenerate.
pub fn limiting_distribution(g: &Graph, seed: usize) -> Result<Vec<f64>> {
    check_seed(g, seed)?;
    let spec = eigh(&g.adjacency_matrix())?;
    let v = &spec.eigenvectors;
    let mut chi = vec![0.0; g.dim()];
    for group in &spec.degeneracy_groups {
        for (i, c) in chi.iter_mut().enumerate() {
            let proj: f64 = group.iter().map(|&m| v[(i, m)] * v[(seed, m)]).sum();
            *c += proj * proj;
        }
    }
    Ok(chi)
}

/// Allocation-free `C̄` evaluation for search loops.
#[derive(Debug, Default, Clone)]
pub struct CbarEvaluator {
    lanczos: LanczosWorkspace,
    diag: Vec<f64>,
    off: Vec<f64>,
    modes: Vec<f64>,
    weights: Vec<f64>,
    rule: WeightSequence,
}

impl CbarEvaluator {
    pub fn new(w: WeightSequence) -> Self {
        Self {
            rule: w,
            ..Self::default()
        }
    }

    pub fn weights(&self) -> &WeightSequence {
        &self.rule
    }

    /// `C̄` of `g` seeded at `seed`; same value as [`cbar`].
    pub fn evaluate(&mut self, g: &Graph, seed: usize) -> Result<f64> {
        check_seed(g, seed)?;
        let kd = self.lanczos.run(g, seed);
        if self.weights.len() < kd {
            self.weights = self.rule.values(kd.max(g.dim()))?;
        }
        self.diag.clear();
        self.diag.extend_from_slice(&self.lanczos.a);
        self.off.clear();
        self.off.extend_from_slice(&self.lanczos.b[1..]);
        self.off.push(0.0);
        self.modes.resize(kd * kd, 0.0);
        tridiagonal::set_identity(&mut self.modes, kd);
        if !tridiagonal::ql_implicit(&mut self.diag, &mut self.off, &mut self.modes) {
            return Err(Error::InvalidArgument("tridiagonal QL failed to converge".into()));
        }
        let weights = &self.weights[..kd];
        Ok(self
            .modes
            .chunks_exact(kd)
            .map(|mode| {
                let level: f64 = mode.iter().zip(weights).map(|(u, w)| w * u * u).sum();
                mode[0] * mode[0] * level
            })
            .sum())
    }
}
