//! Closed-form complexities for the analytically tractable graph families.
//! These serve as test oracles and as reference curves next to optimizer
//! output.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::{
    self, make_complete, make_glued_tree, make_hub_k_regular, make_m_ary_tree, make_path, make_star,
    Graph,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    HubKRegular { d: usize, k: usize },
    Star { d: usize },
    Complete { d: usize },
    Path { d: usize },
    MAryTree { m: usize, h: usize },
    GluedTree { n: usize },
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::HubKRegular { d, k } => write!(f, "hub-k-regular(d={d}, k={k})"),
            Self::Star { d } => write!(f, "star(d={d})"),
            Self::Complete { d } => write!(f, "complete(d={d})"),
            Self::Path { d } => write!(f, "path(d={d})"),
            Self::MAryTree { m, h } => write!(f, "m-ary-tree(m={m}, h={h})"),
            Self::GluedTree { n } => write!(f, "glued-tree(n={n})"),
        }
    }
}

impl Family {
    /// Canonical member of the family (vertex 0 is the distinguished vertex).
    pub fn build(&self) -> Result<Graph> {
        match *self {
            Self::HubKRegular { d, k } => make_hub_k_regular(d, k, None),
            Self::Star { d } => make_star(d),
            Self::Complete { d } => make_complete(d),
            Self::Path { d } => make_path(d),
            Self::MAryTree { m, h } => make_m_ary_tree(m, h),
            Self::GluedTree { n } => make_glued_tree(n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyPrediction {
    pub family: Family,
    pub dimension: usize,
    pub cbar: f64,
    pub kappa: Option<Vec<f64>>,
    pub krylov_dim: usize,
    /// Large-size asymptote of `cbar`, where one is customarily quoted.
    pub asymptotic_cbar: Option<f64>,
}

/// Two eigenpairs `(a₊, λ₊, a₋, λ₋)` of a hub joined to a `k`-regular graph
/// on `d - 1` vertices, with eigenvectors `a |0> + Σ_{i>0} |i>`.
pub fn hub_eigenpair(d: usize, k: usize) -> (f64, f64, f64, f64) {
    let (d, k) = (d as f64, k as f64);
    let root = (4.0 * (d - 1.0) + k * k).sqrt() / 2.0;
    let half = k / 2.0;
    (-half + root, half + root, -half - root, half - root)
}

/// `κ` of an unreduced tridiagonal with constant off-diagonal and zero
/// diagonal (a path of `len` sites, up to scale).
fn path_kappa(len: usize) -> Vec<f64> {
    if len == 1 {
        return vec![1.0];
    }
    let denom = (len + 1) as f64;
    (0..len)
        .map(|n| if n == 0 || n + 1 == len { 1.5 / denom } else { 1.0 / denom })
        .collect()
}

fn hub_prediction(family: Family, d: usize, k: usize) -> FamilyPrediction {
    let (d_f, k_f) = (d as f64, k as f64);
    let cbar = 2.0 * (d_f - 1.0) / (4.0 * d_f - 4.0 + k_f * k_f);
    let (kappa, krylov_dim) = if d == 1 { (vec![1.0], 1) } else { (vec![1.0 - cbar, cbar], 2) };
    FamilyPrediction {
        family,
        dimension: d,
        cbar,
        kappa: Some(kappa),
        krylov_dim,
        asymptotic_cbar: None,
    }
}

/// Exact `C̄` (linear weights, seed 0) for a family member.
pub fn cbar_closed_form(family: Family) -> Result<FamilyPrediction> {
    // reject infeasible parameters the same way the generators do
    family.build()?;
    Ok(match family {
        Family::HubKRegular { d, k } => hub_prediction(family, d, k),
        Family::Star { d } => hub_prediction(family, d, 0),
        Family::Complete { d } => hub_prediction(family, d, d.saturating_sub(2)),
        Family::Path { d } => FamilyPrediction {
            family,
            dimension: d,
            cbar: (d as f64 - 1.0) / 2.0,
            kappa: Some(path_kappa(d)),
            krylov_dim: d,
            asymptotic_cbar: None,
        },
        Family::MAryTree { m, h } => {
            let dimension = graphs::m_ary_tree_size(m, h);
            FamilyPrediction {
                family,
                dimension,
                cbar: (h as f64 - 1.0) / 2.0,
                kappa: Some(path_kappa(h)),
                krylov_dim: h,
                asymptotic_cbar: Some(0.5 * (dimension as f64).ln() / (m as f64).ln()),
            }
        }
        Family::GluedTree { n } => {
            let dimension = 3 * (1usize << n) - 2;
            FamilyPrediction {
                family,
                dimension,
                cbar: n as f64,
                kappa: Some(path_kappa(2 * n + 1)),
                krylov_dim: 2 * n + 1,
                asymptotic_cbar: Some((dimension as f64 / 3.0).ln() / 2f64.ln()),
            }
        }
    })
}

/// Linear fit `0.66 D - 1.31` to the largest observed `C̄` per dimension.
/// A reference line, not a bound.
pub fn empirical_max_fit(d: usize) -> f64 {
    0.66 * d as f64 - 1.31
}

/// Smallest `C̄` over connected graphs on `d` vertices, attained by `K_d`.
pub fn complete_graph_cbar(d: usize) -> f64 {
    let d = d as f64;
    2.0 * (d - 1.0) / (d * d)
}

impl std::str::FromStr for Family {
    type Err = Error;

    /// Parses `name:key=value,...`, e.g. `glued-tree:n=4`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, params) = s.split_once(':').unwrap_or((s, ""));
        let get = |key: &str| -> Result<usize> {
            params
                .split(',')
                .filter_map(|kv| kv.split_once('='))
                .find(|(k, _)| *k == key)
                .ok_or_else(|| Error::InvalidArgument(format!("{name} needs `{key}`")))?
                .1
                .parse()
                .map_err(|e| Error::InvalidArgument(format!("{key}: {e}")))
        };
        Ok(match name {
            "hub-k-regular" => Family::HubKRegular { d: get("d")?, k: get("k")? },
            "star" => Family::Star { d: get("d")? },
            "complete" => Family::Complete { d: get("d")? },
            "path" => Family::Path { d: get("d")? },
            "m-ary-tree" => Family::MAryTree { m: get("m")?, h: get("h")? },
            "glued-tree" => Family::GluedTree { n: get("n")? },
            other => return Err(Error::InvalidArgument(format!("unknown family `{other}`"))),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::eigh;

    #[test]
    fn hub_pair_examples() {
        let (_, lp, _, lm) = hub_eigenpair(5, 0);
        assert!((lp - 2.0).abs() < 1e-15 && (lm + 2.0).abs() < 1e-15);
        let (ap, lp, am, lm) = hub_eigenpair(8, 4);
        assert!((lp - (2.0 + 44f64.sqrt() / 2.0)).abs() < 1e-14);
        assert!((lm - (2.0 - 44f64.sqrt() / 2.0)).abs() < 1e-14);
        // a λ = D - 1 and k + a = λ
        for (a, l) in [(ap, lp), (am, lm)] {
            assert!((a * l - 7.0).abs() < 1e-12);
            assert!((4.0 + a - l).abs() < 1e-12);
        }
        for d in 2..=10 {
            let (_, lp, _, _) = hub_eigenpair(d, d - 2);
            assert!((lp - (d - 1) as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn hub_pair_in_spectrum() {
        let g = make_hub_k_regular(8, 4, None).unwrap();
        let spec = eigh(&g.adjacency_matrix()).unwrap();
        let (_, lp, _, lm) = hub_eigenpair(8, 4);
        for l in [lp, lm] {
            assert!(spec.eigenvalues.iter().any(|e| (e - l).abs() < 1e-9));
        }
    }

    #[test]
    fn closed_form_examples() {
        let p = cbar_closed_form(Family::GluedTree { n: 4 }).unwrap();
        assert_eq!((p.cbar, p.krylov_dim, p.dimension), (4.0, 9, 46));
        let k = p.kappa.unwrap();
        assert!((k[0] - 0.15).abs() < 1e-15 && (k[8] - 0.15).abs() < 1e-15);

        let p = cbar_closed_form(Family::Path { d: 10 }).unwrap();
        assert_eq!(p.cbar, 4.5);
        let k = p.kappa.unwrap();
        assert!((k[0] - 3.0 / 22.0).abs() < 1e-15 && (k[9] - 3.0 / 22.0).abs() < 1e-15);
        assert!(k[1..9].iter().all(|x| (x - 1.0 / 11.0).abs() < 1e-15));

        let p = cbar_closed_form(Family::Complete { d: 10 }).unwrap();
        assert!((p.cbar - 0.18).abs() < 1e-15);
        assert_eq!(cbar_closed_form(Family::Star { d: 17 }).unwrap().cbar, 0.5);

        let p = cbar_closed_form(Family::MAryTree { m: 3, h: 4 }).unwrap();
        assert_eq!((p.cbar, p.krylov_dim, p.dimension), (1.5, 4, 40));
        assert!(p.asymptotic_cbar.is_some());
    }

    #[test]
    fn invalid_parameters() {
        assert!(cbar_closed_form(Family::Star { d: 1 }).is_err());
        assert!(cbar_closed_form(Family::HubKRegular { d: 6, k: 3 }).is_err());
        assert!(cbar_closed_form(Family::GluedTree { n: 0 }).is_err());
        assert!(cbar_closed_form(Family::MAryTree { m: 1, h: 3 }).is_err());
    }

    #[test]
    fn max_fit_values() {
        assert!((empirical_max_fit(30) - 18.49).abs() < 1e-12);
        assert!((empirical_max_fit(10) - 5.29).abs() < 1e-12);
        assert!((empirical_max_fit(2) - 0.01).abs() < 1e-12);
    }

    #[test]
    fn family_parsing() {
        assert_eq!("glued-tree:n=4".parse::<Family>().unwrap(), Family::GluedTree { n: 4 });
        assert_eq!(
            "hub-k-regular:d=8,k=4".parse::<Family>().unwrap(),
            Family::HubKRegular { d: 8, k: 4 }
        );
        assert!("star".parse::<Family>().is_err());
        assert!("blob:d=3".parse::<Family>().is_err());
    }
}
