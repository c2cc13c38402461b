//! Independent reference computations shared by the integration tests.
//! Nothing here goes through the crate's own eigensolvers or Lanczos code.

#![allow(dead_code)]

use krylov_walk::Graph;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

/// Krylov basis by classical Gram-Schmidt (applied twice) on
/// `e_seed, H e_seed, H^2 e_seed, ..`. Rows are basis vectors.
pub fn gram_schmidt_krylov(h: &DMatrix<f64>, seed: usize) -> DMatrix<f64> {
    let d = h.nrows();
    let mut rows: Vec<DVector<f64>> = Vec::new();
    let mut v = DVector::zeros(d);
    v[seed] = 1.0;
    let scale = h.amax().max(1.0);
    loop {
        let mut w = v.clone();
        for _ in 0..2 {
            for k in &rows {
                w -= k * k.dot(&w);
            }
        }
        let norm = w.norm();
        if norm <= 1e-9 * scale || rows.len() == d {
            break;
        }
        let k = w / norm;
        v = h * &k;
        rows.push(k);
    }
    DMatrix::from_fn(rows.len(), d, |i, j| rows[i][j])
}

/// Characteristic polynomial coefficients `c_0..c_D` of `det(xI - A)`
/// (monic, `c_D = 1`) by the Faddeev-LeVerrier recursion in exact integer
/// arithmetic.
pub fn char_poly(g: &Graph) -> Vec<i128> {
    let d = g.dim();
    let a: Vec<Vec<i128>> = (0..d)
        .map(|i| (0..d).map(|j| g.has_edge(i, j) as i128).collect())
        .collect();
    let mul = |x: &Vec<Vec<i128>>, y: &Vec<Vec<i128>>| -> Vec<Vec<i128>> {
        (0..d)
            .map(|i| (0..d).map(|j| (0..d).map(|k| x[i][k] * y[k][j]).sum()).collect())
            .collect()
    };
    let mut c = vec![0i128; d + 1];
    c[d] = 1;
    let mut m = vec![vec![0i128; d]; d];
    for k in 1..=d {
        // M_k = A M_{k-1} + c_{d-k+1} I ; c_{d-k} = -tr(A M_k) / k
        let mut next = mul(&a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += c[d - k + 1];
        }
        m = next;
        let am = mul(&a, &m);
        let tr: i128 = (0..d).map(|i| am[i][i]).sum();
        assert_eq!(tr % k as i128, 0);
        c[d - k] = -tr / k as i128;
    }
    c
}

/// Coefficients of `prod (x - r_i)`, lowest degree first.
pub fn poly_from_roots(roots: &[f64]) -> Vec<f64> {
    let mut c = vec![1.0];
    for &r in roots {
        let mut next = vec![0.0; c.len() + 1];
        for (i, &ci) in c.iter().enumerate() {
            next[i + 1] += ci;
            next[i] -= r * ci;
        }
        c = next;
    }
    c
}

/// Time average of `C(t)` over `[0, horizon]` by trapezoidal quadrature,
/// propagating with a dense matrix exponential of step `dt`. The weights
/// are applied to the occupations of the rows of `krylov`.
pub fn quadrature_average(
    h: &DMatrix<f64>,
    krylov: &DMatrix<f64>,
    seed: usize,
    weights: &[f64],
    horizon: f64,
    dt: f64,
) -> f64 {
    let d = h.nrows();
    let steps = (horizon / dt).ceil() as usize;
    let dt = horizon / steps as f64;
    let step = h.map(|x| Complex64::new(0.0, -x * dt)).exp();
    let kc = krylov.map(|x| Complex64::new(x, 0.0));
    let mut psi = DVector::from_element(d, Complex64::new(0.0, 0.0));
    psi[seed] = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let mut amp = DVector::from_element(kc.nrows(), zero);
    let mut next = psi.clone();
    let mut complexity = |psi: &DVector<Complex64>| -> f64 {
        amp.gemv(one, &kc, psi, zero);
        amp.iter().zip(weights).map(|(a, w)| w * a.norm_sqr()).sum()
    };
    let mut acc = 0.5 * complexity(&psi);
    for i in 1..=steps {
        next.gemv(one, &step, &psi, zero);
        std::mem::swap(&mut psi, &mut next);
        let c = complexity(&psi);
        acc += if i == steps { 0.5 * c } else { c };
    }
    acc * dt / horizon
}

/// `C(t)` by dense matrix exponential.
pub fn complexity_by_exponential(
    h: &DMatrix<f64>,
    krylov: &DMatrix<f64>,
    seed: usize,
    weights: &[f64],
    t: f64,
) -> f64 {
    let u = h.map(|x| Complex64::new(0.0, -x * t)).exp();
    let kc = krylov.map(|x| Complex64::new(x, 0.0));
    let amp = kc * u.column(seed);
    amp.iter().zip(weights).map(|(a, w)| w * a.norm_sqr()).sum()
}

/// Uniform random graph with edge probability `p`, resampled until
/// connected.
pub fn random_connected<R: Rng>(d: usize, p: f64, rng: &mut R) -> Graph {
    loop {
        let mut g = Graph::empty(d).unwrap();
        for i in 0..d {
            for j in i + 1..d {
                if rng.gen_bool(p) {
                    g.add_edge(i, j).unwrap();
                }
            }
        }
        if g.is_connected() {
            return g;
        }
    }
}

/// Connected components by union-find.
pub fn union_find_connected(d: usize, edges: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..d).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    let root = find(&mut parent, 0);
    (0..d).all(|v| find(&mut parent, v) == root)
}

/// Ordinary least-squares slope of `y` against `x`.
pub fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}
