//! Implicit QL iteration for real symmetric tridiagonal matrices.

/// Eigen-decomposes the symmetric tridiagonal matrix with diagonal `diag`
/// and off-diagonal `off` (`off[i]` couples rows `i` and `i + 1`; the last
/// entry is scratch). On return `diag` holds the eigenvalues in no
/// particular order and row `k` of `z` (row-major `n x n`) holds the
/// eigenvector of `diag[k]`, provided `z` was the identity on entry.
///
/// Returns `false` if some eigenvalue failed to converge.
pub(crate) fn ql_implicit(diag: &mut [f64], off: &mut [f64], z: &mut [f64]) -> bool {
    let n = diag.len();
    debug_assert_eq!(off.len(), n);
    debug_assert_eq!(z.len(), n * n);
    if n == 0 {
        return true;
    }
    off[n - 1] = 0.0;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 64 {
                return false;
            }

            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = (g * g + 1.0).sqrt();
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;

            for i in (l..m).rev() {
                let f = s * off[i];
                let b = c * off[i];
                r = (f * f + g * g).sqrt();
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                let (head, tail) = z.split_at_mut((i + 1) * n);
                let lo = &mut head[i * n..];
                let hi = &mut tail[..n];
                for (zl, zh) in lo.iter_mut().zip(hi.iter_mut()) {
                    let f = *zh;
                    *zh = s * *zl + c * f;
                    *zl = c * *zl - s * f;
                }
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    true
}

/// Fills `z` with the `n x n` identity.
pub(crate) fn set_identity(z: &mut [f64], n: usize) {
    z.fill(0.0);
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
}
