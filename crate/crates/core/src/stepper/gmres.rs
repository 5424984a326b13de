/// Result of [`gmres`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmresOutcome {
    /// Operator applications spent in Krylov iterations.
    pub iterations: usize,
    /// Final true residual `||b - A x|| / ||b||`.
    pub residual: f64,
    pub converged: bool,
}

/// Residual level relative to `||b||` that counts as converged whatever `tol` is.
pub const ROUNDOFF: f64 = 1e-14;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Restarted GMRES (modified Gram-Schmidt, Givens rotations) for `A x = b`.
///
/// `x` holds the initial guess on entry and the iterate on exit. Stops when
/// the residual has dropped by the factor `tol` from that of the initial
/// guess, when it reaches round-off (`ROUNDOFF * ||b||`), or after `max_iter`
/// operator applications.
///
/// The reduction is measured against the initial residual, not `||b||`: in a
/// time step `||b||` grows like `1/dt` while an extrapolated guess is already
/// `O(dt^2)` accurate, so a test against `||b||` accepts the guess unchanged
/// once `dt` is small.
pub fn gmres(
    mut apply: impl FnMut(&[f64], &mut [f64]),
    b: &[f64],
    x: &mut [f64],
    restart: usize,
    tol: f64,
    max_iter: usize,
) -> GmresOutcome {
    let n = b.len();
    assert_eq!(x.len(), n);
    let restart = restart.max(1);
    let b_norm = norm(b);
    if b_norm == 0.0 {
        x.fill(0.0);
        return GmresOutcome {
            iterations: 0,
            residual: 0.0,
            converged: true,
        };
    }
    let mut iterations = 0;
    let mut r = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(restart + 1);
    let mut h = vec![vec![0.0; restart]; restart + 1];
    let (mut cs, mut sn) = (vec![0.0; restart], vec![0.0; restart]);
    let mut g = vec![0.0; restart + 1];
    let mut target = f64::NAN;
    loop {
        apply(x, &mut r);
        r.iter_mut().zip(b).for_each(|(ri, bi)| *ri = bi - *ri);
        let r_norm = norm(&r);
        if target.is_nan() {
            target = (tol * r_norm).max(ROUNDOFF * b_norm);
        }
        let residual = r_norm / b_norm;
        if r_norm <= target || iterations >= max_iter || !residual.is_finite() {
            return GmresOutcome {
                iterations,
                residual,
                converged: r_norm <= target,
            };
        }
        basis.clear();
        basis.push(r.iter().map(|v| v / r_norm).collect());
        g.fill(0.0);
        g[0] = r_norm;
        let mut k = 0;
        while k < restart && iterations < max_iter {
            apply(&basis[k], &mut w);
            iterations += 1;
            for (i, v) in basis.iter().enumerate() {
                let hij = dot(&w, v);
                h[i][k] = hij;
                w.iter_mut().zip(v).for_each(|(wi, vi)| *wi -= hij * vi);
            }
            let h_next = norm(&w);
            for i in 0..k {
                let t = cs[i] * h[i][k] + sn[i] * h[i + 1][k];
                h[i + 1][k] = -sn[i] * h[i][k] + cs[i] * h[i + 1][k];
                h[i][k] = t;
            }
            let d = h[k][k].hypot(h_next);
            if d == 0.0 {
                break;
            }
            cs[k] = h[k][k] / d;
            sn[k] = h_next / d;
            h[k][k] = d;
            g[k + 1] = -sn[k] * g[k];
            g[k] *= cs[k];
            k += 1;
            if h_next == 0.0 || g[k].abs() <= target {
                break;
            }
            basis.push(w.iter().map(|v| v / h_next).collect());
        }
        // back substitution on the k x k triangle
        let mut y = vec![0.0; k];
        for i in (0..k).rev() {
            let s: f64 = ((i + 1)..k).map(|j| h[i][j] * y[j]).sum();
            y[i] = (g[i] - s) / h[i][i];
        }
        for (yi, v) in y.iter().zip(&basis) {
            x.iter_mut().zip(v).for_each(|(xi, vi)| *xi += yi * vi);
        }
        if k == 0 {
            // stagnation: the operator annihilated the residual direction
            apply(x, &mut r);
            r.iter_mut().zip(b).for_each(|(ri, bi)| *ri = bi - *ri);
            let r_norm = norm(&r);
            return GmresOutcome {
                iterations,
                residual: r_norm / b_norm,
                converged: r_norm <= target,
            };
        }
    }
}
