//! Variable-coefficient 5-point pressure operator and its PCG solver.

use crate::error::{Error, Result};

/// Symmetric positive-definite matrix `Σ_f β_f (p_c − p_nb)` on an
/// `nx × ny` cell grid ordered `k = i + nx·j`.
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonMatrix {
    pub nx: usize,
    pub ny: usize,
    pub diag: Vec<f64>,
    /// Coupling between cell k and k + 1 (matrix entry −east[k]).
    pub east: Vec<f64>,
    /// Coupling between cell k and k + nx (matrix entry −north[k]).
    pub north: Vec<f64>,
}

impl PoissonMatrix {
    pub fn zeros(nx: usize, ny: usize) -> Self {
        let n = nx * ny;
        Self {
            nx,
            ny,
            diag: vec![0.0; n],
            east: vec![0.0; n],
            north: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Adds a face between cells `a` and `b = a + 1` or `a + nx`.
    pub fn couple(&mut self, a: usize, b: usize, beta: f64) {
        self.diag[a] += beta;
        self.diag[b] += beta;
        if b == a + 1 {
            self.east[a] += beta;
        } else {
            debug_assert_eq!(b, a + self.nx);
            self.north[a] += beta;
        }
    }

    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        let nx = self.nx;
        for k in 0..self.len() {
            let mut s = self.diag[k] * x[k];
            if k % nx + 1 < nx {
                s -= self.east[k] * x[k + 1];
            }
            if k % nx > 0 {
                s -= self.east[k - 1] * x[k - 1];
            }
            if k + nx < self.len() {
                s -= self.north[k] * x[k + nx];
            }
            if k >= nx {
                s -= self.north[k - nx] * x[k - nx];
            }
            y[k] = s;
        }
    }
}

/// Incomplete Cholesky factor with zero fill-in.
struct Ic0 {
    pivots: Vec<f64>,
}

impl Ic0 {
    fn new(a: &PoissonMatrix) -> Self {
        let nx = a.nx;
        let mut pivots = vec![0.0; a.len()];
        for k in 0..a.len() {
            let mut d = a.diag[k];
            if k % nx > 0 {
                d -= a.east[k - 1] * a.east[k - 1] / pivots[k - 1];
            }
            if k >= nx {
                d -= a.north[k - nx] * a.north[k - nx] / pivots[k - nx];
            }
            // Fall back to the plain diagonal if cancellation destroyed the pivot.
            pivots[k] = if d > 1e-12 * a.diag[k] { d } else { a.diag[k] };
        }
        Self { pivots }
    }

    fn solve(&self, a: &PoissonMatrix, r: &[f64], z: &mut [f64]) {
        let nx = a.nx;
        let n = a.len();
        for k in 0..n {
            let mut s = r[k];
            if k % nx > 0 {
                s += a.east[k - 1] * z[k - 1];
            }
            if k >= nx {
                s += a.north[k - nx] * z[k - nx];
            }
            z[k] = s / self.pivots[k];
        }
        for k in (0..n).rev() {
            let mut s = 0.0;
            if k % nx + 1 < nx {
                s += a.east[k] * z[k + 1];
            }
            if k + nx < n {
                s += a.north[k] * z[k + nx];
            }
            z[k] += s / self.pivots[k];
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveStats {
    pub iterations: usize,
    /// ‖b − A x‖₂ / ‖b‖₂ at exit.
    pub residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Preconditioned conjugate gradients from the initial guess in `x`.
pub fn solve(
    a: &PoissonMatrix,
    b: &[f64],
    x: &mut [f64],
    rel_tol: f64,
    max_iterations: usize,
) -> Result<SolveStats> {
    let n = a.len();
    let b_norm = dot(b, b).sqrt();
    if b_norm == 0.0 {
        x.fill(0.0);
        return Ok(SolveStats {
            iterations: 0,
            residual: 0.0,
        });
    }
    let pre = Ic0::new(a);
    let mut r = vec![0.0; n];
    a.apply(x, &mut r);
    for k in 0..n {
        r[k] = b[k] - r[k];
    }
    let mut residual = dot(&r, &r).sqrt() / b_norm;
    if residual <= rel_tol {
        return Ok(SolveStats {
            iterations: 0,
            residual,
        });
    }
    let mut z = vec![0.0; n];
    pre.solve(a, &r, &mut z);
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let mut rz = dot(&r, &z);
    for it in 1..=max_iterations {
        a.apply(&p, &mut ap);
        let step = rz / dot(&p, &ap);
        for k in 0..n {
            x[k] += step * p[k];
            r[k] -= step * ap[k];
        }
        residual = dot(&r, &r).sqrt() / b_norm;
        if !residual.is_finite() {
            break;
        }
        if residual <= rel_tol {
            return Ok(SolveStats {
                iterations: it,
                residual,
            });
        }
        pre.solve(a, &r, &mut z);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for k in 0..n {
            p[k] = z[k] + beta * p[k];
        }
    }
    Err(Error::SolverDiverged {
        iterations: max_iterations,
        residual,
    })
}
