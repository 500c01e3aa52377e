//! Cyclic Jacobi eigensolver for small dense symmetric matrices.

use super::{SquareMatrix, SymMatrix};
use crate::error::{Error, Result};

/// Sweeps stop once the off-diagonal Frobenius norm drops below this
/// fraction of `‖A‖`.
pub const JACOBI_REL_THRESHOLD: f64 = 1e-14;
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenvalues sorted descending, with eigenvectors stored as the columns
/// of `vectors` in the same order.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: SquareMatrix,
}

impl SymEigen {
    pub fn vector(&self, k: usize) -> Vec<f64> {
        self.vectors.column(k)
    }

    /// `Q Λ Qᵀ`.
    pub fn reconstruct(&self) -> SquareMatrix {
        let n = self.values.len();
        SquareMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| self.vectors.get(i, k) * self.values[k] * self.vectors.get(j, k))
                .sum()
        })
    }
}

pub fn sym_eigenvalues(a: &SymMatrix) -> Result<Vec<f64>> {
    jacobi(a, false).map(|(values, _)| values)
}

pub fn sym_eigen(a: &SymMatrix) -> Result<SymEigen> {
    let (values, vectors) = jacobi(a, true)?;
    Ok(SymEigen {
        values,
        vectors: vectors.expect("vectors requested"),
    })
}

fn jacobi(a: &SymMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<SquareMatrix>)> {
    let n = a.dim();
    let mut w = a.to_dense();
    let mut v = want_vectors.then(|| SquareMatrix::identity(n));
    let scale = a.norm();
    let threshold = JACOBI_REL_THRESHOLD * scale;

    let mut converged = false;
    for sweep in 0..JACOBI_MAX_SWEEPS {
        let off = off_diagonal_norm(&w);
        if off <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = w.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let app = w.get(p, p);
                let aqq = w.get(q, q);
                // Negligible relative to both diagonal entries: drop it.
                let g = 100.0 * apq.abs();
                if sweep > 3 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    w.set(p, q, 0.0);
                    w.set(q, p, 0.0);
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut w, p, q, c, s);
                w.set(p, q, 0.0);
                w.set(q, p, 0.0);
                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vkp = v.get(k, p);
                        let vkq = v.get(k, q);
                        v.set(k, p, c * vkp - s * vkq);
                        v.set(k, q, s * vkp + c * vkq);
                    }
                }
            }
        }
    }
    if !converged {
        let off = off_diagonal_norm(&w);
        if off > threshold {
            return Err(Error::NonConvergence {
                iterations: JACOBI_MAX_SWEEPS,
                residual: off,
            });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| w.get(j, j).total_cmp(&w.get(i, i)));
    let values = order.iter().map(|&i| w.get(i, i)).collect();
    let vectors = v.map(|v| SquareMatrix::from_fn(n, |i, k| v.get(i, order[k])));
    Ok((values, vectors))
}

/// `W ← Jᵀ W J` for the plane rotation acting on coordinates `p, q`.
fn rotate(w: &mut SquareMatrix, p: usize, q: usize, c: f64, s: f64) {
    let n = w.dim();
    for k in 0..n {
        let wkp = w.get(k, p);
        let wkq = w.get(k, q);
        w.set(k, p, c * wkp - s * wkq);
        w.set(k, q, s * wkp + c * wkq);
    }
    for k in 0..n {
        let wpk = w.get(p, k);
        let wqk = w.get(q, k);
        w.set(p, k, c * wpk - s * wqk);
        w.set(q, k, s * wpk + c * wqk);
    }
}

fn off_diagonal_norm(w: &SquareMatrix) -> f64 {
    let n = w.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += w.get(i, j) * w.get(i, j);
            }
        }
    }
    acc.sqrt()
}
