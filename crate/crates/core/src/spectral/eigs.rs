//! Smallest eigenpairs of a sparse symmetric operator by Chebyshev-filtered
//! subspace iteration with Rayleigh–Ritz projection.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::grid::SymOperator;
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;
use crate::symmat::{sym_eigen, SymMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigsOptions {
    pub seed: u64,
    /// Converged when `‖A x - θ x‖ ≤ rel_tol · ‖A‖` for each wanted pair.
    pub rel_tol: f64,
    pub max_iter: usize,
    /// Chebyshev polynomial degree per filter pass.
    pub degree: usize,
}

impl Default for EigsOptions {
    fn default() -> Self {
        Self { seed: 0, rel_tol: 1e-10, max_iter: 500, degree: 24 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Eigenpairs {
    /// Ascending.
    pub values: Vec<f64>,
    #[serde(skip)]
    pub vectors: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub iterations: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Orthonormalize in place by modified Gram–Schmidt, run twice; columns
/// that collapse are replaced by fresh random vectors.
fn orthonormalize<R: Rng>(block: &mut [Vec<f64>], rng: &mut R) {
    for k in 0..block.len() {
        let (done, rest) = block.split_at_mut(k);
        let v = &mut rest[0];
        let mut attempts = 0;
        loop {
            let before = norm(v);
            for _ in 0..2 {
                for q in done.iter() {
                    let c = dot(q, v);
                    v.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
                }
            }
            let after = norm(v);
            if after > 1e-10 * before && after > 0.0 {
                v.iter_mut().for_each(|x| *x /= after);
                break;
            }
            attempts += 1;
            assert!(attempts < 10, "cannot extend an orthonormal block");
            v.iter_mut().for_each(|x| *x = rng.sample(StandardNormal));
        }
    }
}

fn apply_block<A: SymOperator + ?Sized>(op: &A, block: &[Vec<f64>]) -> Vec<Vec<f64>> {
    block
        .iter()
        .map(|x| {
            let mut y = vec![0.0; x.len()];
            op.apply(x, &mut y);
            y
        })
        .collect()
}

/// Ritz values, Ritz vectors and their images under the operator.
type RitzBlock = (Vec<f64>, Vec<Vec<f64>>, Vec<Vec<f64>>);

/// Rotate an orthonormal block onto Ritz vectors (ascending Ritz values).
fn rayleigh_ritz<A: SymOperator + ?Sized>(op: &A, block: &[Vec<f64>]) -> Result<RitzBlock> {
    let ab = apply_block(op, block);
    let b = block.len();
    let h = SymMatrix::from_fn(b, |i, j| 0.5 * (dot(&block[i], &ab[j]) + dot(&block[j], &ab[i])));
    let eig = sym_eigen(&h)?;
    // sym_eigen sorts descending
    let order: Vec<usize> = (0..b).rev().collect();
    let dim = op.dim();
    let mut vectors = vec![vec![0.0; dim]; b];
    let mut images = vec![vec![0.0; dim]; b];
    for (out, &k) in order.iter().enumerate() {
        for (src, (x, ax)) in block.iter().zip(&ab).enumerate() {
            let c = eig.vectors.get(src, k);
            vectors[out].iter_mut().zip(x).for_each(|(v, xi)| *v += c * xi);
            images[out].iter_mut().zip(ax).for_each(|(v, yi)| *v += c * yi);
        }
    }
    let values = order.iter().map(|&k| eig.values[k]).collect();
    Ok((values, vectors, images))
}

/// Apply the scaled Chebyshev filter that damps `[lower, upper]` and
/// amplifies everything below `lower`; `anchor < lower` fixes the scale.
fn chebyshev_filter<A: SymOperator + ?Sized>(
    op: &A,
    block: &mut [Vec<f64>],
    degree: usize,
    lower: f64,
    upper: f64,
    anchor: f64,
) {
    let e = 0.5 * (upper - lower);
    let c = 0.5 * (upper + lower);
    let dim = op.dim();
    let mut tmp = vec![0.0; dim];
    for x in block.iter_mut() {
        let mut s = e / (anchor - c);
        let tau = 2.0 / s;
        op.apply(x, &mut tmp);
        let mut y: Vec<f64> = tmp.iter().zip(x.iter()).map(|(ax, xi)| (ax - c * xi) * s / e).collect();
        let mut prev = std::mem::take(x);
        for _ in 1..degree {
            let s_new = 1.0 / (tau - s);
            op.apply(&y, &mut tmp);
            let next: Vec<f64> = tmp
                .iter()
                .zip(&y)
                .zip(&prev)
                .map(|((ay, yi), pi)| (ay - c * yi) * (2.0 * s_new / e) - s * s_new * pi)
                .collect();
            prev = std::mem::replace(&mut y, next);
            s = s_new;
        }
        *x = y;
    }
}

/// Dense fallback for operators no larger than the search block.
fn dense_eigs<A: SymOperator + ?Sized>(op: &A, count: usize) -> Result<Eigenpairs> {
    let dim = op.dim();
    let identity: Vec<Vec<f64>> = (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let (values, vectors, images) = rayleigh_ritz(op, &identity)?;
    let residuals = (0..count)
        .map(|k| {
            let r: Vec<f64> = images[k].iter().zip(&vectors[k]).map(|(a, x)| a - values[k] * x).collect();
            norm(&r)
        })
        .collect();
    Ok(Eigenpairs {
        values: values[..count].to_vec(),
        vectors: vectors[..count].to_vec(),
        residuals,
        iterations: 0,
    })
}

/// The `count` algebraically smallest eigenvalues of `op`.
pub fn smallest_eigenvalues<A: SymOperator + ?Sized>(
    op: &A,
    count: usize,
    opts: &EigsOptions,
) -> Result<Eigenpairs> {
    let dim = op.dim();
    if count < 1 || count > dim {
        return Err(Error::invalid(format!(
            "need 1 <= count <= {dim}, got {count}"
        )));
    }
    if opts.degree < 1 || opts.rel_tol.is_nan() || opts.rel_tol <= 0.0 {
        return Err(Error::invalid("filter degree and tolerance must be positive"));
    }
    let width = (count + 8).max(2 * count);
    if dim <= width {
        return dense_eigs(op, count);
    }
    let (_, upper) = op.gershgorin();
    let scale = op.norm_bound().max(f64::MIN_POSITIVE);
    let mut rng = rng_from_seed(opts.seed);
    let mut block: Vec<Vec<f64>> = (0..width)
        .map(|_| (0..dim).map(|_| rng.sample(StandardNormal)).collect())
        .collect();
    orthonormalize(&mut block, &mut rng);
    let (mut values, mut vectors, mut images) = rayleigh_ritz(op, &block)?;
    let mut worst = f64::INFINITY;
    for iter in 1..=opts.max_iter {
        let residuals: Vec<f64> = (0..count)
            .map(|k| {
                let r: Vec<f64> = images[k]
                    .iter()
                    .zip(&vectors[k])
                    .map(|(a, x)| a - values[k] * x)
                    .collect();
                norm(&r)
            })
            .collect();
        worst = residuals.iter().copied().fold(0.0, f64::max);
        if worst <= opts.rel_tol * scale {
            return Ok(Eigenpairs {
                values: values[..count].to_vec(),
                vectors: vectors[..count].to_vec(),
                residuals,
                iterations: iter - 1,
            });
        }
        let lower = values[width - 1];
        let anchor = values[0];
        if lower >= upper || anchor >= lower {
            // the block already spans a degenerate cluster; a plain filter
            // over the whole Gershgorin interval still separates it
            chebyshev_filter(op, &mut vectors, opts.degree, anchor + 0.5 * (upper - anchor), upper, anchor);
        } else {
            chebyshev_filter(op, &mut vectors, opts.degree, lower, upper, anchor);
        }
        orthonormalize(&mut vectors, &mut rng);
        (values, vectors, images) = rayleigh_ritz(op, &vectors)?;
    }
    Err(Error::NonConvergence {
        iterations: opts.max_iter,
        residual: worst / scale,
    })
}

/// `⟨A f, f⟩ / ⟨f, f⟩`.
pub fn rayleigh_quotient<A: SymOperator + ?Sized>(op: &A, f: &[f64]) -> Result<f64> {
    Error::check_dim(op.dim(), f.len())?;
    let ff = dot(f, f);
    if ff == 0.0 {
        return Err(Error::invalid("Rayleigh quotient of the zero function"));
    }
    let mut y = vec![0.0; f.len()];
    op.apply(f, &mut y);
    Ok(dot(&y, f) / ff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::grid::{torus_grid_operator, CsrMatrix};

    #[test]
    fn diagonal_operator_gives_leading_integers() {
        let d: Vec<f64> = (1..=200).rev().map(f64::from).collect();
        let op = CsrMatrix::from_diag(&d);
        let out = smallest_eigenvalues(&op, 5, &EigsOptions::default()).unwrap();
        for (k, v) in out.values.iter().enumerate() {
            assert!((v - (k + 1) as f64).abs() < 1e-10, "{:?}", out.values);
        }
        let small = CsrMatrix::from_diag(&[3.0, 1.0, 2.0]);
        let out = smallest_eigenvalues(&small, 2, &EigsOptions::default()).unwrap();
        assert_eq!(out.values, vec![1.0, 2.0]);
        assert!(smallest_eigenvalues(&small, 4, &EigsOptions::default()).is_err());
        assert!(smallest_eigenvalues(&small, 0, &EigsOptions::default()).is_err());
    }

    #[test]
    fn grid_bottom_matches_fourier_symbol() {
        for n in [8, 16, 32] {
            let g = torus_grid_operator(n, 2.0).unwrap();
            let exact = g.exact_spectrum();
            let out = smallest_eigenvalues(&g, 6, &EigsOptions::default()).unwrap();
            for (v, e) in out.values.iter().zip(&exact) {
                assert!((v - e).abs() < 1e-9, "N={n}: {v} vs {e}");
            }
            assert!((out.values[0] + 2.0).abs() <= 1e-12);
            for r in &out.residuals {
                assert!(*r <= 1e-10 * g.norm_bound());
            }
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let g = torus_grid_operator(16, 2.0).unwrap();
        let opts = EigsOptions { seed: 9, ..EigsOptions::default() };
        let a = smallest_eigenvalues(&g, 2, &opts).unwrap();
        let b = smallest_eigenvalues(&g, 2, &opts).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn iteration_cap_reports_non_convergence() {
        let g = torus_grid_operator(32, 2.0).unwrap();
        let opts = EigsOptions { max_iter: 1, degree: 2, ..EigsOptions::default() };
        match smallest_eigenvalues(&g, 2, &opts) {
            Err(Error::NonConvergence { iterations, residual }) => {
                assert_eq!(iterations, 1);
                assert!(residual > 0.0);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn rayleigh_quotients() {
        let g = torus_grid_operator(16, 2.0).unwrap();
        assert_eq!(rayleigh_quotient(&g, &vec![1.0; 256]).unwrap(), -2.0);
        assert!(rayleigh_quotient(&g, &vec![0.0; 256]).is_err());
        let out = smallest_eigenvalues(&g, 1, &EigsOptions::default()).unwrap();
        let q = rayleigh_quotient(&g, &out.vectors[0]).unwrap();
        assert!((q - out.values[0]).abs() <= 1e-10);
        let mut rng = rng_from_seed(4);
        for _ in 0..50 {
            let f: Vec<f64> = (0..256).map(|_| rng.random::<f64>() - 0.3).collect();
            assert!(rayleigh_quotient(&g, &f).unwrap() >= out.values[0] - 1e-10);
        }
    }
}
