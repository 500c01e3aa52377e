//! Five-point finite differences for `-Δ - σ` on the square flat torus
//! `S¹(ρ) × S¹(ρ)`, the Clifford torus `M_{1,1}` for `ρ = 1/√2`.

use serde::Serialize;

use crate::error::{Error, Result};

/// A symmetric linear operator on `ℝ^dim`.
pub trait SymOperator {
    fn dim(&self) -> usize;

    /// `y ← A x`.
    fn apply(&self, x: &[f64], y: &mut [f64]);

    /// Gershgorin interval `[lo, hi]` containing the spectrum.
    fn gershgorin(&self) -> (f64, f64);

    /// Upper bound on the operator norm.
    fn norm_bound(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs())
    }
}

/// Compressed sparse rows.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl CsrMatrix {
    /// Build from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(dim: usize, mut triplets: Vec<(usize, usize, f64)>) -> Result<Self> {
        if let Some(&(i, j, _)) = triplets.iter().find(|&&(i, j, _)| i >= dim || j >= dim) {
            return Err(Error::invalid(format!("entry ({i}, {j}) outside a {dim}x{dim} matrix")));
        }
        triplets.sort_by_key(|&(i, j, _)| (i, j));
        let mut row_ptr = vec![0; dim + 1];
        let mut cols: Vec<usize> = Vec::with_capacity(triplets.len());
        let mut vals: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in triplets {
            if last == Some((i, j)) {
                *vals.last_mut().expect("previous entry") += v;
                continue;
            }
            cols.push(j);
            vals.push(v);
            row_ptr[i + 1] += 1;
            last = Some((i, j));
        }
        for i in 0..dim {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(Self { dim, row_ptr, cols, vals })
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let t = diag.iter().enumerate().map(|(i, &v)| (i, i, v)).collect();
        Self::from_triplets(diag.len(), t).expect("diagonal entries are in range")
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[span.clone()].iter().copied().zip(self.vals[span].iter().copied())
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.row(i).find(|&(c, _)| c == j).map_or(0.0, |(_, v)| v)
    }

    /// Largest `|a_ij - a_ji|` over stored entries.
    pub fn asymmetry(&self) -> f64 {
        (0..self.dim)
            .flat_map(|i| self.row(i).map(move |(j, v)| (i, j, v)))
            .map(|(i, j, v)| (v - self.entry(j, i)).abs())
            .fold(0.0, f64::max)
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.row(i).map(|(_, v)| v).sum()).collect()
    }
}

impl SymOperator for CsrMatrix {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row(i).map(|(j, v)| v * x[j]).sum();
        }
    }

    fn gershgorin(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.dim {
            let (mut d, mut off) = (0.0, 0.0);
            for (j, v) in self.row(i) {
                if j == i {
                    d += v;
                } else {
                    off += v.abs();
                }
            }
            lo = lo.min(d - off);
            hi = hi.max(d + off);
        }
        (lo, hi)
    }
}

/// Radius of each circle factor of the Clifford torus.
pub const CLIFFORD_TORUS_RHO: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// `-Δ_h - σ` on an `N × N` periodic grid of mesh width `h = 2πρ/N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridOperator {
    pub n: usize,
    pub h: f64,
    pub rho: f64,
    pub sigma: f64,
}

pub fn torus_grid_operator(n: usize, sigma: f64) -> Result<GridOperator> {
    GridOperator::new(n, CLIFFORD_TORUS_RHO, sigma)
}

impl GridOperator {
    pub fn new(n: usize, rho: f64, sigma: f64) -> Result<Self> {
        if n < 4 {
            return Err(Error::invalid(format!("grid needs N >= 4 points per side, got {n}")));
        }
        if rho.is_nan() || rho <= 0.0 {
            return Err(Error::invalid(format!("radius must be positive, got {rho}")));
        }
        Ok(Self {
            n,
            h: 2.0 * std::f64::consts::PI * rho / n as f64,
            rho,
            sigma,
        })
    }

    fn index(&self, i: usize, j: usize) -> usize {
        i * self.n + j
    }

    /// The `-Δ_h` part as an explicit sparse matrix.
    pub fn laplacian_csr(&self) -> CsrMatrix {
        let n = self.n;
        let inv = 1.0 / (self.h * self.h);
        let mut t = Vec::with_capacity(5 * n * n);
        for i in 0..n {
            for j in 0..n {
                let p = self.index(i, j);
                t.push((p, p, 4.0 * inv));
                for q in [
                    self.index((i + n - 1) % n, j),
                    self.index((i + 1) % n, j),
                    self.index(i, (j + n - 1) % n),
                    self.index(i, (j + 1) % n),
                ] {
                    t.push((p, q, -inv));
                }
            }
        }
        CsrMatrix::from_triplets(n * n, t).expect("grid indices are in range")
    }

    /// The full operator `-Δ_h - σ` as a sparse matrix.
    pub fn to_csr(&self) -> CsrMatrix {
        let lap = self.laplacian_csr();
        let mut t: Vec<(usize, usize, f64)> = (0..lap.dim)
            .flat_map(|i| lap.row(i).map(move |(j, v)| (i, j, v)).collect::<Vec<_>>())
            .collect();
        t.extend((0..lap.dim).map(|i| (i, i, -self.sigma)));
        CsrMatrix::from_triplets(lap.dim, t).expect("same pattern")
    }

    /// Grid function `f(u_i, v_j)` at `u_i = i h`, `v_j = j h`.
    pub fn sample(&self, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n * self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.push(f(i as f64 * self.h, j as f64 * self.h));
            }
        }
        out
    }

    /// Eigenvalue of `-Δ_h - σ` on the Fourier mode `(a, b)`:
    /// `(2/h²)(2 - cos(2πa/N) - cos(2πb/N)) - σ`.
    pub fn mode_eigenvalue(&self, a: i64, b: i64) -> f64 {
        let t = 2.0 * std::f64::consts::PI / self.n as f64;
        let s = |k: i64| 1.0 - (t * k as f64).cos();
        2.0 * (s(a) + s(b)) / (self.h * self.h) - self.sigma
    }

    /// Every eigenvalue of the operator, ascending, from the Fourier symbol.
    pub fn exact_spectrum(&self) -> Vec<f64> {
        let n = self.n as i64;
        let mut out: Vec<f64> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .map(|(a, b)| self.mode_eigenvalue(a, b))
            .collect();
        out.sort_by(f64::total_cmp);
        out
    }
}

impl SymOperator for GridOperator {
    fn dim(&self) -> usize {
        self.n * self.n
    }

    /// Stencil `(4u - ((l + r) + (d + t)))/h² - σu`; the grouping makes the
    /// Laplacian part vanish exactly on constants.
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let n = self.n;
        let inv = 1.0 / (self.h * self.h);
        for i in 0..n {
            let up = (i + n - 1) % n;
            let down = (i + 1) % n;
            for j in 0..n {
                let left = (j + n - 1) % n;
                let right = (j + 1) % n;
                let c = x[i * n + j];
                let lr = x[i * n + left] + x[i * n + right];
                let ud = x[up * n + j] + x[down * n + j];
                y[i * n + j] = (4.0 * c - (lr + ud)) * inv - self.sigma * c;
            }
        }
    }

    fn gershgorin(&self) -> (f64, f64) {
        let inv = 1.0 / (self.h * self.h);
        (-self.sigma, 8.0 * inv - self.sigma)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_are_exact() {
        for n in [4, 7, 32, 128] {
            let g = torus_grid_operator(n, 2.0).unwrap();
            let x = vec![0.37; n * n];
            let mut y = vec![0.0; n * n];
            g.apply(&x, &mut y);
            assert!(y.iter().all(|&v| v == -2.0 * 0.37));
        }
        assert!(torus_grid_operator(3, 2.0).is_err());
    }

    #[test]
    fn sparse_form_matches_stencil_and_is_symmetric() {
        let g = torus_grid_operator(9, 2.0).unwrap();
        let a = g.to_csr();
        assert_eq!(a.asymmetry(), 0.0);
        assert_eq!(a.nnz(), 5 * 81);
        let lap = g.laplacian_csr();
        let scale = 1.0 / (g.h * g.h);
        assert!(lap.row_sums().iter().all(|s| s.abs() <= 1e-15 * scale));
        let x: Vec<f64> = (0..81).map(|i| ((i * 37 % 11) as f64).sin()).collect();
        let (mut y1, mut y2) = (vec![0.0; 81], vec![0.0; 81]);
        g.apply(&x, &mut y1);
        a.apply(&x, &mut y2);
        for (p, q) in y1.iter().zip(&y2) {
            assert!((p - q).abs() <= 1e-12 * scale);
        }
        assert_eq!(a.gershgorin(), g.gershgorin());
    }

    #[test]
    fn cosine_mode_has_symbol_eigenvalue() {
        let g = torus_grid_operator(64, 2.0).unwrap();
        let f = g.sample(|u, _| (u / g.rho).cos());
        let mut y = vec![0.0; f.len()];
        g.apply(&f, &mut y);
        let expected = 2.0 / (g.h * g.h) * (1.0 - (g.h / g.rho).cos()) - 2.0;
        assert!((g.mode_eigenvalue(1, 0) - expected).abs() < 1e-12);
        for (yi, fi) in y.iter().zip(&f) {
            assert!((yi - expected * fi).abs() < 1e-9);
        }
    }

    #[test]
    fn exact_spectrum_bottom() {
        let g = torus_grid_operator(16, 2.0).unwrap();
        let s = g.exact_spectrum();
        assert_eq!(s[0], -2.0);
        assert!(s[1..5].iter().all(|&v| (v - s[1]).abs() < 1e-12));
        assert!(s[5] > s[1] + 0.5);
    }
}
