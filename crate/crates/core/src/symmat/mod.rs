//! Dense symmetric-matrix algebra.
//!
//! [`SymMatrix`] stores only the upper triangle, so `entry(i, j)` and
//! `entry(j, i)` are the same stored value. Products and commutators leave
//! the symmetric world and are returned as a general [`SquareMatrix`].

mod eigen;
mod family;
mod fundamental;

pub use eigen::{sym_eigen, sym_eigenvalues, SymEigen, JACOBI_MAX_SWEEPS, JACOBI_REL_THRESHOLD};
pub use family::{FamilyDocument, Hypotheses, MatrixFamily};
pub use fundamental::{
    decay_sweep, fundamental_matrix, power_trace, random_decay_case,
    top_eigenvalue_log_ratio_decay, top_eigenvalue_ratio_decay, DecaySummary, FundamentalMatrix,
    PowerTrace,
};

use crate::error::{Error, Result};

#[inline]
fn packed_index(dim: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * (2 * dim - i + 1) / 2 + (j - i)
}

/// Real symmetric `n × n` matrix in packed row-major upper-triangle storage.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    upper: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "symmetric matrix dimension must be positive");
        Self {
            dim,
            upper: vec![0.0; dim * (dim + 1) / 2],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diag(&vec![1.0; dim])
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut out = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            out.set(i, i, d);
        }
        out
    }

    /// Build from the upper triangle listed row by row
    /// (`(0,0), (0,1), …, (0,n-1), (1,1), …`).
    pub fn from_upper(dim: usize, upper: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("matrix dimension must be positive"));
        }
        Error::check_dim(dim * (dim + 1) / 2, upper.len())?;
        Ok(Self { dim, upper })
    }

    /// Build from a closure evaluated on the upper triangle only.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut out = Self::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                out.set(i, j, f(i, j));
            }
        }
        out
    }

    /// Build from full rows; the rows must be exactly symmetric.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::invalid("matrix dimension must be positive"));
        }
        for row in rows {
            Error::check_dim(dim, row.len())?;
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::invalid(format!(
                        "rows are not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self::from_fn(dim, |i, j| rows[i][j]))
    }

    /// The symmetric unit `E_ij + E_ji` (or `E_ii` on the diagonal).
    pub fn unit_pair(dim: usize, i: usize, j: usize) -> Self {
        let mut out = Self::zeros(dim);
        out.set(i, j, 1.0);
        out
    }

    /// Symmetric part `(M + Mᵀ) / 2` of a general square matrix.
    pub fn symmetric_part(m: &SquareMatrix) -> Self {
        Self::from_fn(m.dim(), |i, j| {
            if i == j {
                m.get(i, i)
            } else {
                0.5 * (m.get(i, j) + m.get(j, i))
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.upper[packed_index(self.dim, i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        let k = packed_index(self.dim, i, j);
        self.upper[k] = value;
    }

    /// Packed upper triangle, row-major.
    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// `‖A‖² = Σ_ij a_ij²`.
    pub fn norm_sq(&self) -> f64 {
        let mut diag = 0.0;
        let mut off = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                let v = self.get(i, j);
                if i == j {
                    diag += v * v;
                } else {
                    off += v * v;
                }
            }
        }
        diag + 2.0 * off
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.upper.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn max_offdiag_abs(&self) -> f64 {
        let mut out: f64 = 0.0;
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                out = out.max(self.get(i, j).abs());
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.upper.iter().all(|&v| v == 0.0)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            upper: self.upper.iter().map(|v| v * factor).collect(),
        }
    }

    /// `self + factor · other`.
    pub fn add_scaled(&self, factor: f64, other: &SymMatrix) -> Result<Self> {
        Error::check_dim(self.dim, other.dim)?;
        Ok(Self {
            dim: self.dim,
            upper: self
                .upper
                .iter()
                .zip(&other.upper)
                .map(|(a, b)| a + factor * b)
                .collect(),
        })
    }

    pub fn to_dense(&self) -> SquareMatrix {
        SquareMatrix::from_fn(self.dim, |i, j| self.get(i, j))
    }

    /// `Q A Qᵀ`, symmetrized by evaluating only the upper triangle.
    pub fn similarity(&self, q: &SquareMatrix) -> Result<Self> {
        Error::check_dim(self.dim, q.dim())?;
        let aqt = self.to_dense().mul(&q.transpose())?;
        let n = self.dim;
        Ok(Self::from_fn(n, |i, j| {
            (0..n).map(|k| q.get(i, k) * aqt.get(k, j)).sum()
        }))
    }

    pub fn mul(&self, other: &SymMatrix) -> Result<SquareMatrix> {
        Error::check_dim(self.dim, other.dim)?;
        let n = self.dim;
        Ok(SquareMatrix::from_fn(n, |i, j| {
            (0..n).map(|k| self.get(i, k) * other.get(k, j)).sum()
        }))
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        Error::check_dim(self.dim, x.len())?;
        Ok((0..self.dim)
            .map(|i| (0..self.dim).map(|k| self.get(i, k) * x[k]).sum())
            .collect())
    }

    /// `xᵀ A x`.
    pub fn quadratic_form(&self, x: &[f64]) -> Result<f64> {
        let ax = self.mul_vec(x)?;
        Ok(ax.iter().zip(x).map(|(a, b)| a * b).sum())
    }
}

/// General dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        for row in rows {
            Error::check_dim(dim, row.len())?;
        }
        Ok(Self::from_fn(dim, |i, j| rows[i][j]))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.dim + j] = value;
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i))
    }

    pub fn mul(&self, other: &SquareMatrix) -> Result<Self> {
        Error::check_dim(self.dim, other.dim)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SquareMatrix) -> Result<Self> {
        Error::check_dim(self.dim, other.dim)?;
        Ok(Self {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn add(&self, other: &SquareMatrix) -> Result<Self> {
        Error::check_dim(self.dim, other.dim)?;
        Ok(Self {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }
}

/// Frobenius inner product `⟨A, B⟩ = Tr(A Bᵀ) = Σ_ij a_ij b_ij`.
pub fn frobenius_inner(a: &SymMatrix, b: &SymMatrix) -> Result<f64> {
    Error::check_dim(a.dim, b.dim)?;
    let n = a.dim;
    let mut diag = 0.0;
    let mut off = 0.0;
    for i in 0..n {
        for j in i..n {
            let p = a.get(i, j) * b.get(i, j);
            if i == j {
                diag += p;
            } else {
                off += p;
            }
        }
    }
    Ok(diag + 2.0 * off)
}

/// `[A, B] = AB - BA`.
///
/// For symmetric inputs the result is antisymmetric; the lower triangle is
/// written as the exact negation of the upper one.
pub fn commutator(a: &SymMatrix, b: &SymMatrix) -> Result<SquareMatrix> {
    Error::check_dim(a.dim, b.dim)?;
    let n = a.dim;
    let mut out = SquareMatrix::zeros(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let mut ab = 0.0;
            let mut ba = 0.0;
            for k in 0..n {
                ab += a.get(i, k) * b.get(k, j);
                ba += b.get(i, k) * a.get(k, j);
            }
            let c = ab - ba;
            out.set(i, j, c);
            out.set(j, i, -c);
        }
    }
    Ok(out)
}

/// `‖AB - BA‖²` in the Frobenius norm.
pub fn commutator_norm_sq(a: &SymMatrix, b: &SymMatrix) -> Result<f64> {
    let c = commutator(a, b)?;
    let n = c.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let v = c.get(i, j);
            acc += v * v;
        }
    }
    Ok(2.0 * acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flip() -> SymMatrix {
        SymMatrix::from_diag(&[1.0, -1.0])
    }

    fn swap() -> SymMatrix {
        SymMatrix::unit_pair(2, 0, 1)
    }

    #[test]
    fn packed_storage_is_symmetric() {
        let mut a = SymMatrix::zeros(4);
        a.set(3, 1, 2.5);
        assert_eq!(a.get(1, 3), 2.5);
        assert_eq!(a.upper().len(), 10);
        let b = SymMatrix::from_upper(3, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        assert_eq!(b.get(0, 2), 3.0);
        assert_eq!(b.get(2, 1), 5.0);
        assert_eq!(b.get(2, 2), 6.0);
        assert!(SymMatrix::from_upper(3, vec![1.0; 5]).is_err());
        assert!(SymMatrix::from_rows(&[vec![1.0, 2.0], vec![2.5, 1.0]]).is_err());
    }

    #[test]
    fn inner_product_examples() {
        let i2 = SymMatrix::identity(2);
        assert_eq!(frobenius_inner(&i2, &i2).unwrap(), 2.0);
        assert_eq!(frobenius_inner(&flip(), &swap()).unwrap(), 0.0);
        assert!(matches!(
            frobenius_inner(&i2, &SymMatrix::identity(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn commutator_examples() {
        let a = SymMatrix::from_upper(3, vec![1.0, 2.0, -1.0, 0.5, 3.0, -2.0]).unwrap();
        assert_eq!(commutator(&a, &a).unwrap().max_abs(), 0.0);
        assert_eq!(commutator(&SymMatrix::identity(3), &a).unwrap().max_abs(), 0.0);

        // diag(1,-1)·offdiag(1) = [[0,1],[-1,0]], offdiag(1)·diag(1,-1) = [[0,-1],[1,0]]
        let c = commutator(&flip(), &swap()).unwrap();
        assert_eq!(c.get(0, 1), 2.0);
        assert_eq!(c.get(1, 0), -2.0);
        assert_eq!(c.get(0, 0), 0.0);
        assert_eq!(c.get(1, 1), 0.0);
        assert_eq!(commutator_norm_sq(&flip(), &swap()).unwrap(), 8.0);
        assert_eq!(commutator_norm_sq(&a, &a).unwrap(), 0.0);
        assert!(commutator(&a, &flip()).is_err());
    }

    #[test]
    fn commutator_matches_dense_products() {
        let a = SymMatrix::from_upper(3, vec![1.0, 2.0, -1.0, 0.5, 3.0, -2.0]).unwrap();
        let b = SymMatrix::from_upper(3, vec![0.3, -1.0, 4.0, 2.0, 0.0, 1.5]).unwrap();
        let dense = a.mul(&b).unwrap().sub(&b.mul(&a).unwrap()).unwrap();
        let c = commutator(&a, &b).unwrap();
        assert!(dense.sub(&c).unwrap().max_abs() < 1e-14);
        assert!((c.norm_sq() - commutator_norm_sq(&a, &b).unwrap()).abs() < 1e-12);
        assert_eq!(c.add(&c.transpose()).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn similarity_with_permutation() {
        let a = SymMatrix::from_diag(&[1.0, 2.0, 3.0]);
        let p = SquareMatrix::from_rows(&[
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![1.0, 0.0, 0.0],
        ])
        .unwrap();
        assert_eq!(a.similarity(&p).unwrap().diagonal(), vec![2.0, 3.0, 1.0]);
    }
}
