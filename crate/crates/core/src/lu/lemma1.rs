//! `Σ_{i<j} (η_i - η_j)² r_ij ≤ Σ r_ij + max r_ij` for `Σ η_i = 0`, `‖η‖ = 1`.
//!
//! The left side is the quadratic form of the weighted graph Laplacian
//! `L_r = Σ r_ij (e_i - e_j)(e_i - e_j)ᵀ`, so its maximum over the
//! constraint set is exactly `λ_max(L_r)`; [`lemma1_maximize`] uses that
//! to certify the bound for a weight set rather than a single `η`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::symmat::{sym_eigen, SymMatrix};
use crate::tolerance::Tolerances;

/// Nonnegative weights `r_ij`, `i < j`, on `n` indices.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeWeights {
    n: usize,
    values: Vec<f64>,
}

#[inline]
fn edge_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

impl EdgeWeights {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            values: vec![0.0; n * n.saturating_sub(1) / 2],
        }
    }

    /// Weights listed pair by pair: `(0,1), (0,2), …, (0,n-1), (1,2), …`.
    pub fn from_values(n: usize, values: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("weights need n >= 2"));
        }
        Error::check_dim(n * (n - 1) / 2, values.len())?;
        if let Some(bad) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::invalid(format!("weight {bad} is not a nonnegative number")));
        }
        Ok(Self { n, values })
    }

    /// Build from `(i, j, r_ij)` triples; unlisted pairs are zero.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("weights need n >= 2"));
        }
        let mut w = Self::zeros(n);
        for &(i, j, r) in edges {
            w.set(i, j, r)?;
        }
        Ok(w)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `r_ij` for `i ≠ j` in either order.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        self.values[edge_index(self.n, i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, r: f64) -> Result<()> {
        if i == j || i >= self.n || j >= self.n {
            return Err(Error::invalid(format!("({i}, {j}) is not a pair of distinct indices < {}", self.n)));
        }
        if !(r.is_finite() && r >= 0.0) {
            return Err(Error::invalid(format!("weight {r} is not a nonnegative number")));
        }
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        let k = edge_index(self.n, i, j);
        self.values[k] = r;
        Ok(())
    }

    /// `(i, j, r_ij)` over all pairs `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| ((i + 1)..self.n).map(move |j| (i, j, self.get(i, j))))
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Largest weight; zero for an all-zero set.
    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&r| r == 0.0)
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::from_values(self.n, self.values.iter().map(|r| r * factor).collect())
    }

    /// Relabel indices: entry `(a, b)` of the result is `r_{perm[a], perm[b]}`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut out = Self::zeros(self.n);
        for a in 0..self.n {
            for b in (a + 1)..self.n {
                let k = edge_index(self.n, a, b);
                out.values[k] = self.get(perm[a], perm[b]);
            }
        }
        out
    }
}

/// A point `η` of the constraint set together with weights `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaWeights {
    eta: Vec<f64>,
    weights: EdgeWeights,
}

impl EtaWeights {
    /// Checks `|Σ η_i| ≤ tol` and `|‖η‖² - 1| ≤ tol`.
    pub fn new(eta: Vec<f64>, weights: EdgeWeights, tol: f64) -> Result<Self> {
        Error::check_dim(weights.n(), eta.len())?;
        let sum: f64 = eta.iter().sum();
        let norm_sq: f64 = eta.iter().map(|x| x * x).sum();
        if sum.abs() > tol {
            return Err(Error::Hypothesis {
                hypothesis: "zero sum",
                detail: format!("sum of eta = {sum:e}"),
            });
        }
        if (norm_sq - 1.0).abs() > tol {
            return Err(Error::Hypothesis {
                hypothesis: "unit norm",
                detail: format!("|eta|^2 = {norm_sq}"),
            });
        }
        Ok(Self { eta, weights })
    }

    pub fn n(&self) -> usize {
        self.eta.len()
    }

    pub fn eta(&self) -> &[f64] {
        &self.eta
    }

    pub fn weights(&self) -> &EdgeWeights {
        &self.weights
    }

    pub fn with_weights(&self, weights: EdgeWeights) -> Result<Self> {
        Error::check_dim(self.n(), weights.n())?;
        Ok(Self {
            eta: self.eta.clone(),
            weights,
        })
    }

    /// Apply the same relabelling to `η` and `r`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self {
            eta: perm.iter().map(|&i| self.eta[i]).collect(),
            weights: self.weights.permuted(perm),
        }
    }
}

pub fn lemma1_lhs(x: &EtaWeights) -> f64 {
    x.weights
        .edges()
        .map(|(i, j, r)| {
            let d = x.eta[i] - x.eta[j];
            d * d * r
        })
        .sum()
}

pub fn lemma1_bound(r: &EdgeWeights) -> f64 {
    r.sum() + r.max()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InequalityReport {
    pub lhs: f64,
    pub bound: f64,
    /// `bound - lhs`.
    pub slack: f64,
    pub is_equality: bool,
}

impl InequalityReport {
    pub fn new(lhs: f64, bound: f64, tols: &Tolerances) -> Self {
        let slack = bound - lhs;
        Self {
            lhs,
            bound,
            slack,
            is_equality: tols.is_equality(slack, bound),
        }
    }

    /// `slack ≥ -tol · max(1, bound)`.
    pub fn holds(&self, tol: f64) -> bool {
        self.slack >= -tol * self.bound.abs().max(1.0)
    }
}

pub fn lemma1_check(x: &EtaWeights, tols: &Tolerances) -> InequalityReport {
    InequalityReport::new(lemma1_lhs(x), lemma1_bound(x.weights()), tols)
}

/// `L_r = Σ_{i<j} r_ij (e_i - e_j)(e_i - e_j)ᵀ`.
pub fn weighted_laplacian(r: &EdgeWeights) -> SymMatrix {
    let mut l = SymMatrix::zeros(r.n());
    for (i, j, w) in r.edges() {
        if w == 0.0 {
            continue;
        }
        l.set(i, i, l.get(i, i) + w);
        l.set(j, j, l.get(j, j) + w);
        l.set(i, j, l.get(i, j) - w);
    }
    l
}

/// Maximizer of the left side over the constraint set, with the Lagrange
/// data of `Φ = f + λ Σ η_i + μ (‖η‖² - 1)`.
#[derive(Debug, Clone, Serialize)]
pub struct StationaryPoint {
    pub eta: Vec<f64>,
    /// Multiplier of the zero-sum constraint; vanishes at every critical point.
    pub lagrange_lambda: f64,
    /// Multiplier of the unit-norm constraint; `-μ` is the critical value.
    pub lagrange_mu: f64,
    pub critical_value: f64,
    /// `‖L_r η + μ η‖`.
    pub residual: f64,
}

pub fn lemma1_maximize(r: &EdgeWeights) -> Result<StationaryPoint> {
    if r.is_zero() {
        return Err(Error::invalid(
            "all weights vanish: every feasible eta is a maximizer",
        ));
    }
    let l = weighted_laplacian(r);
    let eig = sym_eigen(&l)?;
    let top = eig.values[0];
    let mut eta = eig.vector(0);

    // Remove the rounding-level component along the kernel vector (1, …, 1).
    let n = eta.len();
    let mean = eta.iter().sum::<f64>() / n as f64;
    eta.iter_mut().for_each(|x| *x -= mean);
    let norm = eta.iter().map(|x| x * x).sum::<f64>().sqrt();
    eta.iter_mut().for_each(|x| *x /= norm);
    let pivot = eta
        .iter()
        .copied()
        .find(|x| x.abs() > 1e-12)
        .unwrap_or(1.0);
    if pivot < 0.0 {
        eta.iter_mut().for_each(|x| *x = -*x);
    }

    let critical_value = l.quadratic_form(&eta)?;
    let mu = -critical_value;
    let l_eta = l.mul_vec(&eta)?;
    // Gradient of Φ is 2 L η + λ 1 + 2 μ η; λ is its least-squares value.
    let grad: Vec<f64> = l_eta.iter().zip(&eta).map(|(a, x)| 2.0 * a + 2.0 * mu * x).collect();
    let lagrange_lambda = -grad.iter().sum::<f64>() / n as f64;
    let residual = l_eta
        .iter()
        .zip(&eta)
        .map(|(a, x)| (a + mu * x).powi(2))
        .sum::<f64>()
        .sqrt();
    debug_assert!((critical_value - top).abs() <= 1e-9 * top.max(1.0));
    Ok(StationaryPoint {
        eta,
        lagrange_lambda,
        lagrange_mu: mu,
        critical_value,
        residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// One large positive entry at index 1, weights on the pairs `(1, j)`.
    Case1,
    /// The reversal-negation of `Case1`: one large negative entry at index `n`.
    Case2,
}

/// Parameters of an equality configuration of the zero-sum inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EqualityCase1 {
    pub n: usize,
    /// `1 ≤ k ≤ n - 1`; `k - 1` entries of `η` vanish.
    pub k: usize,
    /// Common value of the nonzero weights.
    pub weight: f64,
    pub orientation: Orientation,
}

fn case1_eta(n: usize, k: usize) -> Vec<f64> {
    let rest = (n - k) as f64;
    let head = rest.sqrt() / (rest + 1.0).sqrt();
    let tail = -1.0 / ((rest + 1.0) * rest).sqrt();
    (0..n)
        .map(|i| match i {
            0 => head,
            i if i < k => 0.0,
            _ => tail,
        })
        .collect()
}

pub fn construct_equality_eta(spec: &EqualityCase1) -> Result<EtaWeights> {
    let EqualityCase1 { n, k, weight, orientation } = *spec;
    if n < 2 || k < 1 || k >= n {
        return Err(Error::invalid(format!("need 1 <= k <= n - 1, got n = {n}, k = {k}")));
    }
    if !(weight.is_finite() && weight > 0.0) {
        return Err(Error::invalid(format!("equality weight must be positive, got {weight}")));
    }
    let mut eta = case1_eta(n, k);
    let mut weights = EdgeWeights::zeros(n);
    for j in k..n {
        weights.set(0, j, weight)?;
    }
    if orientation == Orientation::Case2 {
        let reversal: Vec<usize> = (0..n).rev().collect();
        eta = reversal.iter().map(|&i| -eta[i]).collect();
        weights = weights.permuted(&reversal);
    }
    EtaWeights::new(eta, weights, 1e-12)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "case", content = "k", rename_all = "lowercase")]
pub enum EqualityClass {
    Case1(usize),
    Case2(usize),
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub class: EqualityClass,
    /// `perm[a]` is the original index placed at sorted position `a`
    /// (`η` sorted descending, ties kept in input order).
    pub permutation: Vec<usize>,
}

fn matches_pattern(sorted: &EtaWeights, spec: &EqualityCase1, tol: f64) -> bool {
    let Ok(expected) = construct_equality_eta(spec) else {
        return false;
    };
    let eta_ok = sorted
        .eta()
        .iter()
        .zip(expected.eta())
        .all(|(a, b)| (a - b).abs() <= tol);
    let w_tol = tol * spec.weight.max(1.0);
    let r_ok = sorted
        .weights()
        .values()
        .iter()
        .zip(expected.weights().values())
        .all(|(a, b)| (a - b).abs() <= w_tol);
    eta_ok && r_ok
}

/// Match `x` against every equality configuration after sorting `η`
/// descending. For `k = n - 1` the two orientations describe the same
/// configuration and `Case1` is reported.
pub fn classify_equality(x: &EtaWeights, tol: f64) -> Classification {
    let n = x.n();
    let mut permutation: Vec<usize> = (0..n).collect();
    permutation.sort_by(|&a, &b| x.eta()[b].total_cmp(&x.eta()[a]));
    let sorted = x.permuted(&permutation);
    let none = |permutation| Classification { class: EqualityClass::None, permutation };

    if sorted.weights().max() <= tol {
        return none(permutation);
    }
    for orientation in [Orientation::Case1, Orientation::Case2] {
        // The common weight sits on the pair (1, n) in both orientations.
        let weight = sorted.weights().get(0, n - 1);
        if weight <= tol {
            continue;
        }
        for k in 1..n {
            let spec = EqualityCase1 { n, k, weight, orientation };
            if matches_pattern(&sorted, &spec, tol) {
                let class = match orientation {
                    Orientation::Case1 => EqualityClass::Case1(k),
                    Orientation::Case2 => EqualityClass::Case2(k),
                };
                return Classification { class, permutation };
            }
        }
    }
    none(permutation)
}
