//! First eigenvalue of `L = -Δ - σ` on the catalog models.
//!
//! `σ` is constant on every model, so `spec(L) = spec(-Δ) - σ` and the
//! ground state is the constant function: `μ_1 = -σ`. The analytic spectra
//! make this explicit; the grid solver checks it independently on the flat
//! Clifford torus.

mod analytic;
mod eigs;
mod grid;

pub use analytic::{
    clifford_factors, clifford_spectrum, product_spectrum, schrodinger_mu1, sphere_spectrum,
    veronese_spectrum, AnalyticSpectrum, SphereSpec, MERGE_TOL,
};
pub use eigs::{rayleigh_quotient, smallest_eigenvalues, Eigenpairs, EigsOptions};
pub use grid::{torus_grid_operator, CsrMatrix, GridOperator, SymOperator, CLIFFORD_TORUS_RHO};

use serde::Serialize;

use crate::catalog::{pinching_report, ModelKind, ModelSubmanifold};
use crate::error::Result;

/// Spectrum of `-Δ` on a model, complete through its first nonzero level.
pub fn model_spectrum(model: &ModelSubmanifold) -> Result<AnalyticSpectrum> {
    match model.kind {
        ModelKind::Clifford { r, n, .. } => clifford_spectrum(r, n, 4.0 * n as f64),
        ModelKind::Veronese { .. } => Ok(veronese_spectrum(6)),
        ModelKind::TotallyGeodesic { n, .. } => Ok(sphere_spectrum(SphereSpec::new(n, 1.0)?, 3)),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MainTheoremReport {
    pub model: String,
    pub n: usize,
    pub sigma: f64,
    pub lambda2: f64,
    pub mu1: f64,
    /// `-n + λ_2`.
    pub bound: f64,
    /// `bound - μ_1`.
    pub gap: f64,
    /// The upper bound applies only when the model is not totally geodesic.
    pub applicable: bool,
    pub note: Option<String>,
    pub spectrum: AnalyticSpectrum,
}

/// Compare `μ_1` with `-n + max λ_2` on a model (`σ`, `λ_2` constant).
pub fn main_theorem_check(model: &ModelSubmanifold) -> Result<MainTheoremReport> {
    let pinch = pinching_report(model, 1e-10)?;
    let spectrum = model_spectrum(model)?;
    let mu1 = schrodinger_mu1(&spectrum, pinch.sigma)?;
    let bound = -(model.n as f64) + pinch.lambda2;
    let geodesic = model.is_totally_geodesic();
    Ok(MainTheoremReport {
        model: model.name(),
        n: model.n,
        sigma: pinch.sigma,
        lambda2: pinch.lambda2,
        mu1,
        bound,
        gap: bound - mu1,
        applicable: !geodesic,
        note: geodesic.then(|| "totally geodesic branch, mu1 = 0".to_string()),
        spectrum,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub h: f64,
    pub first: f64,
    pub second: f64,
    /// `first + σ`.
    pub first_error: f64,
    /// `second - (1/ρ² - σ)`.
    pub second_error: f64,
    /// `log2(|e_prev| / |e|)` against the previous row.
    pub order: Option<f64>,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceStudy {
    pub sigma: f64,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceStudy {
    pub fn min_order(&self) -> Option<f64> {
        self.rows.iter().filter_map(|r| r.order).reduce(f64::min)
    }

    pub fn max_first_error(&self) -> f64 {
        self.rows.iter().map(|r| r.first_error.abs()).fold(0.0, f64::max)
    }
}

/// Two smallest grid eigenvalues on the Clifford torus for each `N`.
pub fn torus_convergence_study(
    sizes: &[usize],
    sigma: f64,
    opts: &EigsOptions,
) -> Result<ConvergenceStudy> {
    // ρ² = 1/2 exactly
    let continuum_second = 2.0 - sigma;
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let g = torus_grid_operator(n, sigma)?;
        let pairs = smallest_eigenvalues(&g, 2, opts)?;
        let (first, second) = (pairs.values[0], pairs.values[1]);
        let second_error = second - continuum_second;
        let order = rows
            .last()
            .map(|prev| (prev.second_error.abs() / second_error.abs()).log2());
        rows.push(ConvergenceRow {
            n,
            h: g.h,
            first,
            second,
            first_error: first + sigma,
            second_error,
            order,
            iterations: pairs.iterations,
        });
    }
    Ok(ConvergenceStudy { sigma, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{clifford_family, geodesic_family, veronese_family};

    #[test]
    fn main_theorem_examples() {
        let r = main_theorem_check(&clifford_family(2, 4, 1).unwrap()).unwrap();
        assert!((r.mu1 + 4.0).abs() < 1e-12 && (r.bound + 4.0).abs() < 1e-12);
        assert!(r.gap.abs() < 1e-12 && r.applicable);

        let r = main_theorem_check(&veronese_family(2).unwrap()).unwrap();
        assert!((r.mu1 + 4.0 / 3.0).abs() < 1e-12);
        assert!((r.bound + 4.0 / 3.0).abs() < 1e-12);
        assert!(r.gap.abs() < 1e-12);

        let r = main_theorem_check(&geodesic_family(3, 1).unwrap()).unwrap();
        assert_eq!(r.mu1, 0.0);
        assert!(!r.applicable && r.note.is_some());
    }

    #[test]
    fn clifford_spectrum_has_first_nonzero_level_n() {
        for n in 2..=6 {
            for r in 1..n {
                let m = clifford_family(r, n, 1).unwrap();
                let s = model_spectrum(&m).unwrap();
                assert_eq!(s.pairs().next(), Some((0.0, 1)));
                assert!((s.eigenvalues[1] - n as f64).abs() < 1e-12, "r={r} n={n}");
            }
        }
    }

    #[test]
    fn small_convergence_study_is_second_order() {
        let study = torus_convergence_study(&[8, 16, 32], 2.0, &EigsOptions::default()).unwrap();
        assert!(study.max_first_error() <= 1e-12);
        assert!(study.min_order().unwrap() > 1.9);
        for row in &study.rows {
            let g = torus_grid_operator(row.n, 2.0).unwrap();
            assert!((row.second - g.mode_eigenvalue(1, 0)).abs() < 1e-9);
        }
    }
}
