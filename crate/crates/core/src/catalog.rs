//! Second fundamental forms of the rigidity models at a single point.
//!
//! The models are homogeneous with parallel second fundamental form, so the
//! data at one point describes the whole submanifold.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lu::{lemma2_check, InequalityReport};
use crate::symmat::{
    commutator_norm_sq, frobenius_inner, fundamental_matrix, MatrixFamily, SymMatrix,
};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ModelKind {
    /// `S^r(√(r/n)) × S^{n-r}(√((n-r)/n))` in `S^{n+m}`.
    Clifford { r: usize, n: usize, m: usize },
    /// The Veronese surface in `S^{2+m}`.
    Veronese { m: usize },
    TotallyGeodesic { n: usize, m: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct ModelSubmanifold {
    pub kind: ModelKind,
    pub family: MatrixFamily,
    /// Closed-form value of `σ = Σ ‖A_α‖²`.
    pub sigma: f64,
    pub n: usize,
}

impl ModelSubmanifold {
    pub fn new(kind: ModelKind) -> Result<Self> {
        match kind {
            ModelKind::Clifford { r, n, m } => clifford_family(r, n, m),
            ModelKind::Veronese { m } => veronese_family(m),
            ModelKind::TotallyGeodesic { n, m } => geodesic_family(n, m),
        }
    }

    pub fn m(&self) -> usize {
        self.family.m()
    }

    pub fn is_totally_geodesic(&self) -> bool {
        matches!(self.kind, ModelKind::TotallyGeodesic { .. })
    }

    pub fn name(&self) -> String {
        match self.kind {
            ModelKind::Clifford { r, n, m } => format!("clifford(r={r},n={n},m={m})"),
            ModelKind::Veronese { m } => format!("veronese(m={m})"),
            ModelKind::TotallyGeodesic { n, m } => format!("geodesic(n={n},m={m})"),
        }
    }
}

/// Principal curvatures `√((n-r)/r)` (×r) and `-√(r/(n-r))` (×(n-r)) in the
/// first normal direction, zero in the others.
pub fn clifford_family(r: usize, n: usize, m: usize) -> Result<ModelSubmanifold> {
    if n < 2 || r < 1 || r > n - 1 {
        return Err(Error::invalid(format!(
            "Clifford hypersurface needs 1 <= r <= n - 1 and n >= 2, got r = {r}, n = {n}"
        )));
    }
    if m < 1 {
        return Err(Error::invalid("codimension m must be at least 1"));
    }
    let (rf, sf) = (r as f64, (n - r) as f64);
    let up = (sf / rf).sqrt();
    let down = -(rf / sf).sqrt();
    let diag: Vec<f64> = (0..n).map(|i| if i < r { up } else { down }).collect();
    let family = MatrixFamily::new(vec![SymMatrix::from_diag(&diag)])?.padded(m);
    Ok(ModelSubmanifold {
        kind: ModelKind::Clifford { r, n, m },
        family,
        sigma: n as f64,
        n,
    })
}

/// `A_1 = diag(1, -1)/√3`, `A_2 = (E_12 + E_21)/√3`, remaining normal
/// directions zero.
pub fn veronese_family(m: usize) -> Result<ModelSubmanifold> {
    if m < 2 {
        return Err(Error::invalid(format!(
            "the Veronese surface needs codimension m >= 2, got {m}"
        )));
    }
    let c = 1.0 / 3f64.sqrt();
    let a = SymMatrix::from_diag(&[c, -c]);
    let b = SymMatrix::from_upper(2, vec![0.0, c, 0.0])?;
    let family = MatrixFamily::new(vec![a, b])?.padded(m);
    Ok(ModelSubmanifold {
        kind: ModelKind::Veronese { m },
        family,
        sigma: 4.0 / 3.0,
        n: 2,
    })
}

pub fn geodesic_family(n: usize, m: usize) -> Result<ModelSubmanifold> {
    if n < 1 || m < 1 {
        return Err(Error::invalid(format!(
            "need n >= 1 and m >= 1, got n = {n}, m = {m}"
        )));
    }
    Ok(ModelSubmanifold {
        kind: ModelKind::TotallyGeodesic { n, m },
        family: MatrixFamily::zeros(n, m),
        sigma: 0.0,
        n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PinchingReport {
    pub sigma: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    /// `σ + λ_2`.
    pub pinching: f64,
    pub n: usize,
    /// `|σ + λ_2 - n| ≤ tol` on a model that is not totally geodesic.
    pub saturates: bool,
}

/// Pinching quantities computed from the fundamental matrix of `family`.
pub fn pinching_of(family: &MatrixFamily, n: usize, tol: f64) -> Result<PinchingReport> {
    let s = fundamental_matrix(family)?;
    let sigma = s.sigma();
    let lambda2 = s.lambda2();
    let pinching = sigma + lambda2;
    Ok(PinchingReport {
        sigma,
        lambda1: s.lambda1(),
        lambda2,
        pinching,
        n,
        saturates: sigma > tol && (pinching - n as f64).abs() <= tol * (n as f64).max(1.0),
    })
}

pub fn pinching_report(model: &ModelSubmanifold, tol: f64) -> Result<PinchingReport> {
    pinching_of(&model.family, model.n, tol)
}

/// `R_α = n‖A_α‖² - Σ_β ‖[A_α, A_β]‖² - Σ_β ⟨A_α, A_β⟩²`, the right side of
/// the Simons identity in direction `α` (`Tr C² = -‖C‖²` for antisymmetric
/// `C`). It vanishes when the second fundamental form is parallel.
pub fn simons_residual(f: &MatrixFamily, n: usize) -> Result<Vec<f64>> {
    Error::check_dim(n, f.n())?;
    let members = f.members();
    members
        .iter()
        .map(|a| {
            let mut r = n as f64 * a.norm_sq();
            for b in members {
                r -= commutator_norm_sq(a, b)?;
                r -= frobenius_inner(a, b)?.powi(2);
            }
            Ok(r)
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct SaturationReport {
    /// Index (0-based) of the member used as the unit leading matrix.
    pub lead: usize,
    pub lead_norm: f64,
    pub report: InequalityReport,
}

/// Run the commutator inequality on a model: the largest member, scaled to
/// unit norm, leads and the others follow in their original order. Families
/// with a single member are padded with a zero matrix.
pub fn lemma2_saturation(family: &MatrixFamily, tols: &Tolerances) -> Result<SaturationReport> {
    let norms = family.norms_sq();
    let (lead, &lead_sq) = norms
        .iter()
        .enumerate()
        .max_by(|(i, x), (j, y)| x.total_cmp(y).then(j.cmp(i)))
        .expect("families are nonempty");
    if lead_sq == 0.0 {
        return Err(Error::invalid("all members vanish; there is no leading direction"));
    }
    let lead_norm = lead_sq.sqrt();
    let mut members = vec![family.member(lead).scaled(1.0 / lead_norm)];
    members.extend(
        family
            .members()
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != lead)
            .map(|(_, a)| a.clone()),
    );
    let f = MatrixFamily::new(members)?.padded(2);
    Ok(SaturationReport {
        lead,
        lead_norm,
        report: lemma2_check(&f, tols)?,
    })
}

/// Catalog used by the reports: every Clifford hypersurface with
/// `n ∈ n_range`, the Veronese surface and a totally geodesic sphere, each
/// in codimensions 1 (where allowed) through `max_m`.
pub fn standard_models(n_max: usize, max_m: usize) -> Result<Vec<ModelSubmanifold>> {
    let mut out = Vec::new();
    for n in 2..=n_max {
        for r in 1..n {
            out.push(clifford_family(r, n, 1)?);
        }
    }
    for m in 2..=max_m.max(2) {
        out.push(clifford_family(1, 2, m)?);
        out.push(veronese_family(m)?);
    }
    out.push(geodesic_family(2, 1)?);
    out.push(geodesic_family(3, 2)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lu::sampling::{random_orthogonal, random_orthogonal_family};
    use crate::rng::rng_from_seed;

    const TOL: f64 = 1e-12;

    #[test]
    fn clifford_examples() {
        let m = clifford_family(1, 2, 1).unwrap();
        assert_eq!(m.family.member(0).diagonal(), vec![1.0, -1.0]);
        assert!((m.family.member(0).norm_sq() - 2.0).abs() < TOL);

        let m = clifford_family(2, 4, 1).unwrap();
        assert_eq!(m.family.member(0).diagonal(), vec![1.0, 1.0, -1.0, -1.0]);

        let m = clifford_family(1, 3, 2).unwrap();
        let p = pinching_report(&m, 1e-10).unwrap();
        assert!((p.sigma - 3.0).abs() < TOL && p.lambda2.abs() < TOL && p.saturates);

        assert!(clifford_family(0, 3, 1).is_err());
        assert!(clifford_family(3, 3, 1).is_err());
    }

    #[test]
    fn veronese_examples() {
        let v = veronese_family(2).unwrap();
        let (a, b) = (v.family.member(0), v.family.member(1));
        assert!((a.norm_sq() - 2.0 / 3.0).abs() < TOL);
        assert!((b.norm_sq() - 2.0 / 3.0).abs() < TOL);
        assert!((commutator_norm_sq(a, b).unwrap() - 8.0 / 9.0).abs() < TOL);
        let p = pinching_report(&v, 1e-10).unwrap();
        assert!((p.sigma - 4.0 / 3.0).abs() < TOL);
        assert!((p.lambda2 - 2.0 / 3.0).abs() < TOL);
        assert!((p.pinching - 2.0).abs() < TOL && p.saturates);

        let v5 = veronese_family(5).unwrap();
        let s = fundamental_matrix(&v5.family).unwrap();
        let expected = [2.0 / 3.0, 2.0 / 3.0, 0.0, 0.0, 0.0];
        for (x, y) in s.eigenvalues().iter().zip(expected) {
            assert!((x - y).abs() < TOL);
        }
        assert!(veronese_family(1).is_err());
    }

    #[test]
    fn geodesic_is_zero() {
        let g = geodesic_family(3, 1).unwrap();
        assert!(g.family.is_zero());
        let p = pinching_report(&g, 1e-10).unwrap();
        assert_eq!((p.sigma, p.lambda2, p.pinching), (0.0, 0.0, 0.0));
        assert!(!p.saturates);
        assert!(lemma2_saturation(&g.family, &Tolerances::default()).is_err());
    }

    #[test]
    fn models_are_minimal_with_vanishing_simons_residual() {
        for model in standard_models(10, 4).unwrap() {
            assert!(model.family.max_abs_trace() <= 1e-14, "{}", model.name());
            let s = fundamental_matrix(&model.family).unwrap();
            assert!((s.sigma() - model.sigma).abs() <= TOL * model.n as f64);
            let res = simons_residual(&model.family, model.n).unwrap();
            assert!(res.iter().all(|r| r.abs() <= TOL), "{}: {res:?}", model.name());
        }
    }

    #[test]
    fn diagnostics_are_frame_invariant() {
        let mut rng = rng_from_seed(11);
        for model in standard_models(6, 3).unwrap() {
            let base = pinching_report(&model, 1e-10).unwrap();
            let q = random_orthogonal(&mut rng, model.n);
            let p = random_orthogonal(&mut rng, model.m());
            let moved = model.family.similarity(&q).unwrap().mix_normals(&p).unwrap();
            let after = pinching_of(&moved, model.n, 1e-10).unwrap();
            assert!((after.sigma - base.sigma).abs() <= 1e-10);
            assert!((after.lambda2 - base.lambda2).abs() <= 1e-10);
            assert_eq!(after.saturates, base.saturates);
            let res = simons_residual(&moved, model.n).unwrap();
            assert!(res.iter().all(|r| r.abs() <= 1e-10));
        }
        // Generic families: each residual is invariant under a change of
        // tangent frame, and their sum under a change of normal frame.
        for _ in 0..20 {
            let f = random_orthogonal_family(&mut rng, 4, 3);
            let base = simons_residual(&f, 4).unwrap();
            let q = random_orthogonal(&mut rng, 4);
            let turned = simons_residual(&f.similarity(&q).unwrap(), 4).unwrap();
            for (x, y) in base.iter().zip(&turned) {
                assert!((x - y).abs() <= 1e-10);
            }
            let p = random_orthogonal(&mut rng, 3);
            let mixed: f64 = simons_residual(&f.mix_normals(&p).unwrap(), 4).unwrap().iter().sum();
            assert!((mixed - base.iter().sum::<f64>()).abs() <= 1e-10);
        }
    }

    #[test]
    fn generic_families_have_nonzero_residual() {
        let mut rng = rng_from_seed(5);
        let f = random_orthogonal_family(&mut rng, 4, 3);
        let res = simons_residual(&f, 4).unwrap();
        assert!(res.iter().any(|r| r.abs() > 1e-6));
    }

    #[test]
    fn commutator_inequality_on_models() {
        let tols = Tolerances::default();
        let v = veronese_family(2).unwrap();
        let sat = lemma2_saturation(&v.family, &tols).unwrap();
        assert!(sat.report.slack.abs() < TOL && sat.report.is_equality);
        assert!((sat.report.bound - 4.0 / 3.0).abs() < TOL);

        // Scaling the trailing member keeps equality: both sides are
        // quadratic in it.
        let scaled = MatrixFamily::new(vec![
            v.family.member(0).clone(),
            v.family.member(1).scaled(0.9),
        ])
        .unwrap();
        let sat = lemma2_saturation(&scaled, &tols).unwrap();
        assert!(sat.report.slack.abs() < TOL);

        // An extra direction commuting with everything gives slack ε².
        let eps = 0.1;
        let mut members = v.family.members().to_vec();
        members.push(SymMatrix::identity(2).scaled(eps));
        let sat = lemma2_saturation(&MatrixFamily::new(members).unwrap(), &tols).unwrap();
        assert!((sat.report.slack - 2.0 * eps * eps).abs() < TOL);

        let c = clifford_family(1, 2, 2).unwrap();
        let sat = lemma2_saturation(&c.family, &tols).unwrap();
        assert_eq!((sat.report.lhs, sat.report.bound), (0.0, 0.0));
        let c = clifford_family(2, 5, 1).unwrap();
        assert_eq!(lemma2_saturation(&c.family, &tols).unwrap().report.slack, 0.0);
    }

    #[test]
    fn veronese_is_the_first_commutator_equality() {
        use crate::lu::{construct_lemma2_equality, Lemma2EqualityConfig};
        let v = veronese_family(2).unwrap();
        let cfg = Lemma2EqualityConfig {
            n: 2,
            m: 2,
            k: 1,
            lambda_scale: v.family.member(0).norm(),
            mu_scale: 1.0 / 3f64.sqrt(),
        };
        let e = construct_lemma2_equality(&cfg).unwrap();
        for (a, b) in e.members().iter().zip(v.family.members()) {
            for (x, y) in a.upper().iter().zip(b.upper()) {
                assert!((x - y).abs() <= 1e-14);
            }
        }
    }
}
