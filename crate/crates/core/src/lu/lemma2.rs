//! `Σ_{α≥2} ‖[A_1, A_α]‖² ≤ Σ_{α≥2} ‖A_α‖² + ‖A_2‖²` for a pairwise
//! orthogonal family with `‖A_1‖ = 1` and `‖A_2‖ ≥ … ≥ ‖A_m‖`.

use serde::Serialize;

use super::lemma1::{EdgeWeights, EtaWeights, InequalityReport};
use crate::error::{Error, Result};
use crate::symmat::{commutator_norm_sq, sym_eigen, MatrixFamily, SymMatrix};
use crate::tolerance::Tolerances;

fn require_pair(f: &MatrixFamily) -> Result<()> {
    if f.m() < 2 {
        return Err(Error::invalid(format!(
            "the commutator inequality needs m >= 2 members, got {}",
            f.m()
        )));
    }
    Ok(())
}

pub fn lemma2_lhs(f: &MatrixFamily) -> Result<f64> {
    require_pair(f)?;
    let lead = f.member(0);
    f.members()[1..]
        .iter()
        .map(|a| commutator_norm_sq(lead, a))
        .sum()
}

/// Right side, after re-sorting `A_2, …, A_m` by decreasing norm.
///
/// Fails with [`Error::Hypothesis`] when `‖A_1‖ ≠ 1` or two members are not
/// orthogonal (both within `tol`).
pub fn lemma2_bound(f: &MatrixFamily, tol: f64) -> Result<f64> {
    require_pair(f)?;
    let lead_norm = f.member(0).norm();
    if (lead_norm - 1.0).abs() > tol {
        return Err(Error::Hypothesis {
            hypothesis: "unit leading member",
            detail: format!("|A_1| = {lead_norm}"),
        });
    }
    let norms = f.norms_sq();
    for a in 0..f.m() {
        for b in (a + 1)..f.m() {
            let inner = crate::symmat::frobenius_inner(f.member(a), f.member(b))?;
            if inner.abs() > tol * (norms[a] * norms[b]).sqrt().max(1.0) {
                return Err(Error::Hypothesis {
                    hypothesis: "pairwise orthogonal",
                    detail: format!("<A_{}, A_{}> = {inner:e}", a + 1, b + 1),
                });
            }
        }
    }
    let mut rest = norms[1..].to_vec();
    rest.sort_by(|x, y| y.total_cmp(x));
    Ok(rest.iter().sum::<f64>() + rest[0])
}

/// Both sides of the commutator inequality.
///
/// The commutator and Frobenius norms are invariant under a simultaneous
/// orthogonal change of basis, so the leading member does not need to be
/// diagonal here.
pub fn lemma2_check(f: &MatrixFamily, tols: &Tolerances) -> Result<InequalityReport> {
    let bound = lemma2_bound(f, tols.tol)?;
    let lhs = lemma2_lhs(f)?;
    Ok(InequalityReport::new(lhs, bound, tols))
}

/// An equality configuration of the commutator inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lemma2EqualityConfig {
    pub n: usize,
    pub m: usize,
    /// `1 ≤ k ≤ min(n - 1, m - 1)`: number of nonzero off-diagonal members.
    pub k: usize,
    /// `‖A_1‖` (1 for the inequality itself).
    pub lambda_scale: f64,
    /// Value of the two nonzero entries `(1, i)`, `(i, 1)` of `A_i`.
    pub mu_scale: f64,
}

/// `A_1 = λ · diag(√k/√(k+1), -1/√(k(k+1)) ×k, 0 ×(n-k-1))`,
/// `A_i = μ (E_1i + E_i1)` for `i = 2..=k+1`, and zero afterwards.
pub fn construct_lemma2_equality(cfg: &Lemma2EqualityConfig) -> Result<MatrixFamily> {
    let Lemma2EqualityConfig { n, m, k, lambda_scale, mu_scale } = *cfg;
    if n < 2 || m < 2 || k < 1 || k > (n - 1).min(m - 1) {
        return Err(Error::invalid(format!(
            "need 1 <= k <= min(n - 1, m - 1), got n = {n}, m = {m}, k = {k}"
        )));
    }
    let kf = k as f64;
    let head = kf.sqrt() / (kf + 1.0).sqrt();
    let tail = -1.0 / (kf * (kf + 1.0)).sqrt();
    let diag: Vec<f64> = (0..n)
        .map(|i| match i {
            0 => lambda_scale * head,
            i if i <= k => lambda_scale * tail,
            _ => 0.0,
        })
        .collect();
    let mut members = vec![SymMatrix::from_diag(&diag)];
    for alpha in 1..m {
        let mut a = SymMatrix::zeros(n);
        if alpha <= k {
            a.set(0, alpha, mu_scale);
        }
        members.push(a);
    }
    MatrixFamily::new(members)
}

/// Rotate the tangent frame so that `A_1` is diagonal (eigenvalues in
/// descending order); the leading member is written as an exact diagonal.
pub fn diagonalize_leading(f: &MatrixFamily) -> Result<MatrixFamily> {
    let eig = sym_eigen(f.member(0))?;
    let qt = eig.vectors.transpose();
    let mut members = vec![SymMatrix::from_diag(&eig.values)];
    for a in &f.members()[1..] {
        members.push(a.similarity(&qt)?);
    }
    MatrixFamily::new(members)
}

/// Reduce a family with diagonal, trace-free, unit `A_1 = diag(η)` to the
/// zero-sum inequality with `r_ij = 2 Σ_{α≥2} (a^α_ij)²`.
///
/// `Σ_α ‖[A_1, A_α]‖² = Σ_{i<j} (η_i - η_j)² r_ij` holds identically.
pub fn lemma2_to_lemma1(f: &MatrixFamily, tol: f64) -> Result<EtaWeights> {
    require_pair(f)?;
    let lead = f.member(0);
    let off = lead.max_offdiag_abs();
    if off > tol {
        return Err(Error::Hypothesis {
            hypothesis: "diagonal leading member",
            detail: format!("largest off-diagonal entry of A_1 is {off:e}"),
        });
    }
    let n = f.n();
    let mut weights = EdgeWeights::zeros(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let r: f64 = f.members()[1..].iter().map(|a| a.get(i, j).powi(2)).sum();
            weights.set(i, j, 2.0 * r)?;
        }
    }
    EtaWeights::new(lead.diagonal(), weights, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lu::{classify_equality, lemma1_lhs, EqualityClass};

    fn normalized_veronese() -> MatrixFamily {
        let s = 1.0 / 3f64.sqrt();
        let a3 = SymMatrix::from_diag(&[s, -s]);
        let a4 = SymMatrix::unit_pair(2, 0, 1).scaled(s);
        MatrixFamily::new(vec![a3.scaled(1.0 / a3.norm()), a4]).unwrap()
    }

    fn cfg(n: usize, m: usize, k: usize, mu: f64) -> Lemma2EqualityConfig {
        Lemma2EqualityConfig { n, m, k, lambda_scale: 1.0, mu_scale: mu }
    }

    #[test]
    fn zero_tail_gives_zero() {
        let f = MatrixFamily::new(vec![
            SymMatrix::from_diag(&[1.0 / 2f64.sqrt(), -1.0 / 2f64.sqrt(), 0.0]),
            SymMatrix::zeros(3),
            SymMatrix::zeros(3),
        ])
        .unwrap();
        let rep = lemma2_check(&f, &Tolerances::default()).unwrap();
        assert_eq!((rep.lhs, rep.bound, rep.slack), (0.0, 0.0, 0.0));
        assert!(rep.is_equality);
    }

    #[test]
    fn veronese_saturates() {
        let f = normalized_veronese();
        let lhs = lemma2_lhs(&f).unwrap();
        let bound = lemma2_bound(&f, 1e-10).unwrap();
        assert!((lhs - 4.0 / 3.0).abs() < 1e-14);
        assert!((bound - 4.0 / 3.0).abs() < 1e-14);
        assert!(lemma2_check(&f, &Tolerances::default()).unwrap().is_equality);
    }

    #[test]
    fn hypotheses_are_named() {
        let f = MatrixFamily::new(vec![SymMatrix::identity(2), SymMatrix::zeros(2)]).unwrap();
        assert!(matches!(
            lemma2_bound(&f, 1e-10),
            Err(Error::Hypothesis { hypothesis: "unit leading member", .. })
        ));
        let f = MatrixFamily::new(vec![
            SymMatrix::from_diag(&[1.0, 0.0]),
            SymMatrix::from_diag(&[1.0, 1.0]),
        ])
        .unwrap();
        assert!(matches!(
            lemma2_bound(&f, 1e-10),
            Err(Error::Hypothesis { hypothesis: "pairwise orthogonal", .. })
        ));
        let single = MatrixFamily::new(vec![SymMatrix::from_diag(&[1.0, 0.0])]).unwrap();
        assert!(lemma2_lhs(&single).is_err());
    }

    #[test]
    fn bound_resorts_tail_by_norm() {
        let f = MatrixFamily::new(vec![
            SymMatrix::from_diag(&[1.0, 0.0, 0.0]),
            SymMatrix::unit_pair(3, 1, 2),
            SymMatrix::unit_pair(3, 0, 1).scaled(2.0),
        ])
        .unwrap();
        // norms² 2 and 8: 2 + 8 + 8
        assert_eq!(lemma2_bound(&f, 1e-12).unwrap(), 18.0);
    }

    #[test]
    fn equality_configurations_saturate() {
        let f = construct_lemma2_equality(&cfg(2, 2, 1, 0.7)).unwrap();
        let h = 1.0 / 2f64.sqrt();
        assert_eq!(f.member(0).diagonal(), vec![h, -h]);
        assert_eq!(f.member(1), &SymMatrix::unit_pair(2, 0, 1).scaled(0.7));
        assert!(lemma2_check(&f, &Tolerances::default()).unwrap().slack.abs() < 1e-12);

        let f = construct_lemma2_equality(&cfg(5, 4, 3, 1.0)).unwrap();
        assert_eq!(f.m(), 4);
        assert!(f.members()[1..].iter().all(|a| !a.is_zero()));
        let rep = lemma2_check(&f, &Tolerances::default()).unwrap();
        assert!(rep.slack.abs() < 1e-12 && rep.is_equality);

        let f = construct_lemma2_equality(&cfg(4, 5, 2, 1.0)).unwrap();
        assert!(f.member(3).is_zero() && f.member(4).is_zero());
        assert_eq!(f.max_cross_inner().0, 0.0);
        assert!(f.max_abs_trace() < 1e-15);

        let f = construct_lemma2_equality(&cfg(4, 3, 2, 0.0)).unwrap();
        let rep = lemma2_check(&f, &Tolerances::default()).unwrap();
        assert_eq!((rep.lhs, rep.bound), (0.0, 0.0));

        assert!(construct_lemma2_equality(&cfg(3, 3, 3, 1.0)).is_err());
        assert!(construct_lemma2_equality(&cfg(5, 3, 3, 1.0)).is_err());
    }

    #[test]
    fn reduction_preserves_the_left_side() {
        let f = normalized_veronese();
        let x = lemma2_to_lemma1(&f, 1e-10).unwrap();
        let h = 1.0 / 2f64.sqrt();
        assert!((x.eta()[0] - h).abs() < 1e-15 && (x.eta()[1] + h).abs() < 1e-15);
        assert!((x.weights().get(0, 1) - 2.0 / 3.0).abs() < 1e-15);
        assert!((lemma1_lhs(&x) - lemma2_lhs(&f).unwrap()).abs() < 1e-14);

        let commuting = MatrixFamily::new(vec![
            SymMatrix::from_diag(&[h, -h, 0.0]),
            SymMatrix::from_diag(&[0.1, 0.1, -0.2]),
        ])
        .unwrap();
        let x = lemma2_to_lemma1(&commuting, 1e-10).unwrap();
        assert!(x.weights().is_zero());
        assert_eq!(lemma1_lhs(&x), 0.0);

        let not_diag = MatrixFamily::new(vec![
            SymMatrix::unit_pair(2, 0, 1).scaled(h),
            SymMatrix::zeros(2),
        ])
        .unwrap();
        assert!(lemma2_to_lemma1(&not_diag, 1e-10).is_err());
        let rotated = diagonalize_leading(&not_diag).unwrap();
        assert!(lemma2_to_lemma1(&rotated, 1e-10).is_ok());
    }

    #[test]
    fn equality_configurations_map_to_case1_with_complementary_k() {
        for n in 2..9 {
            for m in 2..7 {
                for k in 1..=(n - 1).min(m - 1) {
                    let f = construct_lemma2_equality(&cfg(n, m, k, 1.3)).unwrap();
                    let x = lemma2_to_lemma1(&f, 1e-12).unwrap();
                    let c = classify_equality(&x, 1e-9);
                    assert_eq!(c.class, EqualityClass::Case1(n - k), "n={n} m={m} k={k}");
                }
            }
        }
    }
}
