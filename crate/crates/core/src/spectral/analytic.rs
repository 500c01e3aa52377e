//! Laplace spectra of round spheres, their products and the Veronese
//! surface.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Eigenvalues of `-Δ` closer than this are merged into one level.
pub const MERGE_TOL: f64 = 1e-12;

/// Round sphere `S^k(ρ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereSpec {
    pub k: usize,
    pub rho: f64,
    /// `ρ²`, kept separately so that rational radii squared stay exact.
    pub rho_sq: f64,
}

impl SphereSpec {
    pub fn new(k: usize, rho: f64) -> Result<Self> {
        if k < 1 || !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::invalid(format!(
                "sphere needs k >= 1 and a positive radius, got k = {k}, rho = {rho}"
            )));
        }
        Ok(Self { k, rho, rho_sq: rho * rho })
    }

    /// `S^k(√rho_sq)`.
    pub fn from_radius_sq(k: usize, rho_sq: f64) -> Result<Self> {
        let mut s = Self::new(k, rho_sq.sqrt())?;
        s.rho_sq = rho_sq;
        Ok(s)
    }

    /// Eigenvalue `l(l + k - 1)/ρ²` of level `l`.
    pub fn level_eigenvalue(&self, l: u64) -> f64 {
        (l * (l + self.k as u64 - 1)) as f64 / self.rho_sq
    }

    /// Dimension `C(k + l, k) - C(k + l - 2, k)` of the degree-`l` harmonics.
    pub fn level_multiplicity(&self, l: u64) -> u64 {
        let k = self.k as u64;
        let lower = if l >= 2 { binomial(k + l - 2, k) } else { 0 };
        binomial(k + l, k) - lower
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    // Each partial product is itself a binomial coefficient, so the
    // division is exact.
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Distinct eigenvalues of `-Δ` in ascending order with multiplicities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalyticSpectrum {
    pub eigenvalues: Vec<f64>,
    pub multiplicities: Vec<u64>,
}

impl AnalyticSpectrum {
    /// Sort, then merge eigenvalues within [`MERGE_TOL`] of the first member
    /// of their group.
    pub fn from_pairs(mut pairs: Vec<(f64, u64)>) -> Self {
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut eigenvalues: Vec<f64> = Vec::new();
        let mut multiplicities: Vec<u64> = Vec::new();
        for (value, mult) in pairs {
            match eigenvalues.last() {
                Some(&last) if (value - last).abs() <= MERGE_TOL => {
                    *multiplicities.last_mut().expect("parallel vectors") += mult;
                }
                _ => {
                    eigenvalues.push(value);
                    multiplicities.push(mult);
                }
            }
        }
        Self { eigenvalues, multiplicities }
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (f64, u64)> + '_ {
        self.eigenvalues.iter().copied().zip(self.multiplicities.iter().copied())
    }

    /// The first `count` levels.
    pub fn head(&self, count: usize) -> Self {
        let count = count.min(self.len());
        Self {
            eigenvalues: self.eigenvalues[..count].to_vec(),
            multiplicities: self.multiplicities[..count].to_vec(),
        }
    }

    /// Shift every eigenvalue by `-σ` (the spectrum of `-Δ - σ`).
    pub fn shifted(&self, sigma: f64) -> Self {
        Self {
            eigenvalues: self.eigenvalues.iter().map(|x| x - sigma).collect(),
            multiplicities: self.multiplicities.clone(),
        }
    }
}

/// Levels `l = 0..=cutoff` of `S^k(ρ)`.
pub fn sphere_spectrum(s: SphereSpec, cutoff: u64) -> AnalyticSpectrum {
    AnalyticSpectrum::from_pairs(
        (0..=cutoff)
            .map(|l| (s.level_eigenvalue(l), s.level_multiplicity(l)))
            .collect(),
    )
}

/// Levels of `S^k(ρ)` with eigenvalue at most `threshold`.
fn sphere_levels_below(s: SphereSpec, threshold: f64) -> Vec<(f64, u64)> {
    // eigenvalues grow monotonically in l
    (0u64..)
        .map(|l| (s.level_eigenvalue(l), s.level_multiplicity(l)))
        .take_while(|&(v, _)| v <= threshold + MERGE_TOL)
        .collect()
}

/// Spectrum of a product of spheres, complete up to `threshold`.
pub fn product_spectrum(factors: &[SphereSpec], threshold: f64) -> Result<AnalyticSpectrum> {
    if factors.is_empty() {
        return Err(Error::invalid("a product needs at least one factor"));
    }
    if !(threshold >= 0.0 && threshold.is_finite()) {
        return Err(Error::invalid(format!("threshold must be >= 0, got {threshold}")));
    }
    let mut acc: Vec<(f64, u64)> = vec![(0.0, 1)];
    for &f in factors {
        // every factor contributes at least 0, so no factor level above the
        // threshold can appear in a sum below it
        let levels = sphere_levels_below(f, threshold);
        let mut next = Vec::with_capacity(acc.len() * levels.len());
        for &(a, ma) in &acc {
            for &(b, mb) in &levels {
                if a + b <= threshold + MERGE_TOL {
                    next.push((a + b, ma * mb));
                }
            }
        }
        acc = AnalyticSpectrum::from_pairs(next).pairs().collect();
    }
    Ok(AnalyticSpectrum::from_pairs(acc))
}

/// The two sphere factors of the Clifford hypersurface `M_{r,n-r}`.
pub fn clifford_factors(r: usize, n: usize) -> Result<[SphereSpec; 2]> {
    if n < 2 || r < 1 || r >= n {
        return Err(Error::invalid(format!(
            "Clifford hypersurface needs 1 <= r <= n - 1, got r = {r}, n = {n}"
        )));
    }
    let (rf, nf) = (r as f64, n as f64);
    Ok([
        SphereSpec::from_radius_sq(r, rf / nf)?,
        SphereSpec::from_radius_sq(n - r, (nf - rf) / nf)?,
    ])
}

pub fn clifford_spectrum(r: usize, n: usize, threshold: f64) -> Result<AnalyticSpectrum> {
    product_spectrum(&clifford_factors(r, n)?, threshold)
}

/// The real projective plane of curvature 1/3: even levels of `S²(√3)`,
/// eigenvalue `l(l+1)/3` with multiplicity `2l + 1`, for `l ≤ cutoff`.
pub fn veronese_spectrum(cutoff: u64) -> AnalyticSpectrum {
    AnalyticSpectrum::from_pairs(
        (0..=cutoff)
            .step_by(2)
            .map(|l| ((l * (l + 1)) as f64 / 3.0, 2 * l + 1))
            .collect(),
    )
}

/// First eigenvalue of `-Δ - σ` for constant `σ`.
pub fn schrodinger_mu1(spec: &AnalyticSpectrum, sigma: f64) -> Result<f64> {
    spec.eigenvalues
        .iter()
        .copied()
        .reduce(f64::min)
        .map(|l| l - sigma)
        .ok_or_else(|| Error::invalid("empty spectrum"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn as_pairs(s: &AnalyticSpectrum) -> Vec<(f64, u64)> {
        s.pairs().collect()
    }

    /// Count harmonic polynomials directly: homogeneous polynomials of
    /// degree l in k+1 variables minus those of degree l-2.
    fn monomials(vars: u64, degree: u64) -> u64 {
        if vars == 1 {
            return 1;
        }
        (0..=degree).map(|d| monomials(vars - 1, degree - d)).sum()
    }

    #[test]
    fn sphere_examples() {
        let s2 = SphereSpec::new(2, 1.0).unwrap();
        assert_eq!(as_pairs(&sphere_spectrum(s2, 2)), vec![(0.0, 1), (2.0, 3), (6.0, 5)]);
        let s1 = SphereSpec::new(1, 1.0).unwrap();
        assert_eq!(as_pairs(&sphere_spectrum(s1, 2)), vec![(0.0, 1), (1.0, 2), (4.0, 2)]);
        for k in 1..8 {
            let s = SphereSpec::new(k, 0.7).unwrap();
            assert!((s.level_eigenvalue(1) - k as f64 / 0.49).abs() < 1e-12);
            assert_eq!(s.level_multiplicity(1), k as u64 + 1);
        }
        assert!(SphereSpec::new(0, 1.0).is_err());
        assert!(SphereSpec::new(2, -1.0).is_err());
    }

    #[test]
    fn multiplicities_match_harmonic_counting() {
        for k in 1..7u64 {
            let s = SphereSpec::new(k as usize, 1.0).unwrap();
            for l in 0..9u64 {
                let lower = if l >= 2 { monomials(k + 1, l - 2) } else { 0 };
                assert_eq!(s.level_multiplicity(l), monomials(k + 1, l) - lower, "k={k} l={l}");
            }
        }
    }

    #[test]
    fn circle_product_matches_brute_force() {
        let s1 = SphereSpec::new(1, 1.0).unwrap();
        let threshold = 50.0;
        let prod = product_spectrum(&[s1, s1], threshold).unwrap();
        let mut counts = std::collections::BTreeMap::new();
        for a in -10i64..=10 {
            for b in -10i64..=10 {
                let v = (a * a + b * b) as u64;
                if v as f64 <= threshold {
                    *counts.entry(v).or_insert(0u64) += 1;
                }
            }
        }
        let expected: Vec<(f64, u64)> = counts.into_iter().map(|(v, c)| (v as f64, c)).collect();
        assert_eq!(as_pairs(&prod), expected);
        assert_eq!(&expected[..4], &[(0.0, 1), (1.0, 4), (2.0, 4), (4.0, 4)]);
    }

    #[test]
    fn single_factor_product_is_the_sphere() {
        let s = SphereSpec::new(3, 1.0).unwrap();
        let prod = product_spectrum(&[s], 24.0).unwrap();
        assert_eq!(prod, sphere_spectrum(s, 4));
    }

    #[test]
    fn clifford_torus_first_nonzero_eigenvalue() {
        let spec = clifford_spectrum(1, 2, 10.0).unwrap();
        assert_eq!(spec.pairs().next(), Some((0.0, 1)));
        assert!((spec.eigenvalues[1] - 2.0).abs() < 1e-12);
        assert_eq!(spec.multiplicities[1], 4);
    }

    #[test]
    fn veronese_levels() {
        let v = veronese_spectrum(4);
        assert_eq!(v.multiplicities, vec![1, 5, 9]);
        assert_eq!(&v.eigenvalues[..2], &[0.0, 2.0]);
        assert!((v.eigenvalues[2] - 20.0 / 3.0).abs() < 1e-15);
        assert_eq!(as_pairs(&veronese_spectrum(0)), vec![(0.0, 1)]);
        assert_eq!(veronese_spectrum(5).len(), 3);
    }

    #[test]
    fn schrodinger_shift() {
        let spec = clifford_spectrum(2, 5, 30.0).unwrap();
        assert_eq!(schrodinger_mu1(&spec, 5.0).unwrap(), -5.0);
        assert_eq!(schrodinger_mu1(&veronese_spectrum(6), 4.0 / 3.0).unwrap(), -4.0 / 3.0);
        let shifted = spec.shifted(5.0);
        for (a, b) in shifted.eigenvalues.iter().zip(&spec.eigenvalues) {
            assert_eq!(*a, b - 5.0);
        }
        assert!(schrodinger_mu1(&AnalyticSpectrum::from_pairs(vec![]), 1.0).is_err());
    }
}
