use serde::Serialize;

use super::{frobenius_inner, sym_eigenvalues, MatrixFamily, SymMatrix};
use crate::error::{Error, Result};

/// Gram matrix `S = (⟨A_α, A_β⟩)` of a family, with its spectrum
/// `λ_1 ≥ … ≥ λ_m`.
#[derive(Debug, Clone)]
pub struct FundamentalMatrix {
    gram: SymMatrix,
    eigenvalues: Vec<f64>,
}

pub fn fundamental_matrix(family: &MatrixFamily) -> Result<FundamentalMatrix> {
    let members = family.members();
    let gram = SymMatrix::from_fn(family.m(), |a, b| {
        frobenius_inner(&members[a], &members[b]).expect("members share a dimension")
    });
    FundamentalMatrix::from_gram(gram)
}

impl FundamentalMatrix {
    pub fn from_gram(gram: SymMatrix) -> Result<Self> {
        let eigenvalues = sym_eigenvalues(&gram)?;
        Ok(Self { gram, eigenvalues })
    }

    /// A fundamental matrix with a prescribed spectrum (diagonal Gram matrix).
    pub fn from_spectrum(eigenvalues: &[f64]) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::invalid("spectrum must be nonempty"));
        }
        Self::from_gram(SymMatrix::from_diag(eigenvalues))
    }

    pub fn gram(&self) -> &SymMatrix {
        &self.gram
    }

    pub fn m(&self) -> usize {
        self.gram.dim()
    }

    /// Eigenvalues sorted descending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// `σ = Tr S`.
    pub fn sigma(&self) -> f64 {
        self.gram.trace()
    }

    /// `λ_k` (1-based), reading zero past the end of the spectrum so that a
    /// hypersurface (`m = 1`) has `λ_2 = 0`.
    pub fn lambda(&self, k: usize) -> f64 {
        assert!(k >= 1, "eigenvalue index is 1-based");
        self.eigenvalues.get(k - 1).copied().unwrap_or(0.0)
    }

    pub fn lambda1(&self) -> f64 {
        self.lambda(1)
    }

    pub fn lambda2(&self) -> f64 {
        self.lambda(2)
    }

    /// Spectrum padded with zeros to `codim` entries.
    pub fn padded_eigenvalues(&self, codim: usize) -> Vec<f64> {
        let mut out = self.eigenvalues.clone();
        out.resize(out.len().max(codim), 0.0);
        out
    }

    /// Number of eigenvalues within `tol · max(1, λ_1)` of `λ_1`.
    pub fn top_multiplicity(&self, tol: f64) -> usize {
        let top = self.lambda1();
        let window = tol * top.abs().max(1.0);
        self.eigenvalues
            .iter()
            .take_while(|&&l| top - l <= window)
            .count()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("nonempty spectrum")
    }
}

/// `f_p = Tr S^p` and `g_p = f_p^{1/p}`.
///
/// `f_p` overflows to infinity for large `p` when `λ_1 > 1`; `ln_f_p` and
/// `g_p` stay finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerTrace {
    pub p: u32,
    pub f_p: f64,
    pub g_p: f64,
    pub ln_f_p: f64,
}

fn clamped_spectrum(s: &FundamentalMatrix) -> Vec<f64> {
    s.eigenvalues().iter().map(|&l| l.max(0.0)).collect()
}

/// `Σ (λ_α / λ_1)^p` for a nonnegative spectrum with `λ_1 > 0`.
fn normalized_power_sum(spectrum: &[f64], top: f64, p: u32) -> f64 {
    spectrum.iter().map(|&l| (l / top).powi(p as i32)).sum()
}

pub fn power_trace(s: &FundamentalMatrix, p: u32) -> Result<PowerTrace> {
    if p < 2 {
        return Err(Error::invalid(format!("power trace needs p >= 2, got {p}")));
    }
    let spectrum = clamped_spectrum(s);
    let top = spectrum.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return Ok(PowerTrace {
            p,
            f_p: 0.0,
            g_p: 0.0,
            ln_f_p: f64::NEG_INFINITY,
        });
    }
    let sum = normalized_power_sum(&spectrum, top, p);
    let ln_f_p = p as f64 * top.ln() + sum.ln();
    let direct = top.powi(p as i32) * sum;
    let f_p = if direct.is_finite() && direct > 0.0 {
        direct
    } else {
        ln_f_p.exp()
    };
    Ok(PowerTrace {
        p,
        f_p,
        g_p: top * sum.powf(1.0 / p as f64),
        ln_f_p,
    })
}

/// `ln(λ_{r+1}^p / f_p)` for `p = 2..=p_max`, where `r` is the multiplicity
/// of the top eigenvalue. Empty when no eigenvalue lies strictly below
/// `λ_1`; `-∞` when `λ_{r+1} = 0`.
pub fn top_eigenvalue_log_ratio_decay(
    s: &FundamentalMatrix,
    r: usize,
    p_max: u32,
    tol: f64,
) -> Result<Vec<f64>> {
    let spectrum = clamped_spectrum(s);
    let top = spectrum[0];
    if s.sigma() <= 0.0 || top <= 0.0 {
        return Err(Error::invalid("ratio undefined for a vanishing fundamental matrix"));
    }
    let mult = s.top_multiplicity(tol);
    if r != mult {
        return Err(Error::invalid(format!(
            "top eigenvalue has multiplicity {mult}, not {r}"
        )));
    }
    let Some(&next) = spectrum.get(r) else {
        return Ok(Vec::new());
    };
    Ok((2..=p_max)
        .map(|p| {
            if next == 0.0 {
                return f64::NEG_INFINITY;
            }
            let sum = normalized_power_sum(&spectrum, top, p);
            p as f64 * (next / top).ln() - sum.ln()
        })
        .collect())
}

/// `λ_{r+1}^p / f_p` for `p = 2..=p_max`; see
/// [`top_eigenvalue_log_ratio_decay`]. Small values underflow to zero.
pub fn top_eigenvalue_ratio_decay(
    s: &FundamentalMatrix,
    r: usize,
    p_max: u32,
    tol: f64,
) -> Result<Vec<f64>> {
    Ok(top_eigenvalue_log_ratio_decay(s, r, p_max, tol)?
        .into_iter()
        .map(f64::exp)
        .collect())
}

/// Worst case of `λ_{r+1}^p / f_p ≤ (λ_{r+1}/λ_1)^p` over random spectra.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecaySummary {
    pub trials: u64,
    pub p_max: u32,
    pub failures: u64,
    /// `ln(ratio) - p ln(λ_{r+1}/λ_1)`, maximized over trials and `p`
    /// (nonpositive when the bound holds).
    pub max_log_excess: f64,
    pub worst_seed: Option<u64>,
    pub all_finite: bool,
}

/// One random fundamental matrix with a top eigenvalue of known
/// multiplicity, written in a random orthonormal frame. Returns the matrix,
/// `r` and `λ_{r+1}/λ_1`.
pub fn random_decay_case(seed: u64) -> Result<(FundamentalMatrix, usize, f64)> {
    use rand::Rng;
    let mut rng = crate::rng::rng_from_seed(seed);
    let m = rng.random_range(2..=8usize);
    let r = rng.random_range(1..m);
    let top = 10f64.powf(rng.random_range(-1.0..1.5));
    let q = if rng.random_bool(0.25) {
        1.0 - 10f64.powf(rng.random_range(-6.0..-2.0))
    } else {
        rng.random_range(0.0..0.99)
    };
    let mut spectrum = vec![top; r];
    spectrum.push(q * top);
    while spectrum.len() < m {
        spectrum.push(q * top * rng.random::<f64>());
    }
    let frame = crate::lu::sampling::random_orthogonal(&mut rng, m);
    let gram = SymMatrix::from_diag(&spectrum).similarity(&frame)?;
    Ok((FundamentalMatrix::from_gram(gram)?, r, q))
}

/// Check the decay bound for `p = 2..=p_max` on `trials` random spectra
/// drawn from `trial_seed(seed, i)`. `tol` is the multiplicity window and
/// the allowed excess in log space.
pub fn decay_sweep(seed: u64, trials: u64, p_max: u32, tol: f64) -> Result<DecaySummary> {
    let mut out = DecaySummary {
        trials,
        p_max,
        failures: 0,
        max_log_excess: f64::NEG_INFINITY,
        worst_seed: None,
        all_finite: true,
    };
    for i in 0..trials {
        let s = crate::rng::trial_seed(seed, i);
        let (fm, r, _) = random_decay_case(s)?;
        // the measured ratio, not the drawn one, after rounding in the frame
        let e = fm.eigenvalues();
        let q = e[r].max(0.0) / e[0];
        let logs = top_eigenvalue_log_ratio_decay(&fm, r, p_max, 1e-9)?;
        let mut failed = false;
        for (p, &log_ratio) in (2..=p_max).zip(&logs) {
            if log_ratio == f64::NEG_INFINITY {
                continue;
            }
            if !log_ratio.is_finite() || !log_ratio.exp().is_finite() {
                out.all_finite = false;
                failed = true;
                continue;
            }
            let excess = log_ratio - p as f64 * q.ln();
            if excess > tol * (p as f64 * q.ln()).abs().max(1.0) {
                failed = true;
            }
            if excess > out.max_log_excess {
                out.max_log_excess = excess;
                out.worst_seed = Some(s);
            }
        }
        if failed {
            out.failures += 1;
        }
    }
    Ok(out)
}
