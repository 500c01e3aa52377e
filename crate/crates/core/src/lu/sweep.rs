//! Seeded, index-parallel soundness sweeps.
//!
//! Trial `i` draws from its own stream `trial_rng(seed, i)`, so results do
//! not depend on the thread count, and any trial can be replayed from its
//! derived seed alone.

use std::ops::RangeInclusive;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::lemma1::{
    classify_equality, construct_equality_eta, lemma1_bound, lemma1_check, lemma1_lhs,
    weighted_laplacian, EqualityCase1, EqualityClass, InequalityReport, Orientation,
};
use super::lemma2::{
    construct_lemma2_equality, diagonalize_leading, lemma2_check, lemma2_lhs, lemma2_to_lemma1,
    Lemma2EqualityConfig,
};
use super::sampling::{random_eta_weights, random_orthogonal_family};
use crate::error::{Error, Result};
use crate::rng::{rng_from_seed, trial_seed};
use crate::symmat::sym_eigenvalues;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub seed: u64,
    pub trials: u64,
    pub n_range: RangeInclusive<usize>,
    /// Ignored by the zero-sum sweeps.
    pub m_range: RangeInclusive<usize>,
    pub tols: Tolerances,
    /// Worker threads; `1` runs sequentially, `0` uses the rayon default.
    pub threads: usize,
}

impl SweepConfig {
    pub fn new(seed: u64, trials: u64) -> Self {
        Self {
            seed,
            trials,
            n_range: 2..=12,
            m_range: 2..=6,
            tols: Tolerances::default(),
            threads: 0,
        }
    }

    fn validate(&self) -> Result<()> {
        if *self.n_range.start() < 2 || self.n_range.is_empty() {
            return Err(Error::invalid(format!(
                "n range must be nonempty with n >= 2, got {:?}",
                self.n_range
            )));
        }
        if *self.m_range.start() < 2 || self.m_range.is_empty() {
            return Err(Error::invalid(format!(
                "m range must be nonempty with m >= 2, got {:?}",
                self.m_range
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub index: u64,
    pub n: usize,
    pub m: Option<usize>,
    /// Derived seed; pass to the matching `*_trial` function to replay.
    pub seed: u64,
    pub lhs: f64,
    pub bound: f64,
    pub slack: f64,
    pub is_equality: bool,
}

impl TrialRecord {
    fn from_report(index: u64, seed: u64, n: usize, m: Option<usize>, r: InequalityReport) -> Self {
        Self {
            index,
            n,
            m,
            seed,
            lhs: r.lhs,
            bound: r.bound,
            slack: r.slack,
            is_equality: r.is_equality,
        }
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.slack >= -tol * self.bound.abs().max(1.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub trials: u64,
    pub failures: u64,
    pub equalities: u64,
    pub min_slack: f64,
    pub min_slack_seed: Option<u64>,
    pub min_slack_index: Option<u64>,
}

impl SweepSummary {
    pub fn from_records(records: &[TrialRecord], tol: f64) -> Self {
        let mut s = Self {
            trials: records.len() as u64,
            failures: 0,
            equalities: 0,
            min_slack: f64::INFINITY,
            min_slack_seed: None,
            min_slack_index: None,
        };
        for r in records {
            if !r.holds(tol) {
                s.failures += 1;
            }
            if r.is_equality {
                s.equalities += 1;
            }
            if r.slack < s.min_slack || s.min_slack_seed.is_none() {
                s.min_slack = r.slack;
                s.min_slack_seed = Some(r.seed);
                s.min_slack_index = Some(r.index);
            }
        }
        s
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepOutcome {
    pub summary: SweepSummary,
    pub records: Vec<TrialRecord>,
}

/// Map `f` over `0..trials`, preserving index order.
pub fn run_indexed<T, F>(trials: u64, threads: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    if threads == 1 {
        return Ok((0..trials).map(f).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
    Ok(pool.install(|| (0..trials).into_par_iter().map(f).collect()))
}

fn pick<R: Rng + ?Sized>(rng: &mut R, range: &RangeInclusive<usize>) -> usize {
    rng.random_range(range.clone())
}

/// One random trial of the zero-sum inequality.
pub fn lemma1_trial(seed: u64, n_range: &RangeInclusive<usize>, tols: &Tolerances) -> TrialRecord {
    let mut rng = rng_from_seed(seed);
    let n = pick(&mut rng, n_range);
    let x = random_eta_weights(&mut rng, n);
    TrialRecord::from_report(0, seed, n, None, lemma1_check(&x, tols))
}

/// One trial of the spectral form: `λ_max(L_r) ≤ Σ r + max r`.
pub fn dominance_trial(seed: u64, n_range: &RangeInclusive<usize>, tols: &Tolerances) -> Result<TrialRecord> {
    let mut rng = rng_from_seed(seed);
    let n = pick(&mut rng, n_range);
    let x = random_eta_weights(&mut rng, n);
    let top = sym_eigenvalues(&weighted_laplacian(x.weights()))?[0];
    let report = InequalityReport::new(top, lemma1_bound(x.weights()), tols);
    Ok(TrialRecord::from_report(0, seed, n, None, report))
}

/// One random trial of the commutator inequality.
pub fn lemma2_trial(
    seed: u64,
    n_range: &RangeInclusive<usize>,
    m_range: &RangeInclusive<usize>,
    tols: &Tolerances,
) -> Result<TrialRecord> {
    let mut rng = rng_from_seed(seed);
    let n = pick(&mut rng, n_range);
    let m = pick(&mut rng, m_range);
    let f = random_orthogonal_family(&mut rng, n, m);
    let report = lemma2_check(&f, tols)?;
    Ok(TrialRecord::from_report(0, seed, n, Some(m), report))
}

fn sweep<F>(cfg: &SweepConfig, trial: F) -> Result<SweepOutcome>
where
    F: Fn(u64) -> Result<TrialRecord> + Sync + Send,
{
    cfg.validate()?;
    let records = run_indexed(cfg.trials, cfg.threads, |i| {
        trial(trial_seed(cfg.seed, i)).map(|mut r| {
            r.index = i;
            r
        })
    })?
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(SweepOutcome {
        summary: SweepSummary::from_records(&records, cfg.tols.tol),
        records,
    })
}

pub fn lemma1_sweep(cfg: &SweepConfig) -> Result<SweepOutcome> {
    sweep(cfg, |s| Ok(lemma1_trial(s, &cfg.n_range, &cfg.tols)))
}

pub fn dominance_sweep(cfg: &SweepConfig) -> Result<SweepOutcome> {
    sweep(cfg, |s| dominance_trial(s, &cfg.n_range, &cfg.tols))
}

pub fn lemma2_sweep(cfg: &SweepConfig) -> Result<SweepOutcome> {
    sweep(cfg, |s| lemma2_trial(s, &cfg.n_range, &cfg.m_range, &cfg.tols))
}

/// Worst relative gap between the two sides of the reduction identity
/// `Σ_α ‖[A_1, A_α]‖² = Σ_{i<j} (η_i - η_j)² r_ij`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentitySummary {
    pub trials: u64,
    pub failures: u64,
    pub max_rel_error: f64,
    pub worst_seed: Option<u64>,
}

/// Relative gap of the reduction identity for one random family.
pub fn reduction_trial(
    seed: u64,
    n_range: &RangeInclusive<usize>,
    m_range: &RangeInclusive<usize>,
) -> Result<f64> {
    let mut rng = rng_from_seed(seed);
    let n = pick(&mut rng, n_range);
    let m = pick(&mut rng, m_range);
    let f = diagonalize_leading(&random_orthogonal_family(&mut rng, n, m))?;
    let x = lemma2_to_lemma1(&f, 1e-9)?;
    let commutators = lemma2_lhs(&f)?;
    let quadratic = lemma1_lhs(&x);
    Ok((commutators - quadratic).abs() / commutators.abs().max(f64::MIN_POSITIVE))
}

pub fn reduction_sweep(cfg: &SweepConfig, rel_tol: f64) -> Result<IdentitySummary> {
    cfg.validate()?;
    let errors = run_indexed(cfg.trials, cfg.threads, |i| {
        let s = trial_seed(cfg.seed, i);
        reduction_trial(s, &cfg.n_range, &cfg.m_range).map(|e| (s, e))
    })?
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let mut out = IdentitySummary {
        trials: cfg.trials,
        failures: 0,
        max_rel_error: 0.0,
        worst_seed: None,
    };
    for (s, e) in errors {
        // Both sides vanish together when the family commutes.
        if e > rel_tol && e.is_finite() {
            out.failures += 1;
        }
        if e.is_finite() && (out.worst_seed.is_none() || e > out.max_rel_error) {
            out.max_rel_error = e;
            out.worst_seed = Some(s);
        }
    }
    Ok(out)
}

/// One equality configuration of the zero-sum inequality, checked and
/// classified.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SaturationRecord {
    pub n: usize,
    pub k: usize,
    pub orientation: Orientation,
    pub weight: f64,
    pub lhs: f64,
    pub bound: f64,
    pub slack: f64,
    pub is_equality: bool,
    pub class: EqualityClass,
    pub round_trip: bool,
}

/// Every `(n, k, orientation, weight)` equality configuration.
pub fn lemma1_saturation(
    n_range: RangeInclusive<usize>,
    weights: &[f64],
    tols: &Tolerances,
) -> Result<Vec<SaturationRecord>> {
    let mut out = Vec::new();
    for n in n_range {
        for k in 1..n {
            for orientation in [Orientation::Case1, Orientation::Case2] {
                for &weight in weights {
                    let spec = EqualityCase1 { n, k, weight, orientation };
                    let x = construct_equality_eta(&spec)?;
                    let report = lemma1_check(&x, tols);
                    let class = classify_equality(&x, 1e-9).class;
                    // k = n - 1 is the same configuration in both orientations
                    let expected = match orientation {
                        Orientation::Case1 => EqualityClass::Case1(k),
                        Orientation::Case2 if k == n - 1 => EqualityClass::Case1(k),
                        Orientation::Case2 => EqualityClass::Case2(k),
                    };
                    out.push(SaturationRecord {
                        n,
                        k,
                        orientation,
                        weight,
                        lhs: report.lhs,
                        bound: report.bound,
                        slack: report.slack,
                        is_equality: report.is_equality,
                        round_trip: class == expected,
                        class,
                    });
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma2SaturationRecord {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub mu: f64,
    pub lhs: f64,
    pub bound: f64,
    pub slack: f64,
    pub is_equality: bool,
}

/// Every `(n, m, k)` equality configuration of the commutator inequality.
pub fn lemma2_saturation(
    n_range: RangeInclusive<usize>,
    m_range: RangeInclusive<usize>,
    mus: &[f64],
    tols: &Tolerances,
) -> Result<Vec<Lemma2SaturationRecord>> {
    let mut out = Vec::new();
    for n in n_range {
        for m in m_range.clone() {
            for k in 1..=(n - 1).min(m - 1) {
                for &mu in mus {
                    let cfg = Lemma2EqualityConfig { n, m, k, lambda_scale: 1.0, mu_scale: mu };
                    let report = lemma2_check(&construct_lemma2_equality(&cfg)?, tols)?;
                    out.push(Lemma2SaturationRecord {
                        n,
                        m,
                        k,
                        mu,
                        lhs: report.lhs,
                        bound: report.bound,
                        slack: report.slack,
                        is_equality: report.is_equality,
                    });
                }
            }
        }
    }
    Ok(out)
}
