//! The acceptance checks, shared by `report` and the acceptance test.

use serde::Serialize;
use serde_json::{json, Value};

use lupinch_core::catalog::{
    clifford_family, pinching_report, simons_residual, standard_models, veronese_family,
};
use lupinch_core::lu::sweep::{
    dominance_sweep, lemma1_saturation, lemma1_sweep, lemma2_saturation, lemma2_sweep,
    reduction_sweep, SweepConfig, SweepSummary,
};
use lupinch_core::spectral::{main_theorem_check, torus_convergence_study, EigsOptions};
use lupinch_core::symmat::decay_sweep;
use lupinch_core::{Result, Tolerances};

use crate::output::Check;

/// Thresholds of the acceptance checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thresholds {
    /// Random soundness sweeps: `min slack ≥ -soundness`.
    pub soundness: f64,
    /// `λ_max(L_r) ≤ Σ r + max r + dominance`.
    pub dominance: f64,
    /// `|slack|` of every equality configuration.
    pub saturation: f64,
    /// Relative error of the reduction identity.
    pub reduction_rel: f64,
    /// Catalog values, Simons residuals and the eigenvalue gap.
    pub exact: f64,
    /// Smallest grid eigenvalue against `-σ`.
    pub grid_ground: f64,
    /// Observed convergence order of the second grid eigenvalue.
    pub grid_order: f64,
    /// Allowed excess of `ln(λ_{r+1}^p / f_p)` over `p ln(λ_{r+1}/λ_1)`.
    pub decay_log: f64,
}

impl Thresholds {
    pub const BASE_TOL: f64 = 1e-10;

    pub const PINNED: Thresholds = Thresholds {
        soundness: 1e-10,
        dominance: 1e-8,
        saturation: 1e-12,
        reduction_rel: 1e-12,
        exact: 1e-12,
        grid_ground: 1e-12,
        grid_order: 1.9,
        decay_log: 1e-12,
    };

    /// Rescale every tolerance by `tol / 1e-10`; the order bound is kept.
    pub fn scaled(tol: f64) -> Self {
        let f = tol / Self::BASE_TOL;
        let p = Self::PINNED;
        Self {
            soundness: p.soundness * f,
            dominance: p.dominance * f,
            saturation: p.saturation * f,
            reduction_rel: p.reduction_rel * f,
            exact: p.exact * f,
            grid_ground: p.grid_ground * f,
            grid_order: p.grid_order,
            decay_log: p.decay_log * f,
        }
    }
}

/// Sweep sizes of the acceptance checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sizes {
    pub lemma1: u64,
    pub dominance: u64,
    pub lemma2: u64,
    pub reduction: u64,
    pub decay: u64,
}

impl Sizes {
    pub const ACCEPTANCE: Sizes = Sizes {
        lemma1: 100_000,
        dominance: 10_000,
        lemma2: 10_000,
        reduction: 1_000,
        decay: 1_000,
    };

    pub fn uniform(trials: u64) -> Self {
        Self { lemma1: trials, dominance: trials, lemma2: trials, reduction: trials, decay: trials }
    }
}

/// Result of one acceptance criterion.
#[derive(Debug, Clone, Serialize)]
pub struct Criterion {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub data: Value,
}

impl Criterion {
    fn new(id: u32, title: &'static str, checks: Vec<Check>, data: Value) -> Self {
        Self { id, title, passed: checks.iter().all(|c| c.passed), checks, data }
    }
}

/// Sweeps use default hypothesis tolerances; only the pass/fail threshold
/// follows the caller.
fn sweep_config(seed: u64, trials: u64, threads: usize, n: std::ops::RangeInclusive<usize>) -> SweepConfig {
    SweepConfig { n_range: n, threads, ..SweepConfig::new(seed, trials) }
}

fn soundness_checks(prefix: &str, s: &SweepSummary, threshold: f64) -> Vec<Check> {
    vec![
        Check::at_least(format!("{prefix}.min_slack"), s.min_slack, -threshold)
            .with_seed(s.min_slack_seed),
        Check::none(format!("{prefix}.failures"), s.failures),
    ]
}

pub fn lemma1_soundness(seed: u64, trials: u64, threads: usize, t: &Thresholds) -> Result<Criterion> {
    let out = lemma1_sweep(&sweep_config(seed, trials, threads, 2..=12))?;
    let summary = SweepSummary::from_records(&out.records, t.soundness);
    Ok(Criterion::new(
        1,
        "zero-sum inequality soundness",
        soundness_checks("lemma1", &summary, t.soundness),
        json!(summary),
    ))
}

pub fn dominance(seed: u64, trials: u64, threads: usize, t: &Thresholds) -> Result<Criterion> {
    let out = dominance_sweep(&sweep_config(seed, trials, threads, 2..=12))?;
    let summary = SweepSummary::from_records(&out.records, t.dominance);
    Ok(Criterion::new(
        2,
        "exact maximizer dominance",
        soundness_checks("dominance", &summary, t.dominance),
        json!(summary),
    ))
}

pub fn lemma1_equality(t: &Thresholds) -> Result<Criterion> {
    let recs = lemma1_saturation(2..=10, &[1.0, 7.5], &Tolerances::default())?;
    let worst = recs.iter().map(|r| r.slack.abs()).fold(0.0, f64::max);
    let misses = recs.iter().filter(|r| !r.round_trip).count() as u64;
    Ok(Criterion::new(
        3,
        "zero-sum equality configurations",
        vec![
            Check::at_most("lemma1_equality.max_abs_slack", worst, t.saturation),
            Check::none("lemma1_equality.classifier_misses", misses),
        ],
        json!({ "configurations": recs.len() }),
    ))
}

pub fn lemma2_soundness(seed: u64, trials: u64, threads: usize, t: &Thresholds) -> Result<Criterion> {
    let cfg = SweepConfig { m_range: 2..=6, ..sweep_config(seed, trials, threads, 2..=8) };
    let out = lemma2_sweep(&cfg)?;
    let summary = SweepSummary::from_records(&out.records, t.soundness);
    let recs = lemma2_saturation(2..=8, 2..=6, &[1.0, 0.3, 2.5], &Tolerances::default())?;
    let worst = recs.iter().map(|r| r.slack.abs()).fold(0.0, f64::max);
    let mut checks = soundness_checks("lemma2", &summary, t.soundness);
    checks.push(Check::at_most("lemma2_equality.max_abs_slack", worst, t.saturation));
    Ok(Criterion::new(
        4,
        "commutator inequality soundness and equality",
        checks,
        json!({ "sweep": summary, "equality_configurations": recs.len() }),
    ))
}

pub fn reduction(seed: u64, trials: u64, threads: usize, t: &Thresholds) -> Result<Criterion> {
    let cfg = SweepConfig { m_range: 2..=6, ..sweep_config(seed, trials, threads, 2..=8) };
    let s = reduction_sweep(&cfg, t.reduction_rel)?;
    Ok(Criterion::new(
        5,
        "reduction identity",
        vec![Check::at_most("reduction.max_rel_error", s.max_rel_error, t.reduction_rel)
            .with_seed(s.worst_seed)],
        json!(s),
    ))
}

pub fn catalog(t: &Thresholds) -> Result<Criterion> {
    let (mut sigma_err, mut lambda2_err, mut pinch_err) = (0.0f64, 0.0f64, 0.0f64);
    for n in 2..=10 {
        for r in 1..n {
            for m in [1, 3] {
                let p = pinching_report(&clifford_family(r, n, m)?, 1e-10)?;
                sigma_err = sigma_err.max((p.sigma - n as f64).abs());
                lambda2_err = lambda2_err.max(p.lambda2.abs());
                pinch_err = pinch_err.max((p.pinching - n as f64).abs());
            }
        }
    }
    let v = pinching_report(&veronese_family(2)?, 1e-10)?;
    let mut simons = 0.0f64;
    for model in standard_models(10, 4)? {
        for r in simons_residual(&model.family, model.n)? {
            simons = simons.max(r.abs());
        }
    }
    Ok(Criterion::new(
        6,
        "catalog exactness",
        vec![
            Check::at_most("clifford.sigma_error", sigma_err, t.exact),
            Check::at_most("clifford.lambda2_error", lambda2_err, t.exact),
            Check::at_most("clifford.pinching_error", pinch_err, t.exact),
            Check::at_most("veronese.sigma_error", (v.sigma - 4.0 / 3.0).abs(), t.exact),
            Check::at_most("veronese.lambda2_error", (v.lambda2 - 2.0 / 3.0).abs(), t.exact),
            Check::at_most("veronese.pinching_error", (v.pinching - 2.0).abs(), t.exact),
            Check::at_most("simons.max_abs_residual", simons, t.exact),
        ],
        json!({ "veronese": v }),
    ))
}

pub fn main_theorem(t: &Thresholds) -> Result<Criterion> {
    let (mut gap, mut mu_err) = (0.0f64, 0.0f64);
    let mut mu1 = Vec::new();
    for n in 2..=10 {
        for r in 1..n {
            let rep = main_theorem_check(&clifford_family(r, n, 1)?)?;
            gap = gap.max(rep.gap.abs());
            mu_err = mu_err.max((rep.mu1 + n as f64).abs());
            if r == 1 {
                mu1.push(rep.mu1);
            }
        }
    }
    let v = main_theorem_check(&veronese_family(2)?)?;
    Ok(Criterion::new(
        7,
        "first eigenvalue saturates the bound",
        vec![
            Check::at_most("clifford.max_abs_gap", gap, t.exact),
            Check::at_most("clifford.mu1_error", mu_err, t.exact),
            Check::at_most("veronese.abs_gap", v.gap.abs(), t.exact),
            Check::at_most("veronese.mu1_error", (v.mu1 + 4.0 / 3.0).abs(), t.exact),
        ],
        json!({ "clifford_mu1_by_n": mu1, "veronese_mu1": v.mu1 }),
    ))
}

pub fn grid(seed: u64, t: &Thresholds) -> Result<Criterion> {
    let opts = EigsOptions { seed, ..EigsOptions::default() };
    let study = torus_convergence_study(&[16, 32, 64, 128], 2.0, &opts)?;
    Ok(Criterion::new(
        8,
        "grid cross-check on the Clifford torus",
        vec![
            Check::at_most("grid.max_ground_error", study.max_first_error(), t.grid_ground),
            Check::at_least("grid.min_order", study.min_order().unwrap_or(f64::NAN), t.grid_order),
        ],
        json!(study),
    ))
}

pub fn decay(seed: u64, trials: u64, t: &Thresholds) -> Result<Criterion> {
    let d = decay_sweep(seed, trials, 10_000, t.decay_log)?;
    Ok(Criterion::new(
        9,
        "decay of the subleading power ratio",
        vec![
            Check::none("decay.failures", d.failures).with_seed(d.worst_seed),
            Check::holds("decay.all_finite", d.all_finite),
        ],
        json!(d),
    ))
}

/// Every deterministic criterion (1 through 9).
pub fn run_all(seed: u64, sizes: &Sizes, threads: usize, t: &Thresholds) -> Result<Vec<Criterion>> {
    Ok(vec![
        lemma1_soundness(seed, sizes.lemma1, threads, t)?,
        dominance(seed, sizes.dominance, threads, t)?,
        lemma1_equality(t)?,
        lemma2_soundness(seed, sizes.lemma2, threads, t)?,
        reduction(seed, sizes.reduction, threads, t)?,
        catalog(t)?,
        main_theorem(t)?,
        grid(seed, t)?,
        decay(seed, sizes.decay, t)?,
    ])
}
