use serde_json::json;

use lupinch_core::catalog::{
    lemma2_saturation as model_saturation, pinching_report, simons_residual, veronese_family,
    ModelKind, ModelSubmanifold,
};
use lupinch_core::lu::sweep::{
    dominance_sweep, lemma1_saturation, lemma1_sweep, lemma1_trial, lemma2_saturation,
    lemma2_sweep, lemma2_trial, reduction_sweep, SweepConfig, SweepSummary,
};
use lupinch_core::lu::{construct_lemma2_equality, lemma2_check, Lemma2EqualityConfig};
use lupinch_core::spectral::{
    clifford_spectrum, main_theorem_check, schrodinger_mu1, smallest_eigenvalues,
    torus_convergence_study, torus_grid_operator, veronese_spectrum, EigsOptions, SymOperator,
};
use lupinch_core::{Result, Tolerances};

use crate::args::{GlobalArgs, Lemma1Args, Lemma2Args, ModelCommand, SpectrumCommand};
use crate::output::{Check, Document, Table};
use crate::report::{self, Sizes, Thresholds};

const DEFAULT_TRIALS: u64 = 10_000;

fn config(g: &GlobalArgs, n: &std::ops::RangeInclusive<usize>) -> SweepConfig {
    SweepConfig {
        n_range: n.clone(),
        threads: g.threads,
        ..SweepConfig::new(g.seed, g.trials.unwrap_or(DEFAULT_TRIALS))
    }
}

fn summary_value(command: &str, s: &SweepSummary) -> serde_json::Value {
    json!({
        "command": command,
        "trials_run": s.trials,
        "failures": s.failures,
        "min_slack": s.min_slack,
        "min_slack_seed": s.min_slack_seed,
        "equalities": s.equalities,
    })
}

pub fn verify_lemma1(g: &GlobalArgs, a: &Lemma1Args) -> Result<Document> {
    let t = Thresholds::scaled(g.tol);
    let cfg = config(g, &a.n);
    let tols = Tolerances::default();
    if let Some(seed) = a.sweep.replay {
        let rec = lemma1_trial(seed, &cfg.n_range, &tols);
        let checks = vec![Check::at_least("lemma1.slack", rec.slack, -t.soundness).with_seed(Some(seed))];
        return Ok(Document::new("verify lemma1 --replay", g.seed, checks, json!({ "trial": rec })));
    }
    let mut checks = Vec::new();
    let mut data = serde_json::Map::new();
    let mut table = None;
    if !a.sweep.equality_only {
        let out = lemma1_sweep(&cfg)?;
        let s = SweepSummary::from_records(&out.records, t.soundness);
        checks.push(Check::at_least("lemma1.min_slack", s.min_slack, -t.soundness).with_seed(s.min_slack_seed));
        checks.push(Check::none("lemma1.failures", s.failures));
        data.insert("summary".into(), summary_value("verify lemma1", &s));

        let dom = dominance_sweep(&cfg)?;
        let d = SweepSummary::from_records(&dom.records, t.dominance);
        checks.push(Check::at_least("dominance.min_slack", d.min_slack, -t.dominance).with_seed(d.min_slack_seed));
        data.insert("dominance".into(), summary_value("dominance", &d));
        if a.sweep.emit_trials {
            data.insert("trials".into(), json!(out.records));
            table = Some(Table::from_records(&out.records));
        }
    }
    let n_sat = (*a.n.start()).max(2)..=(*a.n.end()).clamp(2, 10);
    let recs = lemma1_saturation(n_sat, &[1.0, 7.5], &tols)?;
    let worst = recs.iter().map(|r| r.slack.abs()).fold(0.0, f64::max);
    let misses = recs.iter().filter(|r| !r.round_trip).count() as u64;
    checks.push(Check::at_most("equality.max_abs_slack", worst, t.saturation));
    checks.push(Check::none("equality.classifier_misses", misses));
    data.insert("equality_configurations".into(), json!(recs.len()));
    if a.sweep.equality_only && a.sweep.emit_trials {
        data.insert("equality".into(), json!(recs));
        table = Some(Table::from_records(&recs));
    }
    let mut doc = Document::new("verify lemma1", g.seed, checks, data.into());
    if let Some(t) = table {
        doc = doc.with_table(t);
    }
    Ok(doc)
}

pub fn verify_lemma2(g: &GlobalArgs, a: &Lemma2Args) -> Result<Document> {
    let t = Thresholds::scaled(g.tol);
    let cfg = SweepConfig { m_range: a.m.clone(), ..config(g, &a.n) };
    let tols = Tolerances::default();
    if let Some(seed) = a.sweep.replay {
        let rec = lemma2_trial(seed, &cfg.n_range, &cfg.m_range, &tols)?;
        let checks = vec![Check::at_least("lemma2.slack", rec.slack, -t.soundness).with_seed(Some(seed))];
        return Ok(Document::new("verify lemma2 --replay", g.seed, checks, json!({ "trial": rec })));
    }
    let mut checks = Vec::new();
    let mut data = serde_json::Map::new();
    let mut table = None;

    if let Some(k) = a.k {
        let (n, m) = (*a.n.start(), *a.m.start());
        let ec = Lemma2EqualityConfig { n, m, k, lambda_scale: 1.0, mu_scale: 1.0 / 3f64.sqrt() };
        let fam = construct_lemma2_equality(&ec)?;
        let rep = lemma2_check(&fam, &tols)?;
        checks.push(Check::at_most("equality.abs_slack", rep.slack.abs(), t.saturation));
        let mut entry = json!({ "config": ec, "report": rep, "family": fam });
        if (n, m, k) == (2, 2, 1) {
            // the unit-normalized Veronese surface
            let v = veronese_family(2)?.family;
            let c = 1.0 / v.member(0).norm();
            let diff = fam
                .member(0)
                .upper()
                .iter()
                .zip(v.member(0).upper())
                .map(|(x, y)| (x - c * y).abs())
                .chain(fam.member(1).upper().iter().zip(v.member(1).upper()).map(|(x, y)| (x - y).abs()))
                .fold(0.0, f64::max);
            checks.push(Check::at_most("equality.veronese_shape_error", diff, t.exact));
            entry["veronese_shape_error"] = json!(diff);
        }
        data.insert("equality_k".into(), entry);
        return Ok(Document::new("verify lemma2", g.seed, checks, data.into()));
    }

    if !a.sweep.equality_only {
        let out = lemma2_sweep(&cfg)?;
        let s = SweepSummary::from_records(&out.records, t.soundness);
        checks.push(Check::at_least("lemma2.min_slack", s.min_slack, -t.soundness).with_seed(s.min_slack_seed));
        checks.push(Check::none("lemma2.failures", s.failures));
        data.insert("summary".into(), summary_value("verify lemma2", &s));

        let red_cfg = SweepConfig { trials: cfg.trials.min(1_000), ..cfg.clone() };
        let red = reduction_sweep(&red_cfg, t.reduction_rel)?;
        checks.push(Check::at_most("reduction.max_rel_error", red.max_rel_error, t.reduction_rel).with_seed(red.worst_seed));
        data.insert("reduction".into(), json!(red));
        if a.sweep.emit_trials {
            data.insert("trials".into(), json!(out.records));
            table = Some(Table::from_records(&out.records));
        }
    }
    let recs = lemma2_saturation(a.n.clone(), a.m.clone(), &[1.0, 0.3, 2.5], &tols)?;
    let worst = recs.iter().map(|r| r.slack.abs()).fold(0.0, f64::max);
    checks.push(Check::at_most("equality.max_abs_slack", worst, t.saturation));
    data.insert("equality_configurations".into(), json!(recs.len()));
    if a.sweep.equality_only && a.sweep.emit_trials {
        data.insert("equality".into(), json!(recs));
        table = Some(Table::from_records(&recs));
    }

    if a.include_models {
        let mut models = Vec::new();
        for kind in [
            ModelKind::Veronese { m: 2 },
            ModelKind::Veronese { m: 4 },
            ModelKind::Clifford { r: 1, n: 2, m: 2 },
            ModelKind::Clifford { r: 2, n: 5, m: 1 },
        ] {
            let model = ModelSubmanifold::new(kind)?;
            let sat = model_saturation(&model.family, &tols)?;
            checks.push(Check::at_most(
                format!("models.{}.abs_slack", model.name()),
                sat.report.slack.abs(),
                t.saturation,
            ));
            models.push(json!({ "model": model.name(), "saturation": sat }));
        }
        data.insert("models".into(), json!(models));
    }
    let mut doc = Document::new("verify lemma2", g.seed, checks, data.into());
    if let Some(t) = table {
        doc = doc.with_table(t);
    }
    Ok(doc)
}

fn model_of(cmd: &ModelCommand) -> Result<ModelSubmanifold> {
    ModelSubmanifold::new(match *cmd {
        ModelCommand::Clifford { r, n, m } => ModelKind::Clifford { r, n, m },
        ModelCommand::Veronese { m } => ModelKind::Veronese { m },
        ModelCommand::Geodesic { n, m } => ModelKind::TotallyGeodesic { n, m },
    })
}

pub fn catalog(g: &GlobalArgs, cmd: &ModelCommand) -> Result<Document> {
    let t = Thresholds::scaled(g.tol);
    let model = model_of(cmd)?;
    let pinch = pinching_report(&model, g.tol)?;
    let residuals = simons_residual(&model.family, model.n)?;
    let max_res = residuals.iter().map(|r| r.abs()).fold(0.0, f64::max);
    let n = model.n as f64;
    let mut checks = vec![
        Check::at_most("minimality.max_abs_trace", model.family.max_abs_trace(), t.exact),
        Check::at_most("sigma.error", (pinch.sigma - model.sigma).abs(), t.exact),
        Check::at_most("pinching.excess", pinch.pinching - n, t.exact),
        Check::at_most("simons.max_abs_residual", max_res, t.exact),
    ];
    if !model.is_totally_geodesic() {
        checks.push(Check::holds("pinching.saturates", pinch.saturates));
    }
    let data = json!({
        "model": model.kind,
        "n": model.n,
        "family": model.family,
        "pinching": pinch,
        "simons_residuals": residuals,
    });
    Ok(Document::new(format!("catalog {}", model.name()), g.seed, checks, data))
}

pub fn spectrum(g: &GlobalArgs, cmd: &SpectrumCommand) -> Result<Document> {
    let t = Thresholds::scaled(g.tol);
    match *cmd {
        SpectrumCommand::Clifford { r, n, cutoff } => {
            let model = ModelSubmanifold::new(ModelKind::Clifford { r, n, m: 1 })?;
            let mut rep = main_theorem_check(&model)?;
            rep.spectrum = clifford_spectrum(r, n, cutoff.unwrap_or(4.0 * n as f64))?;
            analytic_document(g, &t, rep, &model)
        }
        SpectrumCommand::Veronese { cutoff } => {
            let model = veronese_family(2)?;
            let mut rep = main_theorem_check(&model)?;
            rep.spectrum = veronese_spectrum(cutoff);
            analytic_document(g, &t, rep, &model)
        }
        SpectrumCommand::TorusGrid { grid, count, ref sizes } => {
            let sigma = 2.0;
            let op = torus_grid_operator(grid, sigma)?;
            let opts = EigsOptions { seed: g.seed, ..EigsOptions::default() };
            let pairs = smallest_eigenvalues(&op, count, &opts)?;
            let study = torus_convergence_study(sizes, sigma, &opts)?;
            let worst_residual = pairs.residuals.iter().copied().fold(0.0, f64::max) / op.norm_bound();
            let mut checks = vec![
                Check::at_most("grid.ground_error", (pairs.values[0] + sigma).abs(), t.grid_ground),
                Check::at_most("grid.relative_residual", worst_residual, 1e-8),
            ];
            if let Some(order) = study.min_order() {
                checks.push(Check::at_least("grid.min_order", order, t.grid_order));
            }
            let table = Table::from_records(
                &study
                    .rows
                    .iter()
                    .map(|r| json!({ "N": r.n, "second": r.second, "error": r.second_error, "order": r.order }))
                    .collect::<Vec<_>>(),
            );
            let data = json!({
                "N": grid,
                "h": op.h,
                "sigma": sigma,
                "eigenvalues": pairs.values,
                "residuals": pairs.residuals,
                "iterations": pairs.iterations,
                "mu1": pairs.values[0],
                "convergence": study,
            });
            Ok(Document::new("spectrum torus-grid", g.seed, checks, data).with_table(table))
        }
    }
}

fn analytic_document(
    g: &GlobalArgs,
    t: &Thresholds,
    rep: lupinch_core::spectral::MainTheoremReport,
    model: &ModelSubmanifold,
) -> Result<Document> {
    let mu1 = schrodinger_mu1(&rep.spectrum, rep.sigma)?;
    let checks = vec![
        Check::at_most("mu1.shift_error", (mu1 + model.sigma).abs(), t.exact),
        Check::at_most("gap.abs", rep.gap.abs(), t.exact),
    ];
    let table = Table::from_records(
        &rep.spectrum
            .pairs()
            .map(|(e, m)| json!({ "eigenvalue": e, "multiplicity": m }))
            .collect::<Vec<_>>(),
    );
    let data = json!({
        "model": rep.model,
        "eigenvalues": rep.spectrum.eigenvalues,
        "multiplicities": rep.spectrum.multiplicities,
        "sigma": rep.sigma,
        "lambda2": rep.lambda2,
        "mu1": mu1,
        "bound": rep.bound,
        "gap": rep.gap,
    });
    Ok(Document::new(format!("spectrum {}", model.name()), g.seed, checks, data).with_table(table))
}

pub fn report(g: &GlobalArgs) -> Result<Document> {
    let t = Thresholds::scaled(g.tol);
    let sizes = g.trials.map_or(Sizes::ACCEPTANCE, Sizes::uniform);
    let criteria = report::run_all(g.seed, &sizes, g.threads, &t)?;
    let checks = criteria
        .iter()
        .flat_map(|c| {
            c.checks.iter().cloned().map(move |mut ch| {
                ch.name = format!("c{}.{}", c.id, ch.name);
                ch
            })
        })
        .collect();
    let data = json!({
        "thresholds": t,
        "sizes": sizes,
        "criteria": criteria,
    });
    Ok(Document::new("report", g.seed, checks, data))
}
