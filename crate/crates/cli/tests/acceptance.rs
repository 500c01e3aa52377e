//! Acceptance suite: one PASS/FAIL line per criterion, every tolerance
//! pinned here. Exits nonzero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use lupinch_cli::output::Check;
use lupinch_cli::report::{self, Criterion, Thresholds};

const SEED: u64 = 42;

const THRESHOLDS: Thresholds = Thresholds {
    soundness: 1e-10,
    dominance: 1e-8,
    saturation: 1e-12,
    reduction_rel: 1e-12,
    exact: 1e-12,
    grid_ground: 1e-12,
    grid_order: 1.9,
    decay_log: 1e-12,
};

const LEMMA1_TRIALS: u64 = 100_000;
const DOMINANCE_TRIALS: u64 = 10_000;
const LEMMA2_TRIALS: u64 = 10_000;
const REDUCTION_TRIALS: u64 = 1_000;
const DECAY_TRIALS: u64 = 1_000;

const LEMMA1_TIME_LIMIT: Duration = Duration::from_secs(30);
const GRID_TIME_LIMIT: Duration = Duration::from_secs(60);

fn describe(checks: &[Check]) -> String {
    checks
        .iter()
        .map(|c| {
            let cmp = if c.comparison == lupinch_cli::output::Comparison::AtMost { "<=" } else { ">=" };
            let mark = if c.passed { "" } else { " !" };
            format!("{}={:.3e} ({cmp} {:e}){mark}", c.name, c.value, c.threshold)
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn line(id: u32, title: &str, passed: bool, detail: &str, elapsed: Duration) -> bool {
    println!(
        "{} C{id:<2} {title}: {detail} [{:.2} s]",
        if passed { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    passed
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn report_line(result: lupinch_core::Result<Criterion>, elapsed: Duration, limit: Option<Duration>) -> bool {
    match result {
        Ok(mut c) => {
            if let Some(limit) = limit {
                c.checks.push(Check::at_most("runtime_s", elapsed.as_secs_f64(), limit.as_secs_f64()));
                c.passed = c.checks.iter().all(|x| x.passed);
            }
            line(c.id, c.title, c.passed, &describe(&c.checks), elapsed)
        }
        Err(e) => {
            println!("FAIL error: {e}");
            false
        }
    }
}

fn determinism() -> bool {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_lupinch"))
            .args(["report", "--seed", &SEED.to_string(), "--threads", "1"])
            .output()
            .expect("binary runs")
    };
    let ((a, b), elapsed) = timed(|| (run(), run()));
    let same = a.stdout == b.stdout && !a.stdout.is_empty();
    let ok = a.status.success() && b.status.success();
    line(
        10,
        "report is byte-identical across runs",
        same && ok,
        &format!(
            "identical={same} ({} bytes), exit codes {:?}/{:?}",
            a.stdout.len(),
            a.status.code(),
            b.status.code()
        ),
        elapsed,
    )
}

fn main() {
    let t = &THRESHOLDS;
    let mut all = true;

    let (r, e) = timed(|| report::lemma1_soundness(SEED, LEMMA1_TRIALS, 1, t));
    all &= report_line(r, e, Some(LEMMA1_TIME_LIMIT));
    let (r, e) = timed(|| report::dominance(SEED, DOMINANCE_TRIALS, 0, t));
    all &= report_line(r, e, None);
    let (r, e) = timed(|| report::lemma1_equality(t));
    all &= report_line(r, e, None);
    let (r, e) = timed(|| report::lemma2_soundness(SEED, LEMMA2_TRIALS, 0, t));
    all &= report_line(r, e, None);
    let (r, e) = timed(|| report::reduction(SEED, REDUCTION_TRIALS, 0, t));
    all &= report_line(r, e, None);
    let (r, e) = timed(|| report::catalog(t));
    all &= report_line(r, e, None);
    let (r, e) = timed(|| report::main_theorem(t));
    all &= report_line(r, e, None);
    let (r, e) = timed(|| report::grid(SEED, t));
    all &= report_line(r, e, Some(GRID_TIME_LIMIT));
    let (r, e) = timed(|| report::decay(SEED, DECAY_TRIALS, t));
    all &= report_line(r, e, None);
    all &= determinism();

    println!("{}", if all { "acceptance: all criteria pass" } else { "acceptance: FAILED" });
    if !all {
        std::process::exit(1);
    }
}
