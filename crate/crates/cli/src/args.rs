use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "lupinch",
    version,
    about = "Verify Lu's commutator inequality and the first Schrödinger eigenvalue on the pinching models"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Master seed; trial i uses a stream derived from (seed, i).
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Number of random trials per sweep.
    #[arg(long, global = true, value_parser = parse_trials)]
    pub trials: Option<u64>,
    /// Base tolerance; every pinned threshold is rescaled by tol / 1e-10.
    #[arg(long, global = true, env = "LUPINCH_TOL", default_value_t = 1e-10, value_parser = parse_tol)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads for the sweeps (0: one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Include wall-clock time in the output (makes it nondeterministic).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Randomized and exact checks of the two inequalities.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Second fundamental form, pinching and Simons residuals of a model.
    #[command(subcommand)]
    Catalog(ModelCommand),
    /// Laplace spectrum of a model and the first eigenvalue of -Δ - σ.
    #[command(subcommand)]
    Spectrum(SpectrumCommand),
    /// Run every acceptance check and emit one document.
    Report,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// Σ (η_i - η_j)² r_ij ≤ Σ r_ij + max r_ij on the zero-sum unit sphere.
    Lemma1(Lemma1Args),
    /// Σ ‖[A_1, A_α]‖² ≤ Σ ‖A_α‖² + ‖A_2‖² for orthogonal families.
    Lemma2(Lemma2Args),
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Only check the equality configurations.
    #[arg(long)]
    pub equality_only: bool,
    /// Include every trial record in the output.
    #[arg(long)]
    pub emit_trials: bool,
    /// Rerun the single trial with this derived seed.
    #[arg(long)]
    pub replay: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct Lemma1Args {
    /// Number of indices: a value or an inclusive range A..B.
    #[arg(long, value_parser = parse_range, default_value = "2..12")]
    pub n: RangeInclusive<usize>,
    #[command(flatten)]
    pub sweep: SweepArgs,
}

#[derive(Debug, Clone, Args)]
pub struct Lemma2Args {
    /// Matrix size: a value or an inclusive range A..B.
    #[arg(long, value_parser = parse_range, default_value = "2..8")]
    pub n: RangeInclusive<usize>,
    /// Family size: a value or an inclusive range A..B.
    #[arg(long, value_parser = parse_range, default_value = "2..6")]
    pub m: RangeInclusive<usize>,
    /// Check the equality configuration with this k (uses the lower ends of
    /// the n and m ranges).
    #[arg(long)]
    pub k: Option<usize>,
    /// Also run the inequality on the Clifford and Veronese models.
    #[arg(long)]
    pub include_models: bool,
    #[command(flatten)]
    pub sweep: SweepArgs,
}

#[derive(Debug, Clone, Subcommand)]
pub enum ModelCommand {
    Clifford {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        m: usize,
    },
    Veronese {
        #[arg(long, default_value_t = 2)]
        m: usize,
    },
    Geodesic {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        m: usize,
    },
}

#[derive(Debug, Clone, Subcommand)]
pub enum SpectrumCommand {
    Clifford {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
        /// List every eigenvalue of -Δ up to this value (default 4n).
        #[arg(long)]
        cutoff: Option<f64>,
    },
    Veronese {
        /// Highest spherical-harmonic degree l to list.
        #[arg(long, default_value_t = 6)]
        cutoff: u64,
    },
    /// Finite differences on the flat Clifford torus M_{1,1}.
    TorusGrid {
        /// Grid points per side.
        #[arg(long = "N", default_value_t = 64)]
        grid: usize,
        #[arg(long, default_value_t = 2)]
        count: usize,
        /// Grid sizes of the convergence study.
        #[arg(long, value_delimiter = ',', default_value = "16,32,64,128")]
        sizes: Vec<usize>,
    },
}

pub fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let parse = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|e| format!("`{t}` is not a nonnegative integer: {e}"))
    };
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let v = parse(s)?;
            (v, v)
        }
    };
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok(a..=b)
}

fn parse_trials(s: &str) -> Result<u64, String> {
    let v: u64 = s.parse().map_err(|e| format!("{e}"))?;
    if v == 0 {
        return Err("trials must be at least 1".into());
    }
    Ok(v)
}

fn parse_tol(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if !(v > 0.0 && v.is_finite()) {
        return Err(format!("tolerance must be positive and finite, got {v}"));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2..12").unwrap(), 2..=12);
        assert_eq!(parse_range("3..=5").unwrap(), 3..=5);
        assert_eq!(parse_range("4").unwrap(), 4..=4);
        assert!(parse_range("5..2").is_err());
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn cli_parses() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
        let cli = Cli::try_parse_from(["lupinch", "verify", "lemma1", "--n", "2", "--trials", "1"]).unwrap();
        assert_eq!(cli.global.trials, Some(1));
        assert!(Cli::try_parse_from(["lupinch", "report", "--tol", "-1"]).is_err());
        assert!(Cli::try_parse_from(["lupinch", "report", "--trials", "0"]).is_err());
    }
}
