//! Argument parsing and dispatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use secant_core::certify::CertifyTarget;

use crate::commands::{self, CliError};
use crate::config::{ConfigLayer, RunConfig, Tier};

#[derive(Debug, Parser)]
#[command(name = "secant", version, about = "Secant varieties of Segre-Grassmann varieties")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Seed for every random draw.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    #[arg(long, global = true, value_enum)]
    pub tier: Option<Tier>,
    #[arg(long, global = true)]
    pub tol_newton: Option<f64>,
    #[arg(long, global = true)]
    pub tol_dedup: Option<f64>,
    #[arg(long, global = true)]
    pub tol_rank: Option<f64>,
    #[arg(long, global = true)]
    pub tol_vanish: Option<f64>,
    #[arg(long, global = true)]
    pub loop_budget: Option<usize>,
    /// TOML file of defaults; flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

impl GlobalArgs {
    fn layer(&self) -> ConfigLayer {
        ConfigLayer {
            seed: self.seed,
            threads: self.threads,
            output: None,
            json: self.json.then_some(true),
            tier: self.tier,
            tol_newton: self.tol_newton,
            tol_dedup: self.tol_dedup,
            tol_rank: self.tol_rank,
            tol_vanish: self.tol_vanish,
            loop_budget: self.loop_budget,
        }
    }

    pub fn run_config(&self) -> Result<RunConfig, CliError> {
        let file = match &self.config {
            Some(path) => ConfigLayer::load(path)?,
            None => ConfigLayer::default(),
        };
        Ok(RunConfig::from_layer(self.layer().over(file))?)
    }
}

/// `σ_s(P^m × G(k+1, n+1))`.
#[derive(Debug, Clone, Copy, Args)]
pub struct SpecArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub s: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Affine cone dimension of σ_s by Terracini's lemma.
    Dimension {
        #[command(flatten)]
        spec: SpecArgs,
        /// Random points tried; the largest Jacobian rank wins.
        #[arg(long, default_value_t = 3)]
        trials: usize,
    },
    /// Degree of a secant hypersurface by monodromy and the trace test.
    Degree {
        #[command(flatten)]
        spec: SpecArgs,
        /// Skip the hypersurface check.
        #[arg(long)]
        force: bool,
    },
    /// The Young-symmetrizer invariant, expanded or evaluated.
    Invariant(InvariantArgs),
    /// Rank and determinant of the exterior flattening φ_T.
    Flatten(FlattenArgs),
    /// Zero, perfect-power or irreducibility certificate for det(P⊠Q) or det φ_T.
    Certify {
        /// `box:s=S` or `phi:l=L`.
        #[arg(long)]
        target: CertifyTarget,
        /// Seed of the random integer line; derived from --seed when absent.
        #[arg(long)]
        line_seed: Option<u64>,
        #[arg(long, default_value_t = secant_core::certify::DEFAULT_PRIME_BUDGET)]
        prime_budget: usize,
        /// Always factor modulo primes, even when degree arithmetic settles it.
        #[arg(long)]
        no_degree_gap: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InvariantMode {
    Full,
    Eval,
}

#[derive(Debug, Args)]
pub struct InvariantArgs {
    #[arg(long, value_enum, default_value_t = InvariantMode::Full)]
    pub mode: InvariantMode,
    /// Rows of the V tableau, comma separated (default: the degree-6 filling).
    #[arg(long, value_delimiter = ',', requires = "w_rows")]
    pub v_rows: Vec<String>,
    #[arg(long, value_delimiter = ',', requires = "v_rows")]
    pub w_rows: Vec<String>,
    /// Polynomial file to write in full mode.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    pub points: usize,
    /// Evaluate on sampled points of σ_r.
    #[arg(long, conflicts_with = "generic")]
    pub on_secant: bool,
    /// Evaluate on generic ambient points.
    #[arg(long)]
    pub generic: bool,
    /// r for --on-secant.
    #[arg(long, default_value_t = 5)]
    pub rank: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Sample {
    RankOne,
    Secant,
    Generic,
    Zero,
}

#[derive(Debug, Args)]
pub struct FlattenArgs {
    /// T ∈ C^3 ⊗ Λ^2 C^{4ℓ+3}.
    #[arg(long = "l")]
    pub ell: Option<usize>,
    /// Tensor JSON file.
    #[arg(long, conflicts_with = "sample")]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub sample: Option<Sample>,
    /// Number of summands for `--sample secant`.
    #[arg(long, default_value_t = 2)]
    pub rank: usize,
    /// Save the tensor used as JSON.
    #[arg(long)]
    pub write_tensor: Option<PathBuf>,
    /// Write the symbolic pattern of φ_T.
    #[arg(long)]
    pub export_pattern: Option<PathBuf>,
}

/// Runs one invocation and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    1
                }
            };
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        // a closed pipe downstream is not our failure
        Err(CliError::Io { source, .. }) if source.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> Result<i32, CliError> {
    let cfg = cli.global.run_config()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    pool.install(|| commands::dispatch(&cli.command, &cfg, out, err))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let c = run(std::iter::once("secant").chain(args.iter().copied()), &mut out, &mut err);
        (c, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(code(&[]).0, 1);
        assert_eq!(code(&["dimension", "--m", "2"]).0, 1);
        assert_eq!(code(&["certify", "--target", "cube"]).0, 1);
        assert_eq!(code(&["frobnicate"]).0, 1);
        assert_eq!(code(&["dimension", "--m", "2", "--k", "2", "--n", "5", "--s", "1", "--threads", "0"]).0, 1);
    }

    #[test]
    fn help_and_version_exit_zero() {
        let (c, out, _) = code(&["--help"]);
        assert_eq!(c, 0);
        assert!(out.contains("certify"));
        assert_eq!(code(&["--version"]).0, 0);
    }

    #[test]
    fn flags_parse_anywhere() {
        let cli = Cli::try_parse_from(["secant", "--seed", "4", "certify", "--target", "box:s=3", "--json"]).unwrap();
        let cfg = cli.global.run_config().unwrap();
        assert_eq!(cfg.seed, 4);
        assert_eq!(cfg.output, crate::config::Output::Json);
    }
}
