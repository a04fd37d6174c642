//! `twistcert`: figure data, restrictions and degeneracy certificates from the
//! command line.
//!
//! Exit codes: 0 success, 1 I/O or parse error, 2 precondition violation
//! (for example `ξ ≥ 1` or a bad flag), 3 numerical failure.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use twistcert::{NormSpec, Tolerances};

#[derive(Debug, Parser)]
#[command(name = "twistcert", version, about = "Twisted-commutator diagnostics and certified degeneracy bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Certified dimension over an (α, δ) grid, plus the closed-form threshold rows.
    Mountains(MountainsArgs),
    /// The minimum twisted-commutator value Λ over g and α.
    Minima(MinimaArgs),
    /// Restrict a twisted pair to the band and certify its dimension.
    Certify(CertifyArgs),
    /// Two-pair certificate from a tensor-double model or four symmetries.
    CertifyDouble(DoubleArgs),
    /// Restriction report: measured distances next to their bounds.
    Restrict(RestrictArgs),
    /// Shared approximate eigenvector of two approximately commuting matrices.
    Eigshare(EigshareArgs),
    /// Write a seeded model's matrices and spec to a directory.
    Generate(GenerateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    /// Operator norm.
    Op,
    /// Frobenius norm.
    Fro,
    /// (p, k) Schatten–Ky Fan norm from --p and --k.
    Pk,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct NormArgs {
    #[arg(long, value_enum, default_value = "op")]
    pub norm: NormKind,
    /// Schatten exponent, a number ≥ 1 or `inf`.
    #[arg(long, default_value = "inf", value_parser = parse_extended)]
    #[serde(serialize_with = "serialize_extended")]
    pub p: f64,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
}

impl NormArgs {
    /// The norm on a `dim`-dimensional space.
    pub fn resolve(&self, dim: usize) -> twistcert::Result<NormSpec> {
        match self.norm {
            NormKind::Op => Ok(NormSpec::operator()),
            NormKind::Fro => Ok(NormSpec::frobenius(dim)),
            NormKind::Pk => NormSpec::new(self.p, self.k),
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TolArgs {
    /// Override a tolerance, e.g. `--tol arc_merge=1e-10`. Repeatable.
    #[arg(long = "tol", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

impl TolArgs {
    pub fn resolve(&self) -> anyhow::Result<Tolerances> {
        let mut value = serde_json::to_value(Tolerances::default())?;
        for item in &self.overrides {
            let (key, raw) = item
                .split_once('=')
                .ok_or_else(|| commands::usage(format!("--tol expects KEY=VALUE, got {item:?}")))?;
            let slot = value
                .get_mut(key)
                .ok_or_else(|| commands::usage(format!("unknown tolerance {key:?}")))?;
            let parsed: serde_json::Value = serde_json::from_str(raw)
                .map_err(|_| commands::usage(format!("tolerance {key} needs a number, got {raw:?}")))?;
            *slot = parsed;
        }
        serde_json::from_value(value).map_err(|e| commands::usage(format!("bad tolerance value: {e}")))
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutArgs {
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MountainsArgs {
    /// α grid as `a:b:n` (n points, both ends included).
    #[arg(long = "grid", default_value = "0:0.995:200", value_parser = parse_grid)]
    pub alpha_grid: Grid,
    /// δ grid as `a:b:n`.
    #[arg(long, default_value = "0.01:2:200", value_parser = parse_grid)]
    pub delta_grid: Grid,
    /// Largest d for the threshold rows at α = 1/d.
    #[arg(long, default_value_t = 8)]
    pub max_threshold_dim: usize,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[command(flatten)]
    pub tol: TolArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MinimaArgs {
    /// Dimensions, comma separated.
    #[arg(long = "g", value_delimiter = ',', default_value = "2,3,4,5,6")]
    pub g: Vec<usize>,
    #[arg(long = "grid", default_value = "0:1:201", value_parser = parse_grid)]
    pub alpha_grid: Grid,
    /// Schatten exponent, a number ≥ 1 or `inf`.
    #[arg(long, default_value = "inf", value_parser = parse_extended)]
    #[serde(serialize_with = "serialize_extended")]
    pub p: f64,
    /// Ky Fan index, capped at g.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[command(flatten)]
    pub out: OutArgs,
}

/// A band Hamiltonian with one twisted pair, from files or a model spec.
#[derive(Debug, Clone, Args, Serialize)]
pub struct PairSource {
    /// Model spec JSON (clock-block or flat-band); replaces the matrix files.
    #[arg(long, conflicts_with_all = ["h", "projector", "u", "v"])]
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub h: Option<PathBuf>,
    /// Band projector Π.
    #[arg(long)]
    pub projector: Option<PathBuf>,
    #[arg(long)]
    pub u: Option<PathBuf>,
    #[arg(long)]
    pub v: Option<PathBuf>,
    /// Gap Δ; measured from the spectrum when absent.
    #[arg(long)]
    pub gap: Option<f64>,
    /// Twisting parameter; defaults to 1/g for a model.
    #[arg(long)]
    pub alpha: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CertifyArgs {
    /// Re-verify a certificate (or a certify report) instead of computing one.
    #[arg(long, value_name = "CERT_JSON")]
    pub check: Option<PathBuf>,
    #[command(flatten)]
    pub source: PairSource,
    #[command(flatten)]
    pub norm: NormArgs,
    #[command(flatten)]
    pub tol: TolArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RestrictArgs {
    #[command(flatten)]
    pub source: PairSource,
    #[command(flatten)]
    pub norm: NormArgs,
    #[command(flatten)]
    pub tol: TolArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DoubleArgs {
    /// Tensor-double model spec JSON; replaces the matrix files.
    #[arg(long, conflicts_with_all = ["h", "projector", "u1", "u2", "v1", "v2"])]
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub h: Option<PathBuf>,
    #[arg(long)]
    pub projector: Option<PathBuf>,
    #[arg(long)]
    pub u1: Option<PathBuf>,
    #[arg(long)]
    pub u2: Option<PathBuf>,
    #[arg(long)]
    pub v1: Option<PathBuf>,
    #[arg(long)]
    pub v2: Option<PathBuf>,
    #[arg(long)]
    pub gap: Option<f64>,
    /// Orders of the two pairs; taken from the model when absent.
    #[arg(long)]
    pub d1: Option<usize>,
    #[arg(long)]
    pub d2: Option<usize>,
    #[command(flatten)]
    pub tol: TolArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Normal A, arbitrary B: residuals at most n√(ε/2).
    General,
    /// Both normal: exact B-eigenvalue, residuals at most n√ε.
    Normal,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EigshareArgs {
    #[arg(long, requires = "b")]
    pub a: Option<PathBuf>,
    #[arg(long, requires = "a")]
    pub b: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "general")]
    pub variant: Variant,
    /// Dimension of the generated instance when no files are given.
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    /// Perturbation size of the generated instance.
    #[arg(long, default_value_t = 1e-3)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub tol: TolArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixFormatArg {
    Text,
    Binary,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GenerateArgs {
    /// Model spec JSON; otherwise the spec is assembled from the flags below.
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long, default_value = "clock-block")]
    pub kind: String,
    #[arg(long, default_value_t = 3)]
    pub g: usize,
    #[arg(long)]
    pub g2: Option<usize>,
    /// Excited dimension; defaults to twice the code dimension.
    #[arg(long)]
    pub n_excited: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    pub gap: f64,
    #[arg(long, default_value_t = 0.0)]
    pub width: f64,
    /// Hamiltonian perturbation strength s.
    #[arg(long, default_value_t = 0.0)]
    pub s: f64,
    /// Symmetry perturbation strength t.
    #[arg(long, default_value_t = 0.0)]
    pub t: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "text")]
    pub matrix_format: MatrixFormatArg,
    /// Directory to write into (created if missing).
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub tol: TolArgs,
}

/// `n` evenly spaced points from `start` to `end` inclusive.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Grid {
    pub start: f64,
    pub end: f64,
    pub n: usize,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.start];
        }
        // one rounding per point, so round values such as 0.25 land exactly
        let span = self.end - self.start;
        let last = (self.n - 1) as f64;
        (0..self.n).map(|i| self.start + span * i as f64 / last).collect()
    }
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts[..] else {
        return Err(format!("expected a:b:n, got {s:?}"));
    };
    let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}"));
    let grid = Grid {
        start: num(a)?,
        end: num(b)?,
        n: n.trim().parse().map_err(|e| format!("{n:?}: {e}"))?,
    };
    if grid.n == 0 || !grid.start.is_finite() || !grid.end.is_finite() {
        return Err(format!("grid {s:?} needs finite ends and n ≥ 1"));
    }
    Ok(grid)
}

fn parse_extended(s: &str) -> Result<f64, String> {
    if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
        return Ok(f64::INFINITY);
    }
    s.parse().map_err(|e| format!("{s:?}: {e}"))
}

/// JSON has no infinity; write it the way `--p` accepts it.
fn serialize_extended<S: serde::Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_infinite() && *x > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*x)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Mountains(a) => commands::mountains(a),
        Command::Minima(a) => commands::minima(a),
        Command::Certify(a) => commands::certify(a),
        Command::CertifyDouble(a) => commands::certify_double(a),
        Command::Restrict(a) => commands::restrict(a),
        Command::Eigshare(a) => commands::eigshare(a),
        Command::Generate(a) => commands::generate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        let g = parse_grid("0:1:5").unwrap();
        assert_eq!(g.points(), [0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(parse_grid("0.3:9:1").unwrap().points(), [0.3]);
        let tenths = parse_grid("0:1:41").unwrap().points();
        assert_eq!(tenths[24], 0.6);
        assert_eq!(tenths[40], 1.0);
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("0:x:3").is_err());
    }

    #[test]
    fn tolerance_overrides() {
        let t = TolArgs { overrides: vec!["arc_merge=1e-9".into(), "max_arc_index=50".into()] }.resolve().unwrap();
        assert_eq!(t.arc_merge, 1e-9);
        assert_eq!(t.max_arc_index, 50);
        assert!(TolArgs { overrides: vec!["nope=1".into()] }.resolve().is_err());
        assert!(TolArgs { overrides: vec!["arc_merge".into()] }.resolve().is_err());
        assert!(TolArgs { overrides: vec!["max_arc_index=0.5".into()] }.resolve().is_err());
    }

    #[test]
    fn norms() {
        let n = |norm, p, k| NormArgs { norm, p, k }.resolve(4);
        assert_eq!(n(NormKind::Op, 2.0, 3).unwrap(), NormSpec::operator());
        assert_eq!(n(NormKind::Fro, 1.0, 1).unwrap(), NormSpec::frobenius(4));
        assert_eq!(n(NormKind::Pk, 3.0, 2).unwrap(), NormSpec::new(3.0, 2).unwrap());
        assert!(n(NormKind::Pk, 0.5, 1).is_err());
        assert_eq!(parse_extended("inf").unwrap(), f64::INFINITY);
    }

    #[test]
    fn cli_is_well_formed() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
