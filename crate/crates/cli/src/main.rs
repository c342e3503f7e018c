//! `transplit` — command-line front end for transpose-inverse matrix
//! splitting: decompose, verify, rga, generate, info.
//!
//! Exit codes: 0 success, 1 usage or input-format error, 2 numeric failure
//! (singular input to a variant that needs a nonsingular one, iteration
//! non-convergence), 3 precondition or branch-cut violation. Diagnostics go
//! to stderr; data goes to files or stdout.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use transplit::io::{self, MatrixFileFormat};
use transplit::props::report_for_decomposition;
use transplit::{
    compute_svd, decompose_diff, decompose_diff_complex, decompose_diff_pinv,
    decompose_diff_unitfill, decompose_nontranspose_diff, decompose_nontranspose_sum,
    decompose_sum, generate_ensemble, rga, verify_matrix, Decomposition, EnsembleKind,
    EnsembleSpec, Error, Matrix, ToleranceConfig, Variant,
};

#[derive(Parser)]
#[command(
    name = "transplit",
    version,
    about = "Express a matrix as the difference (or scaled sum) of a factor and its transpose inverse"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct TolArgs {
    /// Relative rank tolerance (singular values below tol * sigma_max count as zero)
    #[arg(long = "tol-rank", default_value_t = 1e-12)]
    tol_rank: f64,
    /// Relative residual tolerance for reconstruction checks
    #[arg(long = "tol-residual", default_value_t = 1e-9)]
    tol_residual: f64,
}

impl TolArgs {
    fn config(&self) -> Result<ToleranceConfig, Failure> {
        let defaults = ToleranceConfig::default();
        Ok(ToleranceConfig::new(
            self.tol_rank,
            self.tol_residual,
            defaults.sqrt_axis_margin,
        )?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decompose a matrix and write the factor A
    Decompose {
        /// Input matrix file
        #[arg(long)]
        input: PathBuf,
        /// One of: diff, diff-pinv, diff-unitfill, diff-complex, sum, nt-diff, nt-sum
        #[arg(long)]
        variant: String,
        /// Output file for the factor A
        #[arg(long)]
        output: PathBuf,
        /// Optional JSON verification report
        #[arg(long)]
        report: Option<PathBuf>,
        /// Scale constant c (only valid with nt-sum; defaults to sigma_min/2)
        #[arg(long)]
        scale: Option<f64>,
        /// File format: matrix-market or csv (default: inferred from extension)
        #[arg(long)]
        format: Option<String>,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Run the property-check suite against a matrix
    Verify {
        #[arg(long)]
        input: PathBuf,
        /// "all" or a comma-separated list of variant names
        #[arg(long, default_value = "all")]
        variants: String,
        /// Seed for the orthogonal conjugations used by the consistency check
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Report file; defaults to stdout
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        format: Option<String>,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Relative gain array G o (G^{-1})^T
    Rga {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long)]
        format: Option<String>,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Write an ensemble of random test matrices
    Generate {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        /// One of: gaussian, spectrum, orthogonal, rankdef, complex-gaussian
        #[arg(long)]
        kind: String,
        /// Condition number (spectrum kind only)
        #[arg(long)]
        cond: Option<f64>,
        /// Target rank (rankdef kind only)
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long = "output-dir")]
        output_dir: PathBuf,
        /// Output format: matrix-market (default) or csv
        #[arg(long)]
        format: Option<String>,
    },
    /// Print dimensions, effective rank, and extreme singular values
    Info {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        format: Option<String>,
        #[command(flatten)]
        tol: TolArgs,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match &e {
            Error::RankDeficient { .. }
            | Error::SvdConvergence
            | Error::EigConvergence
            | Error::NumericFailure(_) => 2,
            Error::BranchCut { .. } | Error::InfeasibleSum { .. } => 3,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn resolve_format(path: &Path, flag: &Option<String>) -> Result<MatrixFileFormat, Failure> {
    match flag {
        Some(s) => s.parse::<MatrixFileFormat>().map_err(Failure::from),
        None => Ok(io::infer_format(path)),
    }
}

fn read_input(path: &Path, flag: &Option<String>) -> Result<Matrix, Failure> {
    let fmt = resolve_format(path, flag)?;
    Ok(io::read_matrix(path, fmt)?)
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Decompose {
            input,
            variant,
            output,
            report,
            scale,
            format,
            tol,
        } => {
            let variant = Variant::from_cli_name(&variant)
                .ok_or_else(|| Failure::usage(format!("unknown variant {variant:?}")))?;
            if scale.is_some() && variant != Variant::NonTransposeSum {
                return Err(Failure::usage(
                    "--scale is only valid with the nt-sum variant",
                ));
            }
            let tol = tol.config()?;
            let m = read_input(&input, &format)?;
            let dec = decompose(&m, variant, scale, &tol)?;
            let out_fmt = resolve_format(&output, &format)?;
            io::write_matrix(dec.a(), &output, out_fmt)?;
            if variant.is_sum() {
                println!("c = {}", dec.scale_c());
            }
            if let Some(report_path) = report {
                let rep = report_for_decomposition(&m, &dec, &tol, 0);
                io::write_report(&[rep], &report_path)?;
            }
            Ok(())
        }
        Command::Verify {
            input,
            variants,
            seed,
            report,
            format,
            tol,
        } => {
            let variants = parse_variants(&variants)?;
            let tol = tol.config()?;
            let m = read_input(&input, &format)?;
            let mut reports = Vec::with_capacity(variants.len());
            for v in variants {
                reports.push(verify_matrix(&m, v, &tol, seed)?);
            }
            match report {
                Some(path) => io::write_report(&reports, &path)?,
                None => print!("{}", io::report_json(&reports)?),
            }
            Ok(())
        }
        Command::Rga {
            input,
            output,
            format,
            tol,
        } => {
            let tol = tol.config()?;
            let g = read_input(&input, &format)?;
            let p = rga(&g, &tol)?;
            let out_fmt = resolve_format(&output, &format)?;
            io::write_matrix(&p, &output, out_fmt)?;
            Ok(())
        }
        Command::Generate {
            rows,
            cols,
            kind,
            cond,
            rank,
            seed,
            count,
            output_dir,
            format,
        } => {
            let kind = EnsembleKind::from_cli_name(&kind)
                .ok_or_else(|| Failure::usage(format!("unknown ensemble kind {kind:?}")))?;
            let spec = EnsembleSpec {
                rows,
                cols,
                kind,
                condition_number: cond,
                rank,
                seed,
                count,
            };
            let matrices = generate_ensemble(&spec)?;
            std::fs::create_dir_all(&output_dir).map_err(Error::from)?;
            let fmt = match &format {
                Some(s) => s.parse::<MatrixFileFormat>()?,
                None => MatrixFileFormat::MatrixMarketArray,
            };
            let ext = match fmt {
                MatrixFileFormat::MatrixMarketArray => "mtx",
                MatrixFileFormat::Csv => "csv",
            };
            for (idx, m) in matrices.iter().enumerate() {
                let name = format!(
                    "{}_{rows}x{cols}_seed{seed}_{idx:03}.{ext}",
                    kind.cli_name()
                );
                let path = output_dir.join(name);
                io::write_matrix(m, &path, fmt)?;
                println!("{}", path.display());
            }
            Ok(())
        }
        Command::Info { input, format, tol } => {
            let tol = tol.config()?;
            let m = read_input(&input, &format)?;
            let f = compute_svd(&m, &tol)?;
            println!("rows: {}", m.rows());
            println!("cols: {}", m.cols());
            println!("kind: {}", m.kind());
            println!("effective_rank: {}", f.effective_rank());
            println!("sigma_max: {}", f.sigma_max());
            println!("sigma_min: {}", f.sigma_min());
            if f.sigma_min() > 0.0 {
                println!("condition: {}", f.sigma_max() / f.sigma_min());
            } else {
                println!("condition: inf");
            }
            Ok(())
        }
    }
}

fn decompose(
    m: &Matrix,
    variant: Variant,
    scale: Option<f64>,
    tol: &ToleranceConfig,
) -> Result<Decomposition, Failure> {
    let dec = match variant {
        Variant::DiffNonsingular => decompose_diff(m, tol)?,
        Variant::DiffPseudoinverse => decompose_diff_pinv(m, tol)?,
        Variant::DiffUnitFill => decompose_diff_unitfill(m, tol)?,
        Variant::DiffConjugate => decompose_diff_complex(m, tol)?,
        Variant::SumScaled => decompose_sum(m, tol)?,
        Variant::NonTransposeDiff => decompose_nontranspose_diff(m, tol)?,
        Variant::NonTransposeSum => decompose_nontranspose_sum(m, scale, tol)?,
    };
    Ok(dec)
}

fn parse_variants(list: &str) -> Result<Vec<Variant>, Failure> {
    if list.trim() == "all" {
        return Ok(Variant::ALL.to_vec());
    }
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            Variant::from_cli_name(s)
                .ok_or_else(|| Failure::usage(format!("unknown variant {s:?}")))
        })
        .collect()
}
