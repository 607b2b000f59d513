mod matrix_file;
mod report;
mod verify;

use std::io::{self, Write};
use std::num::NonZeroU64;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ppt_core::block::{gppt, hat_embedding, jppt, schur_complement};
use ppt_core::linalg::pinv;
use ppt_core::order::theorem1_report;
use ppt_core::varprin::solve_saddle;
use ppt_core::{Error, Field, ToleranceConfig};
use serde_json::{json, Value};

use report::{Report, EXIT_CHECK_FAILED, EXIT_USAGE};

#[derive(Parser)]
#[command(name = "ppt", version, about = "Principal pivot transforms, order checks and saddle-point solves on dense matrices")]
struct Cli {
    #[command(flatten)]
    tol: TolFlags,

    /// Print reports as a table instead of JSON lines.
    #[arg(long, global = true)]
    human: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct TolFlags {
    /// Relative singular-value cutoff for rank decisions.
    #[arg(long, global = true, allow_negative_numbers = true, default_value_t = ToleranceConfig::default().rank_rel_tol)]
    rank_tol: f64,
    /// Absolute slack for eigenvalue sign decisions.
    #[arg(long, global = true, allow_negative_numbers = true, default_value_t = ToleranceConfig::default().psd_tol)]
    psd_tol: f64,
    /// Slack for equality and residual checks.
    #[arg(long, global = true, allow_negative_numbers = true, default_value_t = ToleranceConfig::default().eq_tol)]
    eq_tol: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Apply a block transform and print the result as a matrix file.
    Transform {
        file: PathBuf,
        #[arg(long, value_enum)]
        which: Which,
    },
    /// Evaluate the equivalent monotonicity statements for A ≤ B.
    CheckMonotone { a: PathBuf, b: PathBuf },
    /// Solve A [x1; x2] = [y1; y2] for y1 and every x2.
    Solve {
        file: PathBuf,
        /// JSON array, e.g. `[1, 2]` or `[[1, 0], [0, 1]]` for complex entries.
        #[arg(long)]
        x1: String,
        #[arg(long)]
        y2: String,
    },
    /// Run randomized invariant suites.
    Verify {
        #[arg(long, value_enum, default_value_t = verify::Suite::All)]
        suite: verify::Suite,
        #[arg(long, default_value = "100")]
        trials: NonZeroU64,
        /// Master seed; trial k uses a seed derived from it and k.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run a single trial with this seed, as printed in a failure line.
        #[arg(long, conflicts_with_all = ["trials", "seed"])]
        replay: Option<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    /// Generalized principal pivot transform.
    Ppt,
    /// Signature-twisted transform J·ppt.
    Jppt,
    /// Generalized Schur complement A/A22.
    Schur,
    /// Moore-Penrose pseudoinverse of the whole matrix.
    Pinv,
    /// Hat embedding, partitioned (n, n2).
    Hat,
}

/// Why a command stopped before producing its normal output.
enum Failure {
    Usage(String),
    /// A report was produced but its outcome is a failure with this code.
    Report(Report, u8),
}

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure::Usage(s)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let tol = match ToleranceConfig::new(cli.tol.rank_tol, cli.tol.psd_tol, cli.tol.eq_tol) {
        Ok(t) => t,
        Err(e) => return usage(&e.to_string()),
    };
    let argv: Vec<String> = std::env::args().collect();
    let result = match cli.command {
        Command::Transform { file, which } => transform(&file, which, &tol).map(|v| {
            println!("{v}");
            None
        }),
        Command::CheckMonotone { a, b } => check_monotone(&a, &b, argv, &tol).map(Some),
        Command::Solve { file, x1, y2 } => solve(&file, &x1, &y2, argv, &tol).map(Some),
        Command::Verify { suite, trials, seed, replay } => {
            let trials = match replay {
                Some(s) => verify::Trials::Replay(s),
                None => verify::Trials::Master { seed, count: trials.get() },
            };
            let mut r = Report::new(argv, tol);
            verify::run(suite, trials, &tol, &mut r);
            Ok(Some(r))
        }
    };
    match result {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(r)) => emit(&r, cli.human, r.exit_code()),
        Err(Failure::Report(r, code)) => emit(&r, cli.human, code),
        Err(Failure::Usage(msg)) => usage(&msg),
    }
}

fn emit(r: &Report, human: bool, code: u8) -> ExitCode {
    let mut out = io::stdout().lock();
    if let Err(e) = r.write(human, &mut out).and_then(|_| out.flush()) {
        eprintln!("ppt: writing report: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    ExitCode::from(code)
}

fn usage(msg: &str) -> ExitCode {
    eprintln!("ppt: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn transform(path: &Path, which: Which, tol: &ToleranceConfig) -> Result<Value, Failure> {
    let a = matrix_file::read(path)?;
    let (n1, n2) = (a.n1(), a.n2());
    Ok(match which {
        Which::Ppt => matrix_file::to_json(gppt(&a, tol)?.matrix(), n1, n2),
        Which::Jppt => matrix_file::to_json(jppt(&a, tol)?.matrix(), n1, n2),
        Which::Schur => matrix_file::to_json(&schur_complement(&a, tol)?, n1, 0),
        Which::Pinv => matrix_file::to_json(&pinv(a.matrix(), tol)?, n1, n2),
        Which::Hat => {
            let h = hat_embedding(&a, tol)?;
            matrix_file::to_json(h.matrix(), h.n1(), h.n2())
        }
    })
}

fn check_monotone(a: &Path, b: &Path, argv: Vec<String>, tol: &ToleranceConfig) -> Result<Report, Failure> {
    let (ma, mb) = (matrix_file::read(a)?, matrix_file::read(b)?);
    let r = theorem1_report(&ma, &mb, tol)?;
    let mut rep = Report::new(argv, *tol);
    rep.value("stmt_a", r.stmt_a);
    rep.value("stmt_b", r.stmt_b);
    rep.value(
        "stmt_c",
        json!({
            "constant": r.stmt_c.constant,
            "common_rank": r.stmt_c.common_rank,
            "witness_t": r.stmt_c.witness_t,
            "endpoint_ranks_differ": r.stmt_c.endpoint_ranks_differ,
        }),
    );
    rep.value("schur_mono", r.schur_mono);
    rep.check("hypothesis", r.hypothesis_ok, None, json!("A ≤ B in the Loewner order"));
    rep.check("consistent", r.consistent, None, json!("statements agree; Schur order follows when they hold"));
    Ok(rep)
}

fn solve(path: &Path, x1: &str, y2: &str, argv: Vec<String>, tol: &ToleranceConfig) -> Result<Report, Failure> {
    let a = matrix_file::read(path)?;
    let (x1, f1) = matrix_file::parse_vector("x1", x1)?;
    let (y2, f2) = matrix_file::parse_vector("y2", y2)?;
    let field = if [a.matrix().field(), f1, f2].contains(&Field::Complex) { Field::Complex } else { Field::Real };
    let mut rep = Report::new(argv, *tol);
    let sol = match solve_saddle(&a, &x1, &y2, tol) {
        Ok(s) => s,
        Err(Error::NoSolution { residual }) => {
            rep.check("solvable", false, Some(residual), json!({ "certificate": "y2 - A21 x1 ∉ ran A22" }));
            return Err(Failure::Report(rep, EXIT_CHECK_FAILED));
        }
        Err(Error::InclusionFailure { failed, residuals }) => {
            let names: Vec<String> = failed.iter().map(|i| i.to_string()).collect();
            return Err(Failure::Usage(format!(
                "inadmissible instance, failed certificate: {} (residuals {:e}, {:e})",
                names.join(", "),
                residuals[0],
                residuals[1]
            )));
        }
        Err(e) => return Err(e.into()),
    };
    rep.value("y1", matrix_file::vector_json(&sol.y1, field));
    rep.value("x2", matrix_file::vector_json(&sol.particular_x2, field));
    let basis: Vec<Value> = sol
        .x2_set
        .kernel
        .vectors()
        .column_iter()
        .map(|c| matrix_file::vector_json(&c.into_owned(), field))
        .collect();
    rep.value("kernel_basis", basis);
    let limit = tol.eq_tol * (1.0 + a.matrix().max_abs());
    rep.check("block_equation", sol.residual <= limit, Some(sol.residual), json!({ "limit": limit }));
    rep.check("jppt_relation", sol.jppt_residual <= limit, Some(sol.jppt_residual), json!({ "limit": limit }));
    Ok(rep)
}
