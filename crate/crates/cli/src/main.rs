mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qsep_core::oracles::OptimizerConfig;

use crate::commands::CliError;

#[derive(Parser)]
#[command(name = "qsep", version, about = "CLIQUE to weak separability reductions and their numerical checks")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
pub struct GlobalOpts {
    /// Seed for every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Convergence tolerance of the numerical optimizers.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Random restarts per optimization.
    #[arg(long, global = true)]
    pub restarts: Option<usize>,
    /// Iteration cap per restart.
    #[arg(long, global = true)]
    pub max_iters: Option<usize>,
    /// Print the run report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
}

impl GlobalOpts {
    pub fn optimizer(&self) -> OptimizerConfig {
        let d = OptimizerConfig::default();
        OptimizerConfig {
            restarts: self.restarts.unwrap_or(d.restarts),
            max_iters: self.max_iters.unwrap_or(d.max_iters),
            tol: self.tol.unwrap_or(d.tol),
            seed: self.seed,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a CLIQUE instance to RSDF, WOPT and WMEM instance files.
    Reduce {
        /// Graph in DIMACS edge format or as {"n": .., "edges": [[u, v], ..]}.
        graph: PathBuf,
        /// Clique size threshold.
        #[arg(short, long)]
        c: usize,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Pad the gadget to this first-factor dimension.
        #[arg(long)]
        m_target: Option<usize>,
    },
    /// Run acceptance criteria, or check instance files written by `reduce`.
    Verify {
        /// Criterion key or number; repeatable.
        #[arg(long = "only", value_name = "CRITERION")]
        only: Vec<String>,
        files: Vec<PathBuf>,
    },
    /// Weak membership query backed by the PPT test.
    Oracle {
        /// Density matrix as rows of [re, im] pairs.
        #[arg(long, required_unless_present = "bloch", conflicts_with = "bloch")]
        state: Option<PathBuf>,
        /// Bloch vector as a JSON array.
        #[arg(long)]
        bloch: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        beta: f64,
    },
    /// Channel checks: CP, TP, entanglement breaking, and the EB reduction.
    EbCheck {
        /// JSON list of Kraus operators, each rows of [re, im] pairs.
        #[arg(long, required_unless_present = "choi", conflicts_with = "choi")]
        kraus: Option<PathBuf>,
        /// Choi matrix as rows of [re, im] pairs; needs --m and --n.
        #[arg(long, requires_all = ["m", "n"])]
        choi: Option<PathBuf>,
        /// Output dimension.
        #[arg(long)]
        m: Option<usize>,
        /// Input dimension.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Polynomial exponents of β for the worst-case gadget.
    Exponents {
        /// Vertex counts for an extra least-squares fit.
        #[arg(long, num_args = 1..)]
        fit: Vec<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    let outcome = match &cli.command {
        Command::Reduce { graph, c, out_dir, m_target } => commands::reduce(graph, *c, out_dir, *m_target),
        Command::Verify { only, files } => commands::verify(g, only, files),
        Command::Oracle { state, bloch, m, n, beta } => {
            commands::oracle(state.as_deref(), bloch.as_deref(), *m, *n, *beta)
        }
        Command::EbCheck { kraus, choi, m, n } => commands::eb_check(kraus.as_deref(), choi.as_deref(), *m, *n),
        Command::Exponents { fit } => commands::exponents(g, fit),
    };
    match outcome {
        Ok(report) => {
            report.emit(g.json);
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core { source, .. } if source.is_numeric() => 3,
            _ => 2,
        }
    }
}
