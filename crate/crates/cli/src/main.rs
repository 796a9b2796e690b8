mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

const FORMATS: &str = "\
FILE FORMATS
  CMAT v1      `cmat 1 <rows> <cols>`, then one line per row of whitespace
               separated entries written `<re>` or `<re><sign><im>i`,
               e.g. `1.5-2i`, `0`, `3+0.25i`.
  State file   a `# dims <d1> <d2>` line followed by one CMAT block. Without
               the line (and without --dims) a square d*d x d*d matrix is
               read as d x d.
  Triple file  three CMAT blocks in the order A, B, C.
  GRAPH v1     `graph 1 <n> <m>`, then m lines `i j` with 1 <= i < j <= n.
               Several blocks may follow each other.
  Lines starting with `#` and blank lines are ignored.

VERDICT JSON (schema verdict-1)
  {\"schema\", \"outcome\": entangled|separable|inconclusive,
   \"certificate\": {\"matrix\": B|C|PT, \"subset\": [1-based labels],
                   \"min_eigenvalue\", \"heuristic\"} | null,
   \"reason\": not_triangle_free|comparison_matrices_psd|not_ppt|not_cldui|null,
   \"tolerances\": {\"psd_eps\", \"zero_eps\"}}

EXIT CODES
  analyze: 0 entangled, 1 separable, 2 inconclusive.
  64 unreadable input or bad usage, 65 invalid dimensions or data,
  66 construction impossible, 74 I/O failure.

ENVIRONMENT
  TRIFREE_THREADS  worker threads (0 or unset: one per core).";

#[derive(Parser, Debug)]
#[command(name = "trifree", version, about = "Entanglement detection for states with triangle-free patterns")]
#[command(after_long_help = FORMATS)]
struct Cli {
    /// Worker threads; 0 picks one per core.
    #[arg(long, global = true, env = "TRIFREE_THREADS", default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct TolArgs {
    /// Relative slack of PSD tests.
    #[arg(long = "tol-psd", default_value_t = 1e-9)]
    psd: f64,
    /// Relative threshold below which an entry counts as zero.
    #[arg(long = "tol-zero", default_value_t = 1e-12)]
    zero: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide a state file; prints verdict JSON, exit code encodes the outcome.
    Analyze {
        file: PathBuf,
        /// Local dimensions, overriding the file header.
        #[arg(long, num_args = 2, value_names = ["D1", "D2"])]
        dims: Option<Vec<usize>>,
        /// Also search principal submatrices with triangle-free patterns.
        #[arg(long)]
        subgraph: bool,
        #[command(flatten)]
        tol: TolArgs,
        /// Column subsets tried for rectangular states.
        #[arg(long, default_value_t = 10_000)]
        max_column_subsets: usize,
        /// Largest dimension searched exhaustively with --subgraph.
        #[arg(long, default_value_t = 20)]
        exhaustive_limit: usize,
        /// Cap on subsets examined by the exhaustive search.
        #[arg(long, default_value_t = 1 << 24)]
        max_subsets: usize,
        /// Greedy restarts above the exhaustive limit.
        #[arg(long, default_value_t = 8)]
        greedy_restarts: usize,
    },
    /// Project a state onto the LDOI or CLDUI states.
    Project {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long, num_args = 2, value_names = ["D1", "D2"])]
        dims: Option<Vec<usize>>,
        /// Monte-Carlo average over this many random twirls instead of the exact projection.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the (A, B, C) triple instead of the state.
        #[arg(long)]
        triple: bool,
        /// Scale the result to unit trace.
        #[arg(long)]
        normalize: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build realizations and certified PPT-entangled families.
    #[command(subcommand)]
    Construct(ConstructCommand),
    /// Graph utilities.
    #[command(subcommand)]
    Graph(GraphCommand),
}

#[derive(Subcommand, Debug)]
enum ConstructCommand {
    /// PSD realization of the k-cycle with a non-PSD comparison matrix.
    Cycle {
        k: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// PSD realization of a triangle-free cyclic graph with a non-PSD comparison matrix.
    Realize {
        graph: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Certified PPT-entangled LDOI states on a graph, one triple file and one
    /// verdict JSON per state.
    Family {
        graph: PathBuf,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out_dir: PathBuf,
        /// Fraction of the largest diagonally dominant scaling of C, in (0, 1].
        #[arg(long, default_value_t = 1.0)]
        c_scale: f64,
        /// Put every free entry of A at its lower bound.
        #[arg(long)]
        lower_bound: bool,
        /// Scale each state to unit trace.
        #[arg(long)]
        normalize: bool,
        /// Draws per state before giving up.
        #[arg(long, default_value_t = 100)]
        max_attempts: usize,
        #[command(flatten)]
        tol: TolArgs,
    },
}

#[derive(Subcommand, Debug)]
enum GraphCommand {
    /// Report vertex and edge counts and whether the graph is triangle-free or acyclic.
    Check { graph: PathBuf },
    /// Count connected cyclic triangle-free graphs on d unlabeled vertices (d <= 7).
    Enumerate {
        d: usize,
        /// Write one representative per class here.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Add a vertex adjacent to both ends of every edge.
    Reduce {
        graph: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Ldoi,
    Cldui,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { commands::EXIT_USAGE } else { 0 });
        }
    };
    if cli.threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("trifree: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
