use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use splitauth_cli::{
    cmd_evaluate, cmd_feasible, cmd_search, cmd_to_code, cmd_to_design, cmd_verify, search_config,
    CommandResult, Format,
};
use splitauth_core::{parse_params, DesignParams};

#[derive(Parser)]
#[command(
    name = "splitauth",
    version,
    about = "Splitting designs and splitting authentication codes"
)]
struct Cli {
    /// Worker threads for verification and evaluation
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Seed for randomized candidate order in search
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Search time limit in seconds
    #[arg(long, global = true)]
    time_limit: Option<f64>,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args)]
struct ParamArgs {
    /// Read t, v, c, u, lambda (and optionally b) from a design-file header
    #[arg(long, conflicts_with_all = ["t", "v", "c", "u"])]
    params: Option<PathBuf>,
    #[arg(long)]
    t: Option<u64>,
    #[arg(long)]
    v: Option<u64>,
    #[arg(long)]
    c: Option<u64>,
    #[arg(long)]
    u: Option<u64>,
    #[arg(long, default_value_t = 1)]
    lambda: u64,
    #[arg(long)]
    b: Option<u64>,
}

#[derive(Subcommand)]
enum Verb {
    /// Check the coverage condition of a design file
    Verify {
        design: PathBuf,
        #[arg(long)]
        t: Option<u64>,
        #[arg(long)]
        lambda: Option<u64>,
    },
    /// Evaluate the necessary existence conditions for a parameter set
    Feasible(ParamArgs),
    /// Backtracking search for a design with lambda = 1
    Search {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        node_limit: Option<u64>,
        /// Geometric restart schedule with reshuffled candidate order
        #[arg(long)]
        restarts: bool,
        /// Disable fixing the first block
        #[arg(long)]
        no_symmetry: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Convert a design file to an encoding-matrix file
    ToCode {
        design: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Convert an encoding-matrix file to a design file
    ToDesign {
        matrix: PathBuf,
        /// Strength to verify; detected when omitted
        #[arg(long)]
        t: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exact spoofing probabilities of an encoding matrix
    Evaluate {
        matrix: PathBuf,
        #[arg(long)]
        max_order: Option<usize>,
        /// Evaluate codes with more than 64 messages
        #[arg(long)]
        allow_large: bool,
    },
}

fn read(path: &Path) -> Result<String, CommandResult> {
    fs::read_to_string(path).map_err(|e| CommandResult::usage(format!("{}: {e}", path.display())))
}

fn params(args: &ParamArgs) -> Result<DesignParams, CommandResult> {
    let p = match &args.params {
        Some(path) => parse_params(&read(path)?).map_err(CommandResult::usage)?,
        None => {
            let need = |x: Option<u64>, n: &str| {
                x.ok_or_else(|| CommandResult::usage(format!("missing --{n}")))
            };
            let p = DesignParams::new(
                need(args.t, "t")?,
                need(args.v, "v")?,
                need(args.c, "c")?,
                need(args.u, "u")?,
                args.lambda,
            )
            .map_err(CommandResult::usage)?;
            match args.b {
                Some(b) => p.with_blocks(b).map_err(CommandResult::usage)?,
                None => p,
            }
        }
    };
    Ok(p)
}

fn run(cli: &Cli) -> Result<(CommandResult, Option<PathBuf>), CommandResult> {
    Ok(match &cli.verb {
        Verb::Verify { design, t, lambda } => (cmd_verify(&read(design)?, *t, *lambda), None),
        Verb::Feasible(args) => (cmd_feasible(&params(args)?), None),
        Verb::Search {
            params: args,
            node_limit,
            restarts,
            no_symmetry,
            output,
        } => {
            let cfg = search_config(
                cli.time_limit,
                *node_limit,
                cli.seed,
                *restarts,
                !no_symmetry,
            )
            .map_err(CommandResult::usage)?;
            (cmd_search(&params(args)?, &cfg), output.clone())
        }
        Verb::ToCode { design, output } => (cmd_to_code(&read(design)?), output.clone()),
        Verb::ToDesign { matrix, t, output } => (cmd_to_design(&read(matrix)?, *t), output.clone()),
        Verb::Evaluate {
            matrix,
            max_order,
            allow_large,
        } => (cmd_evaluate(&read(matrix)?, *max_order, *allow_large), None),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let (result, output) = run(&cli).unwrap_or_else(|r| (r, None));
    let report = result.render(cli.format);
    // artifact goes to the output file, or to stdout with the report moved to stderr
    match (&result.artifact, output) {
        (Some(text), Some(path)) => {
            if let Err(e) = fs::write(&path, text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
            print!("{report}");
        }
        (Some(text), None) => {
            eprint!("{report}");
            print!("{text}");
        }
        (None, _) => {
            if result.code == 2 {
                eprint!("{report}");
            } else {
                print!("{report}");
            }
        }
    }
    let _ = std::io::stdout().flush();
    ExitCode::from(result.code)
}
