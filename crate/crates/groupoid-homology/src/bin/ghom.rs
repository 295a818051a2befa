use clap::{Parser, Subcommand};
use groupoid_homology::cli::{self, CliOptions, VerifySuite};
use std::path::PathBuf;

/// Exact integer homology of finite groupoids.
#[derive(Parser)]
#[command(name = "ghom", version, about)]
struct Args {
    /// Suppress wall-clock lines so reports are byte-identical across runs.
    #[arg(long, global = true)]
    deterministic: bool,

    /// Accepted for interface compatibility; the engine is sequential and
    /// produces identical output for every thread count.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Homology groups of a groupoid from its composable-tuple complex.
    Homology {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
    },
    /// Smith normal form of an integer matrix file.
    Snf { file: PathBuf },
    /// Certified identity suites over a groupoid (and colouring).
    Verify {
        file: PathBuf,
        #[arg(long, value_enum)]
        suite: VerifySuite,
        #[arg(long)]
        colouring: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
    },
    /// Homology of a colouring, cross-checked on the ordered subnerve.
    ColouringHomology {
        groupoid: PathBuf,
        colouring: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
    },
    /// Anti-Cech sequence, per-step homology and the comparison verdict.
    Anticech {
        file: PathBuf,
        #[arg(long, default_value_t = 8)]
        steps: usize,
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
    },
    /// Witness search at a scale, the derived colouring and its homology.
    DadColouring {
        groupoid: PathBuf,
        scale: PathBuf,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long, default_value_t = 2)]
        dmax: usize,
    },
    /// Uniformly finite homology of a finite metric space.
    UfHomology {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
    },
}

fn main() {
    let args = Args::parse();
    let opts = CliOptions::new(args.deterministic);
    let report = match &args.command {
        Command::Homology { file, max_degree } => cli::cmd_homology(file, *max_degree, opts),
        Command::Snf { file } => cli::cmd_snf(file, opts),
        Command::Verify {
            file,
            suite,
            colouring,
            max_degree,
        } => cli::cmd_verify(file, *suite, colouring.as_deref(), *max_degree, opts),
        Command::ColouringHomology {
            groupoid,
            colouring,
            max_degree,
        } => cli::cmd_colouring_homology(groupoid, colouring, *max_degree, opts),
        Command::Anticech {
            file,
            steps,
            max_degree,
        } => cli::cmd_anticech(file, *steps, *max_degree, opts),
        Command::DadColouring {
            groupoid,
            scale,
            cap,
            dmax,
        } => cli::cmd_dad_colouring(groupoid, scale, *cap, *dmax, opts),
        Command::UfHomology { file, max_degree } => cli::cmd_uf_homology(file, *max_degree, opts),
    };
    print!("{}", report.render());
    std::process::exit(report.exit_code);
}
