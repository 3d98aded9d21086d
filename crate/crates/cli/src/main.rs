//! cychom: exact cyclic-homology computations with chain-level certificates.
//!
//! Subcommands load JSON descriptions (algebras, coalgebras, coactions,
//! comodules), run a named computation, write a deterministic JSON report
//! and print a human summary. Exit code 0 means every certificate passed,
//! 1 means some certificate failed (the report carries the witness), 2 means
//! the input was malformed.

mod commands;
mod report;
mod schema;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "cychom", version, about)]
struct Cli {
    /// Ground field: Q or F<p> (overrides the input file).
    #[arg(long, global = true)]
    field: Option<String>,
    /// Write the JSON report here (default: <command>.report.json).
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Seed for randomized verification suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Full,
    Cc2,
    Cc1,
    Bar,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LemmaArg {
    Kill,
    Bar,
    Matrix,
    Conj,
    Rowext,
}

#[derive(Subcommand)]
enum Command {
    /// Check algebra / coalgebra / Hopf axioms of an input file.
    Check { file: PathBuf },
    /// Homology dimensions of the chosen sub-bicomplex total complex.
    Homology {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Full)]
        mode: ModeArg,
        #[arg(short = 'D', long, default_value_t = 5)]
        degree: usize,
    },
    /// Cotrace space of the coalgebra; characters of bundled comodules.
    Cotraces { file: PathBuf },
    /// Solve for a strong connection and certify it.
    StrongConnection {
        file: PathBuf,
        /// Drop the unitality constraint ℓ(e) = 1⊗1.
        #[arg(long)]
        non_unital: bool,
    },
    /// Build the Ehresmann-Schauenburg coring and its row extension.
    EsCoring { file: PathBuf },
    /// Chern character of an explicit idempotent over an algebra.
    Chern {
        #[arg(long)]
        idempotent: PathBuf,
        #[arg(short, default_value_t = 1)]
        n: usize,
    },
    /// Chern-Weil character of a cotrace through a solved connection.
    ChernWeil {
        file: PathBuf,
        /// chi:<comodule-name> or basis:<k> (k-th cotrace basis element).
        #[arg(long)]
        cotrace: String,
        #[arg(short, default_value_t = 1)]
        n: usize,
    },
    /// Randomized / fixed verification suites for the homotopy lemmas.
    Verify {
        #[arg(long, value_enum)]
        lemma: LemmaArg,
        #[arg(long, default_value_t = 20)]
        seeds: u64,
    },
    /// The factorization diagram: Chern-Weil vs Chern-Galois vs idempotent.
    Diagram {
        file: PathBuf,
        #[arg(short, default_value_t = 1)]
        n: usize,
        /// Name of the comodule to use (default "sign").
        #[arg(long, default_value = "sign")]
        comodule: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads();
    let started = std::time::Instant::now();
    let outcome = match &cli.command {
        Command::Check { file } => commands::check(file, &cli.field),
        Command::Homology { file, mode, degree } => {
            commands::homology(file, &cli.field, (*mode).into(), *degree)
        }
        Command::Cotraces { file } => commands::cotraces(file, &cli.field),
        Command::StrongConnection { file, non_unital } => {
            commands::strong_connection(file, &cli.field, !*non_unital)
        }
        Command::EsCoring { file } => commands::es_coring(file, &cli.field),
        Command::Chern { idempotent, n } => commands::chern(idempotent, &cli.field, *n),
        Command::ChernWeil { file, cotrace, n } => {
            commands::chern_weil(file, &cli.field, cotrace, *n)
        }
        Command::Verify { lemma, seeds } => commands::verify((*lemma).into(), *seeds, cli.seed),
        Command::Diagram { file, n, comodule } => {
            commands::diagram(file, &cli.field, *n, comodule)
        }
    };
    let report = match outcome {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let elapsed = started.elapsed().as_millis();
    print!("{}", report.summary(elapsed));
    let path = cli
        .report
        .unwrap_or_else(|| PathBuf::from(format!("{}.report.json", report.command)));
    if let Err(e) = std::fs::write(&path, report.to_json()) {
        eprintln!("error: cannot write report {}: {e}", path.display());
        return ExitCode::from(2);
    }
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

impl From<ModeArg> for cychom_core::chainkit::CcMode {
    fn from(m: ModeArg) -> Self {
        use cychom_core::chainkit::CcMode;
        match m {
            ModeArg::Full => CcMode::Full,
            ModeArg::Cc2 => CcMode::Cc2,
            ModeArg::Cc1 => CcMode::Cc1,
            ModeArg::Bar => CcMode::Bar,
        }
    }
}

impl From<LemmaArg> for commands::Lemma {
    fn from(l: LemmaArg) -> Self {
        match l {
            LemmaArg::Kill => commands::Lemma::Kill,
            LemmaArg::Bar => commands::Lemma::Bar,
            LemmaArg::Matrix => commands::Lemma::Matrix,
            LemmaArg::Conj => commands::Lemma::Conj,
            LemmaArg::Rowext => commands::Lemma::Rowext,
        }
    }
}

/// CYCHOM_THREADS caps the rayon pool; unset means the library default.
fn init_threads() {
    #[cfg(feature = "parallel")]
    {
        if let Ok(v) = std::env::var("CYCHOM_THREADS") {
            if let Ok(n) = v.parse::<usize>() {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n.max(1))
                    .build_global();
            }
        }
    }
}
