//! The `ghg` binary: descriptor construction from number-field data,
//! representation matrices, automorphism enumeration, bouquet verification
//! and search, and the acceptance selftest.

use clap::{Args, Parser, Subcommand};
use ghg_cli::{
    cmd_arith_build, cmd_aut_enumerate, cmd_bouquet_search, cmd_bouquet_verify, cmd_rep,
    cmd_selftest, exit_code_for, BouquetCmd, GlobalOpts, SideArg,
};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "ghg",
    version,
    about = "Generalised Heisenberg groups: representations, automorphisms, bouquets"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build descriptors from number-field ideal data.
    Arith {
        #[command(subcommand)]
        cmd: ArithCmd,
    },
    /// Print the Schrödinger matrix of one group element.
    Rep(RepArgs),
    /// Work with the automorphism group fixing the centre.
    Aut {
        #[command(subcommand)]
        cmd: AutCmd,
    },
    /// Bouquet verification and fiducial search.
    Bouquet {
        #[command(subcommand)]
        cmd: BouquetCmd,
    },
    /// Run the acceptance suite; exits nonzero on any failure.
    Selftest {
        /// Reduced dimensions and restart counts.
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Subcommand)]
enum ArithCmd {
    /// Construct the descriptor of an arithmetic tuple.
    Build {
        /// Field/ideal configuration JSON.
        #[arg(long)]
        config: PathBuf,
        /// Output descriptor path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum AutCmd {
    /// Enumerate the automorphisms through their (eta, sp) data.
    Enumerate {
        #[arg(long)]
        desc: PathBuf,
        #[arg(long)]
        count_only: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RepArgs {
    /// Descriptor JSON file.
    #[arg(long)]
    desc: PathBuf,
    /// Flat coordinates "a,b,c" split positionally over A, B, C.
    #[arg(long, allow_hyphen_values = true)]
    element: String,
    #[arg(long, value_enum, default_value_t = SideArg::Left)]
    side: SideArg,
    /// Central character exponent.
    #[arg(long, default_value_t = 1)]
    u: i64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    cli.global.init_threads();
    let result = match &cli.command {
        Command::Arith { cmd: ArithCmd::Build { config, out } } => {
            cmd_arith_build(&cli.global, config, out.as_deref())
        }
        Command::Rep(args) => cmd_rep(&cli.global, &args.desc, &args.element, args.side, args.u),
        Command::Aut { cmd: AutCmd::Enumerate { desc, count_only, out } } => {
            cmd_aut_enumerate(&cli.global, desc, *count_only, out.as_deref())
        }
        Command::Bouquet { cmd: BouquetCmd::Verify(args) } => cmd_bouquet_verify(&cli.global, args),
        Command::Bouquet { cmd: BouquetCmd::Search(args) } => cmd_bouquet_search(&cli.global, args),
        Command::Selftest { quick } => cmd_selftest(*quick),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err) as u8)
        }
    }
}
