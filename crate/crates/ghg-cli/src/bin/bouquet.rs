//! The `bouquet` binary: direct access to fiducial verification and search
//! (the same handlers as `ghg bouquet ...`).

use clap::Parser;
use ghg_cli::{cmd_bouquet_search, cmd_bouquet_verify, exit_code_for, BouquetCmd, GlobalOpts};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "bouquet",
    version,
    about = "Verify fiducials and search for equiangular or regular bouquets"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: BouquetCmd,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    cli.global.init_threads();
    let result = match &cli.command {
        BouquetCmd::Verify(args) => cmd_bouquet_verify(&cli.global, args),
        BouquetCmd::Search(args) => cmd_bouquet_search(&cli.global, args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err) as u8)
        }
    }
}
