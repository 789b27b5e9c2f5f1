//! `adsres`: resonance lists, resolvent scans, residue representations and
//! invariant checks from the command line.

mod cli;

use clap::Parser;
use std::process::ExitCode;

fn main() -> ExitCode {
    let args = cli::Args::parse();
    match cli::run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("adsres: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
