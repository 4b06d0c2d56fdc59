//! Serves an in-process oracle over the wire protocol on standard
//! input/output, so any of them can be tested as an external process.

use std::io::{stdin, stdout};
use std::process::ExitCode;

use clap::Parser;
use hyperprobe::wire::serve;
use hyperprobe_core::oracles;

#[derive(Parser)]
#[command(name = "reference-oracle", version)]
struct Args {
    /// Which in-process oracle to serve.
    #[arg(long, default_value = "reference")]
    oracle: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Announce that requests may overlap.
    #[arg(long)]
    concurrent: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let Some(mut oracle) = oracles::by_name(&args.oracle, args.seed) else {
        eprintln!("unknown oracle {:?}; known: {}", args.oracle, oracles::NAMES.join(", "));
        return ExitCode::from(3);
    };
    match serve(&mut oracle, args.concurrent, stdin().lock(), stdout().lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("reference-oracle: {e}");
            ExitCode::from(3)
        }
    }
}
