mod args;
mod run;

use clap::Parser;
use fqlab::Error;
use std::process::ExitCode;

/// Exit status for a failed run: 2 parse or io, 3 size caps, 4 unknown
/// claim or lemma, 1 anything else. Law violations return 5 from `run`.
fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Parse(_) | Error::Io(_)) => 2,
        Some(Error::OracleTooLarge(_) | Error::EnumerationTooLarge(_) | Error::HypothesisUncheckable(_)) => 3,
        Some(Error::UnknownClaim(_) | Error::UnknownLemma(_)) => 4,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    if cli.workers > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(cli.workers).build_global().expect("thread pool set once");
    }
    match run::run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
