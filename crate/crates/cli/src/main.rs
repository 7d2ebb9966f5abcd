use std::process::ExitCode;

use clap::Parser;
use ftrpca::commands::{run, Cli};
use ftrpca::CliError;

fn configure_threads() {
    let Ok(value) = std::env::var("FTRPCA_THREADS") else {
        return;
    };
    match value.trim().parse::<usize>() {
        Ok(0) => {}
        Ok(n) => {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        Err(_) => eprintln!("ignoring FTRPCA_THREADS={value:?}"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let args: Vec<String> = std::env::args().skip(1).collect();
    match run(cli, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", CliError::to_json_line(&e));
            ExitCode::FAILURE
        }
    }
}
