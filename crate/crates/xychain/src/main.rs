use clap::Parser;
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = xychain::cli::Cli::parse();
    match xychain::cli::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(xychain::cli::exit_code(&err))
        }
    }
}
