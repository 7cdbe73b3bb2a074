use std::process::ExitCode;

use clap::Parser;

use modlat::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli, &mut std::io::stdout().lock()) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    };
    ExitCode::from(code as u8)
}
