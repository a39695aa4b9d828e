use std::process::ExitCode;

use clap::Parser;
use glars_cli::{configure_threads, run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        // clap exits 2 on usage errors and 0 for --help/--version
        Err(e) => e.exit(),
    };
    let result = configure_threads().and_then(|()| run(cli));
    match result {
        Ok(files) => {
            for f in files {
                eprintln!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("glars: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
