mod commands;
mod manifest;

use clap::Parser;
use commands::{Cli, Outcome};
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Ok(raw) = std::env::var("SCL_PRECISION_CAP") {
        match raw.parse::<u32>() {
            Ok(cap) if cap > 0 => scl_core::cyclotomic::set_precision_cap(cap),
            _ => {
                eprintln!("error: SCL_PRECISION_CAP must be a positive integer, got {raw:?}");
                return ExitCode::from(1);
            }
        }
    }
    if let Some(k) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("error: could not configure {k} threads: {e}");
            return ExitCode::from(1);
        }
    }
    match commands::run(&cli) {
        Ok(Outcome { stdout, code }) => {
            print!("{stdout}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::exit_code_for(&e))
        }
    }
}
