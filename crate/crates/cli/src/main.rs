use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use repzeta_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let code = match run(&cli) {
        Ok(r) => {
            print!("{}", r.render(cli.json));
            r.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    // timing goes to stderr so reports stay byte-stable
    eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    ExitCode::from(code as u8)
}
