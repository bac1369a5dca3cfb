use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::Parser;

use rackforge_cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0);
    let clock = Instant::now();
    let report = match execute(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("rackforge: {e}");
            return ExitCode::from(2);
        }
    };
    let text = report.render(started, clock.elapsed().as_secs_f64() * 1e3);
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, format!("{text}\n")) {
                eprintln!("rackforge: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
            print!("{}", report.summary());
        }
        None => println!("{text}"),
    }
    if cli.summary {
        eprint!("{}", report.summary());
    }
    ExitCode::from(report.exit_code() as u8)
}
