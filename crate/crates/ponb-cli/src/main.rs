//! `ponb`: generate basis pairs, verify uncertainty certificates, test
//! double support, and estimate operator norms from the command line.
//!
//! Exit codes: 0 success or verified, 1 a certified inequality failed,
//! 2 input or usage error, 3 an annihilation witness was found.

use clap::Parser;

mod commands;
mod manifest;
mod parallel;
mod schema;

#[derive(Parser)]
#[command(name = "ponb", version, about = "p-orthonormal basis pairs and uncertainty certificates")]
struct Cli {
    #[command(subcommand)]
    command: commands::Command,
}

fn main() {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(2);
        }
    }
}
