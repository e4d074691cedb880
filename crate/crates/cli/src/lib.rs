//! The `ewc` command line.

pub mod args;
pub mod commands;
pub mod error;

use std::io::Write;

use args::{Cli, Command};
pub use commands::RunConfig;
pub use error::{CliError, CliResult};

pub fn run(cli: &Cli, stdout: &mut dyn Write) -> CliResult<()> {
    match &cli.command {
        Command::Witness(a) => commands::cmd_witness(a, stdout),
        Command::Certify(a) => commands::cmd_certify(a, stdout),
        Command::Reproduce(a) => commands::cmd_reproduce(a, stdout),
        Command::Sweep(a) => commands::cmd_sweep(a, stdout),
        Command::AdversaryDemo(a) => commands::cmd_adversary_demo(a, stdout),
        Command::Job(a) => commands::cmd_job(a, stdout),
    }
}
