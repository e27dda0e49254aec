//! Experiment harness for the private densest-subgraph algorithms: graph
//! generation, trial batching, result files and summaries.

pub mod args;
pub mod config;
pub mod error;
pub mod gen;
pub mod oracle;
pub mod run;
pub mod summarize;

pub use args::Cli;
pub use error::{CliError, CliResult};

pub fn dispatch(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Some(args::Command::Gen(g)) => gen::run(&g.kind),
        Some(args::Command::Summarize(s)) => summarize::run(s),
        Some(args::Command::Run(r)) => run::run(&config::Settings::load(r)?),
        None => run::run(&config::Settings::load(&cli.run)?),
    }
}
