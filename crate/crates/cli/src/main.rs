use clap::Parser;
use dsg_cli::{dispatch, Cli};

fn main() {
    let cli = Cli::parse();
    env_logger::Builder::new()
        .parse_filters(&cli.log)
        .parse_default_env()
        .init();
    if let Err(e) = dispatch(&cli) {
        eprintln!("dsg: {e}");
        std::process::exit(e.exit_code());
    }
}
