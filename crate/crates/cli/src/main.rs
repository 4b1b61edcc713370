use std::io;

use clap::Parser;
use ontomvn_cli::{run_cli, Cli, Context};

fn main() {
    // clap exits with 2 on usage errors
    let cli = Cli::try_parse().unwrap_or_else(|e| e.exit());
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let code = run_cli(&cli, &Context::default(), &mut io::stdout(), &mut io::stderr());
    std::process::exit(code);
}
