use clap::Parser;

use qdistinguish::cli;

fn main() {
    let invocation = cli::Cli::parse();
    std::process::exit(cli::run(&invocation));
}
