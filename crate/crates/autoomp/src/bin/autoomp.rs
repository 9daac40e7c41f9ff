use clap::Parser;

use autoomp::cli::{run, Config};

fn main() {
    let config = Config::parse();
    std::process::exit(run(&config));
}
