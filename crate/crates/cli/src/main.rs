use clap::Parser;
use panto::{main_with, Cli};

fn main() {
    std::process::exit(main_with(Cli::parse()));
}
