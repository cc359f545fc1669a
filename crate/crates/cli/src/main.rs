use clap::Parser;
use phizeta_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    std::process::exit(run(&cli) as i32);
}
