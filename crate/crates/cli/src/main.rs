use clap::Parser;

fn main() {
    let cli = lupinch_cli::args::Cli::parse();
    std::process::exit(lupinch_cli::run(&cli));
}
