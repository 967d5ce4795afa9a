use clap::Parser;

fn main() {
    let cli = nilcalc::cli::Cli::parse();
    std::process::exit(nilcalc::cli::main_with(cli));
}
