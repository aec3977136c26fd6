use clap::Parser;

fn main() {
    std::process::exit(heatcorr_cli::run(heatcorr_cli::Cli::parse()));
}
