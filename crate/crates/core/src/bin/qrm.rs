use clap::Parser;

fn main() {
    std::process::exit(qrm::cli::main_with(qrm::cli::Cli::parse()));
}
