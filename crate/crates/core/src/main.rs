use clap::Parser;

fn main() {
    let args = qde_core::cli::Args::parse();
    std::process::exit(qde_core::cli::execute(args));
}
