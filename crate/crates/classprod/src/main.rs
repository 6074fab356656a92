use clap::Parser;

fn main() {
    let cli = classprod::cli::Cli::parse();
    std::process::exit(classprod::cli::dispatch(cli));
}
