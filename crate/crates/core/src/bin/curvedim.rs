use clap::Parser;

fn main() {
    let cli = curvedim::cli::Cli::parse();
    if let Err(e) = curvedim::cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
