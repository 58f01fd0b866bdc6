use clap::Parser;

fn main() {
    let cli = pelastica_cli::Cli::parse();
    std::process::exit(pelastica_cli::run(cli));
}
