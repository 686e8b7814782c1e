use clap::Parser;

fn main() {
    let cli = lid_cli::Cli::parse();
    if let Err(err) = lid_cli::run(cli) {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}
