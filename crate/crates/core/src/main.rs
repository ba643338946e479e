use clap::Parser;

fn main() {
    let cli = chanbound::cli::Cli::parse();
    if let Err(e) = chanbound::cli::run(cli) {
        // one line, category first, machine parsable
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
