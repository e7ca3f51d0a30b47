use clap::Parser;

use rtransfer::{execute, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = execute(&cli) {
        eprintln!("rtransfer: {e}");
        std::process::exit(e.exit_code());
    }
}
