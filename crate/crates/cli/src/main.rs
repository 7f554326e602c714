use clap::Parser;

use quatsurf_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            println!("{}", outcome.message.trim_end());
            for a in &outcome.artifacts {
                println!("wrote {}", a.display());
            }
            std::process::exit(outcome.exit_code);
        }
        Err(e) => {
            eprintln!("quatsurf: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
