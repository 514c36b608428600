use clap::Parser;
use ris_pathid::cli::{execute, Cli, ExperimentSpec};

fn main() {
    let cli = Cli::parse();
    let outcome = ExperimentSpec::from_cli(cli).and_then(|spec| execute(&spec));
    match outcome {
        Ok(summary) => println!("{summary}"),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(1);
        }
    }
}
