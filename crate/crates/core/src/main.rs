use clap::Parser;
use detnoise::cli::{run, RunConfig};

fn main() {
    let cfg = RunConfig::parse();
    let code = match run(&cfg) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("detnoise: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}
