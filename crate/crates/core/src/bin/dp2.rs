use std::io::Write;

use clap::Parser;
use dp2::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let (code, report) = run(&cli);
    let text = serde_json::to_string_pretty(&report).expect("serializable");
    let _ = writeln!(std::io::stdout(), "{text}");
    std::process::exit(code);
}
