use std::io::Write;

use clap::Parser;

use e510_cli::{run, Cli, Format};

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let mut s = out.render(cli.format);
            if cli.format == Format::Json {
                s.push('\n');
            }
            // a closed pipe is not an error worth reporting
            let _ = std::io::stdout().write_all(s.as_bytes());
            std::process::exit(out.code);
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
