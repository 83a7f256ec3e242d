use std::process::ExitCode;

use clap::Parser;
use detsum_cli::{run, Cli, Format};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(output) => {
            print!("{}", output.render(cli.format));
            ExitCode::from(output.exit_code() as u8)
        }
        Err(err) => {
            let code = err.exit_code();
            match cli.format {
                Format::Json => println!(
                    "{}",
                    serde_json::json!({"command": cli.command.name(), "error": err.to_string(), "exit_code": code})
                ),
                Format::Text => eprintln!("detsum: {err}"),
            }
            ExitCode::from(code as u8)
        }
    }
}
