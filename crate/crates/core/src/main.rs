use std::io::Write;
use std::process::ExitCode;

use krylov_walk::cli;

fn main() -> ExitCode {
    match cli::run(std::env::args_os()) {
        Ok(outcome) => {
            let written = match &outcome.out {
                Some(path) => std::fs::write(path, &outcome.output)
                    .map_err(|e| format!("{}: {e}", path.display())),
                None => std::io::stdout()
                    .write_all(outcome.output.as_bytes())
                    .map_err(|e| e.to_string()),
            };
            if let Err(msg) = written {
                eprintln!("error: {msg}");
                return ExitCode::from(cli::EXIT_INPUT as u8);
            }
            if outcome.code == cli::EXIT_DISCONNECTED {
                eprintln!("warning: graph is disconnected; only the seed's component is explored");
            }
            ExitCode::from(outcome.code as u8)
        }
        Err(e) if e.code == 0 => {
            print!("{}", e.message);
            ExitCode::SUCCESS
        }
        Err(e) => {
            let msg = e.message.trim_end();
            if msg.starts_with("error:") {
                eprintln!("{msg}");
            } else {
                eprintln!("error: {msg}");
            }
            ExitCode::from(e.code as u8)
        }
    }
}
