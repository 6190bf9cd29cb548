use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    match qrgraph_cli::run(std::env::args_os()) {
        Ok(body) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(body.as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("qrgraph: {}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
