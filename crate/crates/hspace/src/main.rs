use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let max_sets = std::env::var(hspace::cli::MAX_SETS_VAR).ok();
    let outcome = hspace::run(std::env::args_os(), max_sets.as_deref());
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    ExitCode::from(outcome.code as u8)
}
