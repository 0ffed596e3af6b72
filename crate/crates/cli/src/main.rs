use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = qnetk_cli::Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match qnetk_cli::execute(&cli, &mut out) {
        Ok(code) => ExitCode::from(code),
        Err(e) if broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(qnetk_cli::EXIT_ERROR)
        }
    }
}

fn broken_pipe(e: &anyhow::Error) -> bool {
    e.chain()
        .filter_map(|c| c.downcast_ref::<std::io::Error>())
        .any(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
}
