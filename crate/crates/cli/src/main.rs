use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let env = |k: &str| std::env::var(k).ok();
    let code = tutte_cli::run(std::env::args_os(), &env, &mut io::stdout().lock(), &mut io::stderr().lock());
    ExitCode::from(code as u8)
}
