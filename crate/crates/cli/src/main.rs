use std::process::ExitCode;

fn main() -> ExitCode {
    truncalab_cli::run(std::env::args_os())
}
