use std::process::ExitCode;

fn main() -> ExitCode {
    eggarea::cli::main()
}
