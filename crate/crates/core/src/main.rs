use std::process::ExitCode;

fn main() -> ExitCode {
    sublinear_lab::lab::cli_main()
}
