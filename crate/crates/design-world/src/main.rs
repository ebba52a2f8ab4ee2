use std::process::ExitCode;

fn main() -> ExitCode {
    env_logger::init();
    ExitCode::from(design_world::cli::cli_main(std::env::args()) as u8)
}
