use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use usdkit::cli::{error_document, execute, Cli};
use usdkit::Error;

fn fail(e: &Error) -> ExitCode {
    eprintln!("{}", error_document(e));
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&Error::Parse(e.to_string().trim_end().to_string())),
    };
    match execute(&cli) {
        Ok(text) => {
            // a closed pipe downstream is not our failure
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e),
    }
}
