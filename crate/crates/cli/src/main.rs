use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use nqi_cli::{execute, parse_args, workers_from_env, CliError, RunRequest};

fn run(request: &RunRequest) -> Result<(), CliError> {
    match &request.out {
        Some(path) => {
            let mut file = BufWriter::new(File::create(path)?);
            execute(request, &mut file)?;
            file.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            execute(request, &mut lock)?;
            lock.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let result = parse_args(std::env::args_os()).and_then(|mut request| {
        request.workers = workers_from_env();
        run(&request)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(e)) => {
            let code = e.exit_code();
            let _ = e.print();
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("nqi-sim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
