use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let (text, code) = valuations_cli::run(&args);
    let written = match output_path(&args) {
        Some(path) => std::fs::write(&path, &text).map_err(|e| format!("{path}: {e}")),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("cannot write report: {e}");
        return ExitCode::from(valuations_cli::EXIT_INPUT as u8);
    }
    ExitCode::from(code as u8)
}

/// The `--output` value, read directly so that argument errors honour it too.
fn output_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--output" {
            return it.next().cloned();
        }
        if let Some(v) = a.strip_prefix("--output=") {
            return Some(v.to_string());
        }
    }
    None
}
