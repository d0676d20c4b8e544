//! Command-line front end: `regtensor run <file>` executes a session,
//! `regtensor corpus` replays the bundled examples against their goldens.

use regtensor::corpus::{render_corpus_json, render_corpus_text, run_corpus};
use regtensor::report::{render_json, render_text, Format};
use regtensor::session::{parse_session, run_session};
use std::io::Read;
use std::process::ExitCode;

const USAGE: &str = "\
usage:
  regtensor run <file|-> [--format text|json]
  regtensor corpus [--filter NAME] [--format text|json]

`run` executes a session file (use `-` for stdin) and prints one record
per query; the exit code is 0 when every query executed, regardless of
the mathematical verdicts. `corpus` replays the bundled example sessions
against their golden outputs and exits nonzero on any mismatch.
";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match args.first().map(String::as_str) {
        Some("run") => cmd_run(&args[1..]),
        Some("corpus") => cmd_corpus(&args[1..]),
        _ => {
            eprint!("{USAGE}");
            ExitCode::from(2)
        }
    }
}

fn parse_common(args: &[String]) -> Result<(Vec<String>, Format), String> {
    let mut positional = Vec::new();
    let mut format = Format::Text;
    let mut it = args.iter();
    while let Some(a) = it.next() {
        match a.as_str() {
            "--format" => {
                let v = it.next().ok_or("--format needs a value")?;
                format = Format::parse(v).ok_or_else(|| format!("unknown format `{v}`"))?;
            }
            "--filter" => {
                let v = it.next().ok_or("--filter needs a value")?;
                positional.push(format!("--filter={v}"));
            }
            other => positional.push(other.to_string()),
        }
    }
    Ok((positional, format))
}

fn cmd_run(args: &[String]) -> ExitCode {
    let (positional, format) = match parse_common(args) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let path = match positional.as_slice() {
        [p] => p.clone(),
        _ => {
            eprint!("{USAGE}");
            return ExitCode::from(2);
        }
    };
    let source = if path == "-" {
        let mut buf = String::new();
        if std::io::stdin().read_to_string(&mut buf).is_err() {
            eprintln!("error: stdin is not valid UTF-8");
            return ExitCode::from(2);
        }
        buf
    } else {
        match std::fs::read_to_string(&path) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: cannot read {path}: {e}");
                return ExitCode::from(2);
            }
        }
    };
    let session = match parse_session(&source) {
        Ok(s) => s,
        Err(d) => {
            eprintln!("error: {d}");
            return ExitCode::from(2);
        }
    };
    let report = run_session(&session);
    match format {
        Format::Json => print!("{}", render_json(&report)),
        Format::Text => print!("{}", render_text(&report)),
    }
    if report.has_errors() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn cmd_corpus(args: &[String]) -> ExitCode {
    let (positional, format) = match parse_common(args) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let mut filter = None;
    for p in &positional {
        match p.strip_prefix("--filter=") {
            Some(f) => filter = Some(f.to_string()),
            None => {
                eprint!("{USAGE}");
                return ExitCode::from(2);
            }
        }
    }
    let results = run_corpus(filter.as_deref());
    match format {
        Format::Json => print!("{}", render_corpus_json(&results)),
        Format::Text => print!("{}", render_corpus_text(&results)),
    }
    if results.iter().all(|r| r.pass) && !results.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
