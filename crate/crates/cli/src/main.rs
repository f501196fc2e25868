mod args;
mod commands;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::Value;

use args::{Cli, Command, Format};
use commands::{CmdResult, Failure, Report, SurveyRow, SURVEY_COLUMNS};

const EXIT_INPUT: u8 = 1;
const EXIT_INTERNAL: u8 = 2;
const EXIT_MISMATCH: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_INPUT),
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("sumcx: {f}");
            let code = match f {
                Failure::Input(_) => EXIT_INPUT,
                Failure::Internal(_) => EXIT_INTERNAL,
                Failure::Mismatch(rec) => {
                    // the disagreeing record is still useful
                    if let Err(e) = emit(&cli, Report::Record(rec)) {
                        eprintln!("sumcx: {e}");
                    }
                    EXIT_MISMATCH
                }
            };
            ExitCode::from(code)
        }
    }
}

fn run(cli: &Cli) -> CmdResult<()> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(Failure::Input("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Failure::Internal(e.to_string()))?;
    }
    let start = Instant::now();
    let mut report = match &cli.command {
        Command::Homology { instance, field } => commands::homology(instance, *field)?,
        Command::Theorem1 {
            instance,
            field,
            cross_check,
        } => commands::theorem1(instance, *field, *cross_check)?,
        Command::Collapse {
            instance,
            budget,
            trace,
        } => {
            let (report, t) = commands::collapse(instance, *budget)?;
            if let Some(path) = trace {
                write_file(path, t.to_text().as_bytes())?;
            }
            report
        }
        Command::Chebotarev { n, max_order } => commands::chebotarev(*n, *max_order)?,
        Command::Survey {
            n,
            k,
            classes,
            p,
            budget,
        } => commands::survey(*n, *k, *classes, *p, *budget)?,
    };
    if cli.timing {
        let ms = start.elapsed().as_secs_f64() * 1000.0;
        match &mut report {
            Report::Record(Value::Object(m)) => {
                m.insert("wall_time_ms".into(), ms.into());
            }
            _ => eprintln!("wall time: {ms:.1} ms"),
        }
    }
    emit(cli, report)
}

fn write_file(path: &Path, bytes: &[u8]) -> CmdResult<()> {
    std::fs::write(path, bytes)
        .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
}

fn emit(cli: &Cli, report: Report) -> CmdResult<()> {
    let text = match (cli.format, report) {
        (Format::Json, Report::Record(v)) => pretty(&v),
        (Format::Json, Report::Table(rows)) => {
            let rows: Vec<Value> = rows.iter().map(SurveyRow::to_json).collect();
            pretty(&Value::Array(rows))
        }
        (Format::Csv, Report::Record(v)) => record_csv(&v)?,
        (Format::Csv, Report::Table(rows)) => table_csv(&rows)?,
    };
    match &cli.output {
        Some(path) => write_file(path, text.as_bytes()),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Input(format!("cannot write output: {e}")))
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn csv_error(e: impl std::fmt::Display) -> Failure {
    Failure::Internal(format!("csv: {e}"))
}

/// A record as a header line and one row; nested values stay as JSON text.
fn record_csv(v: &Value) -> CmdResult<String> {
    let Value::Object(m) = v else {
        return Err(Failure::Internal("record is not an object".into()));
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(m.keys()).map_err(csv_error)?;
    w.write_record(m.values().map(|v| match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }))
    .map_err(csv_error)?;
    finish_csv(w)
}

fn table_csv(rows: &[SurveyRow]) -> CmdResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SURVEY_COLUMNS).map_err(csv_error)?;
    for r in rows {
        w.write_record(r.fields()).map_err(csv_error)?;
    }
    finish_csv(w)
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> CmdResult<String> {
    let bytes = w.into_inner().map_err(csv_error)?;
    String::from_utf8(bytes).map_err(csv_error)
}
