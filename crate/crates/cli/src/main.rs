use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser};
use oscint::catalog;
use oscint::mp::to_decimal;
use oscint::PrecisionContext;
use serde::Serialize;

use oscint_cli::args::{Cli, Command, Format, ListArgs, RunArgs, SweepArgs};
use oscint_cli::report::{write_csv, write_json, write_text, ReportRow};
use oscint_cli::runner::{methods, run_jobs, selected_ids, Job, Settings};

fn usage_error(msg: impl std::fmt::Display) -> ! {
    Cli::command().error(ErrorKind::ValueValidation, msg).exit()
}

fn open_output(path: &Option<std::path::PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(rows: &[ReportRow], args: &RunArgs) -> ExitCode {
    let written = open_output(&args.output).and_then(|mut out| {
        match args.format {
            Format::Text => write_text(rows, &mut out)?,
            Format::Json => write_json(rows, &mut out)?,
            Format::Csv => write_csv(rows, &mut out)?,
        }
        out.flush()
    });
    if let Err(e) = written {
        eprintln!("oscint: cannot write report: {e}");
        return ExitCode::FAILURE;
    }
    let failed = rows.iter().filter(|r| !r.ok()).count();
    if failed > 0 {
        eprintln!("oscint: {failed} of {} runs failed", rows.len());
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}

fn run(args: RunArgs) -> ExitCode {
    let settings = Settings::from_args(&args).unwrap_or_else(|e| usage_error(e));
    let jobs: Vec<Job> = selected_ids(&args)
        .into_iter()
        .flat_map(|id| {
            let settings = settings.clone();
            methods(args.method).into_iter().map(move |method| Job {
                id,
                method,
                settings: settings.clone(),
                axis: None,
            })
        })
        .collect();
    let rows = run_jobs(&jobs, args.workers);
    emit(&rows, &args)
}

fn sweep(args: SweepArgs) -> ExitCode {
    let values: Vec<&String> = args.values.iter().filter(|v| !v.trim().is_empty()).collect();
    if values.is_empty() {
        usage_error("--values needs at least one axis value");
    }
    let base = Settings::from_args(&args.run).unwrap_or_else(|e| usage_error(e));
    let ids = selected_ids(&args.run);
    let mut jobs = Vec::new();
    for v in values {
        let settings = base.with_axis(args.axis, v).unwrap_or_else(|e| usage_error(e));
        for &id in &ids {
            for method in methods(args.run.method) {
                jobs.push(Job {
                    id,
                    method,
                    settings: settings.clone(),
                    axis: Some((args.axis, v.trim().to_string())),
                });
            }
        }
    }
    let rows = run_jobs(&jobs, args.run.workers);
    emit(&rows, &args.run)
}

#[derive(Serialize)]
struct ListEntry {
    id: u32,
    integrand: &'static str,
    closed_form: &'static str,
    reference: String,
    singular_at_zero: bool,
}

fn list(args: ListArgs) -> ExitCode {
    let ctx = PrecisionContext::new(args.digits).unwrap_or_else(|e| usage_error(e));
    let entries: Vec<ListEntry> = catalog::all()
        .into_iter()
        .map(|e| ListEntry {
            id: e.id,
            integrand: e.description,
            closed_form: e.closed_form,
            reference: to_decimal(&e.reference(&ctx)),
            singular_at_zero: e.integrand.singular_at_zero(),
        })
        .collect();
    let mut out = io::stdout().lock();
    let written = match args.format {
        Format::Json => serde_json::to_writer_pretty(&mut out, &entries)
            .map_err(io::Error::from)
            .and_then(|_| writeln!(out)),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            entries
                .iter()
                .try_for_each(|e| w.serialize(e))
                .map_err(io::Error::from)
                .and_then(|_| w.flush())
        }
        Format::Text => entries.iter().try_for_each(|e| {
            writeln!(
                out,
                "{:>3}  int_0^inf {:<36} = {:<16} {}",
                e.id, e.integrand, e.closed_form, e.reference
            )
        }),
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("oscint: {e}");
            ExitCode::FAILURE
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().command {
        Command::Run(args) => run(args),
        Command::Sweep(args) => sweep(args),
        Command::List(args) => list(args),
    }
}
