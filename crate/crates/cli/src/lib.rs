//! Command-line front end: argument handling, dispatch to the library and
//! report emission.
//!
//! Exit codes: 0 success, 1 refuted claim or method disagreement, 2 usage
//! error, 3 resource limit.

pub mod args;
pub mod report;

use std::io::Write;
use std::time::Instant;

use apnspectra::families::criterion_is_apn;
use apnspectra::gf2m::MAX_DEGREE;
use apnspectra::vbf::{differential_spectrum, spectrum_report, TableLimits, DEFAULT_MAX_M};
use apnspectra::verifier::{verify, Status, VerifyConfig};
use apnspectra::{build_function_with, Error, FieldSpec};
use clap::Parser;

use args::{Cli, Command, FamilyArgs, Format, Method, OutputArgs};
use report::{ApnPayload, CommandEcho, Payload, ReportDocument, Timing, VerifyEcho, SCHEMA};

/// Overrides the largest `m` for which full tables are built.
pub const MAX_M_ENV: &str = "APNSPECTRA_MAX_M";

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Limit(String),
    Io(std::io::Error),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) | Failure::Io(_) => 2,
            Failure::Limit(_) => 3,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(s) => write!(f, "usage error: {s}"),
            Failure::Limit(s) => write!(f, "resource limit: {s}"),
            Failure::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::TableTooLarge { .. } => Failure::Limit(e.to_string()),
            Error::UnsupportedDegree(m) if m > MAX_DEGREE => Failure::Limit(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn limits_from_env() -> Result<TableLimits, Failure> {
    match std::env::var(MAX_M_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(|max_m| TableLimits { max_m })
            .map_err(|_| Failure::Usage(format!("{MAX_M_ENV}={v:?} is not a non-negative integer"))),
        Err(_) => Ok(TableLimits { max_m: DEFAULT_MAX_M }),
    }
}

fn field_within(m: u32, limits: TableLimits) -> Result<FieldSpec, Failure> {
    let field = FieldSpec::new(m)?;
    limits.check(&field)?;
    Ok(field)
}

/// Parses `argv` (without the program name), runs the command and returns
/// the process exit code.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(std::iter::once("apnspectra".to_string()).chain(argv.iter().cloned())) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli, argv) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("apnspectra: {f}");
            f.exit_code()
        }
    }
}

fn execute(cli: Cli, argv: Vec<String>) -> Result<i32, Failure> {
    let start = Instant::now();
    let limits = limits_from_env()?;
    let name = argv.first().cloned().unwrap_or_default();
    let (fields, payload, code, output) = match cli.command {
        Command::Spectrum { family, output } => {
            let (field, params, f) = build(&family, limits)?;
            let report = spectrum_report(&f);
            (vec![field], Payload::Spectrum { params, report }, 0, output)
        }
        Command::Apn { family, method, output } => {
            let (field, params, f) = build(&family, limits)?;
            let criterion = match method {
                Method::Brute => None,
                Method::Criterion | Method::Both => Some(criterion_is_apn(&params).map_err(|e| match e {
                    Error::Unsupported(s) => Failure::Usage(format!("--method criterion: {s}")),
                    other => other.into(),
                })?),
            };
            let brute = match method {
                Method::Criterion => None,
                Method::Brute | Method::Both => Some(differential_spectrum(&f)),
            };
            let brute_verdict = brute.as_ref().map(|d| d.is_apn());
            let (verdict, refutation) = match (brute_verdict, criterion) {
                (Some(b), Some(c)) if b != c => (
                    None,
                    Some(format!(
                        "brute force says APN={b}, the general-form criterion says APN={c}"
                    )),
                ),
                (Some(v), _) | (None, Some(v)) => (Some(v), None),
                (None, None) => unreachable!("some method always runs"),
            };
            let code = if refutation.is_some() { 1 } else { 0 };
            let payload = Payload::Apn(ApnPayload {
                params,
                brute,
                criterion,
                verdict,
                refutation,
            });
            (vec![field], payload, code, output)
        }
        Command::Verify {
            claim,
            m_min,
            m_max,
            seed,
            samples,
            output,
        } => {
            let mut config = VerifyConfig::range(m_min, m_max);
            config.limits = limits;
            if let Some(seed) = seed {
                config.seed = seed;
            }
            if let Some(samples) = samples {
                config.samples = samples;
            }
            if m_min < 2 || m_min > m_max {
                return Err(Failure::Usage(format!(
                    "--m-min {m_min} --m-max {m_max} is not a range starting at 2 or above"
                )));
            }
            let fields = (m_min..=m_max)
                .map(|m| field_within(m, limits))
                .collect::<Result<Vec<_>, _>>()?;
            let finding = verify(claim, &config)?;
            let code = if finding.status == Status::Refuted { 1 } else { 0 };
            let echo = VerifyEcho {
                m_min,
                m_max,
                seed: config.seed,
                samples: config.samples,
                exhaustive_max_m: config.exhaustive_max_m,
                max_m: limits.max_m,
            };
            let payload = Payload::Verify {
                config: echo,
                findings: vec![finding],
            };
            (fields, payload, code, output)
        }
    };
    let doc = ReportDocument {
        schema: SCHEMA,
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        fields,
        command: CommandEcho { name, args: argv },
        payload,
        timing: Timing {
            elapsed_us: start.elapsed().as_micros() as u64,
        },
    };
    emit(&doc, &output)?;
    Ok(code)
}

fn build(
    family: &FamilyArgs,
    limits: TableLimits,
) -> Result<(FieldSpec, apnspectra::FamilyParams, apnspectra::VectorialFunction), Failure> {
    if family.m < 2 {
        return Err(Failure::Usage(format!("--m {} is below 2", family.m)));
    }
    let field = field_within(family.m, limits)?;
    let params = family.params(field)?;
    let f = build_function_with(&params, limits)?;
    Ok((field, params, f))
}

fn emit(doc: &ReportDocument, output: &OutputArgs) -> Result<(), Failure> {
    let text = match output.format {
        Format::Json => doc.to_json(),
        Format::Csv => doc.to_csv().map_err(|e| Failure::Io(std::io::Error::other(e)))?,
    };
    match &output.out {
        Some(path) => std::fs::write(path, text).map_err(Failure::Io),
        None => std::io::stdout().lock().write_all(text.as_bytes()).map_err(Failure::Io),
    }
}
