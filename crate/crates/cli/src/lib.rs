//! Command-line front end: parse an input file, run (or replay) the
//! normalization driver, and print a report.
//!
//! Exit codes: 0 certified, 1 I/O error, 2 parse/validation error,
//! 3 search or precision exhaustion.

pub mod input;
pub mod report;

use std::fs;
use std::path::PathBuf;

use cohen_gabber::normalize::{self, Config, NormalizeError};
use cohen_gabber::{parse_series, HypersurfaceInput, SeriesRing, TruncatedSeries};

use input::{parse_input, InputDocument};
use report::{parse_log, write_log, Report};

pub const EXIT_CERTIFIED: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_EXHAUSTED: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Debug, Clone)]
pub struct AppArgs {
    pub input: PathBuf,
    pub precision: u32,
    pub max_precision: u32,
    pub delta_attempts: u32,
    pub shear_bound: u32,
    pub format: Format,
    pub replay: Option<PathBuf>,
    pub save_log: Option<PathBuf>,
}

impl AppArgs {
    pub fn new(input: PathBuf) -> AppArgs {
        AppArgs {
            input,
            precision: 24,
            max_precision: 96,
            delta_attempts: 64,
            shear_bound: 64,
            format: Format::Text,
            replay: None,
            save_log: None,
        }
    }
}

/// Which exit code an error from the driver maps to.
fn classify(e: &NormalizeError) -> i32 {
    match e {
        NormalizeError::PrecisionExhausted { .. }
        | NormalizeError::NoDeltaFound { .. }
        | NormalizeError::WitnessVanishesToPrecision { .. }
        | NormalizeError::AssertionFailed(_)
        | NormalizeError::NotRationalFunctionField
        | NormalizeError::Weierstrass(_)
        | NormalizeError::RepairFailed {
            retryable: true, ..
        } => EXIT_EXHAUSTED,
        _ => EXIT_VALIDATION,
    }
}

/// A scratch ring large enough to hold any input polynomial exactly.
const PARSE_PRECISION: u32 = 1 << 16;

struct Prepared {
    doc: InputDocument,
    ring: SeriesRing,
    factors: Vec<TruncatedSeries>,
    factor_strings: Vec<String>,
}

fn prepare_input(args: &AppArgs, text: &str) -> Result<Prepared, (i32, String)> {
    let doc = parse_input(text).map_err(|e| (EXIT_VALIDATION, format!("error: {e}\n")))?;
    let scratch = SeriesRing::new(
        doc.field,
        doc.var_names.len(),
        PARSE_PRECISION,
        Some(doc.var_names.clone()),
    )
    .map_err(|e| (EXIT_VALIDATION, format!("error: {e}\n")))?;
    let mut parsed = Vec::new();
    for src in &doc.factors {
        match parse_series(&scratch, &src.text) {
            Ok(f) => parsed.push(f),
            Err(cohen_gabber::SeriesError::Parse { offset, reason }) => {
                return Err((
                    EXIT_VALIDATION,
                    format!(
                        "error: line {}, column {}: {}\n",
                        src.line,
                        src.col + offset,
                        reason
                    ),
                ))
            }
            Err(e) => return Err((EXIT_VALIDATION, format!("error: {e}\n"))),
        }
    }
    let max_degree = parsed.iter().map(|f| f.max_degree()).max().unwrap_or(0);
    let precision = args.precision.max(max_degree + 1);
    let ring = scratch.with_precision(precision);
    let factors: Vec<TruncatedSeries> = parsed
        .iter()
        .map(|f| f.re_embed(&ring))
        .collect::<Result<_, _>>()
        .map_err(|e| (EXIT_VALIDATION, format!("error: {e}\n")))?;
    let factor_strings = factors.iter().map(|f| f.to_string()).collect();
    Ok(Prepared {
        doc,
        ring,
        factors,
        factor_strings,
    })
}

/// Run the application; returns the exit code and everything to print.
pub fn execute(args: &AppArgs) -> (i32, String) {
    let text = match fs::read_to_string(&args.input) {
        Ok(t) => t,
        Err(e) => {
            return (
                EXIT_IO,
                format!("error: cannot read {}: {e}\n", args.input.display()),
            )
        }
    };
    let prepared = match prepare_input(args, &text) {
        Ok(p) => p,
        Err((code, msg)) => return (code, msg),
    };
    let Prepared {
        doc,
        mut ring,
        mut factors,
        factor_strings,
    } = prepared;

    // Replay mode reads the saved log (honoring its precision header) and
    // re-certifies deterministically instead of searching.
    let replayed_log = match &args.replay {
        None => None,
        Some(path) => {
            let log_text = match fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => {
                    return (
                        EXIT_IO,
                        format!("error: cannot read {}: {e}\n", path.display()),
                    )
                }
            };
            match parse_log(&log_text, &ring) {
                Ok((precision, log)) => {
                    if let Some(p) = precision {
                        if p > ring.precision() {
                            ring = ring.with_precision(p);
                            factors = factors
                                .iter()
                                .map(|f| f.re_embed(&ring).expect("same ring shape"))
                                .collect();
                        }
                    }
                    Some(log)
                }
                Err(msg) => return (EXIT_VALIDATION, format!("error: {msg}\n")),
            }
        }
    };

    let hypersurface = match HypersurfaceInput::new(ring.clone(), factors, doc.squarefree_attested)
    {
        Ok(h) => h,
        Err(e) => {
            let report = Report::failed(&doc, ring.precision(), &factor_strings, e.to_string());
            return (classify(&e), render(args, &report));
        }
    };
    let config = Config {
        max_precision: args.max_precision.max(ring.precision()),
        delta_attempts: args.delta_attempts,
        shear_bound: args.shear_bound,
    };
    let outcome = match &replayed_log {
        Some(log) => normalize::replay(&hypersurface, log, &config),
        None => normalize::run(&hypersurface, &config),
    };
    match outcome {
        Ok(result) => {
            let final_ring = ring.with_precision(result.diagnostics.precision_used);
            if let Some(path) = &args.save_log {
                if let Err(e) = fs::write(path, write_log(&result.log, &final_ring)) {
                    return (
                        EXIT_IO,
                        format!("error: cannot write {}: {e}\n", path.display()),
                    );
                }
            }
            let report = Report::certified(&doc, &final_ring, &factor_strings, &result);
            (EXIT_CERTIFIED, render(args, &report))
        }
        Err(e) => {
            let precision = match &e {
                NormalizeError::PrecisionExhausted { precision, .. } => *precision,
                _ => ring.precision(),
            };
            let report = Report::failed(&doc, precision, &factor_strings, e.to_string());
            (classify(&e), render(args, &report))
        }
    }
}

fn render(args: &AppArgs, report: &Report) -> String {
    match args.format {
        Format::Text => report.text(),
        Format::Structured => report.structured(),
    }
}
