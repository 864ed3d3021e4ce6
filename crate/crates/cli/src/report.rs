//! Report rendering and transformation-log files.
//!
//! The structured format is a stable indented key/value tree with no timing
//! information, so fixed inputs and flags produce byte-identical output that
//! can be pinned by golden files. The text format is for humans and includes
//! the elapsed time.

use std::fmt::Write as _;

use cohen_gabber::normalize::{Move, NormalizationResult, TransformationLog};
use cohen_gabber::{FieldKind, SeriesRing};

use crate::input::InputDocument;

/// Everything the printers need, captured eagerly as strings.
#[derive(Debug, Clone)]
pub struct Report {
    pub status: Status,
    pub p: u64,
    pub field: String,
    pub vars: Vec<String>,
    pub precision: u32,
    pub input_factors: Vec<String>,
    pub body: Option<CertifiedBody>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Certified,
    Failed(String),
}

#[derive(Debug, Clone)]
pub struct CertifiedBody {
    pub log_lines: Vec<String>,
    pub coefficient_field: String,
    pub parameters: Vec<String>,
    pub final_factors: Vec<String>,
    pub certificates: Vec<CertificateLine>,
    pub escalations: u32,
    pub delta_attempts: u32,
    pub shear_attempts: u32,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone)]
pub struct CertificateLine {
    pub variable: String,
    pub degree: u32,
    pub witness_exponents: Vec<u32>,
    pub witness_coefficient: String,
    pub witness_monomial: String,
}

fn field_name(doc: &InputDocument) -> String {
    match doc.field.kind() {
        FieldKind::PrimeField => "Fp".to_string(),
        FieldKind::RationalFunctionField => "Fp(t)".to_string(),
    }
}

/// Render a move the way log files store it: shears name their variable.
pub fn move_line(mv: &Move, ring: &SeriesRing) -> String {
    match mv {
        Move::Shear { var, power } => {
            format!("shear var={} power={}", ring.var_name(*var), power)
        }
        Move::FieldTwist { delta } => format!("twist delta={delta}"),
    }
}

fn monomial_string(exponents: &[u32], ring: &SeriesRing) -> String {
    let mut out = String::new();
    for (i, &e) in exponents.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !out.is_empty() {
            out.push('*');
        }
        out.push_str(ring.var_name(i));
        if e > 1 {
            let _ = write!(out, "^{e}");
        }
    }
    if out.is_empty() {
        out.push('1');
    }
    out
}

impl Report {
    pub fn certified(
        doc: &InputDocument,
        ring: &SeriesRing,
        input_factors: &[String],
        result: &NormalizationResult,
    ) -> Report {
        let body = CertifiedBody {
            log_lines: result
                .log
                .moves()
                .iter()
                .map(|mv| move_line(mv, ring))
                .collect(),
            coefficient_field: result.field_description.clone(),
            parameters: result.parameters.iter().map(|s| s.to_string()).collect(),
            final_factors: result.factors.iter().map(|f| f.to_string()).collect(),
            certificates: result
                .certificates
                .iter()
                .map(|c| CertificateLine {
                    variable: ring.var_name(0).to_string(),
                    degree: c.distinguished.degree(),
                    witness_exponents: c.witness_exponents.exponents().to_vec(),
                    witness_coefficient: c.witness_coefficient.to_string(),
                    witness_monomial: monomial_string(c.witness_exponents.exponents(), ring),
                })
                .collect(),
            escalations: result.diagnostics.escalations,
            delta_attempts: result.diagnostics.delta_attempts,
            shear_attempts: result.diagnostics.shear_attempts,
            elapsed_ms: result.diagnostics.elapsed.as_secs_f64() * 1e3,
        };
        Report {
            status: Status::Certified,
            p: doc.field.characteristic(),
            field: field_name(doc),
            vars: doc.var_names.clone(),
            precision: result.diagnostics.precision_used,
            input_factors: input_factors.to_vec(),
            body: Some(body),
        }
    }

    pub fn failed(
        doc: &InputDocument,
        precision: u32,
        input_factors: &[String],
        reason: String,
    ) -> Report {
        Report {
            status: Status::Failed(reason),
            p: doc.field.characteristic(),
            field: field_name(doc),
            vars: doc.var_names.clone(),
            precision,
            input_factors: input_factors.to_vec(),
            body: None,
        }
    }

    /// The stable key/value tree (no timing, byte-stable per input+flags).
    pub fn structured(&self) -> String {
        let mut out = String::new();
        match &self.status {
            Status::Certified => out.push_str("status: certified\n"),
            Status::Failed(reason) => {
                out.push_str("status: failed\n");
                let _ = writeln!(out, "reason: {reason}");
            }
        }
        let _ = writeln!(out, "p: {}", self.p);
        let _ = writeln!(out, "field: {}", self.field);
        let _ = writeln!(out, "vars: {}", self.vars.join(" "));
        let _ = writeln!(out, "precision: {}", self.precision);
        out.push_str("input_factors:\n");
        for (i, f) in self.input_factors.iter().enumerate() {
            let _ = writeln!(out, "  {}: {}", i + 1, f);
        }
        let Some(body) = &self.body else {
            return out;
        };
        out.push_str("log:\n");
        for (i, line) in body.log_lines.iter().enumerate() {
            let _ = writeln!(out, "  {}: {}", i + 1, line);
        }
        let _ = writeln!(out, "coefficient_field: {}", body.coefficient_field);
        out.push_str("parameters:\n");
        for (i, p) in body.parameters.iter().enumerate() {
            let _ = writeln!(out, "  {}: {}", i + 1, p);
        }
        out.push_str("final_factors:\n");
        for (i, f) in body.final_factors.iter().enumerate() {
            let _ = writeln!(out, "  {}: {}", i + 1, f);
        }
        out.push_str("certificates:\n");
        for (i, c) in body.certificates.iter().enumerate() {
            let _ = writeln!(out, "  {}:", i + 1);
            let _ = writeln!(out, "    variable: {}", c.variable);
            let _ = writeln!(out, "    degree: {}", c.degree);
            let exps: Vec<String> = c.witness_exponents.iter().map(|e| e.to_string()).collect();
            let _ = writeln!(out, "    witness_exponents: [{}]", exps.join(", "));
            let _ = writeln!(out, "    witness_coefficient: {}", c.witness_coefficient);
            let _ = writeln!(out, "    witness_monomial: {}", c.witness_monomial);
        }
        out.push_str("diagnostics:\n");
        let _ = writeln!(out, "  escalations: {}", body.escalations);
        let _ = writeln!(out, "  delta_attempts: {}", body.delta_attempts);
        let _ = writeln!(out, "  shear_attempts: {}", body.shear_attempts);
        out
    }

    /// Prose for humans; includes timing, so it is not byte-stable.
    pub fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "input: {} factor(s) over {} (p={}) in variables {}, precision {}",
            self.input_factors.len(),
            self.field,
            self.p,
            self.vars.join(", "),
            self.precision
        );
        for (i, f) in self.input_factors.iter().enumerate() {
            let _ = writeln!(out, "  factor {}: {}", i + 1, f);
        }
        match &self.status {
            Status::Failed(reason) => {
                let _ = writeln!(out, "status: FAILED");
                let _ = writeln!(out, "reason: {reason}");
                return out;
            }
            Status::Certified => {
                let _ = writeln!(out, "status: certified");
            }
        }
        let body = self.body.as_ref().expect("certified reports carry a body");
        if body.log_lines.is_empty() {
            let _ = writeln!(out, "moves: none needed");
        } else {
            let _ = writeln!(out, "moves ({}):", body.log_lines.len());
            for (i, line) in body.log_lines.iter().enumerate() {
                let _ = writeln!(out, "  {}. {}", i + 1, line);
            }
        }
        let _ = writeln!(out, "coefficient field: {}", body.coefficient_field);
        if body.parameters.is_empty() {
            let _ = writeln!(out, "system of parameters: (empty, d = 0)");
        } else {
            let _ = writeln!(out, "system of parameters: {}", body.parameters.join(", "));
        }
        out.push_str("final factors:\n");
        for (i, f) in body.final_factors.iter().enumerate() {
            let _ = writeln!(out, "  {}: {}", i + 1, f);
        }
        out.push_str("certificates:\n");
        for (i, c) in body.certificates.iter().enumerate() {
            let exps: Vec<String> = c.witness_exponents.iter().map(|e| e.to_string()).collect();
            let _ = writeln!(
                out,
                "  factor {}: distinguished of degree {} in {}; witness {} with coefficient {} (exponents [{}])",
                i + 1,
                c.degree,
                c.variable,
                c.witness_monomial,
                c.witness_coefficient,
                exps.join(", ")
            );
        }
        let _ = writeln!(
            out,
            "diagnostics: precision {}, {} escalation(s), {} delta attempt(s), {} shear attempt(s), {:.3} ms",
            self.precision, body.escalations, body.delta_attempts, body.shear_attempts, body.elapsed_ms
        );
        out
    }
}

// ---------------------------------------------------------------------------
// Log files.
// ---------------------------------------------------------------------------

/// Serialize a log: a `precision=N` header, then one move per line.
pub fn write_log(log: &TransformationLog, ring: &SeriesRing) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "precision={}", ring.precision());
    for mv in log.moves() {
        let _ = writeln!(out, "{}", move_line(mv, ring));
    }
    out
}

/// Parse a log file against a ring (for variable names).
pub fn parse_log(
    text: &str,
    ring: &SeriesRing,
) -> Result<(Option<u32>, TransformationLog), String> {
    let mut precision = None;
    let mut log = TransformationLog::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(value) = line.strip_prefix("precision=") {
            precision = Some(
                value
                    .parse::<u32>()
                    .map_err(|_| format!("log line {}: bad precision", idx + 1))?,
            );
            continue;
        }
        if let Some(rest) = line.strip_prefix("shear ") {
            let mut var = None;
            let mut power = None;
            for token in rest.split_whitespace() {
                if let Some(v) = token.strip_prefix("var=") {
                    var = ring.var_index(v);
                    if var.is_none() {
                        return Err(format!("log line {}: unknown variable `{v}`", idx + 1));
                    }
                } else if let Some(n) = token.strip_prefix("power=") {
                    power = n.parse::<u32>().ok();
                }
            }
            match (var, power) {
                (Some(var), Some(power)) if var >= 1 && power >= 1 => {
                    log.push(Move::Shear { var, power });
                }
                _ => return Err(format!("log line {}: malformed shear", idx + 1)),
            }
            continue;
        }
        if let Some(rest) = line.strip_prefix("twist ") {
            let Some(value) = rest.trim().strip_prefix("delta=") else {
                return Err(format!("log line {}: malformed twist", idx + 1));
            };
            let delta = ring
                .field()
                .parse(value)
                .map_err(|e| format!("log line {}: {e}", idx + 1))?;
            if delta.is_zero() {
                return Err(format!("log line {}: twist by zero", idx + 1));
            }
            log.push(Move::FieldTwist { delta });
            continue;
        }
        return Err(format!("log line {}: unknown move `{line}`", idx + 1));
    }
    Ok((precision, log))
}

#[cfg(test)]
mod tests {
    use super::*;
    use cohen_gabber::FieldDescriptor;

    fn ring() -> SeriesRing {
        let field = FieldDescriptor::rational_function_field(2).unwrap();
        SeriesRing::new(field, 2, 24, Some(vec!["X".into(), "Y".into()])).unwrap()
    }

    #[test]
    fn log_round_trip() {
        let r = ring();
        let mut log = TransformationLog::new();
        log.push(Move::Shear { var: 1, power: 3 });
        log.push(Move::FieldTwist {
            delta: r.field().parse("t+1").unwrap(),
        });
        let text = write_log(&log, &r);
        let (precision, parsed) = parse_log(&text, &r).unwrap();
        assert_eq!(precision, Some(24));
        assert_eq!(parsed, log);
    }

    #[test]
    fn malformed_logs_are_rejected() {
        let r = ring();
        assert!(parse_log("shear var=Q power=2", &r).is_err());
        assert!(parse_log("twist delta=0", &r).is_err());
        assert!(parse_log("frobnicate", &r).is_err());
    }
}
