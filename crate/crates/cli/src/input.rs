//! Input-file parsing.
//!
//! The grammar is line-oriented key=value tokens:
//!
//! ```text
//! # comment
//! p=2 field=Fp(t) vars=X,Y
//! factor=t*X^2 + Y^2
//! squarefree_attested
//! ```
//!
//! `factor=` consumes the rest of its line (expressions may contain spaces);
//! the other keys may share lines. Factor expressions are parsed later
//! against the declared variables; this module keeps their source positions
//! so syntax errors report real line/column pairs.

use std::fmt;

use cohen_gabber::{FieldDescriptor, FieldKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {}",
            self.line, self.col, self.message
        )
    }
}

impl std::error::Error for InputError {}

/// One factor expression with the position of its first character.
#[derive(Debug, Clone)]
pub struct FactorSource {
    pub text: String,
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone)]
pub struct InputDocument {
    pub field: FieldDescriptor,
    pub var_names: Vec<String>,
    pub factors: Vec<FactorSource>,
    pub squarefree_attested: bool,
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn parse_input(text: &str) -> Result<InputDocument, InputError> {
    let mut p: Option<(u64, usize, usize)> = None;
    let mut kind: Option<(FieldKind, usize, usize)> = None;
    let mut var_names: Option<Vec<String>> = None;
    let mut factors: Vec<FactorSource> = Vec::new();
    let mut squarefree_attested = false;

    let err = |line: usize, col: usize, message: String| InputError { line, col, message };

    for (line_idx, raw_line) in text.lines().enumerate() {
        let line_no = line_idx + 1;
        let line = match raw_line.find('#') {
            Some(i) => &raw_line[..i],
            None => raw_line,
        };
        let mut pos = 0usize;
        let bytes = line.as_bytes();
        while pos < bytes.len() {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos >= bytes.len() {
                break;
            }
            let start = pos;
            // factor= takes the rest of the line
            if line[pos..].starts_with("factor=") {
                let expr_start = pos + "factor=".len();
                let expr = line[expr_start..].trim();
                if expr.is_empty() {
                    return Err(err(
                        line_no,
                        expr_start + 1,
                        "empty factor expression".into(),
                    ));
                }
                let lead = line[expr_start..].len() - line[expr_start..].trim_start().len();
                factors.push(FactorSource {
                    text: expr.to_string(),
                    line: line_no,
                    col: expr_start + lead + 1,
                });
                pos = bytes.len();
                continue;
            }
            while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            let token = &line[start..pos];
            let col = start + 1;
            if let Some(value) = token.strip_prefix("p=") {
                let v: u64 = value
                    .parse()
                    .map_err(|_| err(line_no, col, format!("`{value}` is not an integer")))?;
                p = Some((v, line_no, col));
            } else if let Some(value) = token.strip_prefix("field=") {
                let k = match value {
                    "Fp" => FieldKind::PrimeField,
                    "Fp(t)" => FieldKind::RationalFunctionField,
                    other => {
                        return Err(err(
                            line_no,
                            col,
                            format!("unknown field `{other}` (expected Fp or Fp(t))"),
                        ))
                    }
                };
                kind = Some((k, line_no, col));
            } else if let Some(value) = token.strip_prefix("vars=") {
                let names: Vec<String> = value
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect();
                if names.is_empty() {
                    return Err(err(line_no, col, "no variables declared".into()));
                }
                for name in &names {
                    if !is_ident(name) {
                        return Err(err(
                            line_no,
                            col,
                            format!("`{name}` is not a valid variable name"),
                        ));
                    }
                }
                for (i, name) in names.iter().enumerate() {
                    if names[..i].contains(name) {
                        return Err(err(
                            line_no,
                            col,
                            format!("variable `{name}` declared twice"),
                        ));
                    }
                }
                var_names = Some(names);
            } else if token == "squarefree_attested" || token == "squarefree_attested=true" {
                squarefree_attested = true;
            } else if token == "squarefree_attested=false" {
                squarefree_attested = false;
            } else {
                return Err(err(line_no, col, format!("unknown token `{token}`")));
            }
        }
    }

    let (p, pl, pc) = p.ok_or_else(|| err(1, 1, "missing `p=`".into()))?;
    let (kind, ..) = kind.ok_or_else(|| err(1, 1, "missing `field=`".into()))?;
    let var_names = var_names.ok_or_else(|| err(1, 1, "missing `vars=`".into()))?;
    if factors.is_empty() {
        return Err(err(1, 1, "no `factor=` lines".into()));
    }
    let field = FieldDescriptor::new(p, kind).map_err(|e| err(pl, pc, e.to_string()))?;
    if kind == FieldKind::RationalFunctionField && var_names.iter().any(|n| n == "t") {
        return Err(err(
            1,
            1,
            "variable name `t` collides with the field generator".into(),
        ));
    }
    Ok(InputDocument {
        field,
        var_names,
        factors,
        squarefree_attested,
    })
}
