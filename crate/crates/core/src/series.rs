//! Sparse truncated multivariate formal power series.
//!
//! A [`TruncatedSeries`] stores finitely many terms and a precision bound:
//! every stored term is a true term of the represented series, and every
//! omitted term has total degree at least the bound. Arithmetic is exact
//! below the bound, which gives the one-sided zero test the normalization
//! driver relies on: a nonzero stored term proves the series is nonzero,
//! while "no terms below precision" is merely inconclusive.
//!
//! Terms are kept in a `BTreeMap` ordered by [`ExpVec`]'s graded order
//! (total degree first, then heavier `X_1` first), so iteration order,
//! first-term scans, and printing are all deterministic.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::fields::{FieldDescriptor, FieldElem, FieldKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("series belong to different rings")]
    RingMismatch,
    #[error("series is not a unit (zero constant term)")]
    NotAUnit,
    #[error("substitution image has a nonzero constant term")]
    InvalidSubstitution,
    #[error("exponent vector of degree {degree} is at or above precision {precision}")]
    PrecisionExceeded { degree: u32, precision: u32 },
    #[error("variable index {index} out of range for {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("parse error at offset {offset}: {reason}")]
    Parse { offset: usize, reason: String },
}

// ---------------------------------------------------------------------------
// Exponent vectors.
// ---------------------------------------------------------------------------

/// An exponent vector of fixed length `nvars`.
///
/// The ordering is graded: lower total degree first; among equal degrees the
/// vector with the larger leading exponents comes first (so `X_1^4` precedes
/// `X_1^2 X_2^2`). `BTreeMap` iteration therefore scans terms by ascending
/// total degree with `X_1`-heavy monomials first, the tie-break the driver
/// documents for witness scans and Step-2 minima.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExpVec(Vec<u32>);

impl ExpVec {
    pub fn new(exps: Vec<u32>) -> ExpVec {
        ExpVec(exps)
    }

    pub fn zeros(nvars: usize) -> ExpVec {
        ExpVec(vec![0; nvars])
    }

    /// The standard basis vector `e_var` scaled by `power`.
    pub fn axis(nvars: usize, var: usize, power: u32) -> ExpVec {
        let mut v = vec![0; nvars];
        v[var] = power;
        ExpVec(v)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, var: usize) -> u32 {
        self.0[var]
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &ExpVec) -> ExpVec {
        ExpVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn with(&self, var: usize, power: u32) -> ExpVec {
        let mut v = self.0.clone();
        v[var] = power;
        ExpVec(v)
    }

    pub fn is_divisible_by(&self, m: u32) -> bool {
        self.0.iter().all(|&e| e % m == 0)
    }

    pub fn divided_by(&self, m: u32) -> ExpVec {
        debug_assert!(self.is_divisible_by(m));
        ExpVec(self.0.iter().map(|&e| e / m).collect())
    }
}

impl Ord for ExpVec {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for ExpVec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// ---------------------------------------------------------------------------
// Rings.
// ---------------------------------------------------------------------------

#[derive(Debug)]
struct RingData {
    field: FieldDescriptor,
    nvars: usize,
    precision: u32,
    var_names: Vec<String>,
}

/// The ambient ring `k[[X_1, ..., X_r]]` with a total-degree truncation bound.
#[derive(Debug, Clone)]
pub struct SeriesRing(Arc<RingData>);

impl SeriesRing {
    /// `names` defaults to `X1, ..., Xr`.
    pub fn new(
        field: FieldDescriptor,
        nvars: usize,
        precision: u32,
        names: Option<Vec<String>>,
    ) -> Result<SeriesRing, SeriesError> {
        if nvars == 0 {
            return Err(SeriesError::InvalidRing("nvars must be at least 1".into()));
        }
        if precision == 0 {
            return Err(SeriesError::InvalidRing(
                "precision must be at least 1".into(),
            ));
        }
        let var_names = match names {
            Some(n) => {
                if n.len() != nvars {
                    return Err(SeriesError::InvalidRing(format!(
                        "{} names for {} variables",
                        n.len(),
                        nvars
                    )));
                }
                n
            }
            None => (1..=nvars).map(|i| format!("X{i}")).collect(),
        };
        Ok(SeriesRing(Arc::new(RingData {
            field,
            nvars,
            precision,
            var_names,
        })))
    }

    pub fn field(&self) -> FieldDescriptor {
        self.0.field
    }

    pub fn nvars(&self) -> usize {
        self.0.nvars
    }

    pub fn precision(&self) -> u32 {
        self.0.precision
    }

    pub fn var_names(&self) -> &[String] {
        &self.0.var_names
    }

    pub fn var_name(&self, var: usize) -> &str {
        &self.0.var_names[var]
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.0.var_names.iter().position(|n| n == name)
    }

    /// The same ring at a different truncation bound.
    pub fn with_precision(&self, precision: u32) -> SeriesRing {
        SeriesRing::new(
            self.0.field,
            self.0.nvars,
            precision,
            Some(self.0.var_names.clone()),
        )
        .expect("precision >= 1")
    }

    pub fn zero(&self) -> TruncatedSeries {
        TruncatedSeries {
            ring: self.clone(),
            terms: BTreeMap::new(),
            prec: self.precision(),
        }
    }

    pub fn constant(&self, c: FieldElem) -> TruncatedSeries {
        let mut s = self.zero();
        s.add_term(ExpVec::zeros(self.nvars()), c);
        s
    }

    pub fn one(&self) -> TruncatedSeries {
        self.constant(self.field().one())
    }

    /// The variable `X_var` (0-based).
    pub fn var(&self, var: usize) -> TruncatedSeries {
        self.monomial(ExpVec::axis(self.nvars(), var, 1), self.field().one())
    }

    pub fn monomial(&self, exps: ExpVec, coeff: FieldElem) -> TruncatedSeries {
        let mut s = self.zero();
        s.add_term(exps, coeff);
        s
    }
}

impl PartialEq for SeriesRing {
    fn eq(&self, other: &Self) -> bool {
        self.0.field == other.0.field
            && self.0.nvars == other.0.nvars
            && self.0.precision == other.0.precision
    }
}

impl Eq for SeriesRing {}

// ---------------------------------------------------------------------------
// Series.
// ---------------------------------------------------------------------------

/// A sparse formal power series, exact below its precision bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    ring: SeriesRing,
    terms: BTreeMap<ExpVec, FieldElem>,
    prec: u32,
}

impl TruncatedSeries {
    pub fn ring(&self) -> &SeriesRing {
        &self.ring
    }

    /// The precision of this particular series (at most the ring precision;
    /// derivatives lose one degree).
    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExpVec, &FieldElem)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// No stored terms. By the truncation contract this means "zero below
    /// precision", which is inconclusive as a statement about the true series.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The first stored term in graded order, if any. A nonzero answer is a
    /// proof that the series is nonzero.
    pub fn leading_term(&self) -> Option<(&ExpVec, &FieldElem)> {
        self.terms.iter().next()
    }

    /// Least total degree among stored terms.
    pub fn order(&self) -> Option<u32> {
        self.leading_term().map(|(e, _)| e.total_degree())
    }

    pub fn constant_term(&self) -> FieldElem {
        self.coefficient_or_zero(&ExpVec::zeros(self.ring.nvars()))
    }

    /// Largest total degree among stored terms (0 for the zero series).
    pub fn max_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.total_degree())
            .max()
            .unwrap_or(0)
    }

    fn add_term(&mut self, exps: ExpVec, coeff: FieldElem) {
        if coeff.is_zero() || exps.total_degree() >= self.prec {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().add(&coeff);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn compatible(&self, other: &TruncatedSeries) -> Result<(), SeriesError> {
        if self.ring != other.ring {
            return Err(SeriesError::RingMismatch);
        }
        Ok(())
    }

    fn empty_like(&self, prec: u32) -> TruncatedSeries {
        TruncatedSeries {
            ring: self.ring.clone(),
            terms: BTreeMap::new(),
            prec,
        }
    }

    pub fn add(&self, other: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
        self.compatible(other)?;
        let mut out = self.empty_like(self.prec.min(other.prec));
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.clone());
        }
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TruncatedSeries {
        let mut out = self.empty_like(self.prec);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), c.neg());
        }
        out
    }

    pub fn mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
        self.compatible(other)?;
        let mut out = self.empty_like(self.prec.min(other.prec));
        for (ea, ca) in &self.terms {
            let da = ea.total_degree();
            if da >= out.prec {
                continue;
            }
            for (eb, cb) in &other.terms {
                if da + eb.total_degree() >= out.prec {
                    continue;
                }
                out.add_term(ea.add(eb), ca.mul(cb));
            }
        }
        Ok(out)
    }

    pub fn scalar_mul(&self, c: &FieldElem) -> TruncatedSeries {
        if c.is_zero() {
            return self.empty_like(self.prec);
        }
        let mut out = self.empty_like(self.prec);
        for (e, a) in &self.terms {
            let prod = a.mul(c);
            if !prod.is_zero() {
                out.terms.insert(e.clone(), prod);
            }
        }
        out
    }

    /// Multiply by the monomial `coeff * X^exps` (degrees shift up).
    pub fn mul_monomial(&self, exps: &ExpVec, coeff: &FieldElem) -> TruncatedSeries {
        let mut out = self.empty_like(self.prec);
        for (e, a) in &self.terms {
            out.add_term(e.add(exps), a.mul(coeff));
        }
        out
    }

    /// Invert a unit (nonzero constant term) to this series' precision, by
    /// summing the geometric series of the maximal-ideal part.
    pub fn invert_unit(&self) -> Result<TruncatedSeries, SeriesError> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(SeriesError::NotAUnit);
        }
        let c0_inv = c0.inverse().expect("nonzero constant term");
        // f = c0 (1 - h) with ord(h) >= 1; f^-1 = c0^-1 (1 + h + h^2 + ...).
        let normalized = self.scalar_mul(&c0_inv);
        let mut h = self.empty_like(self.prec);
        for (e, c) in &normalized.terms {
            if e.total_degree() > 0 {
                h.terms.insert(e.clone(), c.neg());
            }
        }
        let mut acc = {
            let mut one = self.empty_like(self.prec);
            one.add_term(ExpVec::zeros(self.ring.nvars()), self.ring.field().one());
            one
        };
        let mut power = acc.clone();
        for _ in 1..self.prec {
            power = power.mul(&h)?;
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power)?;
        }
        Ok(acc.scalar_mul(&c0_inv))
    }

    /// Termwise formal derivative with respect to `var` (0-based). Exponents
    /// divisible by the characteristic vanish; the result is exact one degree
    /// less far out.
    pub fn partial_derivative(&self, var: usize) -> TruncatedSeries {
        assert!(var < self.ring.nvars(), "variable index out of range");
        let field = self.ring.field();
        let mut out = self.empty_like(self.prec.saturating_sub(1));
        for (e, c) in &self.terms {
            let exp = e.get(var);
            if exp == 0 {
                continue;
            }
            let factor = field.from_integer(exp as i64);
            if factor.is_zero() {
                continue;
            }
            out.add_term(e.with(var, exp - 1), c.mul(&factor));
        }
        out
    }

    /// Substitute `image` (which must lie in the maximal ideal) for `X_var`.
    /// Exact below `min` of the two precisions; on polynomial inputs whose
    /// composed degree stays below precision the result is exact.
    pub fn substitute(
        &self,
        var: usize,
        image: &TruncatedSeries,
    ) -> Result<TruncatedSeries, SeriesError> {
        self.compatible(image)?;
        if var >= self.ring.nvars() {
            return Err(SeriesError::VariableOutOfRange {
                index: var,
                nvars: self.ring.nvars(),
            });
        }
        if !image.constant_term().is_zero() {
            return Err(SeriesError::InvalidSubstitution);
        }
        let prec = self.prec.min(image.prec);
        let by_degree = self.coeffs_in_var(var);
        let max_deg = by_degree.keys().max().copied().unwrap_or(0);
        // Horner in X_var: ((B_m * s + B_{m-1}) * s + ...) + B_0.
        let mut acc = self.empty_like(prec);
        for d in (0..=max_deg).rev() {
            acc = acc.mul(image)?;
            if let Some(b) = by_degree.get(&d) {
                acc = acc.add(b)?;
            }
        }
        acc.prec = prec;
        Ok(acc)
    }

    /// The stored coefficient at `exps`, or zero; exponent vectors at or
    /// above precision are out of the exact window and rejected.
    pub fn coefficient(&self, exps: &ExpVec) -> Result<FieldElem, SeriesError> {
        if exps.total_degree() >= self.prec {
            return Err(SeriesError::PrecisionExceeded {
                degree: exps.total_degree(),
                precision: self.prec,
            });
        }
        Ok(self.coefficient_or_zero(exps))
    }

    pub fn coefficient_or_zero(&self, exps: &ExpVec) -> FieldElem {
        self.terms
            .get(exps)
            .cloned()
            .unwrap_or_else(|| self.ring.field().zero())
    }

    /// Keep exactly the pure-`X_var` terms (all other exponents zero).
    pub fn axis_restriction(&self, var: usize) -> TruncatedSeries {
        let mut out = self.empty_like(self.prec);
        for (e, c) in &self.terms {
            let pure = e
                .exponents()
                .iter()
                .enumerate()
                .all(|(i, &ex)| i == var || ex == 0);
            if pure {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        out
    }

    /// Keep the terms supported on the two variables `a` and `b` only.
    pub fn plane_restriction(&self, a: usize, b: usize) -> TruncatedSeries {
        let mut out = self.empty_like(self.prec);
        for (e, c) in &self.terms {
            let inside = e
                .exponents()
                .iter()
                .enumerate()
                .all(|(i, &ex)| i == a || i == b || ex == 0);
            if inside {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        out
    }

    /// If every stored exponent vector is divisible entrywise by `p` and every
    /// coefficient has a p-th root in `k`, return `g` with `g^p` equal to this
    /// series on all stored terms. Exact only for polynomial inputs fully
    /// below precision; `None` otherwise.
    pub fn is_pth_power(&self) -> Option<TruncatedSeries> {
        let p = self.ring.field().characteristic() as u32;
        let mut out = self.empty_like((self.prec.saturating_sub(1)) / p + 1);
        for (e, c) in &self.terms {
            if !e.is_divisible_by(p) {
                return None;
            }
            let root = c.pth_root()?;
            out.terms.insert(e.divided_by(p), root);
        }
        Some(out)
    }

    /// `p`-th power by the freshman's dream: exponents scale, coefficients
    /// take `p`-th powers (exact in characteristic `p`).
    pub fn pth_power(&self) -> TruncatedSeries {
        let p = self.ring.field().characteristic();
        let mut out = self.empty_like(self.prec);
        for (e, c) in &self.terms {
            let scaled = ExpVec::new(e.exponents().iter().map(|&x| x * p as u32).collect());
            out.add_term(scaled, c.pow(p));
        }
        out
    }

    /// View the series as a polynomial in `X_var`: degree -> coefficient
    /// series (with the `X_var` exponent cleared).
    pub fn coeffs_in_var(&self, var: usize) -> BTreeMap<u32, TruncatedSeries> {
        let mut out: BTreeMap<u32, TruncatedSeries> = BTreeMap::new();
        for (e, c) in &self.terms {
            let d = e.get(var);
            let entry = out.entry(d).or_insert_with(|| self.empty_like(self.prec));
            entry.terms.insert(e.with(var, 0), c.clone());
        }
        out
    }

    /// Inverse of [`coeffs_in_var`]: `sum coeffs[d] * X_var^d`.
    pub fn from_var_coeffs(
        ring: &SeriesRing,
        var: usize,
        coeffs: &BTreeMap<u32, TruncatedSeries>,
    ) -> TruncatedSeries {
        let mut prec = ring.precision();
        for c in coeffs.values() {
            prec = prec.min(c.prec);
        }
        let mut out = ring.zero();
        out.prec = prec;
        for (&d, c) in coeffs {
            for (e, a) in &c.terms {
                debug_assert_eq!(e.get(var), 0);
                out.add_term(e.with(var, d), a.clone());
            }
        }
        out
    }

    /// Forget all terms of total degree at least `prec` and lower the claimed
    /// precision accordingly.
    pub fn truncated(&self, prec: u32) -> TruncatedSeries {
        let mut out = self.empty_like(self.prec.min(prec));
        for (e, c) in &self.terms {
            if e.total_degree() < out.prec {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        out
    }

    /// Copy the stored terms into another ring (same field and variable
    /// count). Terms at or above the new precision are dropped; going up in
    /// precision is exact only when the source is a fully stored polynomial.
    pub fn re_embed(&self, ring: &SeriesRing) -> Result<TruncatedSeries, SeriesError> {
        if ring.field() != self.ring.field() || ring.nvars() != self.ring.nvars() {
            return Err(SeriesError::RingMismatch);
        }
        let mut out = ring.zero();
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }
}

impl std::ops::Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        TruncatedSeries::add(self, rhs).expect("ring mismatch")
    }
}

impl std::ops::Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        TruncatedSeries::sub(self, rhs).expect("ring mismatch")
    }
}

impl std::ops::Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        TruncatedSeries::mul(self, rhs).expect("ring mismatch")
    }
}

impl std::ops::Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries::neg(self)
    }
}

// ---------------------------------------------------------------------------
// Printing: "+"-joined terms "coef*X1^a1*...*Xr^ar", unit exponents and unit
// coefficients elided, coefficients with inner structure parenthesized.
// ---------------------------------------------------------------------------

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut monomial = String::new();
            for (i, &exp) in e.exponents().iter().enumerate() {
                if exp == 0 {
                    continue;
                }
                if !monomial.is_empty() {
                    monomial.push('*');
                }
                monomial.push_str(self.ring.var_name(i));
                if exp > 1 {
                    monomial.push_str(&format!("^{exp}"));
                }
            }
            let coeff = c.to_string();
            let needs_parens = coeff.contains('+') || coeff.contains('-') || coeff.contains('/');
            if monomial.is_empty() {
                write!(f, "{coeff}")?;
            } else if c.is_one() {
                write!(f, "{monomial}")?;
            } else if needs_parens {
                write!(f, "({coeff})*{monomial}")?;
            } else {
                write!(f, "{coeff}*{monomial}")?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Parsing: polynomial expressions over the ring's variables, `t`, and
// integers, with `+ - * ^` and parentheses.
// ---------------------------------------------------------------------------

struct SeriesParser<'a> {
    bytes: &'a [u8],
    pos: usize,
    ring: &'a SeriesRing,
}

impl<'a> SeriesParser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn err(&self, reason: impl Into<String>) -> SeriesError {
        SeriesError::Parse {
            offset: self.pos,
            reason: reason.into(),
        }
    }

    fn integer(&mut self) -> Result<u64, SeriesError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("integer out of range"))
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        if self.pos >= self.bytes.len() || !self.bytes[self.pos].is_ascii_alphabetic() {
            return None;
        }
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
        {
            self.pos += 1;
        }
        Some(String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned())
    }

    /// atom := integer | ident | '(' expr ')'
    fn atom(&mut self) -> Result<TruncatedSeries, SeriesError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(self.ring.constant(self.ring.field().from_integer(n as i64)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let save = self.pos;
                let name = self.ident().unwrap();
                if let Some(var) = self.ring.var_index(&name) {
                    Ok(self.ring.var(var))
                } else if name == "t"
                    && self.ring.field().kind() == FieldKind::RationalFunctionField
                {
                    Ok(self
                        .ring
                        .constant(self.ring.field().generator().expect("Fp(t) generator")))
                } else {
                    self.pos = save;
                    Err(self.err(format!("unknown variable `{name}`")))
                }
            }
            _ => Err(self.err("expected a term")),
        }
    }

    /// power := atom ['^' integer]
    fn power(&mut self) -> Result<TruncatedSeries, SeriesError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.integer()?;
            let mut acc = self.ring.one();
            acc.prec = base.prec;
            for _ in 0..e {
                acc = acc.mul(&base)?;
            }
            Ok(acc)
        } else {
            Ok(base)
        }
    }

    /// product := power ('*' power)*
    fn product(&mut self) -> Result<TruncatedSeries, SeriesError> {
        let mut acc = self.power()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let rhs = self.power()?;
            acc = acc.mul(&rhs)?;
        }
        Ok(acc)
    }

    /// expr := ['-'] product (('+'|'-') product)*
    fn expr(&mut self) -> Result<TruncatedSeries, SeriesError> {
        let mut acc = if self.peek() == Some(b'-') {
            self.pos += 1;
            self.product()?.neg()
        } else {
            self.product()?
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let rhs = self.product()?;
                    acc = acc.add(&rhs)?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    let rhs = self.product()?;
                    acc = acc.sub(&rhs)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }
}

/// Parse a polynomial expression into a series of the given ring. Accepts the
/// ring's variable names, the generator `t` over `F_p(t)`, integers, `+ - * ^`
/// and parentheses, with arbitrary whitespace.
pub fn parse_series(ring: &SeriesRing, text: &str) -> Result<TruncatedSeries, SeriesError> {
    let mut parser = SeriesParser {
        bytes: text.as_bytes(),
        pos: 0,
        ring,
    };
    let out = parser.expr()?;
    parser.skip_ws();
    if parser.pos != parser.bytes.len() {
        return Err(parser.err("trailing input"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, rational: bool, nvars: usize, prec: u32) -> SeriesRing {
        let field = if rational {
            FieldDescriptor::rational_function_field(p).unwrap()
        } else {
            FieldDescriptor::prime_field(p).unwrap()
        };
        let names = match nvars {
            1 => vec!["X".into()],
            2 => vec!["X".into(), "Y".into()],
            3 => vec!["X".into(), "Y".into(), "Z".into()],
            _ => unreachable!(),
        };
        SeriesRing::new(field, nvars, prec, Some(names)).unwrap()
    }

    fn s(r: &SeriesRing, text: &str) -> TruncatedSeries {
        parse_series(r, text).unwrap()
    }

    #[test]
    fn graded_order_ties_prefer_heavy_x1() {
        assert!(ExpVec::new(vec![4, 0]) < ExpVec::new(vec![2, 2]));
        assert!(ExpVec::new(vec![1, 0]) < ExpVec::new(vec![0, 1]));
        assert!(ExpVec::new(vec![0, 1]) < ExpVec::new(vec![2, 0]));
    }

    #[test]
    fn freshmans_dream_mul() {
        let r = ring(2, false, 2, 10);
        let f = s(&r, "X+Y");
        assert_eq!(&f * &f, s(&r, "X^2+Y^2"));
    }

    #[test]
    fn mul_absorbs_zero() {
        let r = ring(3, false, 2, 10);
        let f = s(&r, "X^2+X*Y+X");
        assert_eq!(&f * &r.zero(), r.zero());
    }

    #[test]
    fn dense_product_example() {
        let r = ring(3, false, 2, 10);
        let f = s(&r, "1+X");
        let g = s(&r, "X^2+X*Y+X");
        assert_eq!(&f * &g, s(&r, "X+2*X^2+X*Y+X^3+X^2*Y"));
    }

    #[test]
    fn ring_mismatch_is_an_error() {
        let r1 = ring(2, false, 2, 10);
        let r2 = ring(3, false, 2, 10);
        assert_eq!(
            s(&r1, "X").add(&s(&r2, "X")),
            Err(SeriesError::RingMismatch)
        );
    }

    #[test]
    fn geometric_inverse() {
        let r = ring(2, false, 2, 4);
        let f = s(&r, "1+X");
        assert_eq!(f.invert_unit().unwrap(), s(&r, "1+X+X^2+X^3"));
        // a nonzero constant inverts to its field inverse
        let r3 = ring(3, false, 2, 10);
        assert_eq!(s(&r3, "2").invert_unit().unwrap(), s(&r3, "2"));
        // and a non-unit is rejected
        assert_eq!(s(&r3, "X").invert_unit(), Err(SeriesError::NotAUnit));
    }

    #[test]
    fn inverse_multiplies_back_to_one() {
        let r = ring(5, false, 2, 12);
        let f = s(&r, "2+X+3*Y^2+X*Y");
        let g = f.invert_unit().unwrap();
        assert_eq!(&f * &g, r.one());
    }

    #[test]
    fn derivative_examples() {
        for p in [2u64, 3, 5] {
            let r = ring(p, true, 2, 24);
            let f = s(&r, &format!("(X^{p}+t*Y^{p})*(X+1)"));
            assert_eq!(f.partial_derivative(0), {
                let mut expected = s(&r, &format!("X^{p}+t*Y^{p}"));
                expected.prec = 23;
                expected
            });
            let g = s(&r, &format!("X^{p}+t*Y^{p}"));
            assert!(g.partial_derivative(0).is_zero());
        }
        let r = ring(2, false, 2, 24);
        let f = s(&r, "X^2 + Y^2*X^3 + Y*X^6 + X^9");
        let mut expected = s(&r, "Y^2*X^2 + X^8");
        expected.prec = 23;
        assert_eq!(f.partial_derivative(0), expected);
    }

    #[test]
    fn substitution_examples() {
        let r = ring(2, false, 2, 12);
        let f = s(&r, "X^2+Y^3");
        let image = s(&r, "Y + X^3");
        assert_eq!(
            f.substitute(1, &image).unwrap(),
            s(&r, "X^2 + Y^3 + Y^2*X^3 + Y*X^6 + X^9")
        );
        // identity substitution
        assert_eq!(f.substitute(1, &r.var(1)).unwrap(), f);
        let rt = ring(2, true, 2, 12);
        let g = s(&rt, "t*X^2+Y^2");
        assert_eq!(g.substitute(1, &rt.var(1)).unwrap(), g);
        // nonzero constant terms are rejected
        assert_eq!(
            f.substitute(1, &s(&r, "1+Y")),
            Err(SeriesError::InvalidSubstitution)
        );
    }

    #[test]
    fn axis_restriction_and_coefficient() {
        let r = ring(2, true, 2, 10);
        let f = s(&r, "t*X^2+Y^2");
        assert_eq!(f.axis_restriction(0), s(&r, "t*X^2"));
        assert_eq!(f.axis_restriction(1), s(&r, "Y^2"));
        assert_eq!(
            f.coefficient(&ExpVec::new(vec![2, 0])).unwrap(),
            r.field().generator().unwrap()
        );
        assert!(s(&r, "X*Y").axis_restriction(0).is_zero());
        assert!(matches!(
            f.coefficient(&ExpVec::new(vec![20, 0])),
            Err(SeriesError::PrecisionExceeded { .. })
        ));
    }

    #[test]
    fn pth_power_detection() {
        for p in [2u64, 3, 5] {
            let rt = ring(p, true, 2, 24);
            assert_eq!(s(&rt, &format!("X^{p}+t*Y^{p}")).is_pth_power(), None);
            let rp = ring(p, false, 2, 24);
            assert_eq!(
                s(&rp, &format!("X^{p}+Y^{p}")).is_pth_power(),
                Some({
                    let mut v = s(&rp, "X+Y");
                    v.prec = 23 / p as u32 + 1;
                    v
                })
            );
        }
        let rt = ring(2, true, 2, 24);
        let sq = &s(&rt, "1+t*X") * &s(&rt, "1+t*X");
        assert_eq!(sq, s(&rt, "1+t^2*X^2"));
        let root = sq.is_pth_power().unwrap();
        assert_eq!(root.to_string(), "1 + t*X");
    }

    #[test]
    fn display_is_graded_and_reparses() {
        let r = ring(2, true, 2, 24);
        let f = s(&r, "Y^2 + t*X^2 + X^3");
        assert_eq!(f.to_string(), "t*X^2 + Y^2 + X^3");
        assert_eq!(s(&r, &f.to_string()), f);
        let g = s(&r, "(t+1)*X + Y");
        assert_eq!(g.to_string(), "(1+t)*X + Y");
        assert_eq!(s(&r, &g.to_string()), g);
        assert_eq!(r.zero().to_string(), "0");
    }

    #[test]
    fn parse_errors_carry_offsets() {
        let r = ring(2, false, 2, 10);
        match parse_series(&r, "X + W") {
            Err(SeriesError::Parse { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn re_embed_between_precisions() {
        let r24 = ring(2, false, 2, 24);
        let r48 = r24.with_precision(48);
        let f = s(&r24, "X^2+Y^3");
        let g = f.re_embed(&r48).unwrap();
        assert_eq!(g.precision(), 48);
        assert_eq!(g.to_string(), f.to_string());
    }
}
