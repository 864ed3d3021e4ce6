//! The hypersurface normalization driver.
//!
//! Input: a squarefree hypersurface presented as factors `f_1, ..., f_r` of
//! polynomial support in `k[[X_1, ..., X_{d+1}]]`, `k = F_p` or `F_p(t)`.
//! The driver validates the input, repairs degenerate axes by shears, makes
//! every factor a distinguished polynomial in the last variable, and then
//! walks the factors: whenever `d f_s / d X_1` vanishes below precision it
//! applies a shear `X_j -> X_j + X_1^n` (Step 1) or a coefficient-field twist
//! `t -> t + delta * X_1` (Step 2) that manufactures a nonzero partial while
//! keeping every previously secured factor intact. Finally each factor is
//! prepared as a distinguished polynomial in `X_1` and a nonzero low-degree
//! term of the reduced derivative is extracted: the separability certificate.
//!
//! Certificates carry exact nonzero terms, so they are sound regardless of
//! how the inconclusive "zero below precision" branches were decided; when a
//! check that should hold fails at the working precision, the driver doubles
//! the precision (up to a configured cap), replays the recorded moves on the
//! original input, and resumes.

mod algebra;
mod step1;
mod step2;
mod twist;

pub use step1::{apply_step1, plan_step1, Step1Plan};
pub use step2::{apply_step2, delta_candidates, Step2Plan};
pub use twist::field_twist;

use std::fmt;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::fields::{FieldElem, FieldKind};
use crate::series::{ExpVec, SeriesError, SeriesRing, TruncatedSeries};
use crate::weierstrass::{
    prepare, reduce_mod, DistinguishedPoly, WeierstrassError, WeierstrassFactorization,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NormalizeError {
    #[error("there are no factors")]
    EmptyInput,
    #[error("factor {} is zero", .index + 1)]
    FactorZero { index: usize },
    #[error("factor {} has a nonzero constant term", .index + 1)]
    FactorNotInMaximalIdeal { index: usize },
    #[error("factor {} is a p-th power, so the hypersurface is not reduced", .index + 1)]
    PthPowerFactor { index: usize },
    #[error("factor {} has a coefficient that is not a polynomial in t", .index + 1)]
    NonPolynomialCoefficient { index: usize },
    #[error("factors {} and {} share a divisor (vanishing resultant)", .i + 1, .j + 1)]
    NotCoprime { i: usize, j: usize },
    #[error("the restriction of the product to the axis of variable {} vanishes below precision", .axis + 1)]
    AxisDegenerate { axis: usize },
    #[error("axis repair failed: {reason}")]
    RepairFailed { reason: String, retryable: bool },
    #[error("no twist amount passed the checks within {attempts} attempts")]
    NoDeltaFound { attempts: u32 },
    #[error("coefficient-field twists require k = Fp(t)")]
    NotRationalFunctionField,
    #[error("witness vanishes below precision for factor {}", .index + 1)]
    WitnessVanishesToPrecision { index: usize },
    #[error("internal assertion failed: {0}")]
    AssertionFailed(String),
    #[error("precision exhausted at {precision}: {cause}")]
    PrecisionExhausted { precision: u32, cause: String },
    #[error("validation too large: {0}")]
    ValidationTooLarge(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Weierstrass(#[from] WeierstrassError),
}

/// Outcome classes used by the step functions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepFailure {
    /// The move is admissible but this instance was unlucky; try the next
    /// candidate (larger `n`, next `delta`).
    Retry(&'static str),
    /// An identity that must hold below precision failed: escalate.
    Assertion(String),
}

// ---------------------------------------------------------------------------
// Input, moves, witnesses, results.
// ---------------------------------------------------------------------------

/// The driver input: factors with polynomial support in a common ring.
#[derive(Debug, Clone)]
pub struct HypersurfaceInput {
    ring: SeriesRing,
    factors: Vec<TruncatedSeries>,
    squarefree_attested: bool,
}

impl HypersurfaceInput {
    pub fn new(
        ring: SeriesRing,
        factors: Vec<TruncatedSeries>,
        squarefree_attested: bool,
    ) -> Result<HypersurfaceInput, NormalizeError> {
        if factors.is_empty() {
            return Err(NormalizeError::EmptyInput);
        }
        for f in &factors {
            if f.ring() != &ring {
                return Err(NormalizeError::Series(SeriesError::RingMismatch));
            }
        }
        Ok(HypersurfaceInput {
            ring,
            factors,
            squarefree_attested,
        })
    }

    pub fn ring(&self) -> &SeriesRing {
        &self.ring
    }

    pub fn factors(&self) -> &[TruncatedSeries] {
        &self.factors
    }

    pub fn squarefree_attested(&self) -> bool {
        self.squarefree_attested
    }
}

/// One recorded move of the driver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Move {
    /// `X_var <- X_var + X_1^power` (0-based `var >= 1`).
    Shear { var: usize, power: u32 },
    /// `t <- t + delta * X_1`.
    FieldTwist { delta: FieldElem },
}

/// The ordered record of applied moves. Replaying the log on the original
/// input (and re-preparing in the last variable, which commutes with the
/// moves) reproduces the driver's final factors below precision.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TransformationLog {
    moves: Vec<Move>,
}

impl TransformationLog {
    pub fn new() -> TransformationLog {
        TransformationLog::default()
    }

    pub fn push(&mut self, mv: Move) {
        self.moves.push(mv);
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Apply every recorded move in order.
    pub fn apply(
        &self,
        factors: &[TruncatedSeries],
    ) -> Result<Vec<TruncatedSeries>, NormalizeError> {
        let mut current = factors.to_vec();
        for mv in &self.moves {
            current = apply_move(&current, mv)?;
        }
        Ok(current)
    }

    pub fn twist_count(&self) -> usize {
        self.moves
            .iter()
            .filter(|m| matches!(m, Move::FieldTwist { .. }))
            .count()
    }

    /// The image of the generator `t` under the composite of all recorded
    /// twists, as a series in `X_1`. Twists by constants compose additively
    /// (`Phi_d . Phi_c = Phi_{d+c}` for `c` in `F_p`), but a non-constant
    /// twist amount is itself re-expanded by later twists, so the composite
    /// is computed by folding rather than by summing deltas.
    pub fn generator_image(&self, ring: &SeriesRing) -> Result<TruncatedSeries, NormalizeError> {
        let generator = ring
            .field()
            .generator()
            .map_err(|_| NormalizeError::NotRationalFunctionField)?;
        let mut image = ring.constant(generator);
        for mv in &self.moves {
            if let Move::FieldTwist { delta } = mv {
                image = field_twist(&image, delta)?;
            }
        }
        Ok(image)
    }
}

/// Apply one move to every factor.
pub fn apply_move(
    factors: &[TruncatedSeries],
    mv: &Move,
) -> Result<Vec<TruncatedSeries>, NormalizeError> {
    match mv {
        Move::Shear { var, power } => {
            let ring = factors[0].ring().clone();
            assert!(*var >= 1, "shears only move X_j for j >= 2");
            let image = &ring.var(*var)
                + &ring.monomial(ExpVec::axis(ring.nvars(), 0, *power), ring.field().one());
            factors
                .iter()
                .map(|f| f.substitute(*var, &image).map_err(NormalizeError::from))
                .collect()
        }
        Move::FieldTwist { delta } => factors.iter().map(|f| field_twist(f, delta)).collect(),
    }
}

/// An explicit nonzero term of a factor at an `X_1`-exponent prime to `p`;
/// its existence is exactly "the `X_1`-partial does not vanish".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivativeWitness {
    pub factor: usize,
    pub exponents: ExpVec,
    pub coefficient: FieldElem,
}

/// Per-factor separability certificate: the factor prepared as a
/// distinguished polynomial in `X_1` together with a nonzero term of its
/// reduced `X_1`-derivative (whose `X_1`-degree is below the distinguished
/// degree, so it survives reduction unchanged).
#[derive(Debug, Clone)]
pub struct SeparabilityCertificate {
    pub factor: usize,
    pub unit: TruncatedSeries,
    pub distinguished: DistinguishedPoly,
    pub witness_exponents: ExpVec,
    pub witness_coefficient: FieldElem,
}

#[derive(Debug, Clone)]
pub struct Diagnostics {
    pub precision_used: u32,
    pub escalations: u32,
    pub delta_attempts: u32,
    pub shear_attempts: u32,
    pub elapsed: Duration,
}

impl Default for Diagnostics {
    fn default() -> Self {
        Diagnostics {
            precision_used: 0,
            escalations: 0,
            delta_attempts: 0,
            shear_attempts: 0,
            elapsed: Duration::ZERO,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NormalizationResult {
    pub log: TransformationLog,
    /// The factors after all moves, distinguished in the last variable.
    pub factors: Vec<TruncatedSeries>,
    /// Images of `X_2, ..., X_{d+1}` in the original coordinates (the system
    /// of parameters of the normalized presentation).
    pub parameters: Vec<TruncatedSeries>,
    /// Human-readable description of the final coefficient field.
    pub field_description: String,
    pub certificates: Vec<SeparabilityCertificate>,
    pub diagnostics: Diagnostics,
}

/// Search bounds. The working precision starts at the input ring's bound and
/// doubles on demand up to `max_precision`.
#[derive(Debug, Clone)]
pub struct Config {
    pub max_precision: u32,
    pub delta_attempts: u32,
    pub shear_bound: u32,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_precision: 96,
            delta_attempts: 64,
            shear_bound: 64,
        }
    }
}

// ---------------------------------------------------------------------------
// Validation and axis repair.
// ---------------------------------------------------------------------------

/// Axes (0-based) on which the product of the factors vanishes below
/// precision.
pub(crate) fn dead_axes(factors: &[TruncatedSeries]) -> Vec<usize> {
    let ring = factors[0].ring().clone();
    let mut product = ring.one();
    for f in factors {
        product = &product * f;
    }
    (0..ring.nvars())
        .filter(|&axis| product.axis_restriction(axis).is_zero())
        .collect()
}

/// Check the input contract: nonzero factors in the maximal ideal with
/// polynomial-in-`t` coefficients, no p-th-power factor, pairwise coprime,
/// and every axis restriction of the product nonzero.
pub fn validate(input: &HypersurfaceInput) -> Result<(), NormalizeError> {
    for (index, f) in input.factors.iter().enumerate() {
        if f.is_zero() {
            return Err(NormalizeError::FactorZero { index });
        }
        if !f.constant_term().is_zero() {
            return Err(NormalizeError::FactorNotInMaximalIdeal { index });
        }
        if input.ring.field().kind() == FieldKind::RationalFunctionField
            && f.terms().any(|(_, c)| !c.is_polynomial())
        {
            return Err(NormalizeError::NonPolynomialCoefficient { index });
        }
        if f.is_pth_power().is_some() {
            return Err(NormalizeError::PthPowerFactor { index });
        }
    }
    algebra::pairwise_coprime(&input.factors)?;
    if let Some(&axis) = dead_axes(&input.factors).first() {
        return Err(NormalizeError::AxisDegenerate { axis });
    }
    Ok(())
}

/// Repair a vanishing `X_1`-axis restriction by shears `X_j <- X_j + X_1^m`
/// (`p` not dividing `m`). Shears of this shape leave every other axis
/// restriction unchanged, so a dead axis `X_j` with `j >= 2` cannot be
/// repaired and is reported outright.
pub fn ensure_condition1(
    factors: &[TruncatedSeries],
    shear_bound: u32,
) -> Result<(Vec<TruncatedSeries>, Vec<Move>), NormalizeError> {
    let ring = factors[0].ring().clone();
    let nvars = ring.nvars();
    let p = ring.field().characteristic() as u32;
    let mut current = factors.to_vec();
    let mut moves = Vec::new();

    let product = |fs: &[TruncatedSeries]| -> TruncatedSeries {
        let mut acc = ring.one();
        for f in fs {
            acc = &acc * f;
        }
        acc
    };
    // Number of coordinate planes {X_1, X_j} on which the product survives;
    // a strict increase is progress toward a repairable X_1-axis.
    let plane_score = |fs: &[TruncatedSeries]| -> usize {
        let prod = product(fs);
        (1..nvars)
            .filter(|&j| !prod.plane_restriction(0, j).is_zero())
            .count()
    };

    for _round in 0..=nvars {
        let dead = dead_axes(&current);
        if dead.is_empty() {
            return Ok((current, moves));
        }
        if let Some(&axis) = dead.iter().find(|&&a| a != 0) {
            return Err(NormalizeError::RepairFailed {
                reason: format!(
                    "axis {axis} cannot be repaired: shears X_j <- X_j + X_1^m fix every axis restriction except X_1's"
                ),
                retryable: false,
            });
        }
        let base_score = plane_score(&current);
        let mut committed = false;
        'search: for power in 1..=shear_bound {
            if power % p == 0 {
                continue;
            }
            for var in 1..nvars {
                let mv = Move::Shear { var, power };
                let cand = apply_move(&current, &mv)?;
                let fixes = dead_axes(&cand).is_empty();
                if fixes || plane_score(&cand) > base_score {
                    current = cand;
                    moves.push(mv);
                    committed = true;
                    break 'search;
                }
            }
        }
        if !committed {
            return Err(NormalizeError::RepairFailed {
                reason: format!("no shear with exponent up to {shear_bound} repaired the X_1 axis"),
                retryable: true,
            });
        }
    }
    Err(NormalizeError::RepairFailed {
        reason: "repair rounds exhausted".into(),
        retryable: true,
    })
}

/// Prepare every factor as `unit * distinguished` in the last variable.
pub fn make_distinguished(
    factors: &[TruncatedSeries],
) -> Result<Vec<WeierstrassFactorization>, NormalizeError> {
    let last = factors[0].ring().nvars() - 1;
    factors
        .iter()
        .map(|f| prepare(f, last).map_err(NormalizeError::from))
        .collect()
}

/// The graded-first nonzero term of `d f / d X_1`, pulled back to the term of
/// `f` it came from. `None` means the partial vanishes below precision,
/// which is inconclusive and routes the driver into Step 1 / Step 2.
pub fn find_witness(factor: usize, f: &TruncatedSeries) -> Option<DerivativeWitness> {
    let derivative = f.partial_derivative(0);
    let (e, _) = derivative.leading_term()?;
    let exponents = e.with(0, e.get(0) + 1);
    let coefficient = f.coefficient_or_zero(&exponents);
    debug_assert!(!coefficient.is_zero());
    debug_assert!(
        exponents.get(0) % (f.ring().field().characteristic() as u32) != 0,
        "a surviving derivative term has X_1-exponent prime to p"
    );
    Some(DerivativeWitness {
        factor,
        exponents,
        coefficient,
    })
}

/// Certify one factor with respect to `X_var`: prepare it as a distinguished
/// polynomial, reduce its derivative, and extract a nonzero witness term.
pub fn certify_factor(
    factor: usize,
    f: &TruncatedSeries,
    var: usize,
) -> Result<SeparabilityCertificate, NormalizeError> {
    let fac = prepare(f, var)?;
    let g = fac.distinguished;
    let derivative = g.to_series().partial_derivative(var);
    let reduced = reduce_mod(&derivative, &g);
    let (e, c) = reduced
        .leading_term()
        .ok_or(NormalizeError::WitnessVanishesToPrecision { index: factor })?;
    debug_assert!(e.get(var) < g.degree(), "reduction bounds the X_var-degree");
    Ok(SeparabilityCertificate {
        factor,
        unit: fac.unit,
        distinguished: g.clone(),
        witness_exponents: e.clone(),
        witness_coefficient: c.clone(),
    })
}

/// Certify every factor with respect to `X_1` and assemble the result.
pub fn certify(
    factors: &[TruncatedSeries],
    log: &TransformationLog,
    diagnostics: Diagnostics,
) -> Result<NormalizationResult, NormalizeError> {
    let ring = factors[0].ring().clone();
    let mut certificates = Vec::with_capacity(factors.len());
    for (i, f) in factors.iter().enumerate() {
        certificates.push(certify_factor(i, f, 0)?);
    }
    Ok(NormalizationResult {
        log: log.clone(),
        factors: factors.to_vec(),
        parameters: parameter_images(&ring, log),
        field_description: describe_field(&ring, log),
        certificates,
        diagnostics,
    })
}

/// The images of `X_2, ..., X_{d+1}` in the original coordinates: each shear
/// `X_j <- X_j + X_1^n` contributes `-X_1^n` to the `j`-th parameter, and
/// `X_1` itself never moves.
fn parameter_images(ring: &SeriesRing, log: &TransformationLog) -> Vec<TruncatedSeries> {
    (1..ring.nvars())
        .map(|j| {
            let mut image = ring.var(j);
            for mv in log.moves() {
                if let Move::Shear { var, power } = mv {
                    if *var == j {
                        let mono = ring
                            .monomial(ExpVec::axis(ring.nvars(), 0, *power), ring.field().one());
                        image = &image - &mono;
                    }
                }
            }
            image
        })
        .collect()
}

fn describe_field(ring: &SeriesRing, log: &TransformationLog) -> String {
    let field = ring.field();
    match field.kind() {
        FieldKind::PrimeField => format!("{field} (perfect; unique coefficient field)"),
        FieldKind::RationalFunctionField => {
            if log.twist_count() == 0 {
                return format!("{field} with generator t (unchanged)");
            }
            let image = log
                .generator_image(ring)
                .map(|s| s.to_string())
                .unwrap_or_else(|_| "t".to_string());
            format!(
                "F_{}(s) with s = {} (composite of {} twist(s))",
                field.characteristic(),
                image,
                log.twist_count()
            )
        }
    }
}

// ---------------------------------------------------------------------------
// The driver.
// ---------------------------------------------------------------------------

enum AttemptOutcome {
    Escalate(String),
    Fatal(NormalizeError),
}

fn escalate_or_fatal(e: NormalizeError) -> AttemptOutcome {
    match e {
        NormalizeError::AssertionFailed(msg) => AttemptOutcome::Escalate(msg),
        NormalizeError::WitnessVanishesToPrecision { index } => AttemptOutcome::Escalate(format!(
            "witness of factor {} vanishes below precision",
            index + 1
        )),
        NormalizeError::Weierstrass(WeierstrassError::NotRegular(var)) => {
            AttemptOutcome::Escalate(format!("factor not regular in X_{} yet", var + 1))
        }
        NormalizeError::RepairFailed {
            retryable: true,
            reason,
        } => AttemptOutcome::Escalate(format!("axis repair: {reason}")),
        other => AttemptOutcome::Fatal(other),
    }
}

/// Run the full driver: validate, repair axes, distinguish, fix every factor
/// by Step 1 / Step 2 moves, certify. Escalates precision on inconclusive
/// checks and reports [`NormalizeError::PrecisionExhausted`] at the cap.
pub fn run(
    input: &HypersurfaceInput,
    config: &Config,
) -> Result<NormalizationResult, NormalizeError> {
    let start = Instant::now();
    let mut precision = input.ring().precision();
    let cap = config.max_precision.max(precision);
    let mut log = TransformationLog::new();
    let mut diagnostics = Diagnostics::default();
    loop {
        diagnostics.precision_used = precision;
        match attempt(input, precision, &mut log, config, &mut diagnostics) {
            Ok(mut result) => {
                result.diagnostics.elapsed = start.elapsed();
                return Ok(result);
            }
            Err(AttemptOutcome::Escalate(cause)) => {
                let next = precision.saturating_mul(2);
                if next > cap {
                    return Err(NormalizeError::PrecisionExhausted { precision, cause });
                }
                precision = next;
                diagnostics.escalations += 1;
            }
            Err(AttemptOutcome::Fatal(e)) => return Err(e),
        }
    }
}

fn attempt(
    input: &HypersurfaceInput,
    precision: u32,
    log: &mut TransformationLog,
    config: &Config,
    diagnostics: &mut Diagnostics,
) -> Result<NormalizationResult, AttemptOutcome> {
    let ring = input.ring().with_precision(precision);
    let embedded: Vec<TruncatedSeries> = input
        .factors
        .iter()
        .map(|f| f.re_embed(&ring))
        .collect::<Result<_, _>>()
        .map_err(|e| AttemptOutcome::Fatal(e.into()))?;
    let staged = HypersurfaceInput {
        ring: ring.clone(),
        factors: embedded.clone(),
        squarefree_attested: input.squarefree_attested,
    };
    match validate(&staged) {
        Ok(()) | Err(NormalizeError::AxisDegenerate { .. }) => {}
        Err(e) => return Err(AttemptOutcome::Fatal(e)),
    }

    // Replay any moves recorded by earlier (lower-precision) attempts, then
    // repair whatever is still degenerate.
    let mut factors = log.apply(&embedded).map_err(AttemptOutcome::Fatal)?;
    let (repaired, new_moves) =
        ensure_condition1(&factors, config.shear_bound).map_err(escalate_or_fatal)?;
    factors = repaired;
    for mv in new_moves {
        log.push(mv);
    }

    let prepared = make_distinguished(&factors).map_err(escalate_or_fatal)?;
    factors = prepared
        .into_iter()
        .map(|w| w.distinguished.to_series())
        .collect();

    let nvars = ring.nvars();
    let r = factors.len();
    let mut witnesses: Vec<Option<DerivativeWitness>> = vec![None; r];
    for s in 0..r {
        if let Some(w) = find_witness(s, &factors[s]) {
            witnesses[s] = Some(w);
            continue;
        }
        let has_column = (1..nvars).any(|j| !factors[s].partial_derivative(j).is_zero());
        if has_column {
            let mut done = false;
            for extra_q in 0..config.shear_bound {
                let plan = plan_step1(s, &factors, &witnesses, extra_q)
                    .expect("a nonzero column was just observed");
                diagnostics.shear_attempts += 1;
                match apply_step1(&plan, &factors, &witnesses) {
                    Ok(new_factors) => {
                        factors = new_factors;
                        log.push(Move::Shear {
                            var: plan.column,
                            power: plan.n,
                        });
                        witnesses[s] = find_witness(s, &factors[s]);
                        if witnesses[s].is_none() {
                            return Err(AttemptOutcome::Escalate(
                                "post-shear witness is invisible at this precision".into(),
                            ));
                        }
                        done = true;
                        break;
                    }
                    Err(StepFailure::Retry(_)) => continue,
                    Err(StepFailure::Assertion(msg)) => return Err(AttemptOutcome::Escalate(msg)),
                }
            }
            if !done {
                return Err(AttemptOutcome::Escalate(format!(
                    "no admissible shear exponent within {} attempts",
                    config.shear_bound
                )));
            }
        } else {
            if ring.field().kind() == FieldKind::PrimeField {
                // Over a perfect field an exact factor with vanishing partials
                // would be a p-th power, which validation rejected; reaching
                // this state means terms are hiding above the precision bound.
                return Err(AttemptOutcome::Escalate(
                    "all partials vanish over a perfect field; deeper terms must exist".into(),
                ));
            }
            let Some((minimal_exponents, alpha)) = step2::offending_coefficient(&factors[s]) else {
                return Err(AttemptOutcome::Escalate(
                    "every visible coefficient is a p-th power; deeper terms must exist".into(),
                ));
            };
            let mut done = false;
            for delta in delta_candidates(ring.field()).take(config.delta_attempts as usize) {
                diagnostics.delta_attempts += 1;
                let plan = Step2Plan {
                    factor: s,
                    minimal_exponents: minimal_exponents.clone(),
                    alpha: alpha.clone(),
                    delta,
                };
                match apply_step2(&plan, &factors, &witnesses) {
                    Ok(new_factors) => {
                        factors = new_factors;
                        log.push(Move::FieldTwist { delta: plan.delta });
                        witnesses[s] =
                            Some(find_witness(s, &factors[s]).expect("twist created a witness"));
                        done = true;
                        break;
                    }
                    Err(StepFailure::Retry(_)) => continue,
                    Err(StepFailure::Assertion(msg)) => return Err(AttemptOutcome::Escalate(msg)),
                }
            }
            if !done {
                return Err(AttemptOutcome::Escalate(
                    NormalizeError::NoDeltaFound {
                        attempts: config.delta_attempts,
                    }
                    .to_string(),
                ));
            }
        }
    }

    certify(&factors, log, diagnostics.clone()).map_err(escalate_or_fatal)
}

/// Re-apply a saved log instead of searching: validate, apply the moves,
/// re-prepare in the last variable, and certify. Deterministic; any check
/// failure surfaces as an error rather than triggering a search.
pub fn replay(
    input: &HypersurfaceInput,
    log: &TransformationLog,
    _config: &Config,
) -> Result<NormalizationResult, NormalizeError> {
    let start = Instant::now();
    match validate(input) {
        Ok(()) | Err(NormalizeError::AxisDegenerate { .. }) => {}
        Err(e) => return Err(e),
    }
    let factors = log.apply(input.factors())?;
    if let Some(&axis) = dead_axes(&factors).first() {
        return Err(NormalizeError::AxisDegenerate { axis });
    }
    let prepared = make_distinguished(&factors)?;
    let factors: Vec<TruncatedSeries> = prepared
        .into_iter()
        .map(|w| w.distinguished.to_series())
        .collect();
    let mut diagnostics = Diagnostics {
        precision_used: input.ring().precision(),
        ..Diagnostics::default()
    };
    diagnostics.elapsed = start.elapsed();
    certify(&factors, log, diagnostics)
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Shear { var, power } => write!(f, "shear var={} power={}", var + 1, power),
            Move::FieldTwist { delta } => write!(f, "twist delta={delta}"),
        }
    }
}
