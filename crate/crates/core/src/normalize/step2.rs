//! Step 2: repair a factor all of whose partials vanish by twisting the
//! coefficient field, `t -> t + delta * X_1`.
//!
//! When every partial of `f_s` vanishes, all exponents are divisible by `p`,
//! and since `f_s` is not a p-th power some coefficient lies outside `k^p`.
//! The plan records the graded-minimal exponent vector `l'` carrying such a
//! coefficient `alpha`. After the twist the coefficient at `l' + e_1` equals
//! `(d alpha/d t) * delta`: contributions from other terms are killed because
//! their coefficients lie in `k^p` (minimality of `l'`) and `k^p`-elements
//! acquire no `X_1`-powers prime to `p`. The value is nonzero because
//! `alpha` is outside `k^p` exactly when its `t`-derivative is nonzero, and
//! `p` does not divide `l'_1 + 1`, so the term is a fresh witness.
//!
//! Prior witnesses transform by polynomial functions `xi_i(delta)` with
//! `xi_i(0)` nonzero, so only finitely many `delta` are bad; the driver walks
//! the candidate list until one passes.

use crate::fields::{FieldDescriptor, FieldElem};
use crate::series::{ExpVec, TruncatedSeries};

use super::twist::field_twist;
use super::{dead_axes, DerivativeWitness, NormalizeError, StepFailure};

/// A planned coefficient-field twist for one factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step2Plan {
    /// Index of the factor being repaired.
    pub factor: usize,
    /// The graded-minimal exponent vector whose coefficient is outside `k^p`.
    pub minimal_exponents: ExpVec,
    /// That coefficient.
    pub alpha: FieldElem,
    /// The twist amount.
    pub delta: FieldElem,
}

/// The graded-minimal term of `f` whose coefficient is outside `k^p`.
/// `None` means every visible coefficient is a p-th power, which on a
/// validated input signals a precision shortfall rather than a plan.
pub(crate) fn offending_coefficient(f: &TruncatedSeries) -> Option<(ExpVec, FieldElem)> {
    let p = f.ring().field().characteristic() as u32;
    for (e, c) in f.terms() {
        if c.pth_root().is_none() {
            debug_assert!(
                e.is_divisible_by(p),
                "vanishing partials force p-divisible exponents"
            );
            return Some((e.clone(), c.clone()));
        }
    }
    None
}

/// Candidate twist amounts in a fixed order: `1, ..., p-1, t, t+1, ...`,
/// i.e. the nonzero polynomials of `F_p[t]` enumerated by base-p digits.
pub fn delta_candidates(desc: FieldDescriptor) -> impl Iterator<Item = FieldElem> {
    let p = desc.characteristic();
    (1u64..).map(move |i| {
        let mut digits = Vec::new();
        let mut v = i;
        while v > 0 {
            digits.push(v % p);
            v /= p;
        }
        FieldElem::from_t_coeffs(desc, &digits)
    })
}

/// Twist every factor by `Phi_delta` and verify the move: the coefficient of
/// the target factor at `l' + e_1` must equal `alpha'(t) * delta` (an exact
/// identity; a mismatch signals a precision problem), recorded witnesses must
/// keep nonzero coefficients, and the product must stay nonzero on every
/// axis (the latter two retry with the next `delta`).
pub fn apply_step2(
    plan: &Step2Plan,
    factors: &[TruncatedSeries],
    witnesses: &[Option<DerivativeWitness>],
) -> Result<Vec<TruncatedSeries>, StepFailure> {
    let ring = factors[plan.factor].ring().clone();
    let mut twisted = Vec::with_capacity(factors.len());
    for f in factors {
        twisted.push(field_twist(f, &plan.delta).map_err(|e| match e {
            NormalizeError::NotRationalFunctionField => {
                StepFailure::Assertion("field twist requested over a perfect field".into())
            }
            other => StepFailure::Assertion(format!("twist failed: {other}")),
        })?);
    }
    let target = plan
        .minimal_exponents
        .add(&ExpVec::axis(ring.nvars(), 0, 1));
    if target.total_degree() >= twisted[plan.factor].precision() {
        return Err(StepFailure::Assertion(
            "twist witness position is outside the precision window".into(),
        ));
    }
    let got = twisted[plan.factor].coefficient_or_zero(&target);
    let expected = plan.alpha.d_dt().mul(&plan.delta);
    if got != expected || got.is_zero() {
        return Err(StepFailure::Assertion(format!(
            "twisted coefficient at X1-degree {} is `{got}`, expected `{expected}`",
            target.get(0)
        )));
    }
    for w in witnesses.iter().flatten() {
        if twisted[w.factor]
            .coefficient_or_zero(&w.exponents)
            .is_zero()
        {
            return Err(StepFailure::Retry(
                "a recorded witness vanished; next delta",
            ));
        }
    }
    if !dead_axes(&twisted).is_empty() {
        return Err(StepFailure::Retry("axis restriction vanished; next delta"));
    }
    Ok(twisted)
}
