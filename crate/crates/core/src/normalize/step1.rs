//! Step 1: repair a factor whose `X_1`-partial vanishes but which still moves
//! in some other variable, by the shear `X_j -> X_j + X_1^n`.
//!
//! Writing `f_s = sum F_{a,b} X_1^a X_j^b` (coefficients in the remaining
//! variables), the plan records the least column `b_0` with `p` not dividing
//! `b_0` and `F_{a,b_0}` nonzero, the least row `a_0` in that column, and the
//! least admissible exponent `n = qp + 1` exceeding `a_0` and every recorded
//! witness row. After the shear the bigraded coefficient at
//! `(a_0 + n, b_0 - 1)` equals `b_0 * F_{a_0,b_0}`, which is nonzero and sits
//! at an `X_1`-exponent prime to `p`: a fresh derivative witness.

use crate::series::{ExpVec, TruncatedSeries};

use super::{dead_axes, DerivativeWitness, StepFailure};

/// A planned shear for one factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step1Plan {
    /// Index of the factor being repaired.
    pub factor: usize,
    /// The sheared variable `j` (0-based, at least 1).
    pub column: usize,
    /// Least `X_j`-exponent not divisible by `p` carrying a term.
    pub b0: u32,
    /// Least `X_1`-exponent in column `b0`.
    pub a0: u32,
    /// `n = q*p + 1`.
    pub q: u32,
    pub n: u32,
}

/// The bigraded slice: terms of `f` with `X_1`-exponent `a` and
/// `X_column`-exponent `b`, both cleared, as a series in the other variables.
pub(crate) fn bigraded_slice(
    f: &TruncatedSeries,
    column: usize,
    a: u32,
    b: u32,
) -> TruncatedSeries {
    let window = f.precision().saturating_sub(a).saturating_sub(b);
    let mut out = f.ring().zero().truncated(window);
    for (e, c) in f.terms() {
        if e.get(0) == a && e.get(column) == b {
            let mono = f.ring().monomial(e.with(0, 0).with(column, 0), c.clone());
            out = &out + &mono;
        }
    }
    out
}

/// Plan the shear for factor `factor`, whose `X_1`-partial vanishes below
/// precision. Returns `None` when every other partial vanishes too (the
/// Step 2 branch). `extra_q` bumps `q` past the minimal choice on retries.
pub fn plan_step1(
    factor: usize,
    factors: &[TruncatedSeries],
    witnesses: &[Option<DerivativeWitness>],
    extra_q: u32,
) -> Option<Step1Plan> {
    let f = &factors[factor];
    let nvars = f.ring().nvars();
    let p = f.ring().field().characteristic() as u32;
    let column = (1..nvars).find(|&j| !f.partial_derivative(j).is_zero())?;
    let b0 = f
        .terms()
        .map(|(e, _)| e.get(column))
        .filter(|&b| b % p != 0)
        .min()
        .expect("nonzero partial implies a p-prime column");
    let a0 = f
        .terms()
        .filter(|(e, _)| e.get(column) == b0)
        .map(|(e, _)| e.get(0))
        .min()
        .expect("column b0 carries a term");
    debug_assert_eq!(a0 % p, 0, "X_1-partial vanishes, so p | a0");
    let bound = witnesses
        .iter()
        .flatten()
        .map(|w| w.exponents.get(0))
        .chain(std::iter::once(a0))
        .max()
        .unwrap_or(0);
    let mut q = 1u32;
    while q * p < bound {
        q += 1;
    }
    q += extra_q;
    Some(Step1Plan {
        factor,
        column,
        b0,
        a0,
        q,
        n: q * p + 1,
    })
}

/// Shear every factor by `X_j -> X_j + X_1^n` and verify the move:
/// recorded witnesses must keep nonzero coefficients, the bigraded identity
/// `G_{a0+n, b0-1} = b0 * F_{a0,b0}` must hold on the visible window, and the
/// product must stay nonzero on every axis (else retry with a larger `n`).
pub fn apply_step1(
    plan: &Step1Plan,
    factors: &[TruncatedSeries],
    witnesses: &[Option<DerivativeWitness>],
) -> Result<Vec<TruncatedSeries>, StepFailure> {
    let ring = factors[plan.factor].ring().clone();
    let image = &ring.var(plan.column)
        + &ring.monomial(ExpVec::axis(ring.nvars(), 0, plan.n), ring.field().one());
    let mut sheared = Vec::with_capacity(factors.len());
    for f in factors {
        sheared.push(
            f.substitute(plan.column, &image)
                .map_err(|e| StepFailure::Assertion(format!("shear substitution: {e}")))?,
        );
    }
    if !dead_axes(&sheared).is_empty() {
        return Err(StepFailure::Retry("axis restriction vanished after shear"));
    }
    for w in witnesses.iter().flatten() {
        if sheared[w.factor]
            .coefficient_or_zero(&w.exponents)
            .is_zero()
        {
            return Err(StepFailure::Assertion(format!(
                "witness of factor {} lost under shear X{} -> X{} + X1^{}",
                w.factor + 1,
                plan.column + 1,
                plan.column + 1,
                plan.n
            )));
        }
    }
    let got = bigraded_slice(
        &sheared[plan.factor],
        plan.column,
        plan.a0 + plan.n,
        plan.b0 - 1,
    );
    let expected = bigraded_slice(&factors[plan.factor], plan.column, plan.a0, plan.b0)
        .scalar_mul(&ring.field().from_integer(plan.b0 as i64));
    let window = got.precision().min(expected.precision());
    if window == 0 {
        return Err(StepFailure::Assertion(
            "bigraded comparison window is empty at this precision".into(),
        ));
    }
    let got = got.truncated(window);
    let expected = expected.truncated(window);
    if got != expected || got.is_zero() {
        return Err(StepFailure::Assertion(format!(
            "post-shear coefficient at ({}, {}) differs from b0 * F(a0, b0)",
            plan.a0 + plan.n,
            plan.b0 - 1
        )));
    }
    Ok(sheared)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::FieldDescriptor;
    use crate::series::{parse_series, SeriesRing};

    fn ring2(p: u64, prec: u32) -> SeriesRing {
        let field = FieldDescriptor::prime_field(p).unwrap();
        SeriesRing::new(field, 2, prec, Some(vec!["X".into(), "Y".into()])).unwrap()
    }

    #[test]
    fn plan_on_spec_example() {
        let r = ring2(2, 24);
        let f = parse_series(&r, "X^2 + Y^3").unwrap();
        let plan = plan_step1(0, &[f], &[None], 0).unwrap();
        assert_eq!(
            plan,
            Step1Plan {
                factor: 0,
                column: 1,
                b0: 3,
                a0: 0,
                q: 1,
                n: 3
            }
        );
    }

    #[test]
    fn plan_absent_when_all_partials_vanish() {
        let field = FieldDescriptor::rational_function_field(2).unwrap();
        let r = SeriesRing::new(field, 2, 24, Some(vec!["X".into(), "Y".into()])).unwrap();
        let f = parse_series(&r, "t*X^2 + Y^2").unwrap();
        assert_eq!(plan_step1(0, &[f], &[None], 0), None);
    }

    #[test]
    fn prior_witness_rows_raise_n() {
        let r = ring2(2, 24);
        let f = parse_series(&r, "X^2 + Y^3").unwrap();
        let prior = DerivativeWitness {
            factor: 0,
            exponents: ExpVec::new(vec![3, 0]),
            coefficient: r.field().one(),
        };
        let plan = plan_step1(1, &[f.clone(), f], &[Some(prior), None], 0).unwrap();
        assert_eq!(plan.n, 5);
    }

    #[test]
    fn apply_matches_hand_expansion() {
        let r = ring2(2, 24);
        let f = parse_series(&r, "X^2 + Y^3").unwrap();
        let plan = plan_step1(0, std::slice::from_ref(&f), &[None], 0).unwrap();
        let out = apply_step1(&plan, &[f], &[None]).unwrap();
        assert_eq!(
            out[0],
            parse_series(&r, "X^2 + Y^3 + Y^2*X^3 + Y*X^6 + X^9").unwrap()
        );
        // G_{3,2} = 3 * F_{0,3} = 1 over F_2
        assert_eq!(
            out[0].coefficient_or_zero(&ExpVec::new(vec![3, 2])),
            r.field().one()
        );
    }

    #[test]
    fn shear_preserves_low_witnesses() {
        let r = ring2(2, 24);
        let f1 = parse_series(&r, "Y^2 + X*Y + X").unwrap();
        let f2 = parse_series(&r, "X^2 + Y^3").unwrap();
        let w = DerivativeWitness {
            factor: 0,
            exponents: ExpVec::new(vec![1, 1]),
            coefficient: r.field().one(),
        };
        let plan = plan_step1(1, &[f1.clone(), f2.clone()], &[Some(w.clone()), None], 0).unwrap();
        assert_eq!(plan.n, 3);
        let out = apply_step1(&plan, &[f1, f2], &[Some(w.clone())]).unwrap();
        assert!(!out[0].coefficient_or_zero(&w.exponents).is_zero());
    }
}
