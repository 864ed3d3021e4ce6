//! The coefficient-field twist `Phi_delta: t -> t + delta * X_1`.
//!
//! `Phi_delta` is the ring automorphism of `F_p(t)[[X_1, ..., X_r]]` fixing
//! every variable and replacing the coefficient-field generator `t` by
//! `t + delta * X_1`. A coefficient `c = num(t)/den(t)` expands through its
//! Taylor coefficients: the numerator and denominator become polynomials in
//! `X_1`, and the denominator keeps its nonzero constant term `den(t)`, so it
//! inverts as a unit series. Polynomial coefficients therefore twist to
//! polynomials, and rational ones to honest truncated series.

use crate::fields::{FieldElem, FieldKind};
use crate::series::{ExpVec, SeriesRing, TruncatedSeries};

use super::NormalizeError;

/// Expand `Phi_delta(c)` as a series in `X_1` inside `ring`.
pub(crate) fn twist_constant(
    ring: &SeriesRing,
    c: &FieldElem,
    delta: &FieldElem,
) -> Result<TruncatedSeries, NormalizeError> {
    let (nums, dens) = c.twist_expansion(delta);
    let assemble = |coeffs: &[FieldElem]| -> TruncatedSeries {
        let mut acc = ring.zero();
        for (m, coeff) in coeffs.iter().enumerate() {
            let mono = ring.monomial(ExpVec::axis(ring.nvars(), 0, m as u32), coeff.clone());
            acc = &acc + &mono;
        }
        acc
    };
    let num_series = assemble(&nums);
    if dens.len() == 1 && dens[0].is_one() {
        return Ok(num_series);
    }
    let den_series = assemble(&dens);
    let inv = den_series.invert_unit()?;
    Ok(&num_series * &inv)
}

/// Apply `Phi_delta` to a whole series. `Phi_0` is the identity; over `F_p`
/// there is no generator to move and the call is an error.
pub fn field_twist(
    f: &TruncatedSeries,
    delta: &FieldElem,
) -> Result<TruncatedSeries, NormalizeError> {
    if f.ring().field().kind() != FieldKind::RationalFunctionField {
        return Err(NormalizeError::NotRationalFunctionField);
    }
    if delta.is_zero() {
        return Ok(f.clone());
    }
    let ring = f.ring().clone();
    let mut acc = ring.zero();
    for (e, c) in f.terms() {
        let expanded = twist_constant(&ring, c, delta)?;
        acc = &acc + &expanded.mul_monomial(e, &ring.field().one());
    }
    Ok(acc.truncated(f.precision()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::FieldDescriptor;
    use crate::series::parse_series;

    fn ring(p: u64) -> SeriesRing {
        let field = FieldDescriptor::rational_function_field(p).unwrap();
        SeriesRing::new(field, 2, 24, Some(vec!["X".into(), "Y".into()])).unwrap()
    }

    #[test]
    fn flagship_twist() {
        let r = ring(2);
        let f = parse_series(&r, "t*X^2 + Y^2").unwrap();
        let delta = r.field().one();
        let twisted = field_twist(&f, &delta).unwrap();
        assert_eq!(twisted, parse_series(&r, "t*X^2 + X^3 + Y^2").unwrap());
    }

    #[test]
    fn twist_by_zero_is_identity() {
        let r = ring(3);
        let f = parse_series(&r, "t^2*X + Y^2 + t*X*Y").unwrap();
        assert_eq!(field_twist(&f, &r.field().zero()).unwrap(), f);
    }

    #[test]
    fn pth_power_coefficients_gain_no_linear_term() {
        // Phi_1(t^2) = t^2 + X^2 over F_2(t): eta_{t^2,1} = 0.
        let r = ring(2);
        let c = r.field().parse("t^2").unwrap();
        let f = r.constant(c);
        let twisted = field_twist(&f, &r.field().one()).unwrap();
        assert_eq!(twisted, parse_series(&r, "t^2 + X^2").unwrap());
    }

    #[test]
    fn rational_coefficients_twist_through_unit_inversion() {
        // Phi_1(1/t) = 1/(t+X) = sum_i X^i / t^(i+1) in characteristic 2.
        let r = ring(2);
        let k = r.field();
        let c = k.parse("1/t").unwrap();
        let twisted = field_twist(&r.constant(c), &k.one()).unwrap();
        for i in 0..5u32 {
            let expect = k.parse(&format!("1/t^{}", i + 1)).unwrap();
            assert_eq!(
                twisted.coefficient_or_zero(&ExpVec::new(vec![i, 0])),
                expect
            );
        }
        // multiplying back by the twisted denominator gives 1
        let den = field_twist(&r.constant(k.generator().unwrap()), &k.one()).unwrap();
        assert_eq!(&den * &twisted, r.one());
    }

    #[test]
    fn twist_rejected_over_prime_fields() {
        let field = FieldDescriptor::prime_field(2).unwrap();
        let r = SeriesRing::new(field, 1, 8, None).unwrap();
        assert!(matches!(
            field_twist(&r.one(), &field.one()),
            Err(NormalizeError::NotRationalFunctionField)
        ));
    }
}
