//! Brute-force reference implementations used by the test suites.
//!
//! [`DensePoly`] stores every coefficient in a dense nested array and does
//! schoolbook arithmetic with no truncation, so it is a trustworthy (if slow)
//! oracle for the sparse truncated series module. It deliberately shares no
//! algorithmic code with [`crate::series`].
//!
//! The [`gen`] submodule holds a small deterministic generator so randomized
//! suites are reproducible without any global RNG state.

use std::fmt;

use thiserror::Error;

use crate::fields::{FieldDescriptor, FieldElem};

/// Refuse to allocate dense arrays beyond this many coefficients.
const SIZE_CAP: usize = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("dense oracle shape {0} exceeds the size cap")]
    OracleTooLarge(usize),
}

/// A dense multivariate polynomial: `coeffs[i]` is the coefficient of the
/// monomial whose exponents are the mixed-radix digits of `i` in `bounds`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensePoly {
    field: FieldDescriptor,
    bounds: Vec<usize>,
    coeffs: Vec<FieldElem>,
}

fn checked_len(bounds: &[usize]) -> Result<usize, OracleError> {
    let mut len = 1usize;
    for &b in bounds {
        len = len
            .checked_mul(b.max(1))
            .filter(|&l| l <= SIZE_CAP)
            .ok_or(OracleError::OracleTooLarge(usize::MAX))?;
    }
    if len > SIZE_CAP {
        return Err(OracleError::OracleTooLarge(len));
    }
    Ok(len)
}

impl DensePoly {
    pub fn zero(field: FieldDescriptor, bounds: Vec<usize>) -> Result<DensePoly, OracleError> {
        let bounds: Vec<usize> = bounds.into_iter().map(|b| b.max(1)).collect();
        let len = checked_len(&bounds)?;
        Ok(DensePoly {
            field,
            bounds,
            coeffs: vec![field.zero(); len],
        })
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[usize] {
        &self.bounds
    }

    fn index(&self, exps: &[usize]) -> usize {
        debug_assert_eq!(exps.len(), self.bounds.len());
        let mut idx = 0usize;
        for (e, b) in exps.iter().zip(&self.bounds).rev() {
            debug_assert!(e < b);
            idx = idx * b + e;
        }
        idx
    }

    fn exps_of(&self, mut idx: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.bounds.len());
        for &b in &self.bounds {
            out.push(idx % b);
            idx /= b;
        }
        out
    }

    pub fn get(&self, exps: &[usize]) -> FieldElem {
        if exps.iter().zip(&self.bounds).any(|(e, b)| e >= b) {
            return self.field.zero();
        }
        self.coeffs[self.index(exps)].clone()
    }

    pub fn set(&mut self, exps: &[usize], value: FieldElem) {
        let idx = self.index(exps);
        self.coeffs[idx] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// All (exponents, coefficient) pairs with nonzero coefficient.
    pub fn terms(&self) -> Vec<(Vec<usize>, FieldElem)> {
        let mut out = Vec::new();
        for (idx, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out.push((self.exps_of(idx), c.clone()));
            }
        }
        out
    }
}

pub fn dense_add(a: &DensePoly, b: &DensePoly) -> Result<DensePoly, OracleError> {
    assert_eq!(a.field, b.field);
    assert_eq!(a.nvars(), b.nvars());
    let bounds: Vec<usize> = a
        .bounds
        .iter()
        .zip(&b.bounds)
        .map(|(&x, &y)| x.max(y))
        .collect();
    let mut out = DensePoly::zero(a.field, bounds)?;
    for (exps, c) in a.terms() {
        let cur = out.get(&exps);
        out.set(&exps, cur.add(&c));
    }
    for (exps, c) in b.terms() {
        let cur = out.get(&exps);
        out.set(&exps, cur.add(&c));
    }
    Ok(out)
}

pub fn dense_mul(a: &DensePoly, b: &DensePoly) -> Result<DensePoly, OracleError> {
    assert_eq!(a.field, b.field);
    assert_eq!(a.nvars(), b.nvars());
    let bounds: Vec<usize> = a
        .bounds
        .iter()
        .zip(&b.bounds)
        .map(|(&x, &y)| x + y - 1)
        .collect();
    let mut out = DensePoly::zero(a.field, bounds)?;
    for (ea, ca) in a.terms() {
        for (eb, cb) in b.terms() {
            let exps: Vec<usize> = ea.iter().zip(&eb).map(|(x, y)| x + y).collect();
            let cur = out.get(&exps);
            out.set(&exps, cur.add(&ca.mul(&cb)));
        }
    }
    Ok(out)
}

/// Substitute `s` for variable `var` (0-based) in `a`, exactly.
pub fn dense_substitute(
    a: &DensePoly,
    var: usize,
    s: &DensePoly,
) -> Result<DensePoly, OracleError> {
    assert_eq!(a.field, s.field);
    assert_eq!(a.nvars(), s.nvars());
    let max_exp = a.bounds[var] - 1;
    // s^0, s^1, ..., s^max_exp, computed naively.
    let mut one = DensePoly::zero(a.field, vec![1; a.nvars()])?;
    one.set(&vec![0; a.nvars()], a.field.one());
    let mut powers = vec![one];
    for i in 1..=max_exp {
        let next = dense_mul(&powers[i - 1], s)?;
        powers.push(next);
    }
    let mut bounds: Vec<usize> = a.bounds.clone();
    bounds[var] = 1;
    for (i, b) in bounds.iter_mut().enumerate() {
        *b = (*b).max(powers[max_exp].bounds[i] + a.bounds[i] - 1);
    }
    let mut out = DensePoly::zero(a.field, bounds)?;
    for (exps, c) in a.terms() {
        let mut base = exps.clone();
        base[var] = 0;
        for (se, sc) in powers[exps[var]].terms() {
            let target: Vec<usize> = base.iter().zip(&se).map(|(x, y)| x + y).collect();
            let cur = out.get(&target);
            out.set(&target, cur.add(&c.mul(&sc)));
        }
    }
    Ok(out)
}

/// Termwise formal derivative with respect to `var` (0-based).
pub fn dense_derivative(a: &DensePoly, var: usize) -> Result<DensePoly, OracleError> {
    let mut out = DensePoly::zero(a.field, a.bounds.clone())?;
    for (exps, c) in a.terms() {
        if exps[var] == 0 {
            continue;
        }
        let factor = a.field.from_integer(exps[var] as i64);
        if factor.is_zero() {
            continue;
        }
        let mut target = exps.clone();
        target[var] -= 1;
        let cur = out.get(&target);
        out.set(&target, cur.add(&c.mul(&factor)));
    }
    Ok(out)
}

/// Do a sparse series result and a dense oracle result agree on every term of
/// total degree below `n`?
pub fn agree(sparse: &crate::series::TruncatedSeries, dense: &DensePoly, n: u32) -> bool {
    for (exps, c) in dense.terms() {
        let deg: usize = exps.iter().sum();
        if deg as u32 >= n {
            continue;
        }
        let ev = crate::series::ExpVec::new(exps.iter().map(|&e| e as u32).collect());
        if sparse.coefficient_or_zero(&ev) != c {
            return false;
        }
    }
    for (ev, c) in sparse.terms() {
        if ev.total_degree() >= n {
            continue;
        }
        let exps: Vec<usize> = ev.exponents().iter().map(|&e| e as usize).collect();
        if &dense.get(&exps) != c {
            return false;
        }
    }
    true
}

/// Exact conversion of a sparse series' stored terms into a dense polynomial.
pub fn dense_from_series(f: &crate::series::TruncatedSeries) -> Result<DensePoly, OracleError> {
    let nvars = f.ring().nvars();
    let mut bounds = vec![1usize; nvars];
    for (ev, _) in f.terms() {
        for (i, &e) in ev.exponents().iter().enumerate() {
            bounds[i] = bounds[i].max(e as usize + 1);
        }
    }
    let mut out = DensePoly::zero(f.ring().field(), bounds)?;
    for (ev, c) in f.terms() {
        let exps: Vec<usize> = ev.exponents().iter().map(|&e| e as usize).collect();
        out.set(&exps, c.clone());
    }
    Ok(out)
}

impl fmt::Display for DensePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = terms
            .iter()
            .map(|(exps, c)| format!("{c}*{exps:?}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub mod gen {
    //! Deterministic instance generation for the randomized suites.

    use crate::fields::{FieldDescriptor, FieldElem, FieldKind};

    /// SplitMix64; fixed seeds make every randomized suite reproducible.
    #[derive(Debug, Clone)]
    pub struct Rng64(u64);

    impl Rng64 {
        pub fn new(seed: u64) -> Rng64 {
            Rng64(seed)
        }

        pub fn next_u64(&mut self) -> u64 {
            self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = self.0;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            z ^ (z >> 31)
        }

        /// Uniform in `[0, bound)`.
        pub fn below(&mut self, bound: u64) -> u64 {
            self.next_u64() % bound.max(1)
        }

        pub fn elem(&mut self, desc: FieldDescriptor) -> FieldElem {
            match desc.kind() {
                FieldKind::PrimeField => {
                    desc.from_integer(self.below(desc.characteristic()) as i64)
                }
                FieldKind::RationalFunctionField => {
                    let deg = self.below(4) as usize;
                    let coeffs: Vec<u64> = (0..=deg)
                        .map(|_| self.below(desc.characteristic()))
                        .collect();
                    FieldElem::from_t_coeffs(desc, &coeffs)
                }
            }
        }

        pub fn nonzero_elem(&mut self, desc: FieldDescriptor) -> FieldElem {
            loop {
                let e = self.elem(desc);
                if !e.is_zero() {
                    return e;
                }
            }
        }

        /// A random rational function with numerator/denominator degree at
        /// most `deg`.
        pub fn rational_elem(&mut self, desc: FieldDescriptor, deg: usize) -> FieldElem {
            let p = desc.characteristic();
            let num: Vec<u64> = (0..=self.below(deg as u64 + 1) as usize)
                .map(|_| self.below(p))
                .collect();
            let den: Vec<u64> = loop {
                let cand: Vec<u64> = (0..=self.below(deg as u64 + 1) as usize)
                    .map(|_| self.below(p))
                    .collect();
                if cand.iter().any(|&c| c != 0) {
                    break cand;
                }
            };
            let n = FieldElem::from_t_coeffs(desc, &num);
            let d = FieldElem::from_t_coeffs(desc, &den);
            n.div(&d).expect("nonzero denominator")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::SeriesRing;

    fn f2() -> FieldDescriptor {
        FieldDescriptor::prime_field(2).unwrap()
    }

    fn poly(field: FieldDescriptor, bounds: Vec<usize>, terms: &[(&[usize], i64)]) -> DensePoly {
        let mut p = DensePoly::zero(field, bounds).unwrap();
        for (exps, c) in terms {
            p.set(exps, field.from_integer(*c));
        }
        p
    }

    #[test]
    fn freshmans_dream() {
        // (X+Y)^2 = X^2 + Y^2 over F_2
        let xy = poly(f2(), vec![2, 2], &[(&[1, 0], 1), (&[0, 1], 1)]);
        let sq = dense_mul(&xy, &xy).unwrap();
        let expected = poly(f2(), vec![3, 3], &[(&[2, 0], 1), (&[0, 2], 1)]);
        assert_eq!(sq.terms(), expected.terms());
    }

    #[test]
    fn shear_substitution() {
        // X1^2 + X2^3 with X2 -> X2 + X1^3 over F_2
        let a = poly(f2(), vec![3, 4], &[(&[2, 0], 1), (&[0, 3], 1)]);
        let s = poly(f2(), vec![4, 2], &[(&[0, 1], 1), (&[3, 0], 1)]);
        let out = dense_substitute(&a, 1, &s).unwrap();
        let expected = poly(
            f2(),
            vec![10, 4],
            &[
                (&[2, 0], 1),
                (&[0, 3], 1),
                (&[3, 2], 1),
                (&[6, 1], 1),
                (&[9, 0], 1),
            ],
        );
        assert_eq!(out.terms(), expected.terms());
    }

    #[test]
    fn derivative_kills_pth_powers() {
        // d/dX of X^p + t*Y^p over F_p(t) is 0
        for p in [2u64, 3, 5] {
            let k = FieldDescriptor::rational_function_field(p).unwrap();
            let t = k.generator().unwrap();
            let pu = p as usize;
            let mut f = DensePoly::zero(k, vec![pu + 1, pu + 1]).unwrap();
            f.set(&[pu, 0], k.one());
            f.set(&[0, pu], t);
            assert!(dense_derivative(&f, 0).unwrap().is_zero());
        }
    }

    #[test]
    fn agree_flags_corruption() {
        let ring = SeriesRing::new(f2(), 2, 10, Some(vec!["X".into(), "Y".into()])).unwrap();
        let f = crate::series::parse_series(&ring, "X^2 + X*Y").unwrap();
        let dense = dense_from_series(&f).unwrap();
        assert!(agree(&f, &dense, 10));
        let mut corrupted = dense.clone();
        corrupted.set(&[1, 1], f2().zero());
        assert!(!agree(&f, &corrupted, 10));
        // differences at or above the window are invisible
        assert!(agree(&f, &corrupted, 2));
    }

    #[test]
    fn size_cap_enforced() {
        let err = DensePoly::zero(f2(), vec![1 << 12, 1 << 12]).unwrap_err();
        assert!(matches!(err, OracleError::OracleTooLarge(_)));
    }
}
