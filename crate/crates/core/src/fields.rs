//! Exact arithmetic in the coefficient fields `F_p` and `F_p(t)`.
//!
//! Besides the four field operations this module carries the characteristic-p
//! structure that the normalization driver consumes:
//! - [`FieldElem::pth_root`]: membership in `k^p` with an explicit root,
//! - [`FieldElem::pbasis_decompose`]: the `p^e`-basis decomposition
//!   `c = sum_q d_q^(p^e) * t^q` over `F_p(t)`,
//! - [`FieldElem::twist_expansion`]: the Taylor coefficients of `c(t + u)`,
//!   which back the coefficient-field twist `t -> t + delta*X_1`.
//!
//! Elements of `F_p(t)` are kept in canonical form (monic denominator, gcd
//! reduced, zero is `0/1`), so equality of representations is field equality
//! and "nonzero" is decidable.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("division by zero field element")]
    DivisionByZero,
    #[error("p-basis decomposition is only defined over Fp(t)")]
    NoPBasis,
    #[error("no generator: Fp has an empty p-basis")]
    NoGenerator,
    #[error("invalid field element at offset {offset}: {reason}")]
    Parse { offset: usize, reason: String },
}

/// Which of the two supported coefficient fields a descriptor denotes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    /// The prime field `F_p`.
    PrimeField,
    /// The rational function field `F_p(t)` in one transcendental `t`.
    RationalFunctionField,
}

/// A coefficient field `k`, either `F_p` or `F_p(t)` for a prime `p`.
///
/// The descriptor is tiny and `Copy`; every [`FieldElem`] carries one so that
/// elements are self-describing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldDescriptor {
    characteristic: u64,
    kind: FieldKind,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).is_some_and(|sq| sq <= n) {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldDescriptor {
    pub fn new(characteristic: u64, kind: FieldKind) -> Result<Self, FieldError> {
        if !is_prime(characteristic) {
            return Err(FieldError::NotPrime(characteristic));
        }
        Ok(FieldDescriptor {
            characteristic,
            kind,
        })
    }

    pub fn prime_field(p: u64) -> Result<Self, FieldError> {
        Self::new(p, FieldKind::PrimeField)
    }

    pub fn rational_function_field(p: u64) -> Result<Self, FieldError> {
        Self::new(p, FieldKind::RationalFunctionField)
    }

    pub fn characteristic(&self) -> u64 {
        self.characteristic
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    /// The p-basis of `k` over `F_p`: empty for `F_p`, the single generator
    /// `t` for `F_p(t)`.
    pub fn p_basis(&self) -> Vec<String> {
        match self.kind {
            FieldKind::PrimeField => vec![],
            FieldKind::RationalFunctionField => vec!["t".to_string()],
        }
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem::zero(*self)
    }

    pub fn one(&self) -> FieldElem {
        FieldElem::one(*self)
    }

    pub fn from_integer(&self, n: i64) -> FieldElem {
        FieldElem::from_integer(*self, n)
    }

    /// The p-basis generator `t`; an error over `F_p`.
    pub fn generator(&self) -> Result<FieldElem, FieldError> {
        match self.kind {
            FieldKind::PrimeField => Err(FieldError::NoGenerator),
            FieldKind::RationalFunctionField => Ok(FieldElem::from_t_coeffs(*self, &[0, 1])),
        }
    }

    pub fn parse(&self, text: &str) -> Result<FieldElem, FieldError> {
        parse_elem(*self, text)
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FieldKind::PrimeField => write!(f, "F_{}", self.characteristic),
            FieldKind::RationalFunctionField => write!(f, "F_{}(t)", self.characteristic),
        }
    }
}

// ---------------------------------------------------------------------------
// Dense univariate polynomials over F_p (the building block of F_p(t)).
// ---------------------------------------------------------------------------

/// Little-endian coefficient vector, no trailing zeros, entries in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
struct FpPoly(Vec<u64>);

fn mod_add(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

fn mod_sub(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

fn mod_mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, p);
        }
        base = mod_mul(base, base, p);
        exp >>= 1;
    }
    acc
}

fn mod_inv(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    mod_pow(a, p - 2, p)
}

/// `binom(n, k) mod p` by Lucas' theorem; each base-p digit is handled with
/// the multiplicative formula, so no factorial tables are required.
fn binom_mod_p(mut n: u64, mut k: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while k > 0 || n > 0 {
        let (nd, kd) = (n % p, k % p);
        if kd > nd {
            return 0;
        }
        let mut digit = 1u64;
        for i in 0..kd {
            digit = mod_mul(digit, mod_sub(nd, i, p), p);
            digit = mod_mul(digit, mod_inv(i + 1, p), p);
        }
        acc = mod_mul(acc, digit, p);
        n /= p;
        k /= p;
    }
    acc
}

impl FpPoly {
    fn trim(mut v: Vec<u64>) -> FpPoly {
        while v.last() == Some(&0) {
            v.pop();
        }
        FpPoly(v)
    }

    fn zero() -> FpPoly {
        FpPoly(Vec::new())
    }

    fn one() -> FpPoly {
        FpPoly(vec![1])
    }

    fn constant(c: u64, p: u64) -> FpPoly {
        FpPoly::trim(vec![c % p])
    }

    fn from_coeffs(coeffs: &[u64], p: u64) -> FpPoly {
        FpPoly::trim(coeffs.iter().map(|&c| c % p).collect())
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        debug_assert!(!self.is_zero());
        self.0.len() - 1
    }

    fn leading(&self) -> u64 {
        *self
            .0
            .last()
            .expect("leading coefficient of zero polynomial")
    }

    fn add(&self, other: &FpPoly, p: u64) -> FpPoly {
        let n = self.0.len().max(other.0.len());
        let mut out = vec![0u64; n];
        for (i, slot) in out.iter_mut().enumerate() {
            let a = self.0.get(i).copied().unwrap_or(0);
            let b = other.0.get(i).copied().unwrap_or(0);
            *slot = mod_add(a, b, p);
        }
        FpPoly::trim(out)
    }

    fn sub(&self, other: &FpPoly, p: u64) -> FpPoly {
        let n = self.0.len().max(other.0.len());
        let mut out = vec![0u64; n];
        for (i, slot) in out.iter_mut().enumerate() {
            let a = self.0.get(i).copied().unwrap_or(0);
            let b = other.0.get(i).copied().unwrap_or(0);
            *slot = mod_sub(a, b, p);
        }
        FpPoly::trim(out)
    }

    fn mul(&self, other: &FpPoly, p: u64) -> FpPoly {
        if self.is_zero() || other.is_zero() {
            return FpPoly::zero();
        }
        let mut out = vec![0u64; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.0.iter().enumerate() {
                out[i + j] = mod_add(out[i + j], mod_mul(a, b, p), p);
            }
        }
        FpPoly::trim(out)
    }

    fn scale(&self, c: u64, p: u64) -> FpPoly {
        FpPoly::trim(self.0.iter().map(|&a| mod_mul(a, c, p)).collect())
    }

    fn rem(&self, div: &FpPoly, p: u64) -> FpPoly {
        debug_assert!(!div.is_zero());
        let mut r = self.0.clone();
        let dd = div.degree();
        let lead_inv = mod_inv(div.leading(), p);
        while r.len() > dd {
            let q = mod_mul(*r.last().unwrap(), lead_inv, p);
            let shift = r.len() - 1 - dd;
            if q != 0 {
                for (i, &dc) in div.0.iter().enumerate() {
                    r[shift + i] = mod_sub(r[shift + i], mod_mul(q, dc, p), p);
                }
            }
            r.pop();
            while r.last() == Some(&0) {
                r.pop();
            }
            if r.len() <= dd {
                break;
            }
        }
        FpPoly::trim(r)
    }

    fn gcd(&self, other: &FpPoly, p: u64) -> FpPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b, p);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.scale(mod_inv(a.leading(), p), p)
        }
    }

    fn exact_div(&self, div: &FpPoly, p: u64) -> FpPoly {
        // Used only when divisibility is known (after gcd reduction).
        if self.is_zero() {
            return FpPoly::zero();
        }
        let mut r = self.0.clone();
        let dd = div.degree();
        let lead_inv = mod_inv(div.leading(), p);
        let mut q = vec![0u64; r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = mod_mul(r[k + dd], lead_inv, p);
            q[k] = c;
            if c != 0 {
                for (i, &dc) in div.0.iter().enumerate() {
                    r[k + i] = mod_sub(r[k + i], mod_mul(c, dc, p), p);
                }
            }
        }
        debug_assert!(r.iter().all(|&c| c == 0), "exact_div with remainder");
        FpPoly::trim(q)
    }

    /// All t-exponents of nonzero coefficients divisible by `m`?
    fn exponents_divisible(&self, m: u64) -> bool {
        self.0
            .iter()
            .enumerate()
            .all(|(i, &c)| c == 0 || (i as u64).is_multiple_of(m))
    }

    /// The `m`-th root when every exponent is divisible by `m`; coefficients
    /// are fixed by Frobenius over `F_p`, so only exponents shrink.
    fn root_by_exponents(&self, m: u64) -> FpPoly {
        let mut out = vec![0u64; self.0.len() / m as usize + 1];
        for (i, &c) in self.0.iter().enumerate() {
            if c != 0 {
                out[i / m as usize] = c;
            }
        }
        FpPoly::trim(out)
    }

    fn pow(&self, mut e: u64, p: u64) -> FpPoly {
        let mut acc = FpPoly::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, p);
            }
            base = base.mul(&base, p);
            e >>= 1;
        }
        acc
    }

    fn derivative(&self, p: u64) -> FpPoly {
        if self.0.len() <= 1 {
            return FpPoly::zero();
        }
        let mut out = vec![0u64; self.0.len() - 1];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = mod_mul((i as u64 + 1) % p, self.0[i + 1], p);
        }
        FpPoly::trim(out)
    }

    /// The `m`-th Hasse derivative: `H^m(t^i) = binom(i, m) t^(i-m)`.
    /// `sum_m H^m(f)(t) u^m = f(t + u)` in every characteristic.
    fn hasse(&self, m: usize, p: u64) -> FpPoly {
        if self.0.len() <= m {
            return FpPoly::zero();
        }
        let mut out = vec![0u64; self.0.len() - m];
        for (i, slot) in out.iter_mut().enumerate() {
            let src = i + m;
            let b = binom_mod_p(src as u64, m as u64, p);
            *slot = mod_mul(b, self.0[src], p);
        }
        FpPoly::trim(out)
    }
}

// ---------------------------------------------------------------------------
// Field elements.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Repr {
    Prime(u64),
    Ratio { num: FpPoly, den: FpPoly },
}

/// An element of `F_p` or `F_p(t)` in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    desc: FieldDescriptor,
    repr: Repr,
}

impl FieldElem {
    fn from_ratio(desc: FieldDescriptor, num: FpPoly, den: FpPoly) -> FieldElem {
        let p = desc.characteristic;
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return FieldElem {
                desc,
                repr: Repr::Ratio {
                    num: FpPoly::zero(),
                    den: FpPoly::one(),
                },
            };
        }
        let g = num.gcd(&den, p);
        let mut num = num.exact_div(&g, p);
        let mut den = den.exact_div(&g, p);
        let lead_inv = mod_inv(den.leading(), p);
        num = num.scale(lead_inv, p);
        den = den.scale(lead_inv, p);
        FieldElem {
            desc,
            repr: Repr::Ratio { num, den },
        }
    }

    pub fn zero(desc: FieldDescriptor) -> FieldElem {
        match desc.kind {
            FieldKind::PrimeField => FieldElem {
                desc,
                repr: Repr::Prime(0),
            },
            FieldKind::RationalFunctionField => FieldElem {
                desc,
                repr: Repr::Ratio {
                    num: FpPoly::zero(),
                    den: FpPoly::one(),
                },
            },
        }
    }

    pub fn one(desc: FieldDescriptor) -> FieldElem {
        FieldElem::from_integer(desc, 1)
    }

    pub fn from_integer(desc: FieldDescriptor, n: i64) -> FieldElem {
        let p = desc.characteristic;
        let r = n.rem_euclid(p as i64) as u64;
        match desc.kind {
            FieldKind::PrimeField => FieldElem {
                desc,
                repr: Repr::Prime(r),
            },
            FieldKind::RationalFunctionField => FieldElem {
                desc,
                repr: Repr::Ratio {
                    num: FpPoly::constant(r, p),
                    den: FpPoly::one(),
                },
            },
        }
    }

    /// Build the polynomial `sum coeffs[i] * t^i` in `F_p(t)`; over `F_p`
    /// only the constant coefficient may be nonzero.
    pub fn from_t_coeffs(desc: FieldDescriptor, coeffs: &[u64]) -> FieldElem {
        match desc.kind {
            FieldKind::PrimeField => {
                assert!(
                    coeffs.iter().skip(1).all(|&c| c % desc.characteristic == 0),
                    "t-coefficients in a prime field"
                );
                FieldElem::from_integer(desc, coeffs.first().copied().unwrap_or(0) as i64)
            }
            FieldKind::RationalFunctionField => FieldElem {
                desc,
                repr: Repr::Ratio {
                    num: FpPoly::from_coeffs(coeffs, desc.characteristic),
                    den: FpPoly::one(),
                },
            },
        }
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        self.desc
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Prime(r) => *r == 0,
            Repr::Ratio { num, .. } => num.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Prime(r) => *r == 1,
            Repr::Ratio { num, den } => num == &FpPoly::one() && den == &FpPoly::one(),
        }
    }

    /// Is the element a polynomial in `t` (denominator 1)? Always true over `F_p`.
    pub fn is_polynomial(&self) -> bool {
        match &self.repr {
            Repr::Prime(_) => true,
            Repr::Ratio { den, .. } => den == &FpPoly::one(),
        }
    }

    fn assert_same(&self, other: &FieldElem) {
        assert_eq!(
            self.desc, other.desc,
            "mixed elements of different coefficient fields"
        );
    }

    pub fn add(&self, other: &FieldElem) -> FieldElem {
        self.assert_same(other);
        let p = self.desc.characteristic;
        match (&self.repr, &other.repr) {
            (Repr::Prime(a), Repr::Prime(b)) => FieldElem {
                desc: self.desc,
                repr: Repr::Prime(mod_add(*a, *b, p)),
            },
            (Repr::Ratio { num: n1, den: d1 }, Repr::Ratio { num: n2, den: d2 }) => {
                let num = n1.mul(d2, p).add(&n2.mul(d1, p), p);
                let den = d1.mul(d2, p);
                FieldElem::from_ratio(self.desc, num, den)
            }
            _ => unreachable!("kind mismatch guarded by descriptor equality"),
        }
    }

    pub fn sub(&self, other: &FieldElem) -> FieldElem {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FieldElem {
        let p = self.desc.characteristic;
        match &self.repr {
            Repr::Prime(a) => FieldElem {
                desc: self.desc,
                repr: Repr::Prime(mod_sub(0, *a, p)),
            },
            Repr::Ratio { num, den } => FieldElem {
                desc: self.desc,
                repr: Repr::Ratio {
                    num: FpPoly::zero().sub(num, p),
                    den: den.clone(),
                },
            },
        }
    }

    pub fn mul(&self, other: &FieldElem) -> FieldElem {
        self.assert_same(other);
        let p = self.desc.characteristic;
        match (&self.repr, &other.repr) {
            (Repr::Prime(a), Repr::Prime(b)) => FieldElem {
                desc: self.desc,
                repr: Repr::Prime(mod_mul(*a, *b, p)),
            },
            (Repr::Ratio { num: n1, den: d1 }, Repr::Ratio { num: n2, den: d2 }) => {
                FieldElem::from_ratio(self.desc, n1.mul(n2, p), d1.mul(d2, p))
            }
            _ => unreachable!("kind mismatch guarded by descriptor equality"),
        }
    }

    pub fn inverse(&self) -> Result<FieldElem, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let p = self.desc.characteristic;
        Ok(match &self.repr {
            Repr::Prime(a) => FieldElem {
                desc: self.desc,
                repr: Repr::Prime(mod_inv(*a, p)),
            },
            Repr::Ratio { num, den } => FieldElem::from_ratio(self.desc, den.clone(), num.clone()),
        })
    }

    pub fn div(&self, other: &FieldElem) -> Result<FieldElem, FieldError> {
        Ok(self.mul(&other.inverse()?))
    }

    pub fn pow(&self, e: u64) -> FieldElem {
        let p = self.desc.characteristic;
        match &self.repr {
            Repr::Prime(a) => FieldElem {
                desc: self.desc,
                repr: Repr::Prime(mod_pow(*a, e, p)),
            },
            Repr::Ratio { num, den } => FieldElem {
                desc: self.desc,
                repr: Repr::Ratio {
                    num: num.pow(e, p),
                    den: den.pow(e, p),
                },
            },
        }
    }

    /// The p-th root when the element lies in `k^p`, `None` otherwise.
    ///
    /// Over `F_p` the Frobenius is bijective, so a root always exists (and
    /// equals the element itself). Over `F_p(t)` an element is a p-th power
    /// exactly when all t-exponents of its canonical numerator and
    /// denominator are divisible by `p`.
    pub fn pth_root(&self) -> Option<FieldElem> {
        let p = self.desc.characteristic;
        match &self.repr {
            Repr::Prime(a) => Some(FieldElem {
                desc: self.desc,
                repr: Repr::Prime(*a),
            }),
            Repr::Ratio { num, den } => {
                if num.exponents_divisible(p) && den.exponents_divisible(p) {
                    Some(FieldElem {
                        desc: self.desc,
                        repr: Repr::Ratio {
                            num: num.root_by_exponents(p),
                            den: den.root_by_exponents(p),
                        },
                    })
                } else {
                    None
                }
            }
        }
    }

    /// Write `c = sum_q d_q^(p^e) * t^q` over the basis `t^q`, `0 <= q < p^e`,
    /// of `k` as a `k^(p^e)`-vector space. Absent map entries mean `d_q = 0`.
    ///
    /// The denominator is cleared by multiplying numerator and denominator by
    /// `den^(p^e - 1)`, making the denominator a `p^e`-th power; the numerator
    /// is then split by exponent residue mod `p^e`.
    pub fn pbasis_decompose(&self, e: u32) -> Result<BTreeMap<u64, FieldElem>, FieldError> {
        if self.desc.kind != FieldKind::RationalFunctionField {
            return Err(FieldError::NoPBasis);
        }
        assert!(e >= 1, "pbasis_decompose requires e >= 1");
        let p = self.desc.characteristic;
        let q = p
            .checked_pow(e)
            .expect("p^e overflows a machine word; decompose at smaller e");
        let (num, den) = match &self.repr {
            Repr::Ratio { num, den } => (num, den),
            Repr::Prime(_) => unreachable!(),
        };
        let mut out = BTreeMap::new();
        if num.is_zero() {
            return Ok(out);
        }
        // c = num * den^(q-1) / den^q.
        let cleared = num.mul(&den.pow(q - 1, p), p);
        for residue in 0..q {
            let mut part = Vec::new();
            let mut i = residue as usize;
            while i < cleared.0.len() {
                part.push(cleared.0[i]);
                i += q as usize;
            }
            let w = FpPoly::trim(part);
            if !w.is_zero() {
                let d = FieldElem::from_ratio(self.desc, w, den.clone());
                out.insert(residue, d);
            }
        }
        Ok(out)
    }

    /// Recompose a decomposition map into the original element (test helper
    /// for the round-trip property).
    pub fn pbasis_recompose(
        desc: FieldDescriptor,
        e: u32,
        parts: &BTreeMap<u64, FieldElem>,
    ) -> FieldElem {
        let q = desc.characteristic.pow(e);
        let t = desc.generator().expect("recompose over Fp(t)");
        let mut acc = desc.zero();
        for (&residue, d) in parts {
            let term = d.pow(q).mul(&t.pow(residue));
            acc = acc.add(&term);
        }
        acc
    }

    /// The derivative `dc/dt`; zero over `F_p`. Nonzero exactly when the
    /// element lies outside `k^p`.
    pub fn d_dt(&self) -> FieldElem {
        let p = self.desc.characteristic;
        match &self.repr {
            Repr::Prime(_) => self.desc.zero(),
            Repr::Ratio { num, den } => {
                // (n/d)' = (n'd - nd') / d^2
                let n1 = num.derivative(p).mul(den, p);
                let n2 = num.mul(&den.derivative(p), p);
                FieldElem::from_ratio(self.desc, n1.sub(&n2, p), den.mul(den, p))
            }
        }
    }

    /// Taylor coefficients of `c(t + u)` as two polynomial lists:
    /// `c(t + u) = (sum_m nums[m] u^m) / (sum_m dens[m] u^m)`,
    /// where `nums[m] = H^m(num)(t) * delta^m` with `u = delta * X_1` already
    /// folded in, and likewise for `dens`. Over `F_p` this is `([c], [1])`.
    pub fn twist_expansion(&self, delta: &FieldElem) -> (Vec<FieldElem>, Vec<FieldElem>) {
        self.assert_same(delta);
        match &self.repr {
            Repr::Prime(_) => (vec![self.clone()], vec![self.desc.one()]),
            Repr::Ratio { num, den } => {
                let p = self.desc.characteristic;
                let expand = |poly: &FpPoly| -> Vec<FieldElem> {
                    let deg = if poly.is_zero() { 0 } else { poly.degree() };
                    let mut dpow = self.desc.one();
                    let mut out = Vec::with_capacity(deg + 1);
                    for m in 0..=deg {
                        let h = poly.hasse(m, p);
                        out.push(
                            FieldElem {
                                desc: self.desc,
                                repr: Repr::Ratio {
                                    num: h,
                                    den: FpPoly::one(),
                                },
                            }
                            .mul(&dpow),
                        );
                        dpow = dpow.mul(delta);
                    }
                    while out.last().is_some_and(|c| c.is_zero()) {
                        out.pop();
                    }
                    out
                };
                (expand(num), expand(den))
            }
        }
    }
}

impl std::ops::Add for &FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: &FieldElem) -> FieldElem {
        FieldElem::add(self, rhs)
    }
}

impl std::ops::Sub for &FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: &FieldElem) -> FieldElem {
        FieldElem::sub(self, rhs)
    }
}

impl std::ops::Mul for &FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: &FieldElem) -> FieldElem {
        FieldElem::mul(self, rhs)
    }
}

impl std::ops::Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem::neg(self)
    }
}

// ---------------------------------------------------------------------------
// Serialization: prime residues as decimals, rational functions as "num/den"
// with polynomials "c0+c1*t+c2*t^2+..." (zero terms omitted, "/1" omitted).
// ---------------------------------------------------------------------------

fn fmt_poly(poly: &FpPoly, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if poly.is_zero() {
        return write!(f, "0");
    }
    let mut first = true;
    for (i, &c) in poly.0.iter().enumerate() {
        if c == 0 {
            continue;
        }
        if !first {
            write!(f, "+")?;
        }
        first = false;
        match (i, c) {
            (0, _) => write!(f, "{c}")?,
            (1, 1) => write!(f, "t")?,
            (1, _) => write!(f, "{c}*t")?,
            (_, 1) => write!(f, "t^{i}")?,
            (_, _) => write!(f, "{c}*t^{i}")?,
        }
    }
    Ok(())
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Prime(r) => write!(f, "{r}"),
            Repr::Ratio { num, den } => {
                fmt_poly(num, f)?;
                if den != &FpPoly::one() {
                    write!(f, "/")?;
                    fmt_poly(den, f)?;
                }
                Ok(())
            }
        }
    }
}

struct ElemParser<'a> {
    bytes: &'a [u8],
    pos: usize,
    p: u64,
}

impl<'a> ElemParser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn err(&self, reason: &str) -> FieldError {
        FieldError::Parse {
            offset: self.pos,
            reason: reason.to_string(),
        }
    }

    fn integer(&mut self) -> Result<u64, FieldError> {
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
            .parse::<u64>()
            .map_err(|_| self.err("integer out of range"))
    }

    /// term := integer ['*'] ['t' ['^' integer]] | 't' ['^' integer]
    fn term(&mut self) -> Result<FpPoly, FieldError> {
        let mut coeff = 1u64 % self.p.max(2);
        let mut saw_coeff = false;
        if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            coeff = self.integer()? % self.p;
            saw_coeff = true;
            if self.peek() == Some(b'*') {
                self.pos += 1;
            }
        }
        if self.peek() == Some(b't') {
            self.pos += 1;
            let mut exp = 1usize;
            if self.peek() == Some(b'^') {
                self.pos += 1;
                exp = self.integer()? as usize;
            }
            let mut v = vec![0u64; exp + 1];
            v[exp] = coeff % self.p;
            Ok(FpPoly::trim(v))
        } else if saw_coeff {
            Ok(FpPoly::constant(coeff, self.p))
        } else {
            Err(self.err("expected a coefficient or `t`"))
        }
    }

    /// poly := ['-'] term (('+'|'-') term)*
    fn poly(&mut self) -> Result<FpPoly, FieldError> {
        let mut negate = false;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            negate = true;
        }
        let mut acc = self.term()?;
        if negate {
            acc = FpPoly::zero().sub(&acc, self.p);
        }
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t, self.p);
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.sub(&t, self.p);
                }
                _ => break,
            }
        }
        Ok(acc)
    }
}

fn parse_elem(desc: FieldDescriptor, text: &str) -> Result<FieldElem, FieldError> {
    let p = desc.characteristic;
    match desc.kind {
        FieldKind::PrimeField => {
            let trimmed = text.trim();
            let (negate, digits) = match trimmed.strip_prefix('-') {
                Some(rest) => (true, rest.trim()),
                None => (false, trimmed),
            };
            let v: u64 = digits.parse().map_err(|_| FieldError::Parse {
                offset: 0,
                reason: format!("`{trimmed}` is not a residue"),
            })?;
            let r = v % p;
            Ok(FieldElem::from_integer(
                desc,
                if negate { -(r as i64) } else { r as i64 },
            ))
        }
        FieldKind::RationalFunctionField => {
            let (num_text, den_text) = match text.find('/') {
                Some(i) => (&text[..i], Some(&text[i + 1..])),
                None => (text, None),
            };
            let parse_poly = |s: &str| -> Result<FpPoly, FieldError> {
                let mut parser = ElemParser {
                    bytes: s.as_bytes(),
                    pos: 0,
                    p,
                };
                let poly = parser.poly()?;
                parser.skip_ws();
                if parser.pos != parser.bytes.len() {
                    return Err(parser.err("trailing input"));
                }
                Ok(poly)
            };
            let num = parse_poly(num_text)?;
            let den = match den_text {
                Some(s) => {
                    let d = parse_poly(s)?;
                    if d.is_zero() {
                        return Err(FieldError::DivisionByZero);
                    }
                    d
                }
                None => FpPoly::one(),
            };
            Ok(FieldElem::from_ratio(desc, num, den))
        }
    }
}
