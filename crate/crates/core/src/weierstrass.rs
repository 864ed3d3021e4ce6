//! Weierstrass preparation and division against distinguished polynomials.
//!
//! For a series `f` that is regular in a designated variable `X_r` (its
//! restriction to the `X_r`-axis is nonzero), [`prepare`] factors
//! `f = u * f_0` with `u` a unit and `f_0` a distinguished polynomial: monic
//! of degree `n` in `X_r` with lower coefficients in the maximal ideal of the
//! remaining-variables ring `S`. The pair is unique, so preparing at a higher
//! precision refines rather than changes the answer.
//!
//! The preparation is solved layer by layer along the total-degree filtration
//! of `S`. Grading `f = sum_m f^(m)` by `S`-degree, the layer-`m` equation is
//!
//! ```text
//! u^(m) X_r^n + u^(0) * sum_i a_i^(m) X_r^i  =  f^(m) - sum_{j=1}^{m-1} u^(j) (sum_i a_i^(m-j) X_r^i)
//! ```
//!
//! and `u^(0)` is a unit of `k[[X_r]]` with scalar coefficients, so
//! multiplying by its inverse splits the unknowns by `X_r`-degree: the
//! degrees below `n` are the new layers of the `a_i`, the rest is `u^(m)`.
//! Every layer is computed exactly from earlier ones, so no truncation noise
//! bleeds downward; a final back-multiplication check guards the result.
//!
//! [`reduce_mod`] is the companion division with remainder: series reduce
//! against a monic distinguished polynomial to a remainder of `X_r`-degree
//! below `deg f_0`, which is how low-degree nonvanishing certificates are
//! extracted.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::fields::FieldElem;
use crate::series::{ExpVec, SeriesRing, TruncatedSeries};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeierstrassError {
    #[error("series is not regular in X_{0} at this precision")]
    NotRegular(usize),
    #[error("preparation failed to stabilize: {0}")]
    Unstable(String),
    #[error(transparent)]
    Series(#[from] crate::series::SeriesError),
}

/// A monic polynomial `X_r^n + a_{n-1} X_r^{n-1} + ... + a_0` in the
/// designated variable, with each `a_i` a series in the remaining variables
/// and zero constant term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistinguishedPoly {
    ring: SeriesRing,
    var: usize,
    coeffs: Vec<TruncatedSeries>,
}

impl DistinguishedPoly {
    /// Assemble from the lower coefficients `a_0, ..., a_{n-1}`; the leading
    /// coefficient is implicitly 1. Panics if a coefficient involves the
    /// designated variable or has a nonzero constant term.
    pub fn new(ring: SeriesRing, var: usize, coeffs: Vec<TruncatedSeries>) -> DistinguishedPoly {
        for a in &coeffs {
            assert!(
                a.terms().all(|(e, _)| e.get(var) == 0),
                "coefficient involves the designated variable"
            );
            assert!(
                a.constant_term().is_zero(),
                "coefficient with nonzero constant term"
            );
        }
        DistinguishedPoly { ring, var, coeffs }
    }

    pub fn ring(&self) -> &SeriesRing {
        &self.ring
    }

    pub fn var(&self) -> usize {
        self.var
    }

    pub fn degree(&self) -> u32 {
        self.coeffs.len() as u32
    }

    /// The coefficient `a_i` (for `i < degree`).
    pub fn coeff(&self, i: usize) -> &TruncatedSeries {
        &self.coeffs[i]
    }

    pub fn to_series(&self) -> TruncatedSeries {
        let n = self.coeffs.len() as u32;
        let mut acc = self.ring.monomial(
            ExpVec::axis(self.ring.nvars(), self.var, n),
            self.ring.field().one(),
        );
        for (i, a) in self.coeffs.iter().enumerate() {
            let shifted = a.mul_monomial(
                &ExpVec::axis(self.ring.nvars(), self.var, i as u32),
                &self.ring.field().one(),
            );
            acc = &acc + &shifted;
        }
        acc
    }
}

/// The unique factorization `input = unit * distinguished` below `precision`.
#[derive(Debug, Clone)]
pub struct WeierstrassFactorization {
    pub unit: TruncatedSeries,
    pub distinguished: DistinguishedPoly,
    pub precision: u32,
}

/// Viewing `f = sum b_i X_r^i` with `b_i` in the remaining-variables ring
/// `S`, the least `n` with `b_n` a unit of `S` - equivalently the order of
/// vanishing of the `X_r`-axis restriction. `None` means "not regular at
/// this precision".
pub fn weierstrass_order(f: &TruncatedSeries, var: usize) -> Option<u32> {
    f.axis_restriction(var)
        .terms()
        .map(|(e, _)| e.get(var))
        .min()
}

fn add_into(slot: &mut Option<TruncatedSeries>, value: TruncatedSeries) {
    if value.is_zero() {
        return;
    }
    *slot = Some(match slot.take() {
        Some(cur) => &cur + &value,
        None => value,
    });
}

/// The layer solve described in the module docs. Returns the unit and the
/// distinguished coefficients `a_0, ..., a_{n-1}`.
fn prepare_layers(
    f: &TruncatedSeries,
    var: usize,
    n: u32,
    cap: usize,
) -> Result<(TruncatedSeries, Vec<TruncatedSeries>), WeierstrassError> {
    let ring = f.ring().clone();
    let field = ring.field();
    let target = f.precision();
    let nu = n as usize;

    // Homogeneous pieces of f: (S-degree m, X_r-degree d) -> series in S.
    let mut f_pieces: BTreeMap<(u32, usize), TruncatedSeries> = BTreeMap::new();
    for (e, c) in f.terms() {
        let d = e.get(var) as usize;
        let m = e.total_degree() - e.get(var);
        let mono = ring.monomial(e.with(var, 0), c.clone());
        match f_pieces.entry((m, d)) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(mono);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                let sum = slot.get().add(&mono)?;
                *slot.get_mut() = sum;
            }
        }
    }

    // Layer 0 of the unit: the axis restriction shifted down by X_r^n, a
    // scalar sequence with invertible constant term.
    let mut u0 = vec![field.zero(); cap];
    for (e, c) in f.axis_restriction(var).terms() {
        let d = e.get(var) as usize;
        if d >= nu && d - nu < cap {
            u0[d - nu] = c.clone();
        }
    }
    debug_assert!(!u0[0].is_zero(), "order n makes u0 a unit");
    let u0_support: Vec<(usize, FieldElem)> = u0
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.clone()))
        .collect();
    // v = u0^{-1} as a scalar sequence.
    let v0 = u0[0].inverse().expect("unit constant term");
    let mut v = vec![field.zero(); cap];
    v[0] = v0.clone();
    for e in 1..cap {
        let mut acc = field.zero();
        for (i, ui) in &u0_support {
            if *i >= 1 && *i <= e && !v[e - i].is_zero() {
                acc = acc.add(&ui.mul(&v[e - i]));
            }
        }
        v[e] = acc.neg().mul(&v0);
    }

    let mut a_pieces: Vec<BTreeMap<u32, TruncatedSeries>> = vec![BTreeMap::new(); nu];
    let mut u_pieces: BTreeMap<(u32, usize), TruncatedSeries> = BTreeMap::new();

    for m in 1..=target {
        // Reads descend by up to n X_r-degrees per layer, so only entries in
        // this band are exact; beyond it we refuse to store values (the
        // caller's verification widens `cap` when that loses real terms).
        let band = cap as i64 - nu as i64 * m as i64;
        if band < nu as i64 {
            break;
        }
        // RHS[d] = f^(m)[d] - sum_{i<n} sum_{j=1}^{m-1} u^(j)[d-i] a_i^(m-j)
        let mut rhs: Vec<Option<TruncatedSeries>> = vec![None; cap];
        for ((_, d), piece) in f_pieces.range((m, 0)..=(m, usize::MAX)) {
            add_into(&mut rhs[*d], piece.clone());
        }
        for ((j, d), u_piece) in &u_pieces {
            if *j >= m {
                continue;
            }
            for (i, a_map) in a_pieces.iter().enumerate() {
                if d + i >= cap {
                    continue;
                }
                if let Some(a_piece) = a_map.get(&(m - j)) {
                    add_into(&mut rhs[d + i], (u_piece * a_piece).neg());
                }
            }
        }
        // vr = v * RHS (scalar-series convolution in the X_r direction).
        let mut vr: Vec<Option<TruncatedSeries>> = vec![None; cap];
        for x in 0..cap {
            let Some(r) = &rhs[x] else { continue };
            for dd in x..cap {
                if !v[dd - x].is_zero() {
                    add_into(&mut vr[dd], r.scalar_mul(&v[dd - x]));
                }
            }
        }
        // X_r-degrees below n are the new layers of the a_i.
        for (i, a_map) in a_pieces.iter_mut().enumerate() {
            if let Some(piece) = &vr[i] {
                if !piece.is_zero() {
                    a_map.insert(m, piece.clone());
                }
            }
        }
        // The rest, shifted down by n and multiplied by u0, is u^(m).
        for (y, slot) in vr.iter().enumerate().skip(nu) {
            let Some(piece) = slot else { continue };
            for (idx, ui) in &u0_support {
                let d = y - nu + idx;
                if d as i64 > band {
                    continue;
                }
                let contrib = piece.scalar_mul(ui);
                if contrib.is_zero() {
                    continue;
                }
                match u_pieces.entry((m, d)) {
                    std::collections::btree_map::Entry::Vacant(slot) => {
                        slot.insert(contrib);
                    }
                    std::collections::btree_map::Entry::Occupied(mut slot) => {
                        let sum = slot.get() + &contrib;
                        if sum.is_zero() {
                            slot.remove();
                        } else {
                            *slot.get_mut() = sum;
                        }
                    }
                }
            }
        }
    }

    let mut unit = ring.zero();
    for (e, c) in &u0_support {
        unit = &unit + &ring.monomial(ExpVec::axis(ring.nvars(), var, *e as u32), c.clone());
    }
    for ((_, d), piece) in &u_pieces {
        unit =
            &unit + &piece.mul_monomial(&ExpVec::axis(ring.nvars(), var, *d as u32), &field.one());
    }
    let coeffs: Vec<TruncatedSeries> = a_pieces
        .into_iter()
        .map(|layers| {
            let mut acc = ring.zero();
            for piece in layers.values() {
                acc = &acc + piece;
            }
            acc
        })
        .collect();
    Ok((unit, coeffs))
}

/// Weierstrass preparation with respect to `X_var`: `f = unit * distinguished`
/// with the distinguished degree equal to [`weierstrass_order`], verified by
/// back-multiplication below the input's precision.
pub fn prepare(
    f: &TruncatedSeries,
    var: usize,
) -> Result<WeierstrassFactorization, WeierstrassError> {
    let n = weierstrass_order(f, var).ok_or(WeierstrassError::NotRegular(var))?;
    let ring = f.ring().clone();
    let target = f.precision();
    if n == 0 {
        // f is a unit; the distinguished part is the empty product.
        return Ok(WeierstrassFactorization {
            unit: f.clone(),
            distinguished: DistinguishedPoly::new(ring, var, Vec::new()),
            precision: target,
        });
    }
    // Deep dependency chains can reach X_r-degrees up to about n*target, but
    // they carry nonzero values only for inputs with long genuine unit tails.
    // Start with a small window and widen on a failed verification.
    let mut cap = target as usize + 2 * n as usize + 2;
    for _ in 0..4 {
        let (unit, coeffs) = prepare_layers(f, var, n, cap)?;
        let distinguished = DistinguishedPoly::new(ring.clone(), var, coeffs);
        let back = &unit * &distinguished.to_series();
        if back.truncated(target) == f.truncated(target) {
            return Ok(WeierstrassFactorization {
                unit,
                distinguished,
                precision: target,
            });
        }
        cap *= 2;
    }
    Err(WeierstrassError::Unstable(format!(
        "unit * distinguished failed to reproduce the input below precision {target}"
    )))
}

/// Remainder of `g` under classical monic long division in `X_r` by the
/// distinguished polynomial `d`; the result is congruent to `g` modulo `(d)`
/// and has `X_r`-degree below `deg d`.
pub fn reduce_mod(g: &TruncatedSeries, d: &DistinguishedPoly) -> TruncatedSeries {
    let var = d.var();
    let n = d.degree();
    let mut by_degree = g.coeffs_in_var(var);
    loop {
        let top = match by_degree.keys().next_back().copied() {
            Some(t) if t >= n => t,
            _ => break,
        };
        let lead = by_degree.remove(&top).expect("key just observed");
        if lead.is_zero() {
            continue;
        }
        // g -= lead * X_r^(top-n) * d  (the X_r^top terms cancel exactly).
        for i in 0..n {
            let delta = (&lead * d.coeff(i as usize)).neg();
            if delta.is_zero() {
                continue;
            }
            let slot = top - n + i;
            let entry = by_degree.entry(slot).or_insert_with(|| g.ring().zero());
            *entry = &*entry + &delta;
        }
    }
    TruncatedSeries::from_var_coeffs(g.ring(), var, &by_degree)
}
