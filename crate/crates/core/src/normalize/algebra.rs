//! Polynomial coprimality checks backing validation.
//!
//! Two polynomial factors are checked for a common divisor through the
//! resultant with respect to a shared variable (preferring the last one): the
//! Sylvester determinant is computed exactly in a scratch ring whose
//! precision exceeds every intermediate degree, with a memoized minor
//! expansion so no division is needed. A vanishing resultant flags the pair.
//! A common factor free of the chosen variable is invisible to this check;
//! factor primality is the caller's attestation, this is a cheap screen.

use std::collections::HashMap;

use crate::series::{SeriesRing, TruncatedSeries};

use super::NormalizeError;

/// Largest Sylvester matrix we are willing to expand.
const MAX_SYLVESTER: usize = 16;

fn degree_in(f: &TruncatedSeries, var: usize) -> u32 {
    f.terms().map(|(e, _)| e.get(var)).max().unwrap_or(0)
}

/// Memoized first-row minor expansion over the unmasked columns.
fn determinant(
    mat: &[Vec<TruncatedSeries>],
    ring: &SeriesRing,
    mask: u64,
    memo: &mut HashMap<u64, TruncatedSeries>,
) -> TruncatedSeries {
    let n = mat.len();
    let row = mask.count_ones() as usize;
    if row == n {
        return ring.one();
    }
    if let Some(hit) = memo.get(&mask) {
        return hit.clone();
    }
    let mut acc = ring.zero();
    let mut position = 0u32;
    for (col, entry) in mat[row].iter().enumerate() {
        if mask & (1 << col) != 0 {
            continue;
        }
        if !entry.is_zero() {
            let sub = determinant(mat, ring, mask | (1 << col), memo);
            let term = entry * &sub;
            acc = if position.is_multiple_of(2) {
                &acc + &term
            } else {
                &acc - &term
            };
        }
        position += 1;
    }
    memo.insert(mask, acc.clone());
    acc
}

/// The resultant of `f` and `g` with respect to `var`, computed exactly.
/// Both must have positive degree in `var`.
pub(crate) fn resultant(
    f: &TruncatedSeries,
    g: &TruncatedSeries,
    var: usize,
) -> Result<TruncatedSeries, NormalizeError> {
    let m = degree_in(f, var) as usize;
    let n = degree_in(g, var) as usize;
    assert!(m >= 1 && n >= 1, "resultant needs positive degrees");
    let size = m + n;
    if size > MAX_SYLVESTER {
        return Err(NormalizeError::ValidationTooLarge(format!(
            "Sylvester matrix of size {size}"
        )));
    }
    // A scratch ring big enough that nothing truncates: entries have total
    // degree at most D, minors multiply at most `size` of them.
    let d = f.max_degree().max(g.max_degree());
    let scratch = SeriesRing::new(
        f.ring().field(),
        f.ring().nvars(),
        (size as u32) * d.max(1) + 2,
        Some(f.ring().var_names().to_vec()),
    )
    .expect("valid scratch ring");
    let lift = |h: &TruncatedSeries| -> Result<Vec<TruncatedSeries>, NormalizeError> {
        let embedded = h.re_embed(&scratch)?;
        let deg = degree_in(h, var);
        let by = embedded.coeffs_in_var(var);
        // descending coefficient list c_deg, ..., c_0
        Ok((0..=deg)
            .rev()
            .map(|i| by.get(&i).cloned().unwrap_or_else(|| scratch.zero()))
            .collect())
    };
    let fc = lift(f)?;
    let gc = lift(g)?;
    let mut mat = vec![vec![scratch.zero(); size]; size];
    for i in 0..n {
        for (k, c) in fc.iter().enumerate() {
            mat[i][i + k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in gc.iter().enumerate() {
            mat[n + i][i + k] = c.clone();
        }
    }
    let mut memo = HashMap::new();
    Ok(determinant(&mat, &scratch, 0, &mut memo))
}

/// Screen every pair of factors for an obvious common divisor.
pub(crate) fn pairwise_coprime(factors: &[TruncatedSeries]) -> Result<(), NormalizeError> {
    let nvars = match factors.first() {
        Some(f) => f.ring().nvars(),
        None => return Ok(()),
    };
    for i in 0..factors.len() {
        for j in i + 1..factors.len() {
            let shared = (0..nvars)
                .rev()
                .find(|&v| degree_in(&factors[i], v) >= 1 && degree_in(&factors[j], v) >= 1);
            let Some(var) = shared else { continue };
            let res = resultant(&factors[i], &factors[j], var)?;
            if res.is_zero() {
                return Err(NormalizeError::NotCoprime { i, j });
            }
        }
    }
    Ok(())
}
