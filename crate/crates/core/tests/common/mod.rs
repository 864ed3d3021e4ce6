//! Shared helpers for the integration suites: ring construction and
//! deterministic random polynomial generation on top of `oracle::gen::Rng64`.
// each test target compiles this module separately and uses its own subset
#![allow(dead_code)]

use cohen_gabber::oracle::gen::Rng64;
use cohen_gabber::{ExpVec, FieldDescriptor, SeriesRing, TruncatedSeries};

pub fn ring(p: u64, rational: bool, nvars: usize, prec: u32) -> SeriesRing {
    let field = if rational {
        FieldDescriptor::rational_function_field(p).unwrap()
    } else {
        FieldDescriptor::prime_field(p).unwrap()
    };
    let names: Vec<String> = ["X", "Y", "Z", "W"][..nvars]
        .iter()
        .map(|s| s.to_string())
        .collect();
    SeriesRing::new(field, nvars, prec, Some(names)).unwrap()
}

/// A random polynomial with per-variable exponents below `max_exp` and at
/// most `max_terms` terms.
pub fn random_series(
    rng: &mut Rng64,
    ring: &SeriesRing,
    max_exp: u32,
    max_terms: u32,
) -> TruncatedSeries {
    let mut acc = ring.zero();
    let terms = 1 + rng.below(max_terms as u64) as usize;
    for _ in 0..terms {
        let exps: Vec<u32> = (0..ring.nvars())
            .map(|_| rng.below(max_exp as u64 + 1) as u32)
            .collect();
        let c = rng.elem(ring.field());
        acc = acc
            .add(&ring.monomial(ExpVec::new(exps), c))
            .expect("same ring");
    }
    acc
}

pub fn random_nonzero_series(
    rng: &mut Rng64,
    ring: &SeriesRing,
    max_exp: u32,
    max_terms: u32,
) -> TruncatedSeries {
    loop {
        let f = random_series(rng, ring, max_exp, max_terms);
        if !f.is_zero() {
            return f;
        }
    }
}

/// A random unit: a chosen nonzero constant term plus a few higher terms.
pub fn random_unit(rng: &mut Rng64, ring: &SeriesRing, max_exp: u32) -> TruncatedSeries {
    let noise = random_series(rng, ring, max_exp, 4);
    let recentered = noise
        .sub(&ring.constant(noise.constant_term()))
        .expect("same ring");
    recentered
        .add(&ring.constant(rng.nonzero_elem(ring.field())))
        .expect("same ring")
}

/// A random distinguished polynomial of the given degree in `var`, with
/// maximal-ideal coefficients of bounded exponent.
pub fn random_distinguished(
    rng: &mut Rng64,
    ring: &SeriesRing,
    var: usize,
    degree: u32,
    coeff_exp: u32,
) -> TruncatedSeries {
    let mut acc = ring.monomial(ExpVec::axis(ring.nvars(), var, degree), ring.field().one());
    for i in 0..degree {
        // coefficient in the maximal ideal of the remaining variables
        let mut coeff = ring.zero();
        let terms = rng.below(3) + 1;
        for _ in 0..terms {
            let exps: Vec<u32> = (0..ring.nvars())
                .map(|v| {
                    if v == var {
                        0
                    } else {
                        rng.below(coeff_exp as u64) as u32 + 1
                    }
                })
                .collect();
            coeff = coeff
                .add(&ring.monomial(ExpVec::new(exps), rng.elem(ring.field())))
                .expect("same ring");
        }
        acc = acc
            .add(&coeff.mul_monomial(&ExpVec::axis(ring.nvars(), var, i), &ring.field().one()))
            .expect("same ring");
    }
    acc
}
