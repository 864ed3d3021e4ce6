//! Preparation laws on random instances: `unit * distinguished` round trips,
//! uniqueness (termwise recovery of known cofactors and agreement across
//! precisions), degree = order, and division-with-remainder consistency.

mod common;

use cohen_gabber::oracle::gen::Rng64;
use cohen_gabber::{prepare, reduce_mod, weierstrass_order};
use common::{random_distinguished, random_series, random_unit, ring};

#[test]
fn prepare_recovers_random_cofactors() {
    for p in [2u64, 3, 5] {
        let r = ring(p, false, 2, 24);
        let mut rng = Rng64::new(2024 + p);
        for _ in 0..80 {
            let unit = random_unit(&mut rng, &r, 4);
            let degree = 1 + rng.below(3) as u32;
            let dist = random_distinguished(&mut rng, &r, 1, degree, 4);
            let f = &unit * &dist;
            assert_eq!(weierstrass_order(&f, 1), Some(degree));
            let fac = prepare(&f, 1).unwrap();
            assert_eq!(fac.distinguished.degree(), degree, "degree equals order");
            assert_eq!(fac.distinguished.to_series(), dist, "uniqueness: cofactor");
            assert_eq!(fac.unit, unit, "uniqueness: unit");
        }
    }
}

#[test]
fn prepare_round_trips_on_nonsplit_inputs() {
    // inputs that are not given as products: multiply back and compare
    // (prime fields keep the deep unit tails cheap to expand exactly)
    for p in [2u64, 3] {
        let r = ring(p, false, 2, 20);
        let mut rng = Rng64::new(31 + p);
        let mut checked = 0;
        while checked < 60 {
            let f = random_series(&mut rng, &r, 4, 6);
            let f = f.sub(&r.constant(f.constant_term())).unwrap();
            if weierstrass_order(&f, 1).is_none() || f.is_zero() {
                continue;
            }
            let fac = prepare(&f, 1).unwrap();
            let back = &fac.unit * &fac.distinguished.to_series();
            assert_eq!(back, f, "unit * distinguished == input below precision");
            checked += 1;
        }
    }
}

#[test]
fn precision_refinement_agrees_on_overlap() {
    let r24 = ring(2, true, 2, 24);
    let r48 = ring(2, true, 2, 48);
    let mut rng = Rng64::new(404);
    for _ in 0..40 {
        let unit = random_unit(&mut rng, &r24, 4);
        let degree = 1 + rng.below(3) as u32;
        let dist = random_distinguished(&mut rng, &r24, 1, degree, 4);
        let f24 = &unit * &dist;
        let f48 = f24.re_embed(&r48).unwrap();
        let fac24 = prepare(&f24, 1).unwrap();
        let fac48 = prepare(&f48, 1).unwrap();
        for (e, c) in fac24.unit.terms() {
            assert_eq!(&fac48.unit.coefficient_or_zero(e), c);
        }
        for i in 0..fac24.distinguished.degree() {
            for (e, c) in fac24.distinguished.coeff(i as usize).terms() {
                assert_eq!(
                    &fac48.distinguished.coeff(i as usize).coefficient_or_zero(e),
                    c
                );
            }
        }
    }
}

#[test]
fn reduce_mod_inverts_composition() {
    // reduce_mod(a*d + rem, d) = rem for reduced rem
    for p in [2u64, 3, 5] {
        let r = ring(p, false, 2, 30);
        let mut rng = Rng64::new(555 + p);
        for _ in 0..80 {
            let degree = 1 + rng.below(3) as u32;
            let dist_series = random_distinguished(&mut rng, &r, 1, degree, 2);
            let d = prepare(&dist_series, 1).unwrap().distinguished;
            let a = random_series(&mut rng, &r, 2, 4);
            // a remainder of X_2-degree < degree
            let rem = {
                let raw = random_series(&mut rng, &r, 2, 4);
                let mut acc = r.zero();
                for (e, c) in raw.terms() {
                    if e.get(1) < degree {
                        acc = acc.add(&r.monomial(e.clone(), c.clone())).unwrap();
                    }
                }
                acc
            };
            let g = &(&a * &dist_series) + &rem;
            assert_eq!(reduce_mod(&g, &d), rem);
        }
    }
}
