//! Series laws checked against the dense oracle and by algebraic identities:
//! ring axioms, Leibniz, vanishing of `d(f^p)`, shear invertibility, and
//! p-th-power round trips.

mod common;

use cohen_gabber::oracle::{self, gen::Rng64};
use cohen_gabber::{parse_series, ExpVec, TruncatedSeries};
use common::{random_nonzero_series, random_series, ring};

#[test]
fn ring_axioms_against_oracle() {
    for p in [2u64, 3, 5] {
        let r = ring(p, false, 3, 24);
        let mut rng = Rng64::new(42 + p);
        for _ in 0..150 {
            let f = random_series(&mut rng, &r, 4, 5);
            let g = random_series(&mut rng, &r, 4, 5);
            let h = random_series(&mut rng, &r, 4, 5);
            assert_eq!(&(&f + &g) * &h, &(&f * &h) + &(&g * &h));
            assert_eq!(&f * &g, &g * &f);
            assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
            let df = oracle::dense_from_series(&f).unwrap();
            let dg = oracle::dense_from_series(&g).unwrap();
            let sum = oracle::dense_add(&df, &dg).unwrap();
            let prod = oracle::dense_mul(&df, &dg).unwrap();
            assert!(oracle::agree(&(&f + &g), &sum, 24));
            assert!(oracle::agree(&(&f * &g), &prod, 24));
        }
    }
}

#[test]
fn leibniz_rule() {
    for p in [2u64, 3, 5] {
        let r = ring(p, true, 2, 24);
        let mut rng = Rng64::new(77 + p);
        for _ in 0..150 {
            let f = random_series(&mut rng, &r, 4, 4);
            let g = random_series(&mut rng, &r, 4, 4);
            for var in 0..2 {
                let lhs = (&f * &g).partial_derivative(var);
                let rhs = &(&f.partial_derivative(var) * &g) + &(&f * &g.partial_derivative(var));
                // compare below the common window
                let w = lhs.precision().min(rhs.precision());
                assert_eq!(lhs.truncated(w), rhs.truncated(w));
            }
        }
    }
}

#[test]
fn derivative_of_pth_power_vanishes() {
    for p in [2u64, 3, 5] {
        let r = ring(p, true, 2, 30);
        let mut rng = Rng64::new(5 + p);
        for _ in 0..100 {
            let f = random_series(&mut rng, &r, 2, 4);
            let fp = f.pth_power();
            for var in 0..2 {
                assert!(fp.partial_derivative(var).is_zero());
            }
        }
    }
}

#[test]
fn pth_power_round_trip() {
    for p in [2u64, 3, 5] {
        let r = ring(p, true, 2, 24);
        let mut rng = Rng64::new(13 * p);
        for _ in 0..100 {
            let f = random_series(&mut rng, &r, 2, 4);
            let root = f.pth_power().is_pth_power().expect("f^p is a p-th power");
            let w = root.precision().min(f.precision());
            assert_eq!(root.truncated(w), f.truncated(w));
        }
    }
}

#[test]
fn shears_are_invertible() {
    for p in [2u64, 3] {
        let r = ring(p, false, 2, 40);
        let mut rng = Rng64::new(19 + p);
        for _ in 0..100 {
            let f = random_series(&mut rng, &r, 3, 4);
            let n = 1 + rng.below(3) as u32;
            let forward = &r.var(1) + &r.monomial(ExpVec::axis(2, 0, n), r.field().one());
            let backward = &r.var(1) - &r.monomial(ExpVec::axis(2, 0, n), r.field().one());
            let there = f.substitute(1, &forward).unwrap();
            let back = there.substitute(1, &backward).unwrap();
            assert_eq!(back, f, "composed degree stays below precision");
        }
    }
}

#[test]
fn substitution_and_derivative_agree_with_oracle() {
    for p in [2u64, 3, 5] {
        let r = ring(p, false, 2, 24);
        let mut rng = Rng64::new(91 + p);
        for _ in 0..150 {
            let f = random_series(&mut rng, &r, 4, 5);
            let image = {
                let raw = random_series(&mut rng, &r, 3, 3);
                // substitution images must lie in the maximal ideal
                raw.sub(&r.constant(raw.constant_term())).unwrap()
            };
            let var = rng.below(2) as usize;
            let sparse_sub = f.substitute(var, &image).unwrap();
            let df = oracle::dense_from_series(&f).unwrap();
            let dimg = oracle::dense_from_series(&image).unwrap();
            let dense_sub = oracle::dense_substitute(&df, var, &dimg).unwrap();
            assert!(oracle::agree(
                &sparse_sub,
                &dense_sub,
                sparse_sub.precision()
            ));

            let sparse_d = f.partial_derivative(var);
            let dense_d = oracle::dense_derivative(&df, var).unwrap();
            assert!(oracle::agree(&sparse_d, &dense_d, sparse_d.precision()));
        }
    }
}

#[test]
fn invert_unit_is_a_true_inverse() {
    for p in [2u64, 3, 5] {
        let r = ring(p, true, 2, 16);
        let mut rng = Rng64::new(3 * p);
        for _ in 0..60 {
            let u = common::random_unit(&mut rng, &r, 3);
            let inv = u.invert_unit().unwrap();
            assert_eq!(&u * &inv, r.one());
        }
    }
}

#[test]
fn truncation_window_semantics() {
    let r = ring(2, false, 2, 6);
    // X^5 * X^5 has true degree 10 >= 6: the product is zero below precision,
    // which is exactly what the representation claims (and no more).
    let f = parse_series(&r, "X^5").unwrap();
    let prod: TruncatedSeries = &f * &f;
    assert!(prod.is_zero());
    let mut rng = Rng64::new(99);
    let g = random_nonzero_series(&mut rng, &r, 2, 3);
    assert_eq!(g.truncated(3).precision(), 3);
}
