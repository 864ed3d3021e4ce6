//! Randomized laws for the coefficient fields: canonical-form equality,
//! field axioms, Frobenius round trips, and the p^e-basis decomposition.

use std::collections::BTreeMap;

use cohen_gabber::oracle::gen::Rng64;
use cohen_gabber::{FieldDescriptor, FieldElem};

fn rational(p: u64) -> FieldDescriptor {
    FieldDescriptor::rational_function_field(p).unwrap()
}

fn prime(p: u64) -> FieldDescriptor {
    FieldDescriptor::prime_field(p).unwrap()
}

#[test]
fn field_axioms_on_random_triples() {
    for (seed, desc) in [
        (11u64, prime(2)),
        (12, prime(3)),
        (13, prime(5)),
        (21, rational(2)),
        (22, rational(3)),
        (23, rational(5)),
    ] {
        let mut rng = Rng64::new(seed);
        for _ in 0..300 {
            let a = rng.rational_sample(desc);
            let b = rng.rational_sample(desc);
            let c = rng.rational_sample(desc);
            // associativity and commutativity
            assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            assert_eq!(a.add(&b), b.add(&a));
            assert_eq!(a.mul(&b), b.mul(&a));
            // distributivity
            assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            // inverse laws
            assert_eq!(a.sub(&a), desc.zero());
            if !a.is_zero() {
                assert_eq!(a.mul(&a.inverse().unwrap()), desc.one());
            }
        }
    }
}

trait RationalSample {
    fn rational_sample(&mut self, desc: FieldDescriptor) -> FieldElem;
}

impl RationalSample for Rng64 {
    fn rational_sample(&mut self, desc: FieldDescriptor) -> FieldElem {
        match desc.kind() {
            cohen_gabber::FieldKind::PrimeField => self.elem(desc),
            cohen_gabber::FieldKind::RationalFunctionField => self.rational_elem(desc, 3),
        }
    }
}

#[test]
fn canonical_equality_matches_cross_multiplication() {
    for p in [2u64, 3, 5] {
        let desc = rational(p);
        let mut rng = Rng64::new(100 + p);
        for _ in 0..500 {
            let a = rng.rational_elem(desc, 3);
            let b = rng.rational_elem(desc, 3);
            // a == b as canonical forms iff a - b == 0 iff cross products agree
            assert_eq!(a == b, a.sub(&b).is_zero());
        }
    }
}

#[test]
fn frobenius_round_trips() {
    for p in [2u64, 3, 5] {
        for desc in [prime(p), rational(p)] {
            let mut rng = Rng64::new(7 * p);
            for _ in 0..300 {
                let c = match desc.kind() {
                    cohen_gabber::FieldKind::PrimeField => rng.elem(desc),
                    _ => rng.rational_elem(desc, 3),
                };
                let cp = c.pow(p);
                let root = cp.pth_root().expect("p-th powers have roots");
                assert_eq!(root, c, "pth_root(c^p) = c");
                if let Some(r) = c.pth_root() {
                    assert_eq!(r.pow(p), c, "roots really power back");
                }
            }
        }
    }
}

mod arbitrary {
    use super::*;
    use proptest::prelude::*;

    fn elem(p: u64) -> impl Strategy<Value = FieldElem> {
        let desc = rational(p);
        (
            proptest::collection::vec(0u64..p, 1..5),
            proptest::collection::vec(0u64..p, 1..5),
        )
            .prop_filter_map("nonzero denominator", move |(num, den)| {
                let d = FieldElem::from_t_coeffs(desc, &den);
                if d.is_zero() {
                    return None;
                }
                Some(FieldElem::from_t_coeffs(desc, &num).div(&d).unwrap())
            })
    }

    proptest! {
        #[test]
        fn distributivity_f2t(a in elem(2), b in elem(2), c in elem(2)) {
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        }

        #[test]
        fn frobenius_injective_f3t(a in elem(3)) {
            prop_assert_eq!(a.pow(3).pth_root(), Some(a));
        }

        #[test]
        fn decompose_recompose_f2t(a in elem(2)) {
            let parts = a.pbasis_decompose(1).unwrap();
            prop_assert_eq!(FieldElem::pbasis_recompose(rational(2), 1, &parts), a);
        }
    }
}

#[test]
fn pbasis_decomposition_round_trips() {
    // >= 1000 random rational functions across p and e
    for p in [2u64, 3, 5] {
        let desc = rational(p);
        for e in [1u32, 2] {
            let mut rng = Rng64::new(1000 * p + e as u64);
            for _ in 0..200 {
                let c = rng.rational_elem(desc, 4);
                let parts: BTreeMap<u64, FieldElem> = c.pbasis_decompose(e).unwrap();
                for q in parts.keys() {
                    assert!(*q < p.pow(e));
                }
                assert_eq!(
                    FieldElem::pbasis_recompose(desc, e, &parts),
                    c,
                    "recompose(decompose(c)) = c for p={p}, e={e}"
                );
            }
        }
    }
}
