//! Property-based invariants over randomized inputs.

use proptest::prelude::*;

use filtord::jumpset::JumpSet;
use filtord::shift::{Point, Shift};

fn arb_shift() -> impl Strategy<Value = Shift> {
    (prop_oneof![Just(2u64), Just(3), Just(5), Just(7)], 1u64..=10)
        .prop_map(|(p, e)| Shift::rho_ep(p, e).unwrap())
}

proptest! {
    #[test]
    fn shift_image_and_t_partition(shift in arb_shift(), x in 1u64..200) {
        prop_assert_ne!(shift.preimage(x).is_some(), shift.in_t(x));
    }

    #[test]
    fn shift_strictly_increasing(shift in arb_shift(), i in 1u64..500) {
        prop_assert!(shift.apply(i + 1) > shift.apply(i));
        prop_assert!(shift.apply(1) > 1);
    }

    #[test]
    fn inverse_iterate_inverts(shift in arb_shift(), i in 1u64..50, k in 0u32..6) {
        let fwd = shift.iterate(i, k);
        prop_assert!(fwd <= u64::MAX as u128);
        prop_assert_eq!(shift.inverse_iterate(fwd as u64, k), Some(i));
        prop_assert!(shift.v_rho(fwd as u64) >= k);
    }

    #[test]
    fn order_is_antisymmetric_and_transitive(
        shift in arb_shift(),
        pts in proptest::collection::vec((1u64..25, 0u32..6), 3),
    ) {
        let p: Vec<Point> = pts.iter().map(|&(a, b)| Point::new(a, b)).collect();
        for &x in &p {
            prop_assert!(shift.leq(x, x));
            for &y in &p {
                if shift.leq(x, y) && shift.leq(y, x) {
                    prop_assert_eq!(x, y);
                }
                for &z in &p {
                    if shift.leq(x, y) && shift.leq(y, z) {
                        prop_assert!(shift.leq(x, z));
                    }
                }
            }
        }
    }

    /// Any subset either fails validation with a diagnosis or round-trips.
    #[test]
    fn subset_round_trip(
        shift in arb_shift(),
        subset in proptest::collection::btree_set(1u64..40, 0..7),
    ) {
        let subset: Vec<u64> = subset.into_iter().collect();
        for extended in [false, true] {
            if let Ok(js) = JumpSet::from_subset(shift.clone(), extended, &subset) {
                prop_assert_eq!(js.to_subset(), subset.clone());
            }
        }
    }

    /// Valuation vectors: the profile is non-increasing and its breaks sit at
    /// the beta values of the orbit invariant.
    #[test]
    fn profile_breaks_are_betas(
        seed_vals in proptest::collection::vec(proptest::option::of(1u32..6), 10),
        pe in prop_oneof![Just((2u64, 4u64)), Just((3, 6)), Just((2, 2))],
    ) {
        let shift = Shift::rho_ep(pe.0, pe.1).unwrap();
        let mut indices = shift.tset(0);
        indices.push(shift.e_star().unwrap());
        let coords: std::collections::BTreeMap<(u64, u32), u32> = indices
            .iter()
            .zip(seed_vals.iter())
            .filter_map(|(&i, v)| v.map(|v| ((i, 1), v)))
            .collect();
        let vector =
            filtord::filtered::ValuationVector::new(shift.clone(), 1, coords).unwrap();
        let profile = vector.quotient_weight_profile(8);
        for w in profile.windows(2) {
            prop_assert!(w[1] <= w[0]);
        }
        let js = vector.filt_ord().unwrap();
        let mut betas: Vec<u32> = js.entries().iter().map(|&(_, b)| b).collect();
        betas.reverse();
        prop_assert_eq!(vector.profile_breaks(), betas);
    }
}
