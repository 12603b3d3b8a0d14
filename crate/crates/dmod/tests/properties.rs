mod common;

use common::strategies::{nonzero, small_ops, weyl};
use dmod::groebner::{v_weight, Variant};
use dmod::homology::{free_resolution, v_strict_resolution, Presentation};
use dmod::isomorphism::{d_invariants, is_isomorphic, poincare_of_blocks, IsoAnswer};
use dmod::solutions::{hom_basis, is_solution, polynomial_solutions};
use dmod::text::w;
use dmod::weyl::{Ctx, Weyl};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn multiplication_is_associative(a in weyl(2, 4, 3), b in weyl(2, 4, 3), c in weyl(2, 4, 3)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn transpose_is_an_anti_involution(a in weyl(2, 4, 3), b in weyl(2, 4, 3)) {
        prop_assert_eq!(a.transpose().transpose(), a.clone());
        prop_assert_eq!((&a * &b).transpose(), &b.transpose() * &a.transpose());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn resolutions_compose_to_zero(a in nonzero(1, 3), b in nonzero(1, 3), c in nonzero(1, 2)) {
        let c1 = Ctx::std(1);
        let x = free_resolution(&Presentation::cyclic(&c1, &[a.clone(), b.clone()]), 2);
        prop_assert!(x.composes_to_zero());
        // one operator in each variable of D_2
        let c2 = Ctx::std(2);
        let first = a.substitute(&c2, &[Weyl::x(&c2, 0)], &[Weyl::d(&c2, 0)]);
        let second = c.substitute(&c2, &[Weyl::x(&c2, 1)], &[Weyl::d(&c2, 1)]);
        let x = free_resolution(&Presentation::cyclic(&c2, &[first, second]), 3);
        prop_assert!(x.composes_to_zero());
    }

    #[test]
    fn strict_resolutions_respect_the_filtration(a in nonzero(1, 3), b in nonzero(1, 2), integration in any::<bool>()) {
        let c = Ctx::std(1);
        let variant = if integration { Variant::Integration } else { Variant::Restriction };
        let p = Presentation::cyclic(&c, &[a, b]);
        let e = v_strict_resolution(&p, 1, &[0], variant, 0, 3);
        prop_assert!(e.composes_to_zero());
        prop_assert!(e.is_adapted(&v_weight(1, 1, variant)));
    }

    #[test]
    fn polynomial_solutions_are_solutions(a in nonzero(1, 3)) {
        let c = Ctx::std(1);
        let p = Presentation::cyclic(&c, &[a]);
        let b = polynomial_solutions(&p).unwrap();
        for s in &b.elements {
            prop_assert!(is_solution(&p, s).unwrap());
        }
    }

    #[test]
    fn blocks_round_trip(d in prop::collection::vec(1usize..5, 0..4)) {
        let mut got = d_invariants(&poincare_of_blocks(&d)).unwrap();
        let mut want = d.clone();
        got.sort_unstable();
        want.sort_unstable();
        prop_assert_eq!(got, want);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn hom_matrices_respect_relations(a in small_ops(), b in small_ops()) {
        let c = Ctx::std(1);
        let m = Presentation::cyclic(&c, &[a]);
        let n = Presentation::cyclic(&c, &[b]);
        for h in hom_basis(&m, &n).unwrap() {
            prop_assert!(h.is_valid().unwrap());
        }
    }

    #[test]
    fn iso_witnesses_compose_to_identities(k in 0u32..2, c0 in -2i64..3, shift in -2i64..3) {
        // q is p with dx replaced by dx + shift
        let c = Ctx::std(1);
        let p = w(&c, &format!("x1^{k}*dx1 + ({c0})"));
        let q = p.substitute(&c, &[Weyl::x(&c, 0)], &[&Weyl::d(&c, 0) + &Weyl::int(&c, shift)]);
        let m = Presentation::cyclic(&c, &[p]);
        let n = Presentation::cyclic(&c, &[q]);
        if let IsoAnswer::Yes(wt) = is_isomorphic(&m, &m, None).unwrap() {
            prop_assert!(wt.verify().unwrap());
        } else {
            prop_assert!(false, "a module is isomorphic to itself");
        }
        if let IsoAnswer::Yes(wt) = is_isomorphic(&m, &n, None).unwrap() {
            prop_assert!(wt.verify().unwrap());
        }
    }
}
