mod common;

use proptest::prelude::*;
use rand::Rng;

use common::{config, directions, rng};
use setcalc::polyhedron::PolyhedronJson;
use setcalc::sample::{random_cone, random_polyhedron, random_polytope};
use setcalc::{Comparison, Polyhedron};

fn sample(seed: u64, d: usize, which: u8) -> Polyhedron {
    let mut r = rng(seed);
    match which {
        0 => random_polytope(&mut r, d, 4),
        1 => random_cone(&mut r, d),
        _ => random_polyhedron(&mut r, d),
    }
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn support_of_sum_is_sum_of_supports(
        seed in any::<u64>(), d in 1usize..=3, wa in 0u8..3, wb in 0u8..3,
    ) {
        let a = sample(seed, d, wa);
        let b = sample(seed.wrapping_add(1), d, wb);
        let sum = a.minkowski_sum(&b).unwrap();
        let mut r = rng(seed ^ 0x5eed);
        let mut us = directions(&mut r, d, 6);
        // Facet normals of the sum hit the finite side of every support.
        us.extend(sum.inequalities().iter().map(|h| h.normal.iter().map(|x| -x).collect()));
        for u in &us {
            prop_assert_eq!(sum.support(u), a.support(u) + b.support(u), "u = {:?}", u);
        }
    }

    #[test]
    fn dual_of_dual_is_the_cone(seed in any::<u64>(), d in 1usize..=4) {
        let k = sample(seed, d, 1);
        let back = k.dual_cone().unwrap().dual_cone().unwrap();
        prop_assert_eq!(back, k);
    }

    #[test]
    fn intersection_and_hull_are_meet_and_join(
        seed in any::<u64>(), d in 1usize..=3, wa in 0u8..3, wb in 0u8..3, wc in 0u8..3,
    ) {
        let a = sample(seed, d, wa);
        let b = sample(seed.wrapping_add(7), d, wb);
        let c = sample(seed.wrapping_add(13), d, wc);
        let meet = a.intersect(&b).unwrap();
        let join = Polyhedron::hull_union(&[a.clone(), b.clone()]).unwrap();
        prop_assert!(meet.is_subset(&a) && meet.is_subset(&b));
        prop_assert!(a.is_subset(&join) && b.is_subset(&join));
        // Any lower bound of both lies in the meet, any upper bound contains the join.
        let lower = meet.intersect(&c).unwrap();
        prop_assert!(lower.is_subset(&meet));
        let upper = Polyhedron::hull_union(&[a.clone(), b.clone(), c.clone()]).unwrap();
        prop_assert!(join.is_subset(&upper));
        let expected = match (a.is_subset(&b), b.is_subset(&a)) {
            (true, true) => Comparison::Equal,
            (true, false) => Comparison::Subset,
            (false, true) => Comparison::Superset,
            (false, false) => Comparison::Incomparable,
        };
        prop_assert_eq!(a.compare(&b).unwrap(), expected);
        if a.is_subset(&b) {
            prop_assert_eq!(&meet, &a);
            prop_assert_eq!(&join, &b);
        }
    }

    #[test]
    fn conversions_reproduce_the_canonical_form(seed in any::<u64>(), d in 1usize..=3, w in 0u8..3) {
        let mut p = sample(seed, d, w);
        if rng(seed).gen_bool(0.2) {
            p = p.intersect(&sample(seed.wrapping_add(3), d, 0)).unwrap();
        }
        let from_h = Polyhedron::from_halfspaces(d, p.inequalities().to_vec(), p.equalities().to_vec()).unwrap();
        prop_assert_eq!(&from_h, &p);
        let from_v = Polyhedron::from_generators(d, p.vertices().to_vec(), p.rays().to_vec(), p.lines().to_vec()).unwrap();
        prop_assert_eq!(&from_v, &p);
        let text = serde_json::to_string(&PolyhedronJson::from(&p)).unwrap();
        let parsed: PolyhedronJson = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(Polyhedron::try_from(parsed).unwrap(), p);
    }
}
