mod common;

use proptest::prelude::*;
use rand::Rng;

use common::{add_processes, config, measurable_scalar, rng, scale_process, small_tree};
use setcalc::acceptance::{accepts, risk_map, AcceptanceFamily};
use setcalc::conditional::cond_core;
use setcalc::linalg;
use setcalc::sample::{integer_vector, random_polyhedron, random_set_process};
use setcalc::tree::{conditional_expectation_vector, VectorProcess};
use setcalc::Rational;

fn family(expectation: bool) -> AcceptanceFamily {
    if expectation {
        AcceptanceFamily::expectation()
    } else {
        AcceptanceFamily::ess_inf()
    }
}

proptest! {
    #![proptest_config(config(96))]

    #[test]
    fn acceptance_is_an_upper_set(seed in any::<u64>(), d in 1usize..=3, expectation in any::<bool>()) {
        let fam = family(expectation);
        let mut r = rng(seed);
        let tree = small_tree(&mut r, d, 3, 3);
        let s = tree.horizon();
        let eta = VectorProcess::from_fn(&tree, &[s], |_| {
            (0..d).map(|_| Rational::from_integer(r.gen_range(-1..=4))).collect()
        });
        let bump = VectorProcess::from_fn(&tree, &[s], |_| {
            (0..d).map(|_| Rational::from_integer(r.gen_range(0..=3))).collect()
        });
        let mut higher = VectorProcess::new(&tree);
        for &m in tree.nodes_at(s) {
            higher.set(m, linalg::add(eta.at(m), bump.at(m)));
        }
        for t in 0..=s {
            let before = accepts(&tree, &fam, &eta, s, t).unwrap();
            let after = accepts(&tree, &fam, &higher, s, t).unwrap();
            for &n in tree.nodes_at(t) {
                if before.at(n).is_accepted() {
                    prop_assert!(after.at(n).is_accepted());
                }
            }
        }
    }

    #[test]
    fn conditioning_preserves_acceptance(seed in any::<u64>(), d in 1usize..=3, expectation in any::<bool>()) {
        let fam = family(expectation);
        let mut r = rng(seed);
        let tree = small_tree(&mut r, d, 3, 3);
        let horizon = tree.horizon();
        let xi = VectorProcess::from_fn(&tree, &[horizon], |_| {
            (0..d).map(|_| Rational::from_integer(r.gen_range(-2..=5))).collect()
        });
        for s in 0..=horizon {
            let mean = conditional_expectation_vector(&tree, &xi, horizon, s).unwrap();
            for t in 0..=s {
                let full = accepts(&tree, &fam, &xi, horizon, t).unwrap();
                let part = accepts(&tree, &fam, &mean, s, t).unwrap();
                for &n in tree.nodes_at(t) {
                    if full.at(n).is_accepted() {
                        prop_assert!(part.at(n).is_accepted(), "s={} t={} node {}", s, t, n);
                    }
                }
            }
        }
    }

    #[test]
    fn risk_map_contains_the_core(seed in any::<u64>(), d in 2usize..=3, expectation in any::<bool>()) {
        let fam = family(expectation);
        let mut r = rng(seed);
        let tree = small_tree(&mut r, d, 2, 3);
        let x = random_set_process(&mut r, &tree, |r, _| random_polyhedron(r, d));
        for t in 0..tree.horizon() {
            let core = cond_core(&tree, &x, t + 1, t).unwrap();
            let rm = risk_map(&tree, &fam, &x, t).unwrap();
            for &n in tree.nodes_at(t) {
                prop_assert!(core.at(n).is_subset(rm.at(n)));
            }
        }
    }

    #[test]
    fn risk_map_is_conditionally_convex(seed in any::<u64>(), d in 2usize..=3, expectation in any::<bool>()) {
        let fam = family(expectation);
        let mut r = rng(seed);
        let tree = small_tree(&mut r, d, 2, 3);
        let x = random_set_process(&mut r, &tree, |r, _| random_polyhedron(r, d));
        let y = random_set_process(&mut r, &tree, |r, _| random_polyhedron(r, d));
        for t in 0..tree.horizon() {
            let lambda = VectorProcess::from_fn(&tree, &[t], |_| {
                let den = r.gen_range(2..=5);
                vec![Rational::new(r.gen_range(1..den), den)]
            })
            .map(|v| v[0].clone());
            let rest = lambda.map(|l| Rational::one() - l);
            let mix = add_processes(&tree, &scale_process(&tree, &x, &lambda, t), &scale_process(&tree, &y, &rest, t));
            let rm_mix = risk_map(&tree, &fam, &mix, t).unwrap();
            let (rx, ry) = (risk_map(&tree, &fam, &x, t).unwrap(), risk_map(&tree, &fam, &y, t).unwrap());
            for &n in tree.nodes_at(t) {
                let combo = rx.at(n).scale(lambda.at(n)).minkowski_sum(&ry.at(n).scale(rest.at(n))).unwrap();
                prop_assert!(combo.is_subset(rm_mix.at(n)));
            }
        }
    }

    #[test]
    fn risk_map_is_positively_homogeneous(seed in any::<u64>(), d in 2usize..=3, expectation in any::<bool>()) {
        let fam = family(expectation);
        let mut r = rng(seed);
        let tree = small_tree(&mut r, d, 2, 3);
        let x = random_set_process(&mut r, &tree, |r, _| {
            let p = random_polyhedron(r, d);
            p.translate(&integer_vector(r, d, 2))
        });
        for t in 0..tree.horizon() {
            let alpha = measurable_scalar(&mut r, &tree, t, true);
            let lhs = risk_map(&tree, &fam, &scale_process(&tree, &x, &alpha, t), t).unwrap();
            let rhs = risk_map(&tree, &fam, &x, t).unwrap();
            for &n in tree.nodes_at(t) {
                prop_assert_eq!(lhs.at(n), &rhs.at(n).scale(alpha.at(n)));
            }
        }
    }
}
