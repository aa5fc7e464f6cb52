mod common;

use proptest::prelude::*;

use common::{config, rng, small_tree};
use setcalc::acceptance::AcceptanceFamily;
use setcalc::arbitrage::{
    check_condition, check_nra, find_wcps, verify_witness, ArbError, Condition,
};
use setcalc::bid_ask::{cones, hat_recursion, hull, meet, tilde_recursion, BidAskProcess};
use setcalc::conditional::{cond_core, cond_hull};
use setcalc::sample::{random_bid_ask, random_conical_model, TreeShape};
use setcalc::Polyhedron;

fn bid_ask(seed: u64, strict: bool) -> (setcalc::tree::ScenarioTree, BidAskProcess) {
    let mut r = rng(seed);
    let tree = small_tree(&mut r, 2, 3, 3);
    let (b, a) = random_bid_ask(&mut r, &tree, 1, 30, strict);
    let y = BidAskProcess::new(&tree, b, a).unwrap();
    (tree, y)
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn recursions_stay_inside_the_spreads(seed in any::<u64>(), strict in any::<bool>()) {
        let (tree, y) = bid_ask(seed, strict);
        let tilde = tilde_recursion(&tree, &y);
        let hat = hat_recursion(&tree, &y);
        for n in tree.node_ids() {
            let own = y.at(n);
            for s in [tilde.at(n), hat.at(n)] {
                if !s.is_empty() {
                    prop_assert!(own.contains(&s.lower) && own.contains(&s.upper));
                }
            }
        }
    }

    #[test]
    fn interval_cones_dualise_and_condition(seed in any::<u64>(), strict in any::<bool>()) {
        let (tree, y) = bid_ask(seed, strict);
        for n in tree.node_ids() {
            let i = y.at(n);
            let dual = i.cone().dual_cone().unwrap();
            prop_assert_eq!(&dual, &Polyhedron::cone(2, i.dual_generators()).unwrap());
            prop_assert_eq!(&dual, &i.dual_cone());
        }
        let k = cones(&tree, &y.intervals(&tree));
        let s = tree.horizon();
        for t in 0..s {
            let core = cond_core(&tree, &k, s, t).unwrap();
            let big = cond_hull(&tree, &k, s, t).unwrap();
            for &n in tree.nodes_at(t) {
                let below: Vec<_> = tree.descendants_at(n, s).iter().map(|&m| y.at(m)).collect();
                prop_assert_eq!(core.at(n), &hull(below.iter()).cone());
                prop_assert_eq!(big.at(n), &meet(below.iter()).cone());
            }
        }
    }

    #[test]
    fn failing_verdicts_carry_checkable_witnesses(seed in any::<u64>(), d in 2usize..=3, expectation in any::<bool>()) {
        let fam = if expectation { AcceptanceFamily::expectation() } else { AcceptanceFamily::ess_inf() };
        let (tree, k) = random_conical_model(&mut rng(seed), d, TreeShape { max_horizon: 2, max_branching: 2 });
        for c in Condition::ALL {
            let verdict = match check_condition(&tree, &k, &fam, c) {
                Ok(v) => v,
                Err(ArbError::UnsupportedFamily { .. }) => continue,
                Err(e) => return Err(TestCaseError::fail(format!("{c}: {e}"))),
            };
            prop_assert!(verify_witness(&tree, &k, &fam, &verdict).is_ok(), "{}: {:?}", c, verify_witness(&tree, &k, &fam, &verdict));
            prop_assert_ne!(verdict.agreement, Some(false), "{} methods disagree", c);
        }
    }

    #[test]
    fn price_systems_exist_exactly_without_risk_arbitrage(seed in any::<u64>(), d in 2usize..=3, expectation in any::<bool>()) {
        let fam = if expectation { AcceptanceFamily::expectation() } else { AcceptanceFamily::ess_inf() };
        let (tree, k) = random_conical_model(&mut rng(seed), d, TreeShape { max_horizon: 2, max_branching: 3 });
        let nra = check_nra(&tree, &k, &fam).unwrap();
        let every_time = (0..tree.horizon()).all(|t| find_wcps(&tree, &k, &fam, t, false).unwrap().is_found());
        prop_assert_eq!(nra.holds, every_time);
    }
}
