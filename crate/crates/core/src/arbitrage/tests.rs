use super::*;
use crate::linalg::from_ints;
use crate::rational::{q, qi};
use crate::tree::{uniform_tree, ScalarProcess};

fn spreads(branching: &[usize], bid: &[i64], ask: &[i64]) -> (ScenarioTree, SolvencyProcess) {
    let t = uniform_tree(2, branching);
    let mut b = bid.iter();
    let mut a = ask.iter();
    let bp = ScalarProcess::everywhere(&t, |_| qi(*b.next().unwrap()));
    let ap = ScalarProcess::everywhere(&t, |_| qi(*a.next().unwrap()));
    let k = crate::hedging::solvency_from_bid_ask(&t, &bp, &ap).unwrap();
    (t, k)
}

fn frictionless(branching: &[usize], prices: &[i64]) -> (ScenarioTree, SolvencyProcess) {
    spreads(branching, prices, prices)
}

fn ess() -> AcceptanceFamily {
    AcceptanceFamily::ess_inf()
}

fn expct() -> AcceptanceFamily {
    AcceptanceFamily::expectation()
}

fn assert_verified(
    t: &ScenarioTree,
    k: &SolvencyProcess,
    f: &AcceptanceFamily,
    v: &ArbitrageVerdict,
) {
    assert!(!v.holds, "{} should fail", v.condition);
    verify_witness(t, k, f, v).unwrap_or_else(|e| panic!("{} witness: {e}", v.condition));
}

#[test]
fn second_kind_on_binomial_prices() {
    let (t, k) = frictionless(&[2], &[10, 11, 12]);
    let v = check_na2(&t, &k).unwrap();
    assert_eq!(
        v.witness.as_ref().unwrap().position,
        Some(from_ints(&[-11, 1]))
    );
    assert_eq!(v.witness.as_ref().unwrap().node, t.root());
    assert_verified(&t, &k, &ess(), &v);
    let nra = check_nra(&t, &k, &ess()).unwrap();
    assert_verified(&t, &k, &ess(), &nra);
    assert_eq!(nra.agreement, Some(true));

    let (t, k) = frictionless(&[2], &[10, 8, 12]);
    assert!(check_na2(&t, &k).unwrap().holds);
    assert!(check_nra2(&t, &k, &ess()).unwrap().holds);
    for c in [
        Condition::Nra,
        Condition::Nara,
        Condition::Snr,
        Condition::Snar,
        Condition::Nas,
    ] {
        assert!(check_condition(&t, &k, &ess(), c).unwrap().holds, "{c}");
    }
}

#[test]
fn expectation_family_releases_capital_on_binomial() {
    let (t, k) = frictionless(&[2], &[10, 8, 12]);
    let v = check_nra(&t, &k, &expct()).unwrap();
    assert_verified(&t, &k, &expct(), &v);
    assert_eq!(v.agreement, Some(true));
    let w = v.witness.unwrap();
    assert_eq!(w.node, t.root());
    let nara = check_nara(&t, &k, &expct()).unwrap();
    assert_eq!(nara.condition, Condition::Nara);
    assert!(!nara.holds);
    let nra2 = check_nra2(&t, &k, &expct()).unwrap();
    assert_verified(&t, &k, &expct(), &nra2);
}

#[test]
fn disjoint_spreads_fail_strict_conditions() {
    let (t, k) = spreads(&[1], &[1, 3], &[2, 4]);
    for f in [ess(), expct()] {
        let snr = check_snr(&t, &k, &f).unwrap();
        assert_verified(&t, &k, &f, &snr);
        assert_eq!(snr.agreement, Some(true));
        let snar = check_snar(&t, &k, &f).unwrap();
        assert_eq!(snar.method, Method::RayEnumeration);
        assert_verified(&t, &k, &f, &snar);
        let nra = check_nra(&t, &k, &f).unwrap();
        assert_verified(&t, &k, &f, &nra);
    }
    let nas = check_nas(&t, &k).unwrap();
    assert_verified(&t, &k, &ess(), &nas);
    let forced = check_snar_with_budget(&t, &k, &ess(), 0).unwrap();
    assert_eq!(forced.method, Method::LiftedLp);
    assert_verified(&t, &k, &ess(), &forced);
}

#[test]
fn touching_spreads_fail_snr_but_not_nra() {
    let (t, k) = spreads(&[1], &[1, 2], &[2, 3]);
    let snr = check_snr(&t, &k, &ess()).unwrap();
    assert_verified(&t, &k, &ess(), &snr);
    assert!(check_nra(&t, &k, &ess()).unwrap().holds);
    let report = implication_suite(&t, &k).unwrap();
    assert!(report.passed(), "{:?}", report.violations());
}

#[test]
fn orthant_satisfies_everything() {
    let t = uniform_tree(3, &[2, 2]);
    let k = SolvencyProcess::orthant(&t);
    for f in [ess(), expct()] {
        for c in [
            Condition::Nra,
            Condition::Nara,
            Condition::Snr,
            Condition::Nra2,
            Condition::Snar,
        ] {
            assert!(
                check_condition(&t, &k, &f, c).unwrap().holds,
                "{c} {}",
                f.kind
            );
        }
        let z = find_wcps(&t, &k, &f, 0, false).unwrap();
        let z = z.candidate().unwrap();
        assert!(verify_price_system(&t, &k, &f, z).passed());
        let mut flat = z.clone();
        flat.values = crate::tree::VectorProcess::everywhere(&t, |_| vec![q(1, 3); 3]);
        assert!(verify_price_system(&t, &k, &f, &flat).passed());
    }
    assert!(check_na2(&t, &k).unwrap().holds);
    assert!(check_nas(&t, &k).unwrap().holds);
    let report = implication_suite(&t, &k).unwrap();
    assert!(report.passed(), "{:?}", report.violations());
}

#[test]
fn constant_frictionless_price() {
    let (t, k) = frictionless(&[2], &[10, 10, 10]);
    for f in [ess(), expct()] {
        assert!(check_snr(&t, &k, &f).unwrap().holds);
        assert!(check_nra2(&t, &k, &f).unwrap().holds);
    }
    let snar = check_snar(&t, &k, &ess()).unwrap();
    assert!(snar.holds);
    assert_eq!(snar.method, Method::RayEnumeration);
    // mean-zero increments along the shared line cancel against trades in K^0
    let snar = check_snar(&t, &k, &expct()).unwrap();
    assert_verified(&t, &k, &expct(), &snar);
    let w = snar.witness.unwrap();
    assert!(t.children(t.root()).contains(&w.node));
}

#[test]
fn price_systems() {
    let (t, k) = spreads(&[2], &[9, 8, 12], &[11, 8, 12]);
    let z = find_wcps(&t, &k, &ess(), 0, false).unwrap();
    let z = z.candidate().unwrap().clone();
    assert!(verify_price_system(&t, &k, &ess(), &z).passed());
    let root = z.values.at(t.root());
    assert_eq!(root.iter().sum::<Rational>(), qi(1));
    let strict = find_wcps(&t, &k, &ess(), 0, true).unwrap();
    let s = strict.candidate().unwrap();
    assert!(s.epsilon.is_positive());
    assert!(verify_price_system(&t, &k, &ess(), s).passed());

    let mut bumped = z.clone();
    let l = t.leaves()[0];
    bumped
        .values
        .set(l, linalg::add(z.values.at(l), &[q(1, 7), qi(0)]));
    let r = verify_price_system(&t, &k, &ess(), &bumped);
    assert_eq!(r.failures_of(PriceCheck::Martingale).len(), 1);
    assert_eq!(r.failures_of(PriceCheck::Martingale)[0].node, t.root());

    // a martingale that leaves the dual cone at one leaf only
    let mut outside = z.clone();
    outside.values.set(t.root(), from_ints(&[2, 19]));
    outside.values.set(t.leaves()[0], from_ints(&[2, 16]));
    outside.values.set(t.leaves()[1], from_ints(&[2, 22]));
    let r = verify_price_system(&t, &k, &ess(), &outside);
    let dual = r.failures_of(PriceCheck::DualCone);
    assert_eq!(dual.len(), 1);
    assert_eq!(dual[0].node, t.leaves()[1]);

    let (t, k) = frictionless(&[2], &[10, 12, 14]);
    match find_wcps(&t, &k, &ess(), 0, false).unwrap() {
        WcpsOutcome::Infeasible { lp, farkas } => lp.check_farkas(&farkas).unwrap(),
        WcpsOutcome::Found(_) => panic!("prices 12 and 14 admit no price system at 10"),
    }
}

#[test]
fn expectation_price_systems_are_constant() {
    let (t, k) = spreads(&[2], &[8, 9, 9], &[12, 11, 11]);
    let z = find_wcps(&t, &k, &expct(), 0, false).unwrap();
    let z = z.candidate().unwrap();
    assert_eq!(z.note.as_deref(), Some(EXPECTATION_REDUCTION_NOTE));
    for &l in t.leaves() {
        assert_eq!(z.values.at(l), z.values.at(t.root()));
    }
    let (t, k) = frictionless(&[2], &[10, 8, 12]);
    assert!(!find_wcps(&t, &k, &expct(), 0, false).unwrap().is_found());
}

#[test]
fn unsupported_configurations() {
    let (t, k) = frictionless(&[2], &[10, 8, 12]);
    let ent = AcceptanceFamily::entropic();
    assert!(matches!(
        check_nra(&t, &k, &ent),
        Err(ArbError::UnsupportedFamily { .. })
    ));
    assert!(matches!(
        check_condition(&t, &k, &expct(), Condition::Na2),
        Err(ArbError::UnsupportedFamily { .. })
    ));
    assert!(matches!(
        find_wcps(&t, &k, &ess(), 5, false),
        Err(ArbError::BadTime { .. })
    ));
    let shifted = Floored::apply(&t, &k);
    assert!(matches!(
        check_nra2(&t, &shifted, &ess()),
        Err(ArbError::NotConical(_))
    ));
    assert!(matches!(
        check_snar(&t, &shifted, &ess()),
        Err(ArbError::NotConical(_))
    ));
    assert!(check_nra(&t, &shifted, &ess()).is_ok());
    assert_eq!("nara".parse::<Condition>().unwrap(), Condition::Nara);
    assert!("xyz".parse::<Condition>().is_err());
}

/// Solvency sets cut by `x1 >= -5`: still upper sets, no longer cones.
struct Floored;

impl Floored {
    fn apply(t: &ScenarioTree, k: &SolvencyProcess) -> SolvencyProcess {
        let floor = Polyhedron::from_halfspaces(
            2,
            vec![crate::Halfspace::new(from_ints(&[1, 0]), qi(-5))],
            vec![],
        )
        .unwrap();
        let sets = k.sets().map(|p| p.intersect(&floor).unwrap());
        SolvencyProcess::new(t, sets).unwrap()
    }
}

#[test]
fn two_period_suite() {
    let (t, k) = spreads(
        &[2, 2],
        &[9, 8, 11, 7, 9, 10, 12],
        &[11, 10, 13, 8, 10, 12, 13],
    );
    let report = implication_suite(&t, &k).unwrap();
    assert!(report.passed(), "{:?}", report.violations());
    assert_eq!(report.families.len(), 2);
}
