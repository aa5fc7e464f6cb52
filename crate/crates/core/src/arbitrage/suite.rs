//! Runs every checker on one instance and tests the implications between
//! the conditions that must hold on every model.

use crate::acceptance::{risk_map, AcceptanceFamily, FamilyKind};
use crate::hedging::SolvencyProcess;
use crate::linalg::{self, Vector};
use crate::lp::strictly_feasible_direction;
use crate::tree::ScenarioTree;

use super::{
    check_na2, check_nara, check_nas, check_nra, check_nra2, check_snar, check_snr, find_wcps,
    insolvent_positions_unacceptable, verify_witness, zero_price_sets, ArbError, ArbitrageVerdict,
    Condition,
};

#[derive(Debug, Clone)]
pub struct FamilyChecks {
    pub family: FamilyKind,
    pub verdicts: Vec<ArbitrageVerdict>,
    /// Whether a weakly consistent price system exists from each `t < T`.
    pub wcps: Vec<bool>,
    /// The same for strictly consistent price systems.
    pub strict_wcps: Vec<bool>,
}

impl FamilyChecks {
    pub fn verdict(&self, c: Condition) -> Option<&ArbitrageVerdict> {
        self.verdicts.iter().find(|v| v.condition == c)
    }

    fn holds(&self, c: Condition) -> Option<bool> {
        self.verdict(c).map(|v| v.holds)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImplicationCheck {
    pub name: &'static str,
    pub family: FamilyKind,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct ImplicationReport {
    pub families: Vec<FamilyChecks>,
    pub checks: Vec<ImplicationCheck>,
}

impl ImplicationReport {
    pub fn violations(&self) -> Vec<&ImplicationCheck> {
        self.checks.iter().filter(|c| !c.holds).collect()
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn family(&self, kind: FamilyKind) -> Option<&FamilyChecks> {
        self.families.iter().find(|f| f.family == kind)
    }
}

/// `R_+^d \ {0} ⊆ int K_n` at every node: every facet normal is strictly
/// positive.
fn orthant_interior(tree: &ScenarioTree, k: &SolvencyProcess) -> bool {
    tree.node_ids().all(|n| {
        let kn = k.at(n);
        kn.equalities().is_empty()
            && kn
                .inequalities()
                .iter()
                .all(|h| h.normal.iter().all(|a| a.is_positive()))
    })
}

/// The interior form of no risk arbitrage: no `x` in the one-step risk map
/// of `X_{t+1}^0` has `-x` interior to `K_t`.
fn interior_form(
    tree: &ScenarioTree,
    k: &SolvencyProcess,
    family: &AcceptanceFamily,
) -> Result<bool, ArbError> {
    let d = tree.dim();
    let x = zero_price_sets(tree, k, family)?;
    for t in 0..tree.horizon() {
        let r = risk_map(tree, family, x.sets(), t)?;
        for &n in tree.nodes_at(t) {
            let strict: Vec<Vector> = k
                .at(n)
                .inequalities()
                .iter()
                .map(|h| linalg::neg(&h.normal))
                .collect();
            let weak: Vec<Vector> = r
                .at(n)
                .inequalities()
                .iter()
                .map(|h| h.normal.clone())
                .collect();
            let eqs: Vec<Vector> = r
                .at(n)
                .equalities()
                .iter()
                .map(|h| h.normal.clone())
                .collect();
            if strictly_feasible_direction(d, &strict, &weak, &eqs).is_some() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Runs the checkers for the ess-inf and expectation families on a conical
/// solvency process and tests the implications between the conditions.
/// Equivalences that need extra structure (strict properness, the orthant
/// lying inside `K`) are only tested when it is present.
pub fn implication_suite(
    tree: &ScenarioTree,
    k: &SolvencyProcess,
) -> Result<ImplicationReport, ArbError> {
    super::require_conical(k, Condition::Nra2)?;
    let strictly_proper = k.is_strictly_proper();
    let interior = orthant_interior(tree, k);
    let mut families = Vec::new();
    let mut checks = Vec::new();
    for family in [AcceptanceFamily::ess_inf(), AcceptanceFamily::expectation()] {
        let fk = family.kind;
        let mut verdicts = vec![
            check_nra(tree, k, &family)?,
            check_nara(tree, k, &family)?,
            check_snr(tree, k, &family)?,
            check_nra2(tree, k, &family)?,
            check_snar(tree, k, &family)?,
        ];
        if fk == FamilyKind::EssInf {
            verdicts.push(check_na2(tree, k)?);
            verdicts.push(check_nas(tree, k)?);
        }
        let mut wcps = Vec::new();
        let mut strict_wcps = Vec::new();
        for t in 0..tree.horizon() {
            wcps.push(find_wcps(tree, k, &family, t, false)?.is_found());
            strict_wcps.push(find_wcps(tree, k, &family, t, true)?.is_found());
        }
        let fc = FamilyChecks {
            family: fk,
            verdicts,
            wcps,
            strict_wcps,
        };
        let mut push = |name: &'static str, holds: bool, detail: String| {
            checks.push(ImplicationCheck {
                name,
                family: fk,
                holds,
                detail,
            })
        };

        for v in &fc.verdicts {
            if let Err(e) = verify_witness(tree, k, &family, v) {
                push("witness verifies", false, format!("{}: {e}", v.condition));
            }
            if v.agreement == Some(false) {
                push(
                    "methods agree",
                    false,
                    format!("{} formulations disagree", v.condition),
                );
            }
        }
        let h = |c| fc.holds(c).expect("verdict computed");
        let (nra, nara, snr) = (h(Condition::Nra), h(Condition::Nara), h(Condition::Snr));
        push("NARA implies NRA", !nara || nra, String::new());
        push("NRA equals NARA", nra == nara, String::new());
        if k.is_proper() {
            push("SNR implies NARA", !snr || nara, String::new());
        }
        if insolvent_positions_unacceptable(tree, k, &family)? {
            push(
                "NRA2 implies NARA",
                !h(Condition::Nra2) || nara,
                String::new(),
            );
        }
        if fk == FamilyKind::EssInf && strictly_proper {
            let (na2, nas, sna) = (h(Condition::Na2), h(Condition::Nas), h(Condition::Snar));
            push("NA2 implies SNR", !na2 || snr, String::new());
            push(
                "SNR, NAs and SNA are equivalent",
                snr == nas && nas == sna,
                format!("SNR={snr} NAs={nas} SNA={sna}"),
            );
        }
        if interior {
            let all = |v: &[bool]| v.iter().all(|&b| b);
            push(
                "NARA iff a weakly consistent price system exists",
                nara == all(&fc.wcps),
                format!("NARA={nara} wcps={:?}", fc.wcps),
            );
            if strictly_proper {
                push(
                    "SNR iff a strictly consistent price system exists",
                    snr == all(&fc.strict_wcps),
                    format!("SNR={snr} strict={:?}", fc.strict_wcps),
                );
            }
            let form = interior_form(tree, k, &family)?;
            push(
                "NRA equals its interior form",
                form == nra,
                format!("NRA={nra} interior form={form}"),
            );
        }
        families.push(fc);
    }
    Ok(ImplicationReport { families, checks })
}
