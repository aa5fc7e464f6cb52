//! Re-verification of negative verdicts by direct arithmetic.

use crate::acceptance::{AcceptanceFamily, FamilyKind, LiftedCone};
use crate::conditional::cond_expectation_set;
use crate::hedging::SolvencyProcess;
use crate::linalg::{self, Vector};
use crate::rational::Rational;
use crate::tree::{NodeId, ScenarioTree};

use super::{zero_price_sets, ArbitrageVerdict, Condition, Strategy, Witness};

fn need<'a, T>(x: &'a Option<T>, what: &str) -> Result<&'a T, String> {
    x.as_ref().ok_or_else(|| format!("witness has no {what}"))
}

fn trade(s: &Strategy, m: NodeId) -> Result<&Vector, String> {
    s.trade(m)
        .ok_or_else(|| format!("strategy has no trade at node {m}"))
}

fn zero(d: usize) -> Vector {
    linalg::zeros(d)
}

/// Checks the trades and increments of `s` on the subtree of `start`, and
/// returns the terminal sum `sum k + sum eta` at every leaf below it. The
/// increment at `start` itself counts only when `root_increment` is set.
fn replay(
    tree: &ScenarioTree,
    k: &SolvencyProcess,
    family: &AcceptanceFamily,
    start: NodeId,
    s: &Strategy,
    root_increment: bool,
) -> Result<Vec<(NodeId, Vector)>, String> {
    let d = tree.dim();
    for m in tree.subtree(start) {
        if !k.at(m).contains(trade(s, m)?) {
            return Err(format!("trade at node {m} is not solvent"));
        }
        if !tree.is_leaf(m) {
            let cone = family.lifted_cone(tree, m).map_err(|e| e.to_string())?;
            check_lifted(&cone, s, d, m)?;
        }
    }
    if root_increment {
        let cone = LiftedCone::root(tree);
        check_lifted(&cone, s, d, start)?;
    }
    let mut out = Vec::new();
    for &leaf in tree.descendants_at(start, tree.horizon()) {
        let mut sum = zero(d);
        for m in tree.path(start, leaf) {
            sum = linalg::add(&sum, trade(s, m)?);
            if m != start || root_increment {
                let e = s.increment(m).cloned().unwrap_or_else(|| zero(d));
                sum = linalg::add(&sum, &e);
            }
        }
        out.push((leaf, sum));
    }
    Ok(out)
}

fn check_lifted(cone: &LiftedCone, s: &Strategy, d: usize, parent: NodeId) -> Result<(), String> {
    let mut z = Vec::with_capacity(cone.ambient_dim());
    for &c in &cone.children {
        z.extend(s.increment(c).cloned().unwrap_or_else(|| zero(d)));
    }
    if cone.contains(&z) {
        Ok(())
    } else {
        Err(format!("increments below node {parent} are not acceptable"))
    }
}

/// Replays a strategy started at `node` with endowment `v` that must end
/// in the zero claim at every leaf.
fn check_replication(
    tree: &ScenarioTree,
    k: &SolvencyProcess,
    family: &AcceptanceFamily,
    w: &Witness,
    v: &[Rational],
) -> Result<(), String> {
    let s = need(&w.strategy, "strategy")?;
    for (leaf, sum) in replay(tree, k, family, w.node, s, false)? {
        if sum != v {
            return Err(format!(
                "strategy does not reach the endowment at leaf {leaf}"
            ));
        }
    }
    Ok(())
}

/// Re-verifies the witness of a negative verdict by substitution:
///
/// * NRA, NARA: `v <= 0`, `v != 0`, and a strategy from `v` at the node
///   replicates the zero claim;
/// * SNR: `-x ∈ K`, `x ∉ K^0`, and a strategy from `x` replicates zero;
/// * SNAR: solvent trades and acceptable increments over the whole tree
///   that cancel at every leaf, one of them outside `K^0` or nonzero;
/// * NAs: solvent trades up to the node's time whose negated running sum
///   is solvent at every node of that time and not in `K^0` at the node;
/// * NA2 and NRA2 (ess inf): `x` solvent at every child but not at the node;
/// * NRA2 (expectation): at the root `x ∈ X_0^0 \ K_0` with a replicating
///   strategy (it trades at the root); at a parent a selection of the
///   children's price sets whose mean `x` is outside the conditional
///   expectation of `K`.
pub fn verify_witness(
    tree: &ScenarioTree,
    k: &SolvencyProcess,
    family: &AcceptanceFamily,
    verdict: &ArbitrageVerdict,
) -> Result<(), String> {
    if verdict.holds {
        return Ok(());
    }
    let w = need(&verdict.witness, "data")?;
    let d = tree.dim();
    match verdict.condition {
        Condition::Nra | Condition::Nara => {
            let v = need(&w.position, "position")?;
            if linalg::is_zero(v) || v.iter().any(|x| x.is_positive()) {
                return Err("released position is not nonzero and nonpositive".into());
            }
            check_replication(tree, k, family, w, v)
        }
        Condition::Snr => {
            let x = need(&w.position, "position")?;
            if !k.at(w.node).contains(&linalg::neg(x)) {
                return Err("the negated position is not solvent".into());
            }
            if k.at(w.node).in_lineality(x) {
                return Err("the position lies in K^0".into());
            }
            check_replication(tree, k, family, w, x)
        }
        Condition::Snar => {
            let s = need(&w.strategy, "strategy")?;
            for (leaf, sum) in replay(tree, k, family, tree.root(), s, true)? {
                if !linalg::is_zero(&sum) {
                    return Err(format!("strategy does not cancel at leaf {leaf}"));
                }
            }
            let km = trade(s, w.node)?;
            let em = s.increment(w.node).cloned().unwrap_or_else(|| zero(d));
            if linalg::is_zero(&em) && k.at(w.node).in_lineality(km) {
                return Err(format!("node {} carries no strict gain", w.node));
            }
            Ok(())
        }
        Condition::Nas => {
            let s = need(&w.strategy, "strategy")?;
            let t = tree.time(w.node);
            for &n in tree.nodes_at(t) {
                let mut g = zero(d);
                for m in tree.path(tree.root(), n) {
                    let km = trade(s, m)?;
                    if !k.at(m).contains(km) {
                        return Err(format!("trade at node {m} is not solvent"));
                    }
                    g = linalg::sub(&g, km);
                }
                if !k.at(n).contains(&g) {
                    return Err(format!("liquidation value at node {n} is not solvent"));
                }
                if n == w.node {
                    if k.at(n).in_lineality(&g) {
                        return Err("liquidation value lies in K^0".into());
                    }
                    if w.position.as_ref() != Some(&g) {
                        return Err("reported position differs from the liquidation value".into());
                    }
                }
            }
            Ok(())
        }
        Condition::Na2 | Condition::Nra2
            if family.kind == FamilyKind::EssInf || verdict.condition == Condition::Na2 =>
        {
            let x = need(&w.position, "position")?;
            if tree.is_leaf(w.node) {
                return Err("a leaf has no next period".into());
            }
            if tree.children(w.node).iter().any(|&c| !k.at(c).contains(x)) {
                return Err("position is not solvent at every child".into());
            }
            if k.at(w.node).contains(x) {
                return Err("position is already solvent at the node".into());
            }
            Ok(())
        }
        Condition::Na2 | Condition::Nra2 => {
            let x = need(&w.position, "position")?;
            let s = need(&w.strategy, "strategy")?;
            let node = w.node;
            if s.trade(node).is_some() {
                if node != tree.root() {
                    return Err("a replicating witness must start at the root".into());
                }
                if k.at(node).contains(x) {
                    return Err("position is solvent at the root".into());
                }
                return check_replication(tree, k, family, w, x);
            }
            let prices = zero_price_sets(tree, k, family).map_err(|e| e.to_string())?;
            let mut mean = zero(d);
            for &c in tree.children(node) {
                let xc = trade(s, c)?;
                if !prices.at(c).contains(xc) {
                    return Err(format!("selection at node {c} is outside the price set"));
                }
                mean = linalg::axpy(&mean, tree.cond_prob(c), xc);
            }
            if &mean != x {
                return Err("selection mean differs from the position".into());
            }
            let t = tree.time(node) + 1;
            let ek = cond_expectation_set(tree, k.sets(), t, t - 1).map_err(|e| e.to_string())?;
            if ek.at(node).contains(x) {
                return Err("position lies in the conditional expectation of K".into());
            }
            Ok(())
        }
    }
}
