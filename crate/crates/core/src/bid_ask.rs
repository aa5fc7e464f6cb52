//! The two-asset model: a cash account and one risky asset quoted by a
//! bid-ask spread `[S^b, S^a]`, with solvency cone `C([b, a])`.
//!
//! The interval recursions below use scalar arithmetic only, so they give
//! an independent check on the polyhedral engine in dimension two.

use serde::Serialize;
use thiserror::Error;

use crate::acceptance::{AcceptanceFamily, FamilyKind};
use crate::arbitrage::{
    check_na2, check_nara, check_nra, check_nra2, check_snr, ArbError, Condition,
};
use crate::conditional::SetProcess;
use crate::hedging::{bid_ask_cone, solvency_from_bid_ask, HedgeError, SolvencyProcess};
use crate::linalg::Vector;
use crate::polyhedron::Polyhedron;
use crate::rational::Rational;
use crate::tree::{AdaptedProcess, NodeId, NodeLabel, ScalarProcess, ScenarioTree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BidAskError {
    #[error("the two-asset model needs dimension 2, the tree has dimension {0}")]
    Dimension(usize),
    #[error("node {0} has no bid or ask")]
    Missing(NodeLabel),
    #[error("node {node}: prices must be positive")]
    NonPositive { node: NodeLabel },
    #[error("node {node}: bid {bid} exceeds ask {ask}")]
    Crossed {
        node: NodeLabel,
        bid: Rational,
        ask: Rational,
    },
    #[error(transparent)]
    Hedge(#[from] HedgeError),
    #[error(transparent)]
    Arbitrage(#[from] ArbError),
}

/// A closed interval `[lower, upper]`, empty when `lower > upper`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Interval {
    pub lower: Rational,
    pub upper: Rational,
}

impl Interval {
    pub fn new(lower: Rational, upper: Rational) -> Self {
        Interval { lower, upper }
    }

    pub fn is_empty(&self) -> bool {
        self.lower > self.upper
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lower <= x && x <= &self.upper
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        Interval::new(
            (&self.lower).max(&other.lower).clone(),
            (&self.upper).min(&other.upper).clone(),
        )
    }

    /// `C([b, a])`, the whole plane for an empty interval.
    pub fn cone(&self) -> Polyhedron {
        if self.is_empty() {
            Polyhedron::full(2)
        } else {
            bid_ask_cone(&self.lower, &self.upper)
        }
    }

    /// Generators of the dual cone `cone{(1, b), (1, a)}`.
    pub fn dual_generators(&self) -> Vec<Vector> {
        if self.is_empty() {
            return Vec::new();
        }
        let one = Rational::one();
        vec![
            vec![one.clone(), self.lower.clone()],
            vec![one, self.upper.clone()],
        ]
    }

    pub fn dual_cone(&self) -> Polyhedron {
        Polyhedron::cone(2, self.dual_generators()).expect("dimension 2")
    }
}

/// Smallest interval containing every nonempty member; empty if there is
/// none.
pub fn hull<'a>(items: impl IntoIterator<Item = &'a Interval>) -> Interval {
    let mut out: Option<Interval> = None;
    for i in items.into_iter().filter(|i| !i.is_empty()) {
        out = Some(match out {
            None => i.clone(),
            Some(h) => Interval::new(h.lower.min(i.lower.clone()), h.upper.max(i.upper.clone())),
        });
    }
    out.unwrap_or_else(|| Interval::new(Rational::one(), Rational::zero()))
}

/// Intersection of all members.
pub fn meet<'a>(items: impl IntoIterator<Item = &'a Interval>) -> Interval {
    let mut it = items.into_iter();
    let first = it.next().expect("at least one interval").clone();
    it.fold(first, |acc, i| acc.intersect(i))
}

pub type IntervalProcess = AdaptedProcess<Interval>;

/// Bid and ask processes with `0 < S^b <= S^a` at every node.
#[derive(Debug, Clone)]
pub struct BidAskProcess {
    bid: ScalarProcess,
    ask: ScalarProcess,
}

impl BidAskProcess {
    pub fn new(
        tree: &ScenarioTree,
        bid: ScalarProcess,
        ask: ScalarProcess,
    ) -> Result<Self, BidAskError> {
        if tree.dim() != 2 {
            return Err(BidAskError::Dimension(tree.dim()));
        }
        for n in tree.node_ids() {
            let label = || tree.label(n).clone();
            let (Some(b), Some(a)) = (bid.get(n), ask.get(n)) else {
                return Err(BidAskError::Missing(label()));
            };
            if !b.is_positive() || !a.is_positive() {
                return Err(BidAskError::NonPositive { node: label() });
            }
            if b > a {
                return Err(BidAskError::Crossed {
                    node: label(),
                    bid: b.clone(),
                    ask: a.clone(),
                });
            }
        }
        Ok(BidAskProcess { bid, ask })
    }

    pub fn bid(&self) -> &ScalarProcess {
        &self.bid
    }

    pub fn ask(&self) -> &ScalarProcess {
        &self.ask
    }

    pub fn at(&self, n: NodeId) -> Interval {
        Interval::new(self.bid.at(n).clone(), self.ask.at(n).clone())
    }

    pub fn intervals(&self, tree: &ScenarioTree) -> IntervalProcess {
        IntervalProcess::everywhere(tree, |n| self.at(n))
    }

    pub fn solvency(&self, tree: &ScenarioTree) -> Result<SolvencyProcess, BidAskError> {
        Ok(solvency_from_bid_ask(tree, &self.bid, &self.ask)?)
    }
}

/// Maps every interval to its cone.
pub fn cones(tree: &ScenarioTree, y: &IntervalProcess) -> SetProcess {
    let mut out = SetProcess::new(tree);
    for (n, i) in y.entries() {
        out.set(n, i.cone());
    }
    out
}

fn backwards(
    tree: &ScenarioTree,
    y: &BidAskProcess,
    step: impl Fn(&Interval, Vec<&Interval>) -> Interval,
) -> IntervalProcess {
    let mut out = IntervalProcess::new(tree);
    for &l in tree.leaves() {
        out.set(l, y.at(l));
    }
    for t in (0..tree.horizon()).rev() {
        for &n in tree.nodes_at(t) {
            let children = tree.children(n).iter().map(|&c| out.at(c)).collect();
            let v = step(&y.at(n), children);
            out.set(n, v);
        }
    }
    out
}

/// `S~_T = S_T` and `S~_t = Y_t ∩ [min S~^b_{t+1}, max S~^a_{t+1}]`, the hull
/// taken over nonempty children. Without empty children this is the
/// max/min recursion `S~^a_t = S^a_t ∧ max S~^a_{t+1}`,
/// `S~^b_t = S^b_t ∨ min S~^b_{t+1}`; an empty child has cone `Q^2` and so
/// drops out of the intersection of cones.
pub fn tilde_recursion(tree: &ScenarioTree, y: &BidAskProcess) -> IntervalProcess {
    backwards(tree, y, |own, children| {
        let h = hull(children);
        if h.is_empty() {
            h
        } else {
            own.intersect(&h)
        }
    })
}

/// `S^_T = S_T` and `S^_t = Y_t ∩ [max S^^b_{t+1}, min S^^a_{t+1}]`; empty as
/// soon as the children do not overlap.
pub fn hat_recursion(tree: &ScenarioTree, y: &BidAskProcess) -> IntervalProcess {
    backwards(tree, y, |own, children| own.intersect(&meet(children)))
}

/// The one-step strict condition at a node with spread `[b, a]` against the
/// interval `r` of next-period prices: `b <= r.upper` and `a >= r.lower`,
/// strictly when `b < a`.
fn strict_step(own: &Interval, r: &Interval) -> bool {
    if r.is_empty() {
        return false;
    }
    if own.lower < own.upper {
        own.lower < r.upper && own.upper > r.lower
    } else {
        own.lower <= r.upper && own.upper >= r.lower
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremCheck {
    pub condition: Condition,
    pub family: FamilyKind,
    /// Verdict of the interval criterion.
    pub interval: bool,
    /// Verdict of the general engine on `C(Y)`.
    pub engine: bool,
    /// First node where the interval criterion fails.
    pub node: Option<NodeId>,
}

impl TheoremCheck {
    pub fn agrees(&self) -> bool {
        self.interval == self.engine
    }
}

#[derive(Debug, Clone)]
pub struct TwoAssetReport {
    pub tilde: IntervalProcess,
    pub hat: IntervalProcess,
    pub checks: Vec<TheoremCheck>,
}

impl TwoAssetReport {
    pub fn check(&self, family: FamilyKind, condition: Condition) -> Option<&TheoremCheck> {
        self.checks
            .iter()
            .find(|c| c.family == family && c.condition == condition)
    }

    pub fn all_agree(&self) -> bool {
        self.checks.iter().all(TheoremCheck::agrees)
    }
}

fn first_failure(tree: &ScenarioTree, ok: impl Fn(NodeId) -> bool) -> Option<NodeId> {
    tree.node_ids().find(|&n| !ok(n))
}

fn inner(tree: &ScenarioTree, n: NodeId) -> bool {
    !tree.is_leaf(n)
}

/// Criteria for the ess-inf family: SNR through the tilde recursion, NA2
/// from the raw spreads, NRA as nonemptiness of every tilde interval.
pub fn ess_inf_criteria(
    tree: &ScenarioTree,
    y: &BidAskProcess,
    tilde: &IntervalProcess,
) -> Vec<(Condition, Option<NodeId>)> {
    let kids = |n: NodeId| tree.children(n).iter().map(|&c| tilde.at(c));
    let snr = first_failure(tree, |n| {
        !inner(tree, n) || strict_step(&y.at(n), &hull(kids(n)))
    });
    let na2 = first_failure(tree, |n| {
        if !inner(tree, n) {
            return true;
        }
        let ch = tree.children(n);
        let max_ask = ch.iter().map(|&c| y.ask().at(c)).max().expect("children");
        let min_bid = ch.iter().map(|&c| y.bid().at(c)).min().expect("children");
        max_ask >= y.ask().at(n) && y.bid().at(n) >= min_bid
    });
    let nra = first_failure(tree, |n| !tilde.at(n).is_empty());
    vec![
        (Condition::Snr, snr),
        (Condition::Na2, na2),
        (Condition::Nra, nra),
    ]
}

/// Criteria for the expectation family. SNR asks `b < min S^^a`,
/// `a > max S^^b` and overlapping children at every parent (non-strict
/// where the spread is degenerate); NARA asks every hat interval to be
/// nonempty; NRA2 compares conditional means of price sets and of
/// solvency sets, which for cones of intervals reads
/// `∩_c S^_c = ∩_c Y_c` whenever the right side is nonempty, with
/// `S^_0 = Y_0` at the root.
pub fn expectation_criteria(
    tree: &ScenarioTree,
    y: &BidAskProcess,
    hat: &IntervalProcess,
) -> Vec<(Condition, Option<NodeId>)> {
    let kids = |n: NodeId| tree.children(n).iter().map(|&c| hat.at(c));
    let snr = first_failure(tree, |n| {
        !inner(tree, n) || strict_step(&y.at(n), &meet(kids(n)))
    });
    let nara = first_failure(tree, |n| !hat.at(n).is_empty());
    let nra2 = first_failure(tree, |n| {
        if n == tree.root() && hat.at(n) != &y.at(n) {
            return false;
        }
        if !inner(tree, n) {
            return true;
        }
        let raw = meet(
            tree.children(n)
                .iter()
                .map(|&c| y.at(c))
                .collect::<Vec<_>>()
                .iter(),
        );
        raw.is_empty() || meet(kids(n)) == raw
    });
    vec![
        (Condition::Snr, snr),
        (Condition::Nara, nara),
        (Condition::Nra2, nra2),
    ]
}

/// Evaluates the interval criteria and checks each against the general
/// arbitrage module on the induced solvency process.
pub fn check_2d_theorems(
    tree: &ScenarioTree,
    y: &BidAskProcess,
) -> Result<TwoAssetReport, BidAskError> {
    let k = y.solvency(tree)?;
    let tilde = tilde_recursion(tree, y);
    let hat = hat_recursion(tree, y);
    let mut checks = Vec::new();
    let ess = AcceptanceFamily::ess_inf();
    let exp = AcceptanceFamily::expectation();
    let engine = |family: &AcceptanceFamily, c: Condition| -> Result<bool, ArbError> {
        Ok(match c {
            Condition::Snr => check_snr(tree, &k, family)?.holds,
            Condition::Na2 => check_na2(tree, &k)?.holds,
            Condition::Nra => check_nra(tree, &k, family)?.holds,
            Condition::Nara => check_nara(tree, &k, family)?.holds,
            Condition::Nra2 => check_nra2(tree, &k, family)?.holds,
            other => unreachable!("{other} has no interval criterion"),
        })
    };
    for (family, list) in [
        (&ess, ess_inf_criteria(tree, y, &tilde)),
        (&exp, expectation_criteria(tree, y, &hat)),
    ] {
        for (condition, node) in list {
            checks.push(TheoremCheck {
                condition,
                family: family.kind,
                interval: node.is_none(),
                engine: engine(family, condition)?,
                node,
            });
        }
    }
    Ok(TwoAssetReport { tilde, hat, checks })
}
