//! Weakly and strictly consistent price systems.
//!
//! The pair `(Q, Z)` is represented by one `P`-martingale `M`; the density
//! is absorbed because every constraint is invariant under positive scaling
//! node by node. The acceptance condition `E<Z_u, eta_u> >= 0` for all
//! acceptable `eta_u` becomes membership of the stacked vector
//! `(p_c M(c))_c` in the dual of the parent's lifted cone.

use std::fmt;

use crate::acceptance::{AcceptanceFamily, FamilyKind};
use crate::hedging::SolvencyProcess;
use crate::linalg::{self, Vector};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::rational::Rational;
use crate::tree::{NodeId, ScenarioTree, VectorProcess};

use super::{require_conical, ArbError, Condition};

pub const EXPECTATION_REDUCTION_NOTE: &str =
    "under the expectation family the acceptance constraints force M(child) = M(parent)";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriceSystemCandidate {
    pub t: usize,
    /// Defined at every node of time `>= t`.
    pub values: VectorProcess,
    pub strict: bool,
    /// The least value of `g . M(n)` over primitive extreme rays `g` of `K_n`
    /// at the time-`t` nodes, after normalising `sum_i M_i(n) = 1`.
    pub epsilon: Rational,
    pub note: Option<String>,
}

#[derive(Debug, Clone)]
pub enum WcpsOutcome {
    Found(PriceSystemCandidate),
    /// The search program, with a Farkas certificate of its infeasibility.
    Infeasible {
        lp: LinearProgram,
        farkas: Vector,
    },
}

impl WcpsOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, WcpsOutcome::Found(_))
    }

    pub fn candidate(&self) -> Option<&PriceSystemCandidate> {
        match self {
            WcpsOutcome::Found(c) => Some(c),
            WcpsOutcome::Infeasible { .. } => None,
        }
    }
}

fn reduction_note(family: &AcceptanceFamily) -> Option<String> {
    (family.kind == FamilyKind::Expectation).then(|| EXPECTATION_REDUCTION_NOTE.to_string())
}

/// All nodes of time `>= t`, by time.
fn later_nodes(tree: &ScenarioTree, t: usize) -> Vec<NodeId> {
    (t..=tree.horizon())
        .flat_map(|u| tree.nodes_at(u).iter().copied())
        .collect()
}

/// Searches for a `t`-weakly consistent price system: a martingale `M` from
/// time `t` on with `M(n) ∈ K_n*`, nonzero at every time-`t` node, and
/// satisfying the acceptance condition. With `strict`, `M(n)` must lie in
/// the interior of `K_n*` at the time-`t` nodes: `g . M(n) > 0` for every
/// nonzero generator `g` of `K_n`, lines in both directions.
pub fn find_wcps(
    tree: &ScenarioTree,
    k: &SolvencyProcess,
    family: &AcceptanceFamily,
    t: usize,
    strict: bool,
) -> Result<WcpsOutcome, ArbError> {
    require_conical(k, Condition::Nara)?;
    if t > tree.horizon() {
        return Err(ArbError::BadTime {
            t,
            horizon: tree.horizon(),
        });
    }
    let d = tree.dim();
    let nodes = later_nodes(tree, t);
    let mut pos = vec![usize::MAX; tree.len()];
    for (j, &m) in nodes.iter().enumerate() {
        pos[m.0] = j * d;
    }
    let n = nodes.len() * d;
    let row = |m: NodeId, a: &[Rational]| {
        let mut r = linalg::zeros(n);
        r[pos[m.0]..pos[m.0] + d].clone_from_slice(a);
        r
    };
    let mut lp = LinearProgram::feasibility(n);
    for &m in &nodes {
        let km = k.at(m);
        for r in km.rays() {
            lp.add(row(m, r), Relation::Ge, Rational::zero());
        }
        for l in km.lines() {
            lp.add(row(m, l), Relation::Eq, Rational::zero());
        }
        if tree.is_leaf(m) {
            continue;
        }
        for i in 0..d {
            let mut r = linalg::zeros(n);
            r[pos[m.0] + i] = -Rational::one();
            for &c in tree.children(m) {
                r[pos[c.0] + i] = tree.cond_prob(c).clone();
            }
            lp.add(r, Relation::Eq, Rational::zero());
        }
        let cone = family.lifted_cone(tree, m)?;
        let weighted = |g: &[Rational]| {
            let mut r = linalg::zeros(n);
            for (j, &c) in cone.children.iter().enumerate() {
                let p = tree.cond_prob(c);
                for i in 0..d {
                    r[pos[c.0] + i] = p * &g[j * d + i];
                }
            }
            r
        };
        for g in &cone.rays {
            lp.add(weighted(g), Relation::Ge, Rational::zero());
        }
        for g in &cone.lines {
            lp.add(weighted(g), Relation::Eq, Rational::zero());
        }
    }
    for &m in tree.nodes_at(t) {
        if strict {
            let km = k.at(m);
            let gens = km
                .rays()
                .iter()
                .cloned()
                .chain(km.lines().iter().flat_map(|l| [l.clone(), linalg::neg(l)]));
            for g in gens {
                lp.add(row(m, &g), Relation::Ge, Rational::one());
            }
        } else {
            lp.add(
                row(m, &vec![Rational::one(); d]),
                Relation::Eq,
                Rational::one(),
            );
        }
    }

    let x = match lp.solve() {
        LpOutcome::Infeasible { farkas } => return Ok(WcpsOutcome::Infeasible { lp, farkas }),
        LpOutcome::Optimal { x, .. } => x,
        LpOutcome::Unbounded { .. } => unreachable!("feasibility programs have a zero objective"),
    };
    let mut values = VectorProcess::new(tree);
    for &m in &nodes {
        values.set(m, x[pos[m.0]..pos[m.0] + d].to_vec());
    }
    // rescale each time-t subtree so that the components at its root sum to one
    for &m in tree.nodes_at(t) {
        let total: Rational = values.at(m).iter().sum();
        if total.is_positive() && !total.is_one() {
            let inv = total.recip();
            for u in t..=tree.horizon() {
                for &c in tree.descendants_at(m, u) {
                    let v = linalg::scale(values.at(c), &inv);
                    values.set(c, v);
                }
            }
        }
    }
    let vals = &values;
    let epsilon = tree
        .nodes_at(t)
        .iter()
        .flat_map(|&m| {
            k.at(m)
                .rays()
                .iter()
                .map(move |g| linalg::dot(&linalg::primitive(g), vals.at(m)))
        })
        .min()
        .unwrap_or_else(Rational::zero);
    Ok(WcpsOutcome::Found(PriceSystemCandidate {
        t,
        values,
        strict,
        epsilon,
        note: reduction_note(family),
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PriceCheck {
    Martingale,
    DualCone,
    Acceptance,
    Normalisation,
    Interior,
}

impl fmt::Display for PriceCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PriceCheck::Martingale => "martingale",
            PriceCheck::DualCone => "dual_cone",
            PriceCheck::Acceptance => "acceptance",
            PriceCheck::Normalisation => "normalisation",
            PriceCheck::Interior => "interior",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriceCheckFailure {
    pub kind: PriceCheck,
    pub node: NodeId,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriceSystemReport {
    pub checked: usize,
    pub failures: Vec<PriceCheckFailure>,
    pub note: Option<String>,
}

impl PriceSystemReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failures_of(&self, kind: PriceCheck) -> Vec<&PriceCheckFailure> {
        self.failures.iter().filter(|f| f.kind == kind).collect()
    }
}

/// Re-checks every constraint of a candidate by exact substitution.
pub fn verify_price_system(
    tree: &ScenarioTree,
    k: &SolvencyProcess,
    family: &AcceptanceFamily,
    z: &PriceSystemCandidate,
) -> PriceSystemReport {
    let d = tree.dim();
    let mut report = PriceSystemReport {
        checked: 0,
        failures: Vec::new(),
        note: reduction_note(family),
    };
    let fail = |report: &mut PriceSystemReport, kind, node, detail: String| {
        report
            .failures
            .push(PriceCheckFailure { kind, node, detail });
    };
    let nodes = later_nodes(tree, z.t.min(tree.horizon()));
    if let Some(&m) = nodes
        .iter()
        .find(|&&m| z.values.get(m).is_none_or(|v| v.len() != d))
    {
        fail(
            &mut report,
            PriceCheck::Martingale,
            m,
            "no value of the right dimension".into(),
        );
        return report;
    }
    let val = |m: NodeId| z.values.at(m);
    for &m in &nodes {
        let km = k.at(m);
        report.checked += 1;
        let dual_ok = km
            .rays()
            .iter()
            .all(|r| !linalg::dot(r, val(m)).is_negative())
            && km.lines().iter().all(|l| linalg::dot(l, val(m)).is_zero())
            && km
                .vertices()
                .iter()
                .all(|v| !linalg::dot(v, val(m)).is_negative());
        if !dual_ok {
            fail(
                &mut report,
                PriceCheck::DualCone,
                m,
                "value lies outside the dual cone".into(),
            );
        }
        if tree.is_leaf(m) {
            continue;
        }
        report.checked += 1;
        let mut mean = linalg::zeros(d);
        for &c in tree.children(m) {
            mean = linalg::axpy(&mean, tree.cond_prob(c), val(c));
        }
        if &mean != val(m) {
            fail(
                &mut report,
                PriceCheck::Martingale,
                m,
                "children do not average to the node value".into(),
            );
        }
        report.checked += 1;
        match family.lifted_cone(tree, m) {
            Ok(cone) => {
                let mut stacked = Vec::with_capacity(cone.ambient_dim());
                for &c in &cone.children {
                    stacked.extend(linalg::scale(val(c), tree.cond_prob(c)));
                }
                let ok = cone
                    .rays
                    .iter()
                    .all(|g| !linalg::dot(g, &stacked).is_negative())
                    && cone
                        .lines
                        .iter()
                        .all(|g| linalg::dot(g, &stacked).is_zero());
                if !ok {
                    fail(
                        &mut report,
                        PriceCheck::Acceptance,
                        m,
                        "an acceptable increment has negative value".into(),
                    );
                }
            }
            Err(e) => fail(&mut report, PriceCheck::Acceptance, m, e.to_string()),
        }
    }
    for &m in tree.nodes_at(z.t.min(tree.horizon())) {
        report.checked += 1;
        if linalg::is_zero(val(m)) {
            fail(
                &mut report,
                PriceCheck::Normalisation,
                m,
                "value vanishes at a starting node".into(),
            );
        }
        if z.strict {
            report.checked += 1;
            let km = k.at(m);
            let interior = km.lines().is_empty()
                && km
                    .rays()
                    .iter()
                    .all(|r| linalg::dot(r, val(m)).is_positive());
            if !interior {
                fail(
                    &mut report,
                    PriceCheck::Interior,
                    m,
                    "value is not interior to the dual cone".into(),
                );
            }
        }
    }
    report
}
