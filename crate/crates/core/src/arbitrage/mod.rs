//! No-risk-arbitrage conditions on a finite tree.
//!
//! Every checker works node by node: on a finite tree all `L0` conditions
//! decompose into conditions on the atoms. The geometric checkers use the
//! zero-claim price sets `X_t^0`; the lifted checkers solve exact linear
//! programs over whole strategies.

mod suite;
mod wcps;
mod witness;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::acceptance::{risk_map, AccError, AcceptanceFamily, FamilyKind, LiftedCone};
use crate::conditional::{cond_expectation_set, CondError};
use crate::hedging::{
    superhedge_recursion, zero_claim, Endowment, HedgeError, LiftedModel, PriceSetProcess,
    SolvencyProcess,
};
use crate::linalg::{self, Vector};
use crate::lp::{LinearProgram, LpOutcome, Relation, Sense};
use crate::parallel::par_map;
use crate::polyhedron::{dd, PolyError, Polyhedron};
use crate::rational::Rational;
use crate::tree::{NodeId, ScenarioTree};

pub use suite::{implication_suite, FamilyChecks, ImplicationCheck, ImplicationReport};
pub use wcps::{
    find_wcps, verify_price_system, PriceCheck, PriceCheckFailure, PriceSystemCandidate,
    PriceSystemReport, WcpsOutcome, EXPECTATION_REDUCTION_NOTE,
};
pub use witness::verify_witness;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    Snr,
    Nra,
    Nara,
    Nra2,
    Snar,
    Na2,
    Nas,
}

impl Condition {
    pub const ALL: [Condition; 7] = [
        Condition::Snr,
        Condition::Nra,
        Condition::Nara,
        Condition::Nra2,
        Condition::Snar,
        Condition::Na2,
        Condition::Nas,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Condition::Snr => "SNR",
            Condition::Nra => "NRA",
            Condition::Nara => "NARA",
            Condition::Nra2 => "NRA2",
            Condition::Snar => "SNAR",
            Condition::Na2 => "NA2",
            Condition::Nas => "NAs",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown arbitrage condition `{0}`")]
pub struct ParseConditionError(pub String);

impl FromStr for Condition {
    type Err = ParseConditionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Condition::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| ParseConditionError(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Geometric,
    LiftedLp,
    RayEnumeration,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Geometric => "geometric",
            Method::LiftedLp => "lifted_lp",
            Method::RayEnumeration => "ray_enumeration",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Trades `k_m` and acceptable increments `eta_m`, keyed by node.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Strategy {
    pub trades: Vec<(NodeId, Vector)>,
    pub increments: Vec<(NodeId, Vector)>,
}

impl Strategy {
    pub fn trade(&self, m: NodeId) -> Option<&Vector> {
        self.trades.iter().find(|(n, _)| *n == m).map(|(_, v)| v)
    }

    pub fn increment(&self, m: NodeId) -> Option<&Vector> {
        self.increments
            .iter()
            .find(|(n, _)| *n == m)
            .map(|(_, v)| v)
    }
}

/// The data that exhibits a violation. What `position` and `strategy` mean
/// depends on the condition; `verify_witness` spells it out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub node: NodeId,
    pub position: Option<Vector>,
    pub strategy: Option<Strategy>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArbitrageVerdict {
    pub condition: Condition,
    pub family: FamilyKind,
    pub holds: bool,
    pub method: Method,
    pub witness: Option<Witness>,
    /// Whether an independent formulation of the same test agreed, when one ran.
    pub agreement: Option<bool>,
    pub note: Option<String>,
}

impl ArbitrageVerdict {
    fn new(
        condition: Condition,
        family: FamilyKind,
        method: Method,
        witness: Option<Witness>,
    ) -> Self {
        ArbitrageVerdict {
            condition,
            family,
            holds: witness.is_none(),
            method,
            witness,
            agreement: None,
            note: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArbError {
    #[error("{condition} is not available for the {family} family")]
    UnsupportedFamily {
        condition: Condition,
        family: FamilyKind,
    },
    #[error("{0} is only implemented for conical solvency sets")]
    NotConical(Condition),
    #[error("time {t} is beyond the horizon {horizon}")]
    BadTime { t: usize, horizon: usize },
    #[error(transparent)]
    Hedge(#[from] HedgeError),
    #[error(transparent)]
    Acceptance(#[from] AccError),
    #[error(transparent)]
    Cond(#[from] CondError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

fn require_polyhedral(family: &AcceptanceFamily, condition: Condition) -> Result<(), ArbError> {
    if family.set_valued_risk_map() {
        Ok(())
    } else {
        Err(ArbError::UnsupportedFamily {
            condition,
            family: family.kind,
        })
    }
}

fn require_conical(k: &SolvencyProcess, condition: Condition) -> Result<(), ArbError> {
    if k.is_conical() {
        Ok(())
    } else {
        Err(ArbError::NotConical(condition))
    }
}

/// The price sets `X_t^0` of the zero claim.
pub fn zero_price_sets(
    tree: &ScenarioTree,
    k: &SolvencyProcess,
    family: &AcceptanceFamily,
) -> Result<PriceSetProcess, ArbError> {
    Ok(superhedge_recursion(tree, k, &zero_claim(tree), family)?)
}

/// A point of `q` outside `target`, when `q` is not contained in it. Both
/// sets are nonempty; vertices are tried first, then points far out along
/// a recession direction that leaves `target`.
pub(crate) fn point_outside(q: &Polyhedron, target: &Polyhedron) -> Option<Vector> {
    if q.is_empty() {
        return None;
    }
    if let Some(v) = q.vertices().iter().find(|v| !target.contains(v)) {
        return Some(v.clone());
    }
    let base = q.vertices().first()?.clone();
    let dirs = q
        .rays()
        .iter()
        .cloned()
        .chain(q.lines().iter().flat_map(|l| [l.clone(), linalg::neg(l)]));
    for r in dirs {
        if target.recedes_along(&r) {
            continue;
        }
        for h in target.inequalities() {
            let slope = linalg::dot(&h.normal, &r);
            if slope.is_negative() {
                let gap = linalg::dot(&h.normal, &base) - &h.offset;
                let lambda = gap / (-slope) + Rational::one();
                return Some(linalg::axpy(&base, &lambda, &r));
            }
        }
        if target
            .equalities()
            .iter()
            .any(|h| !linalg::dot(&h.normal, &r).is_zero())
        {
            return Some(linalg::add(&base, &r));
        }
    }
    None
}

fn strategy_from(model: &LiftedModel, x: &[Rational]) -> Strategy {
    Strategy {
        trades: model
            .nodes
            .iter()
            .map(|&m| (m, model.k_value(x, m).expect("every subtree node trades")))
            .collect(),
        increments: model
            .nodes
            .iter()
            .filter_map(|&m| model.eta_value(x, m).map(|e| (m, e)))
            .collect(),
    }
}

/// A strategy started at `node` with endowment `v` and ending in the zero
/// claim, when one exists.
pub fn replicating_strategy(
    tree: &ScenarioTree,
    k: &SolvencyProcess,
    family: &AcceptanceFamily,
    node: NodeId,
    v: &[Rational],
) -> Result<Option<Strategy>, ArbError> {
    let model = LiftedModel::build(tree, k, family, node, None, &Endowment::Fixed(v.to_vec()))?;
    Ok(match model.lp.solve() {
        LpOutcome::Optimal { x, .. } => Some(strategy_from(&model, &x)),
        _ => None,
    })
}

/// The lifted search for a released position: maximise `-sum v` over
/// endowments `v <= 0` started at `node`, with `-sum v <= 1`.
fn lifted_release(
    tree: &ScenarioTree,
    k: &SolvencyProcess,
    family: &AcceptanceFamily,
    node: NodeId,
) -> Result<Option<(Vector, Strategy)>, ArbError> {
    let d = tree.dim();
    let model = LiftedModel::build(tree, k, family, node, None, &Endowment::Free)?;
    let mut lp = model.lp.clone();
    let mut obj = linalg::zeros(lp.n);
    for i in 0..d {
        obj[model.v_index(i).expect("free endowment")] = -Rational::one();
    }
    for i in 0..d {
        lp.add(
            linalg::unit(lp.n, model.v_index(i).expect("free endowment")),
            Relation::Le,
            Rational::zero(),
        );
    }
    lp.add(obj.clone(), Relation::Le, Rational::one());
    lp.objective = obj;
    lp.sense = Sense::Max;
    match lp.solve() {
        LpOutcome::Optimal { x, value, .. } if value.is_positive() => {
            let v = model.v_value(&x).expect("free endowment");
            Ok(Some((v, strategy_from(&model, &x))))
        }
        _ => Ok(None),
    }
}

pub fn check_nra(
    tree: &ScenarioTree,
    k: &SolvencyProcess,
    family: &AcceptanceFamily,
) -> Result<ArbitrageVerdict, ArbError> {
    release_verdict(tree, k, family, Condition::Nra)
}

/// On a finite tree the price sets are closed, so no asymptotic risk
/// arbitrage coincides with no risk arbitrage; the test is the same.
pub fn check_nara(
    tree: &ScenarioTree,
    k: &SolvencyProcess,
    family: &AcceptanceFamily,
) -> Result<ArbitrageVerdict, ArbError> {
    release_verdict(tree, k, family, Condition::Nara)
}

fn release_verdict(
    tree: &ScenarioTree,
    k: &SolvencyProcess,
    family: &AcceptanceFamily,
    condition: Condition,
) -> Result<ArbitrageVerdict, ArbError> {
    require_polyhedral(family, condition)?;
    let d = tree.dim();
    let x = zero_price_sets(tree, k, family)?;
    let nonpositive = Polyhedron::orthant(d).negate();
    let origin = Polyhedron::point(linalg::zeros(d));
    let nodes: Vec<NodeId> = tree.node_ids().collect();
    let geometric = par_map(&nodes, |&n| -> Result<Option<Vector>, ArbError> {
        let q = x.at(n).intersect(&nonpositive)?;
        Ok(point_outside(&q, &origin))
    });
    let inner: Vec<NodeId> = nodes
        .iter()
        .copied()
        .filter(|&n| !tree.is_leaf(n))
        .collect();
    let lifted = par_map(&inner, |&n| lifted_release(tree, k, family, n));

    let mut agree = true;
    let mut lifted_at = vec![None; tree.len()];
    for (&n, r) in inner.iter().zip(lifted) {
        lifted_at[n.0] = r?;
    }
    let mut witness = None;
    for (&n, g) in nodes.iter().zip(geometric) {
        let g = g?;
        if g.is_some() != lifted_at[n.0].is_some() && !tree.is_leaf(n) {
            agree = false;
        }
        if witness.is_some() || g.is_none() {
            continue;
        }
        witness = Some(match lifted_at[n.0].take() {
            Some((v, s)) => Witness {
                node: n,
                position: Some(v),
                strategy: Some(s),
            },
            None => {
                let v = g.expect("checked");
                let strategy = replicating_strategy(tree, k, family, n, &v)?;
                Witness {
                    node: n,
                    position: Some(v),
                    strategy,
                }
            }
        });
    }
    let mut verdict = ArbitrageVerdict::new(condition, family.kind, Method::Geometric, witness);
    verdict.agreement = Some(agree);
    Ok(verdict)
}

/// The strict condition `X_t^0 ∩ (-K_t) ⊆ K_t^0`, and for strictly proper
/// `K` the one-step reduced form with the risk map of `X_{t+1}^0`.
pub fn check_snr(
    tree: &ScenarioTree,
    k: &SolvencyProcess,
    family: &AcceptanceFamily,
) -> Result<ArbitrageVerdict, ArbError> {
    require_polyhedral(family, Condition::Snr)?;
    let x = zero_price_sets(tree, k, family)?;
    let nodes: Vec<NodeId> = tree.node_ids().collect();
    let found = par_map(&nodes, |&n| -> Result<Option<Vector>, ArbError> {
        let q = x.at(n).intersect(&k.at(n).negate())?;
        Ok(point_outside(&q, k.lineality_at(n)))
    });
    let mut witness = None;
    for (&n, f) in nodes.iter().zip(found) {
        if let Some(v) = f? {
            let strategy = replicating_strategy(tree, k, family, n, &v)?;
            witness = Some(Witness {
                node: n,
                position: Some(v),
                strategy,
            });
            break;
        }
    }
    let mut verdict =
        ArbitrageVerdict::new(Condition::Snr, family.kind, Method::Geometric, witness);
    if k.is_strictly_proper() {
        let mut reduced = true;
        for t in 0..tree.horizon() {
            let r = risk_map(tree, family, x.sets(), t)?;
            for &n in tree.nodes_at(t) {
                let q = r.at(n).intersect(&k.at(n).negate())?;
                if point_outside(&q, k.lineality_at(n)).is_some() {
                    reduced = false;
                }
            }
        }
        verdict.agreement = Some(reduced == verdict.holds);
    }
    Ok(verdict)
}

/// The second-kind condition for the two families where it has a
/// closed-form criterion.
pub fn check_nra2(
    tree: &ScenarioTree,
    k: &SolvencyProcess,
    family: &AcceptanceFamily,
) -> Result<ArbitrageVerdict, ArbError> {
    second_kind(tree, k, family, Condition::Nra2)
}

/// The classical second-kind condition: `NRA2` under the ess-inf family,
/// equivalent to `cm(K_t|F_{t-1}) ⊆ K_{t-1}`.
pub fn check_na2(tree: &ScenarioTree, k: &SolvencyProcess) -> Result<ArbitrageVerdict, ArbError> {
    second_kind(tree, k, &AcceptanceFamily::ess_inf(), Condition::Na2)
}

fn second_kind(
    tree: &ScenarioTree,
    k: &SolvencyProcess,
    family: &AcceptanceFamily,
    condition: Condition,
) -> Result<ArbitrageVerdict, ArbError> {
    require_polyhedral(family, condition)?;
    require_conical(k, condition)?;
    let witness = match family.kind {
        FamilyKind::EssInf => {
            let mut found = None;
            for t in 0..tree.horizon() {
                for &m in tree.nodes_at(t) {
                    let sets: Vec<Polyhedron> =
                        tree.children(m).iter().map(|&c| k.at(c).clone()).collect();
                    let core = Polyhedron::intersect_all(&sets)?;
                    if let Some(v) = point_outside(&core, k.at(m)) {
                        found = Some(Witness {
                            node: m,
                            position: Some(v),
                            strategy: None,
                        });
                        break;
                    }
                }
                if found.is_some() {
                    break;
                }
            }
            found
        }
        _ => expectation_second_kind(tree, k, family)?,
    };
    Ok(ArbitrageVerdict::new(
        condition,
        family.kind,
        Method::Geometric,
        witness,
    ))
}

/// `X_0^0 ⊆ K_0` at the root and `E(X_t^0|F_{t-1}) ⊆ E(K_t|F_{t-1})` at
/// every parent. A violation at a parent carries a selection of `X_t^0`
/// over the children whose mean is the reported position.
fn expectation_second_kind(
    tree: &ScenarioTree,
    k: &SolvencyProcess,
    family: &AcceptanceFamily,
) -> Result<Option<Witness>, ArbError> {
    let x = zero_price_sets(tree, k, family)?;
    let root = tree.root();
    if let Some(v) = point_outside(x.at(root), k.at(root)) {
        let strategy = replicating_strategy(tree, k, family, root, &v)?;
        return Ok(Some(Witness {
            node: root,
            position: Some(v),
            strategy,
        }));
    }
    for t in 1..=tree.horizon() {
        let ex = cond_expectation_set(tree, x.sets(), t, t - 1)?;
        let ek = cond_expectation_set(tree, k.sets(), t, t - 1)?;
        for &m in tree.nodes_at(t - 1) {
            if let Some(v) = point_outside(ex.at(m), ek.at(m)) {
                let selection = mean_selection(tree, &x, m, &v);
                return Ok(Some(Witness {
                    node: m,
                    position: Some(v),
                    strategy: selection.map(|trades| Strategy {
                        trades,
                        increments: Vec::new(),
                    }),
                }));
            }
        }
    }
    Ok(None)
}

/// Points `x_c ∈ X(c)` for the children of `m` with `sum_c p_c x_c = v`.
fn mean_selection(
    tree: &ScenarioTree,
    x: &PriceSetProcess,
    m: NodeId,
    v: &[Rational],
) -> Option<Vec<(NodeId, Vector)>> {
    let d = tree.dim();
    let children = tree.children(m);
    let n = d * children.len();
    let mut lp = LinearProgram::feasibility(n);
    for (j, &c) in children.iter().enumerate() {
        let block = |a: &[Rational]| {
            let mut row = linalg::zeros(n);
            row[j * d..(j + 1) * d].clone_from_slice(a);
            row
        };
        for h in x.at(c).inequalities() {
            lp.add(block(&h.normal), Relation::Ge, h.offset.clone());
        }
        for h in x.at(c).equalities() {
            lp.add(block(&h.normal), Relation::Eq, h.offset.clone());
        }
    }
    for i in 0..d {
        let mut row = linalg::zeros(n);
        for (j, &c) in children.iter().enumerate() {
            row[j * d + i] = tree.cond_prob(c).clone();
        }
        lp.add(row, Relation::Eq, v[i].clone());
    }
    match lp.solve() {
        LpOutcome::Optimal { x: sol, .. } => Some(
            children
                .iter()
                .enumerate()
                .map(|(j, &c)| (c, sol[j * d..(j + 1) * d].to_vec()))
                .collect(),
        ),
        _ => None,
    }
}

/// A homogeneous system `{z : A z >= 0, E z = 0}`.
struct ConeSystem {
    n: usize,
    ineqs: Vec<Vector>,
    eqs: Vec<Vector>,
}

impl ConeSystem {
    fn new(n: usize) -> Self {
        ConeSystem {
            n,
            ineqs: Vec::new(),
            eqs: Vec::new(),
        }
    }

    fn row(&self, off: usize, a: &[Rational]) -> Vector {
        let mut r = linalg::zeros(self.n);
        r[off..off + a.len()].clone_from_slice(a);
        r
    }

    /// Adds the inequalities of a cone acting on the block at `off`.
    fn add_cone(&mut self, off: usize, p: &Polyhedron, negated: bool) {
        for h in p.inequalities() {
            let a = if negated {
                linalg::neg(&h.normal)
            } else {
                h.normal.clone()
            };
            let r = self.row(off, &a);
            self.ineqs.push(r);
        }
        for h in p.equalities() {
            let r = self.row(off, &h.normal);
            self.eqs.push(r);
        }
    }

    fn add_lifted(&mut self, cone: &LiftedCone, offset: impl Fn(usize) -> usize) {
        let d = cone.dim;
        for a in &cone.ineqs {
            let mut r = linalg::zeros(self.n);
            for c in 0..cone.children.len() {
                let off = offset(c);
                r[off..off + d].clone_from_slice(cone.block(a, c));
            }
            if !linalg::is_zero(&r) {
                self.ineqs.push(r);
            }
        }
    }

    /// An element with positive total slack on the inequality rows `rows`,
    /// scaled so that the slack sum is at most one.
    fn max_slack(&self, rows: &[usize]) -> Option<Vector> {
        let mut obj = linalg::zeros(self.n);
        for &j in rows {
            obj = linalg::add(&obj, &self.ineqs[j]);
        }
        let mut lp = LinearProgram::new(self.n, Sense::Max, obj.clone());
        for a in &self.ineqs {
            lp.add(a.clone(), Relation::Ge, Rational::zero());
        }
        for a in &self.eqs {
            lp.add(a.clone(), Relation::Eq, Rational::zero());
        }
        lp.add(obj, Relation::Le, Rational::one());
        match lp.solve() {
            LpOutcome::Optimal { x, value, .. } if value.is_positive() => Some(x),
            _ => None,
        }
    }

    /// An element for which `outside` holds, given that every element
    /// where it fails makes all inequalities tight. Exact: either some
    /// inequality can be slack, or the cone is the subspace cut out by all
    /// rows and a basis of it is inspected.
    fn escape(&self, outside: impl Fn(&[Rational]) -> bool) -> Option<Vector> {
        let all: Vec<usize> = (0..self.ineqs.len()).collect();
        if let Some(z) = self.max_slack(&all) {
            return Some(z);
        }
        let rows: Vec<Vector> = self.ineqs.iter().chain(&self.eqs).cloned().collect();
        linalg::nullspace(&rows, self.n)
            .into_iter()
            .find(|b| outside(b))
    }
}

/// Layout of the lifted solution cone: `k_m` then `eta_m` for every node.
struct SnarLayout {
    d: usize,
}

impl SnarLayout {
    fn k(&self, m: NodeId) -> usize {
        2 * self.d * m.0
    }
    fn eta(&self, m: NodeId) -> usize {
        2 * self.d * m.0 + self.d
    }
}

/// The solution cone lives in dimension `2d` times the node count, and its
/// enumeration grows quickly; past this many rays the slack program is far
/// cheaper than continuing.
const SNAR_RAY_BUDGET: usize = 400;

pub fn check_snar(
    tree: &ScenarioTree,
    k: &SolvencyProcess,
    family: &AcceptanceFamily,
) -> Result<ArbitrageVerdict, ArbError> {
    check_snar_with_budget(tree, k, family, dd::ray_budget().min(SNAR_RAY_BUDGET))
}

/// Strong no risk arbitrage: every cancelling strategy
/// `sum_t (k_t + eta_t) = 0` has `k_t ∈ K_t^0` and `eta_t = 0`. The extreme
/// rays of the cone of cancelling strategies are enumerated; beyond the
/// budget an exact slack program decides instead.
pub fn check_snar_with_budget(
    tree: &ScenarioTree,
    k: &SolvencyProcess,
    family: &AcceptanceFamily,
    budget: usize,
) -> Result<ArbitrageVerdict, ArbError> {
    require_polyhedral(family, Condition::Snar)?;
    require_conical(k, Condition::Snar)?;
    let d = tree.dim();
    let lay = SnarLayout { d };
    let mut sys = ConeSystem::new(2 * d * tree.len());
    for m in tree.node_ids() {
        sys.add_cone(lay.k(m), k.at(m), false);
        if !tree.is_leaf(m) {
            let cone = family.lifted_cone(tree, m)?;
            sys.add_lifted(&cone, |c| lay.eta(cone.children[c]));
        }
    }
    let root = LiftedCone::root(tree);
    sys.add_lifted(&root, |_| lay.eta(tree.root()));
    for &leaf in tree.leaves() {
        let path = tree.path(tree.root(), leaf);
        for i in 0..d {
            let mut r = linalg::zeros(sys.n);
            for &m in &path {
                r[lay.k(m) + i] = Rational::one();
                r[lay.eta(m) + i] = Rational::one();
            }
            sys.eqs.push(r);
        }
    }

    let offending = |z: &[Rational]| -> Option<NodeId> {
        tree.node_ids().find(|&m| {
            let km = &z[lay.k(m)..lay.k(m) + d];
            let em = &z[lay.eta(m)..lay.eta(m) + d];
            !linalg::is_zero(em) || !k.at(m).in_lineality(km)
        })
    };
    let (found, method) = match dd::cone_generators(sys.n, &sys.ineqs, &sys.eqs, budget) {
        Ok(g) => (
            g.rays
                .into_iter()
                .chain(g.lines)
                .find(|z| offending(z).is_some()),
            Method::RayEnumeration,
        ),
        Err(dd::DdError::BudgetExceeded { .. }) => {
            (sys.escape(|z| offending(z).is_some()), Method::LiftedLp)
        }
    };
    let witness = found.map(|z| {
        let node = offending(&z).expect("offending strategy");
        Witness {
            node,
            position: None,
            strategy: Some(Strategy {
                trades: tree
                    .node_ids()
                    .map(|m| (m, z[lay.k(m)..lay.k(m) + d].to_vec()))
                    .collect(),
                increments: tree
                    .node_ids()
                    .map(|m| (m, z[lay.eta(m)..lay.eta(m) + d].to_vec()))
                    .collect(),
            }),
        }
    });
    Ok(ArbitrageVerdict::new(
        Condition::Snar,
        family.kind,
        method,
        witness,
    ))
}

/// The classical strict condition for the ess-inf family: for every `t`,
/// a position `g ∈ K_t` reachable as `-(k_0 + ... + k_t)` lies in `K_t^0`.
pub fn check_nas(tree: &ScenarioTree, k: &SolvencyProcess) -> Result<ArbitrageVerdict, ArbError> {
    require_conical(k, Condition::Nas)?;
    let d = tree.dim();
    for t in 0..=tree.horizon() {
        let early: Vec<NodeId> = tree.node_ids().filter(|&m| tree.time(m) <= t).collect();
        let finals = tree.nodes_at(t);
        let mut pos = vec![0; tree.len()];
        for (j, &m) in early.iter().enumerate() {
            pos[m.0] = j * d;
        }
        let g_base = early.len() * d;
        let g_off = |j: usize| g_base + j * d;
        let mut sys = ConeSystem::new(g_base + finals.len() * d);
        for &m in &early {
            sys.add_cone(pos[m.0], k.at(m), false);
        }
        let mut g_rows = Vec::new();
        for (j, &n) in finals.iter().enumerate() {
            let before = sys.ineqs.len();
            sys.add_cone(g_off(j), k.at(n), false);
            g_rows.extend(before..sys.ineqs.len());
            let path = tree.path(tree.root(), n);
            for i in 0..d {
                let mut r = linalg::zeros(sys.n);
                for &m in &path {
                    r[pos[m.0] + i] = Rational::one();
                }
                r[g_off(j) + i] = Rational::one();
                sys.eqs.push(r);
            }
        }
        if let Some(z) = sys.max_slack(&g_rows) {
            let (j, &n) = finals
                .iter()
                .enumerate()
                .find(|&(j, &n)| !k.at(n).in_lineality(&z[g_off(j)..g_off(j) + d]))
                .expect("a slack row sits at some final node");
            let witness = Witness {
                node: n,
                position: Some(z[g_off(j)..g_off(j) + d].to_vec()),
                strategy: Some(Strategy {
                    trades: early
                        .iter()
                        .map(|&m| (m, z[pos[m.0]..pos[m.0] + d].to_vec()))
                        .collect(),
                    increments: Vec::new(),
                }),
            };
            return Ok(ArbitrageVerdict::new(
                Condition::Nas,
                FamilyKind::EssInf,
                Method::LiftedLp,
                Some(witness),
            ));
        }
    }
    Ok(ArbitrageVerdict::new(
        Condition::Nas,
        FamilyKind::EssInf,
        Method::LiftedLp,
        None,
    ))
}

/// Runs one condition. `NA2` and `NAs` belong to the ess-inf family and
/// are refused for the others.
pub fn check_condition(
    tree: &ScenarioTree,
    k: &SolvencyProcess,
    family: &AcceptanceFamily,
    condition: Condition,
) -> Result<ArbitrageVerdict, ArbError> {
    let ess_inf_only = || {
        if family.kind == FamilyKind::EssInf {
            Ok(())
        } else {
            Err(ArbError::UnsupportedFamily {
                condition,
                family: family.kind,
            })
        }
    };
    match condition {
        Condition::Snr => check_snr(tree, k, family),
        Condition::Nra => check_nra(tree, k, family),
        Condition::Nara => check_nara(tree, k, family),
        Condition::Nra2 => check_nra2(tree, k, family),
        Condition::Snar => check_snar(tree, k, family),
        Condition::Na2 => {
            ess_inf_only()?;
            check_na2(tree, k)
        }
        Condition::Nas => {
            ess_inf_only()?;
            check_nas(tree, k)
        }
    }
}

/// `L0(-K_t) ∩ C_{t-1,t} = {0}` at every parent: no nonzero insolvent
/// position is acceptable one step earlier.
pub fn insolvent_positions_unacceptable(
    tree: &ScenarioTree,
    k: &SolvencyProcess,
    family: &AcceptanceFamily,
) -> Result<bool, ArbError> {
    let d = tree.dim();
    for t in 0..tree.horizon() {
        for &m in tree.nodes_at(t) {
            let cone = family.lifted_cone(tree, m)?;
            let mut sys = ConeSystem::new(cone.ambient_dim());
            for (j, &c) in cone.children.iter().enumerate() {
                sys.add_cone(j * d, k.at(c), true);
            }
            sys.add_lifted(&cone, |c| c * d);
            if sys.escape(|z| !linalg::is_zero(z)).is_some() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests;
