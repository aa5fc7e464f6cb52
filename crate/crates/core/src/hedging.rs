//! Solvency processes, the superhedging recursion and its lifted LP oracle.

use thiserror::Error;

use crate::acceptance::{risk_map, AccError, AcceptanceFamily, LiftedCone};
use crate::conditional::{CondError, SetProcess};
use crate::linalg::{self, Vector};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::parallel::par_map;
use crate::polyhedron::dd::{self, DdError};
use crate::polyhedron::{Halfspace, PolyError, Polyhedron};
use crate::rational::Rational;
use crate::tree::{NodeId, NodeLabel, ProcessError, ScalarProcess, ScenarioTree, VectorProcess};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HedgeError {
    #[error("bid-ask input needs dimension 2, the tree has dimension {0}")]
    NotTwoDimensional(usize),
    #[error("node {node}: bid {bid} exceeds ask {ask}")]
    BidAboveAsk {
        node: NodeLabel,
        bid: Rational,
        ask: Rational,
    },
    #[error("node {node}: prices must be positive")]
    NonPositivePrice { node: NodeLabel },
    #[error(
        "node {node}: solvency set is not an upper set (it must recede along every unit vector)"
    )]
    NotUpperSet { node: NodeLabel },
    #[error("node {node}: solvency set meets the negative orthant outside the origin")]
    MeetsNegativeOrthant { node: NodeLabel },
    #[error("node {node}: solvency set has dimension {found}, expected {expected}")]
    Dimension {
        node: NodeLabel,
        expected: usize,
        found: usize,
    },
    #[error("the solvency process is not conical")]
    NotConical,
    #[error(transparent)]
    Acceptance(#[from] AccError),
    #[error(transparent)]
    Process(#[from] ProcessError),
    #[error(transparent)]
    Cond(#[from] CondError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Budget(#[from] DdError),
}

/// Solvency sets `K_t` at every node, with derived data.
#[derive(Debug, Clone)]
pub struct SolvencyProcess {
    sets: SetProcess,
    duals: Option<SetProcess>,
    lineality: SetProcess,
    conical: bool,
    proper: bool,
    strictly_proper: bool,
}

impl SolvencyProcess {
    /// Validates that every node carries an upper set meeting `R_-^d` only
    /// at the origin.
    pub fn new(tree: &ScenarioTree, sets: SetProcess) -> Result<Self, HedgeError> {
        let d = tree.dim();
        for t in 0..=tree.horizon() {
            sets.require_time(tree, t)?;
        }
        let neg_orthant = Polyhedron::orthant(d).negate();
        let origin = Polyhedron::point(linalg::zeros(d));
        let mut conical = true;
        let mut proper = true;
        let mut strictly_proper = true;
        for n in tree.node_ids() {
            let k = sets.at(n);
            let label = || tree.label(n).clone();
            if k.dim() != d {
                return Err(HedgeError::Dimension {
                    node: label(),
                    expected: d,
                    found: k.dim(),
                });
            }
            if k.is_empty() || !(0..d).all(|i| k.recedes_along(&linalg::unit(d, i))) {
                return Err(HedgeError::NotUpperSet { node: label() });
            }
            if k.intersect(&neg_orthant)? != origin {
                return Err(HedgeError::MeetsNegativeOrthant { node: label() });
            }
            conical &= k.is_cone();
            proper &= k.lines().is_empty();
            let symmetric = k.intersect(&k.negate())?;
            strictly_proper &= symmetric == origin;
        }
        // K contains the origin, so K^0 is its lineality space
        let lineality = sets.map(|k| k.lineality_space());
        let duals = if conical {
            let mut out = SetProcess::new(tree);
            for n in tree.node_ids() {
                out.set(n, sets.at(n).dual_cone()?);
            }
            Some(out)
        } else {
            None
        };
        Ok(SolvencyProcess {
            sets,
            duals,
            lineality,
            conical,
            proper,
            strictly_proper,
        })
    }

    /// Cones generated by the given vectors together with the unit vectors.
    pub fn from_cone_generators(
        tree: &ScenarioTree,
        gens: &crate::tree::AdaptedProcess<Vec<Vector>>,
    ) -> Result<Self, HedgeError> {
        let d = tree.dim();
        let mut sets = SetProcess::new(tree);
        for n in tree.node_ids() {
            let mut rays: Vec<Vector> = (0..d).map(|i| linalg::unit(d, i)).collect();
            if let Some(g) = gens.get(n) {
                rays.extend(g.iter().cloned());
            }
            sets.set(n, Polyhedron::cone(d, rays)?);
        }
        Self::new(tree, sets)
    }

    /// `K_t = R_+^d` everywhere.
    pub fn orthant(tree: &ScenarioTree) -> Self {
        let sets = SetProcess::everywhere(tree, |_| Polyhedron::orthant(tree.dim()));
        Self::new(tree, sets).expect("the orthant is a valid solvency set")
    }

    pub fn sets(&self) -> &SetProcess {
        &self.sets
    }

    pub fn at(&self, n: NodeId) -> &Polyhedron {
        self.sets.at(n)
    }

    /// `K_t^*` at `n`, available for conical processes.
    pub fn dual_at(&self, n: NodeId) -> Option<&Polyhedron> {
        self.duals.as_ref().map(|d| d.at(n))
    }

    pub fn lineality_at(&self, n: NodeId) -> &Polyhedron {
        self.lineality.at(n)
    }

    pub fn is_conical(&self) -> bool {
        self.conical
    }

    pub fn is_proper(&self) -> bool {
        self.proper
    }

    pub fn is_strictly_proper(&self) -> bool {
        self.strictly_proper
    }
}

/// `C([b, a]) = {x : x1 + b x2 >= 0, x1 + a x2 >= 0}`. For `b = a` this is a
/// half-plane whose boundary is the lineality line.
pub fn bid_ask_cone(bid: &Rational, ask: &Rational) -> Polyhedron {
    let h = |p: &Rational| Halfspace::new(vec![Rational::one(), p.clone()], Rational::zero());
    Polyhedron::from_halfspaces(2, vec![h(bid), h(ask)], Vec::new()).expect("dimension 2")
}

pub fn solvency_from_bid_ask(
    tree: &ScenarioTree,
    bid: &ScalarProcess,
    ask: &ScalarProcess,
) -> Result<SolvencyProcess, HedgeError> {
    if tree.dim() != 2 {
        return Err(HedgeError::NotTwoDimensional(tree.dim()));
    }
    let mut sets = SetProcess::new(tree);
    for n in tree.node_ids() {
        let label = || tree.label(n).clone();
        let (Some(b), Some(a)) = (bid.get(n), ask.get(n)) else {
            return Err(ProcessError::Undefined {
                node: label(),
                time: tree.time(n),
            }
            .into());
        };
        if !b.is_positive() || !a.is_positive() {
            return Err(HedgeError::NonPositivePrice { node: label() });
        }
        if b > a {
            return Err(HedgeError::BidAboveAsk {
                node: label(),
                bid: b.clone(),
                ask: a.clone(),
            });
        }
        sets.set(n, bid_ask_cone(b, a));
    }
    SolvencyProcess::new(tree, sets)
}

pub fn zero_claim(tree: &ScenarioTree) -> VectorProcess {
    VectorProcess::constant_at(tree, tree.horizon(), linalg::zeros(tree.dim()))
}

/// Superhedging price sets `X_t` for every node; a node whose set is empty
/// carries an unhedgeable claim.
#[derive(Debug, Clone)]
pub struct PriceSetProcess {
    sets: SetProcess,
}

impl PriceSetProcess {
    pub fn at(&self, n: NodeId) -> &Polyhedron {
        self.sets.at(n)
    }

    pub fn sets(&self) -> &SetProcess {
        &self.sets
    }

    pub fn is_empty_at(&self, n: NodeId) -> bool {
        self.sets.at(n).is_empty()
    }

    pub fn empty_nodes(&self) -> Vec<NodeId> {
        self.sets
            .entries()
            .filter(|(_, p)| p.is_empty())
            .map(|(n, _)| n)
            .collect()
    }
}

/// `X_T = xi + K_T` and `X_t = K_t + R(X_{t+1})` backwards in time.
pub fn superhedge_recursion(
    tree: &ScenarioTree,
    k: &SolvencyProcess,
    xi: &VectorProcess,
    family: &AcceptanceFamily,
) -> Result<PriceSetProcess, HedgeError> {
    if !family.set_valued_risk_map() {
        return Err(AccError::Unsupported { family: "entropic" }.into());
    }
    let horizon = tree.horizon();
    xi.require_time(tree, horizon)?;
    let mut x = SetProcess::new(tree);
    for &l in tree.nodes_at(horizon) {
        x.set(l, k.at(l).translate(xi.at(l)));
    }
    for t in (0..horizon).rev() {
        let r = risk_map(tree, family, &x, t)?;
        let nodes = tree.nodes_at(t);
        let sums = par_map(nodes, |&n| {
            let rn = r.at(n);
            if rn.is_empty() {
                Ok(rn.clone())
            } else {
                k.at(n).minkowski_sum(rn)
            }
        });
        for (&n, s) in nodes.iter().zip(sums) {
            x.set(n, s?);
        }
    }
    Ok(PriceSetProcess { sets: x })
}

/// The initial endowment in a lifted program: a fixed vector or `d` free
/// variables placed first.
#[derive(Debug, Clone)]
pub enum Endowment {
    Fixed(Vector),
    Free,
}

/// Feasibility program for acceptable portfolio processes started at one
/// node. Variables: the endowment (when free), then a solvent trade `k_m`
/// for every node `m` of the subtree, then an acceptable increment `eta_c`
/// for every node `c` of the subtree below its start. At each leaf the sum
/// along the path plus the claim equals the endowment.
#[derive(Debug, Clone)]
pub struct LiftedModel {
    pub lp: LinearProgram,
    pub start: NodeId,
    pub dim: usize,
    pub nodes: Vec<NodeId>,
    v_offset: Option<usize>,
    k_offset: Vec<Option<usize>>,
    eta_offset: Vec<Option<usize>>,
}

impl LiftedModel {
    pub fn build(
        tree: &ScenarioTree,
        k: &SolvencyProcess,
        family: &AcceptanceFamily,
        start: NodeId,
        claim: Option<&VectorProcess>,
        endowment: &Endowment,
    ) -> Result<Self, HedgeError> {
        let d = tree.dim();
        let nodes = tree.subtree(start);
        let mut next = 0;
        let v_offset = match endowment {
            Endowment::Free => {
                next = d;
                Some(0)
            }
            Endowment::Fixed(_) => None,
        };
        let mut k_offset = vec![None; tree.len()];
        let mut eta_offset = vec![None; tree.len()];
        for &m in &nodes {
            k_offset[m.0] = Some(next);
            next += d;
        }
        for &m in &nodes {
            if m != start {
                eta_offset[m.0] = Some(next);
                next += d;
            }
        }
        let mut lp = LinearProgram::feasibility(next);
        for &m in &nodes {
            let off = k_offset[m.0].expect("allocated");
            let km = k.at(m);
            for h in km.inequalities() {
                let mut row = linalg::zeros(next);
                row[off..off + d].clone_from_slice(&h.normal);
                lp.add(row, Relation::Ge, h.offset.clone());
            }
            for h in km.equalities() {
                let mut row = linalg::zeros(next);
                row[off..off + d].clone_from_slice(&h.normal);
                lp.add(row, Relation::Eq, h.offset.clone());
            }
            if !tree.is_leaf(m) {
                let cone = family.lifted_cone(tree, m)?;
                add_lifted_cone_rows(&mut lp, &cone, |c| {
                    eta_offset[cone.children[c].0].expect("allocated")
                });
            }
        }
        for &leaf in tree.leaves() {
            if !nodes.contains(&leaf) {
                continue;
            }
            let path = tree.path(start, leaf);
            for i in 0..d {
                let mut row = linalg::zeros(next);
                for &m in &path {
                    row[k_offset[m.0].expect("allocated") + i] = Rational::one();
                    if let Some(e) = eta_offset[m.0] {
                        row[e + i] = Rational::one();
                    }
                }
                let xi = claim
                    .map(|c| c.at(leaf)[i].clone())
                    .unwrap_or_else(Rational::zero);
                let rhs = match endowment {
                    Endowment::Fixed(v) => &v[i] - &xi,
                    Endowment::Free => {
                        row[i] = -Rational::one();
                        -xi
                    }
                };
                lp.add(row, Relation::Eq, rhs);
            }
        }
        Ok(LiftedModel {
            lp,
            start,
            dim: d,
            nodes,
            v_offset,
            k_offset,
            eta_offset,
        })
    }

    pub fn n_vars(&self) -> usize {
        self.lp.n
    }

    pub fn v_index(&self, i: usize) -> Option<usize> {
        self.v_offset.map(|o| o + i)
    }

    pub fn k_index(&self, m: NodeId, i: usize) -> Option<usize> {
        self.k_offset[m.0].map(|o| o + i)
    }

    pub fn eta_index(&self, m: NodeId, i: usize) -> Option<usize> {
        self.eta_offset[m.0].map(|o| o + i)
    }

    pub fn k_value(&self, x: &[Rational], m: NodeId) -> Option<Vector> {
        self.k_offset[m.0].map(|o| x[o..o + self.dim].to_vec())
    }

    pub fn eta_value(&self, x: &[Rational], m: NodeId) -> Option<Vector> {
        self.eta_offset[m.0].map(|o| x[o..o + self.dim].to_vec())
    }

    pub fn v_value(&self, x: &[Rational]) -> Option<Vector> {
        self.v_offset.map(|o| x[o..o + self.dim].to_vec())
    }
}

pub(crate) fn add_lifted_cone_rows(
    lp: &mut LinearProgram,
    cone: &LiftedCone,
    offset: impl Fn(usize) -> usize,
) {
    let d = cone.dim;
    for a in &cone.ineqs {
        let mut row = linalg::zeros(lp.n);
        let mut any = false;
        for c in 0..cone.children.len() {
            let off = offset(c);
            for i in 0..d {
                let v = &a[c * d + i];
                if !v.is_zero() {
                    row[off + i] = v.clone();
                    any = true;
                }
            }
        }
        if any {
            lp.add(row, Relation::Ge, Rational::zero());
        }
    }
}

/// Solves the lifted feasibility program for a fixed endowment `v` at the
/// node `node`. The outcome carries a verifiable certificate.
pub fn superhedge_membership_outcome(
    tree: &ScenarioTree,
    k: &SolvencyProcess,
    xi: &VectorProcess,
    family: &AcceptanceFamily,
    v: &[Rational],
    node: NodeId,
) -> Result<(LiftedModel, LpOutcome), HedgeError> {
    xi.require_time(tree, tree.horizon())?;
    let model = LiftedModel::build(
        tree,
        k,
        family,
        node,
        Some(xi),
        &Endowment::Fixed(v.to_vec()),
    )?;
    let out = model.lp.solve();
    Ok((model, out))
}

pub fn superhedge_membership_lp(
    tree: &ScenarioTree,
    k: &SolvencyProcess,
    xi: &VectorProcess,
    family: &AcceptanceFamily,
    v: &[Rational],
    t: usize,
    node: NodeId,
) -> Result<bool, HedgeError> {
    if tree.time(node) != t {
        return Err(ProcessError::TimeOrder {
            target: t,
            source_time: tree.time(node),
        }
        .into());
    }
    let (_, out) = superhedge_membership_outcome(tree, k, xi, family, v, node)?;
    Ok(!out.is_infeasible())
}

/// The attainable cone `A_{t,T}` in the space of leaf-stacked payoffs
/// (`d` coordinates per leaf, leaves in tree order), in both forms.
#[derive(Debug, Clone)]
pub struct AttainableCone {
    pub t: usize,
    pub dim: usize,
    pub leaves: Vec<NodeId>,
    pub lines: Vec<Vector>,
    pub rays: Vec<Vector>,
    /// Facet normals: `a . z >= 0` on the cone.
    pub ineqs: Vec<Vector>,
    /// `a . z = 0` on the cone.
    pub eqs: Vec<Vector>,
}

impl AttainableCone {
    pub fn ambient_dim(&self) -> usize {
        self.dim * self.leaves.len()
    }

    pub fn contains(&self, z: &[Rational]) -> bool {
        self.ineqs.iter().all(|a| !linalg::dot(a, z).is_negative())
            && self.eqs.iter().all(|a| linalg::dot(a, z).is_zero())
    }
}

/// Spreads a vector at node `m` over every leaf below it, negated.
fn spread(
    tree: &ScenarioTree,
    leaf_pos: &[Option<usize>],
    d: usize,
    m: NodeId,
    g: &[Rational],
    out: &mut Vector,
) {
    for &l in tree.descendants_at(m, tree.horizon()) {
        let p = leaf_pos[l.0].expect("leaf") * d;
        for i in 0..d {
            out[p + i] = -g[i].clone();
        }
    }
}

/// Minimal generators and facets of `A_{t,T}` for a conical solvency
/// process and a coherent family, with a budget on the double description.
pub fn attainable_cone_generators(
    tree: &ScenarioTree,
    k: &SolvencyProcess,
    family: &AcceptanceFamily,
    t: usize,
    budget: usize,
) -> Result<AttainableCone, HedgeError> {
    if !k.is_conical() {
        return Err(HedgeError::NotConical);
    }
    if !family.is_coherent() {
        return Err(AccError::Unsupported { family: "entropic" }.into());
    }
    if t > tree.horizon() {
        return Err(ProcessError::BeyondHorizon(t).into());
    }
    let d = tree.dim();
    let leaves = tree.leaves().to_vec();
    let mut leaf_pos = vec![None; tree.len()];
    for (i, l) in leaves.iter().enumerate() {
        leaf_pos[l.0] = Some(i);
    }
    let n = d * leaves.len();
    let mut rays: Vec<Vector> = Vec::new();
    let mut lines: Vec<Vector> = Vec::new();
    for u in t..=tree.horizon() {
        for &m in tree.nodes_at(u) {
            let km = k.at(m);
            for (src, dst) in [(km.rays(), &mut rays), (km.lines(), &mut lines)] {
                for g in src {
                    let mut z = linalg::zeros(n);
                    spread(tree, &leaf_pos, d, m, g, &mut z);
                    dst.push(z);
                }
            }
            if u < tree.horizon() {
                let cone = family.lifted_cone(tree, m)?;
                for (src, dst) in [(&cone.rays, &mut rays), (&cone.lines, &mut lines)] {
                    for g in src {
                        let mut z = linalg::zeros(n);
                        for (c, &child) in cone.children.iter().enumerate() {
                            spread(tree, &leaf_pos, d, child, cone.block(g, c), &mut z);
                        }
                        dst.push(z);
                    }
                }
            }
        }
    }
    let dual = dd::cone_generators(n, &rays, &lines, budget)?;
    let primal = dd::cone_generators(n, &dual.rays, &dual.lines, budget)?;
    let mut rays: Vec<Vector> = primal
        .rays
        .into_iter()
        .map(|r| linalg::primitive(&r))
        .collect();
    rays.sort_by(|a, b| linalg::lex_cmp(a, b));
    let (lines, _) = linalg::canonical_span(&primal.lines, n);
    Ok(AttainableCone {
        t,
        dim: d,
        leaves,
        lines,
        rays,
        ineqs: dual.rays,
        eqs: dual.lines,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::from_ints;
    use crate::rational::{q, qi};
    use crate::tree::uniform_tree;

    fn binomial(prices: &[i64]) -> (ScenarioTree, SolvencyProcess) {
        let t = uniform_tree(2, &[prices.len() - 1]);
        let mut it = prices.iter();
        let p = ScalarProcess::everywhere(&t, |_| qi(*it.next().unwrap()));
        let k = solvency_from_bid_ask(&t, &p, &p).unwrap();
        (t, k)
    }

    fn halfplane(a: i64, c: i64, off: i64) -> Polyhedron {
        Polyhedron::from_halfspaces(2, vec![Halfspace::new(from_ints(&[a, c]), qi(off))], vec![])
            .unwrap()
    }

    #[test]
    fn bid_ask_cones() {
        let c = bid_ask_cone(&qi(10), &qi(10));
        assert_eq!(c, halfplane(1, 10, 0));
        assert_eq!(c.lines(), &[from_ints(&[10, -1])]);
        let c = bid_ask_cone(&qi(1), &qi(2));
        assert_eq!(c.rays(), &[from_ints(&[-1, 1]), from_ints(&[2, -1])]);
        let t = uniform_tree(2, &[1]);
        let b = ScalarProcess::everywhere(&t, |_| qi(2));
        let a = ScalarProcess::everywhere(&t, |_| qi(1));
        assert!(matches!(
            solvency_from_bid_ask(&t, &b, &a),
            Err(HedgeError::BidAboveAsk { .. })
        ));
        let k = solvency_from_bid_ask(&t, &a, &b).unwrap();
        assert!(k.is_conical() && k.is_proper() && k.is_strictly_proper());
        let (_, frictionless) = binomial(&[10, 8, 12]);
        assert!(!frictionless.is_proper() && !frictionless.is_strictly_proper());
        assert_eq!(
            frictionless.lineality_at(NodeId(0)).lines(),
            &[from_ints(&[10, -1])]
        );
    }

    #[test]
    fn invalid_solvency_sets() {
        let t = uniform_tree(2, &[1]);
        let bad = SetProcess::everywhere(&t, |_| halfplane(1, -1, 0));
        assert!(matches!(
            SolvencyProcess::new(&t, bad),
            Err(HedgeError::NotUpperSet { .. })
        ));
        let bad = SetProcess::everywhere(&t, |_| Polyhedron::full(2));
        assert!(matches!(
            SolvencyProcess::new(&t, bad),
            Err(HedgeError::MeetsNegativeOrthant { .. })
        ));
        let gens = crate::tree::AdaptedProcess::everywhere(&t, |_| vec![from_ints(&[3, -1])]);
        let k = SolvencyProcess::from_cone_generators(&t, &gens).unwrap();
        assert_eq!(
            k.at(t.root()).rays(),
            &[from_ints(&[0, 1]), from_ints(&[3, -1])]
        );
        assert!(k.dual_at(t.root()).unwrap().contains(&from_ints(&[1, 3])));
    }

    #[test]
    fn zero_claim_with_orthant_stays_orthant() {
        let t = uniform_tree(2, &[2, 2]);
        let k = SolvencyProcess::orthant(&t);
        for fam in [AcceptanceFamily::ess_inf(), AcceptanceFamily::expectation()] {
            let x = superhedge_recursion(&t, &k, &zero_claim(&t), &fam).unwrap();
            for n in t.node_ids() {
                assert_eq!(x.at(n), &Polyhedron::orthant(2));
            }
        }
    }

    #[test]
    fn binomial_call_like_claim() {
        let (t, k) = binomial(&[10, 8, 12]);
        let xi = VectorProcess::constant_at(&t, 1, from_ints(&[0, 1]));
        let fam = AcceptanceFamily::ess_inf();
        let x = superhedge_recursion(&t, &k, &xi, &fam).unwrap();
        assert_eq!(x.at(t.root()), &halfplane(1, 10, 10));
        let r = t.root();
        assert!(superhedge_membership_lp(&t, &k, &xi, &fam, &from_ints(&[10, 0]), 0, r).unwrap());
        assert!(superhedge_membership_lp(&t, &k, &xi, &fam, &from_ints(&[0, 1]), 0, r).unwrap());
        let (model, out) =
            superhedge_membership_outcome(&t, &k, &xi, &fam, &from_ints(&[9, 0]), r).unwrap();
        assert!(out.is_infeasible());
        out.verify(&model.lp).unwrap();
    }

    #[test]
    fn expectation_frictionless_binomial_releases_everything() {
        let (t, k) = binomial(&[10, 8, 12]);
        let x = superhedge_recursion(&t, &k, &zero_claim(&t), &AcceptanceFamily::expectation())
            .unwrap();
        assert_eq!(x.at(t.root()), &Polyhedron::full(2));
        let fam = AcceptanceFamily::expectation();
        assert!(superhedge_membership_lp(
            &t,
            &k,
            &zero_claim(&t),
            &fam,
            &from_ints(&[-50, -7]),
            0,
            t.root()
        )
        .unwrap());
    }

    #[test]
    fn entropic_recursion_is_rejected() {
        let (t, k) = binomial(&[10, 8, 12]);
        assert!(matches!(
            superhedge_recursion(&t, &k, &zero_claim(&t), &AcceptanceFamily::entropic()),
            Err(HedgeError::Acceptance(AccError::Unsupported { .. }))
        ));
    }

    #[test]
    fn attainable_cones() {
        let t = uniform_tree(2, &[2]);
        let k = SolvencyProcess::orthant(&t);
        let a = attainable_cone_generators(&t, &k, &AcceptanceFamily::ess_inf(), 0, 1000).unwrap();
        assert!(a.lines.is_empty());
        assert_eq!(a.rays.len(), 4);
        for r in &a.rays {
            assert_eq!(r.iter().filter(|x| !x.is_zero()).count(), 1);
            assert!(r.iter().all(|x| !x.is_positive()));
        }
        // frictionless exchange at rate 1: the exchange direction is a line at each leaf
        let one = ScalarProcess::everywhere(&t, |_| qi(1));
        let k = solvency_from_bid_ask(&t, &one, &one).unwrap();
        let a = attainable_cone_generators(&t, &k, &AcceptanceFamily::ess_inf(), 1, 1000).unwrap();
        assert_eq!(a.lines.len(), 2);
        assert!(a.contains(&from_ints(&[1, -1, 0, 0])) && a.contains(&from_ints(&[-1, 1, 0, 0])));
        assert!(!a.contains(&from_ints(&[1, 0, 0, 0])));
        // at the horizon only the terminal solvency sets remain
        let neg_k: Vec<Polyhedron> = t.leaves().iter().map(|&l| k.at(l).negate()).collect();
        for (i, p) in neg_k.iter().enumerate() {
            let mut z = linalg::zeros(4);
            z[2 * i] = q(-3, 2);
            z[2 * i + 1] = qi(1);
            assert_eq!(a.contains(&z), p.contains(&z[2 * i..2 * i + 2]));
        }
        assert!(matches!(
            attainable_cone_generators(&t, &k, &AcceptanceFamily::ess_inf(), 0, 1),
            Err(HedgeError::Budget(_))
        ));
    }
}
