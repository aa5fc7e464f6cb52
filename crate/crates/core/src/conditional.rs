//! Conditional core, conditional convex hull and conditional expectation of
//! set-valued processes, plus scalar essential suprema and infima.
//!
//! On a tree every operator acts atom by atom: the value at a time-`t` node
//! only depends on the values at its time-`s` descendants.

use thiserror::Error;

use crate::linalg::{self, Vector};
use crate::parallel::par_map;
use crate::polyhedron::{PolyError, Polyhedron};
use crate::rational::Rational;
use crate::tree::{
    check_times, AdaptedProcess, NodeId, NodeLabel, ProcessError, ScalarProcess, ScenarioTree,
};

pub type SetProcess = AdaptedProcess<Polyhedron>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CondError {
    #[error(transparent)]
    Process(#[from] ProcessError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("conditional hull is undefined: node {node} carries an empty set")]
    EmptyNodeSet { node: NodeLabel },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionalOp {
    Core,
    Hull,
    Expectation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConditionalQuery {
    pub source: usize,
    pub target: usize,
    pub op: ConditionalOp,
}

impl ConditionalQuery {
    pub fn apply(&self, tree: &ScenarioTree, x: &SetProcess) -> Result<SetProcess, CondError> {
        match self.op {
            ConditionalOp::Core => cond_core(tree, x, self.source, self.target),
            ConditionalOp::Hull => cond_hull(tree, x, self.source, self.target),
            ConditionalOp::Expectation => cond_expectation_set(tree, x, self.source, self.target),
        }
    }
}

fn per_node<F>(
    tree: &ScenarioTree,
    x: &SetProcess,
    s: usize,
    t: usize,
    f: F,
) -> Result<SetProcess, CondError>
where
    F: Fn(NodeId, Vec<(NodeId, &Polyhedron)>) -> Result<Polyhedron, CondError> + Sync + Send,
{
    check_times(tree, s, t)?;
    x.require_time(tree, s)?;
    let nodes = tree.nodes_at(t);
    let results = par_map(nodes, |&n| {
        let sets = tree
            .descendants_at(n, s)
            .iter()
            .map(|&m| (m, x.at(m)))
            .collect();
        f(n, sets)
    });
    let mut out = SetProcess::new(tree);
    for (&n, r) in nodes.iter().zip(results) {
        out.set(n, r?);
    }
    Ok(out)
}

/// Conditional core: the intersection over descendants. May be empty.
pub fn cond_core(
    tree: &ScenarioTree,
    x: &SetProcess,
    s: usize,
    t: usize,
) -> Result<SetProcess, CondError> {
    per_node(tree, x, s, t, |_, sets| {
        let owned = dedup(sets.into_iter().map(|(_, p)| p));
        Ok(Polyhedron::intersect_all(&owned)?)
    })
}

/// Conditional convex hull: the closed convex hull of the union.
pub fn cond_hull(
    tree: &ScenarioTree,
    x: &SetProcess,
    s: usize,
    t: usize,
) -> Result<SetProcess, CondError> {
    per_node(tree, x, s, t, |_, sets| {
        if let Some((m, _)) = sets.iter().find(|(_, p)| p.is_empty()) {
            return Err(CondError::EmptyNodeSet {
                node: tree.label(*m).clone(),
            });
        }
        let owned = dedup(sets.into_iter().map(|(_, p)| p));
        Ok(Polyhedron::hull_union(&owned)?)
    })
}

fn dedup<'a>(sets: impl Iterator<Item = &'a Polyhedron>) -> Vec<Polyhedron> {
    let mut out: Vec<Polyhedron> = Vec::new();
    for s in sets {
        if !out.iter().any(|o| o == s) {
            out.push(s.clone());
        }
    }
    out
}

/// `sum_i w_i P_i` for positive weights. Extreme points of a sum are sums of
/// extreme points, so the running bounded part is pruned against the full
/// recession cone after every step.
pub fn weighted_sum(
    dim: usize,
    terms: &[(Rational, &Polyhedron)],
) -> Result<Polyhedron, PolyError> {
    if terms.iter().any(|(_, p)| p.is_empty()) {
        return Ok(Polyhedron::empty(dim));
    }
    for (_, p) in terms {
        if p.dim() != dim {
            return Err(PolyError::DimensionMismatch {
                expected: dim,
                found: p.dim(),
            });
        }
    }
    let mut rays: Vec<Vector> = Vec::new();
    let mut lines: Vec<Vector> = Vec::new();
    for (_, p) in terms {
        rays.extend(p.rays().iter().cloned());
        lines.extend(p.lines().iter().cloned());
    }
    let mut points: Vec<Vector> = vec![linalg::zeros(dim)];
    let mut order: Vec<&(Rational, &Polyhedron)> = terms.iter().collect();
    order.sort_by_key(|(_, p)| std::cmp::Reverse(p.vertices().len()));
    for (w, p) in order {
        let verts = p.vertices();
        if verts.len() == 1 && linalg::is_zero(&verts[0]) {
            continue;
        }
        let scaled: Vec<Vector> = verts.iter().map(|v| linalg::scale(v, w)).collect();
        let mut next = Vec::with_capacity(points.len() * scaled.len());
        for a in &points {
            for b in &scaled {
                next.push(linalg::add(a, b));
            }
        }
        let pruned = Polyhedron::from_generators(dim, next, rays.clone(), lines.clone())?;
        points = pruned.vertices().to_vec();
    }
    Polyhedron::from_generators(dim, points, rays, lines)
}

/// Conditional expectation of a set-valued process: the probability-weighted
/// Minkowski sum over descendants. An empty descendant makes the result
/// empty (no selection exists).
pub fn cond_expectation_set(
    tree: &ScenarioTree,
    x: &SetProcess,
    s: usize,
    t: usize,
) -> Result<SetProcess, CondError> {
    per_node(tree, x, s, t, |n, sets| {
        if sets.len() == 1 {
            return Ok(sets[0].1.clone());
        }
        let dim = sets[0].1.dim();
        let terms: Vec<(Rational, &Polyhedron)> = sets
            .into_iter()
            .map(|(m, p)| (tree.relative_prob(n, m), p))
            .collect();
        Ok(weighted_sum(dim, &terms)?)
    })
}

fn scalar_fold(
    tree: &ScenarioTree,
    x: &ScalarProcess,
    s: usize,
    t: usize,
    pick_max: bool,
) -> Result<ScalarProcess, CondError> {
    check_times(tree, s, t)?;
    x.require_time(tree, s)?;
    let mut out = ScalarProcess::new(tree);
    for &n in tree.nodes_at(t) {
        let vals = tree.descendants_at(n, s).iter().map(|&m| x.at(m));
        let v = if pick_max { vals.max() } else { vals.min() };
        out.set(n, v.expect("nonempty descendant set").clone());
    }
    Ok(out)
}

pub fn cond_esssup(
    tree: &ScenarioTree,
    x: &ScalarProcess,
    s: usize,
    t: usize,
) -> Result<ScalarProcess, CondError> {
    scalar_fold(tree, x, s, t, true)
}

pub fn cond_essinf(
    tree: &ScenarioTree,
    x: &ScalarProcess,
    s: usize,
    t: usize,
) -> Result<ScalarProcess, CondError> {
    scalar_fold(tree, x, s, t, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::from_ints;
    use crate::rational::{q, qi};
    use crate::tree::uniform_tree;

    fn leaves(tree: &ScenarioTree, sets: Vec<Polyhedron>) -> SetProcess {
        let mut it = sets.into_iter();
        SetProcess::from_fn(tree, &[tree.horizon()], |_| it.next().unwrap())
    }

    fn bid_ask_cone(b: i64, a: i64) -> Polyhedron {
        let h = |p: i64| crate::Halfspace::new(from_ints(&[1, p]), qi(0));
        Polyhedron::from_halfspaces(2, vec![h(b), h(a)], vec![]).unwrap()
    }

    #[test]
    fn interval_examples() {
        let t = uniform_tree(1, &[2]);
        let x = leaves(
            &t,
            vec![
                Polyhedron::interval(qi(0), qi(2)),
                Polyhedron::interval(qi(1), qi(3)),
            ],
        );
        let r = t.root();
        assert_eq!(
            cond_core(&t, &x, 1, 0).unwrap().at(r),
            &Polyhedron::interval(qi(1), qi(2))
        );
        assert_eq!(
            cond_hull(&t, &x, 1, 0).unwrap().at(r),
            &Polyhedron::interval(qi(0), qi(3))
        );
        assert_eq!(
            cond_expectation_set(&t, &x, 1, 0).unwrap().at(r),
            &Polyhedron::interval(q(1, 2), q(5, 2))
        );
        let same = cond_core(&t, &x, 1, 1).unwrap();
        for &n in t.leaves() {
            assert_eq!(same.at(n), x.at(n));
        }
    }

    #[test]
    fn bid_ask_core_is_cone_of_hull_interval() {
        let t = uniform_tree(2, &[2]);
        let x = leaves(&t, vec![bid_ask_cone(8, 8), bid_ask_cone(12, 12)]);
        let core = cond_core(&t, &x, 1, 0).unwrap();
        assert_eq!(core.at(t.root()), &bid_ask_cone(8, 12));
        assert_eq!(
            core.at(t.root()).rays(),
            &[from_ints(&[-8, 1]), from_ints(&[12, -1])]
        );
    }

    #[test]
    fn halfplane_expectation_is_whole_plane() {
        let t = uniform_tree(2, &[2]);
        let h = |a: i64| {
            Polyhedron::from_halfspaces(
                2,
                vec![crate::Halfspace::new(from_ints(&[1, a]), qi(0))],
                vec![],
            )
            .unwrap()
        };
        let x = leaves(&t, vec![h(1), h(3)]);
        let e = cond_expectation_set(&t, &x, 1, 0).unwrap();
        assert_eq!(e.at(t.root()), &Polyhedron::full(2));
    }

    #[test]
    fn cone_expectation_equals_hull() {
        let t = uniform_tree(2, &[2]);
        let a = Polyhedron::cone(2, vec![from_ints(&[1, 1])]).unwrap();
        let b = Polyhedron::cone(2, vec![from_ints(&[1, 2])]).unwrap();
        let x = leaves(&t, vec![a, b]);
        let e = cond_expectation_set(&t, &x, 1, 0).unwrap();
        let h = cond_hull(&t, &x, 1, 0).unwrap();
        assert_eq!(e.at(t.root()), h.at(t.root()));
        assert_eq!(
            e.at(t.root()).rays(),
            &[from_ints(&[1, 1]), from_ints(&[1, 2])]
        );
    }

    #[test]
    fn errors_and_empty_sets() {
        let t = uniform_tree(1, &[2]);
        let x = leaves(
            &t,
            vec![
                Polyhedron::interval(qi(0), qi(1)),
                Polyhedron::interval(qi(2), qi(3)),
            ],
        );
        assert!(cond_core(&t, &x, 1, 0).unwrap().at(t.root()).is_empty());
        assert!(matches!(
            cond_core(&t, &x, 0, 1),
            Err(CondError::Process(ProcessError::TimeOrder { .. }))
        ));
        let y = leaves(
            &t,
            vec![Polyhedron::empty(1), Polyhedron::interval(qi(2), qi(3))],
        );
        assert!(matches!(
            cond_hull(&t, &y, 1, 0),
            Err(CondError::EmptyNodeSet { .. })
        ));
        assert!(cond_expectation_set(&t, &y, 1, 0)
            .unwrap()
            .at(t.root())
            .is_empty());
    }

    #[test]
    fn scalar_extrema() {
        let t = uniform_tree(1, &[2]);
        let mut x = ScalarProcess::new(&t);
        x.set(t.leaves()[0], qi(3));
        x.set(t.leaves()[1], qi(5));
        assert_eq!(cond_esssup(&t, &x, 1, 0).unwrap().at(t.root()), &qi(5));
        assert_eq!(cond_essinf(&t, &x, 1, 0).unwrap().at(t.root()), &qi(3));
        let id = cond_esssup(&t, &x, 1, 1).unwrap();
        assert_eq!(id.at(t.leaves()[1]), &qi(5));
    }
}
