//! Finite scenario trees and adapted processes on them.
//!
//! A node at time `t` is an atom of `F_t`. A process adapted to the
//! filtration is therefore just one value per node, kept in a dense table
//! indexed by [`NodeId`].

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, Vector};
use crate::rational::Rational;

pub const MAX_DIMENSION: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// External node identifier as it appears in input documents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NodeLabel {
    Int(u64),
    Str(String),
}

impl fmt::Display for NodeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeLabel::Int(i) => write!(f, "{i}"),
            NodeLabel::Str(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RawNode {
    pub label: NodeLabel,
    pub parent: Option<NodeLabel>,
    pub time: usize,
    pub cond_prob: Rational,
}

#[derive(Debug, Clone)]
pub struct RawTree {
    pub dimension: usize,
    pub horizon: usize,
    pub nodes: Vec<RawNode>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("dimension must be between 1 and {MAX_DIMENSION}, got {0}")]
    Dimension(usize),
    #[error("horizon must be at least 1, got {0}")]
    Horizon(usize),
    #[error("duplicate node id {0}")]
    DuplicateId(NodeLabel),
    #[error("node {node} refers to missing parent {parent}")]
    DanglingNode { node: NodeLabel, parent: NodeLabel },
    #[error("tree has no root")]
    NoRoot,
    #[error("tree has more than one root ({0} and {1})")]
    MultipleRoots(NodeLabel, NodeLabel),
    #[error("root {0} must be at time 0")]
    RootTime(NodeLabel),
    #[error("root {0} must have cond_prob 1")]
    RootProbability(NodeLabel),
    #[error("node {node} at time {time} does not follow its parent's time {parent_time}")]
    TimeMismatch {
        node: NodeLabel,
        time: usize,
        parent_time: usize,
    },
    #[error("node {node} has nonpositive probability {prob}")]
    NonPositiveProbability { node: NodeLabel, prob: Rational },
    #[error("node {node} has probability {prob} > 1")]
    ProbabilityAboveOne { node: NodeLabel, prob: Rational },
    #[error("children of node {node}: probabilities sum to {sum} ≠ 1")]
    ProbabilitySum { node: NodeLabel, sum: Rational },
    #[error("leaf before horizon: node {node} at time {time} has no children (horizon {horizon})")]
    LeafBeforeHorizon {
        node: NodeLabel,
        time: usize,
        horizon: usize,
    },
    #[error("node {node} at time {time} lies beyond the horizon {horizon}")]
    BeyondHorizon {
        node: NodeLabel,
        time: usize,
        horizon: usize,
    },
    #[error("node {0} is not reachable from the root")]
    Unreachable(NodeLabel),
}

#[derive(Debug, Clone)]
pub struct Node {
    pub label: NodeLabel,
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
    pub time: usize,
    pub cond_prob: Rational,
    pub prob: Rational,
}

/// A validated tree. Immutable; all queries are pure.
#[derive(Debug, Clone)]
pub struct ScenarioTree {
    dim: usize,
    horizon: usize,
    nodes: Vec<Node>,
    by_time: Vec<Vec<NodeId>>,
    root: NodeId,
    // descendants of each node at each later time, in breadth-first order
    desc: Vec<Vec<Vec<NodeId>>>,
}

pub fn validate_tree(raw: RawTree) -> Result<ScenarioTree, TreeError> {
    ScenarioTree::validate(raw)
}

impl ScenarioTree {
    pub fn validate(raw: RawTree) -> Result<ScenarioTree, TreeError> {
        if raw.dimension == 0 || raw.dimension > MAX_DIMENSION {
            return Err(TreeError::Dimension(raw.dimension));
        }
        if raw.horizon == 0 {
            return Err(TreeError::Horizon(raw.horizon));
        }
        let mut index: HashMap<NodeLabel, usize> = HashMap::new();
        for (i, n) in raw.nodes.iter().enumerate() {
            if index.insert(n.label.clone(), i).is_some() {
                return Err(TreeError::DuplicateId(n.label.clone()));
            }
        }
        let mut root = None;
        let mut parents = Vec::with_capacity(raw.nodes.len());
        for n in &raw.nodes {
            match &n.parent {
                None => {
                    if let Some(r) = root {
                        let r: &RawNode = &raw.nodes[r];
                        return Err(TreeError::MultipleRoots(r.label.clone(), n.label.clone()));
                    }
                    root = Some(index[&n.label]);
                    parents.push(None);
                }
                Some(p) => {
                    let Some(&pi) = index.get(p) else {
                        return Err(TreeError::DanglingNode {
                            node: n.label.clone(),
                            parent: p.clone(),
                        });
                    };
                    parents.push(Some(pi));
                }
            }
        }
        let root = root.ok_or(TreeError::NoRoot)?;
        let rn = &raw.nodes[root];
        if rn.time != 0 {
            return Err(TreeError::RootTime(rn.label.clone()));
        }
        if !rn.cond_prob.is_one() {
            return Err(TreeError::RootProbability(rn.label.clone()));
        }
        for (i, n) in raw.nodes.iter().enumerate() {
            if n.time > raw.horizon {
                return Err(TreeError::BeyondHorizon {
                    node: n.label.clone(),
                    time: n.time,
                    horizon: raw.horizon,
                });
            }
            if let Some(p) = parents[i] {
                let pt = raw.nodes[p].time;
                if n.time != pt + 1 {
                    return Err(TreeError::TimeMismatch {
                        node: n.label.clone(),
                        time: n.time,
                        parent_time: pt,
                    });
                }
                if !n.cond_prob.is_positive() {
                    return Err(TreeError::NonPositiveProbability {
                        node: n.label.clone(),
                        prob: n.cond_prob.clone(),
                    });
                }
                if n.cond_prob > Rational::one() {
                    return Err(TreeError::ProbabilityAboveOne {
                        node: n.label.clone(),
                        prob: n.cond_prob.clone(),
                    });
                }
            }
        }
        let mut children: Vec<Vec<NodeId>> = vec![Vec::new(); raw.nodes.len()];
        for (i, p) in parents.iter().enumerate() {
            if let Some(p) = p {
                children[*p].push(NodeId(i));
            }
        }
        for (i, n) in raw.nodes.iter().enumerate() {
            if children[i].is_empty() {
                if n.time < raw.horizon {
                    return Err(TreeError::LeafBeforeHorizon {
                        node: n.label.clone(),
                        time: n.time,
                        horizon: raw.horizon,
                    });
                }
            } else {
                let sum: Rational = children[i].iter().map(|c| &raw.nodes[c.0].cond_prob).sum();
                if !sum.is_one() {
                    return Err(TreeError::ProbabilitySum {
                        node: n.label.clone(),
                        sum,
                    });
                }
            }
        }
        // reachability (times strictly increase along parent links, so no cycles)
        let mut prob: Vec<Option<Rational>> = vec![None; raw.nodes.len()];
        let mut by_time: Vec<Vec<NodeId>> = vec![Vec::new(); raw.horizon + 1];
        let mut queue = std::collections::VecDeque::from([root]);
        prob[root] = Some(Rational::one());
        while let Some(i) = queue.pop_front() {
            by_time[raw.nodes[i].time].push(NodeId(i));
            let pi = prob[i].clone().expect("visited");
            for c in &children[i] {
                prob[c.0] = Some(&pi * &raw.nodes[c.0].cond_prob);
                queue.push_back(c.0);
            }
        }
        if let Some(i) = prob.iter().position(|p| p.is_none()) {
            return Err(TreeError::Unreachable(raw.nodes[i].label.clone()));
        }
        for level in &mut by_time {
            level.sort();
        }
        let nodes: Vec<Node> = raw
            .nodes
            .into_iter()
            .enumerate()
            .map(|(i, n)| Node {
                label: n.label,
                parent: parents[i].map(NodeId),
                children: children[i].clone(),
                time: n.time,
                cond_prob: n.cond_prob,
                prob: prob[i].clone().expect("reachable"),
            })
            .collect();
        let horizon = raw.horizon;
        let mut desc: Vec<Vec<Vec<NodeId>>> = vec![Vec::new(); nodes.len()];
        for t in (0..=horizon).rev() {
            for &n in &by_time[t] {
                let mut levels = vec![vec![n]];
                for s in t + 1..=horizon {
                    let mut next = Vec::new();
                    for &c in &nodes[n.0].children {
                        next.extend(desc[c.0][s - t - 1].iter().copied());
                    }
                    levels.push(next);
                }
                desc[n.0] = levels;
            }
        }
        Ok(ScenarioTree {
            dim: raw.dimension,
            horizon,
            nodes,
            by_time,
            root: NodeId(root),
            desc,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, n: NodeId) -> &Node {
        &self.nodes[n.0]
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len()).map(NodeId)
    }

    pub fn label(&self, n: NodeId) -> &NodeLabel {
        &self.nodes[n.0].label
    }

    pub fn find(&self, label: &NodeLabel) -> Option<NodeId> {
        self.nodes
            .iter()
            .position(|n| &n.label == label)
            .map(NodeId)
    }

    pub fn time(&self, n: NodeId) -> usize {
        self.nodes[n.0].time
    }

    pub fn parent(&self, n: NodeId) -> Option<NodeId> {
        self.nodes[n.0].parent
    }

    pub fn children(&self, n: NodeId) -> &[NodeId] {
        &self.nodes[n.0].children
    }

    pub fn is_leaf(&self, n: NodeId) -> bool {
        self.nodes[n.0].children.is_empty()
    }

    /// Absolute probability of the atom.
    pub fn prob(&self, n: NodeId) -> &Rational {
        &self.nodes[n.0].prob
    }

    pub fn cond_prob(&self, n: NodeId) -> &Rational {
        &self.nodes[n.0].cond_prob
    }

    /// `P(m) / P(n)` for a descendant `m` of `n`.
    pub fn relative_prob(&self, n: NodeId, m: NodeId) -> Rational {
        self.prob(m) / self.prob(n)
    }

    pub fn nodes_at(&self, t: usize) -> &[NodeId] {
        &self.by_time[t]
    }

    pub fn leaves(&self) -> &[NodeId] {
        &self.by_time[self.horizon]
    }

    /// Time-`s` descendants of `n` (just `n` when `s` equals its time).
    pub fn descendants_at(&self, n: NodeId, s: usize) -> &[NodeId] {
        let t = self.time(n);
        assert!(s >= t && s <= self.horizon, "descendant time out of range");
        &self.desc[n.0][s - t]
    }

    /// All nodes of the subtree rooted at `n`, by increasing time.
    pub fn subtree(&self, n: NodeId) -> Vec<NodeId> {
        self.desc[n.0].iter().flatten().copied().collect()
    }

    pub fn ancestor_at(&self, mut n: NodeId, t: usize) -> NodeId {
        assert!(t <= self.time(n), "ancestor time out of range");
        while self.time(n) > t {
            n = self.parent(n).expect("non-root has a parent");
        }
        n
    }

    /// Nodes from `from` (inclusive) down to its descendant `to` (inclusive).
    pub fn path(&self, from: NodeId, to: NodeId) -> Vec<NodeId> {
        let mut p = vec![to];
        let mut cur = to;
        while cur != from {
            cur = self.parent(cur).expect("`to` descends from `from`");
            p.push(cur);
        }
        p.reverse();
        p
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProcessError {
    #[error("time order violated: target time {target} exceeds source time {source_time}")]
    TimeOrder { target: usize, source_time: usize },
    #[error("time {0} is beyond the horizon")]
    BeyondHorizon(usize),
    #[error("process has no value at node {node} (time {time})")]
    Undefined { node: NodeLabel, time: usize },
}

/// One optional value per node of a tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdaptedProcess<T> {
    values: Vec<Option<T>>,
}

pub type VectorProcess = AdaptedProcess<Vector>;
pub type ScalarProcess = AdaptedProcess<Rational>;

impl<T: Clone> AdaptedProcess<T> {
    pub fn new(tree: &ScenarioTree) -> Self {
        AdaptedProcess {
            values: vec![None; tree.len()],
        }
    }

    pub fn from_fn(tree: &ScenarioTree, times: &[usize], mut f: impl FnMut(NodeId) -> T) -> Self {
        let mut p = Self::new(tree);
        for &t in times {
            for &n in tree.nodes_at(t) {
                p.values[n.0] = Some(f(n));
            }
        }
        p
    }

    /// The same value at every node of time `t`.
    pub fn constant_at(tree: &ScenarioTree, t: usize, v: T) -> Self {
        Self::from_fn(tree, &[t], |_| v.clone())
    }

    pub fn everywhere(tree: &ScenarioTree, mut f: impl FnMut(NodeId) -> T) -> Self {
        let all: Vec<usize> = (0..=tree.horizon()).collect();
        Self::from_fn(tree, &all, &mut f)
    }

    pub fn get(&self, n: NodeId) -> Option<&T> {
        self.values.get(n.0).and_then(|v| v.as_ref())
    }

    /// Value at `n`, which must be defined.
    pub fn at(&self, n: NodeId) -> &T {
        self.get(n).expect("process value defined at node")
    }

    pub fn set(&mut self, n: NodeId, v: T) {
        self.values[n.0] = Some(v);
    }

    pub fn defined_at(&self, tree: &ScenarioTree, t: usize) -> bool {
        t <= tree.horizon() && tree.nodes_at(t).iter().all(|n| self.get(*n).is_some())
    }

    pub fn defined_times(&self, tree: &ScenarioTree) -> Vec<usize> {
        (0..=tree.horizon())
            .filter(|&t| self.defined_at(tree, t))
            .collect()
    }

    pub fn require_time(&self, tree: &ScenarioTree, t: usize) -> Result<(), ProcessError> {
        if t > tree.horizon() {
            return Err(ProcessError::BeyondHorizon(t));
        }
        for &n in tree.nodes_at(t) {
            if self.get(n).is_none() {
                return Err(ProcessError::Undefined {
                    node: tree.label(n).clone(),
                    time: t,
                });
            }
        }
        Ok(())
    }

    pub fn map<U: Clone>(&self, mut f: impl FnMut(&T) -> U) -> AdaptedProcess<U> {
        AdaptedProcess {
            values: self.values.iter().map(|v| v.as_ref().map(&mut f)).collect(),
        }
    }

    /// Defined entries in node order.
    pub fn entries(&self) -> impl Iterator<Item = (NodeId, &T)> {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.as_ref().map(|v| (NodeId(i), v)))
    }

    /// Copies the values of `other` at time `t` into `self`.
    pub fn merge_time(&mut self, tree: &ScenarioTree, other: &AdaptedProcess<T>, t: usize) {
        for &n in tree.nodes_at(t) {
            if let Some(v) = other.get(n) {
                self.values[n.0] = Some(v.clone());
            }
        }
    }
}

pub(crate) fn check_times(tree: &ScenarioTree, s: usize, t: usize) -> Result<(), ProcessError> {
    if s > tree.horizon() {
        return Err(ProcessError::BeyondHorizon(s));
    }
    if t > s {
        return Err(ProcessError::TimeOrder {
            target: t,
            source_time: s,
        });
    }
    Ok(())
}

/// `E(x | F_t)` for a vector process defined at time `s`.
pub fn conditional_expectation_vector(
    tree: &ScenarioTree,
    x: &VectorProcess,
    s: usize,
    t: usize,
) -> Result<VectorProcess, ProcessError> {
    check_times(tree, s, t)?;
    x.require_time(tree, s)?;
    let mut out = VectorProcess::new(tree);
    for &n in tree.nodes_at(t) {
        let pn = tree.prob(n);
        let mut acc: Option<Vector> = None;
        for &m in tree.descendants_at(n, s) {
            let w = tree.prob(m) / pn;
            let term = linalg::scale(x.at(m), &w);
            acc = Some(match acc {
                None => term,
                Some(a) => linalg::add(&a, &term),
            });
        }
        out.set(n, acc.expect("every node has time-s descendants"));
    }
    Ok(out)
}

/// Builder for small trees in code and tests: `children[i]` lists the
/// conditional probabilities of the children of the `i`-th node in
/// breadth-first order.
pub fn tree_from_branching(
    dim: usize,
    levels: &[Vec<Vec<Rational>>],
) -> Result<ScenarioTree, TreeError> {
    let mut nodes = vec![RawNode {
        label: NodeLabel::Int(0),
        parent: None,
        time: 0,
        cond_prob: Rational::one(),
    }];
    let mut frontier = vec![0u64];
    let mut next_id = 1u64;
    for (t, level) in levels.iter().enumerate() {
        let mut next = Vec::new();
        for (parent, probs) in frontier.iter().zip(level) {
            for p in probs {
                nodes.push(RawNode {
                    label: NodeLabel::Int(next_id),
                    parent: Some(NodeLabel::Int(*parent)),
                    time: t + 1,
                    cond_prob: p.clone(),
                });
                next.push(next_id);
                next_id += 1;
            }
        }
        frontier = next;
    }
    ScenarioTree::validate(RawTree {
        dimension: dim,
        horizon: levels.len(),
        nodes,
    })
}

/// Uniform tree where each node at time `t` has `branching[t]` equally
/// likely children.
pub fn uniform_tree(dim: usize, branching: &[usize]) -> ScenarioTree {
    let mut levels = Vec::new();
    let mut width = 1;
    for &b in branching {
        let p = Rational::new(1, b as i64);
        levels.push(vec![vec![p; b]; width]);
        width *= b;
    }
    tree_from_branching(dim, &levels).expect("uniform tree is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};
    use proptest::prelude::*;

    fn raw(nodes: Vec<(u64, Option<u64>, usize, Rational)>, horizon: usize) -> RawTree {
        RawTree {
            dimension: 1,
            horizon,
            nodes: nodes
                .into_iter()
                .map(|(id, p, t, c)| RawNode {
                    label: NodeLabel::Int(id),
                    parent: p.map(NodeLabel::Int),
                    time: t,
                    cond_prob: c,
                })
                .collect(),
        }
    }

    #[test]
    fn minimal_binomial_tree_is_valid() {
        let t = validate_tree(raw(
            vec![
                (0, None, 0, qi(1)),
                (1, Some(0), 1, q(1, 2)),
                (2, Some(0), 1, q(1, 2)),
            ],
            1,
        ))
        .unwrap();
        assert_eq!(t.leaves().len(), 2);
        assert_eq!(t.prob(NodeId(1)), &q(1, 2));
    }

    #[test]
    fn probability_sum_error_mentions_the_sum() {
        let err = validate_tree(raw(
            vec![
                (0, None, 0, qi(1)),
                (1, Some(0), 1, q(1, 2)),
                (2, Some(0), 1, q(1, 3)),
            ],
            1,
        ))
        .unwrap_err();
        assert!(
            err.to_string().contains("probabilities sum to 5/6 ≠ 1"),
            "{err}"
        );
    }

    #[test]
    fn leaf_before_horizon_is_rejected() {
        let err = validate_tree(raw(
            vec![
                (0, None, 0, qi(1)),
                (1, Some(0), 1, q(1, 2)),
                (2, Some(0), 1, q(1, 2)),
                (3, Some(1), 2, qi(1)),
            ],
            2,
        ))
        .unwrap_err();
        assert!(err.to_string().starts_with("leaf before horizon"), "{err}");
    }

    #[test]
    fn other_invariants() {
        assert!(matches!(
            validate_tree(raw(vec![(0, None, 0, qi(1)), (1, Some(9), 1, qi(1))], 1)),
            Err(TreeError::DanglingNode { .. })
        ));
        assert!(matches!(
            validate_tree(raw(
                vec![
                    (0, None, 0, qi(1)),
                    (1, Some(0), 1, qi(0)),
                    (2, Some(0), 1, qi(1))
                ],
                1
            )),
            Err(TreeError::NonPositiveProbability { .. })
        ));
        assert!(matches!(
            validate_tree(raw(vec![(0, None, 0, qi(1)), (1, Some(0), 2, qi(1))], 2)),
            Err(TreeError::TimeMismatch { .. })
        ));
        assert!(matches!(
            validate_tree(raw(vec![(0, None, 0, qi(1))], 0)),
            Err(TreeError::Horizon(0))
        ));
        let mut r = raw(vec![(0, None, 0, qi(1)), (1, Some(0), 1, qi(1))], 1);
        r.dimension = 5;
        assert!(matches!(validate_tree(r), Err(TreeError::Dimension(5))));
    }

    #[test]
    fn conditional_expectation_examples() {
        let t = uniform_tree(1, &[2]);
        let x = VectorProcess::from_fn(&t, &[1], |n| vec![if n.0 == 1 { qi(3) } else { qi(5) }]);
        let e = conditional_expectation_vector(&t, &x, 1, 0).unwrap();
        assert_eq!(e.at(t.root()), &vec![qi(4)]);
        let same = conditional_expectation_vector(&t, &x, 1, 1).unwrap();
        for &n in t.leaves() {
            assert_eq!(same.at(n), x.at(n));
        }
        let t3 = tree_from_branching(1, &[vec![vec![q(1, 6), q(1, 3), q(1, 2)]]]).unwrap();
        let vals = [qi(6), qi(3), qi(2)];
        let x = VectorProcess::from_fn(&t3, &[1], |n| vec![vals[n.0 - 1].clone()]);
        let e = conditional_expectation_vector(&t3, &x, 1, 0).unwrap();
        assert_eq!(e.at(t3.root()), &vec![qi(3)]);
        assert!(matches!(
            conditional_expectation_vector(&t3, &x, 0, 1),
            Err(ProcessError::TimeOrder { .. })
        ));
    }

    fn random_tree() -> impl Strategy<Value = (ScenarioTree, Vec<i64>)> {
        (
            prop::collection::vec(1usize..4, 1..4),
            prop::collection::vec(1i64..7, 40),
        )
            .prop_map(|(branching, weights)| {
                let mut levels = Vec::new();
                let mut width = 1;
                let mut w = weights.iter().cycle();
                for &b in &branching {
                    let mut level = Vec::new();
                    for _ in 0..width {
                        let raw: Vec<i64> = (0..b).map(|_| *w.next().unwrap()).collect();
                        let total: i64 = raw.iter().sum();
                        level.push(raw.iter().map(|&x| Rational::new(x, total)).collect());
                    }
                    levels.push(level);
                    width *= b;
                }
                (tree_from_branching(1, &levels).unwrap(), weights)
            })
    }

    proptest! {
        #[test]
        fn tower_property_and_probability_mass((tree, vals) in random_tree()) {
            let horizon = tree.horizon();
            for t in 0..=horizon {
                let total: Rational = tree.nodes_at(t).iter().map(|&n| tree.prob(n).clone()).sum();
                prop_assert!(total.is_one());
            }
            let x = VectorProcess::from_fn(&tree, &[horizon], |n| vec![qi(vals[n.0 % vals.len()] - 3)]);
            for t in 0..=horizon {
                let mid = conditional_expectation_vector(&tree, &x, horizon, t).unwrap();
                for u in 0..=t {
                    let two = conditional_expectation_vector(&tree, &mid, t, u).unwrap();
                    let direct = conditional_expectation_vector(&tree, &x, horizon, u).unwrap();
                    for &n in tree.nodes_at(u) {
                        prop_assert_eq!(two.at(n), direct.at(n));
                    }
                }
            }
        }
    }
}
