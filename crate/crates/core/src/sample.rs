//! Random instances for property tests, cross-validation corpora and
//! benchmarks. Everything is rational; probabilities are drawn as small
//! integer weights.

use rand::Rng;

use crate::hedging::{solvency_from_bid_ask, SolvencyProcess};
use crate::linalg::{self, Vector};
use crate::polyhedron::{Halfspace, Polyhedron};
use crate::rational::Rational;
use crate::tree::{tree_from_branching, NodeId, ScalarProcess, ScenarioTree};

/// Shape bounds for random trees.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeShape {
    pub max_horizon: usize,
    pub max_branching: usize,
}

fn weights(rng: &mut (impl Rng + ?Sized), k: usize) -> Vec<Rational> {
    let w: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=4)).collect();
    let total: i64 = w.iter().sum();
    w.into_iter().map(|x| Rational::new(x, total)).collect()
}

/// A tree with horizon in `1..=max_horizon`, every node having between one
/// and `max_branching` children with random conditional probabilities.
pub fn random_tree(rng: &mut (impl Rng + ?Sized), dim: usize, shape: TreeShape) -> ScenarioTree {
    let horizon = rng.gen_range(1..=shape.max_horizon.max(1));
    let mut levels = Vec::new();
    let mut width = 1;
    for _ in 0..horizon {
        let level: Vec<Vec<Rational>> = (0..width)
            .map(|_| {
                let b = rng.gen_range(1..=shape.max_branching.max(1));
                weights(rng, b)
            })
            .collect();
        width = level.iter().map(Vec::len).sum();
        levels.push(level);
    }
    tree_from_branching(dim, &levels).expect("generated tree is valid")
}

/// A rational in `[lo, hi]` with denominator at most `den`.
pub fn random_rational(rng: &mut (impl Rng + ?Sized), lo: i64, hi: i64, den: i64) -> Rational {
    let q = rng.gen_range(1..=den);
    Rational::new(rng.gen_range(lo * q..=hi * q), q)
}

/// Bid and ask prices of the second asset in units of the first, with
/// `0 < bid <= ask` drawn from `[lo, hi]`. With `strict`, every spread is
/// nondegenerate.
pub fn random_bid_ask(
    rng: &mut (impl Rng + ?Sized),
    tree: &ScenarioTree,
    lo: i64,
    hi: i64,
    strict: bool,
) -> (ScalarProcess, ScalarProcess) {
    let mut bid = ScalarProcess::new(tree);
    let mut ask = ScalarProcess::new(tree);
    for n in tree.node_ids() {
        let (b, a) = loop {
            let x = random_rational(rng, lo, hi, 4);
            let frictionless = !strict && rng.gen_bool(0.2);
            let y = if frictionless {
                x.clone()
            } else {
                random_rational(rng, lo, hi, 4)
            };
            let (b, a) = if x <= y { (x, y) } else { (y, x) };
            if !strict || b < a {
                break (b, a);
            }
        };
        bid.set(n, b);
        ask.set(n, a);
    }
    (bid, ask)
}

pub fn random_bid_ask_model(
    rng: &mut (impl Rng + ?Sized),
    shape: TreeShape,
    strict: bool,
) -> (ScenarioTree, SolvencyProcess) {
    let tree = random_tree(rng, 2, shape);
    let (b, a) = random_bid_ask(rng, &tree, 1, 100, strict);
    let k = solvency_from_bid_ask(&tree, &b, &a).expect("generated spreads are valid");
    (tree, k)
}

fn positive_vector(rng: &mut (impl Rng + ?Sized), d: usize) -> Vector {
    (0..d)
        .map(|_| Rational::from_integer(rng.gen_range(1..=6)))
        .collect()
}

/// A strictly proper solvency cone whose facet normals are strictly
/// positive: the dual of the cone spanned by `d` or more positive vectors.
/// It contains the orthant in its interior apart from the origin.
pub fn random_solvency_cone(rng: &mut (impl Rng + ?Sized), d: usize) -> Polyhedron {
    loop {
        let count = rng.gen_range(d..=d + 2);
        let gens: Vec<Vector> = (0..count).map(|_| positive_vector(rng, d)).collect();
        if linalg::rank(&gens, d) < d {
            continue;
        }
        let ineqs = gens
            .into_iter()
            .map(|g| Halfspace::new(g, Rational::zero()))
            .collect();
        return Polyhedron::from_halfspaces(d, ineqs, vec![]).expect("cone from halfspaces");
    }
}

pub fn random_solvency_process(
    rng: &mut (impl Rng + ?Sized),
    tree: &ScenarioTree,
) -> SolvencyProcess {
    let mut sets = crate::conditional::SetProcess::new(tree);
    for n in tree.node_ids() {
        sets.set(n, random_solvency_cone(rng, tree.dim()));
    }
    SolvencyProcess::new(tree, sets).expect("generated cones are solvency sets")
}

/// A strictly proper conical model: bid-ask spreads for `d = 2`, random
/// cones otherwise.
pub fn random_conical_model(
    rng: &mut (impl Rng + ?Sized),
    d: usize,
    shape: TreeShape,
) -> (ScenarioTree, SolvencyProcess) {
    if d == 2 {
        return random_bid_ask_model(rng, shape, true);
    }
    let tree = random_tree(rng, d, shape);
    let k = random_solvency_process(rng, &tree);
    (tree, k)
}

/// A cone spanned by one to four random integer vectors with entries in
/// `[-4, 4]`, occasionally with a line.
pub fn random_cone(rng: &mut (impl Rng + ?Sized), d: usize) -> Polyhedron {
    let count = rng.gen_range(1..=4);
    let gens: Vec<Vector> = (0..count).map(|_| integer_vector(rng, d, 4)).collect();
    let lines = if rng.gen_bool(0.15) {
        vec![integer_vector(rng, d, 3)]
    } else {
        vec![]
    };
    Polyhedron::from_generators(d, vec![linalg::zeros(d)], gens, lines)
        .expect("cone from generators")
}

pub fn integer_vector(rng: &mut (impl Rng + ?Sized), d: usize, bound: i64) -> Vector {
    (0..d)
        .map(|_| Rational::from_integer(rng.gen_range(-bound..=bound)))
        .collect()
}

/// A polytope: the hull of two to six random integer points.
pub fn random_polytope(rng: &mut (impl Rng + ?Sized), d: usize, bound: i64) -> Polyhedron {
    let count = rng.gen_range(2..=6);
    let pts: Vec<Vector> = (0..count).map(|_| integer_vector(rng, d, bound)).collect();
    Polyhedron::from_generators(d, pts, vec![], vec![]).expect("polytope from points")
}

/// A polyhedron: a random polytope plus, sometimes, recession directions.
pub fn random_polyhedron(rng: &mut (impl Rng + ?Sized), d: usize) -> Polyhedron {
    let count = rng.gen_range(1..=4);
    let pts: Vec<Vector> = (0..count).map(|_| integer_vector(rng, d, 5)).collect();
    let rays: Vec<Vector> = (0..rng.gen_range(0..=2))
        .map(|_| integer_vector(rng, d, 3))
        .collect();
    let lines = if rng.gen_bool(0.1) {
        vec![integer_vector(rng, d, 2)]
    } else {
        vec![]
    };
    Polyhedron::from_generators(d, pts, rays, lines).expect("polyhedron from generators")
}

/// Assigns `f(rng, n)` at every node.
pub fn random_set_process(
    rng: &mut impl Rng,
    tree: &ScenarioTree,
    mut f: impl FnMut(&mut dyn rand::RngCore, NodeId) -> Polyhedron,
) -> crate::conditional::SetProcess {
    let mut sets = crate::conditional::SetProcess::new(tree);
    for n in tree.node_ids() {
        sets.set(n, f(rng, n));
    }
    sets
}
