#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use setcalc::conditional::SetProcess;
use setcalc::linalg::{self, Vector};
use setcalc::sample::{integer_vector, random_tree, TreeShape};
use setcalc::tree::{NodeId, ScalarProcess, ScenarioTree, VectorProcess};
use setcalc::{Polyhedron, Rational};

pub fn config(cases: u32) -> proptest::test_runner::Config {
    proptest::test_runner::Config {
        cases,
        failure_persistence: None,
        ..Default::default()
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_tree(
    rng: &mut ChaCha8Rng,
    d: usize,
    horizon: usize,
    branching: usize,
) -> ScenarioTree {
    random_tree(
        rng,
        d,
        TreeShape {
            max_horizon: horizon,
            max_branching: branching,
        },
    )
}

/// A nonzero rational in `[-hi, hi]` with denominator at most 3, positive
/// when `positive` is set.
pub fn nonzero(rng: &mut ChaCha8Rng, hi: i64, positive: bool) -> Rational {
    loop {
        let den = rng.gen_range(1..=3);
        let lo = if positive { 1 } else { -hi * den };
        let num = rng.gen_range(lo..=hi * den);
        if num != 0 {
            return Rational::new(num, den);
        }
    }
}

/// An `F_t`-measurable scalar sampled once per node of time `t`.
pub fn measurable_scalar(
    rng: &mut ChaCha8Rng,
    tree: &ScenarioTree,
    t: usize,
    positive: bool,
) -> ScalarProcess {
    ScalarProcess::from_fn(tree, &[t], |_| nonzero(rng, 4, positive))
}

/// `lambda(ancestor at t) * x` at every node of time `t` or later where `x`
/// is defined.
pub fn scale_process(
    tree: &ScenarioTree,
    x: &SetProcess,
    lambda: &ScalarProcess,
    t: usize,
) -> SetProcess {
    let mut out = SetProcess::new(tree);
    for (n, p) in x.entries().filter(|&(n, _)| tree.time(n) >= t) {
        out.set(n, p.scale(lambda.at(tree.ancestor_at(n, t))));
    }
    out
}

pub fn add_processes(tree: &ScenarioTree, x: &SetProcess, y: &SetProcess) -> SetProcess {
    let mut out = SetProcess::new(tree);
    for (n, p) in x.entries() {
        out.set(n, p.minkowski_sum(y.at(n)).unwrap());
    }
    out
}

pub fn directions(rng: &mut ChaCha8Rng, d: usize, count: usize) -> Vec<Vector> {
    (0..count)
        .map(|_| integer_vector(rng, d, 3))
        .filter(|u| !linalg::is_zero(u))
        .collect()
}

/// A point of `p` as a random nonnegative combination of its generators.
pub fn member(rng: &mut ChaCha8Rng, p: &Polyhedron) -> Vector {
    let d = p.dim();
    let verts = p.vertices();
    let mut x = verts[rng.gen_range(0..verts.len())].clone();
    for r in p.rays() {
        x = linalg::axpy(&x, &Rational::from_integer(rng.gen_range(0..3)), r);
    }
    for l in p.lines() {
        x = linalg::axpy(&x, &Rational::from_integer(rng.gen_range(-2..3)), l);
    }
    assert_eq!(x.len(), d);
    x
}

pub fn leaf_claim(rng: &mut ChaCha8Rng, tree: &ScenarioTree, bound: i64) -> VectorProcess {
    VectorProcess::from_fn(tree, &[tree.horizon()], |_| {
        integer_vector(rng, tree.dim(), bound)
    })
}

pub fn nodes_up_to(tree: &ScenarioTree, t: usize) -> Vec<NodeId> {
    (0..=t).flat_map(|u| tree.nodes_at(u).to_vec()).collect()
}
