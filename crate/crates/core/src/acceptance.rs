//! Dynamic acceptance families and their one-step risk maps.
//!
//! Every family acts componentwise. `ess_inf` accepts nonnegative positions,
//! `expectation` positions with nonnegative conditional mean, and `entropic`
//! positions with `E(exp(-eta) | F_t) <= 1`. Only the first two have
//! polyhedral risk maps; the entropic family supports membership tests only.

use std::fmt;
use std::str::FromStr;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use thiserror::Error;

use crate::conditional::{cond_core, cond_expectation_set, CondError, SetProcess};
use crate::entropic::exp_interval;
use crate::linalg::{self, Vector};
use crate::rational::Rational;
use crate::tree::{
    check_times, AdaptedProcess, NodeId, NodeLabel, ProcessError, ScenarioTree, VectorProcess,
};

pub const DEFAULT_ENTROPIC_PRECISION: u32 = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    EssInf,
    Expectation,
    Entropic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AcceptanceFamily {
    pub kind: FamilyKind,
    /// Working precision in bits for entropic membership.
    pub precision_bits: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AccError {
    #[error("the {family} family has no set-valued risk map")]
    Unsupported { family: &'static str },
    #[error("no period after time {t}: the horizon is {horizon}")]
    NoNextPeriod { t: usize, horizon: usize },
    #[error(transparent)]
    Process(#[from] ProcessError),
    #[error(transparent)]
    Cond(#[from] CondError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown acceptance family '{0}' (expected essinf, expectation or entropic)")]
pub struct ParseFamilyError(pub String);

impl FromStr for FamilyKind {
    type Err = ParseFamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "essinf" | "ess_inf" | "ess-inf" => Ok(FamilyKind::EssInf),
            "expectation" => Ok(FamilyKind::Expectation),
            "entropic" => Ok(FamilyKind::Entropic),
            other => Err(ParseFamilyError(other.to_string())),
        }
    }
}

impl FamilyKind {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyKind::EssInf => "ess_inf",
            FamilyKind::Expectation => "expectation",
            FamilyKind::Entropic => "entropic",
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Three-valued membership. `Unknown` only arises for the entropic family
/// when the enclosure of the exponential moment straddles 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Accepted,
    Rejected,
    Unknown,
}

impl Verdict {
    pub fn is_accepted(self) -> bool {
        self == Verdict::Accepted
    }

    fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Rejected, _) | (_, Verdict::Rejected) => Verdict::Rejected,
            (Verdict::Unknown, _) | (_, Verdict::Unknown) => Verdict::Unknown,
            _ => Verdict::Accepted,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Accepted => "accepted",
            Verdict::Rejected => "rejected",
            Verdict::Unknown => "unknown",
        })
    }
}

/// The interface the axiom validator needs. Implemented by
/// [`AcceptanceFamily`]; tests inject other families through it.
pub trait Acceptance: Sync {
    fn name(&self) -> String;
    fn coherent(&self) -> bool;
    fn dilatation_monotone(&self) -> bool;
    /// Membership of `eta` (defined at time `s`) in the acceptance set at the
    /// node `n`, whose time is at most `s`.
    fn accepts_node(
        &self,
        tree: &ScenarioTree,
        eta: &VectorProcess,
        s: usize,
        n: NodeId,
    ) -> Verdict;
    /// A value `gamma` at `n` such that `gamma - xi` is accepted at `n`.
    fn compensation(&self, tree: &ScenarioTree, xi: &VectorProcess, s: usize, n: NodeId) -> Vector;
}

impl AcceptanceFamily {
    pub fn ess_inf() -> Self {
        Self::of(FamilyKind::EssInf)
    }

    pub fn expectation() -> Self {
        Self::of(FamilyKind::Expectation)
    }

    pub fn entropic() -> Self {
        Self::of(FamilyKind::Entropic)
    }

    pub fn entropic_with_precision(bits: u32) -> Self {
        AcceptanceFamily {
            kind: FamilyKind::Entropic,
            precision_bits: bits.max(8),
        }
    }

    pub fn of(kind: FamilyKind) -> Self {
        AcceptanceFamily {
            kind,
            precision_bits: DEFAULT_ENTROPIC_PRECISION,
        }
    }

    pub fn set_valued_risk_map(&self) -> bool {
        self.kind != FamilyKind::Entropic
    }

    pub fn is_coherent(&self) -> bool {
        self.kind != FamilyKind::Entropic
    }

    pub fn is_dilatation_monotone(&self) -> bool {
        true
    }

    /// The one-step acceptance cone restricted to the children of `parent`,
    /// in the space of child-stacked vectors (`d` coordinates per child, in
    /// child order).
    pub fn lifted_cone(&self, tree: &ScenarioTree, parent: NodeId) -> Result<LiftedCone, AccError> {
        let d = tree.dim();
        let children = tree.children(parent).to_vec();
        let k = children.len();
        if k == 0 {
            return Err(AccError::NoNextPeriod {
                t: tree.time(parent),
                horizon: tree.horizon(),
            });
        }
        let n = k * d;
        match self.kind {
            FamilyKind::EssInf => Ok(LiftedCone::orthant(d, children)),
            FamilyKind::Expectation => {
                let p: Vec<Rational> = children
                    .iter()
                    .map(|&c| tree.cond_prob(c).clone())
                    .collect();
                let mut ineqs = Vec::with_capacity(d);
                let mut lines = Vec::new();
                let mut rays = Vec::with_capacity(d);
                for i in 0..d {
                    let mut a = linalg::zeros(n);
                    for (c, pc) in p.iter().enumerate() {
                        a[c * d + i] = pc.clone();
                    }
                    ineqs.push(a);
                    rays.push(linalg::unit(n, i));
                    for c in 1..k {
                        let mut l = linalg::zeros(n);
                        l[c * d + i] = p[0].clone();
                        l[i] = -p[c].clone();
                        lines.push(linalg::primitive_line(&l));
                    }
                }
                Ok(LiftedCone {
                    dim: d,
                    children,
                    ineqs,
                    lines,
                    rays,
                })
            }
            FamilyKind::Entropic => Err(AccError::Unsupported { family: "entropic" }),
        }
    }

    fn entropic_node(
        &self,
        tree: &ScenarioTree,
        eta: &VectorProcess,
        s: usize,
        n: NodeId,
    ) -> Verdict {
        let desc = tree.descendants_at(n, s);
        let mut verdict = Verdict::Accepted;
        for i in 0..tree.dim() {
            let vals: Vec<&Rational> = desc.iter().map(|&m| &eta.at(m)[i]).collect();
            if vals.iter().all(|v| !v.is_negative()) {
                continue;
            }
            if vals.iter().all(|v| !v.is_positive()) {
                return Verdict::Rejected;
            }
            let mut lo = Rational::zero();
            let mut hi = Rational::zero();
            for (&m, v) in desc.iter().zip(&vals) {
                let w = tree.relative_prob(n, m);
                let e = exp_interval(&-(*v).clone(), self.precision_bits);
                lo += &w * &e.lo;
                hi += &w * &e.hi;
            }
            let one = Rational::one();
            let c = if hi <= one {
                Verdict::Accepted
            } else if lo > one {
                Verdict::Rejected
            } else {
                Verdict::Unknown
            };
            verdict = verdict.and(c);
            if verdict == Verdict::Rejected {
                break;
            }
        }
        verdict
    }
}

impl Acceptance for AcceptanceFamily {
    fn name(&self) -> String {
        self.kind.name().to_string()
    }

    fn coherent(&self) -> bool {
        self.is_coherent()
    }

    fn dilatation_monotone(&self) -> bool {
        self.is_dilatation_monotone()
    }

    fn accepts_node(
        &self,
        tree: &ScenarioTree,
        eta: &VectorProcess,
        s: usize,
        n: NodeId,
    ) -> Verdict {
        let ok = match self.kind {
            FamilyKind::EssInf => tree
                .descendants_at(n, s)
                .iter()
                .all(|&m| eta.at(m).iter().all(|x| !x.is_negative())),
            FamilyKind::Expectation => conditional_mean(tree, eta, s, n)
                .iter()
                .all(|x| !x.is_negative()),
            FamilyKind::Entropic => return self.entropic_node(tree, eta, s, n),
        };
        if ok {
            Verdict::Accepted
        } else {
            Verdict::Rejected
        }
    }

    fn compensation(&self, tree: &ScenarioTree, xi: &VectorProcess, s: usize, n: NodeId) -> Vector {
        match self.kind {
            FamilyKind::Expectation => conditional_mean(tree, xi, s, n),
            FamilyKind::EssInf | FamilyKind::Entropic => {
                let d = tree.dim();
                let desc = tree.descendants_at(n, s);
                (0..d)
                    .map(|i| {
                        desc.iter()
                            .map(|&m| xi.at(m)[i].clone())
                            .max()
                            .expect("descendants")
                    })
                    .collect()
            }
        }
    }
}

/// `E(eta | F_t)` evaluated at the node `n`.
pub fn conditional_mean(tree: &ScenarioTree, eta: &VectorProcess, s: usize, n: NodeId) -> Vector {
    let mut acc = linalg::zeros(tree.dim());
    for &m in tree.descendants_at(n, s) {
        acc = linalg::axpy(&acc, &tree.relative_prob(n, m), eta.at(m));
    }
    acc
}

/// A polyhedral cone in the child-stacked space of one parent node, given in
/// both forms: `ineqs` (each `a . z >= 0`) and generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedCone {
    pub dim: usize,
    pub children: Vec<NodeId>,
    pub ineqs: Vec<Vector>,
    pub lines: Vec<Vector>,
    pub rays: Vec<Vector>,
}

impl LiftedCone {
    pub fn orthant(dim: usize, children: Vec<NodeId>) -> Self {
        let n = dim * children.len();
        let units: Vec<Vector> = (0..n).map(|i| linalg::unit(n, i)).collect();
        LiftedCone {
            dim,
            children,
            ineqs: units.clone(),
            lines: Vec::new(),
            rays: units,
        }
    }

    /// The initial acceptance cone `R_+^d` at the root.
    pub fn root(tree: &ScenarioTree) -> Self {
        Self::orthant(tree.dim(), vec![tree.root()])
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim * self.children.len()
    }

    pub fn contains(&self, z: &[Rational]) -> bool {
        self.ineqs.iter().all(|a| !linalg::dot(a, z).is_negative())
    }

    /// The block of `z` that belongs to the `c`-th child.
    pub fn block<'a>(&self, z: &'a [Rational], c: usize) -> &'a [Rational] {
        &z[c * self.dim..(c + 1) * self.dim]
    }
}

/// Membership of a position defined at time `s` in the acceptance sets at
/// every time-`t` node.
pub fn accepts(
    tree: &ScenarioTree,
    family: &dyn Acceptance,
    eta: &VectorProcess,
    s: usize,
    t: usize,
) -> Result<AdaptedProcess<Verdict>, AccError> {
    check_times(tree, s, t)?;
    eta.require_time(tree, s)?;
    let mut out = AdaptedProcess::new(tree);
    for &n in tree.nodes_at(t) {
        out.set(n, family.accepts_node(tree, eta, s, n));
    }
    Ok(out)
}

/// The one-step selection risk map from time `t+1` to `t`.
pub fn risk_map(
    tree: &ScenarioTree,
    family: &AcceptanceFamily,
    x: &SetProcess,
    t: usize,
) -> Result<SetProcess, AccError> {
    if t + 1 > tree.horizon() {
        return Err(AccError::NoNextPeriod {
            t,
            horizon: tree.horizon(),
        });
    }
    match family.kind {
        FamilyKind::EssInf => Ok(cond_core(tree, x, t + 1, t)?),
        FamilyKind::Expectation => Ok(cond_expectation_set(tree, x, t + 1, t)?),
        FamilyKind::Entropic => Err(AccError::Unsupported { family: "entropic" }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axiom {
    Normalisation,
    ConditionalConvexity,
    WeakTimeConsistency,
    Compensation,
    Coherence,
    DilatationMonotonicity,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Normalisation => "normalisation",
            Axiom::ConditionalConvexity => "conditional convexity",
            Axiom::WeakTimeConsistency => "weak time consistency",
            Axiom::Compensation => "compensation",
            Axiom::Coherence => "coherence",
            Axiom::DilatationMonotonicity => "dilatation monotonicity",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Violation {
    pub axiom: Axiom,
    pub node: NodeLabel,
    pub t: usize,
    pub s: usize,
    pub witness: VectorProcess,
    pub description: String,
}

#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub family: String,
    /// Number of sampled instances per axiom that reached a decision.
    pub checked: Vec<(Axiom, usize)>,
    /// Instances skipped because membership was undecided.
    pub undecided: usize,
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violated(&self, axiom: Axiom) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }

    pub fn first_violation(&self, axiom: Axiom) -> Option<&Violation> {
        self.violations.iter().find(|v| v.axiom == axiom)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ValidationConfig {
    pub seed: u64,
    pub samples: usize,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        ValidationConfig {
            seed: 7,
            samples: 12,
        }
    }
}

pub fn validate_acceptance_axioms(tree: &ScenarioTree, family: &dyn Acceptance) -> AxiomReport {
    validate_acceptance_axioms_with(tree, family, &ValidationConfig::default())
}

struct Validator<'a> {
    tree: &'a ScenarioTree,
    family: &'a dyn Acceptance,
    rng: StdRng,
    counts: Vec<(Axiom, usize)>,
    undecided: usize,
    violations: Vec<Violation>,
}

pub fn validate_acceptance_axioms_with(
    tree: &ScenarioTree,
    family: &dyn Acceptance,
    cfg: &ValidationConfig,
) -> AxiomReport {
    let mut axioms = vec![
        Axiom::Normalisation,
        Axiom::ConditionalConvexity,
        Axiom::WeakTimeConsistency,
        Axiom::Compensation,
    ];
    if family.coherent() {
        axioms.push(Axiom::Coherence);
    }
    if family.dilatation_monotone() {
        axioms.push(Axiom::DilatationMonotonicity);
    }
    let mut v = Validator {
        tree,
        family,
        rng: StdRng::seed_from_u64(cfg.seed),
        counts: axioms.iter().map(|&a| (a, 0)).collect(),
        undecided: 0,
        violations: Vec::new(),
    };
    let horizon = tree.horizon();
    for s in 0..=horizon {
        for t in 0..=s {
            v.normalisation(t, s, cfg.samples);
            v.convexity(t, s, cfg.samples);
            v.compensation(t, s, cfg.samples);
            if family.coherent() {
                v.coherence(t, s, cfg.samples);
            }
            for u in t..=s {
                v.time_consistency(t, u, s, cfg.samples);
                if family.dilatation_monotone() {
                    v.dilatation(t, u, s, cfg.samples);
                }
            }
        }
    }
    AxiomReport {
        family: family.name(),
        checked: v.counts,
        undecided: v.undecided,
        violations: v.violations,
    }
}

fn describe(tree: &ScenarioTree, x: &VectorProcess, s: usize) -> String {
    let nodes = tree.nodes_at(s);
    let first = x.at(nodes[0]);
    let fmt_vec = |v: &Vector| {
        let parts: Vec<String> = v.iter().map(|r| r.to_string()).collect();
        format!("({})", parts.join(", "))
    };
    if nodes.iter().all(|&n| x.at(n) == first) {
        return format!("constant {} at time {s}", fmt_vec(first));
    }
    let parts: Vec<String> = nodes
        .iter()
        .map(|&n| format!("{}: {}", tree.label(n), fmt_vec(x.at(n))))
        .collect();
    format!("time {s} values {{{}}}", parts.join(", "))
}

impl Validator<'_> {
    fn count(&mut self, axiom: Axiom) {
        if let Some(c) = self.counts.iter_mut().find(|(a, _)| *a == axiom) {
            c.1 += 1;
        }
    }

    fn violate(
        &mut self,
        axiom: Axiom,
        n: NodeId,
        t: usize,
        s: usize,
        witness: VectorProcess,
        what: &str,
    ) {
        let description = format!("{what}: {}", describe(self.tree, &witness, s));
        self.violations.push(Violation {
            axiom,
            node: self.tree.label(n).clone(),
            t,
            s,
            witness,
            description,
        });
    }

    fn random_value(&mut self, lo: i64, hi: i64) -> Rational {
        let den = self.rng.gen_range(1..=3);
        let num = self.rng.gen_range(lo * den..=hi * den);
        Rational::new(num, den)
    }

    fn random_process(&mut self, s: usize, lo: i64, hi: i64) -> VectorProcess {
        let d = self.tree.dim();
        let mut x = VectorProcess::new(self.tree);
        for &m in self.tree.nodes_at(s) {
            let v: Vector = (0..d).map(|_| self.random_value(lo, hi)).collect();
            x.set(m, v);
        }
        x
    }

    /// A time-`s` process that is accepted at every time-`t` node, built by
    /// compensating a random position.
    fn random_accepted(&mut self, t: usize, s: usize) -> Option<VectorProcess> {
        let xi = self.random_process(s, -4, 4);
        let gammas: Vec<(NodeId, Vector)> = self
            .tree
            .nodes_at(t)
            .iter()
            .map(|&n| (n, self.family.compensation(self.tree, &xi, s, n)))
            .collect();
        let mut eta = VectorProcess::new(self.tree);
        for (n, g) in &gammas {
            let bump = self.random_value(0, 2);
            for &m in self.tree.descendants_at(*n, s) {
                let mut v = linalg::sub(g, xi.at(m));
                for x in v.iter_mut() {
                    *x += &bump;
                }
                eta.set(m, v);
            }
        }
        let all = self.tree.nodes_at(t).iter().all(|&n| {
            self.family
                .accepts_node(self.tree, &eta, s, n)
                .is_accepted()
        });
        all.then_some(eta)
    }

    /// Membership test at every time-`t` node; `Unknown` answers are skipped.
    #[allow(clippy::too_many_arguments)]
    fn expect_at(
        &mut self,
        axiom: Axiom,
        t: usize,
        s: usize,
        x: &VectorProcess,
        horizon: usize,
        want: Verdict,
        what: &str,
        only: Option<&dyn Fn(NodeId) -> bool>,
    ) {
        for &n in self.tree.nodes_at(t) {
            if let Some(filter) = only {
                if !filter(n) {
                    continue;
                }
            }
            match self.family.accepts_node(self.tree, x, horizon, n) {
                Verdict::Unknown => self.undecided += 1,
                got => {
                    self.count(axiom);
                    if got != want {
                        self.violate(axiom, n, t, s, x.clone(), what);
                        return;
                    }
                }
            }
        }
    }

    fn normalisation(&mut self, t: usize, s: usize, samples: usize) {
        let d = self.tree.dim();
        let zero = VectorProcess::constant_at(self.tree, s, linalg::zeros(d));
        self.expect_at(
            Axiom::Normalisation,
            t,
            s,
            &zero,
            s,
            Verdict::Accepted,
            "zero position rejected",
            None,
        );
        let half = VectorProcess::constant_at(self.tree, s, vec![Rational::new(-1, 2); d]);
        self.expect_at(
            Axiom::Normalisation,
            t,
            s,
            &half,
            s,
            Verdict::Rejected,
            "strictly negative position accepted",
            None,
        );
        for _ in 0..samples {
            let pos = self.random_process(s, 0, 5);
            self.expect_at(
                Axiom::Normalisation,
                t,
                s,
                &pos,
                s,
                Verdict::Accepted,
                "nonnegative position rejected",
                None,
            );
            let mut neg = self.random_process(s, -5, 0);
            for &m in self.tree.nodes_at(s) {
                let v: Vector = neg
                    .at(m)
                    .iter()
                    .map(|x| {
                        if x.is_zero() {
                            Rational::new(-1, 3)
                        } else {
                            x.clone()
                        }
                    })
                    .collect();
                neg.set(m, v);
            }
            self.expect_at(
                Axiom::Normalisation,
                t,
                s,
                &neg,
                s,
                Verdict::Rejected,
                "strictly negative position accepted",
                None,
            );
        }
    }

    fn convexity(&mut self, t: usize, s: usize, samples: usize) {
        for _ in 0..samples {
            let (Some(a), Some(b)) = (self.random_accepted(t, s), self.random_accepted(t, s))
            else {
                self.undecided += 1;
                continue;
            };
            let mut mix = VectorProcess::new(self.tree);
            for &n in self.tree.nodes_at(t) {
                let lam = Rational::new(self.rng.gen_range(0..=6), 6);
                let mu = Rational::one() - &lam;
                for &m in self.tree.descendants_at(n, s) {
                    mix.set(
                        m,
                        linalg::add(&linalg::scale(a.at(m), &lam), &linalg::scale(b.at(m), &mu)),
                    );
                }
            }
            self.expect_at(
                Axiom::ConditionalConvexity,
                t,
                s,
                &mix,
                s,
                Verdict::Accepted,
                "mixture of accepted positions rejected",
                None,
            );
        }
    }

    fn lift(&self, x: &VectorProcess, u: usize, s: usize) -> VectorProcess {
        let mut out = VectorProcess::new(self.tree);
        for &m in self.tree.nodes_at(s) {
            out.set(m, x.at(self.tree.ancestor_at(m, u)).clone());
        }
        out
    }

    fn time_consistency(&mut self, t: usize, u: usize, s: usize, samples: usize) {
        for k in 0..samples {
            let x = if k % 2 == 0 {
                self.random_accepted(t, u)
                    .unwrap_or_else(|| self.random_process(u, -2, 4))
            } else {
                self.random_process(u, -2, 4)
            };
            let lifted = self.lift(&x, u, s);
            let accepted_long: Vec<bool> = self
                .tree
                .nodes_at(t)
                .iter()
                .map(|&n| {
                    self.family
                        .accepts_node(self.tree, &lifted, s, n)
                        .is_accepted()
                })
                .collect();
            let nodes = self.tree.nodes_at(t).to_vec();
            let keep = |n: NodeId| {
                nodes
                    .iter()
                    .zip(&accepted_long)
                    .any(|(&m, &ok)| m == n && ok)
            };
            self.expect_at(
                Axiom::WeakTimeConsistency,
                t,
                u,
                &x,
                u,
                Verdict::Accepted,
                "accepted for the longer horizon but not the shorter",
                Some(&keep),
            );
        }
    }

    fn compensation(&mut self, t: usize, s: usize, samples: usize) {
        for _ in 0..samples {
            let xi = self.random_process(s, -5, 5);
            let mut diff = VectorProcess::new(self.tree);
            for &n in self.tree.nodes_at(t) {
                let g = self.family.compensation(self.tree, &xi, s, n);
                for &m in self.tree.descendants_at(n, s) {
                    diff.set(m, linalg::sub(&g, xi.at(m)));
                }
            }
            self.expect_at(
                Axiom::Compensation,
                t,
                s,
                &diff,
                s,
                Verdict::Accepted,
                "compensated position rejected",
                None,
            );
        }
    }

    fn coherence(&mut self, t: usize, s: usize, samples: usize) {
        for _ in 0..samples {
            let Some(x) = self.random_accepted(t, s) else {
                self.undecided += 1;
                continue;
            };
            let mut scaled = VectorProcess::new(self.tree);
            for &n in self.tree.nodes_at(t) {
                let alpha = Rational::new(self.rng.gen_range(1..=12), self.rng.gen_range(1..=4));
                for &m in self.tree.descendants_at(n, s) {
                    scaled.set(m, linalg::scale(x.at(m), &alpha));
                }
            }
            self.expect_at(
                Axiom::Coherence,
                t,
                s,
                &scaled,
                s,
                Verdict::Accepted,
                "positive multiple of an accepted position rejected",
                None,
            );
        }
    }

    fn dilatation(&mut self, t: usize, u: usize, s: usize, samples: usize) {
        for _ in 0..samples {
            let Some(x) = self.random_accepted(t, s) else {
                self.undecided += 1;
                continue;
            };
            let mut mean = VectorProcess::new(self.tree);
            for &m in self.tree.nodes_at(u) {
                mean.set(m, conditional_mean(self.tree, &x, s, m));
            }
            self.expect_at(
                Axiom::DilatationMonotonicity,
                t,
                u,
                &mean,
                u,
                Verdict::Accepted,
                "conditional mean of an accepted position rejected",
                None,
            );
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::from_ints;
    use crate::polyhedron::Polyhedron;
    use crate::rational::{q, qi};
    use crate::tree::{tree_from_branching, uniform_tree};

    struct Lenient;

    impl Acceptance for Lenient {
        fn name(&self) -> String {
            "lenient".into()
        }
        fn coherent(&self) -> bool {
            false
        }
        fn dilatation_monotone(&self) -> bool {
            false
        }
        fn accepts_node(
            &self,
            tree: &ScenarioTree,
            eta: &VectorProcess,
            s: usize,
            n: NodeId,
        ) -> Verdict {
            if conditional_mean(tree, eta, s, n)
                .iter()
                .all(|x| x >= &qi(-1))
            {
                Verdict::Accepted
            } else {
                Verdict::Rejected
            }
        }
        fn compensation(
            &self,
            tree: &ScenarioTree,
            xi: &VectorProcess,
            s: usize,
            n: NodeId,
        ) -> Vector {
            conditional_mean(tree, xi, s, n)
        }
    }

    fn leaf_values(tree: &ScenarioTree, vals: &[Vector]) -> VectorProcess {
        let mut it = vals.iter().cloned();
        VectorProcess::from_fn(tree, &[tree.horizon()], |_| it.next().unwrap())
    }

    #[test]
    fn basic_membership() {
        let t = uniform_tree(2, &[2]);
        for fam in [
            AcceptanceFamily::ess_inf(),
            AcceptanceFamily::expectation(),
            AcceptanceFamily::entropic(),
        ] {
            let zero = VectorProcess::constant_at(&t, 1, from_ints(&[0, 0]));
            assert_eq!(
                accepts(&t, &fam, &zero, 1, 0).unwrap().at(t.root()),
                &Verdict::Accepted
            );
            let neg = VectorProcess::constant_at(&t, 1, from_ints(&[-1, -1]));
            assert_eq!(
                accepts(&t, &fam, &neg, 1, 0).unwrap().at(t.root()),
                &Verdict::Rejected
            );
        }
        let mixed = leaf_values(&t, &[from_ints(&[-1, 0]), from_ints(&[3, 0])]);
        let ok = |fam: AcceptanceFamily| *accepts(&t, &fam, &mixed, 1, 0).unwrap().at(t.root());
        assert_eq!(ok(AcceptanceFamily::ess_inf()), Verdict::Rejected);
        assert_eq!(ok(AcceptanceFamily::expectation()), Verdict::Accepted);
        assert!(accepts(&t, &AcceptanceFamily::ess_inf(), &mixed, 0, 1).is_err());
    }

    #[test]
    fn entropic_half_log_two() {
        let t = uniform_tree(1, &[2]);
        // ln 2 to 18 digits, rounded down and up
        let below = q(693_147_180_559_945_309, 1_000_000_000_000_000_000);
        let above = q(693_147_180_559_945_310, 1_000_000_000_000_000_000);
        for ln2 in [below, above] {
            let x = leaf_values(&t, &[vec![ln2], vec![qi(0)]]);
            let v = accepts(&t, &AcceptanceFamily::entropic(), &x, 1, 0).unwrap();
            assert_eq!(v.at(t.root()), &Verdict::Accepted);
        }
        // E e^{-eta} > 1 for eta in {1, -1}: cosh(1) > 1
        let x = leaf_values(&t, &[vec![qi(1)], vec![qi(-1)]]);
        assert_eq!(
            accepts(&t, &AcceptanceFamily::entropic(), &x, 1, 0)
                .unwrap()
                .at(t.root()),
            &Verdict::Rejected
        );
        // the mean is zero but pushed just above 1 by a hair; low precision cannot decide
        let tiny = q(1, 1 << 40);
        let x = leaf_values(&t, &[vec![tiny.clone()], vec![-tiny]]);
        let coarse = AcceptanceFamily::entropic_with_precision(16);
        assert_eq!(
            accepts(&t, &coarse, &x, 1, 0).unwrap().at(t.root()),
            &Verdict::Unknown
        );
        let fine = AcceptanceFamily::entropic_with_precision(256);
        assert_eq!(
            accepts(&t, &fine, &x, 1, 0).unwrap().at(t.root()),
            &Verdict::Rejected
        );
    }

    #[test]
    fn risk_map_examples() {
        let t = uniform_tree(1, &[2]);
        let mut it = vec![
            Polyhedron::interval(qi(0), qi(2)),
            Polyhedron::interval(qi(1), qi(3)),
        ]
        .into_iter();
        let x = SetProcess::from_fn(&t, &[1], |_| it.next().unwrap());
        let r = risk_map(&t, &AcceptanceFamily::ess_inf(), &x, 0).unwrap();
        assert_eq!(r.at(t.root()), &Polyhedron::interval(qi(1), qi(2)));
        let r = risk_map(&t, &AcceptanceFamily::expectation(), &x, 0).unwrap();
        assert_eq!(r.at(t.root()), &Polyhedron::interval(q(1, 2), q(5, 2)));
        assert!(matches!(
            risk_map(&t, &AcceptanceFamily::expectation(), &x, 1),
            Err(AccError::NoNextPeriod { .. })
        ));
        assert!(matches!(
            risk_map(&t, &AcceptanceFamily::entropic(), &x, 0),
            Err(AccError::Unsupported { .. })
        ));
    }

    #[test]
    fn lifted_cones_match_membership() {
        let t = tree_from_branching(2, &[vec![vec![q(1, 3), q(2, 3)]]]).unwrap();
        let fam = AcceptanceFamily::expectation();
        let c = fam.lifted_cone(&t, t.root()).unwrap();
        assert_eq!(c.ambient_dim(), 4);
        assert_eq!(c.lines.len(), 2);
        for l in &c.lines {
            for a in &c.ineqs {
                assert!(linalg::dot(a, l).is_zero());
            }
        }
        for r in &c.rays {
            assert!(c.contains(r));
        }
        let z = from_ints(&[-2, 1, 1, 0]);
        assert!(c.contains(&z));
        let eta = leaf_values(&t, &[z[0..2].to_vec(), z[2..4].to_vec()]);
        assert!(fam.accepts_node(&t, &eta, 1, t.root()).is_accepted());
        let e = AcceptanceFamily::ess_inf()
            .lifted_cone(&t, t.root())
            .unwrap();
        assert!(!e.contains(&z));
        assert!(AcceptanceFamily::entropic()
            .lifted_cone(&t, t.root())
            .is_err());
    }

    #[test]
    fn axioms_hold_for_builtin_families() {
        let t = uniform_tree(2, &[2, 3]);
        for fam in [AcceptanceFamily::ess_inf(), AcceptanceFamily::expectation()] {
            let rep = validate_acceptance_axioms(&t, &fam);
            assert!(
                rep.passed(),
                "{}: {:?}",
                rep.family,
                rep.violations.first().map(|v| &v.description)
            );
            assert!(rep.checked.iter().all(|(_, c)| *c > 0));
        }
        let small = uniform_tree(1, &[2]);
        let rep = validate_acceptance_axioms_with(
            &small,
            &AcceptanceFamily::entropic_with_precision(64),
            &ValidationConfig {
                seed: 3,
                samples: 4,
            },
        );
        assert!(
            rep.passed(),
            "{:?}",
            rep.violations.first().map(|v| &v.description)
        );
        assert!(!rep.checked.iter().any(|(a, _)| *a == Axiom::Coherence));
    }

    #[test]
    fn broken_family_is_caught() {
        let t = uniform_tree(1, &[2]);
        let rep = validate_acceptance_axioms(&t, &Lenient);
        let v = rep
            .first_violation(Axiom::Normalisation)
            .expect("normalisation violated");
        assert!(
            v.description.contains("constant (-1/2)"),
            "{}",
            v.description
        );
        for &m in t.nodes_at(v.s) {
            assert_eq!(v.witness.at(m), &vec![q(-1, 2)]);
        }
    }
}
