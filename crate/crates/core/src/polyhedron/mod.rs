//! Convex polyhedra `conv(V) + cone(R) + span(L)` over the rationals, kept in
//! a canonical double representation.

pub mod dd;
mod json;

use std::cmp::Ordering;
use std::ops::Add;

use thiserror::Error;

use crate::linalg::{self, Vector};
use crate::rational::Rational;

pub use json::PolyhedronJson;

/// `normal . x >= offset`
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Halfspace {
    pub normal: Vector,
    pub offset: Rational,
}

/// `normal . x = offset`
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hyperplane {
    pub normal: Vector,
    pub offset: Rational,
}

impl Halfspace {
    pub fn new(normal: Vector, offset: Rational) -> Self {
        Halfspace { normal, offset }
    }

    pub fn satisfied_by(&self, x: &[Rational]) -> bool {
        linalg::dot(&self.normal, x) >= self.offset
    }
}

impl Hyperplane {
    pub fn new(normal: Vector, offset: Rational) -> Self {
        Hyperplane { normal, offset }
    }

    pub fn satisfied_by(&self, x: &[Rational]) -> bool {
        linalg::dot(&self.normal, x) == self.offset
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("the polyhedron is not a cone")]
    NotACone,
    #[error("the polyhedron does not contain the origin")]
    OriginNotContained,
    #[error("operation needs at least one polyhedron")]
    EmptyList,
    #[error("operation is undefined on the empty polyhedron")]
    EmptySet,
}

/// Value of a support function. `NegInfinity` only arises for the empty set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SupportValue {
    Finite(Rational),
    PosInfinity,
    NegInfinity,
}

impl SupportValue {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            SupportValue::Finite(v) => Some(v),
            _ => None,
        }
    }
}

impl Add for SupportValue {
    type Output = SupportValue;
    /// `+inf` absorbs finite values; `-inf` (empty set) absorbs everything.
    fn add(self, rhs: SupportValue) -> SupportValue {
        use SupportValue::*;
        match (self, rhs) {
            (NegInfinity, _) | (_, NegInfinity) => NegInfinity,
            (PosInfinity, _) | (_, PosInfinity) => PosInfinity,
            (Finite(a), Finite(b)) => Finite(a + b),
        }
    }
}

impl PartialOrd for SupportValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        use SupportValue::*;
        Some(match (self, other) {
            (NegInfinity, NegInfinity) | (PosInfinity, PosInfinity) => Ordering::Equal,
            (NegInfinity, _) | (_, PosInfinity) => Ordering::Less,
            (_, NegInfinity) | (PosInfinity, _) => Ordering::Greater,
            (Finite(a), Finite(b)) => a.cmp(b),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    Equal,
    Subset,
    Superset,
    Incomparable,
}

/// A canonical convex polyhedron. Vertices and rays are reduced modulo the
/// lineality space, rays and lines are primitive integer vectors, inequality
/// normals are reduced modulo the equality normals, and every list is sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polyhedron {
    dim: usize,
    vertices: Vec<Vector>,
    rays: Vec<Vector>,
    lines: Vec<Vector>,
    line_pivots: Vec<usize>,
    ineqs: Vec<Halfspace>,
    eqs: Vec<Hyperplane>,
    eq_pivots: Vec<usize>,
}

type Generators = (Vec<Vector>, Vec<Vector>, Vec<Vector>);

fn check_dims<'a>(dim: usize, vs: impl IntoIterator<Item = &'a Vector>) -> Result<(), PolyError> {
    for v in vs {
        if v.len() != dim {
            return Err(PolyError::DimensionMismatch {
                expected: dim,
                found: v.len(),
            });
        }
    }
    Ok(())
}

fn prepend(head: Rational, tail: &[Rational]) -> Vector {
    let mut v = Vec::with_capacity(tail.len() + 1);
    v.push(head);
    v.extend_from_slice(tail);
    v
}

/// Facets and implicit equalities of a nonempty `conv(V)+cone(R)+span(L)`,
/// with the facets tight at each input generator (points first, then rays).
fn v_to_h(
    dim: usize,
    v: &[Vector],
    r: &[Vector],
    l: &[Vector],
) -> (Vec<Halfspace>, Vec<Hyperplane>, Vec<Vec<usize>>) {
    let mut ineqs: Vec<Vector> = v.iter().map(|p| prepend(Rational::one(), p)).collect();
    ineqs.extend(r.iter().map(|p| prepend(Rational::zero(), p)));
    let eqs: Vec<Vector> = l.iter().map(|p| prepend(Rational::zero(), p)).collect();
    let g = dd::cone_generators(dim + 1, &ineqs, &eqs, usize::MAX).expect("unbounded budget");
    let mut hs = Vec::new();
    let mut tight_at: Vec<Vec<usize>> = vec![Vec::new(); ineqs.len()];
    for (y, inc) in g.rays.into_iter().zip(g.incidence) {
        if linalg::is_zero(&y[1..]) {
            continue;
        }
        for c in inc {
            if let Some(i) = (c as usize).checked_sub(eqs.len()) {
                tight_at[i].push(hs.len());
            }
        }
        hs.push(Halfspace::new(y[1..].to_vec(), -y[0].clone()));
    }
    let hp = g
        .lines
        .into_iter()
        .map(|y| Hyperplane::new(y[1..].to_vec(), -y[0].clone()))
        .collect();
    (hs, hp, tight_at)
}

/// Selects the minimal generators among the inputs of `v_to_h`: a point is
/// a vertex modulo lineality when its tight facets together with the
/// equalities have full rank, a ray is extreme when they fall one short.
fn minimal_inputs(
    dim: usize,
    v: Vec<Vector>,
    r: Vec<Vector>,
    hs: &[Halfspace],
    hp: &[Hyperplane],
    tight_at: &[Vec<usize>],
) -> Generators {
    let eq_rows: Vec<Vector> = hp.iter().map(|h| h.normal.clone()).collect();
    let mut all_rows = eq_rows.clone();
    all_rows.extend(hs.iter().map(|h| h.normal.clone()));
    let full = linalg::rank(&all_rows, dim);
    let lines = if full == dim {
        Vec::new()
    } else {
        linalg::nullspace(&all_rows, dim)
    };
    let rank_at = |i: usize| {
        let mut rows = eq_rows.clone();
        rows.extend(tight_at[i].iter().map(|&f| hs[f].normal.clone()));
        linalg::rank(&rows, dim)
    };
    let nv = v.len();
    let vertices = v
        .into_iter()
        .enumerate()
        .filter(|&(i, _)| rank_at(i) == full)
        .map(|(_, p)| p)
        .collect();
    let rays = r
        .into_iter()
        .enumerate()
        .filter(|&(k, _)| full > 0 && rank_at(nv + k) == full - 1)
        .map(|(_, p)| p)
        .collect();
    (vertices, rays, lines)
}

/// Minimal generators of `{x : ineqs, eqs}`, or `None` if it is empty.
fn h_to_v(dim: usize, ineqs: &[Halfspace], eqs: &[Hyperplane]) -> Option<Generators> {
    let mut hom: Vec<Vector> = vec![linalg::unit(dim + 1, 0)];
    hom.extend(ineqs.iter().map(|h| prepend(-h.offset.clone(), &h.normal)));
    let hom_eqs: Vec<Vector> = eqs
        .iter()
        .map(|h| prepend(-h.offset.clone(), &h.normal))
        .collect();
    let g = dd::cone_generators(dim + 1, &hom, &hom_eqs, usize::MAX).expect("unbounded budget");
    let mut vertices = Vec::new();
    let mut rays = Vec::new();
    for z in g.rays {
        if z[0].is_zero() {
            rays.push(z[1..].to_vec());
        } else {
            let inv = z[0].recip();
            vertices.push(linalg::scale(&z[1..], &inv));
        }
    }
    if vertices.is_empty() {
        return None;
    }
    let lines = g.lines.into_iter().map(|z| z[1..].to_vec()).collect();
    Some((vertices, rays, lines))
}

fn sort_dedup(v: &mut Vec<Vector>) {
    v.sort_by(|a, b| linalg::lex_cmp(a, b));
    v.dedup();
}

impl Polyhedron {
    pub fn empty(dim: usize) -> Self {
        Polyhedron {
            dim,
            vertices: Vec::new(),
            rays: Vec::new(),
            lines: Vec::new(),
            line_pivots: Vec::new(),
            ineqs: vec![Halfspace::new(linalg::zeros(dim), Rational::one())],
            eqs: Vec::new(),
            eq_pivots: Vec::new(),
        }
    }

    pub fn full(dim: usize) -> Self {
        let lines: Vec<Vector> = (0..dim).map(|i| linalg::unit(dim, i)).collect();
        Self::normalized(
            dim,
            vec![linalg::zeros(dim)],
            Vec::new(),
            lines,
            Vec::new(),
            Vec::new(),
        )
    }

    pub fn point(p: Vector) -> Self {
        let dim = p.len();
        Self::from_generators(dim, vec![p], Vec::new(), Vec::new()).expect("consistent dimension")
    }

    /// `cone(gens)`, always containing the origin.
    pub fn cone(dim: usize, gens: Vec<Vector>) -> Result<Self, PolyError> {
        Self::from_generators(dim, vec![linalg::zeros(dim)], gens, Vec::new())
    }

    pub fn orthant(dim: usize) -> Self {
        Self::cone(dim, (0..dim).map(|i| linalg::unit(dim, i)).collect())
            .expect("consistent dimension")
    }

    pub fn subspace(dim: usize, basis: Vec<Vector>) -> Result<Self, PolyError> {
        Self::from_generators(dim, vec![linalg::zeros(dim)], Vec::new(), basis)
    }

    /// The closed interval `[lo, hi]` in one dimension; empty when `lo > hi`.
    pub fn interval(lo: Rational, hi: Rational) -> Self {
        if lo > hi {
            return Self::empty(1);
        }
        Self::from_generators(1, vec![vec![lo], vec![hi]], Vec::new(), Vec::new())
            .expect("dimension 1")
    }

    pub fn from_generators(
        dim: usize,
        vertices: Vec<Vector>,
        rays: Vec<Vector>,
        lines: Vec<Vector>,
    ) -> Result<Self, PolyError> {
        check_dims(dim, vertices.iter().chain(&rays).chain(&lines))?;
        if vertices.is_empty() {
            return Ok(Self::empty(dim));
        }
        let (hs, hp, tight_at) = v_to_h(dim, &vertices, &rays, &lines);
        let (v, r, l) = minimal_inputs(dim, vertices, rays, &hs, &hp, &tight_at);
        Ok(Self::normalized(dim, v, r, l, hs, hp))
    }

    pub fn from_halfspaces(
        dim: usize,
        ineqs: Vec<Halfspace>,
        eqs: Vec<Hyperplane>,
    ) -> Result<Self, PolyError> {
        check_dims(
            dim,
            ineqs
                .iter()
                .map(|h| &h.normal)
                .chain(eqs.iter().map(|h| &h.normal)),
        )?;
        let Some((v, r, l)) = h_to_v(dim, &ineqs, &eqs) else {
            return Ok(Self::empty(dim));
        };
        let (hs, hp, _) = v_to_h(dim, &v, &r, &l);
        Ok(Self::normalized(dim, v, r, l, hs, hp))
    }

    /// Canonical cleanup of an already irredundant double representation.
    fn normalized(
        dim: usize,
        vertices: Vec<Vector>,
        rays: Vec<Vector>,
        lines: Vec<Vector>,
        ineqs: Vec<Halfspace>,
        eqs: Vec<Hyperplane>,
    ) -> Self {
        let (lines, line_pivots) = linalg::canonical_span(&lines, dim);
        let mut vertices: Vec<Vector> = vertices
            .iter()
            .map(|v| linalg::reduce_mod(v, &lines, &line_pivots))
            .collect();
        sort_dedup(&mut vertices);
        let mut rays: Vec<Vector> = rays
            .iter()
            .map(|r| linalg::primitive(&linalg::reduce_mod(r, &lines, &line_pivots)))
            .filter(|r| !linalg::is_zero(r))
            .collect();
        sort_dedup(&mut rays);

        let aug: Vec<Vector> = eqs
            .iter()
            .map(|h| {
                let mut row = h.normal.clone();
                row.push(h.offset.clone());
                row
            })
            .collect();
        let (rows, _) = linalg::rref(&aug, dim + 1);
        let mut eq_rows = Vec::new();
        let mut eq_pivots = Vec::new();
        for row in rows {
            let row = linalg::primitive(&row);
            let Some(p) = row[..dim].iter().position(|x| !x.is_zero()) else {
                // inconsistent equality system
                return Self::empty(dim);
            };
            eq_pivots.push(p);
            eq_rows.push(row);
        }
        let eqs: Vec<Hyperplane> = eq_rows
            .iter()
            .map(|row| Hyperplane::new(row[..dim].to_vec(), row[dim].clone()))
            .collect();

        let mut hs: Vec<Halfspace> = Vec::new();
        for h in ineqs {
            let mut row = h.normal.clone();
            row.push(h.offset.clone());
            let row = linalg::reduce_mod(&row, &eq_rows, &eq_pivots);
            if linalg::is_zero(&row[..dim]) {
                if row[dim].is_positive() {
                    return Self::empty(dim);
                }
                continue;
            }
            let row = linalg::primitive(&row);
            hs.push(Halfspace::new(row[..dim].to_vec(), row[dim].clone()));
        }
        hs.sort_by(|a, b| {
            linalg::lex_cmp(&a.normal, &b.normal).then_with(|| a.offset.cmp(&b.offset))
        });
        hs.dedup();

        Polyhedron {
            dim,
            vertices,
            rays,
            lines,
            line_pivots,
            ineqs: hs,
            eqs,
            eq_pivots,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn rays(&self) -> &[Vector] {
        &self.rays
    }

    pub fn lines(&self) -> &[Vector] {
        &self.lines
    }

    pub fn inequalities(&self) -> &[Halfspace] {
        &self.ineqs
    }

    pub fn equalities(&self) -> &[Hyperplane] {
        &self.eqs
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty() && self.lines.is_empty()
    }

    /// True when the set is a nonempty cone with apex at the origin.
    pub fn is_cone(&self) -> bool {
        self.vertices.len() == 1 && linalg::is_zero(&self.vertices[0])
    }

    pub fn is_pointed(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        if self.is_empty() || x.len() != self.dim {
            return false;
        }
        self.ineqs.iter().all(|h| h.satisfied_by(x)) && self.eqs.iter().all(|h| h.satisfied_by(x))
    }

    /// Membership of the direction `d` in the recession cone.
    pub fn recedes_along(&self, d: &[Rational]) -> bool {
        if self.is_empty() {
            return false;
        }
        self.ineqs
            .iter()
            .all(|h| !linalg::dot(&h.normal, d).is_negative())
            && self.eqs.iter().all(|h| linalg::dot(&h.normal, d).is_zero())
    }

    pub fn in_lineality(&self, d: &[Rational]) -> bool {
        linalg::in_span(d, &self.lines, &self.line_pivots)
    }

    fn check_same_dim(&self, other: &Polyhedron) -> Result<(), PolyError> {
        if self.dim != other.dim {
            return Err(PolyError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn minkowski_sum(&self, other: &Polyhedron) -> Result<Polyhedron, PolyError> {
        self.check_same_dim(other)?;
        if self.is_empty() || other.is_empty() {
            return Ok(Polyhedron::empty(self.dim));
        }
        let mut vertices = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                vertices.push(linalg::add(a, b));
            }
        }
        let rays = self.rays.iter().chain(&other.rays).cloned().collect();
        let lines = self.lines.iter().chain(&other.lines).cloned().collect();
        Polyhedron::from_generators(self.dim, vertices, rays, lines)
    }

    pub fn intersect(&self, other: &Polyhedron) -> Result<Polyhedron, PolyError> {
        self.check_same_dim(other)?;
        if self.is_empty() || other.is_empty() {
            return Ok(Polyhedron::empty(self.dim));
        }
        if self.is_subset(other) {
            return Ok(self.clone());
        }
        if other.is_subset(self) {
            return Ok(other.clone());
        }
        let ineqs = self.ineqs.iter().chain(&other.ineqs).cloned().collect();
        let eqs = self.eqs.iter().chain(&other.eqs).cloned().collect();
        Polyhedron::from_halfspaces(self.dim, ineqs, eqs)
    }

    pub fn intersect_all(sets: &[Polyhedron]) -> Result<Polyhedron, PolyError> {
        let first = sets.first().ok_or(PolyError::EmptyList)?;
        let mut acc = first.clone();
        for s in &sets[1..] {
            acc = acc.intersect(s)?;
        }
        Ok(acc)
    }

    /// Closed convex hull of the union. Empty members contribute nothing.
    pub fn hull_union(sets: &[Polyhedron]) -> Result<Polyhedron, PolyError> {
        let first = sets.first().ok_or(PolyError::EmptyList)?;
        let dim = first.dim;
        for s in sets {
            first.check_same_dim(s)?;
        }
        let live: Vec<&Polyhedron> = sets.iter().filter(|s| !s.is_empty()).collect();
        if live.len() == 1 {
            return Ok(live[0].clone());
        }
        let mut vertices = Vec::new();
        let mut rays = Vec::new();
        let mut lines = Vec::new();
        for s in live {
            vertices.extend(s.vertices.iter().cloned());
            rays.extend(s.rays.iter().cloned());
            lines.extend(s.lines.iter().cloned());
        }
        Polyhedron::from_generators(dim, vertices, rays, lines)
    }

    pub fn support(&self, u: &[Rational]) -> SupportValue {
        if self.is_empty() {
            return SupportValue::NegInfinity;
        }
        if self.lines.iter().any(|l| !linalg::dot(u, l).is_zero())
            || self.rays.iter().any(|r| linalg::dot(u, r).is_positive())
        {
            return SupportValue::PosInfinity;
        }
        let best = self
            .vertices
            .iter()
            .map(|v| linalg::dot(u, v))
            .max()
            .expect("nonempty vertex list");
        SupportValue::Finite(best)
    }

    /// `{y : y . x >= 0 for all x in K}` for a cone `K`.
    pub fn dual_cone(&self) -> Result<Polyhedron, PolyError> {
        if !self.is_cone() {
            return Err(PolyError::NotACone);
        }
        let ineqs = self
            .rays
            .iter()
            .map(|r| Halfspace::new(r.clone(), Rational::zero()))
            .collect();
        let eqs = self
            .lines
            .iter()
            .map(|l| Hyperplane::new(l.clone(), Rational::zero()))
            .collect();
        Polyhedron::from_halfspaces(self.dim, ineqs, eqs)
    }

    /// The lineality space, as a polyhedron. Requires the origin to belong
    /// to the set.
    pub fn k0_subspace(&self) -> Result<Polyhedron, PolyError> {
        if !self.contains(&linalg::zeros(self.dim)) {
            return Err(PolyError::OriginNotContained);
        }
        Ok(self.lineality_space())
    }

    pub fn lineality_space(&self) -> Polyhedron {
        Polyhedron::normalized(
            self.dim,
            vec![linalg::zeros(self.dim)],
            Vec::new(),
            self.lines.clone(),
            Vec::new(),
            self.lineality_equalities(),
        )
    }

    fn lineality_equalities(&self) -> Vec<Hyperplane> {
        linalg::nullspace(&self.lines, self.dim)
            .into_iter()
            .map(|n| Hyperplane::new(n, Rational::zero()))
            .collect()
    }

    pub fn recession_cone(&self) -> Result<Polyhedron, PolyError> {
        if self.is_empty() {
            return Err(PolyError::EmptySet);
        }
        Polyhedron::from_generators(
            self.dim,
            vec![linalg::zeros(self.dim)],
            self.rays.clone(),
            self.lines.clone(),
        )
    }

    /// Subset test via generators of `self` against the half-spaces of `other`.
    pub fn is_subset(&self, other: &Polyhedron) -> bool {
        if self.dim != other.dim {
            return false;
        }
        if self.is_empty() {
            return true;
        }
        if other.is_empty() {
            return false;
        }
        self.vertices.iter().all(|v| other.contains(v))
            && self.rays.iter().all(|r| other.recedes_along(r))
            && self
                .lines
                .iter()
                .all(|l| other.recedes_along(l) && other.recedes_along(&linalg::neg(l)))
    }

    pub fn compare(&self, other: &Polyhedron) -> Result<Comparison, PolyError> {
        self.check_same_dim(other)?;
        Ok(match (self.is_subset(other), other.is_subset(self)) {
            (true, true) => Comparison::Equal,
            (true, false) => Comparison::Subset,
            (false, true) => Comparison::Superset,
            (false, false) => Comparison::Incomparable,
        })
    }

    pub fn translate(&self, c: &[Rational]) -> Polyhedron {
        assert_eq!(c.len(), self.dim, "translation dimension");
        if self.is_empty() {
            return self.clone();
        }
        let vertices = self.vertices.iter().map(|v| linalg::add(v, c)).collect();
        let ineqs = self
            .ineqs
            .iter()
            .map(|h| Halfspace::new(h.normal.clone(), &h.offset + linalg::dot(&h.normal, c)))
            .collect();
        let eqs = self
            .eqs
            .iter()
            .map(|h| Hyperplane::new(h.normal.clone(), &h.offset + linalg::dot(&h.normal, c)))
            .collect();
        Polyhedron::normalized(
            self.dim,
            vertices,
            self.rays.clone(),
            self.lines.clone(),
            ineqs,
            eqs,
        )
    }

    /// `lambda * P`. A zero factor collapses a nonempty set to the origin.
    pub fn scale(&self, lambda: &Rational) -> Polyhedron {
        if self.is_empty() {
            return self.clone();
        }
        if lambda.is_zero() {
            return Polyhedron::point(linalg::zeros(self.dim));
        }
        let base = if lambda.is_negative() {
            self.negate()
        } else {
            self.clone()
        };
        let f = lambda.abs();
        if f.is_one() {
            return base;
        }
        let vertices = base.vertices.iter().map(|v| linalg::scale(v, &f)).collect();
        let ineqs = base
            .ineqs
            .iter()
            .map(|h| Halfspace::new(h.normal.clone(), &h.offset * &f))
            .collect();
        let eqs = base
            .eqs
            .iter()
            .map(|h| Hyperplane::new(h.normal.clone(), &h.offset * &f))
            .collect();
        Polyhedron::normalized(base.dim, vertices, base.rays, base.lines, ineqs, eqs)
    }

    pub fn negate(&self) -> Polyhedron {
        if self.is_empty() {
            return self.clone();
        }
        let vertices = self.vertices.iter().map(|v| linalg::neg(v)).collect();
        let rays = self.rays.iter().map(|v| linalg::neg(v)).collect();
        let ineqs = self
            .ineqs
            .iter()
            .map(|h| Halfspace::new(linalg::neg(&h.normal), h.offset.clone()))
            .collect();
        let eqs = self
            .eqs
            .iter()
            .map(|h| Hyperplane::new(linalg::neg(&h.normal), h.offset.clone()))
            .collect();
        Polyhedron::normalized(self.dim, vertices, rays, self.lines.clone(), ineqs, eqs)
    }

    /// Sum of all members; the sum of an empty list is `{0}`.
    pub fn minkowski_sum_all(dim: usize, sets: &[Polyhedron]) -> Result<Polyhedron, PolyError> {
        let mut acc = Polyhedron::point(linalg::zeros(dim));
        for s in sets {
            acc = acc.minkowski_sum(s)?;
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> PolyhedronJson {
        PolyhedronJson::from(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::from_ints;
    use crate::rational::{q, qi};

    fn square() -> Polyhedron {
        Polyhedron::from_generators(
            2,
            vec![
                from_ints(&[0, 0]),
                from_ints(&[1, 0]),
                from_ints(&[0, 1]),
                from_ints(&[1, 1]),
            ],
            vec![],
            vec![],
        )
        .unwrap()
    }

    fn hs(a: &[i64], b: i64) -> Halfspace {
        Halfspace::new(from_ints(a), qi(b))
    }

    #[test]
    fn unit_square_halfspaces() {
        let s = square();
        let mut expected = vec![
            hs(&[-1, 0], -1),
            hs(&[0, -1], -1),
            hs(&[0, 1], 0),
            hs(&[1, 0], 0),
        ];
        expected.sort_by(|a, b| linalg::lex_cmp(&a.normal, &b.normal));
        assert_eq!(s.inequalities(), expected.as_slice());
        assert_eq!(s.vertices().len(), 4);
    }

    #[test]
    fn two_halfplanes_to_rays() {
        let p =
            Polyhedron::from_halfspaces(2, vec![hs(&[1, 1], 0), hs(&[1, 2], 0)], vec![]).unwrap();
        assert_eq!(p.vertices(), &[from_ints(&[0, 0])]);
        assert_eq!(p.rays(), &[from_ints(&[-1, 1]), from_ints(&[2, -1])]);
    }

    #[test]
    fn empty_marker_and_infeasible_halfspaces() {
        let e = Polyhedron::from_generators(2, vec![], vec![], vec![]).unwrap();
        assert!(e.is_empty());
        assert_eq!(e.inequalities(), &[hs(&[0, 0], 1)]);
        let shifted = square().translate(&from_ints(&[5, 5]));
        assert!(square().intersect(&shifted).unwrap().is_empty());
        assert_eq!(
            square().support(&from_ints(&[1, 1])),
            SupportValue::Finite(qi(2))
        );
        assert_eq!(e.support(&from_ints(&[1, 1])), SupportValue::NegInfinity);
    }

    #[test]
    fn minkowski_of_segments_is_square() {
        let a = Polyhedron::from_generators(
            2,
            vec![from_ints(&[0, 0]), from_ints(&[1, 0])],
            vec![],
            vec![],
        )
        .unwrap();
        let b = Polyhedron::from_generators(
            2,
            vec![from_ints(&[0, 0]), from_ints(&[0, 1])],
            vec![],
            vec![],
        )
        .unwrap();
        assert_eq!(a.minkowski_sum(&b).unwrap(), square());
        let c1 = Polyhedron::cone(2, vec![from_ints(&[1, 0])]).unwrap();
        let c2 = Polyhedron::cone(2, vec![from_ints(&[0, 1])]).unwrap();
        assert_eq!(c1.minkowski_sum(&c2).unwrap(), Polyhedron::orthant(2));
        assert_eq!(c1.support(&from_ints(&[1, 0])), SupportValue::PosInfinity);
    }

    #[test]
    fn hull_union_of_intervals_and_cones() {
        let h = Polyhedron::hull_union(&[
            Polyhedron::interval(qi(0), qi(2)),
            Polyhedron::interval(qi(1), qi(3)),
        ])
        .unwrap();
        assert_eq!(h, Polyhedron::interval(qi(0), qi(3)));
        let a = Polyhedron::cone(2, vec![from_ints(&[1, 1])]).unwrap();
        let b = Polyhedron::cone(2, vec![from_ints(&[1, 2])]).unwrap();
        let u = Polyhedron::hull_union(&[a, b]).unwrap();
        assert_eq!(u.rays(), &[from_ints(&[1, 1]), from_ints(&[1, 2])]);
        assert_eq!(Polyhedron::hull_union(&[]), Err(PolyError::EmptyList));
    }

    #[test]
    fn dual_cones() {
        let o = Polyhedron::orthant(2);
        assert_eq!(o.dual_cone().unwrap(), o);
        let k = Polyhedron::cone(2, vec![from_ints(&[2, -1]), from_ints(&[-1, 1])]).unwrap();
        let kd = k.dual_cone().unwrap();
        assert_eq!(
            kd,
            Polyhedron::cone(2, vec![from_ints(&[1, 1]), from_ints(&[1, 2])]).unwrap()
        );
        assert_eq!(kd.dual_cone().unwrap(), k);
        let full = Polyhedron::full(2);
        assert_eq!(
            full.dual_cone().unwrap(),
            Polyhedron::point(from_ints(&[0, 0]))
        );
        assert_eq!(square().dual_cone(), Err(PolyError::NotACone));
    }

    #[test]
    fn lineality_spaces() {
        let half = Polyhedron::from_halfspaces(2, vec![hs(&[1, 0], 0)], vec![]).unwrap();
        assert_eq!(half.k0_subspace().unwrap().lines(), &[from_ints(&[0, 1])]);
        let k = Polyhedron::cone(2, vec![from_ints(&[2, -1]), from_ints(&[-1, 1])]).unwrap();
        assert!(k.k0_subspace().unwrap().lines().is_empty());
        let f = Polyhedron::from_halfspaces(2, vec![hs(&[1, 10], 0)], vec![]).unwrap();
        let l = f.k0_subspace().unwrap();
        assert!(l.in_lineality(&from_ints(&[10, -1])));
        assert_eq!(l.lines().len(), 1);
        assert_eq!(
            square().translate(&from_ints(&[1, 1])).k0_subspace(),
            Err(PolyError::OriginNotContained)
        );
    }

    #[test]
    fn comparisons() {
        let a = Polyhedron::interval(qi(0), qi(1));
        let b = Polyhedron::interval(qi(0), qi(2));
        assert_eq!(a.compare(&b).unwrap(), Comparison::Subset);
        assert_eq!(a.compare(&a).unwrap(), Comparison::Equal);
        let k = Polyhedron::cone(2, vec![from_ints(&[2, -1]), from_ints(&[-1, 1])]).unwrap();
        let f = Polyhedron::from_halfspaces(2, vec![hs(&[1, 10], 0)], vec![]).unwrap();
        // (2,-1) violates x1 + 10 x2 >= 0, and the halfplane's line (10,-1)
        // is not in the pointed cone
        assert_eq!(k.compare(&f).unwrap(), Comparison::Incomparable);
        let g = Polyhedron::from_halfspaces(2, vec![hs(&[1, 1], 0)], vec![]).unwrap();
        assert_eq!(k.compare(&g).unwrap(), Comparison::Subset);
        assert_eq!(g.compare(&k).unwrap(), Comparison::Superset);
        assert!(a.compare(&square()).is_err());
    }

    #[test]
    fn scale_translate_negate_keep_canonical_form() {
        let s = square();
        let scaled = s.scale(&q(1, 3));
        let direct = Polyhedron::from_generators(
            2,
            vec![
                from_ints(&[0, 0]),
                vec![q(1, 3), qi(0)],
                vec![qi(0), q(1, 3)],
                vec![q(1, 3), q(1, 3)],
            ],
            vec![],
            vec![],
        )
        .unwrap();
        assert_eq!(scaled, direct);
        let line = Polyhedron::from_generators(
            2,
            vec![from_ints(&[1, 1])],
            vec![],
            vec![from_ints(&[1, -1])],
        )
        .unwrap();
        let moved = line.translate(&from_ints(&[3, 0]));
        let direct = Polyhedron::from_generators(
            2,
            vec![from_ints(&[4, 1])],
            vec![],
            vec![from_ints(&[1, -1])],
        )
        .unwrap();
        assert_eq!(moved, direct);
        let k = Polyhedron::cone(2, vec![from_ints(&[2, -1]), from_ints(&[-1, 1])]).unwrap();
        assert_eq!(
            k.negate(),
            Polyhedron::cone(2, vec![from_ints(&[-2, 1]), from_ints(&[1, -1])]).unwrap()
        );
    }

    #[test]
    fn equality_constrained_sets() {
        let seg = Polyhedron::from_halfspaces(
            2,
            vec![hs(&[1, 0], 0), hs(&[-1, 0], -2)],
            vec![Hyperplane::new(from_ints(&[1, 1]), qi(2))],
        )
        .unwrap();
        assert_eq!(seg.vertices(), &[from_ints(&[0, 2]), from_ints(&[2, 0])]);
        assert_eq!(seg.equalities().len(), 1);
        let again =
            Polyhedron::from_generators(2, seg.vertices().to_vec(), vec![], vec![]).unwrap();
        assert_eq!(again, seg);
    }
}
