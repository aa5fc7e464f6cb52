//! Double description for homogeneous cones `{z : A z >= 0, E z = 0}`.
//!
//! Constraints are inserted one at a time, starting from the whole space
//! (every coordinate direction is a line). Each ray carries the set of
//! processed constraints it makes tight, and two rays of opposite sign are
//! combined only when they are adjacent by the combinatorial test.

use thiserror::Error;

use crate::linalg::{self, Vector};
use crate::rational::Rational;

pub const DEFAULT_RAY_BUDGET: usize = 5000;

/// The generator budget for lifted-cone enumeration, overridable through the
/// `SETCALC_RAY_BUDGET` environment variable.
pub fn ray_budget() -> usize {
    std::env::var("SETCALC_RAY_BUDGET")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_RAY_BUDGET)
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DdError {
    #[error("double description exceeded the ray budget of {budget}")]
    BudgetExceeded { budget: usize },
}

#[derive(Debug, Clone, Default)]
pub struct ConeGenerators {
    pub lines: Vec<Vector>,
    pub rays: Vec<Vector>,
    /// For each ray, the sorted indices of the constraints it makes tight,
    /// counting equalities first and inequalities after them.
    pub incidence: Vec<Vec<u32>>,
}

#[derive(Clone)]
struct Ray {
    v: Vector,
    tight: Tight,
}

/// Sorted indices of the processed constraints a ray makes tight. Rays are
/// tight on few constraints outside degenerate inputs, so sorted lists beat
/// dense bit sets sized by the total constraint count.
#[derive(Clone, PartialEq, Eq, Default)]
struct Tight(Vec<u32>);

impl Tight {
    fn prefix(upto: usize) -> Tight {
        Tight((0..upto as u32).collect())
    }

    /// Appends `j`, which exceeds every index already present.
    fn push(&mut self, j: usize) {
        self.0.push(j as u32);
    }

    fn and(&self, other: &Tight) -> Tight {
        let (mut i, mut k) = (0, 0);
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::new();
        while i < a.len() && k < b.len() {
            match a[i].cmp(&b[k]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => k += 1,
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    k += 1;
                }
            }
        }
        Tight(out)
    }

    fn subset_of(&self, other: &Tight) -> bool {
        if self.0.len() > other.0.len() {
            return false;
        }
        let mut k = 0;
        let b = &other.0;
        for &x in &self.0 {
            while k < b.len() && b[k] < x {
                k += 1;
            }
            if k == b.len() || b[k] != x {
                return false;
            }
            k += 1;
        }
        true
    }
}

fn small_int(x: &Rational) -> Option<i128> {
    match x.small_parts()? {
        (n, 1) => Some(n as i128),
        _ => None,
    }
}

/// The primitive form of `vp * q - vq * p`, which lies on the hyperplane of
/// the constraint being inserted. Integer rays stay in machine words.
fn combine(q: &[Rational], vp: &Rational, p: &[Rational], vq: &Rational) -> Vector {
    let fast = || -> Option<Vector> {
        let (a, b) = (small_int(vp)?, small_int(vq)?);
        let mut w = Vec::with_capacity(q.len());
        let mut g: u128 = 0;
        for (x, y) in q.iter().zip(p) {
            let v = small_int(x)?
                .checked_mul(a)?
                .checked_sub(small_int(y)?.checked_mul(b)?)?;
            g = gcd(g, v.unsigned_abs());
            w.push(v);
        }
        let g = g.max(1) as i128;
        let out: Vector = w
            .into_iter()
            .map(|v| v / g)
            .map(|v| i64::try_from(v).ok().map(Rational::from_integer))
            .collect::<Option<_>>()?;
        Some(out)
    };
    fast().unwrap_or_else(|| {
        linalg::primitive(&linalg::sub(&linalg::scale(q, vp), &linalg::scale(p, vq)))
    })
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Rays tight on each processed constraint, in compressed rows.
struct TightIndex {
    start: Vec<usize>,
    rays: Vec<usize>,
}

impl TightIndex {
    fn build(rays: &[Ray], processed: usize) -> Self {
        let mut start = vec![0usize; processed + 1];
        for r in rays {
            for &c in &r.tight.0 {
                start[c as usize + 1] += 1;
            }
        }
        for c in 0..processed {
            start[c + 1] += start[c];
        }
        let mut fill = start.clone();
        let mut flat = vec![0usize; start[processed]];
        for (i, r) in rays.iter().enumerate() {
            for &c in &r.tight.0 {
                flat[fill[c as usize]] = i;
                fill[c as usize] += 1;
            }
        }
        TightIndex { start, rays: flat }
    }

    fn of(&self, c: u32) -> &[usize] {
        &self.rays[self.start[c as usize]..self.start[c as usize + 1]]
    }
}

type CandidatePair = ((usize, usize), Option<Vec<usize>>);

/// Pairs `(p, q)` of a positive and a negative ray sharing at least `need`
/// (which is positive) tight constraints, in the order of a loop over `p`
/// then `q`. Each pair comes with the rays that could block it: those tight
/// on the first shared constraint.
fn candidate_pairs(
    rays: &[Ray],
    index: &TightIndex,
    values: &[Rational],
    neg: &[usize],
    need: usize,
) -> Vec<CandidatePair> {
    let mut hits = vec![0usize; rays.len()];
    let mut pairs = Vec::new();
    for &q in neg {
        let mut touched = Vec::new();
        for &c in &rays[q].tight.0 {
            for &p in index.of(c) {
                if values[p].is_positive() {
                    if hits[p] == 0 {
                        touched.push(p);
                    }
                    hits[p] += 1;
                }
            }
        }
        for p in touched {
            if hits[p] >= need {
                pairs.push((p, q));
            }
            hits[p] = 0;
        }
    }
    pairs.sort_unstable();
    pairs
        .into_iter()
        .map(|(p, q)| {
            let first = rays[p].tight.and(&rays[q].tight).0[0];
            ((p, q), Some(index.of(first).to_vec()))
        })
        .collect()
}

/// Minimal generators (lineality basis and extreme rays modulo lineality) of
/// the cone cut out by `ineqs` (each `a . z >= 0`) and `eqs` (`a . z = 0`).
pub fn cone_generators(
    n: usize,
    ineqs: &[Vector],
    eqs: &[Vector],
    budget: usize,
) -> Result<ConeGenerators, DdError> {
    // Positive rescaling to primitive integer rows keeps every constraint
    // and makes the arithmetic below integral.
    let ineqs: Vec<Vector> = ineqs.iter().map(|a| linalg::primitive(a)).collect();
    let eqs: Vec<Vector> = eqs.iter().map(|a| linalg::primitive(a)).collect();
    let mut lines: Vec<Vector> = (0..n).map(|i| linalg::unit(n, i)).collect();
    let mut rays: Vec<Ray> = Vec::new();

    let constraints = eqs
        .iter()
        .map(|a| (a, true))
        .chain(ineqs.iter().map(|a| (a, false)));
    for (j, (a, is_eq)) in constraints.enumerate() {
        debug_assert_eq!(a.len(), n);
        if linalg::is_zero(a) {
            for r in &mut rays {
                r.tight.push(j);
            }
            continue;
        }
        if let Some(k) = lines.iter().position(|l| !linalg::dot(a, l).is_zero()) {
            let mut l = lines.remove(k);
            let mut al = linalg::dot(a, &l);
            if al.is_negative() {
                l = linalg::neg(&l);
                al = -al;
            }
            for other in &mut lines {
                let c = linalg::dot(a, other);
                if !c.is_zero() {
                    *other = linalg::axpy(other, &(-(c / &al)), &l);
                }
            }
            for r in &mut rays {
                let c = linalg::dot(a, &r.v);
                if !c.is_zero() {
                    r.v = linalg::primitive(&linalg::axpy(&r.v, &(-(c / &al)), &l));
                }
                r.tight.push(j);
            }
            if !is_eq {
                rays.push(Ray {
                    v: linalg::primitive(&l),
                    tight: Tight::prefix(j),
                });
                if rays.len() > budget {
                    return Err(DdError::BudgetExceeded { budget });
                }
            }
            continue;
        }

        let values: Vec<Rational> = rays.iter().map(|r| linalg::dot(a, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len())
            .filter(|&i| values[i].is_positive())
            .collect();
        let neg: Vec<usize> = (0..rays.len())
            .filter(|&i| values[i].is_negative())
            .collect();
        if neg.is_empty() && (!is_eq || pos.is_empty()) {
            for (r, v) in rays.iter_mut().zip(&values) {
                if v.is_zero() {
                    r.tight.push(j);
                }
            }
            continue;
        }

        let pointed_dim = n - lines.len();
        let pairs = if pointed_dim > 2 {
            let index = TightIndex::build(&rays, j);
            candidate_pairs(&rays, &index, &values, &neg, pointed_dim - 2)
        } else {
            pos.iter()
                .flat_map(|&p| neg.iter().map(move |&q| ((p, q), None)))
                .collect()
        };
        let mut created: Vec<Ray> = Vec::new();
        for ((p, q), blockers) in pairs {
            let common = rays[p].tight.and(&rays[q].tight);
            let blocks = |i: usize| i != p && i != q && common.subset_of(&rays[i].tight);
            let blocked = match blockers {
                Some(list) => list.into_iter().any(blocks),
                None => (0..rays.len()).any(blocks),
            };
            if blocked {
                continue;
            }
            let mut tight = common;
            tight.push(j);
            created.push(Ray {
                v: combine(&rays[q].v, &values[p], &rays[p].v, &values[q]),
                tight,
            });
        }

        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + created.len());
        for (i, mut r) in rays.into_iter().enumerate() {
            let v = &values[i];
            if v.is_zero() {
                r.tight.push(j);
                next.push(r);
            } else if v.is_positive() && !is_eq {
                next.push(r);
            }
        }
        next.extend(created);
        if next.len() > budget {
            return Err(DdError::BudgetExceeded { budget });
        }
        rays = next;
    }

    let (rays, incidence) = rays.into_iter().map(|r| (r.v, r.tight.0)).unzip();
    Ok(ConeGenerators {
        lines,
        rays,
        incidence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::from_ints;

    fn sorted(mut v: Vec<Vector>) -> Vec<Vector> {
        v.sort_by(|a, b| linalg::lex_cmp(a, b));
        v
    }

    #[test]
    fn two_halfplanes_give_two_rays() {
        let g = cone_generators(
            2,
            &[from_ints(&[1, 1]), from_ints(&[1, 2])],
            &[],
            usize::MAX,
        )
        .unwrap();
        assert!(g.lines.is_empty());
        assert_eq!(
            sorted(g.rays),
            vec![from_ints(&[-1, 1]), from_ints(&[2, -1])]
        );
    }

    #[test]
    fn orthant_in_three_dimensions() {
        let ineqs: Vec<Vector> = (0..3).map(|i| linalg::unit(3, i)).collect();
        let g = cone_generators(3, &ineqs, &[], usize::MAX).unwrap();
        assert_eq!(g.rays.len(), 3);
        assert!(g.lines.is_empty());
    }

    #[test]
    fn square_pyramid_has_four_rays() {
        // cone over the square [-1,1]^2 at height 1
        let ineqs = vec![
            from_ints(&[1, 1, 0]),
            from_ints(&[1, -1, 0]),
            from_ints(&[1, 0, 1]),
            from_ints(&[1, 0, -1]),
        ];
        let g = cone_generators(3, &ineqs, &[], usize::MAX).unwrap();
        assert_eq!(
            sorted(g.rays),
            vec![
                from_ints(&[1, -1, -1]),
                from_ints(&[1, -1, 1]),
                from_ints(&[1, 1, -1]),
                from_ints(&[1, 1, 1]),
            ]
        );
    }

    #[test]
    fn equalities_cut_dimension_and_halfspace_keeps_line() {
        let g = cone_generators(
            3,
            &[from_ints(&[1, 0, 0])],
            &[from_ints(&[0, 0, 1])],
            usize::MAX,
        )
        .unwrap();
        assert_eq!(g.lines.len(), 1);
        assert_eq!(g.rays.len(), 1);
        assert!(linalg::dot(&from_ints(&[0, 0, 1]), &g.lines[0]).is_zero());
    }

    #[test]
    fn budget_is_enforced() {
        let ineqs: Vec<Vector> = (0..4).map(|i| linalg::unit(4, i)).collect();
        assert!(matches!(
            cone_generators(4, &ineqs, &[], 2),
            Err(DdError::BudgetExceeded { budget: 2 })
        ));
    }
}
