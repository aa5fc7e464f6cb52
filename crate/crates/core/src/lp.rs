//! Exact two-phase simplex with Bland's rule.
//!
//! Every outcome carries a certificate that [`LpOutcome::verify`] checks by
//! substitution: an optimal point with dual multipliers, a Farkas vector for
//! infeasibility, or a feasible point plus an improving ray.

use crate::linalg::{self, Vector};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Ge,
    Le,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Max,
    Min,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vector,
    pub relation: Relation,
    pub rhs: Rational,
}

/// Variables are free unless flagged nonnegative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    pub n: usize,
    pub constraints: Vec<Constraint>,
    pub objective: Vector,
    pub sense: Sense,
    pub nonneg: Vec<bool>,
}

/// Outcome with certificate.
///
/// * `Optimal.duals`: one multiplier per constraint with `A^T y = c` on free
///   variables, `A^T y >= c` (max) / `<= c` (min) on nonnegative ones,
///   `b . y = value`, and sign `y <= 0` on `>=` rows for max (`>= 0` for
///   min), reversed on `<=` rows.
/// * `Infeasible.farkas`: `y >= 0` on `>=` rows, `y <= 0` on `<=` rows,
///   `A^T y = 0` on free and `<= 0` on nonnegative variables, `b . y > 0`.
/// * `Unbounded`: a feasible `point` and a `ray` of the recession cone along
///   which the objective improves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal {
        x: Vector,
        value: Rational,
        duals: Vector,
    },
    Infeasible {
        farkas: Vector,
    },
    Unbounded {
        point: Vector,
        ray: Vector,
    },
}

impl LpOutcome {
    pub fn is_optimal(&self) -> bool {
        matches!(self, LpOutcome::Optimal { .. })
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, LpOutcome::Infeasible { .. })
    }

    pub fn optimal_value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn point(&self) -> Option<&Vector> {
        match self {
            LpOutcome::Optimal { x, .. } => Some(x),
            LpOutcome::Unbounded { point, .. } => Some(point),
            LpOutcome::Infeasible { .. } => None,
        }
    }

    /// Exact re-verification of the certificate against `lp`.
    pub fn verify(&self, lp: &LinearProgram) -> Result<(), String> {
        match self {
            LpOutcome::Optimal { x, value, duals } => {
                lp.check_feasible(x)?;
                if &linalg::dot(&lp.objective, x) != value {
                    return Err("objective value does not match the point".into());
                }
                if duals.len() != lp.constraints.len() {
                    return Err("dual vector has the wrong length".into());
                }
                let sign = match lp.sense {
                    Sense::Max => -1,
                    Sense::Min => 1,
                };
                for (i, (c, y)) in lp.constraints.iter().zip(duals).enumerate() {
                    let ok = match c.relation {
                        Relation::Eq => true,
                        Relation::Ge => y.signum() * sign >= 0,
                        Relation::Le => y.signum() * sign <= 0,
                    };
                    if !ok {
                        return Err(format!("dual multiplier {i} has the wrong sign"));
                    }
                    let slack = linalg::dot(&c.coeffs, x) - &c.rhs;
                    if !(y * &slack).is_zero() {
                        return Err(format!("complementary slackness fails on row {i}"));
                    }
                }
                let aty = lp.transpose_times(duals);
                for j in 0..lp.n {
                    let red = &aty[j] - &lp.objective[j];
                    if lp.nonneg[j] {
                        let ok = match lp.sense {
                            Sense::Max => !red.is_negative(),
                            Sense::Min => !red.is_positive(),
                        };
                        if !ok || !(&red * &x[j]).is_zero() {
                            return Err(format!("reduced cost condition fails on variable {j}"));
                        }
                    } else if !red.is_zero() {
                        return Err(format!("dual equality fails on free variable {j}"));
                    }
                }
                let by: Rational = lp
                    .constraints
                    .iter()
                    .zip(duals)
                    .map(|(c, y)| &c.rhs * y)
                    .sum();
                if &by != value {
                    return Err("dual objective differs from primal value".into());
                }
                Ok(())
            }
            LpOutcome::Infeasible { farkas } => lp.check_farkas(farkas),
            LpOutcome::Unbounded { point, ray } => {
                lp.check_feasible(point)?;
                for (i, c) in lp.constraints.iter().enumerate() {
                    let v = linalg::dot(&c.coeffs, ray);
                    let ok = match c.relation {
                        Relation::Ge => !v.is_negative(),
                        Relation::Le => !v.is_positive(),
                        Relation::Eq => v.is_zero(),
                    };
                    if !ok {
                        return Err(format!("ray leaves constraint {i}"));
                    }
                }
                if (0..lp.n).any(|j| lp.nonneg[j] && ray[j].is_negative()) {
                    return Err("ray violates a sign bound".into());
                }
                let gain = linalg::dot(&lp.objective, ray);
                let improving = match lp.sense {
                    Sense::Max => gain.is_positive(),
                    Sense::Min => gain.is_negative(),
                };
                if improving {
                    Ok(())
                } else {
                    Err("ray does not improve the objective".into())
                }
            }
        }
    }
}

impl LinearProgram {
    pub fn new(n: usize, sense: Sense, objective: Vector) -> Self {
        assert_eq!(objective.len(), n, "objective length");
        LinearProgram {
            n,
            constraints: Vec::new(),
            objective,
            sense,
            nonneg: vec![false; n],
        }
    }

    /// A feasibility problem (zero objective).
    pub fn feasibility(n: usize) -> Self {
        Self::new(n, Sense::Max, linalg::zeros(n))
    }

    pub fn add(&mut self, coeffs: Vector, relation: Relation, rhs: Rational) {
        assert_eq!(coeffs.len(), self.n, "constraint length");
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn set_nonneg(&mut self, j: usize) {
        self.nonneg[j] = true;
    }

    pub fn check_feasible(&self, x: &[Rational]) -> Result<(), String> {
        if x.len() != self.n {
            return Err("point has the wrong length".into());
        }
        for (j, xj) in x.iter().enumerate() {
            if self.nonneg[j] && xj.is_negative() {
                return Err(format!("variable {j} is negative"));
            }
        }
        for (i, c) in self.constraints.iter().enumerate() {
            let v = linalg::dot(&c.coeffs, x);
            let ok = match c.relation {
                Relation::Ge => v >= c.rhs,
                Relation::Le => v <= c.rhs,
                Relation::Eq => v == c.rhs,
            };
            if !ok {
                return Err(format!("constraint {i} is violated"));
            }
        }
        Ok(())
    }

    fn transpose_times(&self, y: &[Rational]) -> Vector {
        let mut out = linalg::zeros(self.n);
        for (c, yi) in self.constraints.iter().zip(y) {
            if yi.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(&c.coeffs) {
                if !a.is_zero() {
                    *o += a * yi;
                }
            }
        }
        out
    }

    pub fn check_farkas(&self, y: &[Rational]) -> Result<(), String> {
        if y.len() != self.constraints.len() {
            return Err("Farkas vector has the wrong length".into());
        }
        for (i, (c, yi)) in self.constraints.iter().zip(y).enumerate() {
            let ok = match c.relation {
                Relation::Ge => !yi.is_negative(),
                Relation::Le => !yi.is_positive(),
                Relation::Eq => true,
            };
            if !ok {
                return Err(format!("Farkas multiplier {i} has the wrong sign"));
            }
        }
        let aty = self.transpose_times(y);
        for (j, v) in aty.iter().enumerate() {
            let ok = if self.nonneg[j] {
                !v.is_positive()
            } else {
                v.is_zero()
            };
            if !ok {
                return Err(format!("Farkas combination fails on variable {j}"));
            }
        }
        let by: Rational = self
            .constraints
            .iter()
            .zip(y)
            .map(|(c, yi)| &c.rhs * yi)
            .sum();
        if by.is_positive() {
            Ok(())
        } else {
            Err("Farkas combination has nonpositive right-hand side".into())
        }
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(self)
    }
}

const DEGENERATE_RUN: usize = 50;

struct Tableau {
    rows: Vec<Vec<Rational>>,
    // objective row: reduced costs z_j (entering when negative), last entry = value
    z: Vec<Rational>,
    basis: Vec<usize>,
    // column layout: [structural | slacks | artificials | rhs]
    n_struct: usize,
    n_slack: usize,
    m: usize,
    // structural column -> (variable, sign); free columns may be negated
    col_var: Vec<(usize, i8)>,
    // free variables enter in either direction and never leave the basis
    free: Vec<bool>,
    // per row: sign applied to make the rhs nonnegative, and the sign flip
    // applied to turn <= into >=
    row_sign: Vec<i8>,
    row_flip: Vec<i8>,
}

impl Tableau {
    fn width(&self) -> usize {
        self.n_struct + self.n_slack + self.m + 1
    }

    fn art_col(&self, i: usize) -> usize {
        self.n_struct + self.n_slack + i
    }

    fn build(lp: &LinearProgram) -> Tableau {
        let col_var: Vec<(usize, i8)> = (0..lp.n).map(|j| (j, 1)).collect();
        let n_struct = col_var.len();
        let m = lp.constraints.len();
        let mut slack_of = vec![None; m];
        let mut n_slack = 0;
        for (i, c) in lp.constraints.iter().enumerate() {
            if c.relation != Relation::Eq {
                slack_of[i] = Some(n_slack);
                n_slack += 1;
            }
        }
        let width = n_struct + n_slack + m + 1;
        let mut rows = Vec::with_capacity(m);
        let mut row_sign = Vec::with_capacity(m);
        let mut row_flip = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        for (i, c) in lp.constraints.iter().enumerate() {
            let flip: i8 = if c.relation == Relation::Le { -1 } else { 1 };
            let rhs = if flip < 0 {
                -c.rhs.clone()
            } else {
                c.rhs.clone()
            };
            // inequalities with a nonpositive right-hand side start with
            // their slack in the basis; the rest start on an artificial
            let sign: i8 = if rhs.is_negative() || (c.relation != Relation::Eq && rhs.is_zero()) {
                -1
            } else {
                1
            };
            let f = Rational::from_integer((flip * sign) as i64);
            let mut row = vec![Rational::zero(); width];
            for (k, &(j, s)) in col_var.iter().enumerate() {
                let a = &c.coeffs[j];
                if !a.is_zero() {
                    row[k] = if s > 0 { a * &f } else { -(a * &f) };
                }
            }
            if let Some(s) = slack_of[i] {
                row[n_struct + s] = Rational::from_integer(-(sign as i64));
            }
            row[n_struct + n_slack + i] = Rational::one();
            basis.push(match slack_of[i] {
                Some(s) if sign < 0 => n_struct + s,
                _ => n_struct + n_slack + i,
            });
            row[width - 1] = if sign < 0 { -rhs } else { rhs };
            rows.push(row);
            row_sign.push(sign);
            row_flip.push(flip);
        }
        Tableau {
            rows,
            z: vec![Rational::zero(); width],
            basis,
            n_struct,
            n_slack,
            m,
            free: (0..width - 1)
                .map(|k| k < n_struct && !lp.nonneg[k])
                .collect(),
            col_var,
            row_sign,
            row_flip,
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        if !inv.is_one() {
            for x in self.rows[r].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
        }
        let nz: Vec<usize> = (0..self.rows[r].len())
            .filter(|&k| !self.rows[r][k].is_zero())
            .collect();
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for &k in &nz {
                let d = &f * &pivot_row[k];
                row[k] -= d;
            }
        }
        if !self.z[c].is_zero() {
            let f = self.z[c].clone();
            for &k in &nz {
                let d = &f * &pivot_row[k];
                self.z[k] -= d;
            }
        }
        self.basis[r] = c;
    }

    fn negate_column(&mut self, c: usize) {
        for row in self.rows.iter_mut() {
            if !row[c].is_zero() {
                row[c] = -row[c].clone();
            }
        }
        self.z[c] = -self.z[c].clone();
        self.col_var[c].1 = -self.col_var[c].1;
    }

    /// Sets the objective row for `max cost . columns`.
    fn set_objective(&mut self, cost: &[Rational]) {
        let w = self.width();
        let mut z: Vec<Rational> = (0..w)
            .map(|k| {
                if k < w - 1 {
                    -cost[k].clone()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (k, zk) in z.iter_mut().enumerate() {
                let a = &self.rows[i][k];
                if !a.is_zero() {
                    *zk += cb * a;
                }
            }
        }
        self.z = z;
    }

    /// Runs the simplex method on the current objective row, entering the
    /// most negative reduced cost and switching to Bland's rule for good
    /// after a run of degenerate pivots. Entering columns are restricted to
    /// `< limit`. Returns the unbounded column if any.
    fn optimize(&mut self, limit: usize) -> Option<usize> {
        let rhs = self.width() - 1;
        let mut degenerate = 0;
        loop {
            let eligible =
                |k: &usize| self.z[*k].is_negative() || (self.free[*k] && self.z[*k].is_positive());
            let entering = if degenerate < DEGENERATE_RUN {
                (0..limit)
                    .filter(eligible)
                    .min_by(|&a, &b| self.z[b].abs().cmp(&self.z[a].abs()).then(a.cmp(&b)))
            } else {
                (0..limit).find(eligible)
            };
            let c = entering?;
            if self.z[c].is_positive() {
                self.negate_column(c);
            }
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.m {
                let a = &self.rows[i][c];
                if !a.is_positive() || self.free[self.basis[i]] {
                    continue;
                }
                let ratio = &self.rows[i][rhs] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                None => return Some(c),
                Some((r, ratio)) => {
                    if ratio.is_zero() {
                        degenerate += 1;
                    } else if degenerate < DEGENERATE_RUN {
                        degenerate = 0;
                    }
                    self.pivot(r, c);
                }
            }
        }
    }

    fn column_values(&self) -> Vec<Rational> {
        let rhs = self.width() - 1;
        let mut vals = vec![Rational::zero(); self.width() - 1];
        for (i, &b) in self.basis.iter().enumerate() {
            vals[b] = self.rows[i][rhs].clone();
        }
        vals
    }

    fn to_variables(&self, cols: &[Rational], n: usize) -> Vector {
        let mut x = linalg::zeros(n);
        for (k, &(j, s)) in self.col_var.iter().enumerate() {
            if cols[k].is_zero() {
                continue;
            }
            if s > 0 {
                x[j] += &cols[k];
            } else {
                x[j] -= &cols[k];
            }
        }
        x
    }

    /// Multipliers `c_B B^{-1}` mapped back to the original rows.
    fn row_multipliers(&self, cost: &[Rational]) -> Vector {
        (0..self.m)
            .map(|i| {
                let col = self.art_col(i);
                let y = &self.z[col] + &cost[col];
                let s = Rational::from_integer((self.row_sign[i] * self.row_flip[i]) as i64);
                y * s
            })
            .collect()
    }

    fn run(mut self, lp: &LinearProgram) -> LpOutcome {
        let w = self.width();
        let n_real = self.n_struct + self.n_slack;

        let mut phase1 = vec![Rational::zero(); w - 1];
        for i in 0..self.m {
            phase1[self.art_col(i)] = -Rational::one();
        }
        self.set_objective(&phase1);
        self.optimize(n_real);
        if self.z[w - 1].is_negative() {
            let y = self.row_multipliers(&phase1);
            return LpOutcome::Infeasible {
                farkas: y.into_iter().map(|v| -v).collect(),
            };
        }

        // drive zero-level artificials out of the basis where possible
        for r in 0..self.m {
            if self.basis[r] >= n_real {
                if let Some(c) = (0..n_real).find(|&k| !self.rows[r][k].is_zero()) {
                    self.pivot(r, c);
                }
            }
        }

        let flip = match lp.sense {
            Sense::Max => Rational::one(),
            Sense::Min => -Rational::one(),
        };
        let mut cost = vec![Rational::zero(); w - 1];
        for (k, &(j, s)) in self.col_var.iter().enumerate() {
            let c = &lp.objective[j] * &flip;
            cost[k] = if s > 0 { c } else { -c };
        }
        self.set_objective(&cost);
        if let Some(c) = self.optimize(n_real) {
            let cols = self.column_values();
            let point = self.to_variables(&cols, lp.n);
            let mut dir = vec![Rational::zero(); w - 1];
            dir[c] = Rational::one();
            for (i, &b) in self.basis.iter().enumerate() {
                if !self.rows[i][c].is_zero() {
                    dir[b] = -self.rows[i][c].clone();
                }
            }
            let ray = self.to_variables(&dir, lp.n);
            return LpOutcome::Unbounded { point, ray };
        }
        let cols = self.column_values();
        let x = self.to_variables(&cols, lp.n);
        let value = linalg::dot(&lp.objective, &x);
        let duals = self
            .row_multipliers(&cost)
            .into_iter()
            .map(|v| v * &flip)
            .collect();
        LpOutcome::Optimal { x, value, duals }
    }
}

/// Finds `x` with `strict_i . x > 0`, `weak_j . x >= 0` and `eq_k . x = 0`,
/// by maximizing a slack `eps <= 1` on the strict rows. Returns `None` when
/// the best slack is zero (no strictly feasible point exists).
pub fn strictly_feasible_direction(
    n: usize,
    strict: &[Vector],
    weak: &[Vector],
    eqs: &[Vector],
) -> Option<Vector> {
    let mut obj = linalg::zeros(n + 1);
    obj[n] = Rational::one();
    let mut lp = LinearProgram::new(n + 1, Sense::Max, obj);
    let ext = |a: &Vector, e: Rational| {
        let mut r = a.clone();
        r.push(e);
        r
    };
    for a in strict {
        lp.add(ext(a, -Rational::one()), Relation::Ge, Rational::zero());
    }
    for a in weak {
        lp.add(ext(a, Rational::zero()), Relation::Ge, Rational::zero());
    }
    for a in eqs {
        lp.add(ext(a, Rational::zero()), Relation::Eq, Rational::zero());
    }
    lp.add(linalg::unit(n + 1, n), Relation::Le, Rational::one());
    match lp.solve() {
        LpOutcome::Optimal { x, value, .. } if value.is_positive() => Some(x[..n].to_vec()),
        _ => None,
    }
}
