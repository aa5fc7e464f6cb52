//! Dense exact linear algebra on rational vectors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rational::Rational;

pub type Vector = Vec<Rational>;

pub fn zeros(n: usize) -> Vector {
    vec![Rational::zero(); n]
}

pub fn unit(n: usize, i: usize) -> Vector {
    let mut v = zeros(n);
    v[i] = Rational::one();
    v
}

/// `a . b` in machine integers when both vectors are small integers.
fn dot_integral(a: &[Rational], b: &[Rational]) -> Option<Rational> {
    let mut acc: i128 = 0;
    for (x, y) in a.iter().zip(b) {
        let (xn, 1) = x.small_parts()? else {
            return None;
        };
        let (yn, 1) = y.small_parts()? else {
            return None;
        };
        acc = acc.checked_add(xn as i128 * yn as i128)?;
    }
    Some(Rational::from_i128(acc, 1))
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    if let Some(v) = dot_integral(a, b) {
        return v;
    }
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if x.is_zero() || y.is_zero() {
            continue;
        }
        acc += x * y;
    }
    acc
}

pub fn add(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[Rational], c: &Rational) -> Vector {
    a.iter().map(|x| x * c).collect()
}

pub fn neg(a: &[Rational]) -> Vector {
    a.iter().map(|x| -x).collect()
}

/// `a + c * b`
pub fn axpy(a: &[Rational], c: &Rational, b: &[Rational]) -> Vector {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            if y.is_zero() || c.is_zero() {
                x.clone()
            } else {
                x + c * y
            }
        })
        .collect()
}

pub fn is_zero(a: &[Rational]) -> bool {
    a.iter().all(|x| x.is_zero())
}

pub fn from_ints(v: &[i64]) -> Vector {
    v.iter().map(|&x| Rational::from_integer(x)).collect()
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn primitive_small(v: &[Rational]) -> Option<Vector> {
    let mut lcm: i128 = 1;
    for x in v {
        let (_, d) = x.small_parts()?;
        let d = d as i128;
        let g = gcd_i128(lcm, d);
        lcm = (lcm / g).checked_mul(d)?;
        if lcm > i64::MAX as i128 {
            return None;
        }
    }
    let mut ints = Vec::with_capacity(v.len());
    let mut g: i128 = 0;
    for x in v {
        let (n, d) = x.small_parts()?;
        let k = (n as i128).checked_mul(lcm / d as i128)?;
        g = gcd_i128(g, k);
        ints.push(k);
    }
    if g == 0 {
        return Some(v.to_vec());
    }
    let mut out = Vec::with_capacity(v.len());
    for k in ints {
        let k = k / g;
        if k <= i64::MIN as i128 || k > i64::MAX as i128 {
            return None;
        }
        out.push(Rational::from_integer(k as i64));
    }
    Some(out)
}

/// Positive multiple of `v` with coprime integer coordinates. The zero
/// vector is returned unchanged.
pub fn primitive(v: &[Rational]) -> Vector {
    if let Some(out) = primitive_small(v) {
        return out;
    }
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(&x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut g = BigInt::zero();
    for k in &ints {
        g = g.gcd(k);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter()
        .map(|k| Rational::from_bigints(k / &g, BigInt::one()))
        .collect()
}

/// Primitive integer representative with first nonzero coordinate positive;
/// canonical for a line direction.
pub fn primitive_line(v: &[Rational]) -> Vector {
    let p = primitive(v);
    match p.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => neg(&p),
        _ => p,
    }
}

/// Reduced row echelon form of the row set. Returns the nonzero rows and the
/// pivot column of each.
pub fn rref(rows: &[Vector], ncols: usize) -> (Vec<Vector>, Vec<usize>) {
    let mut m: Vec<Vector> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        if !inv.is_one() {
            m[r] = scale(&m[r], &inv);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = -row[c].clone();
                *row = axpy(row, &f, &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vector], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{x : row . x = 0 for every row}`.
pub fn nullspace(rows: &[Vector], ncols: usize) -> Vec<Vector> {
    let (m, pivots) = rref(rows, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = zeros(ncols);
        v[free] = Rational::one();
        for (row, &p) in m.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Subtract multiples of the echelon rows so that `v` vanishes on every pivot
/// column. The result is a canonical representative of `v` modulo the span.
pub fn reduce_mod(v: &[Rational], basis: &[Vector], pivots: &[usize]) -> Vector {
    let mut out = v.to_vec();
    for (row, &p) in basis.iter().zip(pivots) {
        if !out[p].is_zero() {
            let f = -(&out[p] / &row[p]);
            out = axpy(&out, &f, row);
        }
    }
    out
}

/// Echelon basis of a span, each row scaled to a primitive integer vector.
/// Returns rows and pivot columns.
pub fn canonical_span(rows: &[Vector], ncols: usize) -> (Vec<Vector>, Vec<usize>) {
    let (m, pivots) = rref(rows, ncols);
    (m.iter().map(|r| primitive(r)).collect(), pivots)
}

pub fn in_span(v: &[Rational], basis: &[Vector], pivots: &[usize]) -> bool {
    is_zero(&reduce_mod(v, basis, pivots))
}

/// Solves `A x = b` for some `x` (rows of `A` given), if consistent.
pub fn solve(a: &[Vector], b: &[Rational], ncols: usize) -> Option<Vector> {
    let aug: Vec<Vector> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (m, pivots) = rref(&aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = zeros(ncols);
    for (row, &p) in m.iter().zip(&pivots) {
        x[p] = row[ncols].clone();
    }
    Some(x)
}

pub fn lex_cmp(a: &[Rational], b: &[Rational]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn primitive_scales_positively() {
        let v = vec![q(1, 2), q(-3, 4), q(0, 1)];
        assert_eq!(primitive(&v), from_ints(&[2, -3, 0]));
        assert_eq!(primitive(&from_ints(&[-4, 6])), from_ints(&[-2, 3]));
        assert_eq!(primitive_line(&from_ints(&[-4, 6])), from_ints(&[2, -3]));
        let big = vec![
            Rational::from_integer(i64::MAX),
            Rational::from_integer(i64::MAX - 1),
        ];
        assert_eq!(primitive(&big), big);
    }

    #[test]
    fn nullspace_annihilates_rows() {
        let rows = vec![from_ints(&[1, 2, 3]), from_ints(&[2, 4, 7])];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 1);
        for r in &rows {
            assert!(dot(r, &ns[0]).is_zero());
        }
        assert_eq!(rank(&rows, 3), 2);
    }

    #[test]
    fn solve_detects_inconsistency() {
        let a = vec![from_ints(&[1, 1]), from_ints(&[2, 2])];
        assert!(solve(&a, &from_ints(&[1, 3]), 2).is_none());
        let x = solve(&a, &from_ints(&[1, 2]), 2).unwrap();
        assert_eq!(dot(&a[0], &x), q(1, 1));
    }

    #[test]
    fn reduction_is_canonical_modulo_span() {
        let (basis, piv) = canonical_span(&[from_ints(&[2, 4, 0])], 3);
        let a = reduce_mod(&from_ints(&[1, 1, 1]), &basis, &piv);
        let b = reduce_mod(&from_ints(&[3, 5, 1]), &basis, &piv);
        assert_eq!(a, b);
        assert!(in_span(&from_ints(&[-1, -2, 0]), &basis, &piv));
    }
}
