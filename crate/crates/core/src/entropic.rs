//! Outward-rounded enclosures of `exp` at rational points.
//!
//! Values are kept as dyadic rationals so that their size stays bounded by
//! the working precision.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn point(x: Rational) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits as usize
}

fn round_down(x: &Rational, bits: u32) -> Rational {
    let scale = pow2(bits);
    let scaled = Rational::from_bigints(x.numer() * &scale, x.denom());
    Rational::from_bigints(scaled.floor(), scale)
}

fn round_up(x: &Rational, bits: u32) -> Rational {
    -round_down(&-x, bits)
}

/// Enclosure of `e^f` for `0 <= f <= 1`.
fn exp_unit(f: &Rational, bits: u32) -> Interval {
    debug_assert!(!f.is_negative() && f <= &Rational::one());
    let work = bits + 16;
    let eps = Rational::from_bigints(BigInt::one(), pow2(bits + 8));
    let mut lo = Rational::one();
    let mut hi = Rational::one();
    let mut t_lo = Rational::one();
    let mut t_hi = Rational::one();
    let mut j: i64 = 1;
    loop {
        let jr = Rational::from_integer(j);
        t_lo = round_down(&(&t_lo * f / &jr), work);
        t_hi = round_up(&(&t_hi * f / &jr), work);
        lo += &t_lo;
        hi += &t_hi;
        if t_hi.is_zero() || (j >= 2 && t_hi < eps) {
            break;
        }
        j += 1;
    }
    // the tail after term j is at most t_j * sum_k (1/(j+1))^k <= 2 t_j
    hi += &t_hi + &t_hi;
    Interval {
        lo: round_down(&lo, work),
        hi: round_up(&hi, work),
    }
}

/// Enclosure of `e^y` with absolute error of order `2^-bits` (relative for
/// large values).
pub fn exp_interval(y: &Rational, bits: u32) -> Interval {
    if y.is_zero() {
        return Interval::point(Rational::one());
    }
    let k = y.floor();
    let f = y - Rational::from_bigints(k.clone(), BigInt::one());
    let ef = exp_unit(&f, bits);
    let e1 = exp_unit(&Rational::one(), bits + 8);
    let mut p_lo = Rational::one();
    let mut p_hi = Rational::one();
    let n: u64 = k.magnitude().try_into().unwrap_or(u64::MAX);
    let work = bits + 16;
    for _ in 0..n {
        p_lo = round_down(&(&p_lo * &e1.lo), work);
        p_hi = round_up(&(&p_hi * &e1.hi), work);
        if p_lo.is_zero() && p_hi > Rational::from_integer(1 << 30) {
            break;
        }
    }
    let (m_lo, m_hi) = if k < BigInt::zero() {
        let lo = if p_hi.is_zero() {
            Rational::zero()
        } else {
            round_down(&p_hi.recip(), work)
        };
        let hi = if p_lo.is_zero() {
            Rational::one()
        } else {
            round_up(&p_lo.recip(), work)
        };
        (lo, hi)
    } else {
        (p_lo, p_hi)
    };
    Interval {
        lo: round_down(&(&ef.lo * &m_lo), work),
        hi: round_up(&(&ef.hi * &m_hi), work),
    }
}
