//! Independent oracles shared by the integration tests. Built from raw
//! integer entries and plain loops; nothing here calls the library's linear
//! algebra or sign certification.

#![allow(dead_code)]

use dhlab_core::Rational;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn f64_of(v: &Rational) -> f64 {
    v.numer().to_f64().unwrap() / v.denom().to_f64().unwrap()
}

pub fn oracle_pair(entries: &[Vec<i64>], x: &[Rational], y: &[Rational]) -> Rational {
    let mut total = Rational::zero();
    for (i, row) in entries.iter().enumerate() {
        for (j, &e) in row.iter().enumerate() {
            if e != 0 {
                total += &x[i] * &y[j] * int(e);
            }
        }
    }
    total
}

/// Characteristic polynomial `det(xI − A)` by Faddeev-LeVerrier, ascending
/// coefficients.
pub fn oracle_charpoly(entries: &[Vec<i64>]) -> Vec<Rational> {
    let n = entries.len();
    let a: Vec<Vec<Rational>> = entries.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut m = vec![vec![Rational::zero(); n]; n];
    for k in 1..=n {
        let mut next = vec![vec![Rational::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = Rational::zero();
                for l in 0..n {
                    s += &a[i][l] * &m[l][j];
                }
                if i == j {
                    s += &coeffs[n - k + 1];
                }
                next[i][j] = s;
            }
        }
        let mut trace = Rational::zero();
        for i in 0..n {
            for l in 0..n {
                trace += &a[i][l] * &next[l][i];
            }
        }
        coeffs[n - k] = -trace / int(k as i64);
        m = next;
    }
    coeffs
}

pub fn sign_changes(values: impl Iterator<Item = i32>) -> usize {
    let nonzero: Vec<i32> = values.filter(|&s| s != 0).collect();
    nonzero.windows(2).filter(|w| w[0] != w[1]).count()
}

pub fn sgn(v: &Rational) -> i32 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// `(b⁺, b⁻, b₀)` from the characteristic polynomial by Descartes' rule,
/// which is exact because a symmetric matrix has only real eigenvalues.
pub fn oracle_inertia(entries: &[Vec<i64>]) -> (usize, usize, usize) {
    let p = oracle_charpoly(entries);
    let zeros = p.iter().take_while(|c| c.is_zero()).count();
    let q = &p[zeros..];
    let pos = sign_changes(q.iter().map(sgn));
    let neg = sign_changes(q.iter().enumerate().map(|(i, c)| if i % 2 == 0 { sgn(c) } else { -sgn(c) }));
    (pos, neg, zeros)
}

pub fn poly_trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

pub fn poly_rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = a.to_vec();
    let lead = b.last().unwrap().clone();
    while r.len() >= b.len() {
        let factor = r.last().unwrap() / &lead;
        let shift = r.len() - b.len();
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &factor * c;
        }
        r.pop();
        r = poly_trim(r);
    }
    r
}

/// Distinct positive and negative roots of `p` (with `p(0) ≠ 0`) by a Sturm
/// chain evaluated at `−∞`, `0`, `+∞`.
pub fn oracle_sturm_distinct(p: &[Rational]) -> (usize, usize) {
    let mut chain = vec![p.to_vec()];
    let deriv: Vec<Rational> = p.iter().enumerate().skip(1).map(|(i, c)| c * int(i as i64)).collect();
    chain.push(poly_trim(deriv));
    while chain.last().unwrap().len() > 1 {
        let n = chain.len();
        let r = poly_rem(&chain[n - 2], &chain[n - 1]);
        if r.is_empty() {
            break;
        }
        chain.push(r.into_iter().map(|c| -c).collect());
    }
    let at_zero = sign_changes(chain.iter().map(|c| sgn(&c[0])));
    let at_pos = sign_changes(chain.iter().map(|c| sgn(c.last().unwrap())));
    let at_neg = sign_changes(chain.iter().map(|c| {
        let s = sgn(c.last().unwrap());
        if (c.len() - 1) % 2 == 0 { s } else { -s }
    }));
    (at_zero - at_pos, at_neg - at_zero)
}

/// Rank by Gaussian elimination with full pivot search.
pub fn oracle_rank(rows: &[Vec<Rational>]) -> usize {
    let mut a = rows.to_vec();
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut rank = 0;
    while rank < m.min(n) {
        let mut best: Option<(usize, usize)> = None;
        for i in rank..m {
            for j in rank..n {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() > a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(rank, pi);
        for row in a.iter_mut() {
            row.swap(rank, pj);
        }
        for i in rank + 1..m {
            let factor = &a[i][rank] / &a[rank][rank];
            for j in rank..n {
                let delta = &factor * &a[rank][j];
                a[i][j] -= delta;
            }
        }
        rank += 1;
    }
    rank
}

pub fn horner_f64(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

