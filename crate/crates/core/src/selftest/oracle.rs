//! Brute-force reference computations, written independently of the main
//! code paths they check.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::field::Scalar;
use crate::series::{Exp, PuiseuxSeries};

/// Product of two series by schoolbook convolution over rational exponents.
/// Returns the known coefficients and the precision (`None` = exact).
pub fn series_product(a: &PuiseuxSeries, b: &PuiseuxSeries) -> (BTreeMap<Exp, Scalar>, Option<Exp>) {
    let field = a.field();
    let ta: Vec<(Exp, Scalar)> = a.exp_terms().map(|(e, c)| (e, c.clone())).collect();
    let tb: Vec<(Exp, Scalar)> = b.exp_terms().map(|(e, c)| (e, c.clone())).collect();
    // a lower bound for the valuation: the first known term, else the precision
    let low = |t: &[(Exp, Scalar)], p: Option<Exp>| t.first().map(|x| x.0).or(p);
    let prec = match (a.precision(), b.precision()) {
        (None, None) => None,
        (Some(pa), None) => low(&tb, None).map(|vb| pa + vb),
        (None, Some(pb)) => low(&ta, None).map(|va| pb + va),
        (Some(pa), Some(pb)) => {
            let va = low(&ta, Some(pa)).unwrap();
            let vb = low(&tb, Some(pb)).unwrap();
            Some((pa + vb).min(pb + va))
        }
    };
    let mut out: BTreeMap<Exp, Scalar> = BTreeMap::new();
    for (ea, ca) in &ta {
        for (eb, cb) in &tb {
            let e = ea + eb;
            let v = field.mul(ca, cb);
            let cur = out.remove(&e).unwrap_or_else(|| field.zero());
            out.insert(e, field.add(&cur, &v));
        }
    }
    out.retain(|e, c| !field.is_zero(c) && prec.map_or(true, |p| *e < p));
    // an exact zero factor makes the product exact zero
    let exact_zero = (ta.is_empty() && a.precision().is_none()) || (tb.is_empty() && b.precision().is_none());
    if exact_zero {
        return (BTreeMap::new(), None);
    }
    (out, prec)
}

/// Determinant over `Z/d` by the Leibniz formula.
pub fn det_mod(m: &[Vec<u32>], d: u32) -> u32 {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total: i64 = 0;
    loop {
        let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
        let mut prod: i64 = 1;
        for (r, &c) in perm.iter().enumerate() {
            prod = prod * m[r][c] as i64 % d as i64;
        }
        total += if inversions % 2 == 0 { prod } else { -prod };
        // next permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else { break };
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
    total.rem_euclid(d as i64) as u32
}

/// Coefficient of `e_I` in `v_1 ∧ ... ∧ v_j`: the minor on columns `I`.
pub fn wedge_coefficient(vs: &[Vec<u32>], cols: &[usize], d: u32) -> u32 {
    let minor: Vec<Vec<u32>> = vs.iter().map(|v| cols.iter().map(|&c| v[c]).collect()).collect();
    det_mod(&minor, d)
}

/// All vectors of `(Z/d)^m`.
pub fn all_vectors(d: u32, m: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..d).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// The set of all linear combinations of `gens`.
pub fn span(gens: &[Vec<u32>], d: u32, m: usize) -> Vec<Vec<u32>> {
    let mut set = vec![vec![0u32; m]];
    for g in gens {
        let mut next = Vec::new();
        for v in &set {
            for k in 0..d {
                let w: Vec<u32> = v.iter().zip(g).map(|(a, b)| (a + k * b) % d).collect();
                next.push(w);
            }
        }
        next.sort();
        next.dedup();
        set = next;
    }
    set
}

/// Whether two spans meet outside zero, by enumeration.
pub fn spans_intersect(a: &[Vec<u32>], b: &[Vec<u32>], d: u32, m: usize) -> bool {
    let sa = span(a, d, m);
    let sb = span(b, d, m);
    sa.iter().any(|v| v.iter().any(|&x| x != 0) && sb.binary_search(v).is_ok())
}

pub fn squarefree_part(mut n: i64) -> i64 {
    let sign = n.signum();
    n = n.abs();
    let mut out = 1;
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e % 2 == 1 {
            out *= p;
        }
        p += 1;
    }
    sign * out * n
}

/// `(a, b)_p` from primitive solvability of `z^2 = a x^2 + b y^2` modulo
/// `p^3` (odd `p`) or `2^5`, after reducing `a, b` to squarefree integers.
pub fn hilbert_brute(a: i64, b: i64, p: i64) -> i32 {
    let a = squarefree_part(a);
    let b = squarefree_part(b);
    let k = if p == 2 { 5 } else { 3 };
    let modulus = p.pow(k);
    let mut square = vec![false; modulus as usize];
    for z in 0..modulus {
        square[(z * z % modulus) as usize] = true;
    }
    let r = |v: i64| v.rem_euclid(modulus) as usize;
    // x a unit: scale to x = 1
    for y in 0..modulus {
        if square[r(a + b * y * y)] {
            return 1;
        }
    }
    // x divisible by p, y a unit: scale to y = 1
    for x in (0..modulus).step_by(p as usize) {
        if square[r(a * x * x + b)] {
            return 1;
        }
    }
    -1
}

/// `(a, b)_real`.
pub fn hilbert_real(a: i64, b: i64) -> i32 {
    if a < 0 && b < 0 {
        -1
    } else {
        1
    }
}

/// Whether a form over `F_p` has a nonzero zero, by full enumeration.
pub fn has_nontrivial_zero(p: u64, terms: &[(Vec<u32>, u64)], k: usize) -> bool {
    let total = p.pow(k as u32);
    (1..total).any(|mut idx| {
        let x: Vec<u64> = (0..k)
            .map(|_| {
                let v = idx % p;
                idx /= p;
                v
            })
            .collect();
        eval_mod(p, terms, &x) == 0
    })
}

pub fn eval_mod(p: u64, terms: &[(Vec<u32>, u64)], x: &[u64]) -> u64 {
    terms.iter().fold(0, |acc, (m, c)| {
        let t = m.iter().zip(x).fold(*c % p, |t, (&e, &xi)| t * xi.pow(e) % p);
        (acc + t) % p
    })
}

/// Independent evaluation of the constant-calculus formulas with big rationals.
pub mod constants {
    use super::*;

    type Q = BigRational;

    fn q(n: u64) -> Q {
        Q::from_integer(BigInt::from(n))
    }

    fn ceil_u64(x: &Q) -> u64 {
        let c = x.ceil().to_integer();
        u64::try_from(c).expect("nonnegative")
    }

    /// `(q0, N, c, s)` for the smooth case.
    pub fn smooth(minor: (u64, u64, u64, u64), per_i: &[(u64, u64, u64, u64)]) -> (u64, u64, u64, u64) {
        let mut q0 = minor.0;
        for x in per_i {
            q0 *= x.0;
        }
        let mut n_max = q(minor.1) / q(minor.0);
        let mut c_max = minor.2;
        let mut s_max = q(minor.3) / q(minor.0);
        for x in per_i {
            let n = q(x.1) / q(x.0);
            if n > n_max {
                n_max = n;
            }
            c_max = c_max.max(x.2);
            let s = q(x.3) / q(x.0);
            if s > s_max {
                s_max = s;
            }
        }
        let n = q(2) + q(2) * q(q0) * n_max;
        let s = Q::one() + q(q0) * s_max;
        (q0, ceil_u64(&n), 2 * c_max, ceil_u64(&s))
    }

    /// `(q0, N, c, s)` for the decomposition case.
    pub fn components(q0p: u64, u: u64, v: u64, w: u64, comps: &[(u64, u64, u64, u64)]) -> (u64, u64, u64, u64) {
        let mut q0 = q0p;
        for x in comps {
            q0 *= x.0;
        }
        let mut n_max: Option<Q> = None;
        let mut s_max: Option<Q> = None;
        let mut c_max = 0;
        for x in comps {
            let n = q(x.1) / q(x.0);
            let s = q(x.3) / q(x.0);
            if n_max.as_ref().map_or(true, |m| &n > m) {
                n_max = Some(n);
            }
            if s_max.as_ref().map_or(true, |m| &s > m) {
                s_max = Some(s);
            }
            c_max = c_max.max(x.2);
        }
        let ratio = q(q0) / q(q0p);
        let n = q(u) * q(w) * &ratio * (n_max.unwrap() + q(v));
        let s = Q::one() + &ratio * (q(v) + s_max.unwrap());
        (q0, ceil_u64(&n), u * w * c_max, ceil_u64(&s))
    }
}

/// Whether `f(0)`'s valuation vector is divisible by `d`, i.e. its class is trivial.
pub fn is_dth_power_class(exps: &[i64], d: u32) -> bool {
    exps.iter().all(|e| e.rem_euclid(d as i64) == 0)
}
