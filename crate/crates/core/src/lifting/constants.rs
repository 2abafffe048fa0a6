//! Admissible quadruples `(q0, N, c, s)` and the constant calculus combining them.

use num_rational::Ratio;
use serde::Serialize;

use crate::error::LiftError;

type Q = Ratio<i128>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AdmissibleQuadruple {
    pub q0: u64,
    pub n: u64,
    pub c: u64,
    pub s: u64,
}

/// `(N, c, s)` claimed at tower level `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AssociatedTriple {
    pub n: u64,
    pub c: u64,
    pub s: u64,
    pub q: u64,
}

impl AdmissibleQuadruple {
    pub fn new(q0: u64, n: u64, c: u64, s: u64) -> Result<Self, LiftError> {
        if q0 == 0 || n == 0 || c == 0 {
            return Err(LiftError::InvalidQuadruple(format!("({q0},{n},{c},{s}): q0, N, c must be positive")));
        }
        Ok(AdmissibleQuadruple { q0, n, c, s })
    }

    /// The triple `(qN, c, qs)` associated at level `q * q0`.
    pub fn triple_at(&self, q: u64) -> AssociatedTriple {
        AssociatedTriple { n: q * self.n, c: self.c, s: q * self.s, q: q * self.q0 }
    }
}

impl AssociatedTriple {
    pub fn new(n: u64, c: u64, s: u64, q: u64) -> Result<Self, LiftError> {
        if n == 0 || c == 0 || q == 0 {
            return Err(LiftError::InvalidQuadruple(format!("triple ({n},{c},{s}) at level {q}")));
        }
        Ok(AssociatedTriple { n, c, s, q })
    }
}

fn ratio(a: u64, b: u64) -> Q {
    Q::new(a as i128, b as i128)
}

fn to_u64(x: Q) -> u64 {
    x.ceil().to_integer() as u64
}

/// First case of the recursion: combine the quadruple attached to the Jacobian
/// minors with one quadruple per index set `I`.
///
/// `q0 = q0' * prod q0_I`, `N = 2 + 2 q0 max{N'/q0', N_I/q0_I}`,
/// `c = 2 max{c', c_I}`, `s = 1 + q0 max{s'/q0', s_I/q0_I}`.
pub fn combine_admissible_smooth(minor: AdmissibleQuadruple, per_i: &[AdmissibleQuadruple]) -> AdmissibleQuadruple {
    let q0 = per_i.iter().fold(minor.q0, |acc, x| acc * x.q0);
    let all = std::iter::once(&minor).chain(per_i);
    let max_n = all.clone().map(|x| ratio(x.n, x.q0)).max().unwrap();
    let max_c = all.clone().map(|x| x.c).max().unwrap();
    let max_s = all.map(|x| ratio(x.s, x.q0)).max().unwrap();
    let q = Q::from_integer(q0 as i128);
    AdmissibleQuadruple {
        q0,
        n: to_u64(Q::from_integer(2) + Q::from_integer(2) * q * max_n),
        c: 2 * max_c,
        s: to_u64(Q::from_integer(1) + q * max_s),
    }
}

/// Second case: components `W_1..W_u` with caller-certified exponents `v, w`.
///
/// `q0 = q0' * prod q0_j`, `N = u w (q0/q0') (max N_j/q0_j + v)`,
/// `c = u w max c_j`, `s = 1 + (q0/q0') (v + max s_j/q0_j)`; a fractional `N`
/// or `s` is rounded up.
pub fn combine_admissible_components(
    q0_prime: u64,
    u: u64,
    v: u64,
    w: u64,
    comps: &[AdmissibleQuadruple],
) -> Result<AdmissibleQuadruple, LiftError> {
    if comps.is_empty() {
        return Err(LiftError::EmptyDecomposition);
    }
    if u as usize != comps.len() {
        return Err(LiftError::ComponentCountMismatch { u, found: comps.len() });
    }
    if q0_prime == 0 || w == 0 {
        return Err(LiftError::InvalidQuadruple("q0' and w must be positive".into()));
    }
    let q0 = comps.iter().fold(q0_prime, |acc, x| acc * x.q0);
    let scale = ratio(q0, q0_prime);
    let max_n = comps.iter().map(|x| ratio(x.n, x.q0)).max().unwrap();
    let max_s = comps.iter().map(|x| ratio(x.s, x.q0)).max().unwrap();
    let max_c = comps.iter().map(|x| x.c).max().unwrap();
    let uw = Q::from_integer((u * w) as i128);
    let vq = Q::from_integer(v as i128);
    Ok(AdmissibleQuadruple {
        q0,
        n: to_u64(uw * scale * (max_n + vq)),
        c: u * w * max_c,
        s: to_u64(Q::from_integer(1) + scale * (vq + max_s)),
    })
}

/// `M = N/q0`, `gamma = c`, `sigma = (s+1)/q0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GreenbergConstants {
    #[serde(serialize_with = "ser_ratio")]
    pub m: Ratio<u64>,
    pub gamma: u64,
    #[serde(serialize_with = "ser_ratio")]
    pub sigma: Ratio<u64>,
    pub source: AdmissibleQuadruple,
}

fn ser_ratio<S: serde::Serializer>(r: &Ratio<u64>, s: S) -> Result<S::Ok, S::Error> {
    if *r.denom() == 1 {
        s.serialize_str(&r.numer().to_string())
    } else {
        s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
    }
}

pub fn greenberg_constants(q: AdmissibleQuadruple) -> GreenbergConstants {
    GreenbergConstants {
        m: Ratio::new(q.n, q.q0),
        gamma: q.c,
        sigma: Ratio::new(q.s + 1, q.q0),
        source: q,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn aq(q0: u64, n: u64, c: u64, s: u64) -> AdmissibleQuadruple {
        AdmissibleQuadruple::new(q0, n, c, s).unwrap()
    }

    #[test]
    fn smooth_case_examples() {
        assert_eq!(combine_admissible_smooth(aq(1, 3, 2, 1), &[aq(1, 5, 3, 2)]), aq(1, 12, 6, 3));
        assert_eq!(combine_admissible_smooth(aq(2, 4, 1, 0), &[aq(1, 2, 1, 0)]), aq(2, 10, 2, 1));
        // no index sets: the maxima run over the minor term alone
        assert_eq!(combine_admissible_smooth(aq(1, 1, 1, 0), &[]), aq(1, 4, 2, 1));
    }

    #[test]
    fn component_case_examples() {
        let out = combine_admissible_components(2, 2, 3, 1, &[aq(1, 4, 2, 1), aq(1, 6, 3, 2)]).unwrap();
        assert_eq!(out, aq(2, 18, 6, 6));
        let out = combine_admissible_components(1, 1, 0, 1, &[aq(1, 7, 3, 2)]).unwrap();
        assert_eq!(out, aq(1, 7, 3, 3));
        assert_eq!(combine_admissible_components(1, 1, 0, 1, &[]), Err(LiftError::EmptyDecomposition));
    }

    #[test]
    fn greenberg_examples() {
        let g = greenberg_constants(aq(1, 12, 6, 3));
        assert_eq!((g.m, g.gamma, g.sigma), (Ratio::from_integer(12), 6, Ratio::from_integer(4)));
        let g = greenberg_constants(aq(2, 10, 2, 1));
        assert_eq!((g.m, g.gamma, g.sigma), (Ratio::from_integer(5), 2, Ratio::from_integer(1)));
        let g = greenberg_constants(aq(1, 1, 1, 0));
        assert_eq!((g.m, g.gamma, g.sigma), (Ratio::from_integer(1), 1, Ratio::from_integer(1)));
    }

    #[test]
    fn triple_scaling() {
        let t = aq(2, 5, 3, 1).triple_at(3);
        assert_eq!(t, AssociatedTriple { n: 15, c: 3, s: 3, q: 6 });
    }
}
