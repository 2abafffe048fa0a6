//! Mod-`d` Milnor K-theory of `k((t_1))...((t_m))` with `k` algebraically
//! closed of characteristic 0: unit classes are valuation vectors mod `d`,
//! `K_j/d` is the `j`-th exterior power, norms from Kummer extensions follow
//! the projection formula.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::MilnorError;
use crate::field::is_prime;
use crate::linalg::{inv_mod, kernel, rank, reduce, transpose};

fn check_prime(d: u32) -> Result<(), MilnorError> {
    if is_prime(d as u64) {
        Ok(())
    } else {
        Err(MilnorError::NotPrime(d))
    }
}

/// `c * t_1^a_1 ... t_m^a_m * u` with `u` a principal unit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonomialElem {
    pub exps: Vec<i64>,
    #[serde(default)]
    pub principal_unit: bool,
    #[serde(default)]
    pub constant_tag: Option<String>,
}

impl MonomialElem {
    pub fn new(exps: Vec<i64>) -> Self {
        MonomialElem { exps, principal_unit: false, constant_tag: None }
    }

    pub fn describe(&self) -> String {
        let mut parts: Vec<String> = self.constant_tag.iter().cloned().collect();
        for (i, &a) in self.exps.iter().enumerate() {
            match a {
                0 => {}
                1 => parts.push(format!("t{}", i + 1)),
                _ => parts.push(format!("t{}^{}", i + 1, a)),
            }
        }
        if self.principal_unit {
            parts.push("u".into());
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// A class in `K^x / (K^x)^d`, i.e. a vector in `(Z/d)^m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UnitClassModD {
    pub d: u32,
    pub vec: Vec<u32>,
}

impl UnitClassModD {
    pub fn new(d: u32, vec: Vec<i64>) -> Result<Self, MilnorError> {
        check_prime(d)?;
        Ok(UnitClassModD { d, vec: vec.into_iter().map(|v| reduce(v, d)).collect() })
    }

    pub fn zero(d: u32, m: usize) -> Self {
        UnitClassModD { d, vec: vec![0; m] }
    }

    pub fn basis(d: u32, m: usize, i: usize) -> Self {
        let mut v = vec![0; m];
        v[i] = 1;
        UnitClassModD { d, vec: v }
    }

    pub fn dim(&self) -> usize {
        self.vec.len()
    }

    pub fn is_zero(&self) -> bool {
        self.vec.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        UnitClassModD { d: self.d, vec: self.vec.iter().zip(&other.vec).map(|(a, b)| (a + b) % self.d).collect() }
    }

    pub fn scale(&self, k: u32) -> Self {
        UnitClassModD { d: self.d, vec: self.vec.iter().map(|a| (*a as u64 * k as u64 % self.d as u64) as u32).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(self.d - 1))
    }

    /// Appends zero coordinates up to dimension `m`.
    pub fn extend_to(&self, m: usize) -> Self {
        let mut v = self.vec.clone();
        v.resize(m, 0);
        UnitClassModD { d: self.d, vec: v }
    }
}

impl fmt::Display for UnitClassModD {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vec.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Constants and principal units are `d`-th powers, so only exponents count.
pub fn unit_class(e: &MonomialElem, d: u32) -> Result<UnitClassModD, MilnorError> {
    UnitClassModD::new(d, e.exps.clone())
}

/// An element of `Lambda^j (Z/d)^m`, keyed by strictly increasing index sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WedgeClass {
    pub d: u32,
    pub m: usize,
    pub j: usize,
    coords: BTreeMap<Vec<usize>, u32>,
}

impl Serialize for WedgeClass {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term {
            indices: Vec<usize>,
            coeff: u32,
        }
        #[derive(Serialize)]
        struct Repr {
            d: u32,
            m: usize,
            j: usize,
            terms: Vec<Term>,
        }
        Repr {
            d: self.d,
            m: self.m,
            j: self.j,
            terms: self
                .coords
                .iter()
                .map(|(k, &c)| Term { indices: k.iter().map(|i| i + 1).collect(), coeff: c })
                .collect(),
        }
        .serialize(s)
    }
}

impl WedgeClass {
    pub fn zero(d: u32, m: usize, j: usize) -> Self {
        WedgeClass { d, m, j, coords: BTreeMap::new() }
    }

    /// The degree-0 class `c` in `Z/d`.
    pub fn scalar(d: u32, m: usize, c: i64) -> Self {
        let mut w = Self::zero(d, m, 0);
        w.add_term(Vec::new(), reduce(c, d));
        w
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    /// Coefficient on the (0-based, increasing) index set.
    pub fn coeff(&self, indices: &[usize]) -> u32 {
        self.coords.get(indices).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, u32)> {
        self.coords.iter().map(|(k, &c)| (k, c))
    }

    fn add_term(&mut self, key: Vec<usize>, c: u32) {
        let e = self.coords.entry(key).or_insert(0);
        *e = (*e + c) % self.d;
        if *e == 0 {
            self.coords.retain(|_, v| *v != 0);
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<(), MilnorError> {
        if self.d != other.d || self.m != other.m || self.j != other.j {
            return Err(MilnorError::DimensionMismatch(format!(
                "classes in Lambda^{} (Z/{})^{} and Lambda^{} (Z/{})^{}",
                self.j, self.d, self.m, other.j, other.d, other.m
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, MilnorError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (k, &c) in &other.coords {
            out.add_term(k.clone(), c);
        }
        Ok(out)
    }

    pub fn scale(&self, k: i64) -> Self {
        let k = reduce(k, self.d);
        let mut out = Self::zero(self.d, self.m, self.j);
        for (key, &c) in &self.coords {
            out.add_term(key.clone(), (c as u64 * k as u64 % self.d as u64) as u32);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    /// Exterior product.
    pub fn wedge(&self, other: &Self) -> Result<Self, MilnorError> {
        if self.d != other.d || self.m != other.m {
            return Err(MilnorError::DimensionMismatch("wedge of classes over different lattices".into()));
        }
        let mut out = Self::zero(self.d, self.m, self.j + other.j);
        for (a, &ca) in &self.coords {
            for (b, &cb) in &other.coords {
                let mut idx: Vec<usize> = a.iter().chain(b).copied().collect();
                if let Some(sign) = sort_with_sign(&mut idx) {
                    let c = (ca as u64 * cb as u64 % self.d as u64) as u32;
                    out.add_term(idx, if sign { c } else { (self.d - c) % self.d });
                }
            }
        }
        Ok(out)
    }

    /// The same class over a lattice with extra trailing generators.
    pub fn extend_to(&self, m: usize) -> Self {
        WedgeClass { d: self.d, m, j: self.j, coords: self.coords.clone() }
    }
}

/// Sorts in place; `None` on a repeated index, else `Some(even permutation)`.
fn sort_with_sign(idx: &mut [usize]) -> Option<bool> {
    let mut even = true;
    for i in 1..idx.len() {
        let mut k = i;
        while k > 0 && idx[k - 1] > idx[k] {
            idx.swap(k - 1, k);
            even = !even;
            k -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(even)
    }
}

fn degree_one(v: &UnitClassModD) -> WedgeClass {
    let mut w = WedgeClass::zero(v.d, v.dim(), 1);
    for (i, &c) in v.vec.iter().enumerate() {
        if c != 0 {
            w.add_term(vec![i], c);
        }
    }
    w
}

/// The symbol `{x_1, ..., x_j}` in the exterior model.
pub fn wedge(vs: &[UnitClassModD]) -> Result<WedgeClass, MilnorError> {
    let first = vs.first().ok_or_else(|| MilnorError::InvalidInput("wedge of an empty list".into()))?;
    let (d, m) = (first.d, first.dim());
    let mut acc = WedgeClass::scalar(d, m, 1);
    for v in vs {
        if v.d != d || v.dim() != m {
            return Err(MilnorError::DimensionMismatch(format!("expected classes in (Z/{d})^{m}")));
        }
        acc = acc.wedge(&degree_one(v))?;
    }
    Ok(acc)
}

/// `K(pi)` with `pi^d = radicand`; classes over it use one more generator, `pi`,
/// placed after the base generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KummerExtension {
    pub radicand: UnitClassModD,
}

impl KummerExtension {
    pub fn new(radicand: UnitClassModD) -> Result<Self, MilnorError> {
        check_prime(radicand.d)?;
        if radicand.is_zero() {
            return Err(MilnorError::TrivialExtension);
        }
        Ok(KummerExtension { radicand })
    }

    pub fn d(&self) -> u32 {
        self.radicand.d
    }

    pub fn base_dim(&self) -> usize {
        self.radicand.dim()
    }

    /// Class of `pi` over the extension.
    pub fn pi(&self) -> UnitClassModD {
        UnitClassModD::basis(self.d(), self.base_dim() + 1, self.base_dim())
    }

    /// Restriction of a base class to the extension.
    pub fn lift(&self, v: &UnitClassModD) -> UnitClassModD {
        v.extend_to(self.base_dim() + 1)
    }
}

/// `N_{L/K}` on `K_j/d`: classes from `K` are multiplied by `d = [L:K]` and
/// vanish; by the projection formula `N(x ∧ pi) = x ∧ N(pi)`, and
/// `N(pi) = (-1)^(d-1) radicand` has the radicand's class.
pub fn kummer_norm_class(ext: &KummerExtension, x: &WedgeClass) -> Result<WedgeClass, MilnorError> {
    let m = ext.base_dim();
    if x.d != ext.d() || x.m != m + 1 {
        return Err(MilnorError::DimensionMismatch(format!(
            "class over (Z/{})^{}, extension expects (Z/{})^{}",
            x.d,
            x.m,
            ext.d(),
            m + 1
        )));
    }
    if x.j == 0 {
        return Ok(WedgeClass::zero(x.d, m, 0));
    }
    let u = degree_one(&ext.radicand);
    let mut out = WedgeClass::zero(x.d, m, x.j);
    for (key, c) in x.terms() {
        if key.last() != Some(&m) {
            continue;
        }
        let mut rest = WedgeClass::zero(x.d, m, x.j - 1);
        rest.add_term(key[..key.len() - 1].to_vec(), c);
        out = out.add(&rest.wedge(&u)?)?;
    }
    Ok(out)
}

/// A tower `K = L_0 ⊂ L_1 ⊂ ... ⊂ L_r`, `L_i = L_{i-1}(pi_i)`; the radicand of
/// level `i` lives over `L_{i-1}` (dimension `m + i - 1`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KummerTower {
    pub levels: Vec<KummerExtension>,
}

impl KummerTower {
    pub fn new(base_dim: usize, radicands: Vec<UnitClassModD>) -> Result<Self, MilnorError> {
        let mut levels = Vec::new();
        for (i, r) in radicands.into_iter().enumerate() {
            if r.dim() != base_dim + i {
                return Err(MilnorError::DimensionMismatch(format!(
                    "radicand {} has dimension {}, expected {}",
                    i + 1,
                    r.dim(),
                    base_dim + i
                )));
            }
            // pi_k^d = u_k makes u_k a d-th power upstairs: the new radicand must
            // stay nonzero modulo the earlier ones.
            let d = r.d;
            let earlier: Vec<Vec<u32>> =
                levels.iter().map(|e: &KummerExtension| e.radicand.extend_to(base_dim + i).vec).collect();
            let mut with = earlier.clone();
            with.push(r.vec.clone());
            if r.is_zero() || rank(&with, d) == rank(&earlier, d) {
                return Err(MilnorError::TrivialExtension);
            }
            levels.push(KummerExtension::new(r)?);
        }
        Ok(KummerTower { levels })
    }

    /// `N_{L_r/K} = N_{L_1/K} ∘ ... ∘ N_{L_r/L_{r-1}}`.
    pub fn norm(&self, x: &WedgeClass) -> Result<WedgeClass, MilnorError> {
        self.levels.iter().rev().try_fold(x.clone(), |acc, ext| kummer_norm_class(ext, &acc))
    }
}

/// Coefficient of a monic polynomial: zero or a monomial element.
pub type Coefficient = Option<MonomialElem>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Irreducibility {
    /// One Newton-polygon slope `v(a_0)/d` with `v(a_0)` not divisible by `d`.
    SingleSlope,
    CallerAsserted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Lemma51Verdict {
    /// `f(0)` is not a `d`-th power: its class has a nonzero entry at `level`
    /// (1-based uniformizer index) after descending through the zero ones.
    Certified { level: usize },
    /// The class of `f(0)` is zero, contradicting the lemma: a precondition failed.
    Refuted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma51Certificate {
    pub d: u32,
    pub class: UnitClassModD,
    pub irreducibility: Irreducibility,
    pub steps: Vec<String>,
    #[serde(flatten)]
    pub verdict: Lemma51Verdict,
}

/// `w_1 >= w_2` in the order where the last uniformizer is most significant.
fn lex_ge(w1: &[i128], w2: &[i128]) -> bool {
    for (a, b) in w1.iter().rev().zip(w2.iter().rev()) {
        if a != b {
            return a > b;
        }
    }
    true
}

/// Certifies `f(0) ∉ (K^x)^d` for `f = X^d + a_{d-1} X^{d-1} + ... + a_0`,
/// `coeffs = [a_0, ..., a_{d-1}]`, by induction on the number of uniformizers.
pub fn lemma51_certify(coeffs: &[Coefficient], d: u32, assert_irreducible: bool) -> Result<Lemma51Certificate, MilnorError> {
    if !is_prime(d as u64) {
        return Err(MilnorError::PreconditionViolated(format!("degree {d} is not prime")));
    }
    if coeffs.len() != d as usize {
        return Err(MilnorError::PreconditionViolated(format!(
            "expected {d} lower coefficients of a monic degree-{d} polynomial, got {}",
            coeffs.len()
        )));
    }
    if coeffs[d as usize - 1].is_some() {
        return Err(MilnorError::PreconditionViolated("the X^(d-1) coefficient must vanish".into()));
    }
    let a0 = coeffs[0]
        .as_ref()
        .ok_or_else(|| MilnorError::PreconditionViolated("f(0) = 0, so f is reducible".into()))?;
    let m = a0.exps.len();
    if coeffs.iter().flatten().any(|c| c.exps.len() != m) {
        return Err(MilnorError::DimensionMismatch("coefficients over different numbers of uniformizers".into()));
    }
    let v0: Vec<i128> = a0.exps.iter().map(|&x| x as i128).collect();
    let single_slope = v0.iter().any(|x| x.rem_euclid(d as i128) != 0)
        && coeffs.iter().enumerate().skip(1).all(|(i, c)| match c {
            None => true,
            Some(c) => {
                let lhs: Vec<i128> = c.exps.iter().map(|&x| d as i128 * x as i128).collect();
                let rhs: Vec<i128> = v0.iter().map(|&x| (d as i128 - i as i128) * x).collect();
                lex_ge(&lhs, &rhs)
            }
        });
    let irreducibility = if single_slope {
        Irreducibility::SingleSlope
    } else if assert_irreducible {
        Irreducibility::CallerAsserted
    } else {
        return Err(MilnorError::PreconditionViolated(
            "irreducibility not established by a single Newton-polygon slope; assert it explicitly".into(),
        ));
    };
    let class = unit_class(a0, d)?;
    let mut steps = Vec::new();
    for level in (1..=m).rev() {
        let e = class.vec[level - 1];
        if e != 0 {
            steps.push(format!(
                "val_t{level}(f(0)) = {} is prime to {d}: f(0) is not a d-th power (first case)",
                a0.exps[level - 1]
            ));
            return Ok(Lemma51Certificate { d, class, irreducibility, steps, verdict: Lemma51Verdict::Certified { level } });
        }
        steps.push(format!(
            "val_t{level}(f(0)) = {} = 0 mod {d}: pass to the leading coefficient over t1..t{} (second case)",
            a0.exps[level - 1],
            level - 1
        ));
    }
    steps.push("class of f(0) is zero".into());
    Ok(Lemma51Certificate { d, class, irreducibility, steps, verdict: Lemma51Verdict::Refuted })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormFactor {
    /// 0-based indices `alpha < beta` of the coefficient classes.
    pub pair: (usize, usize),
    /// Class of `c_alpha / c_beta`; the extension adjoins its `d`-th root `pi`.
    pub radicand: UnitClassModD,
    /// `u'_1, ..., u'_{j-1}`; the factor is `N({u'_1, ..., u'_{j-1}, pi})^exponent`.
    pub element: Vec<UnitClassModD>,
    pub exponent: u32,
}

impl NormFactor {
    pub fn extension(&self) -> String {
        format!("adjoin d-th root of c{}/c{} (class {})", self.pair.0, self.pair.1, self.radicand)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "kebab-case")]
pub enum DecompositionCase {
    /// `sum relation_s u_s = 0`, so the symbol is zero mod `d`.
    Dependent { relation: Vec<u32> },
    /// `u' = u` permuted by `order` (wedge sign `sign`), and
    /// `w = sum delta_s u'_s = sum eps (c_alpha - c_beta)` lies in `W ∩ W'`.
    Independent { order: Vec<usize>, sign: i8, delta: Vec<u32>, w: UnitClassModD },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormDecomposition {
    pub d: u32,
    pub u_classes: Vec<UnitClassModD>,
    pub target: WedgeClass,
    #[serde(flatten)]
    pub case: DecompositionCase,
    pub factors: Vec<NormFactor>,
}

/// Writes `{u_1, ..., u_j}` (to an invertible power) as a product of norms from
/// the Kummer extensions `L(c_alpha/c_beta)^(1/d)`.
pub fn thm54_witness(
    d: u32,
    m_plus_1: usize,
    u_classes: &[UnitClassModD],
    c_classes: &[UnitClassModD],
) -> Result<NormDecomposition, MilnorError> {
    check_prime(d)?;
    if u_classes.is_empty() {
        return Err(MilnorError::InvalidInput("need at least one u-class".into()));
    }
    if c_classes.len() < 2 {
        return Err(MilnorError::InvalidInput("need at least two coefficient classes".into()));
    }
    for v in u_classes.iter().chain(c_classes) {
        if v.d != d || v.dim() != m_plus_1 {
            return Err(MilnorError::DimensionMismatch(format!("expected classes in (Z/{d})^{m_plus_1}")));
        }
    }
    for a in 0..c_classes.len() {
        for b in a + 1..c_classes.len() {
            if c_classes[a] == c_classes[b] {
                return Err(MilnorError::DuplicateCoefficientClass { first: a, second: b });
            }
        }
    }
    let j = u_classes.len();
    let target = wedge(u_classes)?;
    let pairs: Vec<(usize, usize)> =
        (0..c_classes.len()).flat_map(|a| (a + 1..c_classes.len()).map(move |b| (a, b))).collect();
    let diffs: Vec<UnitClassModD> = pairs.iter().map(|&(a, b)| c_classes[a].sub(&c_classes[b])).collect();

    // columns [u_1 .. u_j | -(c_a - c_b) ...]; kernel vectors give W ∩ W'
    let mut cols: Vec<Vec<u32>> = u_classes.iter().map(|u| u.vec.clone()).collect();
    cols.extend(diffs.iter().map(|v| v.scale(d - 1).vec));
    let mat = transpose(&cols, m_plus_1);
    let ker = kernel(&mat, cols.len(), d);
    let hit = ker.iter().find(|k| k[..j].iter().any(|&x| x != 0) && {
        let w = k[..j].iter().zip(u_classes).fold(UnitClassModD::zero(d, m_plus_1), |acc, (&c, u)| acc.add(&u.scale(c)));
        !w.is_zero()
    });
    let Some(hit) = hit else {
        return Err(MilnorError::Infeasible);
    };

    let u_cols: Vec<Vec<u32>> = u_classes.iter().map(|u| u.vec.clone()).collect();
    if rank(&u_cols, d) < j {
        let relation = kernel(&transpose(&u_cols, m_plus_1), j, d).remove(0);
        return Ok(NormDecomposition {
            d,
            u_classes: u_classes.to_vec(),
            target,
            case: DecompositionCase::Dependent { relation },
            factors: Vec::new(),
        });
    }

    let delta_raw = &hit[..j];
    let eps = &hit[j..];
    let s = (0..j).rev().find(|&s| delta_raw[s] != 0).expect("nonzero delta part");
    let mut order: Vec<usize> = (0..j).collect();
    order.swap(s, j - 1);
    let sign: i8 = if s == j - 1 { 1 } else { -1 };
    let reordered: Vec<UnitClassModD> = order.iter().map(|&i| u_classes[i].clone()).collect();
    let delta: Vec<u32> = order.iter().map(|&i| delta_raw[i]).collect();
    let w = delta.iter().zip(&reordered).fold(UnitClassModD::zero(d, m_plus_1), |acc, (&c, u)| acc.add(&u.scale(c)));
    let factors = pairs
        .iter()
        .zip(&diffs)
        .zip(eps)
        .filter(|(_, &e)| e != 0)
        .map(|((&pair, radicand), &exponent)| NormFactor {
            pair,
            radicand: radicand.clone(),
            element: reordered[..j - 1].to_vec(),
            exponent,
        })
        .collect();
    Ok(NormDecomposition {
        d,
        u_classes: u_classes.to_vec(),
        target,
        case: DecompositionCase::Independent { order, sign, delta, w },
        factors,
    })
}

/// Pushes every factor through its Kummer norm and checks the product equals
/// `target^(sign * delta_j)` with `delta_j` invertible mod `d`.
pub fn expand_and_verify(dec: &NormDecomposition) -> bool {
    let d = dec.d;
    let Ok(target) = wedge(&dec.u_classes) else {
        return dec.u_classes.is_empty() && dec.target.is_zero() && dec.factors.is_empty();
    };
    if target != dec.target {
        return false;
    }
    let m = target.m;
    match &dec.case {
        DecompositionCase::Dependent { relation } => {
            let combo = relation
                .iter()
                .zip(&dec.u_classes)
                .fold(UnitClassModD::zero(d, m), |acc, (&c, u)| acc.add(&u.scale(c)));
            dec.factors.is_empty() && relation.iter().any(|&c| c != 0) && combo.is_zero() && target.is_zero()
        }
        DecompositionCase::Independent { sign, delta, .. } => {
            let Some(&last) = delta.last() else { return false };
            if inv_mod(last, d).is_none() {
                return false;
            }
            let lhs = target.scale(*sign as i64 * last as i64);
            let mut rhs = WedgeClass::zero(d, m, target.j);
            for f in &dec.factors {
                let Ok(ext) = KummerExtension::new(f.radicand.clone()) else { return false };
                let mut parts: Vec<UnitClassModD> = f.element.iter().map(|e| ext.lift(e)).collect();
                parts.push(ext.pi());
                let Ok(sym) = wedge(&parts) else { return false };
                let Ok(n) = kummer_norm_class(&ext, &sym) else { return false };
                let Ok(sum) = rhs.add(&n.scale(f.exponent as i64)) else { return false };
                rhs = sum;
            }
            lhs == rhs
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uc(d: u32, v: &[i64]) -> UnitClassModD {
        UnitClassModD::new(d, v.to_vec()).unwrap()
    }

    #[test]
    fn unit_class_examples() {
        assert_eq!(unit_class(&MonomialElem::new(vec![1, 2]), 3).unwrap().vec, vec![1, 2]);
        assert_eq!(unit_class(&MonomialElem::new(vec![-4, 0]), 3).unwrap().vec, vec![2, 0]);
        let c = MonomialElem { exps: vec![0, 0], principal_unit: true, constant_tag: Some("c".into()) };
        assert!(unit_class(&c, 5).unwrap().is_zero());
    }

    #[test]
    fn wedge_examples() {
        let w = wedge(&[uc(3, &[1, 0]), uc(3, &[0, 1])]).unwrap();
        assert_eq!(w.coeff(&[0, 1]), 1);
        assert!(wedge(&[uc(3, &[1, 2]), uc(3, &[1, 2])]).unwrap().is_zero());
        assert_eq!(wedge(&[uc(3, &[0, 1]), uc(3, &[1, 0])]).unwrap().coeff(&[0, 1]), 2);
        assert!(wedge(&[uc(3, &[1, 0]), uc(3, &[1, 0, 0])]).is_err());
    }

    #[test]
    fn norm_examples() {
        // K = k((t)), L = K(t^(1/2))
        let ext = KummerExtension::new(uc(2, &[1])).unwrap();
        let n = kummer_norm_class(&ext, &wedge(&[ext.pi()]).unwrap()).unwrap();
        assert_eq!(n, wedge(&[uc(2, &[1])]).unwrap());
        let restricted = wedge(&[ext.lift(&uc(2, &[1]))]).unwrap();
        assert!(kummer_norm_class(&ext, &restricted).unwrap().is_zero());
        // projection formula N({x, pi}) = {x, u}
        let ext = KummerExtension::new(uc(3, &[1, 2])).unwrap();
        let x = uc(3, &[2, 1]);
        let lhs = kummer_norm_class(&ext, &wedge(&[ext.lift(&x), ext.pi()]).unwrap()).unwrap();
        assert_eq!(lhs, wedge(&[x, uc(3, &[1, 2])]).unwrap());
        assert_eq!(KummerExtension::new(uc(3, &[0, 3])), Err(MilnorError::TrivialExtension));
    }

    #[test]
    fn lemma51_examples() {
        let c = lemma51_certify(&[Some(MonomialElem::new(vec![1])), None], 2, false).unwrap();
        assert_eq!(c.verdict, Lemma51Verdict::Certified { level: 1 });
        let c = lemma51_certify(&[Some(MonomialElem::new(vec![1, 2])), None, None], 3, false).unwrap();
        assert_eq!(c.class.vec, vec![1, 2]);
        assert_eq!(c.verdict, Lemma51Verdict::Certified { level: 2 });
        let c = lemma51_certify(&[Some(MonomialElem::new(vec![1, 0])), None, None], 3, false).unwrap();
        assert_eq!(c.verdict, Lemma51Verdict::Certified { level: 1 });
        let bad = lemma51_certify(&[Some(MonomialElem::new(vec![1])), Some(MonomialElem::new(vec![1]))], 2, false);
        assert!(matches!(bad, Err(MilnorError::PreconditionViolated(_))));
        let c = lemma51_certify(&[Some(MonomialElem::new(vec![2])), None], 2, true).unwrap();
        assert_eq!(c.verdict, Lemma51Verdict::Refuted);
        assert!(lemma51_certify(&[Some(MonomialElem::new(vec![2])), None], 2, false).is_err());
        assert!(lemma51_certify(&[Some(MonomialElem::new(vec![1])), None, None, None], 4, true).is_err());
    }

    #[test]
    fn witness_examples() {
        let c = [uc(2, &[0, 0]), uc(2, &[1, 0]), uc(2, &[0, 1])];
        let dec = thm54_witness(2, 2, &[uc(2, &[1, 0])], &c).unwrap();
        assert_eq!(dec.factors.len(), 1);
        assert_eq!((dec.factors[0].pair, dec.factors[0].exponent), ((0, 1), 1));
        assert!(expand_and_verify(&dec));

        let c3 = [uc(3, &[0, 0]), uc(3, &[1, 0]), uc(3, &[0, 1])];
        let dep = thm54_witness(3, 2, &[uc(3, &[1, 0]), uc(3, &[2, 0])], &c3).unwrap();
        assert!(matches!(dep.case, DecompositionCase::Dependent { .. }));
        assert!(dep.factors.is_empty() && dep.target.is_zero());
        assert!(expand_and_verify(&dep));

        let dup = thm54_witness(3, 2, &[uc(3, &[1, 0])], &[uc(3, &[1, 1]), uc(3, &[1, 1])]);
        assert_eq!(dup, Err(MilnorError::DuplicateCoefficientClass { first: 0, second: 1 }));

        let mut tampered = thm54_witness(3, 2, &[uc(3, &[1, 0])], &c3).unwrap();
        assert!(expand_and_verify(&tampered));
        tampered.factors[0].exponent = (tampered.factors[0].exponent + 1) % 3;
        assert!(!expand_and_verify(&tampered));

        // W = <(1,0,0)>, W' = <(0,1,0)>: trivial intersection
        let c = [uc(3, &[0, 0, 0]), uc(3, &[0, 1, 0])];
        assert_eq!(thm54_witness(3, 3, &[uc(3, &[1, 0, 0])], &c), Err(MilnorError::Infeasible));
    }

    #[test]
    fn two_dimensional_witness() {
        let d = 5;
        let u = [uc(d, &[1, 0, 0]), uc(d, &[0, 1, 0])];
        let c = [uc(d, &[0, 0, 0]), uc(d, &[0, 1, 1]), uc(d, &[0, 0, 1])];
        let dec = thm54_witness(d, 3, &u, &c).unwrap();
        assert!(matches!(dec.case, DecompositionCase::Independent { .. }));
        assert!(expand_and_verify(&dec));
    }

    #[test]
    fn tower_norm_is_order_independent() {
        let d = 3;
        let tower = KummerTower::new(2, vec![uc(d, &[1, 0]), uc(d, &[0, 1, 0])]).unwrap();
        let x = wedge(&[uc(d, &[0, 0, 1, 0]), uc(d, &[0, 0, 0, 1])]).unwrap();
        assert_eq!(tower.norm(&x).unwrap(), wedge(&[uc(d, &[1, 0]), uc(d, &[0, 1])]).unwrap());
        assert_eq!(KummerTower::new(2, vec![uc(d, &[1, 0]), uc(d, &[2, 0, 0])]), Err(MilnorError::TrivialExtension));
    }
}
