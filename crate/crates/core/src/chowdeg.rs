//! The Chow ring ℤ[ε₁,…,ε_n]/(ε_i²) of (ℙ¹)ⁿ, multidegree classes and the
//! combinatorics of minimal deficient projections.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::arith::factorial;
use crate::error::{Error, Result};

/// A subset of {1..n} as a bitmask; bit i−1 stands for index i.
pub type Subset = u64;

pub fn subset_of(indices: &[usize]) -> Subset {
    indices.iter().fold(0, |m, &i| m | 1 << (i - 1))
}

pub fn indices_of(s: Subset) -> Vec<usize> {
    (0..64).filter(|b| s >> b & 1 == 1).map(|b| b + 1).collect()
}

/// Σ_I a_I ε_I with all |I| equal to the codimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiClass {
    n: usize,
    codim: usize,
    coeffs: BTreeMap<Subset, BigUint>,
}

impl MultiClass {
    /// Builds a class from (subset, coefficient) pairs. The codimension is
    /// read off the terms; `codim` is used only when every coefficient is 0.
    pub fn new(n: usize, codim: usize, terms: impl IntoIterator<Item = (Subset, BigUint)>) -> Result<MultiClass> {
        if n == 0 || n > 64 {
            return Err(Error::InvalidInput(format!("number of factors {n} must be in 1..=64")));
        }
        let mut coeffs = BTreeMap::new();
        let mut seen: Option<usize> = None;
        for (s, a) in terms {
            if n < 64 && s >> n != 0 {
                return Err(Error::InvalidInput(format!("subset {:?} exceeds n = {n}", indices_of(s))));
            }
            if a.is_zero() {
                continue;
            }
            let k = s.count_ones() as usize;
            match seen {
                Some(c) if c != k => {
                    return Err(Error::InvalidInput(format!("mixed codimension: terms of sizes {c} and {k}")))
                }
                _ => seen = Some(k),
            }
            *coeffs.entry(s).or_insert_with(BigUint::zero) += a;
        }
        Ok(MultiClass { n, codim: seen.unwrap_or(codim), coeffs })
    }

    pub fn from_u64(n: usize, terms: &[(&[usize], u64)]) -> Result<MultiClass> {
        let codim = terms.first().map_or(0, |t| t.0.len());
        MultiClass::new(n, codim, terms.iter().map(|(i, a)| (subset_of(i), BigUint::from(*a))))
    }

    /// The unit class [ℙⁿ] = 1.
    pub fn unit(n: usize) -> MultiClass {
        MultiClass { n, codim: 0, coeffs: BTreeMap::from([(0, BigUint::one())]) }
    }

    /// ε₁⋯ε_n.
    pub fn point(n: usize) -> MultiClass {
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        MultiClass { n, codim: n, coeffs: BTreeMap::from([(full, BigUint::one())]) }
    }

    /// (ε₁ + … + ε_n)^k, expanded: k!·Σ_{|I|=k} ε_I.
    pub fn hyperplane_power(n: usize, k: usize) -> MultiClass {
        let f = factorial(k as u64);
        let terms = (0..1u64 << n).filter(|s| s.count_ones() as usize == k).map(|s| (s, f.clone()));
        MultiClass::new(n, k, terms).unwrap()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn codim(&self) -> usize {
        self.codim
    }

    /// Dimension n − codim, or None for a product that vanished for
    /// degree reasons.
    pub fn dim(&self) -> Option<usize> {
        self.n.checked_sub(self.codim)
    }

    pub fn coeff(&self, s: Subset) -> BigUint {
        self.coeffs.get(&s).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Subset, &BigUint)> {
        self.coeffs.iter().map(|(s, a)| (*s, a))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, k: &BigUint) -> MultiClass {
        let coeffs = if k.is_zero() {
            BTreeMap::new()
        } else {
            self.coeffs.iter().map(|(s, a)| (*s, a * k)).collect()
        };
        MultiClass { n: self.n, codim: self.codim, coeffs }
    }

    pub fn add(&self, o: &MultiClass) -> Result<MultiClass> {
        self.same_n(o)?;
        if !self.is_zero() && !o.is_zero() && self.codim != o.codim {
            return Err(Error::InvalidInput("sum of classes of different codimension".into()));
        }
        let codim = if self.is_zero() { o.codim } else { self.codim };
        let terms = self.coeffs.iter().chain(o.coeffs.iter()).map(|(s, a)| (*s, a.clone()));
        MultiClass::new(self.n, codim, terms)
    }

    fn same_n(&self, o: &MultiClass) -> Result<()> {
        if self.n != o.n {
            return Err(Error::InvalidInput(format!("classes on (ℙ¹)^{} and (ℙ¹)^{}", self.n, o.n)));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .coeffs
            .iter()
            .map(|(s, a)| json!({"I": indices_of(*s), "a": a.to_string()}))
            .collect();
        json!({"n": self.n, "codim": self.codim, "terms": terms})
    }

    pub fn from_json(v: &Value) -> Result<MultiClass> {
        let bad = |m: &str| Error::InvalidInput(format!("class JSON: {m}"));
        let n = v["n"].as_u64().ok_or_else(|| bad("missing n"))? as usize;
        let codim = v["codim"].as_u64().unwrap_or(0) as usize;
        let mut terms = Vec::new();
        for t in v["terms"].as_array().ok_or_else(|| bad("missing terms"))? {
            let idx: Vec<usize> = t["I"]
                .as_array()
                .ok_or_else(|| bad("missing I"))?
                .iter()
                .map(|x| x.as_u64().map(|u| u as usize))
                .collect::<Option<_>>()
                .ok_or_else(|| bad("indices must be integers"))?;
            if idx.iter().any(|&i| i == 0 || i > n) {
                return Err(bad("index out of range"));
            }
            let a = match &t["a"] {
                Value::String(s) => s.parse::<BigUint>().map_err(|_| bad("coefficient"))?,
                Value::Number(x) => BigUint::from(x.as_u64().ok_or_else(|| bad("coefficient"))?),
                _ => return Err(bad("coefficient")),
            };
            terms.push((subset_of(&idx), a));
        }
        MultiClass::new(n, codim, terms)
    }
}

/// Product in ℤ[ε]/(ε_i²).
pub fn chow_mul(u: &MultiClass, v: &MultiClass) -> Result<MultiClass> {
    u.same_n(v)?;
    let mut out: BTreeMap<Subset, BigUint> = BTreeMap::new();
    for (i, a) in &u.coeffs {
        for (j, b) in &v.coeffs {
            if i & j == 0 {
                *out.entry(i | j).or_default() += a * b;
            }
        }
    }
    Ok(MultiClass { n: u.n, codim: u.codim + v.codim, coeffs: out })
}

fn require_pure(z: &MultiClass) -> Result<usize> {
    z.dim().ok_or_else(|| Error::InvalidInput(format!("codimension {} exceeds n = {}", z.codim, z.n)))
}

/// [Z]·(ε₁+…+ε_n)^d = d!·Σ_{|I|=n−d} a_I.
pub fn very_ample_degree(z: &MultiClass) -> Result<BigUint> {
    let d = require_pure(z)?;
    let sum: BigUint = z.coeffs.values().sum();
    Ok(factorial(d as u64) * sum)
}

/// [T_l Z] = (l+1)ⁿ [Z].
pub fn hecke_pushforward(z: &MultiClass, l: u64) -> MultiClass {
    z.scale(&BigUint::from(l + 1).pow(z.n as u32))
}

/// c·Σ_i ε_i with c = (l+1)ⁿ·d!·Σ_{|I|=n−d} a_I(Z).
pub fn hypersurface_bound(z: &MultiClass, l: u64) -> Result<MultiClass> {
    let c = BigUint::from(l + 1).pow(z.n as u32) * very_ample_degree(z)?;
    let terms = (0..z.n).map(|i| (1u64 << i, c.clone()));
    MultiClass::new(z.n, 1, terms)
}

/// Coefficient of ε₁⋯ε_n in u·v, for classes of complementary dimension.
pub fn intersection_number(u: &MultiClass, v: &MultiClass) -> Result<BigUint> {
    u.same_n(v)?;
    if u.codim + v.codim != u.n {
        return Err(Error::InvalidInput(format!(
            "dimensions {} and {} are not complementary in dimension {}",
            u.n as i64 - u.codim as i64,
            v.n as i64 - v.codim as i64,
            u.n
        )));
    }
    let full = MultiClass::point(u.n).coeffs.into_keys().next().unwrap();
    Ok(chow_mul(u, v)?.coeff(full))
}

/// dim p_I(Z) for every subset I of {1..n}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionProfile {
    n: usize,
    dims: Vec<u32>,
}

impl DimensionProfile {
    /// Validates dims(∅) = 0, monotonicity and unit steps.
    pub fn new(n: usize, dims: Vec<u32>) -> Result<DimensionProfile> {
        if n == 0 || n > 24 {
            return Err(Error::InvalidInput(format!("profile size n = {n} must be in 1..=24")));
        }
        if dims.len() != 1 << n {
            return Err(Error::InvalidInput(format!("profile needs {} entries, got {}", 1 << n, dims.len())));
        }
        if dims[0] != 0 {
            return Err(Error::Validation("axiom dims(∅) = 0 violated".into()));
        }
        for s in 0..dims.len() {
            for i in 0..n {
                let t = s | 1 << i;
                if t == s {
                    continue;
                }
                if dims[t] < dims[s] {
                    return Err(Error::Validation(format!(
                        "monotonicity violated: dims({:?}) < dims({:?})",
                        indices_of(t as u64),
                        indices_of(s as u64)
                    )));
                }
                if dims[t] > dims[s] + 1 {
                    return Err(Error::Validation(format!(
                        "unit step violated: dims({:?}) > dims({:?}) + 1",
                        indices_of(t as u64),
                        indices_of(s as u64)
                    )));
                }
            }
        }
        Ok(DimensionProfile { n, dims })
    }

    /// Profile from a function on subsets.
    pub fn from_fn(n: usize, f: impl Fn(Subset) -> u32) -> Result<DimensionProfile> {
        if n == 0 || n > 24 {
            return Err(Error::InvalidInput(format!("profile size n = {n} must be in 1..=24")));
        }
        DimensionProfile::new(n, (0..1u64 << n).map(f).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self, s: Subset) -> u32 {
        self.dims[s as usize]
    }
}

/// The I with dim p_I Z < |I| while dim p_J Z = |J| for every J ⊊ I.
pub fn minimal_subsets(p: &DimensionProfile) -> Vec<Subset> {
    let mut out = Vec::new();
    for s in 1..(1u64 << p.n) {
        if p.dim(s) >= s.count_ones() {
            continue;
        }
        // with unit steps, full dimension on the maximal proper subsets
        // propagates to all smaller ones
        let minimal = (0..p.n)
            .filter(|i| s >> i & 1 == 1)
            .all(|i| {
                let t = s & !(1 << i);
                p.dim(t) == t.count_ones()
            });
        if minimal {
            out.push(s);
        }
    }
    out
}

/// True iff every minimal I has |I| ≤ 2 and a positive verdict.
pub fn specialness_criterion(minimal: &[Subset], verdicts: &HashMap<Subset, bool>) -> Result<bool> {
    for s in minimal {
        if s.count_ones() <= 2 && !verdicts.contains_key(s) {
            return Err(Error::InvalidInput(format!("missing verdict for {:?}", indices_of(*s))));
        }
    }
    Ok(minimal.iter().all(|s| s.count_ones() <= 2 && verdicts[s]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(d1: u64, d2: u64) -> MultiClass {
        MultiClass::from_u64(2, &[(&[1], d2), (&[2], d1)]).unwrap()
    }

    #[test]
    fn ring_examples() {
        let e1 = MultiClass::from_u64(2, &[(&[1], 1)]).unwrap();
        assert!(chow_mul(&e1, &e1).unwrap().is_zero());
        let z = curve(3, 5);
        let sq = chow_mul(&z, &z).unwrap();
        assert_eq!(sq.coeff(0b11), BigUint::from(30u32));
        assert_eq!(chow_mul(&MultiClass::unit(2), &z).unwrap(), z);
    }

    #[test]
    fn degree_examples() {
        assert_eq!(very_ample_degree(&MultiClass::point(3)).unwrap(), BigUint::one());
        assert_eq!(very_ample_degree(&curve(3, 5)).unwrap(), BigUint::from(8u32));
        let s = MultiClass::from_u64(3, &[(&[1], 2), (&[2], 3), (&[3], 5)]).unwrap();
        assert_eq!(very_ample_degree(&s).unwrap(), BigUint::from(20u32));
        assert!(MultiClass::from_u64(3, &[(&[1], 2), (&[2, 3], 3)]).is_err());
    }

    #[test]
    fn pushforward_and_bound() {
        let p = MultiClass::point(1);
        assert_eq!(hecke_pushforward(&p, 2).coeff(1), BigUint::from(3u32));
        let z = curve(1, 1);
        let t = hecke_pushforward(&z, 2);
        assert_eq!(t.coeff(1), BigUint::from(9u32));
        let h = hypersurface_bound(&z, 2).unwrap();
        assert_eq!(h.coeff(1), BigUint::from(18u32));
        assert_eq!(h.coeff(2), BigUint::from(18u32));
        let s = MultiClass::from_u64(3, &[(&[1], 2), (&[2], 3), (&[3], 5)]).unwrap();
        assert_eq!(hypersurface_bound(&s, 5).unwrap().coeff(4), BigUint::from(4320u32));
        let zero = MultiClass::new(2, 1, []).unwrap();
        assert!(hecke_pushforward(&zero, 7).is_zero());
        assert_eq!(hypersurface_bound(&zero, 7).unwrap().is_zero(), true);
    }

    #[test]
    fn intersections() {
        let z = curve(1, 1);
        let t = hecke_pushforward(&z, 2);
        assert_eq!(intersection_number(&z, &t).unwrap(), BigUint::from(18u32));
        assert_eq!(intersection_number(&MultiClass::point(3), &MultiClass::unit(3)).unwrap(), BigUint::one());
        assert!(intersection_number(&z, &MultiClass::unit(2)).is_err());
    }

    #[test]
    fn minimal_subset_examples() {
        let point = DimensionProfile::from_fn(2, |_| 0).unwrap();
        assert_eq!(minimal_subsets(&point), vec![0b01, 0b10]);
        let graph = DimensionProfile::from_fn(2, |s| (s != 0) as u32).unwrap();
        assert_eq!(minimal_subsets(&graph), vec![0b11]);
        let hyper = DimensionProfile::from_fn(3, |s| s.count_ones().min(2)).unwrap();
        assert_eq!(minimal_subsets(&hyper), vec![0b111]);
        assert!(matches!(DimensionProfile::from_fn(2, |s| if s == 3 { 0 } else { 1 }), Err(Error::Validation(_))));
        assert!(matches!(DimensionProfile::from_fn(2, |s| 2 * (s == 3) as u32), Err(Error::Validation(_))));
    }

    #[test]
    fn criterion_examples() {
        let v = HashMap::new();
        assert!(!specialness_criterion(&[0b111], &v).unwrap());
        let v = HashMap::from([(0b01, true), (0b10, true)]);
        assert!(specialness_criterion(&[0b01, 0b10], &v).unwrap());
        let v = HashMap::from([(0b11, false)]);
        assert!(!specialness_criterion(&[0b11], &v).unwrap());
        assert!(specialness_criterion(&[0b11], &HashMap::new()).is_err());
    }

    #[test]
    fn json_round_trip() {
        let s = MultiClass::from_u64(3, &[(&[1, 2], 7), (&[2, 3], 11)]).unwrap();
        let back = MultiClass::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
    }
}
