//! Imaginary quadratic orders, positive definite binary quadratic forms and
//! their class groups under Gauss composition.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{factorize, is_prime, kronecker};
use crate::error::{Error, Result};

/// The order of discriminant `disc = conductor² · fund_disc`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ImaginaryQuadraticOrder {
    pub disc: BigInt,
    pub fund_disc: BigInt,
    pub conductor: BigInt,
}

impl ImaginaryQuadraticOrder {
    pub fn new(disc: &BigInt) -> Result<Self> {
        let (fund_disc, conductor) = conductor_decompose(disc)?;
        Ok(ImaginaryQuadraticOrder { disc: disc.clone(), fund_disc, conductor })
    }

    pub fn is_maximal(&self) -> bool {
        self.conductor.is_one()
    }
}

pub fn validate_disc(d: &BigInt) -> Result<()> {
    let r = d.mod_floor(&BigInt::from(4));
    if !d.is_negative() || !(r.is_zero() || r.is_one()) {
        return Err(Error::InvalidDiscriminant(d.to_string()));
    }
    Ok(())
}

/// Writes `d = f²·d_K` with `d_K` fundamental.
pub fn conductor_decompose(d: &BigInt) -> Result<(BigInt, BigInt)> {
    validate_disc(d)?;
    let n = d
        .magnitude()
        .to_u64()
        .ok_or_else(|| Error::Resource(format!("factoring |D| = {} exceeds 64 bits", d.magnitude())))?;
    let mut f0 = 1u64;
    let mut core = 1u64;
    for (p, e) in factorize(n) {
        f0 *= p.pow(e / 2);
        if e % 2 == 1 {
            core *= p;
        }
    }
    let d0 = -(core as i128);
    if d0.rem_euclid(4) == 1 {
        Ok((BigInt::from(d0), BigInt::from(f0)))
    } else {
        // d0 ≡ 2, 3 mod 4: the fundamental discriminant is 4·d0
        Ok((BigInt::from(4 * d0), BigInt::from(f0 / 2)))
    }
}

/// Whether `d` is a fundamental discriminant.
pub fn is_fundamental(d: &BigInt) -> bool {
    match conductor_decompose(d) {
        Ok((_, f)) => f.is_one(),
        Err(_) => false,
    }
}

/// Whether the prime `l` splits in the order of discriminant `d`, i.e.
/// the Kronecker symbol (d|l) equals 1.
pub fn is_split(l: u64, d: &BigInt) -> Result<bool> {
    validate_disc(d)?;
    if !is_prime(l) {
        return Err(Error::NotPrime(l.to_string()));
    }
    Ok(kronecker(d, &BigInt::from(l)) == 1)
}

/// The form a·x² + b·xy + c·y².
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadraticForm {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

impl QuadraticForm {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        QuadraticForm { a: a.into(), b: b.into(), c: c.into() }
    }

    pub fn disc(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c).is_one()
    }

    pub fn is_reduced(&self) -> bool {
        let ab = self.b.abs();
        if !(ab <= self.a && self.a <= self.c) {
            return false;
        }
        if (ab == self.a || self.a == self.c) && self.b.is_negative() {
            return false;
        }
        true
    }

    /// The principal form of discriminant d.
    pub fn principal(d: &BigInt) -> Result<Self> {
        validate_disc(d)?;
        let b = if d.is_even() { BigInt::zero() } else { BigInt::one() };
        let c = (&b * &b - d) / 4;
        Ok(QuadraticForm { a: BigInt::one(), b, c })
    }

    /// (a, −b, c), the inverse class.
    pub fn inverse(&self) -> Self {
        QuadraticForm { a: self.a.clone(), b: -&self.b, c: self.c.clone() }.reduced_unchecked()
    }

    fn check_definite(&self) -> Result<BigInt> {
        let d = self.disc();
        if !d.is_negative() {
            return Err(Error::InvalidForm(format!("{self} has non-negative discriminant {d}")));
        }
        if !self.a.is_positive() {
            return Err(Error::InvalidForm(format!("{self} is not positive definite")));
        }
        Ok(d)
    }

    /// The reduced form equivalent to this one.
    pub fn reduce(&self) -> Result<Self> {
        self.check_definite()?;
        Ok(self.reduced_unchecked())
    }

    fn reduced_unchecked(&self) -> Self {
        let d = self.disc();
        let mut f = self.clone();
        loop {
            f = f.normalized(&d);
            if f.a > f.c {
                f = QuadraticForm { a: f.c.clone(), b: -&f.b, c: f.a.clone() };
                continue;
            }
            if f.a == f.c && f.b.is_negative() {
                f.b = -f.b;
            }
            return f;
        }
    }

    /// Translate so that −a < b ≤ a.
    fn normalized(&self, d: &BigInt) -> Self {
        let two_a: BigInt = &self.a * 2;
        // k = ceil((b − a) / 2a)
        let k = (&self.b - &self.a).div_ceil(&two_a);
        let b = &self.b - &two_a * &k;
        let c = (&b * &b - d) / (&self.a * 4);
        QuadraticForm { a: self.a.clone(), b, c }
    }

    /// Gauss composition (Dirichlet's method) followed by reduction.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let d = self.check_definite()?;
        if other.check_definite()? != d {
            return Err(Error::InvalidForm(format!(
                "cannot compose {self} and {other}: discriminants differ"
            )));
        }
        let (f1, f2) = if self.a > other.a { (other, self) } else { (self, other) };
        let s: BigInt = (&f1.b + &f2.b) / 2;
        let n = &f2.b - &s;
        let (y1, dd) = if (&f2.a % &f1.a).is_zero() {
            (BigInt::zero(), f1.a.clone())
        } else {
            let e = f2.a.extended_gcd(&f1.a);
            (e.x, e.gcd)
        };
        let (x2, y2, d1): (BigInt, BigInt, BigInt) = if (&s % &dd).is_zero() {
            (BigInt::zero(), -BigInt::one(), dd.clone())
        } else {
            let e = s.extended_gcd(&dd);
            (e.x, -e.y, e.gcd)
        };
        let v1 = &f1.a / &d1;
        let v2 = &f2.a / &d1;
        let r = (&y1 * &y2 * &n - &x2 * &f2.c).mod_floor(&v1);
        let b3 = &f2.b + &v2 * &r * 2;
        let a3 = &v1 * &v2;
        let c3 = (&b3 * &b3 - &d) / (&a3 * 4);
        let out = QuadraticForm { a: a3, b: b3, c: c3 };
        debug_assert_eq!(out.disc(), d);
        Ok(out.reduced_unchecked())
    }

    pub fn pow(&self, mut e: u64) -> Result<Self> {
        let mut base = self.reduce()?;
        let mut acc = QuadraticForm::principal(&self.disc())?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base)?;
            }
            base = base.compose(&base)?;
            e >>= 1;
        }
        Ok(acc)
    }
}

/// Primitive reduced forms of discriminant d, ordered by (a, b).
pub fn reduced_forms(d: &BigInt) -> Result<Vec<QuadraticForm>> {
    validate_disc(d)?;
    let amax = (d.magnitude() / 3u32).sqrt();
    let amax = BigInt::from(amax);
    let mut out = Vec::new();
    let mut a = BigInt::one();
    let parity = if d.is_even() { 0 } else { 1 };
    while a <= amax {
        let mut b: BigInt = -&a + 1;
        while b <= a {
            if (b.mod_floor(&BigInt::from(2)).to_i32().unwrap()) == parity {
                let num: BigInt = &b * &b - d;
                let four_a: BigInt = &a * 4;
                if (&num % &four_a).is_zero() {
                    let c = num / &four_a;
                    let f = QuadraticForm { a: a.clone(), b: b.clone(), c };
                    if f.is_reduced() && f.is_primitive() {
                        out.push(f);
                    }
                }
            }
            b += 1;
        }
        a += 1;
    }
    Ok(out)
}

/// The form class group Pic(O_D).
#[derive(Clone, Debug)]
pub struct FormClassGroup {
    pub order: ImaginaryQuadraticOrder,
    pub classes: Vec<QuadraticForm>,
    index: HashMap<QuadraticForm, usize>,
    /// Generators (as class indices) found during closure, with the
    /// relative order of each over the subgroup generated by its
    /// predecessors.
    pub generators: Vec<(usize, u64)>,
    /// Invariant factors d₁ | d₂ | … (all > 1).
    pub structure: Vec<u64>,
}

/// Builds the class group by closing the reduced forms under composition.
pub fn class_group(d: &BigInt) -> Result<FormClassGroup> {
    let order = ImaginaryQuadraticOrder::new(d)?;
    let forms = reduced_forms(d)?;
    let identity = QuadraticForm::principal(d)?;

    // subgroup elements with exponent vectors over the generators so far
    let mut members: HashMap<QuadraticForm, Vec<i64>> = HashMap::new();
    members.insert(identity.clone(), Vec::new());
    let mut gens: Vec<QuadraticForm> = Vec::new();
    let mut rel_orders: Vec<u64> = Vec::new();
    let mut relations: Vec<Vec<i64>> = Vec::new();

    for g in &forms {
        if members.contains_key(g) {
            continue;
        }
        let t = gens.len();
        // relative order of g over the current subgroup
        let mut k = 1u64;
        let mut gk = g.clone();
        let tail = loop {
            if let Some(v) = members.get(&gk) {
                break v.clone();
            }
            gk = gk.compose(g)?;
            k += 1;
        };
        let mut rel = vec![0i64; t + 1];
        for (i, e) in tail.iter().enumerate() {
            rel[i] = -e;
        }
        rel[t] = k as i64;
        relations.push(rel);

        let old: Vec<(QuadraticForm, Vec<i64>)> =
            members.iter().map(|(f, v)| (f.clone(), v.clone())).collect();
        let mut power = identity.clone();
        for i in 1..k {
            power = power.compose(g)?;
            for (f, v) in &old {
                let mut nv = v.clone();
                nv.resize(t + 1, 0);
                nv[t] = i as i64;
                members.insert(power.compose(f)?, nv);
            }
        }
        for v in members.values_mut() {
            v.resize(t + 1, 0);
        }
        gens.push(g.clone());
        rel_orders.push(k);
    }
    if members.len() != forms.len() {
        return Err(Error::Validation(format!(
            "composition closure has {} classes but {} reduced forms were enumerated",
            members.len(),
            forms.len()
        )));
    }
    let n = gens.len();
    let mut matrix: Vec<Vec<i64>> = relations
        .into_iter()
        .map(|mut r| {
            r.resize(n, 0);
            r
        })
        .collect();
    let structure = smith_invariants(&mut matrix);
    let index: HashMap<QuadraticForm, usize> =
        forms.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
    let generators = gens
        .iter()
        .zip(&rel_orders)
        .map(|(g, &k)| (index[g], k))
        .collect();
    Ok(FormClassGroup { order, classes: forms, index, generators, structure })
}

/// Invariant factors (> 1) of a square integer matrix of full rank.
fn smith_invariants(m: &mut [Vec<i64>]) -> Vec<u64> {
    let n = m.len();
    let mut diag = Vec::with_capacity(n);
    for k in 0..n {
        loop {
            // pivot: smallest nonzero entry in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in k..n {
                for j in k..n {
                    if m[i][j] != 0 && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                diag.push(0);
                break;
            };
            m.swap(k, pi);
            for row in m.iter_mut() {
                row.swap(k, pj);
            }
            let p = m[k][k];
            let mut clean = true;
            for i in k + 1..n {
                let q = m[i][k].div_euclid(p);
                if q != 0 {
                    for j in k..n {
                        m[i][j] -= q * m[k][j];
                    }
                }
                if m[i][k] != 0 {
                    clean = false;
                }
            }
            for j in k + 1..n {
                let q = m[k][j].div_euclid(p);
                if q != 0 {
                    for row in m.iter_mut().skip(k) {
                        row[j] -= q * row[k];
                    }
                }
                if m[k][j] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the remaining block
            let bad = (k + 1..n).flat_map(|i| (k + 1..n).map(move |j| (i, j))).find(|&(i, j)| m[i][j] % p != 0);
            if let Some((i, _)) = bad {
                for j in k..n {
                    m[k][j] += m[i][j];
                }
                continue;
            }
            diag.push(p.unsigned_abs() as i64);
            break;
        }
    }
    let mut out: Vec<u64> = diag.into_iter().filter(|&d| d > 1).map(|d| d as u64).collect();
    out.sort_unstable();
    out
}

impl FormClassGroup {
    pub fn disc(&self) -> &BigInt {
        &self.order.disc
    }

    pub fn h(&self) -> usize {
        self.classes.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn index_of(&self, f: &QuadraticForm) -> Option<usize> {
        self.index.get(&f.reduce().ok()?).copied()
    }

    pub fn compose(&self, i: usize, j: usize) -> usize {
        let f = self.classes[i].compose(&self.classes[j]).expect("same discriminant");
        self.index[&f]
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.index[&self.classes[i].inverse()]
    }

    /// Order of a class in the group.
    pub fn element_order(&self, i: usize) -> u64 {
        let mut k = 1;
        let mut cur = i;
        while cur != self.identity() {
            cur = self.compose(cur, i);
            k += 1;
        }
        k
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn reduction_examples() {
        let f = QuadraticForm::new(1, 1, 6).reduce().unwrap();
        assert_eq!(f, QuadraticForm::new(1, 1, 6));
        let f = QuadraticForm::new(3, 7, 5).reduce().unwrap();
        assert_eq!(f, QuadraticForm::new(1, 1, 3));
        assert_eq!(f.disc(), d(-11));
        assert!(QuadraticForm::new(1, 0, -5).reduce().is_err());
        assert!(QuadraticForm::new(-1, 0, -5).reduce().is_err());
        assert_eq!(QuadraticForm::new(2, -2, 3).reduce().unwrap(), QuadraticForm::new(2, 2, 3));
        assert_eq!(QuadraticForm::new(3, -1, 3).reduce().unwrap(), QuadraticForm::new(3, 1, 3));
    }

    #[test]
    fn class_group_examples() {
        let g = class_group(&d(-4)).unwrap();
        assert_eq!(g.classes, vec![QuadraticForm::new(1, 0, 1)]);
        let g = class_group(&d(-23)).unwrap();
        assert_eq!(g.h(), 3);
        assert_eq!(g.structure, vec![3]);
        let mut fs = g.classes.clone();
        fs.sort();
        assert_eq!(
            fs,
            vec![QuadraticForm::new(1, 1, 6), QuadraticForm::new(2, -1, 3), QuadraticForm::new(2, 1, 3)]
        );
        assert_eq!(class_group(&d(-12)).unwrap().h(), 1);
        assert!(class_group(&d(-5)).is_err());
        assert!(class_group(&d(8)).is_err());
    }

    #[test]
    fn non_cyclic_structure() {
        // Pic of discriminant −420 is (ℤ/2)^3; −56 is cyclic of order 4
        assert_eq!(class_group(&d(-420)).unwrap().structure, vec![2, 2, 2]);
        assert_eq!(class_group(&d(-56)).unwrap().structure, vec![4]);
        // −3299 has class group ℤ/3 × ℤ/9
        assert_eq!(class_group(&d(-3299)).unwrap().structure, vec![3, 9]);
    }

    #[test]
    fn conductor_examples() {
        assert_eq!(conductor_decompose(&d(-4)).unwrap(), (d(-4), d(1)));
        assert_eq!(conductor_decompose(&d(-12)).unwrap(), (d(-3), d(2)));
        assert_eq!(conductor_decompose(&d(-28)).unwrap(), (d(-7), d(2)));
        assert_eq!(conductor_decompose(&d(-16)).unwrap(), (d(-4), d(2)));
        assert_eq!(conductor_decompose(&d(-63)).unwrap(), (d(-7), d(3)));
        assert_eq!(conductor_decompose(&d(-20)).unwrap(), (d(-20), d(1)));
        assert!(conductor_decompose(&d(-6)).is_err());
    }

    #[test]
    fn split_examples() {
        assert!(is_split(5, &d(-4)).unwrap());
        assert!(!is_split(3, &d(-4)).unwrap());
        assert!(!is_split(2, &d(-4)).unwrap());
        assert!(is_split(2, &d(-23)).unwrap());
        assert!(matches!(is_split(4, &d(-4)), Err(Error::NotPrime(_))));
    }

    #[test]
    fn composition_group_laws() {
        for disc in [-23i64, -47, -56, -71, -420, -3299] {
            let g = class_group(&d(disc)).unwrap();
            for i in 0..g.h() {
                assert_eq!(g.compose(i, g.identity()), i);
                assert_eq!(g.compose(i, g.inverse(i)), g.identity());
                for j in 0..g.h() {
                    assert_eq!(g.compose(i, j), g.compose(j, i));
                }
            }
            let order: u64 = g.structure.iter().product();
            assert_eq!(order as usize, g.h());
        }
    }
}
