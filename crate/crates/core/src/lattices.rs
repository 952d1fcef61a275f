//! Lattices in ℚ² up to scaling, their relative positions, Bruhat–Tits
//! tree data per prime, centers of triples and labels of curves cut out by
//! isogeny conditions.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{euler_phi, is_prime, omega, psi};
use crate::chowdeg::MultiClass;
use crate::error::{Error, Result};
use crate::poly::parse_rational;

/// A lattice class in column Hermite normal form [[a, b], [0, d]] with
/// a, d > 0, 0 ≤ b < a and gcd(a, b, d) = 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeClass {
    pub a: BigInt,
    pub b: BigInt,
    pub d: BigInt,
}

/// A 2×2 rational matrix, rows first; its columns span the lattice.
pub type Basis = [[BigRational; 2]; 2];

impl fmt::Display for LatticeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{};0,{}", self.a, self.b, self.d)
    }
}

impl LatticeClass {
    pub fn standard() -> LatticeClass {
        LatticeClass { a: BigInt::one(), b: BigInt::zero(), d: BigInt::one() }
    }

    pub fn basis(&self) -> Basis {
        let r = |x: &BigInt| BigRational::from_integer(x.clone());
        [[r(&self.a), r(&self.b)], [BigRational::zero(), r(&self.d)]]
    }

    /// The class of B·M for an integer matrix M (rows first).
    pub fn transform(&self, m: [[i64; 2]; 2]) -> Result<LatticeClass> {
        let b = self.basis();
        let mi = |i: usize, j: usize| BigRational::from_integer(BigInt::from(m[i][j]));
        let prod = |i: usize, j: usize| &b[i][0] * mi(0, j) + &b[i][1] * mi(1, j);
        canonicalize(&[[prod(0, 0), prod(0, 1)], [prod(1, 0), prod(1, 1)]])
    }

    /// The p + 1 neighbours in the p-adic tree (index-p sublattices).
    pub fn neighbours(&self, p: u64) -> Vec<LatticeClass> {
        let p = p as i64;
        let mut out: Vec<LatticeClass> = (0..p).map(|k| self.transform([[p, k], [0, 1]]).unwrap()).collect();
        out.push(self.transform([[1, 0], [0, p]]).unwrap());
        out
    }
}

/// Parses "a,b;c,d" (rows) with integer, decimal or a/b entries.
pub fn parse_basis(s: &str) -> Result<Basis> {
    let bad = || Error::InvalidInput(format!("basis '{s}': expected 'a,b;c,d'"));
    let rows: Vec<&str> = s.split(';').collect();
    if rows.len() != 2 {
        return Err(bad());
    }
    let mut out: Vec<[BigRational; 2]> = Vec::new();
    for r in rows {
        let e: Vec<&str> = r.split(',').collect();
        if e.len() != 2 {
            return Err(bad());
        }
        let q = |t: &str| parse_rational(t).map(|(n, d)| BigRational::new(n, d)).ok_or_else(bad);
        out.push([q(e[0])?, q(e[1])?]);
    }
    let r1 = out.pop().unwrap();
    let r0 = out.pop().unwrap();
    Ok([r0, r1])
}

fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    (e.gcd, e.x, e.y)
}

/// HNF (a, b, d) of the lattice spanned by the given integer vectors,
/// or None when they do not span a rank-2 lattice.
fn hnf_span(vectors: &[(BigInt, BigInt)]) -> Option<(BigInt, BigInt, BigInt)> {
    let mut pivot: Option<(BigInt, BigInt)> = None;
    let mut a = BigInt::zero();
    for (vx, vy) in vectors {
        match &pivot {
            None if vy.is_zero() => a = a.gcd(vx),
            None => pivot = Some((vx.clone(), vy.clone())),
            Some(_) if vy.is_zero() => a = a.gcd(vx),
            Some((px, py)) => {
                let (g, s, t) = ext_gcd(py, vy);
                let np = (&s * px + &t * vx, g.clone());
                let wx = (vy / &g) * px - (py / &g) * vx;
                a = a.gcd(&wx);
                pivot = Some(np);
            }
        }
    }
    let (mut px, mut py) = pivot?;
    if a.is_zero() {
        return None;
    }
    if py.is_negative() {
        px = -px;
        py = -py;
    }
    let b = px.mod_floor(&a);
    Some((a, b, py))
}

fn lcm_denominators<'a>(entries: impl Iterator<Item = &'a BigRational>) -> BigInt {
    entries.fold(BigInt::one(), |l, q| l.lcm(q.denom()))
}

fn integer_columns(m: &Basis) -> Vec<(BigInt, BigInt)> {
    let l = lcm_denominators(m.iter().flatten());
    let z = |q: &BigRational| (q * BigRational::from_integer(l.clone())).to_integer();
    vec![(z(&m[0][0]), z(&m[1][0])), (z(&m[0][1]), z(&m[1][1]))]
}

fn from_hnf(a: BigInt, b: BigInt, d: BigInt) -> LatticeClass {
    let g = a.gcd(&b).gcd(&d);
    LatticeClass { a: a / &g, b: b / &g, d: d / &g }
}

/// Canonical representative of the class of the lattice spanned by the
/// columns of `m`.
pub fn canonicalize(m: &Basis) -> Result<LatticeClass> {
    let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
    if det.is_zero() {
        return Err(Error::InvalidInput("singular basis".into()));
    }
    let (a, b, d) = hnf_span(&integer_columns(m)).expect("nonsingular basis spans a lattice");
    Ok(from_hnf(a, b, d))
}

fn inverse(m: &Basis) -> Basis {
    let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
    [
        [&m[1][1] / &det, -&m[0][1] / &det],
        [-&m[1][0] / &det, &m[0][0] / &det],
    ]
}

fn mul(x: &Basis, y: &Basis) -> Basis {
    let e = |i: usize, j: usize| &x[i][0] * &y[0][j] + &x[i][1] * &y[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// Integer transition matrix from L1 to a scaled L2, divided by its first
/// elementary divisor, so that its columns span a sublattice of L1 with
/// cyclic quotient. Returned as columns, with the cyclic index.
fn primitive_transition(l1: &LatticeClass, l2: &LatticeClass) -> (Vec<(BigInt, BigInt)>, BigInt) {
    let t = mul(&inverse(&l1.basis()), &l2.basis());
    let cols = integer_columns(&t);
    let e1 = cols.iter().fold(BigInt::zero(), |g, (x, y)| g.gcd(x).gcd(y));
    let cols: Vec<(BigInt, BigInt)> = cols.into_iter().map(|(x, y)| (x / &e1, y / &e1)).collect();
    let det = (&cols[0].0 * &cols[1].1 - &cols[1].0 * &cols[0].1).abs();
    (cols, det)
}

/// The cyclic index e₂/e₁ of the elementary divisors of the transition.
pub fn relative_position(l1: &LatticeClass, l2: &LatticeClass) -> BigInt {
    primitive_transition(l1, l2).1
}

/// Distance in the Bruhat–Tits tree at p.
pub fn tree_distance(l1: &LatticeClass, l2: &LatticeClass, p: u64) -> Result<u32> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let n = relative_position(l1, l2);
    let pb = BigInt::from(p);
    let mut k = 0;
    let mut n = n;
    while (&n % &pb).is_zero() {
        n /= &pb;
        k += 1;
    }
    Ok(k)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Center {
    pub center: LatticeClass,
    pub n: [BigInt; 3],
}

/// The class C with relative_position(C, L_i) = n_i and n_{i,j} = n_i n_j.
pub fn center_of_three(l1: &LatticeClass, l2: &LatticeClass, l3: &LatticeClass) -> Result<Center> {
    let n12 = relative_position(l1, l2);
    let n13 = relative_position(l1, l3);
    let n23 = relative_position(l2, l3);
    let sq = &n12 * &n13;
    if !(&sq % &n23).is_zero() {
        return Err(Error::Validation(format!("positions ({n12}, {n13}, {n23}) are not those of a tree triple")));
    }
    let sq = sq / &n23;
    let n1 = sq.sqrt();
    if &n1 * &n1 != sq {
        return Err(Error::Validation(format!("positions ({n12}, {n13}, {n23}) are not those of a tree triple")));
    }
    // C = L2' + n1·L1 where L2' ⊂ L1 has cyclic index n12
    let (mut cols, _) = primitive_transition(l1, l2);
    cols.push((n1.clone(), BigInt::zero()));
    cols.push((BigInt::zero(), n1.clone()));
    let (a, b, d) = hnf_span(&cols).expect("full rank");
    let s: Basis = [
        [BigRational::from_integer(a), BigRational::from_integer(b)],
        [BigRational::zero(), BigRational::from_integer(d)],
    ];
    let c = canonicalize(&mul(&l1.basis(), &s))?;
    let out = [n1, relative_position(&c, l2), relative_position(&c, l3)];
    if out[0] != relative_position(&c, l1) || &out[0] * &out[1] != n12 || &out[0] * &out[2] != n13 || &out[1] * &out[2] != n23
    {
        return Err(Error::Validation("center identities failed".into()));
    }
    Ok(Center { center: c, n: out })
}

/// Median in the p-adic tree by breadth-first search from L1, within the
/// given depth. Only the p-part of the lattices moves.
pub fn tree_median_bfs(ls: [&LatticeClass; 3], p: u64, depth: u32) -> Result<Option<LatticeClass>> {
    let mut seen: HashSet<LatticeClass> = HashSet::new();
    let mut queue = VecDeque::from([(ls[0].clone(), 0u32)]);
    seen.insert(ls[0].clone());
    let mut best: Option<(u32, LatticeClass)> = None;
    while let Some((v, k)) = queue.pop_front() {
        let mut total = 0;
        for l in ls {
            total += tree_distance(&v, l, p)?;
        }
        if best.as_ref().is_none_or(|(t, _)| total < *t) {
            best = Some((total, v.clone()));
        }
        if k < depth {
            for w in v.neighbours(p) {
                if seen.insert(w.clone()) {
                    queue.push_back((w, k + 1));
                }
            }
        }
    }
    Ok(best.map(|(_, v)| v))
}

/// A label (n₁, …, n_k): E with cyclic subgroups H_i ≅ ℤ/n_i pairwise
/// meeting trivially.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialCurveLabel(Vec<u64>);

impl SpecialCurveLabel {
    pub fn new(ns: Vec<u64>) -> Result<SpecialCurveLabel> {
        if ns.is_empty() || ns.contains(&0) {
            return Err(Error::InvalidInput("label entries must be positive and non-empty".into()));
        }
        Ok(SpecialCurveLabel(ns))
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }
}

/// n_{i,j} = n_i n_j off the diagonal, 1 on it.
pub fn label_pairwise(label: &SpecialCurveLabel) -> Vec<Vec<u64>> {
    let ns = &label.0;
    (0..ns.len())
        .map(|i| (0..ns.len()).map(|j| if i == j { 1 } else { ns[i] * ns[j] }).collect())
        .collect()
}

/// The cyclic subgroups of order n in (ℤ/M)², each as a sorted element
/// list (elements encoded x·M + y).
fn cyclic_subgroups(n: u64, m: u64) -> Vec<Vec<u64>> {
    let s = m / n;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if x.gcd(&y).gcd(&n) != 1 {
                continue;
            }
            let mut elems: Vec<u64> = (0..n).map(|k| ((k * x % n) * s) * m + (k * y % n) * s).collect();
            elems.sort_unstable();
            if seen.insert(elems.clone()) {
                out.push(elems);
            }
        }
    }
    out
}

const MAX_LABEL_TUPLES: u64 = 50_000_000;

/// Number of tuples (H₁, …, H_k) of cyclic subgroups of E, H_i of order
/// n_i, meeting pairwise in {0}.
pub fn label_tuple_count(label: &SpecialCurveLabel) -> Result<u64> {
    let ns = &label.0;
    let m = ns.iter().fold(1u64, |l, &n| l.lcm(&n));
    if m > 2000 {
        return Err(Error::Resource(format!("label modulus {m} exceeds 2000")));
    }
    let bound: f64 = ns.iter().map(|&n| psi(n) as f64).product();
    if bound > MAX_LABEL_TUPLES as f64 {
        return Err(Error::Resource(format!("label enumeration of about {bound:.0} tuples")));
    }
    let subs: Vec<Vec<HashSet<u64>>> = ns
        .iter()
        .map(|&n| cyclic_subgroups(n, m).into_iter().map(|v| v.into_iter().collect()).collect())
        .collect();
    fn rec(subs: &[Vec<HashSet<u64>>], chosen: &mut Vec<usize>, i: usize) -> u64 {
        if i == subs.len() {
            return 1;
        }
        let mut total = 0;
        for (k, h) in subs[i].iter().enumerate() {
            let ok = chosen.iter().enumerate().all(|(j, &c)| h.intersection(&subs[j][c]).count() == 1);
            if ok {
                chosen.push(k);
                total += rec(subs, chosen, i + 1);
                chosen.pop();
            }
        }
        total
    }
    Ok(rec(&subs, &mut Vec::new(), 0))
}

/// Multidegree of the image curve in ℂ^k. The degree of the projection to
/// each coordinate is the number of configurations over a fixed value of
/// that coordinate; for generic E (Aut E = {±1}, acting trivially on
/// subgroups) this is the tuple count, for every coordinate.
pub fn label_multidegree(label: &SpecialCurveLabel) -> Result<MultiClass> {
    let k = label.0.len();
    if k < 2 {
        return Err(Error::InvalidInput("label needs at least two entries".into()));
    }
    let t = label_tuple_count(label)?;
    let full: u64 = (1u64 << k) - 1;
    let terms = (0..k).map(|i| (full & !(1u64 << i), num_bigint::BigUint::from(t)));
    MultiClass::new(k, k - 1, terms)
}

/// ψ, φ and π for one n, with the inequalities used in the counting
/// argument.
#[derive(Clone, Debug, PartialEq)]
pub struct CountingRow {
    pub n: u64,
    pub psi: u64,
    pub phi: u64,
    pub pi: u32,
    /// ψ(n)/2^π(n) ≤ r·m.
    pub psi_bound: bool,
    /// φ(n)/2^π(n) ≤ r.
    pub phi_bound: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CountingReport {
    pub r: u64,
    pub m: u64,
    pub rows: Vec<CountingRow>,
    /// Every n with ψ(n)/2^π(n) ≤ r·m, found by scanning to `cutoff`.
    pub admissible: Vec<u64>,
    /// 4(rm)²: beyond it ψ(n)/2^π(n) ≥ √n/2 > rm.
    pub cutoff: u64,
    pub largest_admissible: Option<u64>,
}

fn counting_row(n: u64, r: u64, m: u64) -> CountingRow {
    let pi = omega(n);
    let (ps, ph) = (psi(n), euler_phi(n));
    CountingRow {
        n,
        psi: ps,
        phi: ph,
        pi,
        psi_bound: ps as u128 <= ((r as u128) * (m as u128)) << pi,
        phi_bound: ph as u128 <= (r as u128) << pi,
    }
}

pub fn counting_report(n_vals: &[u64], r: u64, m: u64) -> Result<CountingReport> {
    if r == 0 || m == 0 || n_vals.contains(&0) {
        return Err(Error::InvalidInput("n, r and m must be positive".into()));
    }
    let rm = r.checked_mul(m).ok_or_else(|| Error::Resource("r·m overflows".into()))?;
    let cutoff = rm
        .checked_mul(rm)
        .and_then(|x| x.checked_mul(4))
        .filter(|&c| c <= 100_000_000)
        .ok_or_else(|| Error::Resource(format!("scan cutoff 4(rm)² for rm = {rm} exceeds 10⁸")))?;
    let rows = n_vals.iter().map(|&n| counting_row(n, r, m)).collect();
    let admissible: Vec<u64> = (1..=cutoff).filter(|&n| counting_row(n, r, m).psi_bound).collect();
    let largest_admissible = admissible.last().copied();
    Ok(CountingReport { r, m, rows, admissible, cutoff, largest_admissible })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(x: i64, y: i64) -> LatticeClass {
        LatticeClass::standard().transform([[x, 0], [0, y]]).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn canonical_forms() {
        let id = [[q(1, 1), q(0, 1)], [q(0, 1), q(1, 1)]];
        assert_eq!(canonicalize(&id).unwrap(), LatticeClass::standard());
        let m = [[q(2, 1), q(1, 1)], [q(0, 1), q(1, 1)]];
        let scaled = [[q(6, 7), q(3, 7)], [q(0, 1), q(3, 7)]];
        assert_eq!(canonicalize(&m).unwrap(), canonicalize(&scaled).unwrap());
        // the columns (2,0), (1,1) span the same lattice as (1,1), (0,2)... up to unimodular moves
        let c = canonicalize(&m).unwrap();
        assert_eq!((c.a.clone(), c.b.clone(), c.d.clone()), (BigInt::from(2), BigInt::from(1), BigInt::from(1)));
        assert!(canonicalize(&[[q(1, 1), q(2, 1)], [q(2, 1), q(4, 1)]]).is_err());
    }

    #[test]
    fn positions_and_distances() {
        let l = LatticeClass::standard();
        assert_eq!(relative_position(&l, &l), BigInt::one());
        assert_eq!(relative_position(&l, &diag(2, 1)), BigInt::from(2));
        assert_eq!(relative_position(&l, &diag(4, 2)), BigInt::from(2));
        assert_eq!(tree_distance(&l, &diag(8, 1), 2).unwrap(), 3);
        assert_eq!(tree_distance(&l, &diag(8, 1), 3).unwrap(), 0);
    }

    #[test]
    fn centers() {
        let l = LatticeClass::standard();
        let c = center_of_three(&l, &l, &l).unwrap();
        assert_eq!(c.center, l);
        assert_eq!(c.n, [BigInt::one(), BigInt::one(), BigInt::one()]);
        let (l2, l3) = (diag(4, 1), diag(1, 2));
        let c = center_of_three(&l, &l2, &l3).unwrap();
        assert_eq!(c.center, l);
        assert_eq!(c.n, [BigInt::from(1), BigInt::from(4), BigInt::from(2)]);
        let c2 = center_of_three(&l3, &l, &l2).unwrap();
        assert_eq!(c2.center, l);
        assert_eq!(c2.n, [BigInt::from(2), BigInt::from(1), BigInt::from(4)]);
        let m = tree_median_bfs([&l, &l2, &l3], 2, 4).unwrap().unwrap();
        assert_eq!(m, l);
    }

    #[test]
    fn labels() {
        let l = SpecialCurveLabel::new(vec![1, 2, 3]).unwrap();
        let p = label_pairwise(&l);
        assert_eq!((p[0][1], p[0][2], p[1][2], p[1][1]), (2, 3, 6, 1));
        assert_eq!(label_pairwise(&SpecialCurveLabel::new(vec![2, 2]).unwrap())[0][1], 4);
        let d = label_multidegree(&SpecialCurveLabel::new(vec![1, 1]).unwrap()).unwrap();
        assert_eq!((d.coeff(0b01), d.coeff(0b10)), (1u32.into(), 1u32.into()));
        let d = label_multidegree(&SpecialCurveLabel::new(vec![1, 2]).unwrap()).unwrap();
        assert_eq!((d.coeff(0b01), d.coeff(0b10)), (3u32.into(), 3u32.into()));
        // two distinct 2-subgroups: the image of Y_0(4)
        assert_eq!(label_tuple_count(&SpecialCurveLabel::new(vec![2, 2]).unwrap()).unwrap(), 6);
        assert!(label_multidegree(&SpecialCurveLabel::new(vec![5]).unwrap()).is_err());
    }

    #[test]
    fn counting() {
        let r = counting_report(&[7, 12], 2, 10).unwrap();
        assert_eq!((r.rows[0].psi, r.rows[0].phi), (8, 6));
        assert_eq!((r.rows[1].psi, r.rows[1].pi, r.rows[1].phi), (24, 2, 4));
        assert_eq!(r.cutoff, 1600);
        assert!(r.admissible.iter().all(|&n| n <= r.cutoff));
        assert!(!r.admissible.is_empty());
    }
}
