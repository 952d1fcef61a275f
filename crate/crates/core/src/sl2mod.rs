//! The groups SL₂(ℤ/N)/{±1}: enumeration, low-index subgroups, normal
//! subgroups of prime-power level, the Sym² representation, Goursat data
//! and pairwise-surjectivity checks in products.

use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigUint;
use rand::Rng;

use crate::arith::{factorize, is_prime};
use crate::error::{Error, Result};

pub const DEFAULT_BUDGET: u64 = 10_000;

/// (a, b, c, d) for [[a, b], [c, d]] mod N.
pub type Mat = [u32; 4];

/// |SL₂(ℤ/N)/{±1}| = N³ Π_{p|N}(1 − 1/p²), halved when N > 2.
pub fn group_order(n: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("modulus {n} must be at least 2")));
    }
    let mut o: u128 = (n as u128).pow(3);
    for (p, _) in factorize(n) {
        let p = p as u128;
        o = o / (p * p) * (p * p - 1);
    }
    if n > 2 {
        o /= 2;
    }
    u64::try_from(o).map_err(|_| Error::Resource(format!("group order for N = {n} overflows")))
}

/// SL₂(ℤ/N)/{±1} with its elements enumerated.
#[derive(Clone, Debug)]
pub struct FiniteMatrixGroup {
    pub n: u32,
    elems: Vec<Mat>,
    index: HashMap<Mat, u32>,
    s: u32,
    t: u32,
}

fn canon(m: Mat, n: u32) -> Mat {
    let neg = m.map(|x| (n - x) % n);
    m.min(neg)
}

impl FiniteMatrixGroup {
    pub fn new(n: u64, budget: u64) -> Result<FiniteMatrixGroup> {
        let order = group_order(n)?;
        if order > budget {
            return Err(Error::Resource(format!("|G| = {order} for N = {n} exceeds the enumeration budget {budget}")));
        }
        let n32 = n as u32;
        let nn = n;
        let mut elems = Vec::with_capacity(order as usize);
        let mut index = HashMap::with_capacity(order as usize);
        for a in 0..nn {
            for b in 0..nn {
                for c in 0..nn {
                    for d in 0..nn {
                        if (a * d + nn * nn - (b * c) % nn) % nn != 1 % nn {
                            continue;
                        }
                        let m = canon([a as u32, b as u32, c as u32, d as u32], n32);
                        if !index.contains_key(&m) {
                            index.insert(m, elems.len() as u32);
                            elems.push(m);
                        }
                    }
                }
            }
        }
        debug_assert_eq!(elems.len() as u64, order);
        let s = index[&canon([0, n32 - 1, 1 % n32, 0], n32)];
        let t = index[&canon([1 % n32, 1 % n32, 0, 1 % n32], n32)];
        Ok(FiniteMatrixGroup { n: n32, elems, index, s, t })
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn elem(&self, i: u32) -> Mat {
        self.elems[i as usize]
    }

    pub fn index_of(&self, m: Mat) -> Option<u32> {
        self.index.get(&canon(m.map(|x| x % self.n), self.n)).copied()
    }

    pub fn identity(&self) -> u32 {
        self.index[&canon([1 % self.n, 0, 0, 1 % self.n], self.n)]
    }

    /// The images of [[0,−1],[1,0]] and [[1,1],[0,1]], which generate.
    pub fn generators(&self) -> [u32; 2] {
        [self.s, self.t]
    }

    pub fn mul(&self, i: u32, j: u32) -> u32 {
        let [a, b, c, d] = self.elems[i as usize].map(|x| x as u64);
        let [e, f, g, h] = self.elems[j as usize].map(|x| x as u64);
        let n = self.n as u64;
        let m = [(a * e + b * g) % n, (a * f + b * h) % n, (c * e + d * g) % n, (c * f + d * h) % n];
        self.index[&canon(m.map(|x| x as u32), self.n)]
    }

    pub fn inv(&self, i: u32) -> u32 {
        let [a, b, c, d] = self.elems[i as usize];
        let n = self.n;
        self.index[&canon([d, (n - b) % n, (n - c) % n, a], n)]
    }

    pub fn element_order(&self, i: u32) -> u32 {
        let e = self.identity();
        let mut x = i;
        let mut k = 1;
        while x != e {
            x = self.mul(x, i);
            k += 1;
        }
        k
    }

    /// The subgroup generated by `gens`, as a sorted element list.
    pub fn closure(&self, gens: &[u32]) -> Vec<u32> {
        let e = self.identity();
        let mut seen = vec![false; self.order()];
        seen[e as usize] = true;
        let mut out = vec![e];
        let mut k = 0;
        while k < out.len() {
            let h = out[k];
            k += 1;
            for &g in gens {
                let x = self.mul(h, g);
                if !seen[x as usize] {
                    seen[x as usize] = true;
                    out.push(x);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// A short generating list for a subgroup given by its elements.
    pub fn small_generating_set(&self, elems: &[u32]) -> Vec<u32> {
        let mut gens = Vec::new();
        let mut span: HashSet<u32> = HashSet::from([self.identity()]);
        for &x in elems {
            if !span.contains(&x) {
                gens.push(x);
                span = self.closure(&gens).into_iter().collect();
            }
        }
        gens
    }

    /// Conjugacy classes, each sorted, ordered by least element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<u32>> {
        let gens = [self.s, self.t];
        let ginv = gens.map(|g| self.inv(g));
        let mut seen = vec![false; self.order()];
        let mut classes = Vec::new();
        for x in 0..self.order() as u32 {
            if seen[x as usize] {
                continue;
            }
            seen[x as usize] = true;
            let mut cls = vec![x];
            let mut k = 0;
            while k < cls.len() {
                let y = cls[k];
                k += 1;
                for (g, gi) in gens.iter().zip(&ginv) {
                    let z = self.mul(self.mul(*g, y), *gi);
                    if !seen[z as usize] {
                        seen[z as usize] = true;
                        cls.push(z);
                    }
                }
            }
            cls.sort_unstable();
            classes.push(cls);
        }
        classes
    }

    fn is_normal(&self, elems: &[u32]) -> bool {
        let set: HashSet<u32> = elems.iter().copied().collect();
        [self.s, self.t].iter().all(|&g| {
            let gi = self.inv(g);
            elems.iter().all(|&h| set.contains(&self.mul(self.mul(g, h), gi)))
        })
    }
}

/// A proper subgroup of least index, with a generating set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinIndex {
    pub index: u64,
    pub witness_generators: Vec<Mat>,
    pub witness_order: u64,
}

const NODE_BUDGET: u64 = 200_000_000;

/// Least index of a proper subgroup, if at most `cap`, by backtracking over
/// coset tables: transitive right actions of G on ≤ cap points, built along
/// a breadth-first traversal of the Cayley graph for the two standard
/// generators, every edge being checked.
pub fn min_proper_index(n: u64, cap: u64, budget: u64) -> Result<Option<MinIndex>> {
    if cap < 2 {
        return Err(Error::InvalidInput("index cap must be at least 2".into()));
    }
    let g = FiniteMatrixGroup::new(n, budget)?;
    let order = g.order();
    if order == 1 {
        return Ok(None);
    }
    let cap = cap.min(order as u64) as usize;
    let gens = g.generators();
    // Cayley BFS: element order and edges (element, generator slot)
    let mut bfs = vec![g.identity()];
    let mut pos = vec![usize::MAX; order];
    pos[g.identity() as usize] = 0;
    let mut k = 0;
    while k < bfs.len() {
        let x = bfs[k];
        k += 1;
        for &s in &gens {
            let y = g.mul(x, s);
            if pos[y as usize] == usize::MAX {
                pos[y as usize] = bfs.len();
                bfs.push(y);
            }
        }
    }
    let edges: Vec<(usize, usize, usize)> = bfs
        .iter()
        .enumerate()
        .flat_map(|(i, &x)| gens.iter().enumerate().map(move |(s, _)| (i, s, x)))
        .map(|(i, s, x)| (i, s, pos[g.mul(x, gens[s]) as usize]))
        .collect();

    let mut search = CosetSearch {
        edges: &edges,
        point: vec![-1; order],
        perm: vec![vec![-1; cap]; 2],
        perm_inv: vec![vec![-1; cap]; 2],
        points: 1,
        limit: cap,
        best: None,
        nodes: 0,
    };
    search.point[0] = 0;
    search.run(0)?;
    Ok(search.best.map(|(idx, labels)| {
        let h: Vec<u32> = (0..order).filter(|&i| labels[i] == 0).map(|i| bfs[i]).collect();
        let mut h_sorted = h.clone();
        h_sorted.sort_unstable();
        let gens = g.small_generating_set(&h_sorted);
        MinIndex {
            index: idx as u64,
            witness_generators: gens.iter().map(|&x| g.elem(x)).collect(),
            witness_order: h.len() as u64,
        }
    }))
}

struct CosetSearch<'a> {
    edges: &'a [(usize, usize, usize)],
    /// point of each element (in BFS numbering), −1 when unassigned
    point: Vec<i32>,
    perm: Vec<Vec<i32>>,
    perm_inv: Vec<Vec<i32>>,
    points: usize,
    /// strict upper bound on the number of points of interest
    limit: usize,
    best: Option<(usize, Vec<i32>)>,
    nodes: u64,
}

enum Undo {
    Point(usize),
    Perm(usize, usize, usize),
}

impl CosetSearch<'_> {
    fn undo(&mut self, trail: Vec<Undo>) {
        for u in trail.into_iter().rev() {
            match u {
                Undo::Point(h) => self.point[h] = -1,
                Undo::Perm(s, x, y) => {
                    self.perm[s][x] = -1;
                    self.perm_inv[s][y] = -1;
                }
            }
        }
    }

    /// Processes forced edges from `e` on; returns the first edge needing
    /// a choice (or edges.len()), or None on a conflict.
    fn propagate(&mut self, mut e: usize, trail: &mut Vec<Undo>) -> Option<usize> {
        while e < self.edges.len() {
            let (gi, s, hi) = self.edges[e];
            let x = self.point[gi] as usize;
            let y = self.perm[s][x];
            if y >= 0 {
                if self.point[hi] < 0 {
                    self.point[hi] = y;
                    trail.push(Undo::Point(hi));
                } else if self.point[hi] != y {
                    return None;
                }
            } else if self.point[hi] >= 0 {
                let y = self.point[hi] as usize;
                if self.perm_inv[s][y] >= 0 {
                    return None;
                }
                self.perm[s][x] = y as i32;
                self.perm_inv[s][y] = x as i32;
                trail.push(Undo::Perm(s, x, y));
            } else {
                return Some(e);
            }
            e += 1;
        }
        Some(e)
    }

    fn run(&mut self, e: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > NODE_BUDGET {
            return Err(Error::Resource(format!(
                "coset search exceeded {NODE_BUDGET} nodes; best index so far: {:?}",
                self.best.as_ref().map(|b| b.0)
            )));
        }
        let mut trail = Vec::new();
        let Some(e) = self.propagate(e, &mut trail) else {
            self.undo(trail);
            return Ok(());
        };
        if e == self.edges.len() {
            if self.points >= 2 && self.best.as_ref().is_none_or(|b| self.points < b.0) {
                self.best = Some((self.points, self.point.clone()));
                self.limit = self.points - 1;
            }
            self.undo(trail);
            return Ok(());
        }
        let (gi, s, hi) = self.edges[e];
        let x = self.point[gi] as usize;
        let mut choices: Vec<usize> = (0..self.points).filter(|&y| self.perm_inv[s][y] < 0).collect();
        if self.points < self.limit {
            choices.push(self.points);
        }
        for y in choices {
            if y >= self.limit {
                continue;
            }
            let fresh = y == self.points;
            if fresh {
                self.points += 1;
            }
            self.perm[s][x] = y as i32;
            self.perm_inv[s][y] = x as i32;
            self.point[hi] = y as i32;
            self.run(e + 1)?;
            self.point[hi] = -1;
            self.perm[s][x] = -1;
            self.perm_inv[s][y] = -1;
            if fresh {
                self.points -= 1;
            }
        }
        self.undo(trail);
        Ok(())
    }
}

/// A normal subgroup of G for N = l^e, identified as the kernel of
/// reduction mod l^f.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalSubgroup {
    pub order: u64,
    /// Reduction modulus l^f whose kernel this is (1 for all of G).
    pub kernel_of_reduction_mod: u64,
    pub generators: Vec<Mat>,
}

/// All normal subgroups for N = l^e with l ≥ 5, found as joins of normal
/// closures of conjugacy classes.
pub fn normal_subgroups(n: u64, budget: u64) -> Result<Vec<NormalSubgroup>> {
    let f = factorize(n);
    if f.len() != 1 || f[0].0 < 5 {
        return Err(Error::InvalidInput(format!("{n} is not a power of a prime l ≥ 5")));
    }
    let (l, e) = f[0];
    let g = FiniteMatrixGroup::new(n, budget)?;
    let mut found: Vec<Vec<u32>> = Vec::new();
    let mut keys: HashSet<Vec<u32>> = HashSet::new();
    for cls in g.conjugacy_classes() {
        let gens = g.small_generating_set(&close_over(&g, &cls));
        let h = g.closure(&gens);
        if keys.insert(h.clone()) {
            found.push(h);
        }
    }
    // close under products N₁N₂
    let mut i = 0;
    while i < found.len() {
        for j in 0..i {
            let mut gens = g.small_generating_set(&found[i]);
            gens.extend(g.small_generating_set(&found[j]));
            let h = g.closure(&gens);
            if keys.insert(h.clone()) {
                found.push(h);
            }
        }
        i += 1;
    }
    found.sort_by_key(|h| h.len());
    let mut out = Vec::new();
    for h in &found {
        if !g.is_normal(h) {
            return Err(Error::Validation("a generated subgroup is not normal".into()));
        }
        let set: HashSet<u32> = h.iter().copied().collect();
        let mut modulus = None;
        for fdeg in 0..=e {
            let q = l.pow(fdeg) as u32;
            let kernel: Vec<u32> = (0..g.order() as u32)
                .filter(|&x| {
                    let m = g.elem(x);
                    let one = [1 % q, 0, 0, 1 % q];
                    let mone = [(q - 1) % q, 0, 0, (q - 1) % q];
                    let r = m.map(|v| v % q);
                    r == one || r == mone
                })
                .collect();
            if kernel.len() == h.len() && kernel.iter().all(|x| set.contains(x)) {
                modulus = Some(q as u64);
                break;
            }
        }
        let modulus = modulus.ok_or_else(|| {
            Error::Validation(format!("normal subgroup of order {} is not a reduction kernel", h.len()))
        })?;
        out.push(NormalSubgroup {
            order: h.len() as u64,
            kernel_of_reduction_mod: modulus,
            generators: g.small_generating_set(h).into_iter().map(|x| g.elem(x)).collect(),
        });
    }
    Ok(out)
}

fn close_over(g: &FiniteMatrixGroup, cls: &[u32]) -> Vec<u32> {
    g.closure(&g.small_generating_set_from(cls))
}

impl FiniteMatrixGroup {
    /// Greedy generators for ⟨xs⟩.
    fn small_generating_set_from(&self, xs: &[u32]) -> Vec<u32> {
        let mut gens: Vec<u32> = Vec::new();
        let mut span: HashSet<u32> = HashSet::from([self.identity()]);
        for &x in xs {
            if !span.contains(&x) {
                gens.push(x);
                span = self.closure(&gens).into_iter().collect();
            }
        }
        gens
    }
}

/// Whether Sym²(F_l²) has no proper nonzero SL₂(F_l)-invariant subspace.
pub fn sym2_irreducible(l: u64) -> Result<bool> {
    if !is_prime(l) {
        return Err(Error::NotPrime(l.to_string()));
    }
    let p = l;
    // action on (x², xy, y²) induced by x ↦ ax + cy, y ↦ bx + dy
    let sym2 = |a: u64, b: u64, c: u64, d: u64| -> [[u64; 3]; 3] {
        [
            [a * a % p, a * b % p, b * b % p],
            [2 * a * c % p, (a * d + b * c) % p, 2 * b * d % p],
            [c * c % p, c * d % p, d * d % p],
        ]
    };
    let s = sym2(0, p - 1, 1, 0);
    let t = sym2(1, 1, 0, 1);
    let transpose = |m: &[[u64; 3]; 3]| {
        let mut r = [[0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                r[i][j] = m[j][i];
            }
        }
        r
    };
    let apply = |m: &[[u64; 3]; 3], v: [u64; 3]| -> [u64; 3] {
        let mut r = [0; 3];
        for i in 0..3 {
            r[i] = (0..3).map(|j| m[i][j] * v[j]).sum::<u64>() % p;
        }
        r
    };
    let proportional = |u: [u64; 3], v: [u64; 3]| -> bool {
        // u ∈ span(v) for v ≠ 0
        (0..3).all(|i| (0..3).all(|j| (u[i] * v[j] + p * p - u[j] * v[i] % p) % p == 0))
    };
    // projective points: first nonzero coordinate 1
    let mut points = Vec::new();
    for x in 0..p {
        for y in 0..p {
            points.push([1, x, y]);
        }
        points.push([0, 1, x]);
    }
    points.push([0, 0, 1]);
    let mats = [s, t];
    let tmats = [transpose(&s), transpose(&t)];
    let stable = |ms: &[[[u64; 3]; 3]; 2], v: [u64; 3]| ms.iter().all(|m| proportional(apply(m, v), v));
    // invariant lines, then invariant planes via the dual action
    let reducible = points.iter().any(|&v| stable(&mats, v) || stable(&tmats, v));
    Ok(!reducible)
}

/// A subgroup of A × B given by generators (pairs of element indices).
#[derive(Clone, Debug)]
pub struct ProductSubgroup<'a> {
    pub a: &'a FiniteMatrixGroup,
    pub b: &'a FiniteMatrixGroup,
    pub generators: Vec<(u32, u32)>,
}

impl ProductSubgroup<'_> {
    pub fn elements(&self) -> HashSet<(u32, u32)> {
        let e = (self.a.identity(), self.b.identity());
        let mut seen = HashSet::from([e]);
        let mut queue = VecDeque::from([e]);
        while let Some((x, y)) = queue.pop_front() {
            for &(g, h) in &self.generators {
                let z = (self.a.mul(x, g), self.b.mul(y, h));
                if seen.insert(z) {
                    queue.push_back(z);
                }
            }
        }
        seen
    }
}

/// Goursat data: H = {(a, b) : φ(a N_A) = b N_B}.
#[derive(Clone, Debug)]
pub struct GoursatData {
    /// {a : (a, 1) ∈ H}.
    pub kernel_a: Vec<u32>,
    /// {b : (1, b) ∈ H}.
    pub kernel_b: Vec<u32>,
    /// One (a, b) ∈ H per coset a N_A: the isomorphism A/N_A → B/N_B.
    pub iso: Vec<(u32, u32)>,
    /// When A = B and both kernels are trivial: the number of g with
    /// φ(x) = g x g⁻¹ for all x, and the least such g (φ is inner iff
    /// some g exists; it is then determined up to the centre).
    pub inner: Option<(usize, u32)>,
}

impl GoursatData {
    pub fn reconstruct(&self, a: &FiniteMatrixGroup, b: &FiniteMatrixGroup) -> HashSet<(u32, u32)> {
        let mut out = HashSet::new();
        for &(x, y) in &self.iso {
            for &ka in &self.kernel_a {
                for &kb in &self.kernel_b {
                    out.insert((a.mul(x, ka), b.mul(y, kb)));
                }
            }
        }
        out
    }
}

pub fn goursat_decompose(h: &ProductSubgroup) -> Result<GoursatData> {
    let (a, b) = (h.a, h.b);
    let elems = h.elements();
    let pa: HashSet<u32> = elems.iter().map(|p| p.0).collect();
    if pa.len() != a.order() {
        return Err(Error::Precondition("projection to the first factor is not surjective".into()));
    }
    let pb: HashSet<u32> = elems.iter().map(|p| p.1).collect();
    if pb.len() != b.order() {
        return Err(Error::Precondition("projection to the second factor is not surjective".into()));
    }
    let (ea, eb) = (a.identity(), b.identity());
    let mut kernel_a: Vec<u32> = elems.iter().filter(|p| p.1 == eb).map(|p| p.0).collect();
    let mut kernel_b: Vec<u32> = elems.iter().filter(|p| p.0 == ea).map(|p| p.1).collect();
    kernel_a.sort_unstable();
    kernel_b.sort_unstable();
    let ka: HashSet<u32> = kernel_a.iter().copied().collect();
    let mut covered: HashSet<u32> = HashSet::new();
    let mut sorted: Vec<(u32, u32)> = elems.iter().copied().collect();
    sorted.sort_unstable();
    let mut iso = Vec::new();
    for (x, y) in sorted {
        if covered.contains(&x) {
            continue;
        }
        for &k in &ka {
            covered.insert(a.mul(x, k));
        }
        iso.push((x, y));
    }
    let mut inner = None;
    if a.n == b.n && kernel_a.len() == 1 && kernel_b.len() == 1 {
        let phi: HashMap<u32, u32> = iso.iter().copied().collect();
        let gens = a.generators();
        let ws: Vec<u32> = (0..a.order() as u32)
            .filter(|&g| {
                let gi = a.inv(g);
                gens.iter().all(|&x| a.mul(a.mul(g, x), gi) == phi[&x])
            })
            .collect();
        if let Some(&w) = ws.first() {
            inner = Some((ws.len(), w));
        }
    }
    Ok(GoursatData { kernel_a, kernel_b, iso, inner })
}

/// Outcome of the pairwise-surjectivity test in Gⁿ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Lemma43Outcome {
    /// All pairwise projections are onto G², and |H| = |G|ⁿ was verified.
    Full { order: BigUint },
    /// The projection to coordinates (i, j) (1-based) is not onto G².
    PairNotSurjective(usize, usize),
}

/// Checks the pairwise projections of H = ⟨gens⟩ ⊂ Gⁿ and, when all are
/// onto, verifies H = Gⁿ by enumeration within `budget` elements.
pub fn lemma43_check(g: &FiniteMatrixGroup, n: usize, gens: &[Vec<u32>], budget: u64) -> Result<Lemma43Outcome> {
    if n < 2 {
        return Err(Error::InvalidInput("n must be at least 2".into()));
    }
    if gens.iter().any(|v| v.len() != n) {
        return Err(Error::InvalidInput(format!("generators must have {n} coordinates")));
    }
    let go = g.order() as u64;
    for i in 0..n {
        for j in i + 1..n {
            let pair = ProductSubgroup { a: g, b: g, generators: gens.iter().map(|v| (v[i], v[j])).collect() };
            if pair.elements().len() as u64 != go * go {
                return Ok(Lemma43Outcome::PairNotSurjective(i + 1, j + 1));
            }
        }
    }
    let full = BigUint::from(go).pow(n as u32);
    if full > BigUint::from(budget) {
        return Err(Error::Resource(format!("|G|^{n} = {full} exceeds the verification budget {budget}")));
    }
    let e = vec![g.identity(); n];
    let mut seen: HashSet<Vec<u32>> = HashSet::from([e.clone()]);
    let mut queue = VecDeque::from([e]);
    while let Some(x) = queue.pop_front() {
        for s in gens {
            let y: Vec<u32> = x.iter().zip(s).map(|(&u, &v)| g.mul(u, v)).collect();
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    let order = BigUint::from(seen.len());
    if order != full {
        return Err(Error::Validation(format!("pairwise surjective subgroup has order {order}, not |G|^{n} = {full}")));
    }
    Ok(Lemma43Outcome::Full { order })
}

/// Random generator tuples for Gⁿ.
pub fn random_tuples(g: &FiniteMatrixGroup, n: usize, count: usize, rng: &mut impl Rng) -> Vec<Vec<u32>> {
    (0..count).map(|_| (0..n).map(|_| rng.gen_range(0..g.order() as u32)).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(group_order(2).unwrap(), 6);
        assert_eq!(group_order(5).unwrap(), 60);
        assert_eq!(group_order(25).unwrap(), 7500);
        for n in 2..=12 {
            assert_eq!(FiniteMatrixGroup::new(n, 10_000).unwrap().order() as u64, group_order(n).unwrap());
        }
        assert!(matches!(FiniteMatrixGroup::new(49, 10_000), Err(Error::Resource(_))));
    }

    #[test]
    fn small_min_index() {
        let r = min_proper_index(5, 10, DEFAULT_BUDGET).unwrap().unwrap();
        assert_eq!((r.index, r.witness_order), (5, 12));
        let r = min_proper_index(2, 6, DEFAULT_BUDGET).unwrap().unwrap();
        assert_eq!(r.index, 2);
        assert_eq!(min_proper_index(7, 6, DEFAULT_BUDGET).unwrap(), None);
        assert_eq!(min_proper_index(7, 7, DEFAULT_BUDGET).unwrap().unwrap().index, 7);
    }

    #[test]
    fn larger_min_index() {
        let r = min_proper_index(11, 12, DEFAULT_BUDGET).unwrap().unwrap();
        assert_eq!((r.index, r.witness_order), (11, 60));
        assert_eq!(min_proper_index(13, 13, DEFAULT_BUDGET).unwrap(), None);
    }

    #[test]
    fn simple_at_five() {
        let ns = normal_subgroups(5, DEFAULT_BUDGET).unwrap();
        assert_eq!(ns.iter().map(|x| x.order).collect::<Vec<_>>(), vec![1, 60]);
    }

    #[test]
    fn sym2() {
        assert!(sym2_irreducible(3).unwrap());
        assert!(sym2_irreducible(5).unwrap());
        assert!(!sym2_irreducible(2).unwrap());
    }

    #[test]
    fn goursat_examples() {
        let g = FiniteMatrixGroup::new(5, DEFAULT_BUDGET).unwrap();
        let [s, t] = g.generators();
        let e = g.identity();
        let full = ProductSubgroup { a: &g, b: &g, generators: vec![(s, e), (t, e), (e, s), (e, t)] };
        let d = goursat_decompose(&full).unwrap();
        assert_eq!((d.kernel_a.len(), d.kernel_b.len(), d.iso.len()), (60, 60, 1));
        let diag = ProductSubgroup { a: &g, b: &g, generators: vec![(s, s), (t, t)] };
        let d = goursat_decompose(&diag).unwrap();
        assert_eq!((d.kernel_a.len(), d.kernel_b.len()), (1, 1));
        assert!(d.iso.iter().all(|(x, y)| x == y));
        assert_eq!(d.inner, Some((1, e)));
        assert_eq!(d.reconstruct(&g, &g), diag.elements());
        let bad = ProductSubgroup { a: &g, b: &g, generators: vec![(s, e)] };
        assert!(matches!(goursat_decompose(&bad), Err(Error::Precondition(_))));
    }

    #[test]
    fn lemma43_examples() {
        let g = FiniteMatrixGroup::new(5, DEFAULT_BUDGET).unwrap();
        let [s, t] = g.generators();
        let e = g.identity();
        let gens = vec![vec![s, e], vec![t, e], vec![e, s], vec![e, t]];
        assert_eq!(
            lemma43_check(&g, 2, &gens, 10_000).unwrap(),
            Lemma43Outcome::Full { order: BigUint::from(3600u32) }
        );
        let gens = vec![vec![s, s, e], vec![t, t, e], vec![e, e, s], vec![e, e, t]];
        assert_eq!(lemma43_check(&g, 3, &gens, 10_000).unwrap(), Lemma43Outcome::PairNotSurjective(1, 2));
    }
}
