//! Dense integer polynomials in one and two variables, arithmetic modulo
//! word-size primes, resultants and squarefree decomposition.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{is_prime, pow_mod};

/// Univariate polynomial over ℤ, coefficients in ascending degree order
/// with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<BigInt>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Poly {
        Poly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Poly {
        Poly::new(vec![c])
    }

    /// x − r
    pub fn linear_root(r: &BigInt) -> Poly {
        Poly::new(vec![-r, BigInt::one()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with −1 for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn lc(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.lc().is_one()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, k: &BigInt) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Non-negative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        Poly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Exact division in ℤ[x]; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        let (q, r) = self.divrem_int(d)?;
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    /// Division with remainder in ℤ[x], requiring each quotient coefficient
    /// to be integral; `None` otherwise.
    pub fn divrem_int(&self, d: &Poly) -> Option<(Poly, Poly)> {
        let dd = d.degree();
        let lc = d.lc();
        let mut r = self.coeffs.clone();
        if self.degree() < dd {
            return Some((Poly::zero(), self.clone()));
        }
        let mut q = vec![BigInt::zero(); (self.degree() - dd + 1) as usize];
        for k in (0..q.len()).rev() {
            let top = &r[k + dd as usize];
            if top.is_zero() {
                continue;
            }
            let (c, rem) = top.div_rem(&lc);
            if !rem.is_zero() {
                return None;
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                r[k + i] -= &c * dc;
            }
            q[k] = c;
        }
        Some((Poly::new(q), Poly::new(r)))
    }

    /// Pseudo-remainder lc(d)^(deg self − deg d + 1)·self mod d.
    pub fn pseudo_rem(&self, d: &Poly) -> Poly {
        let dd = d.degree();
        if self.degree() < dd {
            return self.clone();
        }
        let lc = d.lc();
        let mut r = self.clone();
        while r.degree() >= dd {
            let shift = (r.degree() - dd) as usize;
            let top = r.lc();
            let mut shifted = vec![BigInt::zero(); shift];
            shifted.extend(d.coeffs.iter().map(|c| c * &top));
            r = r.scale(&lc).sub(&Poly::new(shifted));
        }
        r
    }

    /// Greatest common divisor in ℤ[x], primitive with positive leading
    /// coefficient (primitive remainder sequence).
    pub fn gcd(&self, o: &Poly) -> Poly {
        if self.is_zero() {
            return o.primitive();
        }
        if o.is_zero() {
            return self.primitive();
        }
        let cont = self.content().gcd(&o.content());
        let (mut a, mut b) = if self.degree() >= o.degree() {
            (self.primitive(), o.primitive())
        } else {
            (o.primitive(), self.primitive())
        };
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive();
        }
        a.primitive().scale(&cont)
    }

    /// Squarefree decomposition: primitive factors `f_k` (k ≥ 1) with
    /// self = c·Π f_k^k, returned as (k, f_k) for the nonconstant f_k.
    pub fn squarefree_decomposition(&self) -> Vec<(u32, Poly)> {
        let f = self.primitive();
        if f.degree() <= 0 {
            return Vec::new();
        }
        // all polynomials below are primitive, so divisibility over ℚ is
        // divisibility over ℤ
        let mut g = f.gcd(&f.derivative());
        let mut w = f.div_exact(&g).expect("gcd divides").primitive();
        let mut out = Vec::new();
        let mut k = 1;
        while w.degree() > 0 {
            let y = w.gcd(&g);
            let factor = w.div_exact(&y).expect("gcd divides").primitive();
            if factor.degree() > 0 {
                out.push((k, factor));
            }
            g = g.div_exact(&y).expect("gcd divides").primitive();
            w = y;
            k += 1;
        }
        out
    }

    pub fn reduce_mod(&self, p: u64) -> Vec<u64> {
        let pb = BigInt::from(p);
        let mut v: Vec<u64> = self
            .coeffs
            .iter()
            .map(|c| c.mod_floor(&pb).to_u64().unwrap())
            .collect();
        trim(&mut v);
        v
    }

    /// Sum of squares of coefficients.
    pub fn norm2_sqr(&self) -> BigUint {
        self.coeffs.iter().map(|c| c.magnitude() * c.magnitude()).sum()
    }

    pub fn norm1(&self) -> BigUint {
        self.coeffs.iter().map(|c| c.magnitude().clone()).sum()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.magnitude();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_c = !mag.is_one() || i == 0;
            if show_c {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}x", if show_c { "*" } else { "" })?,
                _ => write!(f, "{}x^{i}", if show_c { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

/// Bivariate polynomial over ℤ: `coeffs[i][j]` multiplies `x^i y^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiPoly {
    coeffs: Vec<Vec<BigInt>>,
}

impl BiPoly {
    pub fn new(mut coeffs: Vec<Vec<BigInt>>) -> BiPoly {
        for row in coeffs.iter_mut() {
            while row.last().is_some_and(|c| c.is_zero()) {
                row.pop();
            }
        }
        while coeffs.last().is_some_and(|r| r.is_empty()) {
            coeffs.pop();
        }
        BiPoly { coeffs }
    }

    /// From (i, j, c) triples; repeated monomials are summed.
    pub fn from_terms<I: IntoIterator<Item = (usize, usize, BigInt)>>(terms: I) -> BiPoly {
        let mut coeffs: Vec<Vec<BigInt>> = Vec::new();
        for (i, j, c) in terms {
            if coeffs.len() <= i {
                coeffs.resize(i + 1, Vec::new());
            }
            if coeffs[i].len() <= j {
                coeffs[i].resize(j + 1, BigInt::zero());
            }
            coeffs[i][j] += c;
        }
        BiPoly::new(coeffs)
    }

    pub fn zero() -> BiPoly {
        BiPoly { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize, j: usize) -> BigInt {
        self.coeffs
            .get(i)
            .and_then(|r| r.get(j))
            .cloned()
            .unwrap_or_default()
    }

    /// Nonzero terms in lexicographic order of (i, j).
    pub fn terms(&self) -> Vec<(usize, usize, BigInt)> {
        let mut out = Vec::new();
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    out.push((i, j, c.clone()));
                }
            }
        }
        out
    }

    pub fn deg_x(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn deg_y(&self) -> isize {
        self.coeffs.iter().map(|r| r.len() as isize - 1).max().unwrap_or(-1)
    }

    pub fn swap(&self) -> BiPoly {
        BiPoly::from_terms(self.terms().into_iter().map(|(i, j, c)| (j, i, c)))
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.swap()
    }

    pub fn neg(&self) -> BiPoly {
        BiPoly::from_terms(self.terms().into_iter().map(|(i, j, c)| (i, j, -c)))
    }

    pub fn content(&self) -> BigInt {
        self.terms().iter().fold(BigInt::zero(), |g, (_, _, c)| g.gcd(c))
    }

    /// Coefficient of x^i as a polynomial in y.
    pub fn x_coeff(&self, i: usize) -> Poly {
        Poly::new(self.coeffs.get(i).cloned().unwrap_or_default())
    }

    /// Coefficient of y^j as a polynomial in x.
    pub fn y_coeff(&self, j: usize) -> Poly {
        Poly::new(self.coeffs.iter().map(|r| r.get(j).cloned().unwrap_or_default()).collect())
    }

    /// F(x0, y) as a polynomial in y.
    pub fn eval_x(&self, x0: &BigInt) -> Poly {
        let dy = (self.deg_y() + 1).max(0) as usize;
        Poly::new((0..dy).map(|j| self.y_coeff(j).eval(x0)).collect())
    }

    /// F(x, y0) as a polynomial in x.
    pub fn eval_y(&self, y0: &BigInt) -> Poly {
        Poly::new(self.coeffs.iter().map(|r| Poly::new(r.clone()).eval(y0)).collect())
    }

    /// den^(deg_x)·F(num/den, y), an integer polynomial in y.
    pub fn eval_x_rational(&self, num: &BigInt, den: &BigInt) -> Poly {
        let n = self.deg_x().max(0) as usize;
        let mut out = Poly::zero();
        let mut num_pow = BigInt::one();
        for i in 0..=n {
            let scale = &num_pow * den.pow((n - i) as u32);
            out = out.add(&self.x_coeff(i).scale(&scale));
            num_pow *= num;
        }
        out
    }

    /// F(x, x).
    pub fn diagonal(&self) -> Poly {
        let mut out: Vec<BigInt> = Vec::new();
        for (i, j, c) in self.terms() {
            if out.len() <= i + j {
                out.resize(i + j + 1, BigInt::zero());
            }
            out[i + j] += c;
        }
        Poly::new(out)
    }

    pub fn norm1(&self) -> BigUint {
        self.terms().iter().map(|(_, _, c)| c.magnitude().clone()).sum()
    }

    /// Reduction modulo p as `[i][j]` residues.
    pub fn reduce_mod(&self, p: u64) -> Vec<Vec<u64>> {
        let pb = BigInt::from(p);
        self.coeffs
            .iter()
            .map(|r| r.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect())
            .collect()
    }

    pub fn mul(&self, o: &BiPoly) -> BiPoly {
        let mut terms = Vec::new();
        for (i, j, a) in self.terms() {
            for (k, l, b) in o.terms() {
                terms.push((i + k, j + l, &a * &b));
            }
        }
        BiPoly::from_terms(terms)
    }

    pub fn sub(&self, o: &BiPoly) -> BiPoly {
        BiPoly::from_terms(self.terms().into_iter().chain(o.neg().terms()))
    }
}

/// Arithmetic on dense residue vectors modulo a prime.
pub mod modp {
    use super::pow_mod;

    pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
        ((a as u128 * b as u128) % p as u128) as u64
    }

    pub fn inv(a: u64, p: u64) -> u64 {
        pow_mod(a, p - 2, p)
    }

    pub fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    pub fn eval(f: &[u64], x: u64, p: u64) -> u64 {
        f.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x, p) + c) % p)
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
            }
        }
        trim(&mut out);
        out
    }

    /// Remainder of a modulo b (b nonzero).
    pub fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        let linv = inv(b[db], p);
        while r.len() > db {
            let top = r.len() - 1;
            let c = mul_mod(r[top], linv, p);
            let shift = top - db;
            for (i, &bc) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - mul_mod(c, bc, p)) % p;
            }
            trim(&mut r);
        }
        r
    }

    /// Res(a, b) over F_p by the Euclidean algorithm.
    pub fn resultant(a: &[u64], b: &[u64], p: u64) -> u64 {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        if a.is_empty() || b.is_empty() {
            return 0;
        }
        let mut acc = 1u64;
        loop {
            let da = a.len() - 1;
            let db = b.len() - 1;
            if db == 0 {
                return mul_mod(acc, pow_mod(b[0], da as u64, p), p);
            }
            if da == 0 {
                return mul_mod(acc, pow_mod(a[0], db as u64, p), p);
            }
            let r = rem(&a, &b, p);
            if r.is_empty() {
                return 0;
            }
            let dr = r.len() - 1;
            // Res(a,b) = (−1)^(da·db) lc(b)^(da−dr) Res(b, r)
            if (da * db) % 2 == 1 {
                acc = (p - acc) % p;
            }
            acc = mul_mod(acc, pow_mod(b[db], (da - dr) as u64, p), p);
            a = b;
            b = r;
        }
    }

    /// Inverses of nonzero residues with a single exponentiation.
    pub fn batch_inv(xs: &[u64], p: u64) -> Vec<u64> {
        let mut prefix = Vec::with_capacity(xs.len());
        let mut acc = 1u64;
        for &x in xs {
            prefix.push(acc);
            acc = mul_mod(acc, x, p);
        }
        let mut inv_acc = inv(acc, p);
        let mut out = vec![0u64; xs.len()];
        for i in (0..xs.len()).rev() {
            out[i] = mul_mod(inv_acc, prefix[i], p);
            inv_acc = mul_mod(inv_acc, xs[i], p);
        }
        out
    }

    /// Interpolating polynomial through (xs[i], ys[i]) (Newton form).
    pub fn interpolate(xs: &[u64], ys: &[u64], p: u64) -> Vec<u64> {
        let n = xs.len();
        let mut dd = ys.to_vec();
        for k in 1..n {
            let dens: Vec<u64> = (k..n).map(|i| (xs[i] + p - xs[i - k]) % p).collect();
            let invs = batch_inv(&dens, p);
            for i in (k..n).rev() {
                let num = (dd[i] + p - dd[i - 1]) % p;
                dd[i] = mul_mod(num, invs[i - k], p);
            }
        }
        let mut out = vec![0u64; n];
        for k in (0..n).rev() {
            // out = out·(x − xs[k]) + dd[k]
            let mut next = vec![0u64; n];
            for i in 0..n {
                if out[i] == 0 {
                    continue;
                }
                if i + 1 < n {
                    next[i + 1] = (next[i + 1] + out[i]) % p;
                }
                next[i] = (next[i] + p - mul_mod(out[i], xs[k], p)) % p;
            }
            next[0] = (next[0] + dd[k]) % p;
            out = next;
        }
        trim(&mut out);
        out
    }
}

fn trim(v: &mut Vec<u64>) {
    modp::trim(v)
}

/// Montgomery arithmetic modulo an odd prime below 2^62, for the
/// multimodular inner loops.
mod mont {
    use super::modp::trim;

    pub struct Mont {
        p: u64,
        ninv: u64,
        r2: u64,
    }

    impl Mont {
        pub fn new(p: u64) -> Mont {
            debug_assert!(p % 2 == 1 && p < 1 << 62);
            let mut inv = p;
            for _ in 0..6 {
                inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
            }
            let r = ((1u128 << 64) % p as u128) as u64;
            let r2 = (r as u128 * r as u128 % p as u128) as u64;
            Mont { p, ninv: inv.wrapping_neg(), r2 }
        }

        #[inline]
        fn redc(&self, t: u128) -> u64 {
            let m = (t as u64).wrapping_mul(self.ninv);
            let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
            if u >= self.p {
                u - self.p
            } else {
                u
            }
        }

        #[inline]
        pub fn mul(&self, a: u64, b: u64) -> u64 {
            self.redc(a as u128 * b as u128)
        }

        #[inline]
        pub fn add(&self, a: u64, b: u64) -> u64 {
            let s = a + b;
            if s >= self.p {
                s - self.p
            } else {
                s
            }
        }

        #[inline]
        pub fn sub(&self, a: u64, b: u64) -> u64 {
            if a >= b {
                a - b
            } else {
                a + self.p - b
            }
        }

        pub fn to(&self, a: u64) -> u64 {
            self.mul(a % self.p, self.r2)
        }

        pub fn from(&self, a: u64) -> u64 {
            self.redc(a as u128)
        }

        fn one(&self) -> u64 {
            self.to(1)
        }

        fn pow(&self, mut b: u64, mut e: u64) -> u64 {
            let mut r = self.one();
            while e > 0 {
                if e & 1 == 1 {
                    r = self.mul(r, b);
                }
                b = self.mul(b, b);
                e >>= 1;
            }
            r
        }

        fn inv(&self, a: u64) -> u64 {
            self.pow(a, self.p - 2)
        }

        pub fn eval(&self, f: &[u64], x: u64) -> u64 {
            f.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, x), c))
        }

        /// Remainder of a by b, given the inverse of the leading coefficient of b.
        fn rem_with(&self, mut r: Vec<u64>, b: &[u64], linv: u64) -> Vec<u64> {
            trim(&mut r);
            let db = b.len() - 1;
            while r.len() > db {
                let top = r.len() - 1;
                let c = self.mul(r[top], linv);
                let shift = top - db;
                for (i, &bc) in b.iter().enumerate() {
                    r[shift + i] = self.sub(r[shift + i], self.mul(c, bc));
                }
                trim(&mut r);
            }
            r
        }

        /// Res(a, b) for every b in `bs`, by Euclidean remainder sequences
        /// run in lockstep so that the leading-coefficient inverses of each
        /// round share one exponentiation.
        pub fn resultants(&self, a: &[u64], bs: Vec<Vec<u64>>) -> Vec<u64> {
            let mut a0 = a.to_vec();
            trim(&mut a0);
            let mut out = vec![0u64; bs.len()];
            // (index, a, b, accumulated factor)
            let mut live: Vec<(usize, Vec<u64>, Vec<u64>, u64)> = Vec::with_capacity(bs.len());
            for (k, mut b) in bs.into_iter().enumerate() {
                trim(&mut b);
                if !a0.is_empty() && !b.is_empty() {
                    live.push((k, a0.clone(), b, self.one()));
                }
            }
            while !live.is_empty() {
                let mut pending = Vec::with_capacity(live.len());
                for (k, a, b, acc) in live {
                    let (da, db) = (a.len() - 1, b.len() - 1);
                    if db == 0 {
                        out[k] = self.mul(acc, self.pow(b[0], da as u64));
                    } else if da == 0 {
                        out[k] = self.mul(acc, self.pow(a[0], db as u64));
                    } else {
                        pending.push((k, a, b, acc));
                    }
                }
                let lcs: Vec<u64> = pending.iter().map(|(_, _, b, _)| *b.last().unwrap()).collect();
                let invs = self.batch_inv(&lcs);
                live = Vec::with_capacity(pending.len());
                for ((k, a, b, mut acc), linv) in pending.into_iter().zip(invs) {
                    let (da, db) = (a.len() - 1, b.len() - 1);
                    let r = self.rem_with(a, &b, linv);
                    if r.is_empty() {
                        continue;
                    }
                    let dr = r.len() - 1;
                    // Res(a,b) = (−1)^(da·db) lc(b)^(da−dr) Res(b, r)
                    if (da * db) % 2 == 1 {
                        acc = self.sub(0, acc);
                    }
                    acc = self.mul(acc, self.pow(b[db], (da - dr) as u64));
                    live.push((k, b, r, acc));
                }
            }
            out
        }

        fn batch_inv(&self, xs: &[u64]) -> Vec<u64> {
            let mut prefix = Vec::with_capacity(xs.len());
            let mut acc = self.one();
            for &x in xs {
                prefix.push(acc);
                acc = self.mul(acc, x);
            }
            let mut inv_acc = self.inv(acc);
            let mut out = vec![0u64; xs.len()];
            for i in (0..xs.len()).rev() {
                out[i] = self.mul(inv_acc, prefix[i]);
                inv_acc = self.mul(inv_acc, xs[i]);
            }
            out
        }

        /// Newton interpolation through (xs[i], ys[i]).
        pub fn interpolate(&self, xs: &[u64], ys: &[u64]) -> Vec<u64> {
            let n = xs.len();
            let mut dd = ys.to_vec();
            for k in 1..n {
                let dens: Vec<u64> = (k..n).map(|i| self.sub(xs[i], xs[i - k])).collect();
                let invs = self.batch_inv(&dens);
                for i in (k..n).rev() {
                    dd[i] = self.mul(self.sub(dd[i], dd[i - 1]), invs[i - k]);
                }
            }
            let mut out = vec![0u64; n];
            let mut len = 0;
            for k in (0..n).rev() {
                // out = out·(x − xs[k]) + dd[k]
                for i in (0..=len).rev() {
                    let lower = if i > 0 { out[i - 1] } else { 0 };
                    out[i] = self.sub(lower, self.mul(out[i], xs[k]));
                }
                out[0] = self.add(out[0], dd[k]);
                len = (len + 1).min(n - 1);
            }
            trim(&mut out);
            out
        }
    }
}

/// Primes below 2^62, descending, usable for multimodular arithmetic.
pub fn word_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut p = (1u64 << 62) - 1;
    while out.len() < count {
        if is_prime(p) {
            out.push(p);
        }
        p -= 2;
    }
    out
}

/// Res_x(a(x), F(x, y)) as a polynomial in y, for monic `a` and `F` monic
/// in x. Computed modulo enough primes to exceed the coefficient bound and
/// recombined by CRT.
pub fn resultant_x(a: &Poly, f: &BiPoly) -> Poly {
    assert!(a.is_monic(), "resultant_x expects a monic first argument");
    let da = a.degree().max(0) as usize;
    let dfx = f.deg_x().max(0) as usize;
    let dfy = f.deg_y().max(0) as usize;
    let out_deg = da * dfy;
    // ||N||_∞ ≤ ||F||_1^deg a · ||a||_2^deg_x F
    let bound_bits = f.norm1().bits() as f64 * da as f64
        + (a.norm2_sqr().bits() as f64 / 2.0 + 1.0) * dfx as f64
        + 2.0;
    let nprimes = (bound_bits / 61.0).ceil() as usize + 1;
    let primes = word_primes(nprimes);
    let images: Vec<Vec<u64>> = primes
        .par_iter()
        .map(|&p| {
            let m = mont::Mont::new(p);
            let am: Vec<u64> = a.reduce_mod(p).iter().map(|&c| m.to(c)).collect();
            let fm: Vec<Vec<u64>> =
                f.reduce_mod(p).iter().map(|row| row.iter().map(|&c| m.to(c)).collect()).collect();
            let xs: Vec<u64> = (0..=out_deg as u64).map(|x| m.to(x)).collect();
            let fxs: Vec<Vec<u64>> =
                xs.iter().map(|&y0| fm.iter().map(|row| m.eval(row, y0)).collect()).collect();
            let ys = m.resultants(&am, fxs);
            let mut v: Vec<u64> = m.interpolate(&xs, &ys).into_iter().map(|c| m.from(c)).collect();
            v.resize(out_deg + 1, 0);
            v
        })
        .collect();
    let coeffs = (0..=out_deg)
        .map(|k| {
            let residues: Vec<u64> = images.iter().map(|v| v[k]).collect();
            crt_symmetric(&residues, &primes)
        })
        .collect();
    Poly::new(coeffs)
}

/// Symmetric CRT lift of residues.
pub fn crt_symmetric(residues: &[u64], primes: &[u64]) -> BigInt {
    let mut x = BigInt::zero();
    let mut modulus = BigInt::one();
    for (&r, &p) in residues.iter().zip(primes) {
        let pb = BigInt::from(p);
        let xm = x.mod_floor(&pb).to_u64().unwrap();
        let diff = (r + p - xm) % p;
        let mm = modulus.mod_floor(&pb).to_u64().unwrap();
        let t = modp::mul_mod(diff, modp::inv(mm, p), p);
        x += &modulus * BigInt::from(t);
        modulus *= pb;
    }
    let half: BigInt = &modulus >> 1;
    if x > half {
        x -= modulus;
    }
    x
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Sylvester matrix of two univariate integer polynomials.
pub fn sylvester(a: &Poly, b: &Poly) -> Vec<Vec<BigInt>> {
    let m = a.degree().max(0) as usize;
    let n = b.degree().max(0) as usize;
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![BigInt::zero(); size];
        for (k, c) in a.coeffs().iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![BigInt::zero(); size];
        for (k, c) in b.coeffs().iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Res(a, b) as the Sylvester determinant.
pub fn resultant_sylvester(a: &Poly, b: &Poly) -> BigInt {
    bareiss_det(sylvester(a, b))
}

/// Parses a decimal integer, rational `a/b` or finite decimal `x.y` exactly.
pub fn parse_rational(s: &str) -> Option<(BigInt, BigInt)> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(normalize_ratio(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let neg = ip.starts_with('-');
        let ip_digits = ip.trim_start_matches(['-', '+']);
        let whole: BigInt = format!("{}{}", if ip_digits.is_empty() { "0" } else { ip_digits }, fp)
            .parse()
            .ok()?;
        let den = BigInt::from(10u32).pow(fp.len() as u32);
        let num = if neg { -whole } else { whole };
        return Some(normalize_ratio(num, den));
    }
    let n: BigInt = s.parse().ok()?;
    Some((n, BigInt::one()))
}

fn normalize_ratio(n: BigInt, d: BigInt) -> (BigInt, BigInt) {
    let g = n.gcd(&d);
    let (mut n, mut d) = (n / &g, d / &g);
    if d.sign() == Sign::Minus {
        n = -n;
        d = -d;
    }
    (n, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_i64(c)
    }

    #[test]
    fn arithmetic_and_division() {
        let a = p(&[-1, 0, 1]);
        let b = p(&[1, 1]);
        assert_eq!(a.div_exact(&b), Some(p(&[-1, 1])));
        assert_eq!(p(&[1, 0, 1]).div_exact(&b), None);
        assert_eq!(a.mul(&b), p(&[-1, -1, 1, 1]));
        assert_eq!(a.eval(&BigInt::from(3)), BigInt::from(8));
        assert_eq!(format!("{}", p(&[-1728, 1])), "x - 1728");
    }

    #[test]
    fn gcd_and_squarefree() {
        // (x−1)^2 (x+2)^3 (x−5)
        let f = p(&[-1, 1]).pow(2).mul(&p(&[2, 1]).pow(3)).mul(&p(&[-5, 1])).scale(&BigInt::from(6));
        let dec = f.squarefree_decomposition();
        assert_eq!(dec, vec![(1, p(&[-5, 1])), (2, p(&[-1, 1])), (3, p(&[2, 1]))]);
        let g = p(&[-1, 1]).mul(&p(&[3, 2])).gcd(&p(&[3, 2]).mul(&p(&[7, 0, 1])));
        assert_eq!(g, p(&[3, 2]));
    }

    #[test]
    fn modular_resultant_agrees_with_sylvester() {
        let a = p(&[3, -2, 0, 1]);
        let b = p(&[-7, 4, 5]);
        let exact = resultant_sylvester(&a, &b);
        for prime in word_primes(3) {
            let r = modp::resultant(&a.reduce_mod(prime), &b.reduce_mod(prime), prime);
            assert_eq!(BigInt::from(r), exact.mod_floor(&BigInt::from(prime)));
        }
    }

    #[test]
    fn bivariate_resultant_against_pointwise_determinants() {
        let h = p(&[-2, 0, 1]);
        // F = x^2 + x y − y^2 + 3
        let f = BiPoly::from_terms([
            (2, 0, BigInt::from(1)),
            (1, 1, BigInt::from(1)),
            (0, 2, BigInt::from(-1)),
            (0, 0, BigInt::from(3)),
        ]);
        let n = resultant_x(&h, &f);
        for y0 in -3..4 {
            let y0 = BigInt::from(y0);
            assert_eq!(n.eval(&y0), resultant_sylvester(&h, &f.eval_y(&y0)));
        }
    }

    #[test]
    fn interpolation_roundtrip() {
        let prime = 1_000_000_007;
        let f = vec![5, 0, 3, 1];
        let xs: Vec<u64> = (0..4).collect();
        let ys: Vec<u64> = xs.iter().map(|&x| modp::eval(&f, x, prime)).collect();
        assert_eq!(modp::interpolate(&xs, &ys, prime), f);
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("-3/6"), Some((BigInt::from(-1), BigInt::from(2))));
        assert_eq!(parse_rational("1.25"), Some((BigInt::from(5), BigInt::from(4))));
        assert_eq!(parse_rational("-0.5"), Some((BigInt::from(-1), BigInt::from(2))));
        assert_eq!(parse_rational("1728"), Some((BigInt::from(1728), BigInt::one())));
        assert_eq!(parse_rational("x"), None);
    }
}
