//! Integer q-series: the expansion of j and Laurent series whose
//! coefficients are only known below a tracked precision.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Truncated Laurent series `Σ coeffs[i] q^(val+i)`, exact for exponents
/// below `prec`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Laurent {
    pub val: i64,
    pub coeffs: Vec<BigInt>,
    pub prec: i64,
}

impl Laurent {
    pub fn zero(prec: i64) -> Laurent {
        Laurent { val: prec, coeffs: Vec::new(), prec }
    }

    pub fn one(prec: i64) -> Laurent {
        Laurent::monomial(BigInt::one(), 0, prec)
    }

    pub fn monomial(c: BigInt, e: i64, prec: i64) -> Laurent {
        if e >= prec {
            return Laurent::zero(prec);
        }
        Laurent { val: e, coeffs: vec![c], prec }.normalized()
    }

    /// Builds a series from a dense coefficient list starting at `val`.
    pub fn from_coeffs(val: i64, coeffs: Vec<BigInt>, prec: i64) -> Laurent {
        Laurent { val, coeffs, prec }.normalized()
    }

    fn normalized(mut self) -> Laurent {
        let keep = (self.prec - self.val).max(0) as usize;
        self.coeffs.truncate(keep);
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => Laurent::zero(self.prec),
            Some(k) => {
                self.coeffs.drain(..k);
                self.val += k as i64;
                while self.coeffs.last().is_some_and(|c| c.is_zero()) {
                    self.coeffs.pop();
                }
                self
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `q^e`; panics if `e` is beyond the known precision.
    pub fn coeff(&self, e: i64) -> BigInt {
        assert!(e < self.prec, "coefficient q^{e} beyond precision {}", self.prec);
        if e < self.val || e >= self.val + self.coeffs.len() as i64 {
            BigInt::zero()
        } else {
            self.coeffs[(e - self.val) as usize].clone()
        }
    }

    pub fn add(&self, o: &Laurent) -> Laurent {
        let prec = self.prec.min(o.prec);
        if self.is_zero() {
            return Laurent { prec, ..o.clone() }.normalized();
        }
        if o.is_zero() {
            return Laurent { prec, ..self.clone() }.normalized();
        }
        let val = self.val.min(o.val);
        let end = (self.val + self.coeffs.len() as i64)
            .max(o.val + o.coeffs.len() as i64)
            .min(prec);
        let mut coeffs = vec![BigInt::zero(); (end - val).max(0) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = self.val + i as i64;
            if e < end {
                coeffs[(e - val) as usize] += c;
            }
        }
        for (i, c) in o.coeffs.iter().enumerate() {
            let e = o.val + i as i64;
            if e < end {
                coeffs[(e - val) as usize] += c;
            }
        }
        Laurent { val, coeffs, prec }.normalized()
    }

    pub fn neg(&self) -> Laurent {
        Laurent {
            val: self.val,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            prec: self.prec,
        }
    }

    pub fn sub(&self, o: &Laurent) -> Laurent {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &BigInt) -> Laurent {
        Laurent {
            val: self.val,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
            prec: self.prec,
        }
        .normalized()
    }

    /// Exact division of every coefficient; `None` if some coefficient is
    /// not divisible.
    pub fn div_exact(&self, k: &BigInt) -> Option<Laurent> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            if !(c % k).is_zero() {
                return None;
            }
            coeffs.push(c / k);
        }
        Some(Laurent { val: self.val, coeffs, prec: self.prec })
    }

    pub fn mul(&self, o: &Laurent) -> Laurent {
        // a zero series still has an unknown tail; its valuation is its precision
        let prec = (self.prec + o.val).min(o.prec + self.val);
        if self.is_zero() || o.is_zero() {
            return Laurent::zero(prec);
        }
        let val = self.val + o.val;
        let len = (prec - val).max(0) as usize;
        let mut coeffs = vec![BigInt::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len || a.is_zero() {
                continue;
            }
            for (k, b) in o.coeffs.iter().enumerate().take(len - i) {
                coeffs[i + k] += a * b;
            }
        }
        Laurent { val, coeffs, prec }.normalized()
    }

    /// Substitutes `q ↦ q^k`.
    pub fn dilate(&self, k: i64) -> Laurent {
        assert!(k >= 1);
        let mut coeffs = vec![BigInt::zero(); ((self.coeffs.len() as i64 - 1).max(0) * k + 1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k as usize] = c.clone();
        }
        if self.is_zero() {
            return Laurent::zero(self.prec * k);
        }
        Laurent { val: self.val * k, coeffs, prec: self.prec * k }.normalized()
    }

    pub fn truncate(&self, prec: i64) -> Laurent {
        Laurent { prec: prec.min(self.prec), ..self.clone() }.normalized()
    }
}

fn sigma3(n: u64) -> BigInt {
    let mut s = BigInt::zero();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            s += BigInt::from(d).pow(3);
            let e = n / d;
            if e != d {
                s += BigInt::from(e).pow(3);
            }
        }
        d += 1;
    }
    s
}

/// Coefficients of Π_{n≥1}(1 − q^n) below `q^len` (Euler's pentagonal
/// number theorem).
pub fn eta_product(len: usize) -> Vec<i64> {
    let mut out = vec![0i64; len];
    let mut k: i64 = 0;
    loop {
        let mut any = false;
        for g in [k * (3 * k - 1) / 2, k * (3 * k + 1) / 2] {
            if (g as usize) < len {
                out[g as usize] = if k % 2 == 0 { 1 } else { -1 };
                any = true;
            }
            if k == 0 {
                break;
            }
        }
        if !any {
            break;
        }
        k += 1;
    }
    out
}

fn series_mul(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (k, y) in b.iter().enumerate().take(len - i) {
            out[i + k] += x * y;
        }
    }
    out
}

fn compute_qj(len: usize) -> Vec<BigInt> {
    // q·j = E4^3 / Π(1 − q^n)^24
    let mut e4 = vec![BigInt::zero(); len];
    e4[0] = BigInt::one();
    for (n, c) in e4.iter_mut().enumerate().skip(1) {
        *c = sigma3(n as u64) * 240;
    }
    let e4sq = series_mul(&e4, &e4, len);
    let e4cube = series_mul(&e4sq, &e4, len);
    let eta: Vec<BigInt> = eta_product(len).into_iter().map(BigInt::from).collect();
    let mut p = eta;
    // raise to the 24th power by squaring: 24 = 16 + 8
    let p2 = series_mul(&p, &p, len);
    let p4 = series_mul(&p2, &p2, len);
    let p8 = series_mul(&p4, &p4, len);
    let p16 = series_mul(&p8, &p8, len);
    p = series_mul(&p16, &p8, len);
    // divide by p (leading coefficient 1)
    let mut out = vec![BigInt::zero(); len];
    for n in 0..len {
        let mut c = e4cube[n].clone();
        for k in 1..=n {
            if !p[k].is_zero() {
                c -= &p[k] * &out[n - k];
            }
        }
        out[n] = c;
    }
    out
}

static QJ_CACHE: OnceLock<Mutex<Vec<BigInt>>> = OnceLock::new();

/// Coefficients `c_{-1}, c_0, c_1, …` of j, i.e. of q·j, up to `len` terms.
pub fn j_coefficients(len: usize) -> Vec<BigInt> {
    let cache = QJ_CACHE.get_or_init(|| Mutex::new(Vec::new()));
    let mut guard = cache.lock().unwrap();
    if guard.len() < len {
        *guard = compute_qj(len.max(2 * guard.len()));
    }
    guard[..len].to_vec()
}

/// j as a Laurent series known below `q^prec`.
pub fn j_series(prec: i64) -> Result<Laurent> {
    if prec < 0 {
        return Err(Error::Precision(format!("j series to q^{prec}")));
    }
    let c = j_coefficients((prec + 1) as usize);
    Ok(Laurent::from_coeffs(-1, c, prec))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j_expansion_matches_known_coefficients() {
        let c = j_coefficients(6);
        let expect = ["1", "744", "196884", "21493760", "864299970", "20245856256"];
        for (a, b) in c.iter().zip(expect) {
            assert_eq!(a.to_string(), b);
        }
    }

    #[test]
    fn pentagonal_against_direct_product() {
        let len = 40;
        let mut direct = vec![0i64; len];
        direct[0] = 1;
        for n in 1..len {
            for k in (n..len).rev() {
                direct[k] -= direct[k - n];
            }
        }
        assert_eq!(eta_product(len), direct);
    }

    #[test]
    fn laurent_precision_tracking() {
        let j = j_series(10).unwrap();
        let j2 = j.mul(&j);
        assert_eq!(j2.val, -2);
        assert_eq!(j2.prec, 9);
        assert_eq!(j2.coeff(-2), BigInt::one());
        assert_eq!(j2.coeff(-1), BigInt::from(1488));
        let d = j.dilate(2);
        assert_eq!(d.val, -2);
        assert_eq!(d.prec, 20);
        assert_eq!(d.coeff(-1), BigInt::zero());
        let z = j.sub(&j);
        assert!(z.is_zero());
        assert_eq!(z.prec, 10);
    }
}
