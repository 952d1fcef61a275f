//! Fixed-point ball arithmetic.
//!
//! A [`Real`] is a midpoint stored as an integer multiple of `2^-prec`
//! together with a radius bound [`Mag`]; every operation widens the radius
//! so that the true value always stays inside the ball. Certified rounding
//! of class-polynomial and resultant coefficients rests on this invariant.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

const MAN_BITS: u32 = 62;

/// Non-negative upper (or, where stated, lower) bound `man · 2^exp`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mag {
    man: u64,
    exp: i64,
}

fn bitlen128(x: u128) -> u32 {
    128 - x.leading_zeros()
}

impl Mag {
    pub const ZERO: Mag = Mag { man: 0, exp: 0 };

    fn normalize(man: u128, exp: i64, round_up: bool) -> Mag {
        if man == 0 {
            return Mag::ZERO;
        }
        let bits = bitlen128(man);
        if bits <= MAN_BITS {
            return Mag { man: man as u64, exp };
        }
        let shift = bits - MAN_BITS;
        let mut m = man >> shift;
        let lost = man & ((1u128 << shift) - 1) != 0;
        if round_up && lost {
            m += 1;
        }
        if bitlen128(m) > MAN_BITS {
            // carry out of the mantissa
            return Mag::normalize(m, exp + shift as i64, round_up);
        }
        Mag { man: m as u64, exp: exp + shift as i64 }
    }

    pub fn is_zero(&self) -> bool {
        self.man == 0
    }

    pub fn from_u64(x: u64) -> Mag {
        Mag::normalize(x as u128, 0, true)
    }

    /// `2^e`
    pub fn pow2(e: i64) -> Mag {
        Mag { man: 1, exp: e }
    }

    /// Upper bound for `|x| · 2^shift`.
    pub fn from_big_upper(x: &BigInt, shift: i64) -> Mag {
        Mag::from_biguint_upper(x.magnitude(), shift)
    }

    pub fn from_biguint_upper(x: &BigUint, shift: i64) -> Mag {
        let bits = x.bits() as u32;
        if bits <= MAN_BITS {
            return Mag::normalize(x.to_u64().unwrap() as u128, shift, true);
        }
        let s = bits - MAN_BITS;
        let top: BigUint = x >> s;
        Mag::normalize(top.to_u64().unwrap() as u128 + 1, shift + s as i64, true)
    }

    /// Lower bound for `|x| · 2^shift`.
    pub fn from_big_lower(x: &BigInt, shift: i64) -> Mag {
        let x = x.magnitude();
        let bits = x.bits() as u32;
        if bits <= MAN_BITS {
            return Mag::normalize(x.to_u64().unwrap() as u128, shift, false);
        }
        let s = bits - MAN_BITS;
        let top: BigUint = x >> s;
        Mag::normalize(top.to_u64().unwrap() as u128, shift + s as i64, false)
    }

    /// Upper bound for a finite non-negative `f64`.
    pub fn from_f64_upper(x: f64) -> Mag {
        assert!(x.is_finite() && x >= 0.0, "Mag::from_f64_upper({x})");
        if x == 0.0 {
            return Mag::ZERO;
        }
        let bits = x.to_bits();
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (man, exp) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Mag::normalize(man as u128 + 1, exp, true)
    }

    /// Exponent of the leading bit plus one: `value < 2^top()`.
    pub fn top(&self) -> i64 {
        if self.man == 0 {
            i64::MIN
        } else {
            64 - self.man.leading_zeros() as i64 + self.exp
        }
    }

    pub fn add(&self, other: &Mag) -> Mag {
        if self.is_zero() {
            return *other;
        }
        if other.is_zero() {
            return *self;
        }
        let (hi, lo) = if self.exp >= other.exp { (self, other) } else { (other, self) };
        let diff = hi.exp - lo.exp;
        if diff > 64 {
            // lo < 2^(lo.exp+62) <= 2^(hi.exp-2), absorbed by one unit of hi
            return Mag::normalize(hi.man as u128 + 1, hi.exp, true);
        }
        let m = ((hi.man as u128) << diff) + lo.man as u128;
        Mag::normalize(m, lo.exp, true)
    }

    pub fn mul(&self, other: &Mag) -> Mag {
        if self.is_zero() || other.is_zero() {
            return Mag::ZERO;
        }
        Mag::normalize(self.man as u128 * other.man as u128, self.exp + other.exp, true)
    }

    pub fn mul_u64(&self, k: u64) -> Mag {
        self.mul(&Mag::from_u64(k))
    }

    pub fn mul_2exp(&self, k: i64) -> Mag {
        if self.is_zero() {
            return *self;
        }
        Mag { man: self.man, exp: self.exp + k }
    }

    /// Upper bound for `self / den` where `den` is a lower bound.
    pub fn div(&self, den: &Mag) -> Mag {
        assert!(!den.is_zero(), "Mag::div by zero");
        if self.is_zero() {
            return Mag::ZERO;
        }
        let q = ((self.man as u128) << 64) / den.man as u128 + 1;
        Mag::normalize(q, self.exp - den.exp - 64, true)
    }

    /// Lower bound for `self - other` (self a lower bound, other an upper
    /// bound); `None` when the difference may be non-positive.
    pub fn sub_lower(&self, other: &Mag) -> Option<Mag> {
        if self.is_zero() {
            return None;
        }
        if other.is_zero() {
            return Some(*self);
        }
        if self.exp > other.exp + 64 {
            return if self.man > 1 {
                Some(Mag::normalize(self.man as u128 - 1, self.exp, false))
            } else {
                Some(Mag::pow2(self.exp - 1))
            };
        }
        if other.exp > self.exp + 64 {
            return None;
        }
        let e = self.exp.min(other.exp);
        let a = (self.man as u128) << (self.exp - e);
        let b = (other.man as u128) << (other.exp - e);
        if a <= b {
            return None;
        }
        Some(Mag::normalize(a - b, e, false))
    }

    pub fn cmp_value(&self, other: &Mag) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        let (ta, tb) = (self.top(), other.top());
        if ta != tb {
            return ta.cmp(&tb);
        }
        let e = self.exp.min(other.exp);
        let a = (self.man as u128) << (self.exp - e);
        let b = (other.man as u128) << (other.exp - e);
        a.cmp(&b)
    }

    pub fn le(&self, other: &Mag) -> bool {
        self.cmp_value(other) != Ordering::Greater
    }

    pub fn lt(&self, other: &Mag) -> bool {
        self.cmp_value(other) == Ordering::Less
    }

    pub fn max(self, other: Mag) -> Mag {
        if self.lt(&other) {
            other
        } else {
            self
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let e = self.exp.clamp(-2000, 2000) as i32;
        self.man as f64 * 2f64.powi(e)
    }

    /// Rough log2 of the bound (for precision estimates only).
    pub fn log2(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        (self.man as f64).log2() + self.exp as f64
    }
}

/// A real ball `mid·2^-prec ± rad`.
#[derive(Clone, Debug)]
pub struct Real {
    mid: BigInt,
    rad: Mag,
    prec: u32,
}

fn round_shift(x: &BigInt, k: u32) -> BigInt {
    if k == 0 {
        return x.clone();
    }
    // round half away from zero via floor((x + 2^(k-1)) / 2^k)
    let half = BigInt::one() << (k - 1);
    (x + half) >> k
}

impl Real {
    pub fn zero(prec: u32) -> Real {
        Real { mid: BigInt::zero(), rad: Mag::ZERO, prec }
    }

    pub fn from_int(n: &BigInt, prec: u32) -> Real {
        Real { mid: n << prec, rad: Mag::ZERO, prec }
    }

    pub fn from_i64(n: i64, prec: u32) -> Real {
        Real::from_int(&BigInt::from(n), prec)
    }

    /// `num/den` rounded, radius one ulp.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Real {
        assert!(!den.is_zero());
        let scaled: BigInt = num << prec;
        let (q, r) = scaled.div_rem(den);
        if r.is_zero() {
            return Real { mid: q, rad: Mag::ZERO, prec };
        }
        Real { mid: q, rad: Mag::pow2(-(prec as i64)), prec }
    }

    /// Ball with the given midpoint (as a binary fraction) and radius.
    pub fn from_parts(mid: BigInt, rad: Mag, prec: u32) -> Real {
        Real { mid, rad, prec }
    }

    pub fn from_f64(x: f64, prec: u32) -> Real {
        assert!(x.is_finite());
        // exact conversion of the binary value of x
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (man, exp) = if raw_exp == 0 {
            (frac, -1074i64)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        let m = BigInt::from(man) * sign;
        let total = exp + prec as i64;
        if total >= 0 {
            Real { mid: m << total as u32, rad: Mag::ZERO, prec }
        } else {
            let k = (-total) as u32;
            Real { mid: m >> k, rad: Mag::pow2(-(prec as i64)), prec }
        }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn mid(&self) -> &BigInt {
        &self.mid
    }

    pub fn rad(&self) -> Mag {
        self.rad
    }

    fn ulp(&self) -> Mag {
        Mag::pow2(-(self.prec as i64))
    }

    pub fn add_error(&self, err: &Mag) -> Real {
        Real { mid: self.mid.clone(), rad: self.rad.add(err), prec: self.prec }
    }

    pub fn with_prec(&self, prec: u32) -> Real {
        match prec.cmp(&self.prec) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => Real {
                mid: &self.mid << (prec - self.prec),
                rad: self.rad,
                prec,
            },
            Ordering::Less => {
                let k = self.prec - prec;
                let mid = round_shift(&self.mid, k);
                let exact = (&mid << k) == self.mid;
                let rad = if exact { self.rad } else { self.rad.add(&Mag::pow2(-(prec as i64))) };
                Real { mid, rad, prec }
            }
        }
    }

    /// Upper bound of `|x|` over the ball.
    pub fn abs_upper(&self) -> Mag {
        Mag::from_big_upper(&self.mid, -(self.prec as i64)).add(&self.rad)
    }

    /// Lower bound of `|x|` over the ball, `None` if the ball touches zero.
    pub fn abs_lower(&self) -> Option<Mag> {
        Mag::from_big_lower(&self.mid, -(self.prec as i64)).sub_lower(&self.rad)
    }

    pub fn contains_zero(&self) -> bool {
        self.abs_lower().is_none()
    }

    pub fn is_positive(&self) -> bool {
        self.mid.is_positive() && !self.contains_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mid.is_negative() && !self.contains_zero()
    }

    pub fn neg(&self) -> Real {
        Real { mid: -&self.mid, rad: self.rad, prec: self.prec }
    }

    pub fn mul_int(&self, n: &BigInt) -> Real {
        Real {
            mid: &self.mid * n,
            rad: self.rad.mul(&Mag::from_big_upper(n, 0)),
            prec: self.prec,
        }
    }

    pub fn mul_i64(&self, n: i64) -> Real {
        self.mul_int(&BigInt::from(n))
    }

    /// Multiplication by `2^k`, exact for k ≥ 0.
    pub fn mul_2exp(&self, k: i64) -> Real {
        if k >= 0 {
            Real {
                mid: &self.mid << k as u32,
                rad: self.rad.mul_2exp(k),
                prec: self.prec,
            }
        } else {
            let s = (-k) as u32;
            let mid = round_shift(&self.mid, s);
            let exact = (&mid << s) == self.mid;
            let mut rad = self.rad.mul_2exp(k);
            if !exact {
                rad = rad.add(&self.ulp());
            }
            Real { mid, rad, prec: self.prec }
        }
    }

    pub fn div_u64(&self, k: u64) -> Real {
        assert!(k > 0);
        let kb = BigInt::from(k);
        let (q, r) = self.mid.div_rem(&kb);
        let mut rad = self.rad.div(&Mag::normalize(k as u128, 0, false));
        if !r.is_zero() {
            rad = rad.add(&self.ulp());
        }
        Real { mid: q, rad, prec: self.prec }
    }

    pub fn mul(&self, other: &Real) -> Real {
        assert_eq!(self.prec, other.prec, "precision mismatch");
        let prod = &self.mid * &other.mid;
        let mid = prod >> self.prec;
        let a = Mag::from_big_upper(&self.mid, -(self.prec as i64));
        let b = Mag::from_big_upper(&other.mid, -(self.prec as i64));
        let rad = a
            .mul(&other.rad)
            .add(&b.mul(&self.rad))
            .add(&self.rad.mul(&other.rad))
            .add(&self.ulp());
        Real { mid, rad, prec: self.prec }
    }

    pub fn sqr(&self) -> Real {
        self.mul(self)
    }

    /// Division; `None` when the divisor ball contains zero.
    pub fn div(&self, other: &Real) -> Option<Real> {
        assert_eq!(self.prec, other.prec, "precision mismatch");
        let den_lower = other.abs_lower()?;
        let num: BigInt = &self.mid << self.prec;
        let mid = num.div_floor(&other.mid);
        // |x/y - a/b| <= (ra|b| + |a|rb) / (|b|(|b|-rb))
        let a = Mag::from_big_upper(&self.mid, -(self.prec as i64));
        let b_up = Mag::from_big_upper(&other.mid, -(self.prec as i64));
        let b_low = Mag::from_big_lower(&other.mid, -(self.prec as i64));
        let numer = self.rad.mul(&b_up).add(&a.mul(&other.rad));
        let rad = numer.div(&b_low.mul(&den_lower)).add(&self.ulp());
        Some(Real { mid, rad, prec: self.prec })
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.mid.bits() as i64;
        if bits < 1000 {
            self.mid.to_f64().unwrap() * 2f64.powi(-(self.prec as i32))
        } else {
            let s = bits - 900;
            (&self.mid >> s as u32).to_f64().unwrap() * 2f64.powf((s - self.prec as i64) as f64)
        }
    }

    /// The unique integer in the ball, provided the midpoint lies within 1/4
    /// of it and the whole ball lies within 1/2 of it.
    pub fn round_certified(&self) -> Option<BigInt> {
        let n = round_shift(&self.mid, self.prec);
        let diff = &self.mid - (&n << self.prec);
        let dist = Mag::from_big_upper(&diff, -(self.prec as i64));
        if !dist.le(&Mag::pow2(-2)) {
            return None;
        }
        if !dist.add(&self.rad).lt(&Mag::pow2(-1)) {
            return None;
        }
        Some(n)
    }

    /// Nearest integer to the midpoint (no certificate).
    pub fn round_mid(&self) -> BigInt {
        round_shift(&self.mid, self.prec)
    }

    /// Decimal rendering of the midpoint with `digits` fractional digits.
    pub fn to_decimal(&self, digits: u32) -> String {
        let scaled = round_shift(&(&self.mid * BigInt::from(10u32).pow(digits)), self.prec);
        let neg = scaled.is_negative();
        let s = scaled.magnitude().to_string();
        let s = if s.len() <= digits as usize {
            format!("{}{}", "0".repeat(digits as usize + 1 - s.len()), s)
        } else {
            s
        };
        let (ip, fp) = s.split_at(s.len() - digits as usize);
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push_str(ip);
        if digits > 0 {
            out.push('.');
            out.push_str(fp);
        }
        out
    }

    /// √n for a non-negative integer.
    pub fn sqrt_int(n: &BigUint, prec: u32) -> Real {
        let scaled: BigUint = n << (2 * prec);
        let r = scaled.sqrt();
        let exact = &r * &r == scaled;
        Real {
            mid: BigInt::from_biguint(Sign::Plus, r),
            rad: if exact { Mag::ZERO } else { Mag::pow2(-(prec as i64)) },
            prec,
        }
    }

    pub fn pi(prec: u32) -> Real {
        let mid = pi_fixed(prec);
        Real { mid, rad: Mag::pow2(-(prec as i64)), prec }
    }

    /// Natural exponential.
    pub fn exp(&self) -> Real {
        let x_est = self.to_f64();
        let out_bits = (x_est.max(0.0) * std::f64::consts::LOG2_E).ceil() as u32;
        let mag_bits = self.abs_upper().top().max(0) as u32;
        let s = mag_bits + 8;
        let wp = self.prec + out_bits + s + 24;
        let t = self.with_prec(wp).mul_2exp(-(s as i64));
        let mut y = exp_taylor_small(&t);
        for _ in 0..s {
            y = y.sqr();
        }
        y.with_prec(self.prec)
    }

    /// Whether the whole ball lies below `2^e` in absolute value.
    pub fn abs_below_pow2(&self, e: i64) -> bool {
        self.abs_upper().lt(&Mag::pow2(e))
    }
}

/// Taylor series of exp at |t| <= 2^-8 with a rigorous tail bound.
fn exp_taylor_small(t: &Real) -> Real {
    assert!(t.abs_upper().le(&Mag::pow2(-8)), "argument not reduced");
    let prec = t.prec;
    let n_terms = (prec as u64 + 8) / 8 + 2;
    let one = Real::from_i64(1, prec);
    let mut acc = one.clone();
    for k in (1..n_terms).rev() {
        acc = one.add(&t.mul(&acc).div_u64(k));
    }
    // remainder <= 2·|t|^N/N! <= 2^(1-8N)
    acc.add_error(&Mag::pow2(1 - 8 * n_terms as i64))
}

static PI_CACHE: OnceLock<Mutex<Option<(u32, BigInt)>>> = OnceLock::new();

/// π·2^prec rounded, with error below one unit.
fn pi_fixed(prec: u32) -> BigInt {
    let cache = PI_CACHE.get_or_init(|| Mutex::new(None));
    let mut guard = cache.lock().unwrap();
    if let Some((p, v)) = guard.as_ref() {
        if *p >= prec + 2 {
            return round_shift(v, *p - prec);
        }
    }
    let p = (prec + 64).max(256);
    let g = 32;
    let wp = p + g;
    let a5 = arctan_inv(5, wp);
    let a239 = arctan_inv(239, wp);
    let v: BigInt = a5 * 16 - a239 * 4;
    let v = round_shift(&v, g);
    *guard = Some((p, v.clone()));
    round_shift(&v, p - prec)
}

/// arctan(1/x)·2^wp with truncation error at most the number of terms.
fn arctan_inv(x: u64, wp: u32) -> BigInt {
    let one: BigInt = BigInt::one() << wp;
    let x2 = BigInt::from(x * x);
    let mut power = one / BigInt::from(x);
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    sum
}

impl Add for &Real {
    type Output = Real;
    fn add(self, other: &Real) -> Real {
        assert_eq!(self.prec, other.prec, "precision mismatch");
        Real { mid: &self.mid + &other.mid, rad: self.rad.add(&other.rad), prec: self.prec }
    }
}

impl Sub for &Real {
    type Output = Real;
    fn sub(self, other: &Real) -> Real {
        assert_eq!(self.prec, other.prec, "precision mismatch");
        Real { mid: &self.mid - &other.mid, rad: self.rad.add(&other.rad), prec: self.prec }
    }
}

impl Mul for &Real {
    type Output = Real;
    fn mul(self, other: &Real) -> Real {
        Real::mul(self, other)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::neg(self)
    }
}

impl Real {
    pub fn add(&self, other: &Real) -> Real {
        self + other
    }
    pub fn sub(&self, other: &Real) -> Real {
        self - other
    }
}

/// A complex ball given by real and imaginary balls.
#[derive(Clone, Debug)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Complex {
        assert_eq!(re.prec, im.prec);
        Complex { re, im }
    }

    pub fn zero(prec: u32) -> Complex {
        Complex { re: Real::zero(prec), im: Real::zero(prec) }
    }

    pub fn one(prec: u32) -> Complex {
        Complex { re: Real::from_i64(1, prec), im: Real::zero(prec) }
    }

    pub fn from_real(re: Real) -> Complex {
        let p = re.prec;
        Complex { re, im: Real::zero(p) }
    }

    pub fn from_int(n: &BigInt, prec: u32) -> Complex {
        Complex::from_real(Real::from_int(n, prec))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec
    }

    pub fn with_prec(&self, prec: u32) -> Complex {
        Complex { re: self.re.with_prec(prec), im: self.im.with_prec(prec) }
    }

    pub fn add(&self, o: &Complex) -> Complex {
        Complex { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    pub fn sub(&self, o: &Complex) -> Complex {
        Complex { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    pub fn neg(&self) -> Complex {
        Complex { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conj(&self) -> Complex {
        Complex { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn mul(&self, o: &Complex) -> Complex {
        let re = &(&self.re * &o.re) - &(&self.im * &o.im);
        let im = &(&self.re * &o.im) + &(&self.im * &o.re);
        Complex { re, im }
    }

    pub fn sqr(&self) -> Complex {
        let re = &self.re.sqr() - &self.im.sqr();
        let im = (&self.re * &self.im).mul_2exp(1);
        Complex { re, im }
    }

    pub fn mul_real(&self, r: &Real) -> Complex {
        Complex { re: &self.re * r, im: &self.im * r }
    }

    pub fn mul_int(&self, n: &BigInt) -> Complex {
        Complex { re: self.re.mul_int(n), im: self.im.mul_int(n) }
    }

    pub fn mul_i64(&self, n: i64) -> Complex {
        self.mul_int(&BigInt::from(n))
    }

    pub fn mul_2exp(&self, k: i64) -> Complex {
        Complex { re: self.re.mul_2exp(k), im: self.im.mul_2exp(k) }
    }

    pub fn div_u64(&self, k: u64) -> Complex {
        Complex { re: self.re.div_u64(k), im: self.im.div_u64(k) }
    }

    /// Multiplication by i.
    pub fn mul_i(&self) -> Complex {
        Complex { re: self.im.neg(), im: self.re.clone() }
    }

    pub fn norm_sqr(&self) -> Real {
        &self.re.sqr() + &self.im.sqr()
    }

    pub fn inv(&self) -> Option<Complex> {
        let n = self.norm_sqr();
        let re = self.re.div(&n)?;
        let im = self.im.neg().div(&n)?;
        Some(Complex { re, im })
    }

    pub fn div(&self, o: &Complex) -> Option<Complex> {
        let n = o.norm_sqr();
        let re = self.re.mul(&o.re).add(&self.im.mul(&o.im));
        let im = self.im.mul(&o.re).sub(&self.re.mul(&o.im));
        Some(Complex { re: re.div(&n)?, im: im.div(&n)? })
    }

    /// Upper bound of |z|.
    pub fn abs_upper(&self) -> Mag {
        let a = self.re.abs_upper();
        let b = self.im.abs_upper();
        // |z| <= |re| + |im|
        a.add(&b)
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    /// Largest of the two radii.
    pub fn rad(&self) -> Mag {
        self.re.rad.max(self.im.rad)
    }

    pub fn add_error(&self, err: &Mag) -> Complex {
        Complex { re: self.re.add_error(err), im: self.im.add_error(err) }
    }

    /// e^(iθ) for a real ball θ with |θ| modest (callers reduce mod 2π).
    pub fn exp_i(theta: &Real) -> Complex {
        let mag_bits = theta.abs_upper().top().max(0) as u32;
        let s = mag_bits + 8;
        let wp = theta.prec + s + 24;
        let t = theta.with_prec(wp).mul_2exp(-(s as i64));
        let w = Complex { re: Real::zero(wp), im: t };
        let mut y = exp_taylor_small_complex(&w);
        for _ in 0..s {
            y = y.sqr();
        }
        y.with_prec(theta.prec)
    }

    pub fn exp(&self) -> Complex {
        let r = self.re.exp();
        Complex::exp_i(&self.im).mul_real(&r)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

fn exp_taylor_small_complex(w: &Complex) -> Complex {
    assert!(w.abs_upper().le(&Mag::pow2(-7)), "argument not reduced");
    let prec = w.prec();
    let n_terms = (prec as u64 + 8) / 7 + 2;
    let one = Complex::one(prec);
    let mut acc = one.clone();
    for k in (1..n_terms).rev() {
        acc = one.add(&w.mul(&acc).div_u64(k));
    }
    acc.add_error(&Mag::pow2(1 - 7 * n_terms as i64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mag_arithmetic_is_upper_bound() {
        let a = Mag::from_f64_upper(3.5);
        let b = Mag::from_f64_upper(0.25);
        assert!(a.add(&b).to_f64() >= 3.75);
        assert!(a.mul(&b).to_f64() >= 0.875);
        assert!(Mag::from_u64(7).div(&Mag::pow2(-2)).to_f64() >= 28.0);
        let seven = Mag::from_u64(7);
        let d = seven.sub_lower(&Mag::pow2(-2)).unwrap();
        assert!(d.to_f64() <= 6.75 && d.to_f64() > 6.74);
        assert!(b.sub_lower(&a).is_none());
        assert!(Mag::pow2(-3).lt(&Mag::pow2(-2)));
    }

    #[test]
    fn pi_digits() {
        let p = Real::pi(200);
        assert_eq!(p.to_decimal(30), "3.141592653589793238462643383280");
        let q = Real::pi(64);
        assert!((q.to_f64() - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn exp_and_rounding() {
        let one = Real::from_i64(1, 128);
        let e = one.exp();
        assert_eq!(e.to_decimal(20), "2.71828182845904523536");
        assert!(e.rad().to_f64() < 1e-30);
        // e^{π√163} is within 1e-12 of an integer
        let x = &Real::pi(400) * &Real::sqrt_int(&BigUint::from(163u32), 400);
        let v = x.exp();
        let n = v.round_mid();
        assert_eq!(n.to_string(), "262537412640768744");
        assert!(v.round_certified().is_some());
    }

    #[test]
    fn exp_i_unit_circle() {
        let pi = Real::pi(160);
        let z = Complex::exp_i(&pi.mul_2exp(-1));
        assert!(z.re.abs_below_pow2(-140));
        assert!((z.im.to_f64() - 1.0).abs() < 1e-40);
    }

    #[test]
    fn division_contains_true_quotient() {
        let a = Real::from_i64(1, 100);
        let b = Real::from_i64(3, 100);
        let q = a.div(&b).unwrap();
        let back = q.mul_i64(3);
        let diff = &back - &a;
        assert!(diff.contains_zero());
        assert!(Real::zero(100).div(&Real::zero(100)).is_none() || true);
        assert!(a.div(&Real::zero(100)).is_none());
    }
}
