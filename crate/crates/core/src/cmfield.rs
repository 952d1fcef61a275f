//! CM points on the j-line: certified values of j, Hilbert class
//! polynomials and the action of the class group on CM points.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::ball::{Complex, Mag, Real};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::quadforms::{class_group, reduced_forms, FormClassGroup, ImaginaryQuadraticOrder, QuadraticForm};

/// A point of the upper half plane given exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tau {
    /// re_num/re_den + i·im_num/im_den with im > 0.
    Rational { re: (BigInt, BigInt), im: (BigInt, BigInt) },
    /// (−b + i√|D|)/(2a) for a positive definite form.
    Quadratic(QuadraticForm),
}

impl Tau {
    pub fn rational(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Tau {
        Tau::Rational {
            re: (BigInt::from(re_num), BigInt::from(re_den)),
            im: (BigInt::from(im_num), BigInt::from(im_den)),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Tau::Rational { re, im } => {
                if re.1.is_zero() || im.1.is_zero() {
                    return Err(Error::InvalidInput("zero denominator in tau".into()));
                }
                if (im.0.is_positive() != im.1.is_positive()) || im.0.is_zero() {
                    return Err(Error::InvalidInput("tau must lie in the upper half plane".into()));
                }
                Ok(())
            }
            Tau::Quadratic(f) => f.reduce().map(|_| ()),
        }
    }

    /// An SL₂(ℤ)-equivalent point in the standard fundamental domain,
    /// found by exact arithmetic.
    pub fn reduced(&self) -> Result<Tau> {
        self.validate()?;
        match self {
            Tau::Quadratic(f) => Ok(Tau::Quadratic(f.reduce()?)),
            Tau::Rational { re, im } => {
                let (mut xn, mut xd) = norm_frac(re.0.clone(), re.1.clone());
                let (mut yn, mut yd) = norm_frac(im.0.clone(), im.1.clone());
                loop {
                    // translate: x ∈ [−1/2, 1/2)
                    let two_xd: BigInt = &xd * 2;
                    let num: BigInt = &xn * 2 + &xd;
                    let shift = num.div_floor(&two_xd);
                    xn -= &shift * &xd;
                    // |τ|² = x² + y² as a fraction
                    let n2 = (&xn * &xn) * (&yd * &yd) + (&yn * &yn) * (&xd * &xd);
                    let d2 = (&xd * &xd) * (&yd * &yd);
                    if n2 >= d2 {
                        break;
                    }
                    // τ ↦ −1/τ = (−x + i y)/|τ|²
                    let (nx, dx) = norm_frac(-&xn * &d2, &xd * &n2);
                    let (ny, dy) = norm_frac(&yn * &d2, &yd * &n2);
                    xn = nx;
                    xd = dx;
                    yn = ny;
                    yd = dy;
                }
                Ok(Tau::Rational { re: (xn, xd), im: (yn, yd) })
            }
        }
    }

    /// Ball enclosure at the given absolute precision.
    pub fn to_ball(&self, prec: u32) -> Complex {
        match self {
            Tau::Rational { re, im } => Complex::new(
                Real::from_ratio(&re.0, &re.1, prec),
                Real::from_ratio(&im.0, &im.1, prec),
            ),
            Tau::Quadratic(f) => {
                let d = f.disc();
                let two_a: BigInt = &f.a * 2;
                let re = Real::from_ratio(&-&f.b, &two_a, prec);
                let s = Real::sqrt_int(d.magnitude(), prec + 8).with_prec(prec);
                let im = s.div(&Real::from_int(&two_a, prec)).expect("a > 0");
                Complex::new(re, im)
            }
        }
    }

    /// Rough value of Im τ.
    pub fn im_f64(&self) -> f64 {
        match self {
            Tau::Rational { im, .. } => ratio_f64(&im.0, &im.1),
            Tau::Quadratic(f) => {
                let d = f.disc().magnitude().to_f64().unwrap_or(f64::MAX);
                d.sqrt() / (2.0 * f.a.to_f64().unwrap_or(f64::MAX))
            }
        }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        match self {
            Tau::Rational { re, im } => (ratio_f64(&re.0, &re.1), ratio_f64(&im.0, &im.1)),
            Tau::Quadratic(f) => (-ratio_f64(&f.b, &(&f.a * 2)), self.im_f64()),
        }
    }

    /// Scales τ by the positive rational n/d (exact).
    pub fn scaled(&self, n: i64, d: i64) -> Result<Tau> {
        match self {
            Tau::Rational { re, im } => Ok(Tau::Rational {
                re: norm_frac(&re.0 * n, &re.1 * d),
                im: norm_frac(&im.0 * n, &im.1 * d),
            }),
            Tau::Quadratic(_) => Err(Error::InvalidInput("scaling is defined for rational tau only".into())),
        }
    }
}

fn norm_frac(n: BigInt, d: BigInt) -> (BigInt, BigInt) {
    let g = n.gcd(&d);
    let (mut n, mut d) = (n / &g, d / &g);
    if d.is_negative() {
        n = -n;
        d = -d;
    }
    (n, d)
}

fn ratio_f64(n: &BigInt, d: &BigInt) -> f64 {
    let bits = n.bits().max(d.bits()) as i64;
    if bits < 1000 {
        n.to_f64().unwrap() / d.to_f64().unwrap()
    } else {
        let s = (bits - 900) as u32;
        (n >> s).to_f64().unwrap() / (d >> s).to_f64().unwrap()
    }
}

/// (−b + i√|D|)/(2a) for a positive definite form, at the given precision.
pub fn cm_tau(form: &QuadraticForm, prec: u32) -> Result<Complex> {
    form.reduce()?;
    Ok(Tau::Quadratic(form.clone()).to_ball(prec))
}

fn sigma3_table(n: usize) -> Vec<BigInt> {
    let mut s = vec![BigInt::zero(); n + 1];
    for d in 1..=n {
        let d3 = BigInt::from(d as u64).pow(3);
        let mut k = d;
        while k <= n {
            s[k] += &d3;
            k += d;
        }
    }
    s
}

/// j at a reduced point given by x = Re τ, y = Im τ balls of precision wp.
fn j_reduced(x: &Real, y: &Real) -> Result<Complex> {
    let wp = x.prec();
    let two_pi = Real::pi(wp).mul_2exp(1);
    let theta = &two_pi * x;
    let e_y = (&two_pi * y).exp();
    let r_ball = Real::from_i64(1, wp)
        .div(&e_y)
        .ok_or_else(|| Error::Precision("|q| enclosure contains zero".into()))?;
    let r = r_ball.abs_upper();
    if !r.lt(&Mag::pow2(-1)) {
        return Err(Error::Precision("tau not reduced far enough into the upper half plane".into()));
    }
    let rot = Complex::exp_i(&theta);
    let q = rot.mul_real(&r_ball);
    let q_inv = rot.conj().mul_real(&e_y);

    let target = Mag::pow2(-(wp as i64));
    // E4 tail: 240·Σ_{n>N} σ3(n) r^n with σ3(n) ≤ 1.21 n³
    let mut n_e4 = 1usize;
    let e4_tail = loop {
        let n1 = (n_e4 + 1) as u64;
        let mut rp = Mag::from_u64(1);
        for _ in 0..n1 {
            rp = rp.mul(&r);
        }
        let ratio = Mag::from_u64((n1 + 1).pow(3)).div(&Mag::from_u64(n1.pow(3))).mul(&r);
        let one_minus = Mag::from_u64(1).sub_lower(&ratio);
        if let Some(den) = one_minus {
            let tail = Mag::from_u64(n1.pow(3))
                .mul(&rp)
                .mul(&Mag::from_f64_upper(240.0 * 1.21))
                .div(&den);
            if tail.le(&target) {
                break tail;
            }
        }
        n_e4 += 1;
    };
    // pentagonal exponents up to E
    let mut pent: Vec<(usize, i64)> = vec![(0, 1)];
    let mut k = 1i64;
    let pent_tail = loop {
        let g1 = (k * (3 * k - 1) / 2) as usize;
        let g2 = (k * (3 * k + 1) / 2) as usize;
        let sign = if k % 2 == 0 { 1 } else { -1 };
        pent.push((g1, sign));
        pent.push((g2, sign));
        let next = ((k + 1) * (3 * k + 2) / 2) as u64;
        let mut rp = Mag::from_u64(1);
        for _ in 0..next {
            rp = rp.mul(&r);
        }
        let one_minus = Mag::from_u64(1).sub_lower(&r).expect("r < 1/2");
        let tail = rp.div(&one_minus);
        if tail.le(&target) {
            break tail;
        }
        k += 1;
    };
    let max_pow = pent.iter().map(|&(g, _)| g).max().unwrap().max(n_e4);
    let mut powers = Vec::with_capacity(max_pow + 1);
    powers.push(Complex::one(wp));
    for i in 1..=max_pow {
        let next = powers[i - 1].mul(&q);
        powers.push(next);
    }
    let sig = sigma3_table(n_e4);
    let mut e4 = Complex::zero(wp);
    for n in 1..=n_e4 {
        e4 = e4.add(&powers[n].mul_int(&sig[n]));
    }
    let e4 = e4.mul_i64(240).add(&Complex::one(wp)).add_error(&e4_tail);
    let mut p = Complex::zero(wp);
    for &(g, s) in &pent {
        p = if s > 0 { p.add(&powers[g]) } else { p.sub(&powers[g]) };
    }
    let p = p.add_error(&pent_tail);
    let p2 = p.sqr();
    let p4 = p2.sqr();
    let p8 = p4.sqr();
    let p16 = p8.sqr();
    let p24 = p16.mul(&p8);
    let e4_3 = e4.sqr().mul(&e4);
    let num = e4_3.mul(&q_inv);
    num.div(&p24)
        .ok_or_else(|| Error::Precision("eta product enclosure contains zero".into()))
}

/// j(τ) with absolute error at most 2^(−precision).
pub fn j_invariant(tau: &Tau, precision: u32) -> Result<Complex> {
    if precision < 64 {
        return Err(Error::Precision(format!(
            "precision {precision} is below the supported minimum of 64 bits"
        )));
    }
    let red = tau.reduced()?;
    let y = red.im_f64();
    let mag_bits = (2.0 * std::f64::consts::PI * y * std::f64::consts::LOG2_E).ceil() as u32 + 16;
    let mut wp = precision + mag_bits + 40;
    let target = Mag::pow2(-(precision as i64) - 1);
    for _ in 0..6 {
        let z = red.to_ball(wp);
        let v = j_reduced(&z.re, &z.im)?;
        let err = v.rad();
        if err.le(&target) {
            return Ok(v.with_prec(precision + 2));
        }
        let deficit = (err.log2() + precision as f64).ceil().max(8.0) as u32;
        wp += deficit + 32;
    }
    Err(Error::Precision(format!("could not reach {precision} bits for j(tau)")))
}

/// A CM point with its exact data and numerical j-value.
#[derive(Clone, Debug)]
pub struct CMPoint {
    pub order: ImaginaryQuadraticOrder,
    pub form: QuadraticForm,
    pub tau: Complex,
    pub j_value: Complex,
}

/// The Hilbert class polynomial with provenance of its certification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassPolynomial {
    pub disc: BigInt,
    pub poly: Poly,
    /// Working precision (bits) at which every coefficient was certified.
    pub bits: u32,
    /// Number of precision attempts used (1 = first attempt).
    pub attempts: u32,
}

impl ClassPolynomial {
    pub fn degree(&self) -> usize {
        self.poly.degree().max(0) as usize
    }

    /// Coefficients in descending degree order.
    pub fn coeffs_descending(&self) -> Vec<BigInt> {
        self.poly.coeffs().iter().rev().cloned().collect()
    }
}

/// Initial working precision for the class polynomial of discriminant d.
pub fn initial_bits(d: &BigInt, forms: &[QuadraticForm]) -> u32 {
    let sqrt_d = d.magnitude().to_f64().unwrap().sqrt();
    let s: f64 = forms.iter().map(|f| 1.0 / f.a.to_f64().unwrap()).sum();
    (std::f64::consts::PI * sqrt_d * s / std::f64::consts::LN_2).ceil() as u32 + 64
}

const MAX_RETRIES: u32 = 4;

/// Π (X − j(τ_f)) over the reduced forms of discriminant d, rounded to an
/// integer polynomial under a certificate; the precision is doubled on
/// failure at most four times.
pub fn hilbert_class_poly(d: &BigInt) -> Result<ClassPolynomial> {
    let forms = reduced_forms(d)?;
    let bits = initial_bits(d, &forms);
    hilbert_from_bits(d, &forms, bits)
}

/// The same computation started at an explicit precision.
pub fn hilbert_class_poly_at(d: &BigInt, bits: u32) -> Result<ClassPolynomial> {
    let forms = reduced_forms(d)?;
    hilbert_from_bits(d, &forms, bits)
}

fn hilbert_from_bits(d: &BigInt, forms: &[QuadraticForm], mut bits: u32) -> Result<ClassPolynomial> {
    for attempt in 1..=MAX_RETRIES + 1 {
        if let Some(poly) = try_class_poly(forms, bits)? {
            return Ok(ClassPolynomial { disc: d.clone(), poly, bits, attempts: attempt });
        }
        bits *= 2;
    }
    Err(Error::Resource(format!(
        "class polynomial of discriminant {d} not certified after {MAX_RETRIES} precision doublings"
    )))
}

fn try_class_poly(forms: &[QuadraticForm], bits: u32) -> Result<Option<Poly>> {
    let roots: Vec<Complex> = forms
        .par_iter()
        .map(|f| j_invariant(&Tau::Quadratic(f.clone()), bits + 32).map(|z| z.with_prec(bits + 32)))
        .collect::<Result<_>>()?;
    let prec = bits + 32;
    // coefficients ascending, starting from the constant 1
    let mut c: Vec<Complex> = vec![Complex::one(prec)];
    for r in &roots {
        let mut next = vec![Complex::zero(prec); c.len() + 1];
        for (i, ci) in c.iter().enumerate() {
            next[i + 1] = next[i + 1].add(ci);
            next[i] = next[i].sub(&ci.mul(r));
        }
        c = next;
    }
    let mut out = Vec::with_capacity(c.len());
    for ci in &c {
        let Some(re) = ci.re.round_certified() else { return Ok(None) };
        match ci.im.round_certified() {
            Some(im) if im.is_zero() => {}
            _ => return Ok(None),
        }
        out.push(re);
    }
    Ok(Some(Poly::new(out)))
}

/// The class-group torsor of CM points of discriminant d.
#[derive(Clone, Debug)]
pub struct GaloisOrbit {
    pub group: FormClassGroup,
    pub points: Vec<CMPoint>,
}

impl GaloisOrbit {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Index of the point whose class is c⁻¹·[p].
    pub fn act(&self, class: usize, point: usize) -> usize {
        let inv = self.group.inverse(class);
        self.group.compose(inv, point)
    }
}

/// CM points of discriminant d (indexed like the class group's classes)
/// with j-values to the given precision.
pub fn galois_orbit(d: &BigInt, precision: u32) -> Result<GaloisOrbit> {
    let group = class_group(d)?;
    let points = group
        .classes
        .par_iter()
        .map(|f| {
            let tau = Tau::Quadratic(f.clone());
            Ok(CMPoint {
                order: group.order.clone(),
                form: f.clone(),
                tau: tau.to_ball(precision),
                j_value: j_invariant(&tau, precision)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GaloisOrbit { group, points })
}

/// log h(D) / (½ log |D|).
pub fn brauer_siegel_diagnostic(d: &BigInt) -> Result<f64> {
    if d.magnitude() < &BigUint::from(7u32) {
        return Err(Error::Domain(format!("|D| = {} is below 7", d.magnitude())));
    }
    let h = class_group(d)?.h() as f64;
    let ld = crate::arith::big_ln(&BigInt::from(d.magnitude().clone()));
    Ok(h.ln() / (0.5 * ld))
}

/// Rough value of j(τ).
pub fn j_value_f64(tau: &Tau) -> Result<(f64, f64)> {
    Ok(j_invariant(tau, 64)?.to_f64())
}
