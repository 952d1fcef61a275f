//! Complex roots of squarefree integer polynomials, isolated in disjoint
//! discs whose radii come from Weierstrass corrections evaluated in ball
//! arithmetic.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::ball::{Complex, Mag, Real};
use crate::error::{Error, Result};
use crate::poly::Poly;

/// A disc containing exactly one root.
#[derive(Clone, Debug)]
pub struct RootDisc {
    pub center: Complex,
    /// Upper bound on the distance from `center` to the root.
    pub radius: Mag,
}

impl RootDisc {
    pub fn to_f64(&self) -> (f64, f64) {
        self.center.to_f64()
    }
}

fn strip(z: &Complex) -> Complex {
    Complex::new(
        Real::from_parts(z.re.mid().clone(), Mag::ZERO, z.prec()),
        Real::from_parts(z.im.mid().clone(), Mag::ZERO, z.prec()),
    )
}

fn eval_ball(coeffs: &[Complex], z: &Complex) -> Complex {
    let mut acc = Complex::zero(z.prec());
    for c in coeffs.iter().rev() {
        acc = acc.mul(z).add(c);
    }
    acc
}

/// Aberth–Ehrlich iteration on exact midpoints.
fn aberth(f: &Poly, prec: u32, start: Vec<Complex>, iters: usize, tol: Mag) -> Vec<Complex> {
    let n = f.degree() as usize;
    let coeffs: Vec<Complex> = f.coeffs().iter().map(|c| Complex::from_int(c, prec)).collect();
    let dcoeffs: Vec<Complex> = f.derivative().coeffs().iter().map(|c| Complex::from_int(c, prec)).collect();
    let mut z: Vec<Complex> = start.iter().map(|s| strip(&s.with_prec(prec))).collect();
    for _ in 0..iters {
        let mut max_step = Mag::ZERO;
        for i in 0..n {
            let pv = strip(&eval_ball(&coeffs, &z[i]));
            let dv = strip(&eval_ball(&dcoeffs, &z[i]));
            let Some(ratio) = pv.div(&dv) else { continue };
            let ratio = strip(&ratio);
            let mut s = Complex::zero(prec);
            for k in 0..n {
                if k != i {
                    if let Some(inv) = z[i].sub(&z[k]).inv() {
                        s = s.add(&strip(&inv));
                    }
                }
            }
            let denom = strip(&Complex::one(prec).sub(&ratio.mul(&s)));
            let Some(w) = ratio.div(&denom) else { continue };
            let w = strip(&w);
            max_step = max_step.max(w.abs_upper());
            z[i] = strip(&z[i].sub(&w));
        }
        if max_step.le(&tol) {
            break;
        }
    }
    z
}

fn initial_guesses(f: &Poly, prec: u32) -> Vec<Complex> {
    let n = f.degree() as usize;
    let lc = f.lc().abs();
    // Cauchy bound 1 + max |a_i / a_n|
    let bound = f
        .coeffs()
        .iter()
        .take(n)
        .map(|c| crate::arith::big_ln(&(c.abs() + 1u32)) - crate::arith::big_ln(&lc))
        .fold(0.0f64, f64::max)
        .exp()
        + 1.0;
    let r = bound.min(1e300) * 0.7;
    (0..n)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex::new(Real::from_f64(r * ang.cos(), prec), Real::from_f64(r * ang.sin(), prec))
        })
        .collect()
}

/// Lower bound for |z| from its real and imaginary parts.
fn abs_lower(z: &Complex) -> Option<Mag> {
    match (z.re.abs_lower(), z.im.abs_lower()) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (Some(a), None) | (None, Some(a)) => Some(a),
        (None, None) => None,
    }
}

/// Isolates all roots of a squarefree polynomial in pairwise disjoint discs
/// of radius at most 2^(−precision/2).
pub fn isolate_roots(f: &Poly, precision: u32) -> Result<Vec<RootDisc>> {
    let n = f.degree();
    if n <= 0 {
        return Ok(Vec::new());
    }
    let n = n as usize;
    if n == 1 {
        let c0 = f.coeff(0);
        let c1 = f.coeff(1);
        let re = Real::from_ratio(&-c0, &c1, precision);
        let radius = re.rad();
        let center = Complex::from_real(re);
        return Ok(vec![RootDisc { center: strip(&center), radius }]);
    }
    let target = Mag::pow2(-((precision / 2) as i64));
    let mut prec = precision.max(64) + 32;
    let mut z = initial_guesses(f, 64);
    z = aberth(f, 64, z, 400, Mag::pow2(-40));
    for _ in 0..5 {
        z = aberth(f, prec, z, 60, Mag::pow2(-((prec - 8) as i64)));
        if let Some(discs) = certify(f, &z, prec, &target) {
            return Ok(discs);
        }
        prec *= 2;
    }
    Err(Error::Precision(format!(
        "could not isolate the {n} roots to 2^-{} (precision {precision})",
        precision / 2
    )))
}

fn certify(f: &Poly, z: &[Complex], prec: u32, target: &Mag) -> Option<Vec<RootDisc>> {
    let n = z.len();
    let coeffs: Vec<Complex> = f.coeffs().iter().map(|c| Complex::from_int(c, prec)).collect();
    let lc = Mag::from_big_lower(&f.lc(), 0);
    let mut radii = Vec::with_capacity(n);
    for i in 0..n {
        let pv = eval_ball(&coeffs, &z[i]).abs_upper();
        let mut den = lc;
        for k in 0..n {
            if k != i {
                den = den.mul(&abs_lower(&z[i].sub(&z[k]))?);
            }
        }
        if den.is_zero() {
            return None;
        }
        let r = pv.div(&den).mul_u64(n as u64);
        if !r.le(target) {
            return None;
        }
        radii.push(r);
    }
    for i in 0..n {
        for k in i + 1..n {
            let dist = abs_lower(&z[i].sub(&z[k]))?;
            if !radii[i].add(&radii[k]).lt(&dist) {
                return None;
            }
        }
    }
    Some(
        z.iter()
            .zip(radii)
            .map(|(c, r)| RootDisc { center: c.clone(), radius: r })
            .collect(),
    )
}

/// Integer roots of f (by exact evaluation at rounded disc centers).
pub fn integer_root_near(f: &Poly, disc: &RootDisc) -> Option<BigInt> {
    if !disc.center.im.abs_below_pow2(-1) {
        return None;
    }
    let r = disc.center.re.round_mid();
    if f.eval(&r).is_zero() {
        Some(r)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isolates_known_roots() {
        // (x − 1728)(x − 287496)(x² + 1)
        let f = Poly::from_i64(&[-1728, 1])
            .mul(&Poly::from_i64(&[-287496, 1]))
            .mul(&Poly::from_i64(&[1, 0, 1]));
        let discs = isolate_roots(&f, 128).unwrap();
        assert_eq!(discs.len(), 4);
        let mut ints: Vec<BigInt> = discs.iter().filter_map(|d| integer_root_near(&f, d)).collect();
        ints.sort();
        assert_eq!(ints, vec![BigInt::from(1728), BigInt::from(287496)]);
        for d in &discs {
            assert!(d.radius.le(&Mag::pow2(-64)));
        }
        let imag: Vec<f64> = discs.iter().map(|d| d.to_f64().1).filter(|v| v.abs() > 0.5).collect();
        assert_eq!(imag.len(), 2);
    }

    #[test]
    fn close_roots_are_separated() {
        // (x − 1)(x − 1 − 2^-30)·2^30 scaled to integers: (x−1)(2^30 x − 2^30 − 1)
        let t = 1i64 << 30;
        let f = Poly::from_i64(&[-1, 1]).mul(&Poly::from_i64(&[-t - 1, t]));
        let discs = isolate_roots(&f, 200).unwrap();
        assert_eq!(discs.len(), 2);
    }
}
