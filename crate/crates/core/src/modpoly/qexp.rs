//! Φ_m from the q-expansion of j.
//!
//! The roots of Φ_m(X, j(τ)) are j((aτ+b)/d) over ad = m, 0 ≤ b < d,
//! gcd(a, b, d) = 1. Their power sums have integral q-expansions obtained
//! by summing over b with the Möbius identity
//! Σ_{b mod d, gcd(b,g)=1} ζ_d^{bk} = Σ_{e|g} μ(e)·(d/e)·[d/e | k],
//! g = gcd(a, d). The root j(mτ) carries the largest pole and is kept
//! apart; the remaining roots go through Newton's identities.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{divisors, mobius, psi};
use crate::error::{Error, Result};
use crate::poly::BiPoly;
use crate::series::{j_series, Laurent};

/// Extra coefficients that must vanish after pole elimination.
const SLACK: i64 = 8;

/// Builds Φ_m; the number of j-coefficients is raised until every
/// coefficient is determined with `SLACK` verified zeros to spare.
pub fn construct(m: u64) -> Result<BiPoly> {
    if m == 1 {
        return Ok(BiPoly::from_terms([(1, 0, BigInt::one()), (0, 1, -BigInt::one())]));
    }
    let n = psi(m) as i64;
    let mi = m as i64;
    let max_ratio = divisors(m)
        .into_iter()
        .filter(|&a| a != m)
        .map(|a| {
            let d = m / a;
            a as f64 / d as f64
        })
        .fold(0.0, f64::max);
    let mut len = mi * (SLACK + mi + (n as f64 * max_ratio).ceil() as i64 + 4) + n;
    for _ in 0..5 {
        if let Some(p) = try_construct(m, n, len)? {
            return Ok(p);
        }
        len *= 2;
    }
    Err(Error::Precision(format!("q-expansion for level {m} did not stabilize")))
}

fn try_construct(m: u64, n: i64, len: i64) -> Result<Option<BiPoly>> {
    let mi = m as i64;
    let j = j_series(len)?;
    let mut jpow = vec![Laurent::one(i64::MAX / 4)];
    for k in 1..=n as usize {
        let next = jpow[k - 1].mul(&j);
        jpow.push(next);
    }

    // power sums of the roots other than j(mτ)
    let mut p: Vec<Laurent> = vec![Laurent::zero(0)];
    for k in 1..=n as usize {
        let mut acc: Option<Laurent> = None;
        for a in divisors(m) {
            let d = m / a;
            if d == 1 {
                continue;
            }
            let g = a.gcd(&d);
            for e in divisors(g) {
                let mu = mobius(e);
                if mu == 0 {
                    continue;
                }
                let step = (d / e) as i64;
                let expo = (a / e) as i64;
                let term = sieve_dilate(&jpow[k], step, expo).scale(&BigInt::from(mu * step));
                acc = Some(match acc {
                    None => term,
                    Some(s) => s.add(&term),
                });
            }
        }
        p.push(acc.expect("m > 1 has a divisor pair with d > 1"));
    }

    // elementary symmetric functions of the other roots
    let mut f: Vec<Laurent> = vec![Laurent::one(i64::MAX / 4)];
    for k in 1..n as usize {
        let mut s = Laurent::zero(i64::MAX / 4);
        for i in 1..=k {
            let t = f[k - i].mul(&p[i]);
            s = if i % 2 == 1 { s.add(&t) } else { s.sub(&t) };
        }
        let fk = s
            .div_exact(&BigInt::from(k as u64))
            .ok_or_else(|| Error::Validation(format!("non-integral symmetric function at level {m}")))?;
        f.push(fk);
    }
    let r0 = j.dilate(mi);

    let mut terms: Vec<(usize, usize, BigInt)> = vec![(n as usize, 0, BigInt::one())];
    for k in 1..=n as usize {
        let mut ek = r0.mul(&f[k - 1]);
        if k < n as usize {
            ek = ek.add(&f[k]);
        }
        let Some(coeffs) = as_polynomial_in_j(&ek, &jpow, n)? else {
            return Ok(None);
        };
        let sign = if k % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        for (r, c) in coeffs.into_iter().enumerate() {
            if !c.is_zero() {
                terms.push((n as usize - k, r, &sign * c));
            }
        }
    }
    Ok(Some(BiPoly::from_terms(terms)))
}

/// Σ_t c_{step·t} q^{expo·t} for the series Σ c_k q^k.
fn sieve_dilate(s: &Laurent, step: i64, expo: i64) -> Laurent {
    let tmin = Integer::div_ceil(&s.val, &step);
    // exact while step·t < prec
    let tend = Integer::div_floor(&(s.prec - 1), &step) + 1;
    let prec = expo * tend;
    if s.is_zero() || tmin >= tend {
        return Laurent::zero(prec);
    }
    let mut coeffs = vec![BigInt::zero(); ((tend - 1 - tmin) * expo + 1) as usize];
    for t in tmin..tend {
        let c = s.coeff(step * t);
        coeffs[((t - tmin) * expo) as usize] = c;
    }
    Laurent::from_coeffs(expo * tmin, coeffs, prec)
}

/// Writes `s` as a polynomial in j of degree ≤ n by removing poles; `None`
/// when the precision is insufficient to certify the remainder vanishes.
fn as_polynomial_in_j(s: &Laurent, jpow: &[Laurent], n: i64) -> Result<Option<Vec<BigInt>>> {
    let mut rest = s.clone();
    let mut out = vec![BigInt::zero(); n as usize + 1];
    while !rest.is_zero() && rest.val < 0 {
        let r = -rest.val;
        if r > n {
            return Err(Error::Validation(format!("pole of order {r} exceeds degree {n}")));
        }
        let c = rest.coeff(rest.val);
        out[r as usize] += &c;
        rest = rest.sub(&jpow[r as usize].scale(&c));
    }
    if rest.prec <= SLACK {
        return Ok(None);
    }
    let c0 = rest.coeff(0);
    out[0] += &c0;
    rest = rest.sub(&Laurent::monomial(c0, 0, rest.prec));
    if !rest.is_zero() {
        return Err(Error::Validation(format!(
            "q-expansion leaves a nonzero remainder at q^{}",
            rest.val
        )));
    }
    Ok(Some(out))
}
