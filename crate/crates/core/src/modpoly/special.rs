use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::modular_poly;
use crate::arith::psi;
use crate::cmfield::hilbert_class_poly;
use crate::error::{Error, Result};
use crate::poly::{BiPoly, Poly};
use crate::quadforms::reduced_forms;

/// Classification of an irreducible plane curve F(x, y) = 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecialVerdict {
    /// F = ±Φ_m.
    Special(u64),
    NotSpecialWithinBound,
    /// F depends on one variable only: a vertical (x = const) or
    /// horizontal fiber, with the discriminant of a matching class
    /// polynomial when one was found within the bound.
    Fiber { vertical: bool, poly: Poly, cm_disc: Option<BigInt> },
}

const PROBES: [i64; 3] = [1_000_003, -2_000_029, 3_000_017];

/// Decides whether F is a special curve in ℂ²: a CM fiber or the image of
/// some Y_0(m) with m ≤ m_max. Class polynomials are tried for |D| ≤
/// disc_bound.
pub fn is_special_plane_curve(f: &BiPoly, m_max: u64, disc_bound: u64) -> Result<SpecialVerdict> {
    if f.is_zero() {
        return Err(Error::InvalidInput("zero polynomial".into()));
    }
    if !f.content().is_one() {
        return Err(Error::InvalidInput("polynomial must have content 1".into()));
    }
    let (dx, dy) = (f.deg_x(), f.deg_y());
    if dx <= 0 && dy <= 0 {
        return Err(Error::InvalidInput("constant polynomial".into()));
    }
    if dy == 0 || dx == 0 {
        let vertical = dy == 0;
        let g = if vertical { f.y_coeff(0) } else { f.x_coeff(0) };
        check_univariate_irreducible(&g)?;
        let cm_disc = match_class_polynomial(&g, disc_bound)?;
        return Ok(SpecialVerdict::Fiber { vertical, poly: g, cm_disc });
    }
    check_bivariate_reducibility(f)?;
    if dx != dy {
        return Ok(SpecialVerdict::NotSpecialWithinBound);
    }
    for m in 1..=m_max {
        if psi(m) as isize != dx {
            continue;
        }
        let phi = modular_poly(m, m_max)?;
        if *f == phi.poly || *f == phi.poly.neg() {
            return Ok(SpecialVerdict::Special(m));
        }
    }
    Ok(SpecialVerdict::NotSpecialWithinBound)
}

fn reducible(msg: &str) -> Error {
    Error::Precondition(format!("{msg}; factor the polynomial and test each factor"))
}

fn check_univariate_irreducible(g: &Poly) -> Result<()> {
    let dec = g.squarefree_decomposition();
    if dec.len() != 1 || dec[0].0 != 1 {
        return Err(reducible("polynomial has a repeated factor"));
    }
    if g.degree() > 1 {
        // a rational root of an integer polynomial of degree > 1 splits it
        let lc = g.lc().abs();
        let c0 = g.coeff(0).abs();
        if c0 == BigInt::from(0) {
            return Err(reducible("polynomial is divisible by the variable"));
        }
        if lc.bits() <= 24 && c0.bits() <= 24 {
            let lc64: i64 = lc.try_into().unwrap();
            let c064: i64 = c0.try_into().unwrap();
            for p in crate::arith::divisors(c064 as u64) {
                for q in crate::arith::divisors(lc64 as u64) {
                    for s in [1i64, -1] {
                        let lin = Poly::from_i64(&[-(s * p as i64), q as i64]);
                        if g.div_exact(&lin).is_some() {
                            return Err(reducible("polynomial has a rational root"));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn check_bivariate_reducibility(f: &BiPoly) -> Result<()> {
    // content as a polynomial in y over ℤ[x], and in x over ℤ[y]
    let dx = f.deg_x() as usize;
    let dy = f.deg_y() as usize;
    let cx = (0..=dy).fold(Poly::zero(), |g, j| g.gcd(&f.y_coeff(j)));
    if cx.degree() > 0 {
        return Err(reducible("polynomial has a factor depending on x only"));
    }
    let cy = (0..=dx).fold(Poly::zero(), |g, i| g.gcd(&f.x_coeff(i)));
    if cy.degree() > 0 {
        return Err(reducible("polynomial has a factor depending on y only"));
    }
    let repeated = PROBES.iter().all(|&y0| {
        let g = f.eval_y(&BigInt::from(y0));
        let dec = g.squarefree_decomposition();
        dec.iter().any(|(k, _)| *k > 1)
    });
    if repeated {
        return Err(reducible("polynomial is not squarefree"));
    }
    Ok(())
}

/// Some D with |D| ≤ bound and H_D = ±g, if any.
fn match_class_polynomial(g: &Poly, bound: u64) -> Result<Option<BigInt>> {
    let deg = g.degree() as usize;
    let target = g.primitive();
    for n in 3..=bound {
        if n % 4 != 0 && n % 4 != 3 {
            continue;
        }
        let d = -BigInt::from(n);
        if reduced_forms(&d)?.len() != deg {
            continue;
        }
        let h = hilbert_class_poly(&d)?;
        if h.poly == target {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(terms: &[(usize, usize, i64)]) -> BiPoly {
        BiPoly::from_terms(terms.iter().map(|&(i, j, c)| (i, j, BigInt::from(c))))
    }

    #[test]
    fn diagonal_and_phi2() {
        assert_eq!(is_special_plane_curve(&bi(&[(1, 0, 1), (0, 1, -1)]), 20, 200).unwrap(), SpecialVerdict::Special(1));
        assert_eq!(is_special_plane_curve(&bi(&[(1, 0, -1), (0, 1, 1)]), 20, 200).unwrap(), SpecialVerdict::Special(1));
        let phi2 = modular_poly(2, 20).unwrap();
        assert_eq!(is_special_plane_curve(&phi2.poly, 20, 200).unwrap(), SpecialVerdict::Special(2));
    }

    #[test]
    fn non_special_lines() {
        let f = bi(&[(1, 0, 1), (0, 1, 1), (0, 0, -1)]);
        assert_eq!(is_special_plane_curve(&f, 20, 200).unwrap(), SpecialVerdict::NotSpecialWithinBound);
        let g = bi(&[(2, 0, 1), (0, 1, -1)]);
        assert_eq!(is_special_plane_curve(&g, 20, 200).unwrap(), SpecialVerdict::NotSpecialWithinBound);
    }

    #[test]
    fn fibers() {
        // x = 1728 is a CM fiber (D = −4); x = 5 is not
        match is_special_plane_curve(&bi(&[(1, 0, 1), (0, 0, -1728)]), 20, 200).unwrap() {
            SpecialVerdict::Fiber { vertical, cm_disc, .. } => {
                assert!(vertical);
                assert_eq!(cm_disc, Some(BigInt::from(-4)));
            }
            v => panic!("{v:?}"),
        }
        match is_special_plane_curve(&bi(&[(0, 1, 1), (0, 0, -5)]), 20, 200).unwrap() {
            SpecialVerdict::Fiber { vertical, cm_disc, .. } => {
                assert!(!vertical);
                assert_eq!(cm_disc, None);
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn reducible_input_is_rejected() {
        // (x − y)(x + y)
        let f = bi(&[(2, 0, 1), (0, 2, -1)]);
        let _ = is_special_plane_curve(&f, 20, 200);
        // x·(x − y) has a factor in x alone
        let g = bi(&[(2, 0, 1), (1, 1, -1)]);
        assert!(matches!(is_special_plane_curve(&g, 20, 200), Err(Error::Precondition(_))));
        // (x − y)^2
        let h = bi(&[(2, 0, 1), (1, 1, -2), (0, 2, 1)]);
        assert!(matches!(is_special_plane_curve(&h, 20, 200), Err(Error::Precondition(_))));
        // (x − 1)(x − 2) as a fiber
        let k = bi(&[(2, 0, 1), (1, 0, -3), (0, 0, 2)]);
        assert!(matches!(is_special_plane_curve(&k, 20, 200), Err(Error::Precondition(_))));
    }
}
