use num_bigint::BigInt;

use super::{modular_poly, ModularPolynomial};
use crate::cmfield::{hilbert_class_poly, ClassPolynomial};
use crate::error::{Error, Result};
use crate::poly::{resultant_x, Poly};
use crate::quadforms::is_split;

/// Outcome of testing H_D(y) | Res_x(H_D(x), Φ_l(x, y)).
#[derive(Clone, Debug)]
pub struct InclusionCertificate {
    pub disc: BigInt,
    pub l: u64,
    pub holds: bool,
    /// Res_x(H_D(x), Φ_l(x, y)).
    pub resultant: Poly,
    /// The exact quotient by H_D when the division succeeds.
    pub quotient: Option<Poly>,
}

/// Whether the Galois orbit of a CM point of discriminant d lies in its own
/// T_l-image, decided by exact divisibility of integer polynomials.
pub fn galois_hecke_inclusion(d: &BigInt, l: u64, m_max: u64) -> Result<InclusionCertificate> {
    if !is_split(l, d)? {
        return Err(Error::Precondition(format!("{l} does not split in the order of discriminant {d}")));
    }
    let phi = modular_poly(l, m_max)?;
    let h = hilbert_class_poly(d)?;
    inclusion_with(&h, &phi)
}

/// The same test with the class polynomial and Φ_l supplied.
pub fn inclusion_with(h: &ClassPolynomial, phi: &ModularPolynomial) -> Result<InclusionCertificate> {
    let l = phi.level;
    if !is_split(l, &h.disc)? {
        return Err(Error::Precondition(format!("{l} does not split in the order of discriminant {}", h.disc)));
    }
    let n = resultant_x(&h.poly, &phi.poly);
    let quotient = n.div_exact(&h.poly);
    Ok(InclusionCertificate { disc: h.disc.clone(), l, holds: quotient.is_some(), resultant: n, quotient })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::resultant_sylvester;

    #[test]
    fn split_pairs_hold() {
        for (d, l) in [(-23i64, 2u64), (-47, 2), (-4, 5)] {
            let c = galois_hecke_inclusion(&BigInt::from(d), l, 20).unwrap();
            assert!(c.holds, "({d}, {l})");
            let q = c.quotient.unwrap();
            let h = hilbert_class_poly(&BigInt::from(d)).unwrap().poly;
            assert_eq!(q.mul(&h), c.resultant);
        }
    }

    #[test]
    fn resultant_matches_sylvester_pointwise() {
        let d = BigInt::from(-23);
        let c = galois_hecke_inclusion(&d, 2, 20).unwrap();
        let h = hilbert_class_poly(&d).unwrap().poly;
        let phi = modular_poly(2, 20).unwrap();
        for y0 in [-2i64, 0, 5, 1728] {
            let y0 = BigInt::from(y0);
            assert_eq!(c.resultant.eval(&y0), resultant_sylvester(&h, &phi.poly.eval_y(&y0)));
        }
    }

    #[test]
    fn inert_prime_is_a_precondition_error() {
        let r = galois_hecke_inclusion(&BigInt::from(-4), 3, 20);
        assert!(matches!(r, Err(Error::Precondition(_))));
    }
}
