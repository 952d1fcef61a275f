//! Modular polynomials Φ_m and the Hecke correspondence T_m on the j-line.

mod density;
mod hecke;
mod inclusion;
mod qexp;
mod special;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{is_prime, psi};
use crate::error::{Error, Result};
use crate::poly::BiPoly;

pub use density::{invert_j, j_f64, orbit_density_probe, reduce_tau, DensityReport, Grid, StepCoverage};
pub use hecke::{hecke_image, HeckeImage, HeckeRoot};
pub use inclusion::{galois_hecke_inclusion, inclusion_with, InclusionCertificate};
pub use special::{is_special_plane_curve, SpecialVerdict};

pub const DEFAULT_M_MAX: u64 = 20;

/// Φ_m(x, y) with the coefficient of x^ψ(m) equal to +1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularPolynomial {
    pub level: u64,
    pub poly: BiPoly,
}

impl ModularPolynomial {
    pub fn degree(&self) -> u64 {
        psi(self.level)
    }

    /// Checks symmetry, degree ψ(m) in each variable, the leading
    /// coefficient and, for prime level l, Φ_l ≡ (x^l − y)(x − y^l) mod l.
    pub fn verify(&self) -> Result<()> {
        let m = self.level;
        let n = psi(m) as isize;
        if self.poly.deg_x() != n || self.poly.deg_y() != n {
            return Err(Error::Validation(format!(
                "Φ_{m} has bidegree ({}, {}), expected ({n}, {n})",
                self.poly.deg_x(),
                self.poly.deg_y()
            )));
        }
        if !self.poly.coeff(n as usize, 0).is_one() {
            return Err(Error::Validation(format!("Φ_{m} is not normalized with x^{n} coefficient 1")));
        }
        if m > 1 && !self.poly.is_symmetric() {
            return Err(Error::Validation(format!("Φ_{m} is not symmetric")));
        }
        if is_prime(m) && !self.kronecker_congruence() {
            return Err(Error::Validation(format!("Φ_{m} fails the Kronecker congruence")));
        }
        Ok(())
    }

    /// Φ_l(x, y) ≡ (x^l − y)(x − y^l) mod l, for prime level l.
    pub fn kronecker_congruence(&self) -> bool {
        let l = self.level as usize;
        let lb = BigInt::from(self.level);
        let expected = BiPoly::from_terms([
            (l + 1, 0, BigInt::one()),
            (l, l, -BigInt::one()),
            (1, 1, -BigInt::one()),
            (0, l + 1, BigInt::one()),
        ]);
        let diff = self.poly.sub(&expected);
        diff.terms().iter().all(|(_, _, c)| (c % &lb).is_zero())
    }
}

static MEMO: OnceLock<Mutex<HashMap<u64, Arc<ModularPolynomial>>>> = OnceLock::new();

/// Builds (or returns the memoized) Φ_m for 1 ≤ m ≤ m_max, verified.
pub fn modular_poly(m: u64, m_max: u64) -> Result<Arc<ModularPolynomial>> {
    if m == 0 {
        return Err(Error::InvalidInput("level must be at least 1".into()));
    }
    if m > m_max {
        return Err(Error::Resource(format!("level {m} exceeds the configured cap {m_max}")));
    }
    let memo = MEMO.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = memo.lock().unwrap().get(&m) {
        return Ok(p.clone());
    }
    let poly = qexp::construct(m)?;
    let mp = ModularPolynomial { level: m, poly };
    mp.verify()?;
    let mp = Arc::new(mp);
    memo.lock().unwrap().insert(m, mp.clone());
    Ok(mp)
}

/// Seeds the in-memory table with a polynomial loaded elsewhere (after
/// verification).
pub fn remember(mp: ModularPolynomial) -> Result<Arc<ModularPolynomial>> {
    mp.verify()?;
    let mp = Arc::new(mp);
    let memo = MEMO.get_or_init(|| Mutex::new(HashMap::new()));
    memo.lock().unwrap().insert(mp.level, mp.clone());
    Ok(mp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_levels_verify() {
        let p1 = modular_poly(1, 20).unwrap();
        assert_eq!(p1.poly.terms().len(), 2);
        for m in [2u64, 3, 5, 6] {
            let p = modular_poly(m, 20).unwrap();
            assert_eq!(p.poly.deg_x(), psi(m) as isize);
            assert!(p.poly.is_symmetric());
        }
        let p2 = modular_poly(2, 20).unwrap();
        assert_eq!(p2.poly.coeff(3, 3), BigInt::zero());
        assert!(p2.kronecker_congruence());
        assert!(matches!(modular_poly(21, 20), Err(Error::Resource(_))));
    }

    #[test]
    fn corrupted_polynomial_is_rejected() {
        let p = modular_poly(3, 20).unwrap();
        let mut terms = p.poly.terms();
        terms[3].2 += 3;
        let bad = ModularPolynomial { level: 3, poly: BiPoly::from_terms(terms) };
        assert!(bad.verify().is_err());
    }
}
