use num_bigint::BigInt;

use super::modular_poly;
use crate::error::{Error, Result};
use crate::roots::{integer_root_near, isolate_roots};

/// One root of Φ_m(x_i, y), with multiplicity.
#[derive(Clone, Debug)]
pub struct HeckeRoot {
    pub re: String,
    pub im: String,
    /// Upper bound on the distance to the exact root.
    pub radius: f64,
    /// Set when the root is a rational integer (verified exactly).
    pub exact: Option<BigInt>,
    pub multiplicity: u32,
}

impl HeckeRoot {
    pub fn value_f64(&self) -> (f64, f64) {
        (self.re.parse().unwrap_or(f64::NAN), self.im.parse().unwrap_or(f64::NAN))
    }
}

/// T_m applied to a point of ℂⁿ with rational coordinates.
#[derive(Clone, Debug)]
pub struct HeckeImage {
    pub level: u64,
    pub source: Vec<(BigInt, BigInt)>,
    /// Roots of Φ_m(x_i, y) for each coordinate i.
    pub per_coordinate: Vec<Vec<HeckeRoot>>,
}

impl HeckeImage {
    /// Number of targets counted with multiplicity: ψ(m)ⁿ.
    pub fn target_count(&self) -> u64 {
        self.per_coordinate
            .iter()
            .map(|roots| roots.iter().map(|r| r.multiplicity as u64).sum::<u64>())
            .product()
    }

    /// The product multiset as (root index per coordinate, multiplicity).
    pub fn targets(&self) -> Vec<(Vec<usize>, u64)> {
        let mut out = vec![(Vec::new(), 1u64)];
        for roots in &self.per_coordinate {
            let mut next = Vec::with_capacity(out.len() * roots.len());
            for (idx, mult) in &out {
                for (k, r) in roots.iter().enumerate() {
                    let mut v = idx.clone();
                    v.push(k);
                    next.push((v, mult * r.multiplicity as u64));
                }
            }
            out = next;
        }
        out
    }
}

/// Roots of Φ_m(x_i, y) for each rational coordinate x_i, isolated to
/// 2^(−precision/2) and grouped by multiplicity.
pub fn hecke_image(point: &[(BigInt, BigInt)], m: u64, precision: u32, m_max: u64) -> Result<HeckeImage> {
    if point.is_empty() {
        return Err(Error::InvalidInput("empty point".into()));
    }
    let phi = modular_poly(m, m_max)?;
    let digits = (precision as f64 * 0.15).ceil().max(6.0) as u32;
    let mut per_coordinate = Vec::with_capacity(point.len());
    for (num, den) in point {
        if den == &BigInt::from(0) {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        let p = phi.poly.eval_x_rational(num, den);
        let mut roots = Vec::new();
        for (mult, factor) in p.squarefree_decomposition() {
            for disc in isolate_roots(&factor, precision)? {
                let exact = integer_root_near(&factor, &disc);
                let (re, im) = match &exact {
                    Some(v) => (v.to_string(), "0".to_string()),
                    None => (disc.center.re.to_decimal(digits), disc.center.im.to_decimal(digits)),
                };
                roots.push(HeckeRoot {
                    re,
                    im,
                    radius: if exact.is_some() { 0.0 } else { disc.radius.to_f64() },
                    exact,
                    multiplicity: mult,
                });
            }
        }
        per_coordinate.push(roots);
    }
    Ok(HeckeImage { level: m, source: point.to_vec(), per_coordinate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn int(x: i64) -> (BigInt, BigInt) {
        (BigInt::from(x), BigInt::one())
    }

    #[test]
    fn identity_level() {
        let img = hecke_image(&[int(0)], 1, 128, 20).unwrap();
        assert_eq!(img.target_count(), 1);
        assert_eq!(img.per_coordinate[0][0].exact, Some(BigInt::from(0)));
    }

    #[test]
    fn two_isogenies_of_1728() {
        let img = hecke_image(&[int(1728)], 2, 128, 20).unwrap();
        assert_eq!(img.target_count(), 3);
        let roots = &img.per_coordinate[0];
        let r = roots.iter().find(|r| r.exact == Some(BigInt::from(287496))).unwrap();
        assert_eq!(r.multiplicity, 2);
        assert!(roots.iter().any(|r| r.exact == Some(BigInt::from(1728)) && r.multiplicity == 1));
    }

    #[test]
    fn product_targets() {
        let img = hecke_image(&[int(0), int(1728)], 2, 128, 20).unwrap();
        assert_eq!(img.target_count(), 9);
        let total: u64 = img.targets().iter().map(|t| t.1).sum();
        assert_eq!(total, 9);
        // Φ_2(0, y) = (y − 54000)^3
        assert_eq!(img.per_coordinate[0].len(), 1);
        assert_eq!(img.per_coordinate[0][0].exact, Some(BigInt::from(54000)));
        assert_eq!(img.per_coordinate[0][0].multiplicity, 3);
    }

    #[test]
    fn generic_point_has_simple_roots() {
        let img = hecke_image(&[(BigInt::from(1), BigInt::from(3))], 3, 128, 20).unwrap();
        assert_eq!(img.per_coordinate[0].len(), 4);
        assert!(img.per_coordinate[0].iter().all(|r| r.multiplicity == 1 && r.radius < 1e-15));
    }
}
