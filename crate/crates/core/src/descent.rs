//! Effective Chebotarev thresholds, split-prime search, the curve
//! feasibility test and the degree ledger of the dimension descent.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::arith::{big_ln, binomial, factorial, is_prime, next_prime};
use crate::error::{Error, Result};
use crate::quadforms::{is_split, reduced_forms, validate_disc};

pub const DEFAULT_SPLIT_CAP: u64 = 1_000_000;

/// The GRH-conditional prime count bound for a Galois field of degree n_M
/// and discriminant d_M.
#[derive(Clone, Debug)]
pub struct Chebotarev {
    pub n_m: u64,
    pub x_min: f64,
}

impl Chebotarev {
    /// x/(3 n_M log x), defined for x > max(x_min, e²).
    pub fn count_at(&self, x: f64) -> Option<f64> {
        if x > self.x_min.max(std::f64::consts::E.powi(2)) {
            Some(x / (3.0 * self.n_m as f64 * x.ln()))
        } else {
            None
        }
    }
}

/// x_min = 2 (log d_M)² (log log d_M)².
pub fn chebotarev_threshold(n_m: u64, d_m: &BigInt) -> Result<Chebotarev> {
    if n_m == 0 {
        return Err(Error::InvalidInput("field degree must be at least 1".into()));
    }
    if *d_m < BigInt::from(16) {
        return Err(Error::Domain(format!("discriminant {d_m} < 16: log log d_M is not usable")));
    }
    let l = big_ln(d_m);
    let ll = l.ln();
    Ok(Chebotarev { n_m, x_min: 2.0 * l * l * ll * ll })
}

/// (max d_i, (Π d_i)^(2^(n−1))) for the discriminant of the compositum.
pub fn composite_disc_bounds(d_list: &[BigUint]) -> Result<(BigUint, BigUint)> {
    if d_list.is_empty() {
        return Err(Error::InvalidInput("empty discriminant list".into()));
    }
    if d_list.len() > 24 {
        return Err(Error::Resource(format!("{} fields: exponent 2^{} is too large", d_list.len(), d_list.len() - 1)));
    }
    if let Some(d) = d_list.iter().find(|d| **d < BigUint::from(3u32)) {
        return Err(Error::InvalidInput(format!("discriminant magnitude {d} < 3")));
    }
    let lower = d_list.iter().max().unwrap().clone();
    let prod: BigUint = d_list.iter().product();
    Ok((lower, prod.pow(1u32 << (d_list.len() - 1))))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SplitPrime {
    pub l: u64,
    /// (log max|D|)³, the heuristic size of the least common split prime.
    pub log_bound: f64,
    pub within_log_bound: bool,
}

/// Least prime l > l_min split in every order of the given discriminants.
pub fn split_prime_search(discs: &[BigInt], l_min: u64, cap: u64) -> Result<SplitPrime> {
    if discs.is_empty() {
        return Err(Error::InvalidInput("no discriminants given".into()));
    }
    for d in discs {
        validate_disc(d)?;
    }
    let dmax = discs.iter().map(|d| d.magnitude()).max().unwrap();
    let lg = big_ln(&BigInt::from(dmax.clone())).max(0.0);
    let log_bound = lg.powi(3);
    let mut l = next_prime(l_min);
    while l <= cap {
        let mut ok = true;
        for d in discs {
            if !is_split(l, d)? {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(SplitPrime { l, log_bound, within_log_bound: (l as f64) < log_bound });
        }
        l = next_prime(l);
    }
    Err(Error::NotFound(format!("no common split prime in ({l_min}, {cap}]")))
}

/// Class number h(D) as the number of primitive reduced forms.
pub fn class_number(d: &BigInt) -> Result<u64> {
    Ok(reduced_forms(d)?.len() as u64)
}

/// The three conditions on a prime l for two CM curve coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lemma71Condition {
    /// l > max{3, d₁, d₂}.
    PrimeSize,
    /// l splits in both orders.
    Split,
    /// 2 d₁ d₂ (l+1)² < max h.
    Intersection,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma71Certificate {
    pub l: u64,
    pub d1: u64,
    pub d2: u64,
    pub disc1: BigInt,
    pub disc2: BigInt,
    pub h1: u64,
    pub h2: u64,
    /// 2 d₁ d₂ (l+1)².
    pub intersection: BigUint,
}

impl Lemma71Certificate {
    /// Re-checks all three conditions from scratch.
    pub fn verify(&self) -> Result<bool> {
        let h1 = class_number(&self.disc1)?;
        let h2 = class_number(&self.disc2)?;
        let bound = intersection_bound(self.d1, self.d2, self.l);
        Ok(is_prime(self.l)
            && self.l > 3.max(self.d1).max(self.d2)
            && is_split(self.l, &self.disc1)?
            && is_split(self.l, &self.disc2)?
            && h1 == self.h1
            && h2 == self.h2
            && bound == self.intersection
            && bound < BigUint::from(h1.max(h2)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Lemma71Outcome {
    Feasible(Lemma71Certificate),
    /// No prime up to the cap works; the condition that failed for every
    /// candidate, if a single one did.
    Infeasible { binding: Option<Lemma71Condition>, h1: u64, h2: u64 },
}

fn intersection_bound(d1: u64, d2: u64, l: u64) -> BigUint {
    BigUint::from(2u32) * d1 * d2 * BigUint::from(l + 1).pow(2)
}

/// Least prime l ≤ l_cap meeting the three conditions.
pub fn lemma71_feasible(d1: u64, d2: u64, disc1: &BigInt, disc2: &BigInt, l_cap: u64) -> Result<Lemma71Outcome> {
    if d1 == 0 || d2 == 0 {
        return Err(Error::InvalidInput("degrees must be at least 1".into()));
    }
    let h1 = class_number(disc1)?;
    let h2 = class_number(disc2)?;
    let hmax = BigUint::from(h1.max(h2));
    let mut all_fail = [true; 3];
    let mut l = 2;
    while l <= l_cap {
        let size = l > 3.max(d1).max(d2);
        let split = is_split(l, disc1)? && is_split(l, disc2)?;
        let bound = intersection_bound(d1, d2, l);
        let inter = bound < hmax;
        if size && split && inter {
            return Ok(Lemma71Outcome::Feasible(Lemma71Certificate {
                l,
                d1,
                d2,
                disc1: disc1.clone(),
                disc2: disc2.clone(),
                h1,
                h2,
                intersection: bound,
            }));
        }
        for (f, ok) in all_fail.iter_mut().zip([size, split, inter]) {
            *f &= !ok;
        }
        l = next_prime(l);
    }
    let binding = [Lemma71Condition::PrimeSize, Lemma71Condition::Split, Lemma71Condition::Intersection]
        .into_iter()
        .zip(all_fail)
        .find(|(_, f)| *f)
        .map(|(c, _)| c);
    Ok(Lemma71Outcome::Infeasible { binding, h1, h2 })
}

/// One step of the descent: Z_i of dimension d_i with multidegree
/// coefficients at most A_i, cut by a hypersurface built from T_{l_i}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentStep {
    pub index: usize,
    pub dim: usize,
    pub degree_bound: BigUint,
    pub prime_bound: BigUint,
    /// (l_i+1)ⁿ d_i! C(n, n−d_i) A_i.
    pub hypersurface_constant: BigUint,
    pub intersection_bound: BigUint,
    /// Whether l_i < (log m_x)³; diagnostic only.
    pub prime_within_log_bound: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DescentOutcome {
    InclusionForced { step: usize },
    BudgetExceeded { min_sufficient_mx: BigUint },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentLedger {
    pub n: usize,
    pub d: usize,
    pub a0: BigUint,
    pub m_x: BigUint,
    /// ⌊m_x^(1/3)⌋.
    pub orbit_lower_bound: BigUint,
    pub steps: Vec<DescentStep>,
    pub outcome: DescentOutcome,
}

impl DescentLedger {
    pub fn to_json(&self) -> Value {
        let steps: Vec<Value> = self
            .steps
            .iter()
            .map(|s| {
                json!({
                    "i": s.index,
                    "dim": s.dim,
                    "A": s.degree_bound.to_string(),
                    "l": s.prime_bound.to_string(),
                    "c": s.hypersurface_constant.to_string(),
                    "B": s.intersection_bound.to_string(),
                    "l_below_log_mx_cubed": s.prime_within_log_bound,
                })
            })
            .collect();
        let outcome = match &self.outcome {
            DescentOutcome::InclusionForced { step } => json!({"inclusion_forced": step}),
            DescentOutcome::BudgetExceeded { min_sufficient_mx } => {
                json!({"budget_exceeded": {"min_sufficient_mx": min_sufficient_mx.to_string()}})
            }
        };
        json!({
            "n": self.n,
            "d": self.d,
            "A0": self.a0.to_string(),
            "mx": self.m_x.to_string(),
            "orbit_lower_bound": self.orbit_lower_bound.to_string(),
            "steps": steps,
            "outcome": outcome,
            "asymptotic_regime": true,
        })
    }
}

const MAX_LEDGER_BITS: u64 = 1 << 24;

fn ledger_steps(n: usize, d: usize, a0: &BigUint, m_x: &BigUint) -> Result<Vec<DescentStep>> {
    let log_mx_cubed = big_ln(&BigInt::from(m_x.clone())).powi(3);
    let mut a = a0.clone();
    let mut steps = Vec::with_capacity(d);
    for i in 0..d {
        let dim = d - i;
        let l = (&a + 1u32).max(BigUint::from(5u32));
        let c = (&l + 1u32).pow(n as u32) * factorial(dim as u64) * binomial(n as u64, (n - dim) as u64) * &a;
        let next = BigUint::from(n) * &c * &a;
        let b = if dim == 1 && n == 2 {
            BigUint::from(2u32) * &a * &a * (&l + 1u32).pow(2)
        } else {
            next.clone()
        };
        if next.bits() > MAX_LEDGER_BITS {
            return Err(Error::Resource(format!("degree bound exceeds 2^{MAX_LEDGER_BITS} at step {i}")));
        }
        let within = l.to_f64().is_some_and(|v| v < log_mx_cubed);
        steps.push(DescentStep {
            index: i,
            dim,
            degree_bound: a,
            prime_bound: l,
            hypersurface_constant: c,
            intersection_bound: b,
            prime_within_log_bound: within,
        });
        a = next;
    }
    Ok(steps)
}

/// First step from which the orbit bound m_x^(1/3) beats every remaining
/// intersection bound.
fn forced_step(steps: &[DescentStep], m_x: &BigUint) -> Option<usize> {
    let beats = |s: &DescentStep| *m_x > s.intersection_bound.pow(3);
    (0..steps.len()).find(|&i| steps[i..].iter().all(beats))
}

/// Runs the descent ledger for Z ⊂ ℂⁿ of dimension d with multidegree
/// coefficients at most A0 containing the orbit of a point with
/// discriminant magnitude m_x.
pub fn descent_simulate(n: usize, d: usize, a0: &BigUint, m_x: &BigUint) -> Result<DescentLedger> {
    if d == 0 || d >= n {
        return Err(Error::InvalidInput(format!("dimension {d} must satisfy 1 ≤ d ≤ n−1 = {}", n as i64 - 1)));
    }
    if n > 64 {
        return Err(Error::InvalidInput(format!("n = {n} exceeds 64 factors")));
    }
    if a0.is_zero() {
        return Err(Error::InvalidInput("A0 must be at least 1".into()));
    }
    if *m_x < BigUint::from(16u32) {
        return Err(Error::InvalidInput(format!("m_x = {m_x} must be at least 16")));
    }
    let steps = ledger_steps(n, d, a0, m_x)?;
    let outcome = match forced_step(&steps, m_x) {
        Some(step) => DescentOutcome::InclusionForced { step },
        None => DescentOutcome::BudgetExceeded { min_sufficient_mx: min_sufficient(n, d, a0, m_x)? },
    };
    Ok(DescentLedger {
        n,
        d,
        a0: a0.clone(),
        m_x: m_x.clone(),
        orbit_lower_bound: m_x.nth_root(3),
        steps,
        outcome,
    })
}

/// Least m ≥ m_x forcing inclusion, by doubling then bisection.
fn min_sufficient(n: usize, d: usize, a0: &BigUint, m_x: &BigUint) -> Result<BigUint> {
    let ok = |m: &BigUint| -> Result<bool> { Ok(forced_step(&ledger_steps(n, d, a0, m)?, m).is_some()) };
    let mut lo = m_x.clone();
    let mut hi = m_x * 2u32;
    while !ok(&hi)? {
        lo = hi.clone();
        hi *= 2u32;
        if hi.bits() > MAX_LEDGER_BITS {
            return Err(Error::Resource("minimal sufficient m_x is out of range".into()));
        }
    }
    // ok(lo) is false, ok(hi) is true
    while &hi - &lo > BigUint::one() {
        let mid: BigUint = (&lo + &hi) >> 1;
        if ok(&mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// log₂ of the closed-form bound A_i ≤ (K·max(A0, 2))^((3n)^i) with
/// K = n·6ⁿ·n!·2ⁿ.
pub fn closed_form_log2_bound(n: usize, a0: &BigUint, i: usize) -> f64 {
    let n64 = n as u64;
    let k = BigUint::from(n64) * BigUint::from(6u32).pow(n as u32) * factorial(n64) * BigUint::from(2u32).pow(n as u32);
    let m = a0.max(&BigUint::from(2u32)).clone();
    let base = big_ln(&BigInt::from(k * m)) / std::f64::consts::LN_2;
    base * (3.0 * n as f64).powi(i as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn chebotarev_examples() {
        assert!(matches!(chebotarev_threshold(2, &b(15)), Err(Error::Domain(_))));
        let c = chebotarev_threshold(2, &b(1_000_000)).unwrap();
        let l = 1e6f64.ln();
        assert!((c.x_min - 2.0 * l * l * l.ln() * l.ln()).abs() < 1e-9);
        assert!((c.x_min - 2631.99).abs() < 0.01, "{}", c.x_min);
        assert!(c.count_at(100.0).is_none());
        assert!(c.count_at(3000.0).unwrap() < c.count_at(4000.0).unwrap());
    }

    #[test]
    fn composite_bounds() {
        let u = |v: &[u32]| v.iter().map(|&x| BigUint::from(x)).collect::<Vec<_>>();
        assert_eq!(composite_disc_bounds(&u(&[7])).unwrap(), (BigUint::from(7u32), BigUint::from(7u32)));
        assert_eq!(composite_disc_bounds(&u(&[3, 4])).unwrap(), (BigUint::from(4u32), BigUint::from(144u32)));
        assert_eq!(
            composite_disc_bounds(&u(&[3, 4, 7])).unwrap(),
            (BigUint::from(7u32), BigUint::from(49787136u32))
        );
        assert!(composite_disc_bounds(&[]).is_err());
    }

    #[test]
    fn split_primes() {
        assert_eq!(split_prime_search(&[b(-4)], 3, DEFAULT_SPLIT_CAP).unwrap().l, 5);
        assert_eq!(split_prime_search(&[b(-3), b(-4)], 0, DEFAULT_SPLIT_CAP).unwrap().l, 13);
        assert_eq!(split_prime_search(&[b(-4)], 2, DEFAULT_SPLIT_CAP).unwrap().l, 5);
        assert!(matches!(split_prime_search(&[b(-3), b(-4)], 0, 12), Err(Error::NotFound(_))));
    }

    #[test]
    fn lemma71_small_class_number() {
        let r = lemma71_feasible(1, 1, &b(-4), &b(-4), 1000).unwrap();
        assert_eq!(r, Lemma71Outcome::Infeasible { binding: Some(Lemma71Condition::Intersection), h1: 1, h2: 1 });
        let r = lemma71_feasible(5, 1, &b(-4), &b(-4), 5).unwrap();
        assert!(matches!(r, Lemma71Outcome::Infeasible { binding: Some(Lemma71Condition::PrimeSize), .. }));
    }

    #[test]
    fn descent_curve_in_the_plane() {
        // l = 5, B = 2·(l+1)² = 72, so m_x > 72³
        let a0 = BigUint::one();
        let m = BigUint::from(72u32 * 72 * 72 + 1);
        let r = descent_simulate(2, 1, &a0, &m).unwrap();
        assert_eq!(r.steps[0].intersection_bound, BigUint::from(72u32));
        assert_eq!(r.outcome, DescentOutcome::InclusionForced { step: 0 });
        let r = descent_simulate(2, 1, &a0, &BigUint::from(1000u32)).unwrap();
        assert_eq!(r.outcome, DescentOutcome::BudgetExceeded { min_sufficient_mx: m });
        assert!(descent_simulate(2, 2, &a0, &BigUint::from(1000u32)).is_err());
    }
}
