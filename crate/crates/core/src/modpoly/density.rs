//! Numerical probe of the density of Hecke orbits, in double precision.

use std::collections::HashSet;
use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::arith::divisors;
use crate::error::{Error, Result};
use crate::series::j_coefficients;

const TERMS: usize = 40;
const MAX_FRONTIER: usize = 500_000;

fn coeffs() -> &'static [f64] {
    static C: OnceLock<Vec<f64>> = OnceLock::new();
    C.get_or_init(|| j_coefficients(TERMS).iter().map(|c| c.to_f64().unwrap()).collect())
}

/// Moves τ into |Re τ| ≤ 1/2, |τ| ≥ 1, choosing Re τ < 1/2 and Re τ ≤ 0 on
/// the unit circle.
pub fn reduce_tau(mut t: Complex64) -> Complex64 {
    for _ in 0..10_000 {
        t.re -= t.re.round();
        if t.norm_sqr() < 1.0 - 1e-14 {
            t = -t.inv();
        } else {
            break;
        }
    }
    if t.re >= 0.5 - 1e-12 {
        t.re -= 1.0;
    }
    if t.re > 0.0 && t.norm_sqr() < 1.0 + 1e-12 {
        t.re = -t.re;
    }
    t
}

/// j and dj/dτ from the q-expansion, without reduction.
fn j_and_derivative(t: Complex64) -> (Complex64, Complex64) {
    let q = (Complex64::new(0.0, 2.0 * PI) * t).exp();
    let c = coeffs();
    // j = Σ c_k q^(k−1);  q dj/dq = Σ (k−1) c_k q^(k−1)
    let mut j = Complex64::new(0.0, 0.0);
    let mut dj = Complex64::new(0.0, 0.0);
    for k in (0..TERMS).rev() {
        j = j * q + c[k];
        dj = dj * q + c[k] * (k as f64 - 1.0);
    }
    let qi = q.inv();
    (j * qi, dj * qi * Complex64::new(0.0, 2.0 * PI))
}

/// j(τ) in double precision.
pub fn j_f64(tau: Complex64) -> Complex64 {
    if tau.im <= 0.0 {
        return Complex64::new(f64::NAN, f64::NAN);
    }
    j_and_derivative(reduce_tau(tau)).0
}

fn rho() -> Complex64 {
    Complex64::new(-0.5, 3f64.sqrt() / 2.0)
}

struct Table {
    taus: Vec<Complex64>,
    js: Vec<Complex64>,
}

fn table() -> &'static Table {
    static T: OnceLock<Table> = OnceLock::new();
    T.get_or_init(|| {
        let mut taus = Vec::new();
        for a in 0..=40 {
            for b in 0..=60 {
                let t = Complex64::new(-0.5 + a as f64 / 40.0, 0.85 + b as f64 * 0.0375);
                if t.norm_sqr() >= 1.0 {
                    taus.push(t);
                }
            }
        }
        let js = taus.iter().map(|&t| j_and_derivative(t).0).collect();
        Table { taus, js }
    })
}

fn seed(target: Complex64) -> Complex64 {
    if target.norm() > 1e8 {
        // j ≈ 1/q
        let q = (target - 744.0).inv();
        return reduce_tau(q.ln() / Complex64::new(0.0, 2.0 * PI));
    }
    let t = table();
    let mut best = 0;
    let mut bd = f64::INFINITY;
    for (k, j) in t.js.iter().enumerate() {
        let d = (j - target).norm();
        if d < bd {
            bd = d;
            best = k;
        }
    }
    t.taus[best]
}

/// A τ in the fundamental domain with j(τ) = j, by Newton iteration.
/// None when the iteration does not converge.
pub fn invert_j(j: Complex64) -> Option<Complex64> {
    if !j.is_finite() {
        return None;
    }
    if j.norm() < 1e-12 {
        return Some(rho());
    }
    if (j - 1728.0).norm() < 1e-9 {
        return Some(Complex64::new(0.0, 1.0));
    }
    let tol = 1e-10 * j.norm().max(1000.0);
    let mut t = seed(j);
    for _ in 0..300 {
        t = reduce_tau(t);
        let (v, dv) = j_and_derivative(t);
        let err = v - j;
        if err.norm() <= tol {
            return Some(t);
        }
        if dv.norm() == 0.0 || !dv.is_finite() {
            return None;
        }
        let mut step = err / dv;
        // keep the iterate in the upper half plane
        while t.im - step.im <= 0.05 {
            step *= 0.5;
        }
        t -= step;
    }
    None
}

/// A rectangle partition of a window of the fundamental domain.
#[derive(Clone, Copy, Debug)]
pub struct Grid {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Grid {
    /// 10 × 10 cells on |Re τ| ≤ 1/2, 0.9 ≤ Im τ ≤ 1.9.
    pub fn standard() -> Grid {
        Grid { re_min: -0.5, re_max: 0.5, im_min: 0.9, im_max: 1.9, nx: 10, ny: 10 }
    }

    pub fn cells(&self) -> usize {
        self.nx * self.ny
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.nx > 0
            && self.ny > 0
            && self.re_min < self.re_max
            && self.im_min < self.im_max
            && self.re_min >= -0.5
            && self.re_max <= 0.5
            && self.im_min > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("invalid grid {self:?}")))
        }
    }

    pub fn cell(&self, t: Complex64) -> Option<usize> {
        if t.re < self.re_min || t.re > self.re_max || t.im < self.im_min || t.im > self.im_max {
            return None;
        }
        let fx = (t.re - self.re_min) / (self.re_max - self.re_min) * self.nx as f64;
        let fy = (t.im - self.im_min) / (self.im_max - self.im_min) * self.ny as f64;
        let x = (fx as usize).min(self.nx - 1);
        let y = (fy as usize).min(self.ny - 1);
        Some(y * self.nx + x)
    }
}

/// Coverage after a given number of steps.
#[derive(Clone, Debug, PartialEq)]
pub struct StepCoverage {
    pub step: usize,
    /// Distinct points in the T_m^step image.
    pub points: usize,
    /// Cells hit by any point up to and including this step.
    pub covered: usize,
    pub fraction: f64,
    /// Points at this step that could not be placed.
    pub skipped: usize,
}

#[derive(Clone, Debug)]
pub struct DensityReport {
    pub level: u64,
    pub grid: Grid,
    pub steps: Vec<StepCoverage>,
    pub skipped_total: usize,
}

impl DensityReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("step,points,covered,fraction,skipped\n");
        for r in &self.steps {
            s.push_str(&format!("{},{},{},{:.4},{}\n", r.step, r.points, r.covered, r.fraction, r.skipped));
        }
        s
    }
}

fn key(t: Complex64) -> (i64, i64) {
    ((t.re * 1e7).round() as i64, (t.im * 1e7).round() as i64)
}

fn hecke_matrices(m: u64) -> Vec<(f64, f64, f64)> {
    let mut out = Vec::new();
    for a in divisors(m) {
        let d = m / a;
        for b in 0..d {
            if a.gcd(&b).gcd(&d) == 1 {
                out.push((a as f64, b as f64, d as f64));
            }
        }
    }
    out
}

/// Iterates T_m from j0, placing every j-value back in the fundamental
/// domain through numerical inversion and recording cumulative grid
/// coverage for steps 0..=steps.
pub fn orbit_density_probe(j0: Complex64, m: u64, steps: usize, grid: &Grid) -> Result<DensityReport> {
    if m < 2 {
        return Err(Error::InvalidInput("level must be at least 2".into()));
    }
    grid.validate()?;
    let start = invert_j(j0).ok_or_else(|| Error::Precision(format!("cannot invert j = {j0}")))?;
    let mats = hecke_matrices(m);
    let mut covered = vec![false; grid.cells()];
    let mut ncovered = 0usize;
    let mut frontier = vec![start];
    let mut report = Vec::with_capacity(steps + 1);
    let mut skipped_total = 0;
    for step in 0..=steps {
        if step > 0 {
            let mut seen = HashSet::new();
            let mut next = Vec::new();
            for &t in &frontier {
                for &(a, b, d) in &mats {
                    let u = reduce_tau((t * a + b) / d);
                    if seen.insert(key(u)) {
                        next.push(u);
                    }
                }
            }
            if next.len() > MAX_FRONTIER {
                return Err(Error::Resource(format!("orbit exceeds {MAX_FRONTIER} points at step {step}")));
            }
            frontier = next;
        }
        let mut skipped = 0;
        for &t in &frontier {
            let placed = if step == 0 { Some(t) } else { invert_j(j_f64(t)) };
            match placed {
                Some(u) => {
                    if let Some(c) = grid.cell(u) {
                        if !covered[c] {
                            covered[c] = true;
                            ncovered += 1;
                        }
                    }
                }
                None => skipped += 1,
            }
        }
        skipped_total += skipped;
        report.push(StepCoverage {
            step,
            points: frontier.len(),
            covered: ncovered,
            fraction: ncovered as f64 / grid.cells() as f64,
            skipped,
        });
    }
    Ok(DensityReport { level: m, grid: *grid, steps: report, skipped_total })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn special_values() {
        let i = Complex64::new(0.0, 1.0);
        assert!((j_f64(i) - 1728.0).norm() < 1e-8);
        assert!(j_f64(rho()).norm() < 1e-8);
        let t = Complex64::new(0.0, 2f64.sqrt());
        assert!((j_f64(t) - 8000.0).norm() < 1e-7);
    }

    #[test]
    fn inversion_round_trip() {
        for &(x, y) in &[(0.1, 1.3), (-0.4, 0.95), (0.3, 2.5), (0.0, 6.0), (-0.2, 1.01)] {
            let t = Complex64::new(x, y);
            let back = invert_j(j_f64(t)).unwrap();
            assert!((back - t).norm() < 1e-7, "{t} -> {back}");
        }
    }

    #[test]
    fn start_cell_only_at_step_zero() {
        let j0 = j_f64(Complex64::new(0.0, 1.2));
        let r = orbit_density_probe(j0, 2, 0, &Grid::standard()).unwrap();
        assert_eq!(r.steps.len(), 1);
        assert_eq!(r.steps[0].covered, 1);
    }

    #[test]
    fn first_step_from_zero() {
        // Φ_2(0, y) = (y − 54000)^3, and j(i√3) = 54000
        let r = orbit_density_probe(Complex64::new(0.0, 0.0), 2, 1, &Grid::standard()).unwrap();
        assert_eq!(r.steps[0].covered, 0);
        assert_eq!(r.steps[1].points, 1);
        assert_eq!(r.steps[1].covered, 1);
    }
}
