//! Floating-point simultaneous root finding with certified inclusion disks.

use num_complex::Complex64;

use crate::poly::IntPolynomial;

/// A root approximation together with a disk radius guaranteed to contain a
/// true root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootDisk {
    pub center: Complex64,
    pub radius: f64,
}

impl RootDisk {
    pub fn max_modulus(&self) -> f64 {
        self.center.norm() + self.radius
    }

    pub fn min_modulus(&self) -> f64 {
        (self.center.norm() - self.radius).max(0.0)
    }

    pub fn contains_real(&self, x: f64) -> bool {
        (self.center - Complex64::new(x, 0.0)).norm() <= self.radius
    }
}

fn horner_with_derivative(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All complex roots of a polynomial with ascending coefficients, by the
/// Aberth–Ehrlich iteration.
pub fn aberth(coeffs: &[f64]) -> Vec<Complex64> {
    let d = coeffs.len().saturating_sub(1);
    if d == 0 {
        return Vec::new();
    }
    let lead = coeffs[d];
    let radius = 1.0 + coeffs[..d].iter().map(|c| (c / lead).abs()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| {
            let theta = std::f64::consts::TAU * (k as f64 + 0.25) / d as f64 + 0.4;
            Complex64::from_polar(radius * 0.9, theta)
        })
        .collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for i in 0..d {
            let (p, dp) = horner_with_derivative(coeffs, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let sum: Complex64 = (0..d)
                .filter(|&j| j != i)
                .map(|j| {
                    let diff = z[i] - z[j];
                    if diff.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        diff.inv()
                    }
                })
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / z[i].norm().max(1.0));
            }
        }
        if moved < 1e-17 {
            break;
        }
    }
    z
}

/// Roots of `p` with inclusion disks. The disks are certified when they are
/// pairwise disjoint, which is reported in the second component.
pub fn certified_roots(p: &IntPolynomial) -> (Vec<RootDisk>, bool) {
    let coeffs = p.to_f64_coeffs();
    let z = aberth(&coeffs);
    let d = z.len();
    let lead = coeffs[d].abs();
    let eps = f64::EPSILON;
    let disks: Vec<RootDisk> = (0..d)
        .map(|i| {
            let zi = z[i];
            let val = p.eval_complex(zi).norm();
            let abs_sum: f64 = coeffs.iter().enumerate().map(|(k, c)| c.abs() * zi.norm().powi(k as i32)).sum();
            let err = 4.0 * (d as f64 + 2.0) * eps * abs_sum;
            let denom: f64 = (0..d).filter(|&j| j != i).map(|j| (zi - z[j]).norm()).product();
            let radius = if denom > 0.0 { d as f64 * (val + err) / (lead * denom) } else { f64::INFINITY };
            RootDisk { center: zi, radius: radius * (1.0 + 1e-9) + f64::MIN_POSITIVE }
        })
        .collect();
    let disjoint = (0..d).all(|i| {
        disks[i].radius.is_finite()
            && (i + 1..d).all(|j| (disks[i].center - disks[j].center).norm() > disks[i].radius + disks[j].radius)
    });
    (disks, disjoint)
}
