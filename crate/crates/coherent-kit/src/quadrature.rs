//! Quadrature over the complex plane in polar representation.
//!
//! The area integrals used by the overcompleteness machinery all have the
//! shape `integral of F(alpha) exp(-|alpha|^2) d^2alpha`. A tensor rule
//! handles them: Gauss-Legendre nodes in the radius on `[0, R]` and uniform
//! nodes in the angle. Uniform angular nodes integrate `exp(i k theta)`
//! exactly for `|k| < n_theta`, which is precisely what the moment integrals
//! need; the radius cutoff `R` leaves an `exp(-R^2)` tail that is quoted in
//! the accuracy contract of each caller.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{KitError, Result};

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2, "Gauss-Legendre rule needs at least 2 nodes");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Tricomi initial guess, then Newton
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_deriv(n, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() < 1e-15 {
                let (p, d) = legendre_with_deriv(n, x);
                dp = d;
                x -= p / d;
                break;
            }
        }
        // descending guesses -> store ascending
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn legendre_with_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 1..n {
        let kf = k as f64;
        let p_next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
        p_prev = p;
        p = p_next;
    }
    let d = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, d)
}

/// Polar quadrature over the disk `|alpha| <= R`.
#[derive(Debug, Clone)]
pub struct Quadrature {
    radius: f64,
    radial_nodes: Vec<f64>,
    radial_weights: Vec<f64>,
    n_theta: usize,
}

impl Quadrature {
    pub fn new(radius: f64, n_radial: usize, n_theta: usize) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(KitError::QuadratureSize(format!(
                "radius must be positive and finite, got {radius}"
            )));
        }
        if n_radial < 2 {
            return Err(KitError::QuadratureSize(format!(
                "need at least 2 radial nodes, got {n_radial}"
            )));
        }
        if n_theta < 4 {
            return Err(KitError::QuadratureSize(format!(
                "need at least 4 angular nodes, got {n_theta}"
            )));
        }
        let (xs, ws) = gauss_legendre(n_radial);
        // map [-1, 1] -> [0, R]
        let half = radius / 2.0;
        let radial_nodes = xs.iter().map(|x| half * (x + 1.0)).collect();
        let radial_weights = ws.iter().map(|w| w * half).collect();
        Ok(Self {
            radius,
            radial_nodes,
            radial_weights,
            n_theta,
        })
    }

    /// Desk-scale rule: R = 8, 80 radial nodes, 64 angles.
    pub fn desk_default() -> Self {
        Self::new(8.0, 80, 64).expect("default quadrature parameters are valid")
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn n_radial(&self) -> usize {
        self.radial_nodes.len()
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    /// Radius and per-node area weight `w_r * r * dtheta` of ring `i`.
    /// Summing `f(alpha) * weight` over every ring and angle approximates
    /// `integral f d^2alpha` over the disk.
    pub fn ring(&self, i: usize) -> (f64, f64) {
        let r = self.radial_nodes[i];
        let w = self.radial_weights[i] * r * (2.0 * PI / self.n_theta as f64);
        (r, w)
    }

    /// Angle of angular node `t`.
    pub fn theta(&self, t: usize) -> f64 {
        2.0 * PI * t as f64 / self.n_theta as f64
    }

    /// Complex node `alpha = r exp(i theta)` for ring `i`, angle `t`.
    pub fn alpha(&self, i: usize, t: usize) -> C64 {
        C64::from_polar(self.radial_nodes[i], self.theta(t))
    }

    /// Integrate `f(alpha)` over the disk, sequentially in fixed order.
    pub fn integrate<F>(&self, mut f: F) -> C64
    where
        F: FnMut(C64) -> C64,
    {
        let mut total = C64::new(0.0, 0.0);
        for i in 0..self.n_radial() {
            let (_, w) = self.ring(i);
            let mut ring_sum = C64::new(0.0, 0.0);
            for t in 0..self.n_theta {
                ring_sum += f(self.alpha(i, t));
            }
            total += ring_sum * w;
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_three_rule_is_analytic() {
        let (x, w) = gauss_legendre(3);
        let s = (3.0f64 / 5.0).sqrt();
        assert!((x[0] + s).abs() < 1e-14);
        assert!(x[1].abs() < 1e-14);
        assert!((x[2] - s).abs() < 1e-14);
        assert!((w[0] - 5.0 / 9.0).abs() < 1e-14);
        assert!((w[1] - 8.0 / 9.0).abs() < 1e-14);
        assert!((w[2] - 5.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn integrates_high_degree_polynomials_exactly() {
        // 10 nodes integrate degree <= 19 exactly
        let (x, w) = gauss_legendre(10);
        let val: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(18)).sum();
        assert!((val - 2.0 / 19.0).abs() < 1e-14);
    }

    #[test]
    fn disk_rule_reproduces_gaussian_area() {
        let quad = Quadrature::new(6.0, 64, 32).unwrap();
        let got = quad.integrate(|a| C64::new((-a.norm_sqr()).exp(), 0.0));
        let expect = PI * (1.0 - (-36.0f64).exp());
        assert!(
            (got.re - expect).abs() < 1e-12 && got.im.abs() < 1e-13,
            "got {got}, expect {expect}"
        );
    }

    #[test]
    fn angular_nodes_kill_single_winding() {
        // integral of alpha * exp(-|alpha|^2) vanishes by symmetry, and the
        // uniform angular rule makes it vanish to roundoff.
        let quad = Quadrature::new(5.0, 32, 16).unwrap();
        let got = quad.integrate(|a| a * C64::new((-a.norm_sqr()).exp(), 0.0));
        assert!(got.norm() < 1e-14);
    }

    #[test]
    fn rejects_undersized_rules() {
        assert!(Quadrature::new(0.0, 8, 8).is_err());
        assert!(Quadrature::new(-1.0, 8, 8).is_err());
        assert!(Quadrature::new(5.0, 1, 8).is_err());
        assert!(Quadrature::new(5.0, 8, 2).is_err());
    }
}
