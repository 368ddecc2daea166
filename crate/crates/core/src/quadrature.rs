//! Tensor-product quadrature rules on the unit sphere and the unit ball.
//!
//! The sphere rule is Gauss–Legendre in `cos θ` times the uniform trapezoid
//! rule in `φ`; the ball rule adds Gauss–Legendre nodes on `(0, 1)` with the
//! `r²` volume factor folded into the radial weights. No node ever sits on a
//! pole or at the origin.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess for the i-th largest root.
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss × trapezoid rule on the unit sphere.
#[derive(Debug, Clone)]
pub struct SphereQuadrature {
    /// Polar angles, one per ring, ascending in `cos θ`.
    pub theta: Vec<f64>,
    pub cos_theta: Vec<f64>,
    pub sin_theta: Vec<f64>,
    /// Gauss weight of each ring.
    pub ring_weights: Vec<f64>,
    /// Azimuths `2πp / n_φ`.
    pub phi: Vec<f64>,
    /// Trapezoid weight `2π / n_φ`, shared by every azimuth.
    pub phi_weight: f64,
}

pub const DEFAULT_N_THETA: usize = 64;
pub const DEFAULT_N_PHI: usize = 128;
pub const DEFAULT_N_RADIAL: usize = 48;

impl SphereQuadrature {
    pub fn new(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta == 0 || n_phi == 0 {
            return Err(Error::Domain(format!(
                "sphere quadrature orders must be positive, got ({n_theta}, {n_phi})"
            )));
        }
        let (x, w) = gauss_legendre(n_theta);
        let theta = x.iter().map(|c| c.acos()).collect();
        let sin_theta = x.iter().map(|c| (1.0 - c * c).sqrt()).collect();
        let phi = (0..n_phi)
            .map(|p| 2.0 * PI * p as f64 / n_phi as f64)
            .collect();
        Ok(Self {
            theta,
            cos_theta: x,
            sin_theta,
            ring_weights: w,
            phi,
            phi_weight: 2.0 * PI / n_phi as f64,
        })
    }

    pub fn n_theta(&self) -> usize {
        self.theta.len()
    }

    pub fn n_phi(&self) -> usize {
        self.phi.len()
    }

    pub fn len(&self) -> usize {
        self.n_theta() * self.n_phi()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Iterates `(theta, phi, weight)` ring by ring.
    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.theta.iter().zip(&self.ring_weights).flat_map(move |(&t, &w)| {
            self.phi.iter().map(move |&p| (t, p, w * self.phi_weight))
        })
    }

    /// Integrates `f(theta, phi)` over the sphere.
    pub fn integrate<T, F>(&self, mut f: F) -> T
    where
        T: std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
        F: FnMut(f64, f64) -> T,
    {
        let mut acc = T::default();
        for (t, p, w) in self.nodes() {
            acc = acc + f(t, p) * w;
        }
        acc
    }
}

impl Default for SphereQuadrature {
    fn default() -> Self {
        Self::new(DEFAULT_N_THETA, DEFAULT_N_PHI).expect("default orders are positive")
    }
}

/// Tensor-product rule on the unit ball; radial weights include `r²`.
#[derive(Debug, Clone)]
pub struct BallQuadrature {
    pub radii: Vec<f64>,
    pub radial_weights: Vec<f64>,
    pub sphere: SphereQuadrature,
}

/// A point of the ball in spherical coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallPoint {
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
}

impl BallPoint {
    pub fn new(r: f64, theta: f64, phi: f64) -> Self {
        Self { r, theta, phi }
    }

    /// Converts a Cartesian point; the origin maps to `θ = φ = 0`.
    pub fn from_cartesian(x: f64, y: f64, z: f64) -> Self {
        let r = (x * x + y * y + z * z).sqrt();
        if r == 0.0 {
            return Self::new(0.0, 0.0, 0.0);
        }
        let theta = (z / r).clamp(-1.0, 1.0).acos();
        let mut phi = y.atan2(x);
        if phi < 0.0 {
            phi += 2.0 * PI;
        }
        Self::new(r, theta, phi)
    }

    pub fn to_cartesian(self) -> [f64; 3] {
        let s = self.theta.sin();
        [
            self.r * s * self.phi.cos(),
            self.r * s * self.phi.sin(),
            self.r * self.theta.cos(),
        ]
    }
}

impl BallQuadrature {
    pub fn new(n_r: usize, n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_r == 0 {
            return Err(Error::Domain("radial quadrature order must be positive".into()));
        }
        let (x, w) = gauss_legendre(n_r);
        let radii: Vec<f64> = x.iter().map(|t| 0.5 * (t + 1.0)).collect();
        let radial_weights = radii.iter().zip(&w).map(|(r, w)| 0.5 * w * r * r).collect();
        Ok(Self {
            radii,
            radial_weights,
            sphere: SphereQuadrature::new(n_theta, n_phi)?,
        })
    }

    pub fn orders(&self) -> (usize, usize, usize) {
        (self.radii.len(), self.sphere.n_theta(), self.sphere.n_phi())
    }

    pub fn len(&self) -> usize {
        self.radii.len() * self.sphere.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn total_weight(&self) -> f64 {
        let radial: f64 = self.radial_weights.iter().sum();
        let angular: f64 = self.sphere.ring_weights.iter().sum::<f64>()
            * self.sphere.phi_weight
            * self.sphere.n_phi() as f64;
        radial * angular
    }

    /// Iterates `(point, weight)` with the radial index outermost.
    pub fn nodes(&self) -> impl Iterator<Item = (BallPoint, f64)> + '_ {
        self.radii
            .iter()
            .zip(&self.radial_weights)
            .flat_map(move |(&r, &wr)| {
                self.sphere
                    .nodes()
                    .map(move |(t, p, wa)| (BallPoint::new(r, t, p), wr * wa))
            })
    }

    /// Values of `f` at every node, in [`BallQuadrature::nodes`] order.
    pub fn sample<F>(&self, f: F) -> Vec<f64>
    where
        F: Fn(BallPoint) -> f64 + Sync,
    {
        use rayon::prelude::*;
        let n_ang = self.sphere.len();
        let mut out = vec![0.0; self.len()];
        out.par_chunks_mut(n_ang)
            .zip(self.radii.par_iter())
            .for_each(|(chunk, &r)| {
                for ((t, p, _), v) in self.sphere.nodes().zip(chunk.iter_mut()) {
                    *v = f(BallPoint::new(r, t, p));
                }
            });
        out
    }

    /// Weighted sum of node values produced by [`BallQuadrature::sample`].
    pub fn integrate_samples(&self, values: &[f64]) -> f64 {
        self.nodes().zip(values).map(|((_, w), v)| w * v).sum()
    }
}

impl Default for BallQuadrature {
    fn default() -> Self {
        Self::new(DEFAULT_N_RADIAL, DEFAULT_N_THETA, DEFAULT_N_PHI)
            .expect("default orders are positive")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(10);
        for deg in 0..20 {
            let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg)).sum();
            let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((got - exact).abs() < 1e-14, "deg {deg}: {got} vs {exact}");
        }
    }

    #[test]
    fn gauss_legendre_high_order_weights_sum_to_two() {
        for n in [1, 2, 7, 48, 64, 200] {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            assert!(x.windows(2).all(|p| p[0] < p[1]));
            assert!(x.iter().all(|x| x.abs() < 1.0));
        }
    }

    #[test]
    fn ball_weights_sum_to_volume() {
        let q = BallQuadrature::default();
        assert!((q.total_weight() - 4.0 * PI / 3.0).abs() < 1e-12);
        let direct: f64 = q.nodes().map(|(_, w)| w).sum();
        assert!((direct - 4.0 * PI / 3.0).abs() < 1e-11);
    }

    #[test]
    fn ball_rule_integrates_squared_radius() {
        // ∫_B |x|² dx = 4π/5
        let q = BallQuadrature::new(8, 8, 8).unwrap();
        let v = q.integrate_samples(&q.sample(|p| p.r * p.r));
        assert!((v - 4.0 * PI / 5.0).abs() < 1e-13);
    }

    #[test]
    fn sphere_rule_integrates_trig_monomials() {
        // ∫ x² dS = 4π/3 on the unit sphere
        let q = SphereQuadrature::new(6, 6).unwrap();
        let v: f64 = q.integrate(|t, p| (t.sin() * p.cos()).powi(2));
        assert!((v - 4.0 * PI / 3.0).abs() < 1e-13);
    }

    #[test]
    fn zero_orders_are_rejected() {
        assert!(SphereQuadrature::new(0, 4).is_err());
        assert!(BallQuadrature::new(0, 4, 4).is_err());
    }

    #[test]
    fn cartesian_round_trip() {
        let p = BallPoint::from_cartesian(0.1, -0.2, 0.3);
        let c = p.to_cartesian();
        assert!((c[0] - 0.1).abs() < 1e-15 && (c[1] + 0.2).abs() < 1e-15 && (c[2] - 0.3).abs() < 1e-15);
    }
}
