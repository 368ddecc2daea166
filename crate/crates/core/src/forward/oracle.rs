use num_complex::Complex64;
use rayon::prelude::*;

use super::MeasurementSet;
use crate::error::{Error, Result};
use crate::quadrature::{BallPoint, BallQuadrature};
use crate::specfun::{grad_dot, HarmonicTable};

/// Integrand used by the quadrature oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OracleForm {
    /// `(-1)^{m+1} η r^{ℓ+2k} Φ_ℓ^{k,m}`, built from spherical harmonics and
    /// their surface gradients.
    #[default]
    Phi,
    /// `-η ∇u_{k+1}^0 · conj(∇u_{ℓ+k+1}^m)` with `u_L^M = r^L Y_L^M / L`,
    /// written out in spherical components.
    Gradient,
}

#[derive(Debug, Clone, Copy)]
struct Request {
    k: usize,
    ell: usize,
    m: i64,
}

fn angular_kernel(tab: &HarmonicTable, req: Request, form: OracleForm) -> Complex64 {
    let lf = req.k + 1;
    let lg = req.ell + req.k + 1;
    let scale = 1.0 / (lf * lg) as f64;
    match form {
        OracleForm::Phi => {
            let phi = tab.y(lf, 0) * tab.y(lg, -req.m) + grad_dot(tab.grad(lf, 0), tab.grad(lg, -req.m)) * scale;
            let sign = if (req.m + 1).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            phi * sign
        }
        OracleForm::Gradient => {
            let (ft, fp) = tab.grad(lf, 0);
            let (gt, gp) = tab.grad(lg, req.m);
            let radial = tab.y(lf, 0) * tab.y(lg, req.m).conj();
            let tangential = (ft * gt.conj() + fp * gp.conj()) * scale;
            -(radial + tangential)
        }
    }
}

fn integrate_requests<F, V>(eta: &F, requests: &[Request], quad: &BallQuadrature, form: OracleForm) -> Result<Vec<Complex64>>
where
    F: Fn(BallPoint) -> V + Sync,
    V: Into<Complex64>,
{
    if requests.is_empty() {
        return Ok(Vec::new());
    }
    let sphere = &quad.sphere;
    let n_ang = sphere.len();
    let max_power = requests.iter().map(|r| r.ell + 2 * r.k).max().unwrap_or(0);
    let lmax = requests.iter().map(|r| r.ell + r.k + 1).max().unwrap_or(1);

    // Radial moments H_n(ω) = Σ_i w_i r_i^n η(r_i, ω), stored power-major.
    let nodes: Vec<(f64, f64)> = sphere.nodes().map(|(t, p, _)| (t, p)).collect();
    let columns: Vec<Vec<Complex64>> = nodes
        .par_iter()
        .map(|&(t, p)| {
            let mut col = vec![Complex64::default(); max_power + 1];
            for (&r, &w) in quad.radii.iter().zip(&quad.radial_weights) {
                let v: Complex64 = eta(BallPoint::new(r, t, p)).into();
                let mut rn = w;
                for c in col.iter_mut() {
                    *c += v * rn;
                    rn *= r;
                }
            }
            col
        })
        .collect();
    let mut moments = vec![Complex64::default(); (max_power + 1) * n_ang];
    for (a, col) in columns.iter().enumerate() {
        for (n, v) in col.iter().enumerate() {
            moments[n * n_ang + a] = *v;
        }
    }

    let n_phi = sphere.n_phi();
    let per_ring: Vec<Vec<Complex64>> = (0..sphere.n_theta())
        .into_par_iter()
        .map(|j| {
            let theta = sphere.theta[j];
            let mut acc = vec![Complex64::default(); requests.len()];
            for (p, &phi) in sphere.phi.iter().enumerate() {
                let a = j * n_phi + p;
                let w = sphere.ring_weights[j] * sphere.phi_weight;
                let tab = HarmonicTable::with_gradients(lmax, theta, phi)?;
                for (out, &req) in acc.iter_mut().zip(requests) {
                    let h = moments[(req.ell + 2 * req.k) * n_ang + a];
                    *out += angular_kernel(&tab, req, form) * h * w;
                }
            }
            Ok(acc)
        })
        .collect::<Vec<Result<_>>>()
        .into_iter()
        .collect::<Result<_>>()?;

    let mut out = vec![Complex64::default(); requests.len()];
    for ring in &per_ring {
        for (o, v) in out.iter_mut().zip(ring) {
            *o += v;
        }
    }
    Ok(out)
}

/// Ball-quadrature value of `⟨(Fη) Y_{k+1}^0, Y_{ℓ+k+1}^m⟩` for an evaluable perturbation.
///
/// Independent of the series route: it integrates the bilinear form directly
/// and never touches Gaunt coefficients or `χ`.
pub fn forward_measure_quadrature<F, V>(
    eta: F,
    k: usize,
    ell: usize,
    m: i64,
    quad: &BallQuadrature,
    form: OracleForm,
) -> Result<Complex64>
where
    F: Fn(BallPoint) -> V + Sync,
    V: Into<Complex64>,
{
    if m.unsigned_abs() as usize > ell {
        return Err(Error::Index(format!("|m| = {} exceeds ell = {ell}", m.unsigned_abs())));
    }
    Ok(integrate_requests(&eta, &[Request { k, ell, m }], quad, form)?[0])
}

/// Quadrature measurements for every `k < caps.len()`, `ℓ ≤ caps[k]`, `|m| ≤ ℓ`.
pub fn forward_measure_quadrature_set<F, V>(
    eta: F,
    caps: &[usize],
    quad: &BallQuadrature,
    form: OracleForm,
) -> Result<MeasurementSet>
where
    F: Fn(BallPoint) -> V + Sync,
    V: Into<Complex64>,
{
    let mut out = MeasurementSet::zeros(caps);
    let requests: Vec<Request> = out.iter().map(|(k, ell, m, _)| Request { k, ell, m }).collect();
    let values = integrate_requests(&eta, &requests, quad, form)?;
    for (req, v) in requests.iter().zip(values) {
        out.set(req.k, req.ell, req.m, v)?;
    }
    Ok(out)
}
