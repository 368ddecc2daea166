use num_complex::Complex64;
use rayon::prelude::*;

use super::field::{CoefficientField, ZernikeIndex};
use super::radial::{radial_zernike, RadialTable};
use crate::error::{Error, Result};
use crate::quadrature::{BallPoint, BallQuadrature};
use crate::specfun::{lm_index, sph_harm, HarmonicTable, NormalizedLegendre, SphIndex};

/// `ψ_ℓ^{k,m}(r, θ, φ) = R_ℓ^k(r) Y_ℓ^m(θ, φ)`.
pub fn psi_eval(idx: ZernikeIndex, point: BallPoint) -> Result<Complex64> {
    let radial = radial_zernike(idx.ell, idx.k, point.r)?;
    let sph = SphIndex::new(idx.ell as u32, idx.m as i32)?;
    Ok(sph_harm(sph, point.theta, point.phi) * radial)
}

#[inline]
fn neg_order_sign(m: i64) -> f64 {
    if m < 0 && m % 2 != 0 {
        -1.0
    } else {
        1.0
    }
}

/// Quadrature approximation of `c_ℓ^{k,m} = ⟨η, ψ_ℓ^{k,m}⟩_{L²(B)}` for `ℓ ≤ caps[k]`.
///
/// The transform is separated: a discrete Fourier sum over each azimuthal
/// ring, a Legendre sum over rings, then a radial sum. The result is marked
/// uncertified since η generally has coefficients beyond the bounds.
pub fn project<F, V>(eta: F, caps: &[usize], quad: &BallQuadrature) -> CoefficientField
where
    F: Fn(BallPoint) -> V + Sync,
    V: Into<Complex64>,
{
    let mut field = CoefficientField::zeros(caps).with_certified(false);
    let Some(&lmax) = caps.iter().max() else {
        return field;
    };
    let kmax = caps.len() - 1;
    let sphere = &quad.sphere;
    let legendre: Vec<NormalizedLegendre> = sphere
        .cos_theta
        .iter()
        .map(|&x| NormalizedLegendre::new(lmax, x))
        .collect();
    let n_m = 2 * lmax + 1;
    // e^{-imφ_p} for m = -lmax..=lmax
    let twiddle: Vec<Vec<Complex64>> = (0..n_m)
        .map(|j| {
            let m = j as f64 - lmax as f64;
            sphere.phi.iter().map(|&p| Complex64::from_polar(1.0, -m * p)).collect()
        })
        .collect();

    // Per radial node: B_{ℓm}(r_i) = Σ_ang w η conj(Y_ℓ^m)
    let per_radius: Vec<Vec<Complex64>> = quad
        .radii
        .par_iter()
        .map(|&r| {
            let mut b = vec![Complex64::default(); (lmax + 1) * (lmax + 1)];
            let mut ring = vec![Complex64::default(); sphere.n_phi()];
            let mut fourier = vec![Complex64::default(); n_m];
            for (j, &theta) in sphere.theta.iter().enumerate() {
                for (v, &p) in ring.iter_mut().zip(&sphere.phi) {
                    *v = eta(BallPoint::new(r, theta, p)).into();
                }
                for (f, tw) in fourier.iter_mut().zip(&twiddle) {
                    *f = ring.iter().zip(tw).map(|(v, t)| t * v).sum::<Complex64>() * sphere.phi_weight;
                }
                let w = sphere.ring_weights[j];
                let p = &legendre[j];
                for ell in 0..=lmax {
                    for m in -(ell as i64)..=ell as i64 {
                        let y = p.get(ell, m.unsigned_abs() as usize) * neg_order_sign(m);
                        b[lm_index(ell, m)] += fourier[(m + lmax as i64) as usize] * (w * y);
                    }
                }
            }
            b
        })
        .collect();

    let tables: Vec<RadialTable> = quad
        .radii
        .iter()
        .map(|&r| RadialTable::new(lmax, kmax, r).expect("quadrature radii lie in (0, 1)"))
        .collect();
    for (k, &cap) in caps.iter().enumerate() {
        let row = field.row_mut(k);
        for ell in 0..=cap {
            for m in -(ell as i64)..=ell as i64 {
                let idx = lm_index(ell, m);
                row[idx] = per_radius
                    .iter()
                    .zip(&tables)
                    .zip(&quad.radial_weights)
                    .map(|((b, t), &w)| b[idx] * (w * t.get(ell, k)))
                    .sum();
            }
        }
    }
    field
}

/// What [`synthesize`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SynthesisMode {
    /// `Σ c ψ` over every stored coefficient.
    Full,
    /// `Σ_{k ≤ K} Re(c ψ)`: the real part of the first `K + 1` projections `η_k`.
    RealPartialSum(usize),
}

impl SynthesisMode {
    fn kmax(self, field: &CoefficientField) -> Option<usize> {
        let stored = field.kmax()?;
        match self {
            Self::Full => Some(stored),
            Self::RealPartialSum(k) => Some(k.min(stored)),
        }
    }

    fn finish(self, v: Complex64) -> Complex64 {
        match self {
            Self::Full => v,
            Self::RealPartialSum(_) => Complex64::new(v.re, 0.0),
        }
    }
}

/// Evaluates the expansion at each point. Output order follows `points`.
pub fn synthesize(c: &CoefficientField, points: &[BallPoint], mode: SynthesisMode) -> Result<Vec<Complex64>> {
    if let Some(p) = points.iter().find(|p| !(0.0..=1.0).contains(&p.r)) {
        return Err(Error::Domain(format!("radius {} outside [0, 1]", p.r)));
    }
    let Some(kmax) = mode.kmax(c) else {
        return Ok(vec![Complex64::default(); points.len()]);
    };
    let lmax = c.caps()[..=kmax].iter().copied().max().unwrap_or(0);
    Ok(points
        .par_iter()
        .map(|p| {
            let y = HarmonicTable::new(lmax, p.theta, p.phi);
            let rt = RadialTable::new(lmax, kmax, p.r).expect("radius checked above");
            let mut acc = Complex64::default();
            for k in 0..=kmax {
                let row = c.row(k);
                for ell in 0..=c.caps()[k] {
                    let mut ang = Complex64::default();
                    for m in -(ell as i64)..=ell as i64 {
                        let i = lm_index(ell, m);
                        ang += row[i] * y.values[i];
                    }
                    acc += ang * rt.get(ell, k);
                }
            }
            mode.finish(acc)
        })
        .collect())
}

/// Evaluates the expansion at every node of `quad`, in [`BallQuadrature::nodes`] order.
pub fn synthesize_on_quadrature(c: &CoefficientField, quad: &BallQuadrature, mode: SynthesisMode) -> Vec<Complex64> {
    let sphere = &quad.sphere;
    let n_ang = sphere.len();
    let Some(kmax) = mode.kmax(c) else {
        return vec![Complex64::default(); quad.len()];
    };
    let lmax = c.caps()[..=kmax].iter().copied().max().unwrap_or(0);
    let legendre: Vec<NormalizedLegendre> = sphere
        .cos_theta
        .iter()
        .map(|&x| NormalizedLegendre::new(lmax, x))
        .collect();
    let n_m = 2 * lmax + 1;
    let twiddle: Vec<Vec<Complex64>> = sphere
        .phi
        .iter()
        .map(|&p| {
            (0..n_m)
                .map(|j| Complex64::from_polar(1.0, (j as f64 - lmax as f64) * p))
                .collect()
        })
        .collect();

    let chunks: Vec<Vec<Complex64>> = quad
        .radii
        .par_iter()
        .map(|&r| {
            let rt = RadialTable::new(lmax, kmax, r).expect("quadrature radii lie in (0, 1)");
            // radial contraction: A_{ℓm}(r) = Σ_k c_{kℓm} R_ℓ^k(r)
            let mut a = vec![Complex64::default(); (lmax + 1) * (lmax + 1)];
            for k in 0..=kmax {
                let row = c.row(k);
                for ell in 0..=c.caps()[k] {
                    let rv = rt.get(ell, k);
                    for m in -(ell as i64)..=ell as i64 {
                        let i = lm_index(ell, m);
                        a[i] += row[i] * rv;
                    }
                }
            }
            let mut out = Vec::with_capacity(n_ang);
            let mut g = vec![Complex64::default(); n_m];
            for p in &legendre {
                for (j, gm) in g.iter_mut().enumerate() {
                    let m = j as i64 - lmax as i64;
                    let am = m.unsigned_abs() as usize;
                    *gm = (am..=lmax)
                        .map(|ell| a[lm_index(ell, m)] * (p.get(ell, am) * neg_order_sign(m)))
                        .sum();
                }
                for tw in &twiddle {
                    let v: Complex64 = g.iter().zip(tw).map(|(g, t)| g * t).sum();
                    out.push(mode.finish(v));
                }
            }
            out
        })
        .collect();
    chunks.into_iter().flatten().collect()
}

/// `‖f - g‖_{L²(B)}` for node values from [`BallQuadrature::sample`] / [`synthesize_on_quadrature`].
pub fn l2_distance(quad: &BallQuadrature, f: &[f64], g: &[Complex64]) -> f64 {
    quad.nodes()
        .zip(f.iter().zip(g))
        .map(|((_, w), (a, b))| w * (Complex64::new(*a, 0.0) - b).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn small_quad() -> BallQuadrature {
        BallQuadrature::new(16, 16, 32).unwrap()
    }

    #[test]
    fn constant_basis_function() {
        let v = psi_eval(ZernikeIndex::new(0, 0, 0).unwrap(), BallPoint::new(0.4, 1.0, 2.0)).unwrap();
        assert!((v.re - 3f64.sqrt() / (4.0 * PI).sqrt()).abs() < 1e-15);
        let f = CoefficientField::basis(ZernikeIndex::new(0, 0, 0).unwrap());
        let s = synthesize(&f, &[BallPoint::new(0.9, 0.1, 0.2)], SynthesisMode::Full).unwrap();
        assert!((s[0].re - 3f64.sqrt() / (4.0 * PI).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn solid_harmonics_at_k_zero() {
        let p = BallPoint::new(0.7, 0.8, 5.0);
        for ell in 0..6usize {
            for m in -(ell as i64)..=ell as i64 {
                let v = psi_eval(ZernikeIndex::new(0, ell, m).unwrap(), p).unwrap();
                let y = sph_harm(SphIndex::new(ell as u32, m as i32).unwrap(), p.theta, p.phi);
                let want = y * (((2 * ell + 3) as f64).sqrt() * p.r.powi(ell as i32));
                assert!((v - want).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn projection_of_basis_function() {
        let q = small_quad();
        let target = ZernikeIndex::new(1, 2, 1).unwrap();
        // real part of ψ is (ψ + conj ψ)/2; project Re and Im separately.
        let re = project(|p| psi_eval(target, p).unwrap().re, &[3, 3], &q);
        let im = project(|p| psi_eval(target, p).unwrap().im, &[3, 3], &q);
        let combined = re.axpy(Complex64::new(0.0, 1.0), &im).unwrap();
        for (idx, v) in combined.iter() {
            let want = if idx == target { 1.0 } else { 0.0 };
            assert!((v - want).norm() < 1e-10, "{idx:?}: {v}");
        }
    }

    #[test]
    fn zero_field_projects_to_zero() {
        let q = small_quad();
        let f = project(|_| 0.0, &[2, 2], &q);
        assert!(f.iter().all(|(_, v)| v == Complex64::default()));
        assert!(!f.is_certified());
    }

    #[test]
    fn partial_sum_beyond_support_is_zero() {
        let mut f = CoefficientField::zeros(&[0, 2]);
        f.set(1, 2, 1, Complex64::new(1.0, 0.5)).unwrap();
        let pts = [BallPoint::new(0.5, 1.0, 1.0), BallPoint::new(0.1, 2.0, 3.0)];
        // entries at k = 0 are all zero, so the K = 0 partial sum vanishes
        let v = synthesize(&f, &pts, SynthesisMode::RealPartialSum(0)).unwrap();
        assert!(v.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn quadrature_synthesis_matches_pointwise() {
        let q = BallQuadrature::new(3, 4, 6).unwrap();
        let mut f = CoefficientField::zeros(&[3, 2]);
        for (i, v) in f.values_mut().enumerate() {
            *v = Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos());
        }
        let pts: Vec<BallPoint> = q.nodes().map(|(p, _)| p).collect();
        let a = synthesize(&f, &pts, SynthesisMode::Full).unwrap();
        let b = synthesize_on_quadrature(&f, &q, SynthesisMode::Full);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-12);
        }
        let c = synthesize_on_quadrature(&f, &q, SynthesisMode::RealPartialSum(0));
        let d = synthesize(&f, &pts, SynthesisMode::RealPartialSum(0)).unwrap();
        for (x, y) in c.iter().zip(&d) {
            assert!((x - y).norm() < 1e-12 && x.im == 0.0);
        }
    }

    #[test]
    fn synthesis_rejects_points_outside_ball() {
        let f = CoefficientField::zeros(&[1]);
        assert!(synthesize(&f, &[BallPoint::new(1.5, 0.0, 0.0)], SynthesisMode::Full).is_err());
    }
}
