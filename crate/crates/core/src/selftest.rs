//! Internal consistency checks run by `calderon selftest`.

use std::fmt;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Result;
use crate::forward::{forward_measure, forward_measure_quadrature_set, OracleForm};
use crate::quadrature::{BallQuadrature, SphereQuadrature};
use crate::recon::{reconstruct, TruncationSchedule};
use crate::specfun::{gaunt, gaunt_selection, grad_dot, HarmonicTable, TripleIndex};
use crate::zernike::{psi_eval, CoefficientField, ZernikeIndex};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    /// Reduced index ranges.
    Quick,
    /// The index ranges of the acceptance suite.
    Full,
}

impl std::str::FromStr for Level {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Self::Quick),
            "full" => Ok(Self::Full),
            other => Err(crate::Error::Domain(format!("unknown self-test level {other:?}"))),
        }
    }
}

pub type GauntFn = fn(&TripleIndex) -> Result<f64>;

/// Replaceable pieces, so tests can check that a corrupted component is caught.
#[derive(Debug, Clone, Copy)]
pub struct Hooks {
    pub gaunt: GauntFn,
}

impl Default for Hooks {
    fn default() -> Self {
        Self { gaunt }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    /// Largest observed deviation.
    pub max_error: f64,
    pub tolerance: f64,
    pub cases: usize,
    pub seconds: f64,
    /// Set when the check could not run.
    pub error: Option<String>,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {:<22} cases={:<6} max_err={:.3e} tol={:.0e} ({:.2}s)",
            self.name, self.cases, self.max_error, self.tolerance, self.seconds
        )?;
        if let Some(e) = &self.error {
            write!(f, " error: {e}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub level: Level,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let n_fail = self.checks.iter().filter(|c| !c.passed).count();
        write!(f, "{} checks, {} failed", self.checks.len(), n_fail)
    }
}

fn timed(name: &'static str, tolerance: f64, f: impl FnOnce() -> Result<(f64, usize)>) -> CheckResult {
    let start = Instant::now();
    let outcome = f();
    let seconds = start.elapsed().as_secs_f64();
    match outcome {
        Ok((max_error, cases)) => CheckResult {
            name,
            passed: max_error <= tolerance,
            max_error,
            tolerance,
            cases,
            seconds,
            error: None,
        },
        Err(e) => CheckResult {
            name,
            passed: false,
            max_error: f64::NAN,
            tolerance,
            cases: 0,
            seconds,
            error: Some(e.to_string()),
        },
    }
}

pub fn run(level: Level) -> Report {
    run_with(level, &Hooks::default())
}

pub fn run_with(level: Level, hooks: &Hooks) -> Report {
    let (n_gram, l_gaunt, n_grad, (k_or, l_or), n_rt, sched) = match level {
        Level::Quick => (6, 4, 10, (1, 3), 3, vec![8, 6, 4]),
        Level::Full => (10, 8, 50, (3, 6), 20, vec![14, 12, 10, 8, 6, 4]),
    };
    let checks = vec![
        timed("orthonormality", 1e-9, || gram_deviation(n_gram)),
        timed("gaunt-selection", 1e-10, || gaunt_exhaustive(l_gaunt, hooks.gaunt)),
        timed("gradient-identity", 1e-8, || gradient_identity(n_grad, 6, 0x5eed, hooks.gaunt)),
        timed("oracle-equivalence", 1e-8, || oracle_equivalence(k_or, l_or)),
        timed("round-trip", 1e-10, || round_trip(n_rt, &sched, 0xc0ffee)),
    ];
    Report { level, checks }
}

/// Max-norm deviation from the identity of the Gram matrix of every `ψ` with `ℓ + 2k ≤ n`.
pub fn gram_deviation(n: usize) -> Result<(f64, usize)> {
    let basis: Vec<ZernikeIndex> = (0..=n / 2)
        .flat_map(|k| {
            (0..=n - 2 * k).flat_map(move |ell| (-(ell as i64)..=ell as i64).map(move |m| ZernikeIndex { k, ell, m }))
        })
        .collect();
    // Exact for polynomial degree 2n: r-degree 2n+2, angular degree 2n.
    let quad = BallQuadrature::new(n + 2, n + 2, 2 * n + 2)?;
    let nodes: Vec<_> = quad.nodes().collect();
    let samples: Vec<Vec<Complex64>> = basis
        .par_iter()
        .map(|&idx| nodes.iter().map(|&(p, _)| psi_eval(idx, p)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let worst = (0..basis.len())
        .into_par_iter()
        .map(|i| {
            (i..basis.len())
                .map(|j| {
                    let g: Complex64 = samples[i]
                        .iter()
                        .zip(&samples[j])
                        .zip(&nodes)
                        .map(|((a, b), (_, w))| a * b.conj() * w)
                        .sum();
                    let target = if i == j { 1.0 } else { 0.0 };
                    (g - target).norm()
                })
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    Ok((worst, basis.len() * (basis.len() + 1) / 2))
}

/// Every triple with `ℓ_j ≤ lmax`: exact zero off the selection rules, quadrature agreement on them.
pub fn gaunt_exhaustive(lmax: usize, gaunt: GauntFn) -> Result<(f64, usize)> {
    let sphere = SphereQuadrature::new(lmax + 4, 3 * lmax + 4)?;
    let tables: Vec<(HarmonicTable, f64)> = sphere.nodes().map(|(t, p, w)| (HarmonicTable::new(lmax, t, p), w)).collect();
    let triples: Vec<[u32; 3]> = (0..=lmax as u32)
        .flat_map(|a| (0..=lmax as u32).flat_map(move |b| (0..=lmax as u32).map(move |c| [a, b, c])))
        .collect();
    let per: Vec<(f64, usize)> = triples
        .par_iter()
        .map(|&ell| {
            let mut worst: f64 = 0.0;
            let mut n = 0;
            let [a, b, c] = ell.map(|x| x as i32);
            for m1 in -a..=a {
                for m2 in -b..=b {
                    for m3 in -c..=c {
                        let idx = TripleIndex::new(ell, [m1, m2, m3])?;
                        let g = gaunt(&idx)?;
                        n += 1;
                        if !gaunt_selection(&idx) {
                            if g != 0.0 {
                                return Ok((f64::INFINITY, n));
                            }
                            continue;
                        }
                        let q: Complex64 = tables
                            .iter()
                            .map(|(t, w)| {
                                t.y(ell[0] as usize, m1.into()) * t.y(ell[1] as usize, m2.into()) * t.y(ell[2] as usize, m3.into()) * *w
                            })
                            .sum();
                        worst = worst.max((q - g).norm());
                    }
                }
            }
            Ok((worst, n))
        })
        .collect::<Result<_>>()?;
    Ok(per.into_iter().fold((0.0, 0), |(w, n), (a, b)| (w.max(a), n + b)))
}

/// Random real `g_ℓ = Σ_m a_m Y_ℓ^m` with `a_{-m} = (-1)^m conj(a_m)`.
fn random_real_combination(ell: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let mut a = vec![Complex64::default(); 2 * ell + 1];
    a[ell] = Complex64::new(rng.random_range(-1.0..1.0), 0.0);
    for m in 1..=ell {
        let v = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        a[ell + m] = v;
        a[ell - m] = if m % 2 == 0 { v.conj() } else { -v.conj() };
    }
    a
}

/// `∫(∇g_{ℓ1}·∇g_{ℓ2}) g_{ℓ3} dS` by sphere quadrature against
/// `[ℓ1(ℓ1+1) + ℓ2(ℓ2+1) - ℓ3(ℓ3+1)]/2 · ∫ g_{ℓ1} g_{ℓ2} g_{ℓ3} dS` from Gaunt coefficients.
///
/// Error is relative to `max(1, |rhs|)`.
pub fn gradient_identity(trials: usize, lmax: usize, seed: u64, gaunt: GauntFn) -> Result<(f64, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sphere = SphereQuadrature::new(2 * lmax + 2, 4 * lmax + 4)?;
    let tables: Vec<(HarmonicTable, f64)> = sphere
        .nodes()
        .map(|(t, p, w)| HarmonicTable::with_gradients(lmax, t, p).map(|h| (h, w)))
        .collect::<Result<_>>()?;
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let ells: [usize; 3] = std::array::from_fn(|_| rng.random_range(0..=lmax));
        let coeffs: Vec<Vec<Complex64>> = ells.iter().map(|&l| random_real_combination(l, &mut rng)).collect();
        let signed = |j: usize| {
            let l = ells[j] as i64;
            (-l..=l).map(move |m| (m, (m + l) as usize))
        };

        let lhs: Complex64 = tables
            .iter()
            .map(|(t, w)| {
                let eval = |j: usize| -> (Complex64, (Complex64, Complex64)) {
                    signed(j).fold(Default::default(), |(v, (gt, gp)), (m, i)| {
                        let a = coeffs[j][i];
                        let (dt, dp) = t.grad(ells[j], m);
                        (v + a * t.y(ells[j], m), (gt + a * dt, gp + a * dp))
                    })
                };
                let (_, g1) = eval(0);
                let (_, g2) = eval(1);
                let (v3, _) = eval(2);
                grad_dot(g1, g2) * v3 * *w
            })
            .sum();

        let mut triple = Complex64::default();
        for (m1, i1) in signed(0) {
            for (m2, i2) in signed(1) {
                let m3 = -(m1 + m2);
                if m3.unsigned_abs() as usize > ells[2] {
                    continue;
                }
                let i3 = (m3 + ells[2] as i64) as usize;
                let idx = TripleIndex::new(ells.map(|l| l as u32), [m1 as i32, m2 as i32, m3 as i32])?;
                triple += coeffs[0][i1] * coeffs[1][i2] * coeffs[2][i3] * gaunt(&idx)?;
            }
        }
        let lam = |l: usize| (l * (l + 1)) as f64;
        let rhs = triple * ((lam(ells[0]) + lam(ells[1]) - lam(ells[2])) / 2.0);
        worst = worst.max((lhs - rhs).norm() / rhs.norm().max(1.0));
    }
    Ok((worst, trials))
}

/// Series against quadrature measurements for every basis `ψ` with `k ≤ kmax`, `ℓ ≤ lmax`,
/// measured on `k' ≤ kmax`, `ℓ' ≤ lmax` at default quadrature orders.
pub fn oracle_equivalence(kmax: usize, lmax: usize) -> Result<(f64, usize)> {
    let quad = BallQuadrature::default();
    let caps = vec![lmax; kmax + 1];
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for k in 0..=kmax {
        for ell in 0..=lmax {
            for m in -(ell as i64)..=ell as i64 {
                let idx = ZernikeIndex::new(k, ell, m)?;
                let series = forward_measure(&CoefficientField::basis(idx), &caps)?;
                let eta = |p| psi_eval(idx, p).unwrap_or_default();
                let oracle = forward_measure_quadrature_set(eta, &caps, &quad, OracleForm::Phi)?;
                worst = worst.max(series.max_abs_diff(&oracle)?);
                cases += series.len();
            }
        }
    }
    Ok((worst, cases))
}

/// Random field with entries of modulus in `[0.5, 1.5]` and uniform phase.
pub fn random_field(caps: &[usize], rng: &mut ChaCha8Rng) -> CoefficientField {
    let mut c = CoefficientField::zeros(caps);
    for v in c.values_mut() {
        *v = Complex64::from_polar(rng.random_range(0.5..1.5), rng.random_range(0.0..std::f64::consts::TAU));
    }
    c
}

/// Largest per-coefficient relative error of reconstruct ∘ forward over random fields.
pub fn round_trip(fields: usize, caps: &[usize], seed: u64) -> Result<(f64, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let schedule = TruncationSchedule::new(caps.to_vec())?;
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for _ in 0..fields {
        let c = random_field(caps, &mut rng);
        let ms = forward_measure(&c, caps)?;
        let rec = reconstruct(&ms, &schedule)?.recovered;
        for (i, v) in c.iter() {
            let r = rec.get(i.k, i.ell, i.m).expect("same shape");
            worst = worst.max((r - v).norm() / v.norm());
            cases += 1;
        }
    }
    Ok((worst, cases))
}
