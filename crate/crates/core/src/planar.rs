//! Three oscillators in a plane: `x` lossy, `y` neutral, `z` with gain, with
//! `x` and `z` coupled directly (`ε₂`) and through `y` (`ε₁`).

#[allow(unused_imports)]
use num_traits::Float;

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::quadratic::{FormBuilder, QuadraticForm, Var};
use crate::region::{scan_with, GridMap, RegionReport};
use crate::spectral::{max_imag, pencil_eigenvalues, Method, Phase, Spectrum, DEFAULT_IMAG_TOL};

/// Parameters with the `y` frequency normalised to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrioParams {
    pub omega: f64,
    pub gamma: f64,
    pub eps1: f64,
    pub eps2: f64,
}

impl TrioParams {
    pub fn new(omega: f64, gamma: f64, eps1: f64, eps2: f64) -> Result<Self> {
        let p = Self { omega, gamma, eps1, eps2 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0) || !self.omega.is_finite() {
            return Err(invalid("omega must be positive"));
        }
        if !(self.gamma >= 0.0) || !self.gamma.is_finite() {
            return Err(invalid("gamma must be non-negative"));
        }
        if !self.eps1.is_finite() || !self.eps2.is_finite() {
            return Err(invalid("couplings must be finite"));
        }
        Ok(())
    }

    pub fn with_eps2(self, eps2: f64) -> Self {
        Self { eps2, ..self }
    }

    /// Damping matrix of `ẍ + Cẋ + Kx = 0` in the order `(x, y, z)`.
    pub fn damping(&self) -> Vec<f64> {
        let g = 2.0 * self.gamma;
        vec![g, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -g]
    }

    pub fn stiffness(&self) -> Vec<f64> {
        let (w2, e1, e2) = (self.omega * self.omega, self.eps1, self.eps2);
        vec![w2, -e1, -e2, -e1, 1.0, -e1, -e2, -e1, w2]
    }

    /// Accelerations from the second-order equations of motion.
    pub fn accelerations(&self, q: [f64; 3], v: [f64; 3]) -> [f64; 3] {
        let w2 = self.omega * self.omega;
        let (e1, e2, g) = (self.eps1, self.eps2, self.gamma);
        [
            -w2 * q[0] - 2.0 * g * v[0] + e1 * q[1] + e2 * q[2],
            -q[1] + e1 * (q[0] + q[2]),
            -w2 * q[2] + 2.0 * g * v[2] + e1 * q[1] + e2 * q[0],
        ]
    }
}

/// `p(μ) = μ³ − αμ² + βμ − σ` with `μ = λ²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicCoeffs {
    pub alpha: f64,
    pub beta: f64,
    pub sigma: f64,
}

impl CubicCoeffs {
    pub fn new(p: &TrioParams) -> Self {
        let (w2, g2) = (p.omega * p.omega, p.gamma * p.gamma);
        let (e1s, e2s) = (p.eps1 * p.eps1, p.eps2 * p.eps2);
        Self {
            alpha: 1.0 + 2.0 * w2 - 4.0 * g2,
            beta: w2 * w2 + 2.0 * w2 - 2.0 * e1s - e2s - 4.0 * g2,
            sigma: w2 * w2 - 2.0 * e1s * (p.eps2 + w2) - e2s,
        }
    }

    pub fn eval(&self, mu: f64) -> f64 {
        ((mu - self.alpha) * mu + self.beta) * mu - self.sigma
    }

    /// Ascending coefficients of the sextic in `λ`.
    pub fn sextic(&self) -> [f64; 7] {
        [-self.sigma, 0.0, self.beta, 0.0, -self.alpha, 0.0, 1.0]
    }

    /// The three roots in `μ` by the trigonometric or Cardano formula, each real
    /// root polished by Newton steps. Real roots come first, ascending.
    pub fn roots(&self) -> [Complex64; 3] {
        let (a, b) = (self.alpha, self.beta);
        let shift = a / 3.0;
        let p = b - a * a / 3.0;
        let q = -2.0 * a * a * a / 27.0 + a * b / 3.0 - self.sigma;
        let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
        let polish = |mut mu: f64| {
            for _ in 0..3 {
                let d = (3.0 * mu - 2.0 * a) * mu + b;
                if d == 0.0 {
                    break;
                }
                let step = self.eval(mu) / d;
                if !step.is_finite() {
                    break;
                }
                mu -= step;
            }
            mu
        };
        if disc < 0.0 {
            let r = (-p / 3.0).sqrt();
            let phi = (-q / (2.0 * r * r * r)).clamp(-1.0, 1.0).acos();
            let mut t = [0.0; 3];
            for (k, slot) in t.iter_mut().enumerate() {
                let root = 2.0 * r * (phi / 3.0 - 2.0 * core::f64::consts::PI * k as f64 / 3.0).cos();
                *slot = polish(root + shift);
            }
            t.sort_by(f64::total_cmp);
            return t.map(|x| Complex64::new(x, 0.0));
        }
        // one real root; u chosen to avoid cancellation in u + v
        let sq = disc.sqrt();
        let u = (-q / 2.0 - q.signum() * sq).cbrt();
        let v = if u == 0.0 { 0.0 } else { -p / (3.0 * u) };
        let real = polish(u + v + shift);
        let re = -(u + v) / 2.0 + shift;
        let im = 3f64.sqrt() / 2.0 * (u - v).abs();
        if im == 0.0 {
            let mut t = [real, polish(re), polish(re)];
            t.sort_by(f64::total_cmp);
            return t.map(|x| Complex64::new(x, 0.0));
        }
        [Complex64::new(real, 0.0), Complex64::new(re, im), Complex64::new(re, -im)]
    }
}

/// Six frequencies `λ = ±√μ` over the cubic roots.
pub fn trio_spectrum(params: &TrioParams) -> Result<Spectrum> {
    params.validate()?;
    let freqs = CubicCoeffs::new(params)
        .roots()
        .iter()
        .flat_map(|mu| {
            let l = mu.sqrt();
            [l, -l]
        })
        .collect();
    Ok(Spectrum::new(freqs, DEFAULT_IMAG_TOL, Method::Cubic))
}

/// The same six frequencies from the 3-oscillator pencil.
pub fn trio_qep_spectrum(params: &TrioParams) -> Result<Spectrum> {
    params.validate()?;
    let freqs = pencil_eigenvalues(3, &params.damping(), &params.stiffness())?;
    Ok(Spectrum::new(freqs, DEFAULT_IMAG_TOL, Method::Qep))
}

/// Unbroken when all three `μ` roots are real and positive, read off the
/// explicit roots.
pub fn trio_classify(params: &TrioParams) -> Phase {
    let roots = CubicCoeffs::new(params).roots();
    if roots.iter().all(|m| m.im == 0.0 && m.re > 0.0) {
        Phase::Unbroken
    } else {
        Phase::Broken
    }
}

/// The same predicate from the critical points `μ∓ = (α ∓ √(α²−3β))/3`: the
/// lower one is the local maximum of `p`, the upper one the local minimum, and
/// `σ = p(0)·(−1) > 0` keeps the smallest root positive.
pub fn trio_classify_critical(params: &TrioParams) -> Phase {
    let c = CubicCoeffs::new(params);
    let d = c.alpha * c.alpha - 3.0 * c.beta;
    if !(d > 0.0) {
        return Phase::Broken;
    }
    let mu_max = (c.alpha - d.sqrt()) / 3.0;
    let mu_min = (c.alpha + d.sqrt()) / 3.0;
    if mu_max > 0.0 && c.eval(mu_max) > 0.0 && c.eval(mu_min) < 0.0 && c.sigma > 0.0 {
        Phase::Unbroken
    } else {
        Phase::Broken
    }
}

/// `H` with general `ω₁`, `ω₂`; momenta `(p, q, r)` conjugate to `(x, y, z)`.
pub fn trio_hamiltonian_general(omega1: f64, omega2: f64, gamma: f64, eps1: f64, eps2: f64) -> QuadraticForm {
    use Var::{P, X};
    let w22 = omega2 * omega2;
    let mut b = FormBuilder::new(3);
    b.monomial(P(1), P(1), w22 / 4.0)
        .monomial(P(0), P(2), w22 / 2.0)
        .monomial(X(1), X(1), 1.0)
        .monomial(X(0), X(2), 2.0 * (omega1 * omega1 - gamma * gamma) / w22)
        .monomial(X(0), X(1), -2.0 * eps1 / w22)
        .monomial(X(1), X(2), -2.0 * eps1 / w22)
        .monomial(X(0), X(0), -eps2 / w22)
        .monomial(X(2), X(2), -eps2 / w22)
        .monomial(X(2), P(2), gamma)
        .monomial(X(0), P(0), -gamma);
    b.build()
}

/// `H` with `ω₂ = 1`.
pub fn trio_hamiltonian(params: &TrioParams) -> QuadraticForm {
    trio_hamiltonian_general(params.omega, 1.0, params.gamma, params.eps1, params.eps2)
}

/// Unbroken flags over an `(ε₁, ε₂)` rectangle.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDiagram {
    pub omega: f64,
    pub gamma: f64,
    pub eps1: Vec<f64>,
    pub eps2: Vec<f64>,
    /// Row-major with `ε₂` as the row index.
    pub unbroken: Vec<bool>,
}

impl PhaseDiagram {
    pub fn get(&self, i1: usize, i2: usize) -> bool {
        self.unbroken[i2 * self.eps1.len() + i1]
    }

    pub fn unbroken_count(&self) -> usize {
        self.unbroken.iter().filter(|b| **b).count()
    }
}

pub const MIN_DIAGRAM_RESOLUTION: usize = 32;

fn linspace(range: (f64, f64), n: usize) -> Vec<f64> {
    (0..n).map(|i| range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64).collect()
}

fn check_range(r: (f64, f64)) -> Result<()> {
    if !r.0.is_finite() || !r.1.is_finite() || !(r.1 > r.0) {
        return Err(invalid("range must be finite and increasing"));
    }
    Ok(())
}

pub fn trio_phase_diagram<E: GridMap>(
    omega: f64,
    gamma: f64,
    eps1_range: (f64, f64),
    eps2_range: (f64, f64),
    resolution: usize,
    exec: &E,
) -> Result<PhaseDiagram> {
    if resolution < MIN_DIAGRAM_RESOLUTION {
        return Err(invalid("phase diagram needs at least 32 points per axis"));
    }
    check_range(eps1_range)?;
    check_range(eps2_range)?;
    TrioParams::new(omega, gamma, 0.0, 0.0)?;
    let eps1 = linspace(eps1_range, resolution);
    let eps2 = linspace(eps2_range, resolution);
    let rows = exec.map(&eps2, |e2| {
        eps1.iter()
            .map(|&e1| trio_classify(&TrioParams { omega, gamma, eps1: e1, eps2: e2 }) == Phase::Unbroken)
            .collect::<Vec<bool>>()
    });
    Ok(PhaseDiagram { omega, gamma, eps1, eps2, unbroken: rows.concat() })
}

/// Sorted imaginary parts of the six frequencies along `ε₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImTrace {
    pub eps2: Vec<f64>,
    pub branches: Vec<[f64; 6]>,
}

pub const MIN_TRACE_POINTS: usize = 64;

pub fn trio_im_lambda_trace(
    omega: f64,
    gamma: f64,
    eps1: f64,
    eps2_range: (f64, f64),
    points: usize,
) -> Result<ImTrace> {
    if points < MIN_TRACE_POINTS {
        return Err(invalid("trace needs at least 64 points"));
    }
    check_range(eps2_range)?;
    let eps2 = linspace(eps2_range, points);
    let mut branches = Vec::with_capacity(points);
    for &e2 in &eps2 {
        let s = trio_spectrum(&TrioParams::new(omega, gamma, eps1, e2)?)?;
        let mut im = [0.0; 6];
        for (slot, l) in im.iter_mut().zip(&s.frequencies) {
            *slot = l.im;
        }
        im.sort_by(f64::total_cmp);
        branches.push(im);
    }
    Ok(ImTrace { eps2, branches })
}

/// Phase intervals along `ε₂` at fixed `(ω, γ, ε₁)`, bisected to `refine_tol`.
pub fn trio_eps2_scan<E: GridMap>(
    base: &TrioParams,
    eps2_range: (f64, f64),
    grid_points: usize,
    refine_tol: f64,
    exec: &E,
) -> Result<RegionReport> {
    base.validate()?;
    scan_with("eps2", eps2_range, grid_points, refine_tol, exec, |e2| {
        let p = base.with_eps2(e2);
        let s = trio_spectrum(&p)?;
        Ok((trio_classify(&p), max_imag(&s.frequencies)))
    })
}
