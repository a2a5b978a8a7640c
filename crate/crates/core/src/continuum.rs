//! Two coupled wave fields `S = u + v`, `D = u − v` with a localized loss/gain
//! impurity, analytically and by finite differences.

#[allow(unused_imports)]
use num_traits::Float;

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuumParams {
    /// Wave speed.
    pub c: f64,
    pub omega: f64,
    /// Coupling between the two rows, signed.
    pub epsilon: f64,
    /// Loss/gain strength; the weight of `δ(x)` for an impurity.
    pub gamma: f64,
}

impl ContinuumParams {
    pub fn new(c: f64, omega: f64, epsilon: f64, gamma: f64) -> Result<Self> {
        if !(c > 0.0) || !(omega > 0.0) {
            return Err(invalid("c and omega must be positive"));
        }
        if !epsilon.is_finite() || !gamma.is_finite() || !c.is_finite() || !omega.is_finite() {
            return Err(invalid("continuum parameters must be finite"));
        }
        Ok(Self { c, omega, epsilon, gamma })
    }

    /// Open interval of `Ω²` for which both `a²` and `b²` are positive.
    pub fn window(&self) -> (f64, f64) {
        let w2 = self.omega * self.omega;
        (w2 - self.epsilon, w2 + self.epsilon)
    }
}

/// Continuum coefficients of two spring-coupled rows with mass density `rho`,
/// tension `k`, drag `gamma_drag`, and vertical springs `μ₁ν₁²`, `μ₂ν₂²`.
/// The resulting `ε = −μ₂ν₂²/ρ` is non-positive for physical springs.
pub fn continuum_parameters(
    rho: f64,
    k: f64,
    gamma_drag: f64,
    mu1: f64,
    nu1: f64,
    mu2: f64,
    nu2: f64,
) -> Result<ContinuumParams> {
    if !(rho > 0.0) || !(k > 0.0) {
        return Err(invalid("rho and k must be positive"));
    }
    let (s1, s2) = (mu1 * nu1 * nu1, mu2 * nu2 * nu2);
    let w2 = (s1 + s2) / rho;
    if !(w2 > 0.0) {
        return Err(invalid("vertical springs must give a positive omega^2"));
    }
    ContinuumParams::new((k / rho).sqrt(), w2.sqrt(), -s2 / rho, gamma_drag / rho)
}

/// The mode `S = e^{iΩt} s(x)`, `D = e^{iΩt} d(x)` of a delta impurity:
/// `s = e^{−a|x|/c}`, `d = i(ac/γΩ) cos(bx/c) + i(γΩ/bc) sin(b|x|/c)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpuritySolution {
    pub params: ContinuumParams,
    pub big_omega: f64,
    pub a: f64,
    pub b: f64,
    pub x: Vec<f64>,
    pub s: Vec<Complex64>,
    pub d: Vec<Complex64>,
}

/// Which side of the origin a one-sided derivative is taken from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl ImpuritySolution {
    fn sgn(x: f64, side: Side) -> f64 {
        if x > 0.0 || (x == 0.0 && side == Side::Right) {
            1.0
        } else {
            -1.0
        }
    }

    fn d_amplitudes(&self) -> (f64, f64) {
        let p = &self.params;
        (self.a * p.c / (p.gamma * self.big_omega), p.gamma * self.big_omega / (self.b * p.c))
    }

    pub fn s_at(&self, x: f64) -> Complex64 {
        Complex64::new((-self.a * x.abs() / self.params.c).exp(), 0.0)
    }

    pub fn d_at(&self, x: f64) -> Complex64 {
        let (p, q) = self.d_amplitudes();
        let k = self.b / self.params.c;
        Complex64::new(0.0, p * (k * x).cos() + q * (k * x.abs()).sin())
    }

    /// `s′` and `s″` away from the origin, or one-sided at it.
    pub fn s_derivatives(&self, x: f64, side: Side) -> (Complex64, Complex64) {
        let k = self.a / self.params.c;
        let s = self.s_at(x).re;
        let sg = Self::sgn(x, side);
        (Complex64::new(-k * sg * s, 0.0), Complex64::new(k * k * s, 0.0))
    }

    pub fn d_derivatives(&self, x: f64, side: Side) -> (Complex64, Complex64) {
        let (p, q) = self.d_amplitudes();
        let k = self.b / self.params.c;
        let sg = Self::sgn(x, side);
        let d1 = -p * k * (k * x).sin() + q * k * sg * (k * x.abs()).cos();
        let d2 = -p * k * k * (k * x).cos() - q * k * k * (k * x.abs()).sin();
        (Complex64::new(0.0, d1), Complex64::new(0.0, d2))
    }

    /// Largest relative bulk residual of `c²s″ − a²s = 0` and `c²d″ + b²d = 0`
    /// over the sample points other than the origin.
    pub fn bulk_residual(&self) -> f64 {
        let c2 = self.params.c * self.params.c;
        let (a2, b2) = (self.a * self.a, self.b * self.b);
        let xs: Vec<f64> = self.x.iter().copied().filter(|x| *x != 0.0).collect();
        let (mut rs, mut rd, mut ss, mut sd) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for &x in &xs {
            let (s, d) = (self.s_at(x), self.d_at(x));
            let (_, s2) = self.s_derivatives(x, Side::Right);
            let (_, d2) = self.d_derivatives(x, Side::Right);
            rs = rs.max((c2 * s2 - a2 * s).norm());
            rd = rd.max((c2 * d2 + b2 * d).norm());
            // d has nodes, so scale by the field's size rather than pointwise
            ss = ss.max(c2 * s2.norm() + a2 * s.norm());
            sd = sd.max(c2 * d2.norm() + b2 * d.norm());
        }
        (rs / ss.max(f64::MIN_POSITIVE)).max(rd / sd.max(f64::MIN_POSITIVE))
    }

    /// Relative residuals of the two derivative jumps at the origin,
    /// `2iγΩ d(0) = c²[s′]` and `2iγΩ s(0) = c²[d′]`.
    pub fn jump_residuals(&self) -> (f64, f64) {
        let p = &self.params;
        let c2 = p.c * p.c;
        let k = Complex64::new(0.0, 2.0 * p.gamma * self.big_omega);
        let js = self.s_derivatives(0.0, Side::Right).0 - self.s_derivatives(0.0, Side::Left).0;
        let jd = self.d_derivatives(0.0, Side::Right).0 - self.d_derivatives(0.0, Side::Left).0;
        let (l1, r1) = (k * self.d_at(0.0), c2 * js);
        let (l2, r2) = (k * self.s_at(0.0), c2 * jd);
        ((l1 - r1).norm() / l1.norm().max(r1.norm()), (l2 - r2).norm() / l2.norm().max(r2.norm()))
    }

    /// Largest deviation from `s(−x)* = s(x)`, `−d(−x)* = d(x)` on a grid that is
    /// symmetric about the origin.
    pub fn pt_defect(&self) -> f64 {
        let n = self.x.len();
        (0..n)
            .map(|i| {
                let j = n - 1 - i;
                let scale = 1.0 + self.s[i].norm() + self.d[i].norm();
                ((self.s[j].conj() - self.s[i]).norm() + (-self.d[j].conj() - self.d[i]).norm()) / scale
            })
            .fold(0.0, f64::max)
    }

    /// Real initial data `(S, S_t, D, D_t)` at `t = 0` for the real part of the mode.
    pub fn initial_fields(&self, x: &[f64]) -> FieldState {
        let s: Vec<f64> = x.iter().map(|&x| self.s_at(x).re).collect();
        // Re(e^{iΩt} i d̃) = −d̃ sin Ωt
        let d_t: Vec<f64> = x.iter().map(|&x| -self.big_omega * self.d_at(x).im).collect();
        FieldState { s_t: vec![0.0; x.len()], d: vec![0.0; x.len()], s, d_t }
    }
}

/// The analytic impurity mode at frequency `big_omega` sampled at `points`
/// equally spaced positions on `[−half_width, half_width]`.
pub fn impurity_mode(
    params: &ContinuumParams,
    big_omega: f64,
    half_width: f64,
    points: usize,
) -> Result<ImpuritySolution> {
    if big_omega == 0.0 || !big_omega.is_finite() {
        return Err(invalid("mode frequency must be nonzero"));
    }
    if params.gamma == 0.0 {
        return Err(invalid("impurity strength must be nonzero"));
    }
    if !(half_width > 0.0) || points < 2 {
        return Err(invalid("grid needs a positive half-width and at least two points"));
    }
    let omega_sq = big_omega * big_omega;
    let w2 = params.omega * params.omega;
    let a2 = w2 - omega_sq + params.epsilon;
    let b2 = omega_sq - w2 + params.epsilon;
    if !(a2 > 0.0 && b2 > 0.0) {
        return Err(Error::NoPseudoBoundState { omega_sq, window: params.window() });
    }
    let x: Vec<f64> = (0..points)
        .map(|i| half_width * (2.0 * i as f64 - (points - 1) as f64) / (points - 1) as f64)
        .collect();
    let mut sol = ImpuritySolution {
        params: *params,
        big_omega,
        a: a2.sqrt(),
        b: b2.sqrt(),
        x,
        s: Vec::new(),
        d: Vec::new(),
    };
    sol.s = sol.x.iter().map(|&x| sol.s_at(x)).collect();
    sol.d = sol.x.iter().map(|&x| sol.d_at(x)).collect();
    Ok(sol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// Zero fields at the ends with an absorbing layer over the outer 10%.
    Sponge,
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
    pub boundary: Boundary,
}

impl FdGrid {
    pub fn dx(&self) -> f64 {
        match self.boundary {
            Boundary::Periodic => (self.x_max - self.x_min) / self.points as f64,
            Boundary::Sponge => (self.x_max - self.x_min) / (self.points - 1) as f64,
        }
    }

    pub fn xs(&self) -> Vec<f64> {
        let dx = self.dx();
        (0..self.points).map(|i| self.x_min + i as f64 * dx).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub s: Vec<f64>,
    pub s_t: Vec<f64>,
    pub d: Vec<f64>,
    pub d_t: Vec<f64>,
}

impl FieldState {
    pub fn zeros(n: usize) -> Self {
        Self { s: vec![0.0; n], s_t: vec![0.0; n], d: vec![0.0; n], d_t: vec![0.0; n] }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldHistory {
    pub x: Vec<f64>,
    pub times: Vec<f64>,
    pub s: Vec<Vec<f64>>,
    pub d: Vec<Vec<f64>>,
}

pub const COURANT_LIMIT: f64 = 0.5;
const SPONGE_FRACTION: f64 = 0.1;

/// Regularized `γ δ(x)`: a Gaussian of width `4·dx` with integral `γ`.
pub fn gaussian_impurity(grid: &FdGrid, gamma: f64) -> Vec<f64> {
    let w = 4.0 * grid.dx();
    let norm = gamma / (w * (2.0 * PI).sqrt());
    grid.xs().iter().map(|x| norm * (-x * x / (2.0 * w * w)).exp()).collect()
}

fn sponge_profile(grid: &FdGrid, c: f64) -> Vec<f64> {
    let n = grid.points;
    if grid.boundary == Boundary::Periodic {
        return vec![0.0; n];
    }
    let layer = ((n as f64 * SPONGE_FRACTION).ceil() as usize).max(1);
    let width = layer as f64 * grid.dx();
    let peak = 4.0 * c / width;
    (0..n)
        .map(|i| {
            let depth = layer.saturating_sub(i.min(n - 1 - i));
            peak * (depth as f64 / layer as f64).powi(2)
        })
        .collect()
}

/// Second-order leapfrog for
/// `S_tt + ω²S − c²S_xx + εS = −2γ(x)D_t`, `D_tt + ω²D − c²D_xx − εD = −2γ(x)S_t`,
/// with the velocity couplings and sponge damping taken centrally in time.
/// Every `record_every`-th step is kept.
pub fn fd_wave_solver(
    params: &ContinuumParams,
    gamma_profile: &[f64],
    grid: &FdGrid,
    initial: &FieldState,
    t_end: f64,
    dt: f64,
    record_every: usize,
) -> Result<FieldHistory> {
    let n = grid.points;
    if n < 3 || !(grid.x_max > grid.x_min) {
        return Err(invalid("grid needs at least three points on an increasing interval"));
    }
    for v in [gamma_profile, &initial.s, &initial.s_t, &initial.d, &initial.d_t] {
        crate::error::check_len(n, v.len())?;
    }
    if gamma_profile.iter().any(|g| !g.is_finite()) {
        return Err(invalid("loss/gain profile must be bounded"));
    }
    if !(dt > 0.0) || !(t_end > 0.0) || record_every == 0 {
        return Err(invalid("dt, t_end and the recording stride must be positive"));
    }
    let dx = grid.dx();
    let courant = params.c * dt / dx;
    if courant > COURANT_LIMIT {
        return Err(Error::CourantViolation { courant, limit: COURANT_LIMIT });
    }
    let sponge = sponge_profile(grid, params.c);
    let periodic = grid.boundary == Boundary::Periodic;
    let (w2, eps) = (params.omega * params.omega, params.epsilon);
    let r2 = courant * courant;
    let dt2 = dt * dt;
    let lap = |u: &[f64], i: usize| -> f64 {
        let (l, r) = if periodic {
            (u[(i + n - 1) % n], u[(i + 1) % n])
        } else {
            (if i == 0 { 0.0 } else { u[i - 1] }, if i == n - 1 { 0.0 } else { u[i + 1] })
        };
        l - 2.0 * u[i] + r
    };
    // acceleration of each field from the current fields and velocities
    let accel = |s: &[f64], st: &[f64], d: &[f64], dtv: &[f64], i: usize| -> (f64, f64) {
        let c2 = params.c * params.c / (dx * dx);
        let g = 2.0 * gamma_profile[i];
        (
            c2 * lap(s, i) - (w2 + eps) * s[i] - g * dtv[i] - sponge[i] * st[i],
            c2 * lap(d, i) - (w2 - eps) * d[i] - g * st[i] - sponge[i] * dtv[i],
        )
    };

    let mut s_prev = initial.s.clone();
    let mut d_prev = initial.d.clone();
    let mut s = vec![0.0; n];
    let mut d = vec![0.0; n];
    for i in 0..n {
        let (as_, ad) = accel(&initial.s, &initial.s_t, &initial.d, &initial.d_t, i);
        s[i] = initial.s[i] + dt * initial.s_t[i] + 0.5 * dt2 * as_;
        d[i] = initial.d[i] + dt * initial.d_t[i] + 0.5 * dt2 * ad;
    }
    if !periodic {
        for u in [&mut s, &mut d, &mut s_prev, &mut d_prev] {
            u[0] = 0.0;
            u[n - 1] = 0.0;
        }
    }
    let steps = (t_end / dt - 1e-9).ceil() as usize;
    let mut hist = FieldHistory { x: grid.xs(), times: vec![0.0], s: vec![s_prev.clone()], d: vec![d_prev.clone()] };
    if record_every == 1 {
        hist.times.push(dt);
        hist.s.push(s.clone());
        hist.d.push(d.clone());
    }
    let mut s_next = vec![0.0; n];
    let mut d_next = vec![0.0; n];
    for k in 2..=steps {
        for i in 0..n {
            if !periodic && (i == 0 || i == n - 1) {
                s_next[i] = 0.0;
                d_next[i] = 0.0;
                continue;
            }
            let g = gamma_profile[i] * dt;
            let h = 0.5 * sponge[i] * dt;
            let a = 2.0 * s[i] - (1.0 - h) * s_prev[i] + r2 * lap(&s, i) - dt2 * (w2 + eps) * s[i] + g * d_prev[i];
            let b = 2.0 * d[i] - (1.0 - h) * d_prev[i] + r2 * lap(&d, i) - dt2 * (w2 - eps) * d[i] + g * s_prev[i];
            // (1+h) S⁺ + g D⁺ = a,  g S⁺ + (1+h) D⁺ = b
            let det = (1.0 + h) * (1.0 + h) - g * g;
            s_next[i] = ((1.0 + h) * a - g * b) / det;
            d_next[i] = ((1.0 + h) * b - g * a) / det;
        }
        core::mem::swap(&mut s_prev, &mut s);
        core::mem::swap(&mut s, &mut s_next);
        core::mem::swap(&mut d_prev, &mut d);
        core::mem::swap(&mut d, &mut d_next);
        if k % record_every == 0 || k == steps {
            hist.times.push(k as f64 * dt);
            hist.s.push(s.clone());
            hist.d.push(d.clone());
        }
    }
    Ok(hist)
}

/// `(Ω_S², Ω_D²) = ω² ± ε + c²q²` of the wave equations.
pub fn continuum_dispersion(params: &ContinuumParams, q: f64) -> (f64, f64) {
    let base = params.omega * params.omega + params.c * params.c * q * q;
    (base + params.epsilon, base - params.epsilon)
}

/// The same relation for the lattice with spacing `spacing` before the
/// continuum limit: `c²q²` becomes `c²(2/Δ)² sin²(qΔ/2)`.
pub fn chain_dispersion(params: &ContinuumParams, q: f64, spacing: f64) -> (f64, f64) {
    let k = 2.0 / spacing * (0.5 * q * spacing).sin();
    let base = params.omega * params.omega + params.c * params.c * k * k;
    (base + params.epsilon, base - params.epsilon)
}

/// Angular frequency of an oscillating signal from its zero crossings.
pub fn zero_crossing_frequency(times: &[f64], signal: &[f64]) -> Option<f64> {
    let mut crossings = Vec::new();
    for i in 1..signal.len().min(times.len()) {
        let (a, b) = (signal[i - 1], signal[i]);
        if (a < 0.0) != (b < 0.0) && a != b {
            crossings.push(times[i - 1] + (times[i] - times[i - 1]) * a / (a - b));
        }
    }
    if crossings.len() < 3 {
        return None;
    }
    let span = crossings[crossings.len() - 1] - crossings[0];
    Some(PI * (crossings.len() - 1) as f64 / span)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionSample {
    pub mode: usize,
    pub q: f64,
    pub omega_s_measured: f64,
    pub omega_s_expected: f64,
    pub omega_d_measured: f64,
    pub omega_d_expected: f64,
}

impl DispersionSample {
    /// Relative error of the squared frequencies, the larger of the two fields.
    pub fn relative_error(&self) -> f64 {
        let r = |m: f64, e: f64| (m * m - e * e).abs() / (e * e);
        r(self.omega_s_measured, self.omega_s_expected).max(r(self.omega_d_measured, self.omega_d_expected))
    }
}

/// Runs the loss-free solver on a periodic line of length `length` with
/// cosine initial data for each Fourier `mode`, and reads off the two field
/// frequencies over `periods` oscillations of the slower one.
pub fn measure_dispersion(
    params: &ContinuumParams,
    length: f64,
    points: usize,
    modes: &[usize],
    periods: f64,
) -> Result<Vec<DispersionSample>> {
    let grid = FdGrid { x_min: 0.0, x_max: length, points, boundary: Boundary::Periodic };
    let xs = grid.xs();
    let free = ContinuumParams { gamma: 0.0, ..*params };
    let zero = vec![0.0; points];
    let mut out = Vec::with_capacity(modes.len());
    for &m in modes {
        let q = 2.0 * PI * m as f64 / length;
        let (ws2, wd2) = continuum_dispersion(&free, q);
        if !(ws2 > 0.0 && wd2 > 0.0) {
            return Err(invalid("mode is not oscillatory for these parameters"));
        }
        let (ws, wd) = (ws2.sqrt(), wd2.sqrt());
        let dt = (0.4 * grid.dx() / free.c).min(0.02 / ws.max(wd));
        let t_end = periods * 2.0 * PI / ws.min(wd);
        let profile: Vec<f64> = xs.iter().map(|x| (q * x).cos()).collect();
        let init = FieldState { s: profile.clone(), s_t: zero.clone(), d: profile.clone(), d_t: zero.clone() };
        let h = fd_wave_solver(&free, &zero, &grid, &init, t_end, dt, 1)?;
        let project = |f: &Vec<f64>| f.iter().zip(&profile).map(|(a, b)| a * b).sum::<f64>();
        let a_s: Vec<f64> = h.s.iter().map(project).collect();
        let a_d: Vec<f64> = h.d.iter().map(project).collect();
        let fail = || Error::NumericalFailure { method: "zero-crossing count", detail: "too few crossings".into() };
        out.push(DispersionSample {
            mode: m,
            q,
            omega_s_measured: zero_crossing_frequency(&h.times, &a_s).ok_or_else(fail)?,
            omega_s_expected: ws,
            omega_d_measured: zero_crossing_frequency(&h.times, &a_d).ok_or_else(fail)?,
            omega_d_expected: wd,
        });
    }
    Ok(out)
}
