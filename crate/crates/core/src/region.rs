//! Phase-boundary scans along the coupling and critical loss/gain amplitudes.

#[allow(unused_imports)]
use num_traits::Float;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::chain::{ChainSpec, Parity};
use crate::error::{invalid, Error, Result};
use crate::spectral::{
    analytic_spectrum, analytic_z_roots, max_relative_imag, qep_spectrum, Phase, Spectrum,
    DEFAULT_IMAG_TOL,
};

/// Evaluates a function over a list of sample points. Implementations may run
/// the evaluations concurrently but must return results in input order.
pub trait GridMap {
    fn map<T: Send, F: Fn(f64) -> T + Sync>(&self, xs: &[f64], f: F) -> Vec<T>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl GridMap for Sequential {
    fn map<T: Send, F: Fn(f64) -> T + Sync>(&self, xs: &[f64], f: F) -> Vec<T> {
        xs.iter().map(|&x| f(x)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileKind {
    Uniform,
    /// `γ/(N−n+1)` for pair `n = 1..N` counted from the chain end.
    Inverse,
    /// `γ/(N−n+1)²`.
    InverseSquare,
    /// Per-pair weights, outermost first, multiplied by the amplitude.
    Custom(Vec<f64>),
}

impl ProfileKind {
    pub fn name(&self) -> &'static str {
        match self {
            ProfileKind::Uniform => "uniform",
            ProfileKind::Inverse => "inverse",
            ProfileKind::InverseSquare => "inverse_square",
            ProfileKind::Custom(_) => "custom",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GammaProfile {
    pub kind: ProfileKind,
    pub amplitude: f64,
}

impl GammaProfile {
    pub fn new(kind: ProfileKind, amplitude: f64) -> Self {
        Self { kind, amplitude }
    }

    /// `γ_k` for pairs `k = 0..N`, outermost first; the innermost pair gets the
    /// full amplitude for the decaying kinds.
    pub fn gammas(&self, n_pairs: usize) -> Result<Vec<f64>> {
        if !(self.amplitude >= 0.0) {
            return Err(invalid("loss/gain amplitude must be non-negative"));
        }
        let a = self.amplitude;
        let out: Vec<f64> = match &self.kind {
            ProfileKind::Uniform => vec![a; n_pairs],
            ProfileKind::Inverse => (0..n_pairs).map(|k| a / (n_pairs - k) as f64).collect(),
            ProfileKind::InverseSquare => {
                (0..n_pairs).map(|k| a / ((n_pairs - k) as f64).powi(2)).collect()
            }
            ProfileKind::Custom(w) => {
                if w.len() != n_pairs {
                    return Err(Error::DimensionMismatch { expected: n_pairs, found: w.len() });
                }
                if w.iter().any(|x| !(*x >= 0.0)) {
                    return Err(invalid("custom profile weights must be non-negative"));
                }
                w.iter().map(|x| a * x).collect()
            }
        };
        Ok(out)
    }

    fn is_uniform(&self) -> bool {
        match &self.kind {
            ProfileKind::Uniform => true,
            ProfileKind::Custom(w) => w.iter().all(|x| *x == w[0]),
            _ => false,
        }
    }
}

/// A family of chains parameterised by a uniform coupling `ε`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainTemplate {
    pub n_pairs: usize,
    pub parity: Parity,
    pub omega: f64,
    pub profile: GammaProfile,
    /// Use the companion-matrix solver even where the closed-form spectrum applies.
    pub force_qep: bool,
}

impl ChainTemplate {
    pub fn uniform(n_pairs: usize, omega: f64, gamma: f64) -> Self {
        Self {
            n_pairs,
            parity: Parity::Even,
            omega,
            profile: GammaProfile::new(ProfileKind::Uniform, gamma),
            force_qep: false,
        }
    }

    pub fn spec(&self, epsilon: f64) -> Result<ChainSpec> {
        let n_omega = match self.parity {
            Parity::Even => self.n_pairs,
            Parity::Odd => self.n_pairs + 1,
        };
        ChainSpec::new(
            self.n_pairs,
            self.parity,
            vec![self.omega; n_omega],
            self.profile.gammas(self.n_pairs)?,
            vec![epsilon; self.n_pairs],
        )
    }

    pub fn spectrum(&self, epsilon: f64) -> Result<Spectrum> {
        if !self.force_qep && self.parity == Parity::Even && self.profile.is_uniform() {
            let g = self.profile.gammas(self.n_pairs)?[0];
            analytic_spectrum(self.n_pairs, self.omega, g, epsilon)
        } else {
            qep_spectrum(&self.spec(epsilon)?)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub phase: Phase,
    /// Whether each end was located by bisection (range ends count as refined).
    pub lo_refined: bool,
    pub hi_refined: bool,
}

impl Interval {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionReport {
    pub param: String,
    pub grid: Vec<f64>,
    /// `max |Im λ|` at each grid point.
    pub max_imag: Vec<f64>,
    pub phases: Vec<Phase>,
    pub intervals: Vec<Interval>,
    pub refine_tol: f64,
}

impl RegionReport {
    pub fn unbroken(&self) -> impl Iterator<Item = &Interval> {
        self.intervals.iter().filter(|i| i.phase == Phase::Unbroken)
    }

    /// Interior boundaries between adjacent intervals.
    pub fn boundaries(&self) -> Vec<f64> {
        self.intervals.iter().skip(1).map(|i| i.lo).collect()
    }

    pub fn total_unbroken_width(&self) -> f64 {
        self.unbroken().map(Interval::width).sum()
    }
}

/// Bisection on a two-valued predicate between `a` (phase `pa`) and `b`.
fn bisect_boundary<F: Fn(f64) -> Result<Phase>>(
    mut a: f64,
    mut b: f64,
    pa: Phase,
    tol: f64,
    phase: F,
) -> Option<f64> {
    while (b - a).abs() > tol {
        let m = 0.5 * (a + b);
        match phase(m) {
            Ok(p) if p == pa => a = m,
            Ok(_) => b = m,
            Err(_) => return None,
        }
    }
    Some(0.5 * (a + b))
}

/// Classifies `grid_points` equally spaced couplings over `eps_range` and
/// refines every phase change by bisection to `refine_tol`.
pub fn scan_epsilon<E: GridMap>(
    template: &ChainTemplate,
    eps_range: (f64, f64),
    grid_points: usize,
    refine_tol: f64,
    exec: &E,
) -> Result<RegionReport> {
    scan_with("epsilon", eps_range, grid_points, refine_tol, exec, |e| {
        template.spectrum(e).map(|s| (s.phase, s.max_imag()))
    })
}

/// One-parameter sweep driven by `eval`, which returns the phase and
/// `max |Im λ|` at a parameter value.
pub fn scan_with<E, F>(
    param: &str,
    range: (f64, f64),
    grid_points: usize,
    refine_tol: f64,
    exec: &E,
    eval: F,
) -> Result<RegionReport>
where
    E: GridMap,
    F: Fn(f64) -> Result<(Phase, f64)> + Sync,
{
    let (lo, hi) = range;
    if !lo.is_finite() || !hi.is_finite() || !(hi > lo) {
        return Err(invalid("sweep range must be finite and increasing"));
    }
    if grid_points < 16 {
        return Err(invalid("at least 16 grid points are required"));
    }
    if !(refine_tol > 0.0) {
        return Err(invalid("refinement tolerance must be positive"));
    }
    let grid: Vec<f64> = (0..grid_points)
        .map(|i| lo + (hi - lo) * i as f64 / (grid_points - 1) as f64)
        .collect();
    let mut max_imag = Vec::with_capacity(grid_points);
    let mut phases = Vec::with_capacity(grid_points);
    for v in exec.map(&grid, &eval) {
        let (p, m) = v?;
        max_imag.push(m);
        phases.push(p);
    }
    let cuts: Vec<usize> = (1..grid_points).filter(|&i| phases[i] != phases[i - 1]).collect();
    let refined = exec.map(&cuts.iter().map(|&c| c as f64).collect::<Vec<_>>(), |i| {
        let i = i as usize;
        bisect_boundary(grid[i - 1], grid[i], phases[i - 1], refine_tol, |e| eval(e).map(|v| v.0))
    });
    let mut intervals = Vec::with_capacity(cuts.len() + 1);
    let (mut start, mut start_refined) = (lo, true);
    for (&i, r) in cuts.iter().zip(refined) {
        let b = r.unwrap_or(0.5 * (grid[i - 1] + grid[i]));
        intervals.push(Interval {
            lo: start,
            hi: b,
            phase: phases[i - 1],
            lo_refined: start_refined,
            hi_refined: r.is_some(),
        });
        start = b;
        start_refined = r.is_some();
    }
    intervals.push(Interval {
        lo: start,
        hi,
        phase: phases[grid_points - 1],
        lo_refined: start_refined,
        hi_refined: true,
    });
    Ok(RegionReport { param: param.into(), grid, max_imag, phases, intervals, refine_tol })
}

/// Closed-form unbroken coupling interval of a uniform even chain,
/// `γ√(ω²−γ²)/z_min < ε < ω²/(2 z_max)`, or `None` when it is empty.
pub fn unbroken_condition_closed_form(n: usize, omega: f64, gamma: f64) -> Result<Option<(f64, f64)>> {
    if !(omega > 0.0) || !(gamma >= 0.0) {
        return Err(invalid("omega must be positive and gamma non-negative"));
    }
    let z = analytic_z_roots(n)?;
    let w2 = omega * omega;
    // the inner root stays real only while ω² ≥ 2γ²
    if 2.0 * gamma * gamma > w2 {
        return Ok(None);
    }
    let low = gamma * (w2 - gamma * gamma).sqrt() / z.z_min;
    let high = w2 / (2.0 * z.z_max);
    Ok((low < high).then_some((low, high)))
}

/// Resolution of the coupling scan inside [`gamma_crit`].
pub const GAMMA_CRIT_GRID: usize = 400;
/// The coupling scan covers `(0, GAMMA_CRIT_EPS_SPAN · ω²]`.
pub const GAMMA_CRIT_EPS_SPAN: f64 = 1.5;

const GOLDEN_ITERATIONS: usize = 48;
const CHUNK: usize = 32;

/// Whether some coupling in `(0, 1.5ω²]` gives an unbroken spectrum. The grid
/// is scanned in chunks with early exit; failing that, the grid minimum of the
/// relative imaginary part is polished by golden-section search so that
/// intervals narrower than the grid spacing are still found.
pub fn has_unbroken_interval<E: GridMap>(template: &ChainTemplate, exec: &E) -> Result<bool> {
    let span = GAMMA_CRIT_EPS_SPAN * template.omega * template.omega;
    let grid: Vec<f64> =
        (1..=GAMMA_CRIT_GRID).map(|i| span * i as f64 / GAMMA_CRIT_GRID as f64).collect();
    let measure = |e: f64| template.spectrum(e).map(|s| max_relative_imag(&s.frequencies));
    let mut values = Vec::with_capacity(grid.len());
    for chunk in grid.chunks(CHUNK) {
        for v in exec.map(chunk, measure) {
            let v = v?;
            if v <= DEFAULT_IMAG_TOL {
                return Ok(true);
            }
            values.push(v);
        }
    }
    let (imin, _) = values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, v)| if *v < acc.1 { (i, *v) } else { acc });
    let mut a = if imin == 0 { 0.0 } else { grid[imin - 1] };
    let mut b = grid[(imin + 1).min(grid.len() - 1)];
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (measure(c)?, measure(d)?);
    for _ in 0..GOLDEN_ITERATIONS {
        if fc.min(fd) <= DEFAULT_IMAG_TOL {
            return Ok(true);
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = measure(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = measure(d)?;
        }
    }
    Ok(fc.min(fd) <= DEFAULT_IMAG_TOL)
}

/// Largest amplitude of the given profile for which an unbroken coupling
/// interval exists, by bisection over `[0, ω]` to `search_tol`.
pub fn gamma_crit<E: GridMap>(
    n: usize,
    omega: f64,
    kind: &ProfileKind,
    search_tol: f64,
    exec: &E,
) -> Result<f64> {
    if n == 0 {
        return Err(invalid("N must be at least 1"));
    }
    if !(omega > 0.0) || !(search_tol > 0.0) {
        return Err(invalid("omega and search tolerance must be positive"));
    }
    let template = |g: f64| ChainTemplate {
        n_pairs: n,
        parity: Parity::Even,
        omega,
        profile: GammaProfile::new(kind.clone(), g),
        force_qep: false,
    };
    let (mut lo, mut hi) = (0.0, omega);
    if has_unbroken_interval(&template(hi), exec)? {
        return Err(Error::RangeTooSmall { upper: hi });
    }
    while hi - lo > search_tol {
        let mid = 0.5 * (lo + hi);
        if has_unbroken_interval(&template(mid), exec)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profiles() {
        let inv = GammaProfile::new(ProfileKind::Inverse, 0.3).gammas(3).unwrap();
        for (a, b) in inv.iter().zip([0.1, 0.15, 0.3]) {
            assert!((a - b).abs() < 1e-15);
        }
        let sq = GammaProfile::new(ProfileKind::InverseSquare, 0.9).gammas(3).unwrap();
        assert!((sq[0] - 0.1).abs() < 1e-15 && (sq[2] - 0.9).abs() < 1e-15);
        assert!(GammaProfile::new(ProfileKind::Custom(vec![1.0]), 0.1).gammas(2).is_err());
        assert!(GammaProfile::new(ProfileKind::Uniform, -0.1).gammas(2).is_err());
    }

    #[test]
    fn closed_form_pair_interval() {
        let (lo, hi) = unbroken_condition_closed_form(1, 1.0, 0.1).unwrap().unwrap();
        assert!((lo - 0.2 * 0.99f64.sqrt()).abs() < 1e-15);
        assert!((hi - 1.0).abs() < 1e-15);
        assert_eq!(unbroken_condition_closed_form(4, 1.0, 0.1).unwrap(), None);
        assert_eq!(unbroken_condition_closed_form(1, 1.0, 0.8).unwrap(), None);
    }

    #[test]
    fn scan_rejects_bad_input() {
        let t = ChainTemplate::uniform(1, 1.0, 0.1);
        assert!(scan_epsilon(&t, (0.0, 1.0), 8, 1e-8, &Sequential).is_err());
        assert!(scan_epsilon(&t, (1.0, 0.0), 32, 1e-8, &Sequential).is_err());
    }
}
