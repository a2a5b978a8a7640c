//! Fixed-step RK4 integration of quadratic Hamiltonians with high-precision
//! conservation diagnostics.

#[allow(unused_imports)]
use num_traits::Float;

use alloc::vec;
use alloc::vec::Vec;

use crate::chain::{energy_terms, ChainSpec, Hamiltonian, HamiltonianRep, Parity, PhaseState};
use crate::compensated::{CompensatedVec, DoubleDouble};
use crate::error::{check_len, invalid, Error, Result};
use crate::planar::{trio_hamiltonian, trio_spectrum, TrioParams};
use crate::quadratic::QuadraticForm;
use crate::spectral::qep_spectrum;

/// Steps must satisfy `dt · max|λ| < STABILITY_LIMIT`.
pub const STABILITY_LIMIT: f64 = 0.1;

/// A Hamiltonian together with what the integrator needs to know about it.
#[derive(Debug, Clone)]
pub struct HamiltonianSystem {
    form: QuadraticForm,
    max_frequency: f64,
    /// `(ω, ε)` of a uniform even chain, for which the conserved `E` is tracked.
    energy: Option<(f64, f64)>,
}

impl HamiltonianSystem {
    pub fn chain(spec: &ChainSpec, rep: &HamiltonianRep) -> Result<Self> {
        let form = Hamiltonian::new(spec, rep)?.form().clone();
        let max_frequency = qep_spectrum(spec)?.frequencies.iter().map(|l| l.norm()).fold(0.0, f64::max);
        let energy = match (spec.parity(), spec.uniform_parameters()) {
            (Parity::Even, Some((w, _, e))) => Some((w, e)),
            _ => None,
        };
        Ok(Self { form, max_frequency, energy })
    }

    pub fn trio(params: &TrioParams) -> Result<Self> {
        let max_frequency = trio_spectrum(params)?.frequencies.iter().map(|l| l.norm()).fold(0.0, f64::max);
        Ok(Self { form: trio_hamiltonian(params), max_frequency, energy: None })
    }

    pub fn from_form(form: QuadraticForm, max_frequency: f64) -> Self {
        Self { form, max_frequency, energy: None }
    }

    pub fn form(&self) -> &QuadraticForm {
        &self.form
    }

    pub fn oscillators(&self) -> usize {
        self.form.oscillators()
    }

    pub fn max_frequency(&self) -> f64 {
        self.max_frequency
    }

    pub fn tracks_energy(&self) -> bool {
        self.energy.is_some()
    }

    /// Phase point with the given coordinates and velocities.
    pub fn state_from_velocities(&self, coords: &[f64], velocities: &[f64], time: f64) -> Result<PhaseState> {
        let p = self.form.momenta_from_velocities(coords, velocities)?;
        PhaseState::new(coords.to_vec(), p, time)
    }

    pub fn velocities(&self, state: &PhaseState) -> Vec<f64> {
        let n = self.oscillators();
        let mut g = self.form.gradient(&state.to_vec());
        g.drain(..n);
        g
    }

    fn diagnostics(&self, z: &[DoubleDouble]) -> (Option<DoubleDouble>, DoubleDouble) {
        let n = self.oscillators();
        let h = self.form.value(z);
        let e = self.energy.map(|(w, eps)| {
            let g = self.form.gradient(z);
            energy_terms(w, eps, &z[..n], &g[n..])
        });
        (e, h)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub dt: f64,
    pub times: Vec<f64>,
    pub states: Vec<PhaseState>,
    /// Conserved `E` of a uniform even chain, if tracked.
    pub energy: Option<Vec<f64>>,
    pub hamiltonian: Vec<f64>,
    pub max_amplitude: Vec<f64>,
    /// `E(t) − E(0)` and `H(t) − H(0)` formed before rounding to `f64`.
    pub energy_deviation: Option<Vec<f64>>,
    pub hamiltonian_deviation: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn coordinate(&self, i: usize) -> Vec<f64> {
        self.states.iter().map(|s| s.coords[i]).collect()
    }
}

/// RK4 from `initial` over `t_end` recording every step.
pub fn integrate(sys: &HamiltonianSystem, initial: &PhaseState, t_end: f64, dt: f64) -> Result<Trajectory> {
    integrate_strided(sys, initial, t_end, dt, 1)
}

/// RK4 recording every `stride`-th step. The state is accumulated in
/// compensated form so that rounding does not mask the truncation error, and
/// the diagnostics are evaluated in double-double.
pub fn integrate_strided(
    sys: &HamiltonianSystem,
    initial: &PhaseState,
    t_end: f64,
    dt: f64,
    stride: usize,
) -> Result<Trajectory> {
    let n = sys.oscillators();
    check_len(n, initial.coords.len())?;
    check_len(n, initial.momenta.len())?;
    if !(dt > 0.0) || !(t_end > 0.0) || !dt.is_finite() || !t_end.is_finite() {
        return Err(invalid("dt and t_end must be positive"));
    }
    if stride == 0 {
        return Err(invalid("stride must be at least 1"));
    }
    if dt * sys.max_frequency >= STABILITY_LIMIT {
        return Err(Error::StepTooLarge {
            dt,
            max_frequency: sys.max_frequency,
            suggested_dt: 0.5 * STABILITY_LIMIT / sys.max_frequency,
        });
    }
    let steps = (t_end / dt - 1e-9).ceil() as usize;
    let dim = 2 * n;
    let t0 = initial.time;
    let mut z = CompensatedVec::from_slice(&initial.to_vec());
    let (e0, h0) = sys.diagnostics(&z.to_double_double());

    let cap = steps / stride + 1;
    let mut traj = Trajectory {
        dt,
        times: Vec::with_capacity(cap),
        states: Vec::with_capacity(cap),
        energy: e0.map(|_| Vec::with_capacity(cap)),
        hamiltonian: Vec::with_capacity(cap),
        max_amplitude: Vec::with_capacity(cap),
        energy_deviation: e0.map(|_| Vec::with_capacity(cap)),
        hamiltonian_deviation: Vec::with_capacity(cap),
    };
    let record = |k: usize, z: &CompensatedVec, traj: &mut Trajectory| {
        let dd = z.to_double_double();
        let (e, h) = sys.diagnostics(&dd);
        traj.times.push(t0 + k as f64 * dt);
        traj.states.push(PhaseState::from_vec(&z.hi, t0 + k as f64 * dt));
        traj.hamiltonian.push(h.to_f64());
        traj.hamiltonian_deviation.push((h - h0).to_f64());
        if let (Some(e), Some(e0), Some(ev), Some(dv)) =
            (e, e0, traj.energy.as_mut(), traj.energy_deviation.as_mut())
        {
            ev.push(e.to_f64());
            dv.push((e - e0).to_f64());
        }
        traj.max_amplitude.push(z.hi[..n].iter().fold(0.0, |m: f64, x| m.max(x.abs())));
    };
    record(0, &z, &mut traj);

    let (mut k1, mut k2, mut k3, mut k4) = (vec![0.0; dim], vec![0.0; dim], vec![0.0; dim], vec![0.0; dim]);
    let mut tmp = vec![0.0; dim];
    let mut inc = vec![0.0; dim];
    for k in 1..=steps {
        let y = &z.hi;
        sys.form.vector_field(y, &mut k1);
        for i in 0..dim {
            tmp[i] = y[i] + 0.5 * dt * k1[i];
        }
        sys.form.vector_field(&tmp, &mut k2);
        for i in 0..dim {
            tmp[i] = y[i] + 0.5 * dt * k2[i];
        }
        sys.form.vector_field(&tmp, &mut k3);
        for i in 0..dim {
            tmp[i] = y[i] + dt * k3[i];
        }
        sys.form.vector_field(&tmp, &mut k4);
        for i in 0..dim {
            inc[i] = (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]) / 6.0;
        }
        z.add_scaled(dt, &inc);
        if k % stride == 0 || k == steps {
            record(k, &z, &mut traj);
        }
    }
    Ok(traj)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftReport {
    /// `max |E(t) − E(0)| / |E(0)|`, or the absolute drift when `E(0) = 0`.
    pub energy: Option<f64>,
    pub hamiltonian: f64,
}

fn relative(deviation: &[f64], reference: f64) -> f64 {
    let worst = deviation.iter().fold(0.0, |m: f64, d| m.max(d.abs()));
    if reference == 0.0 {
        worst
    } else {
        worst / reference.abs()
    }
}

pub fn conservation_report(traj: &Trajectory) -> DriftReport {
    DriftReport {
        energy: traj
            .energy_deviation
            .as_ref()
            .zip(traj.energy.as_ref())
            .map(|(d, e)| relative(d, e[0])),
        hamiltonian: relative(&traj.hamiltonian_deviation, traj.hamiltonian[0]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::build_uniform_chain;

    #[test]
    fn zero_state_stays_zero() {
        let spec = build_uniform_chain(2, 1.0, 0.1, 0.3).unwrap();
        let sys = HamiltonianSystem::chain(&spec, &HamiltonianRep::Sum).unwrap();
        let t = integrate(&sys, &PhaseState::zeros(4), 1.0, 1e-2).unwrap();
        assert!(t.states.iter().all(|s| s.coords.iter().chain(&s.momenta).all(|v| *v == 0.0)));
        let r = conservation_report(&t);
        assert_eq!(r.hamiltonian, 0.0);
        assert_eq!(r.energy, Some(0.0));
    }

    #[test]
    fn step_limit() {
        let spec = build_uniform_chain(1, 1.0, 0.1, 0.5).unwrap();
        let sys = HamiltonianSystem::chain(&spec, &HamiltonianRep::Sum).unwrap();
        let err = integrate(&sys, &PhaseState::zeros(2), 1.0, 0.5).unwrap_err();
        match err {
            Error::StepTooLarge { suggested_dt, .. } => assert!(suggested_dt * sys.max_frequency() < 0.1),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn uniform_time_grid() {
        let spec = build_uniform_chain(1, 1.0, 0.1, 0.5).unwrap();
        let sys = HamiltonianSystem::chain(&spec, &HamiltonianRep::Sum).unwrap();
        let t = integrate_strided(&sys, &PhaseState::zeros(2), 1.0, 0.01, 10).unwrap();
        assert_eq!(t.len(), 11);
        assert_eq!(t.hamiltonian.len(), t.len());
        assert!(t.times.windows(2).all(|w| ((w[1] - w[0]) - 0.1).abs() < 1e-12));
    }
}
