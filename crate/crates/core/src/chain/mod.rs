//! Oscillator-network descriptions for loss/gain chains.
//!
//! Oscillators are indexed from 0 internally. In an even chain of `2N`
//! oscillators the first `N` carry pair parameters `1..=N` left to right and
//! the right half mirrors them, so oscillator `i` and `2N-1-i` share `ω`, `γ`
//! with opposite loss/gain. Odd chains insert a neutral oscillator at `N`.

mod hamiltonian;
mod lagrangian;
mod symmetry;

pub use hamiltonian::{
    equations_of_motion, eval_hamiltonian, general_sum_form, GaugeConstants, Hamiltonian,
    HamiltonianRep,
};
pub use lagrangian::{conserved_energy, energy_terms, eval_lagrangian};
pub use symmetry::{apply_parity, apply_time_reversal};

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{check_len, invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    /// `2N` oscillators.
    Even,
    /// `2N + 1` oscillators with a neutral center.
    Odd,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainSpec {
    n_pairs: usize,
    parity: Parity,
    omegas: Vec<f64>,
    gammas: Vec<f64>,
    epsilons: Vec<f64>,
    uniform: bool,
}

impl ChainSpec {
    /// `omegas` has `N` entries for even chains and `N + 1` for odd chains (the
    /// last one being the center frequency); `gammas` and `epsilons` have `N`.
    pub fn new(
        n_pairs: usize,
        parity: Parity,
        omegas: Vec<f64>,
        gammas: Vec<f64>,
        epsilons: Vec<f64>,
    ) -> Result<Self> {
        if n_pairs == 0 {
            return Err(invalid("n_pairs must be at least 1"));
        }
        let n_omega = match parity {
            Parity::Even => n_pairs,
            Parity::Odd => n_pairs + 1,
        };
        check_len(n_omega, omegas.len())?;
        check_len(n_pairs, gammas.len())?;
        check_len(n_pairs, epsilons.len())?;
        if let Some(w) = omegas.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
            return Err(invalid(format!("natural frequencies must be positive, got {w}")));
        }
        if let Some(g) = gammas.iter().find(|g| !(**g >= 0.0) || !g.is_finite()) {
            return Err(invalid(format!("loss/gain parameters must be non-negative, got {g}")));
        }
        if let Some(e) = epsilons.iter().find(|e| !e.is_finite()) {
            return Err(invalid(format!("couplings must be finite, got {e}")));
        }
        let same = |v: &[f64]| v.iter().all(|a| *a == v[0]);
        let uniform = parity == Parity::Even && same(&omegas) && same(&gammas) && same(&epsilons);
        Ok(Self { n_pairs, parity, omegas, gammas, epsilons, uniform })
    }

    pub fn n_pairs(&self) -> usize {
        self.n_pairs
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn epsilons(&self) -> &[f64] {
        &self.epsilons
    }

    /// True for even chains with identical ω, γ and ε everywhere.
    pub fn is_uniform(&self) -> bool {
        self.uniform
    }

    /// `(ω, γ, ε)` of a uniform chain.
    pub fn uniform_parameters(&self) -> Option<(f64, f64, f64)> {
        self.uniform.then(|| (self.omegas[0], self.gammas[0], self.epsilons[0]))
    }

    pub fn oscillators(&self) -> usize {
        match self.parity {
            Parity::Even => 2 * self.n_pairs,
            Parity::Odd => 2 * self.n_pairs + 1,
        }
    }

    /// Pair index (0-based) of oscillator `i`, `None` for the odd-chain center.
    pub fn pair_of(&self, i: usize) -> Option<usize> {
        let n = self.n_pairs;
        match self.parity {
            Parity::Even => Some(if i < n { i } else { 2 * n - 1 - i }),
            Parity::Odd if i == n => None,
            Parity::Odd => Some(if i < n { i } else { 2 * n - i }),
        }
    }

    pub fn omega(&self, i: usize) -> f64 {
        match self.pair_of(i) {
            Some(k) => self.omegas[k],
            None => self.omegas[self.n_pairs],
        }
    }

    /// Coefficient `c_i` of `ẋ_i` in `ẍ_i + c_i ẋ_i + ω_i² x_i = …`; positive means loss.
    pub fn damping(&self, i: usize) -> f64 {
        let Some(k) = self.pair_of(i) else { return 0.0 };
        let left = i < self.n_pairs;
        // pair k+1 is lossy on the left exactly when k+1 is odd
        let lossy = (k % 2 == 0) == left;
        let g = 2.0 * self.gammas[k];
        if lossy { g } else { -g }
    }

    /// Coupling between oscillators `i` and `i + 1`.
    pub fn bond(&self, i: usize) -> f64 {
        let n = self.n_pairs;
        let k = match self.parity {
            Parity::Even => (i + 1).min(2 * n - i - 1),
            Parity::Odd => (i + 1).min(2 * n - i),
        };
        self.epsilons[k - 1]
    }

    /// Dense `K` of the pencil `λ²I + λC + K` governing `ẍ + Cẋ + Kx = 0`.
    pub fn stiffness(&self) -> Vec<f64> {
        let n = self.oscillators();
        let mut k = vec![0.0; n * n];
        for i in 0..n {
            k[i * n + i] = self.omega(i) * self.omega(i);
            if i + 1 < n {
                k[i * n + i + 1] = self.bond(i);
                k[(i + 1) * n + i] = self.bond(i);
            }
        }
        k
    }

    pub fn dampings(&self) -> Vec<f64> {
        (0..self.oscillators()).map(|i| self.damping(i)).collect()
    }

    /// Accelerations read directly off the second-order equations of motion.
    pub fn second_order_rhs(&self, coords: &[f64], velocities: &[f64]) -> Result<Vec<f64>> {
        let n = self.oscillators();
        check_len(n, coords.len())?;
        check_len(n, velocities.len())?;
        Ok((0..n)
            .map(|i| {
                let w = self.omega(i);
                let mut a = -w * w * coords[i] - self.damping(i) * velocities[i];
                if i > 0 {
                    a -= self.bond(i - 1) * coords[i - 1];
                }
                if i + 1 < n {
                    a -= self.bond(i) * coords[i + 1];
                }
                a
            })
            .collect())
    }
}

/// Even chain with identical parameters on every oscillator.
pub fn build_uniform_chain(n: usize, omega: f64, gamma: f64, epsilon: f64) -> Result<ChainSpec> {
    ChainSpec::new(n, Parity::Even, vec![omega; n], vec![gamma; n], vec![epsilon; n])
}

/// A point in phase space.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseState {
    pub coords: Vec<f64>,
    pub momenta: Vec<f64>,
    pub time: f64,
}

impl PhaseState {
    pub fn new(coords: Vec<f64>, momenta: Vec<f64>, time: f64) -> Result<Self> {
        check_len(coords.len(), momenta.len())?;
        Ok(Self { coords, momenta, time })
    }

    pub fn zeros(n: usize) -> Self {
        Self { coords: vec![0.0; n], momenta: vec![0.0; n], time: 0.0 }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// `(x, p)` concatenated.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut z = self.coords.clone();
        z.extend_from_slice(&self.momenta);
        z
    }

    pub fn from_vec(z: &[f64], time: f64) -> Self {
        let n = z.len() / 2;
        Self { coords: z[..n].to_vec(), momenta: z[n..].to_vec(), time }
    }
}
