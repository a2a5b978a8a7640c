use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{ChainSpec, Parity, PhaseState};
use crate::compensated::Scalar;
use crate::error::{check_len, invalid, Error, Result};
use crate::quadratic::{FormBuilder, LinearForm, QuadraticForm, Var};

/// Gauge constants `a_mn` keyed by 0-based `(m, n)` with `m < n`.
pub type GaugeConstants = BTreeMap<(usize, usize), f64>;

#[derive(Debug, Clone, PartialEq, Default)]
pub enum HamiltonianRep {
    /// Nearest-neighbour momentum products for uniform even chains, mirrored
    /// pairs `p_k p_{2N+1-k}` for everything else.
    #[default]
    Sum,
    /// Factored momenta; uniform even chains only.
    Product,
    /// Sum representation after `p_m += a_mn x_n`, `p_n += a_mn x_m`.
    Gauge(GaugeConstants),
}

/// A chain Hamiltonian bound to its spec, ready for repeated evaluation.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    form: QuadraticForm,
}

impl Hamiltonian {
    pub fn new(spec: &ChainSpec, rep: &HamiltonianRep) -> Result<Self> {
        let form = match rep {
            HamiltonianRep::Sum => sum_form(spec),
            HamiltonianRep::Product => product_form(spec)?,
            HamiltonianRep::Gauge(a) => gauge_form(spec, a)?,
        };
        Ok(Self { form })
    }

    pub fn from_form(form: QuadraticForm) -> Self {
        Self { form }
    }

    pub fn form(&self) -> &QuadraticForm {
        &self.form
    }

    pub fn oscillators(&self) -> usize {
        self.form.oscillators()
    }

    pub fn value(&self, state: &PhaseState) -> Result<f64> {
        self.check(state)?;
        Ok(self.form.value(&state.to_vec()))
    }

    /// `(ẋ, ṗ)` packed as a state whose `time` component is `dt/dt = 1`.
    pub fn derivative(&self, state: &PhaseState) -> Result<PhaseState> {
        self.check(state)?;
        let z = state.to_vec();
        let mut f = vec![0.0; z.len()];
        self.form.vector_field(&z, &mut f);
        Ok(PhaseState::from_vec(&f, 1.0))
    }

    /// `ẋ = ∂H/∂p` at an arbitrary-precision phase point.
    pub fn velocities<S: Scalar>(&self, z: &[S]) -> Vec<S> {
        let n = self.oscillators();
        let mut g = self.form.gradient(z);
        g.drain(..n);
        g
    }

    pub fn momenta_from_velocities(&self, coords: &[f64], velocities: &[f64]) -> Result<Vec<f64>> {
        self.form.momenta_from_velocities(coords, velocities)
    }

    pub fn accelerations(&self, coords: &[f64], velocities: &[f64]) -> Result<Vec<f64>> {
        self.form.accelerations(coords, velocities)
    }

    fn check(&self, state: &PhaseState) -> Result<()> {
        check_len(self.oscillators(), state.coords.len())?;
        check_len(self.oscillators(), state.momenta.len())
    }
}

pub fn eval_hamiltonian(spec: &ChainSpec, rep: &HamiltonianRep, state: &PhaseState) -> Result<f64> {
    Hamiltonian::new(spec, rep)?.value(state)
}

pub fn equations_of_motion(
    spec: &ChainSpec,
    rep: &HamiltonianRep,
    state: &PhaseState,
) -> Result<PhaseState> {
    Hamiltonian::new(spec, rep)?.derivative(state)
}

fn sum_form(spec: &ChainSpec) -> QuadraticForm {
    match spec.uniform_parameters() {
        Some((w, g, e)) => uniform_sum_form(spec.n_pairs(), w, g, e),
        None => general_sum_form(spec),
    }
}

fn uniform_sum_form(n_pairs: usize, w: f64, g: f64, e: f64) -> QuadraticForm {
    let n = 2 * n_pairs;
    let mut b = FormBuilder::new(n);
    for i in 0..n {
        if i + 1 < n {
            b.monomial(Var::P(i), Var::P(i + 1), 1.0);
        }
        b.monomial(Var::X(i), Var::X(i), 0.5 * e);
        let sign = if i % 2 == 0 { -1.0 } else { 1.0 };
        b.monomial(Var::X(i), Var::P(i), sign * g);
    }
    add_skip_bracket(&mut b, n_pairs, w * w - g * g);
    b.build()
}

/// `c · Σ_j (−1)^j Σ_k x_{2k−1} x_{2j+2k}` in 1-based indices: products of
/// odd and even sites with alternating sign as the gap grows by two.
fn add_skip_bracket(b: &mut FormBuilder, n_pairs: usize, c: f64) {
    for j in 0..n_pairs {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        for k in 1..=n_pairs - j {
            b.monomial(Var::X(2 * k - 2), Var::X(2 * j + 2 * k - 1), sign * c);
        }
    }
}

/// Mirrored-pair sum representation valid for arbitrary profiles and both parities.
pub fn general_sum_form(spec: &ChainSpec) -> QuadraticForm {
    let nn = spec.n_pairs();
    let osc = spec.oscillators();
    let mut b = FormBuilder::new(osc);
    let mirror = |i: usize| osc - 1 - i;
    for k in 0..nn {
        // 1-based pair index k+1 gives (−1)^(k+1)
        let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
        let g = spec.gammas()[k];
        let w = spec.omegas()[k];
        b.monomial(Var::X(k), Var::P(k), sign * g);
        b.monomial(Var::X(mirror(k)), Var::P(mirror(k)), -sign * g);
        b.monomial(Var::P(k), Var::P(mirror(k)), 1.0);
        b.monomial(Var::X(k), Var::X(mirror(k)), w * w - g * g);
    }
    let eps = spec.epsilons();
    match spec.parity() {
        Parity::Even => {
            for k in 0..nn.saturating_sub(1) {
                b.monomial(Var::X(k), Var::X(mirror(k + 1)), eps[k]);
                b.monomial(Var::X(k + 1), Var::X(mirror(k)), eps[k]);
            }
            b.monomial(Var::X(nn - 1), Var::X(nn - 1), 0.5 * eps[nn - 1]);
            b.monomial(Var::X(nn), Var::X(nn), 0.5 * eps[nn - 1]);
        }
        Parity::Odd => {
            for k in 0..nn {
                b.monomial(Var::X(k), Var::X(mirror(k + 1)), eps[k]);
                b.monomial(Var::X(k + 1), Var::X(mirror(k)), eps[k]);
            }
            let wc = spec.omegas()[nn];
            b.monomial(Var::X(nn), Var::X(nn), 0.5 * wc * wc);
            b.monomial(Var::P(nn), Var::P(nn), 0.5);
        }
    }
    b.build()
}

fn product_form(spec: &ChainSpec) -> Result<QuadraticForm> {
    let (w, g, e) = spec
        .uniform_parameters()
        .ok_or(Error::Unsupported("product representation requires a uniform even chain"))?;
    let n = spec.oscillators();
    // 0-based i even ↔ 1-based odd site: Π = p + γ(x_{i+1} − x_{i+3} + …);
    // otherwise Π = p − γ(x_{i−1} − x_{i−3} + …)
    let factors: Vec<LinearForm> = (0..n)
        .map(|i| {
            let mut f = LinearForm::var(Var::P(i));
            if i % 2 == 0 {
                let mut sign = g;
                let mut j = i + 1;
                while j < n {
                    f = f.plus(Var::X(j), sign);
                    sign = -sign;
                    j += 2;
                }
            } else {
                let mut sign = -g;
                let mut j = i as isize - 1;
                while j >= 0 {
                    f = f.plus(Var::X(j as usize), sign);
                    sign = -sign;
                    j -= 2;
                }
            }
            f
        })
        .collect();
    let mut b = FormBuilder::new(n);
    for pair in factors.windows(2) {
        b.product(&pair[0], &pair[1], 1.0);
    }
    add_skip_bracket(&mut b, spec.n_pairs(), w * w);
    for i in 0..n {
        b.monomial(Var::X(i), Var::X(i), 0.5 * e);
    }
    Ok(b.build())
}

fn gauge_form(spec: &ChainSpec, a: &GaugeConstants) -> Result<QuadraticForm> {
    let n = spec.oscillators();
    let mut shift = vec![0.0; n * n];
    for (&(m, k), &v) in a {
        if m >= k || k >= n {
            return Err(invalid(format!(
                "gauge constant index ({m}, {k}) must satisfy m < n < {n}"
            )));
        }
        shift[m * n + k] = v;
        shift[k * n + m] = v;
    }
    sum_form(spec).shift_momenta(&shift)
}
