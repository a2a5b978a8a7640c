//! Homogeneous quadratic Hamiltonians on phase space.
//!
//! Phase-space vectors are laid out as `z = (x_0..x_{n-1}, p_0..p_{n-1})` and a
//! form stores `H(z) = ½ zᵀ S z` as the nonzero entries of the symmetric `S`.

use alloc::vec;
use alloc::vec::Vec;

use crate::compensated::Scalar;
use crate::error::{check_len, Result};

/// A phase-space variable of an `n`-oscillator system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X(usize),
    P(usize),
}

/// Sparse linear combination of phase-space variables.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LinearForm {
    terms: Vec<(Var, f64)>,
}

impl LinearForm {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn var(v: Var) -> Self {
        Self { terms: vec![(v, 1.0)] }
    }

    pub fn plus(mut self, v: Var, coeff: f64) -> Self {
        self.terms.push((v, coeff));
        self
    }

    pub fn terms(&self) -> &[(Var, f64)] {
        &self.terms
    }
}

/// Builder that accumulates monomials into a dense symmetric matrix.
#[derive(Debug, Clone)]
pub struct FormBuilder {
    n: usize,
    dense: Vec<f64>,
}

impl FormBuilder {
    pub fn new(n: usize) -> Self {
        Self { n, dense: vec![0.0; 4 * n * n] }
    }

    fn slot(&self, v: Var) -> usize {
        match v {
            Var::X(i) => {
                debug_assert!(i < self.n);
                i
            }
            Var::P(i) => {
                debug_assert!(i < self.n);
                self.n + i
            }
        }
    }

    /// Adds `coeff · a · b`.
    pub fn monomial(&mut self, a: Var, b: Var, coeff: f64) -> &mut Self {
        let (i, j) = (self.slot(a), self.slot(b));
        let dim = 2 * self.n;
        if i == j {
            self.dense[i * dim + i] += 2.0 * coeff;
        } else {
            self.dense[i * dim + j] += coeff;
            self.dense[j * dim + i] += coeff;
        }
        self
    }

    /// Adds `coeff · l · r` for two linear forms.
    pub fn product(&mut self, l: &LinearForm, r: &LinearForm, coeff: f64) -> &mut Self {
        for &(a, ca) in l.terms() {
            for &(b, cb) in r.terms() {
                self.monomial(a, b, coeff * ca * cb);
            }
        }
        self
    }

    pub fn build(self) -> QuadraticForm {
        QuadraticForm::from_dense(self.n, &self.dense)
    }
}

/// `H(z) = ½ zᵀ S z` with `S` stored sparsely.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticForm {
    n: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl QuadraticForm {
    /// `dense` is the row-major `2n × 2n` symmetric matrix `S`.
    pub fn from_dense(n: usize, dense: &[f64]) -> Self {
        let dim = 2 * n;
        assert_eq!(dense.len(), dim * dim);
        let entries = (0..dim)
            .flat_map(|i| (0..dim).map(move |j| (i, j)))
            .filter_map(|(i, j)| {
                let s = dense[i * dim + j];
                (s != 0.0).then_some((i, j, s))
            })
            .collect();
        Self { n, entries }
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let dim = 2 * self.n;
        let mut out = vec![0.0; dim * dim];
        for &(i, j, s) in &self.entries {
            out[i * dim + j] = s;
        }
        out
    }

    /// Number of oscillators.
    pub fn oscillators(&self) -> usize {
        self.n
    }

    pub fn nonzeros(&self) -> usize {
        self.entries.len()
    }

    /// Gradient `S z`.
    pub fn gradient<S: Scalar>(&self, z: &[S]) -> Vec<S> {
        let mut g = vec![S::zero(); 2 * self.n];
        for &(i, j, s) in &self.entries {
            g[i] = g[i] + S::from(s) * z[j];
        }
        g
    }

    pub fn value<S: Scalar>(&self, z: &[S]) -> S {
        let mut acc = S::zero();
        for &(i, j, s) in &self.entries {
            acc = acc + S::from(s) * z[i] * z[j];
        }
        acc * S::from(0.5)
    }

    /// Hamilton's equations: `(∂H/∂p, −∂H/∂x)` written into `out`.
    pub fn vector_field(&self, z: &[f64], out: &mut [f64]) {
        let n = self.n;
        out.iter_mut().for_each(|o| *o = 0.0);
        for &(i, j, s) in &self.entries {
            let t = s * z[j];
            if i < n {
                out[n + i] -= t;
            } else {
                out[i - n] += t;
            }
        }
    }

    /// Canonical momentum shift `p → p + A x` for symmetric `A` (row-major, n × n).
    /// The returned form is `H(x, p + A x)`.
    pub fn shift_momenta(&self, a: &[f64]) -> Result<Self> {
        let n = self.n;
        check_len(n * n, a.len())?;
        let dim = 2 * n;
        // T = [[I, 0], [A, I]]; S' = Tᵀ S T
        let s = self.to_dense();
        let mut t = vec![0.0; dim * dim];
        for i in 0..dim {
            t[i * dim + i] = 1.0;
        }
        for r in 0..n {
            for c in 0..n {
                t[(n + r) * dim + c] = a[r * n + c];
            }
        }
        let st = matmul(&s, &t, dim);
        let mut out = vec![0.0; dim * dim];
        for i in 0..dim {
            for k in 0..dim {
                let tki = t[k * dim + i];
                if tki == 0.0 {
                    continue;
                }
                for j in 0..dim {
                    out[i * dim + j] += tki * st[k * dim + j];
                }
            }
        }
        Ok(Self::from_dense(n, &out))
    }

    fn block(&self, rows_p: bool, cols_p: bool) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for &(i, j, s) in &self.entries {
            if (i >= n) == rows_p && (j >= n) == cols_p {
                out[(i % n) * n + (j % n)] = s;
            }
        }
        out
    }

    /// Momenta reproducing the given velocities at the given coordinates,
    /// from `ẋ = S_px x + S_pp p`.
    pub fn momenta_from_velocities(&self, coords: &[f64], velocities: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        check_len(n, coords.len())?;
        check_len(n, velocities.len())?;
        let spx = self.block(true, false);
        let mut spp = self.block(true, true);
        let mut rhs: Vec<f64> = (0..n)
            .map(|i| velocities[i] - (0..n).map(|j| spx[i * n + j] * coords[j]).sum::<f64>())
            .collect();
        crate::linalg::solve_dense(&mut spp, &mut rhs)?;
        Ok(rhs)
    }

    /// Second-order form of Hamilton's equations: `ẍ` as a function of `(x, ẋ)`.
    pub fn accelerations(&self, coords: &[f64], velocities: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        let p = self.momenta_from_velocities(coords, velocities)?;
        let mut z = coords.to_vec();
        z.extend_from_slice(&p);
        let mut f = vec![0.0; 2 * n];
        self.vector_field(&z, &mut f);
        let pdot = &f[n..];
        // ẍ = S_px ẋ + S_pp ṗ
        let mut acc = vec![0.0; n];
        for &(i, j, s) in &self.entries {
            if i >= n {
                if j < n {
                    acc[i - n] += s * velocities[j];
                } else {
                    acc[i - n] += s * pdot[j - n];
                }
            }
        }
        Ok(acc)
    }
}

fn matmul(a: &[f64], b: &[f64], dim: usize) -> Vec<f64> {
    let mut out = vec![0.0; dim * dim];
    for i in 0..dim {
        for k in 0..dim {
            let aik = a[i * dim + k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..dim {
                out[i * dim + j] += aik * b[k * dim + j];
            }
        }
    }
    out
}
