use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use super::{Method, Spectrum, DEFAULT_IMAG_TOL};
use crate::chain::ChainSpec;
use crate::error::{check_len, Result};
use crate::linalg::real_eigenvalues;

/// Frequencies of `ẍ + Cẋ + Kx = 0` with `x ∝ e^{iλt}`: with `s = iλ` the pencil
/// `s²I + sC + K` is real, and its first companion form `[[0, I], [−K, −C]]`
/// is solved by real QR.
pub fn pencil_eigenvalues(n: usize, damping: &[f64], stiffness: &[f64]) -> Result<Vec<Complex64>> {
    check_len(n * n, damping.len())?;
    check_len(n * n, stiffness.len())?;
    let dim = 2 * n;
    let mut a = vec![0.0; dim * dim];
    for i in 0..n {
        a[i * dim + n + i] = 1.0;
        for j in 0..n {
            a[(n + i) * dim + j] = -stiffness[i * n + j];
            a[(n + i) * dim + n + j] = -damping[i * n + j];
        }
    }
    let s = real_eigenvalues(dim, a)?;
    Ok(s.into_iter().map(|s| Complex64::new(s.im, -s.re)).collect())
}

fn diag(v: &[f64]) -> Vec<f64> {
    let n = v.len();
    let mut out = vec![0.0; n * n];
    for (i, x) in v.iter().enumerate() {
        out[i * n + i] = *x;
    }
    out
}

/// All `2 × oscillators` frequencies of an arbitrary chain.
pub fn qep_spectrum(spec: &ChainSpec) -> Result<Spectrum> {
    let n = spec.oscillators();
    let freqs = pencil_eigenvalues(n, &diag(&spec.dampings()), &spec.stiffness())?;
    Ok(Spectrum::new(freqs, DEFAULT_IMAG_TOL, Method::Qep))
}

/// `det M(λ)` for the tridiagonal `M(λ) = λ²I − iλC − K` by the continuant recursion.
pub fn chain_determinant(spec: &ChainSpec, lambda: Complex64) -> Complex64 {
    let n = spec.oscillators();
    let l2 = lambda * lambda;
    let i = Complex64::i();
    let d = |j: usize| l2 - spec.omega(j) * spec.omega(j) - i * lambda * spec.damping(j);
    let (mut prev, mut cur) = (Complex64::new(1.0, 0.0), d(0));
    for j in 1..n {
        let e = spec.bond(j - 1);
        let next = d(j) * cur - e * e * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Product of row magnitudes of `M(λ)`, the natural size of its determinant.
pub fn determinant_scale(spec: &ChainSpec, lambda: Complex64) -> f64 {
    let n = spec.oscillators();
    let l = lambda.norm();
    (0..n)
        .map(|j| {
            let mut r = l * l + spec.omega(j) * spec.omega(j) + l * spec.damping(j).abs();
            if j > 0 {
                r += spec.bond(j - 1).abs();
            }
            if j + 1 < n {
                r += spec.bond(j).abs();
            }
            r
        })
        .product()
}
