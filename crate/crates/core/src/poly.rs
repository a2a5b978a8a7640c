//! Polynomial roots through companion-matrix eigenvalues.

use alloc::{vec, vec::Vec};

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::linalg::{eigenvalues, ComplexMatrix};

/// Evaluates `c[0] + c[1] z + ... + c[n] z^n` by Horner's rule.
pub fn eval(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Sum of `|c_k| |z|^k`; the natural scale for judging a residual `|p(z)|`.
pub fn eval_magnitude(coeffs: &[Complex64], z: Complex64) -> f64 {
    let r = z.norm();
    coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
}

/// Roots of a polynomial given by ascending coefficients. The leading
/// coefficient must be nonzero.
pub fn roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let Some((&lead, rest)) = coeffs.split_last() else {
        return Err(invalid("polynomial has no coefficients"));
    };
    if lead.norm() == 0.0 {
        return Err(invalid("leading coefficient is zero"));
    }
    let n = rest.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut m = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 1..n {
        m[i * n + i - 1] = Complex64::new(1.0, 0.0);
    }
    for (i, &c) in rest.iter().enumerate() {
        m[i * n + n - 1] = -c / lead;
    }
    eigenvalues(ComplexMatrix::from_complex(n, m)?)
}

/// Roots of a real polynomial given by ascending coefficients.
pub fn real_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let c: Vec<Complex64> = coeffs.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    roots(&c)
}
