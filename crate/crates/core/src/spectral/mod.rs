//! Classical frequencies of loss/gain oscillator networks.
//!
//! Solutions are sought as `x ∝ e^{iλt}`, so a mode is stable exactly when its
//! `λ` is real.

#[allow(unused_imports)]
use num_traits::Float;

mod analytic;
mod charpoly;
mod qep;

pub use analytic::{analytic_spectrum, analytic_z_roots, quartic_frequencies_general, ZRoots};
pub use charpoly::{
    charpoly_closed_form, charpoly_gamma_sum, charpoly_recursive, charpoly_value_recursive,
    charpoly_value_recursive_dd,
    chi_of_lambda, CharPoly, MAX_EXACT_DEGREE,
};
pub use qep::{chain_determinant, determinant_scale, pencil_eigenvalues, qep_spectrum};

use alloc::vec::Vec;
use num_complex::Complex64;

/// Default relative tolerance of the reality test.
pub const DEFAULT_IMAG_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Unbroken,
    Broken,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Unbroken => "unbroken",
            Phase::Broken => "broken",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Analytic,
    Qep,
    Cubic,
    Companion,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::Qep => "qep",
            Method::Cubic => "cubic",
            Method::Companion => "companion",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub frequencies: Vec<Complex64>,
    pub phase: Phase,
    pub imag_tolerance: f64,
    pub method: Method,
}

impl Spectrum {
    pub fn new(frequencies: Vec<Complex64>, imag_tolerance: f64, method: Method) -> Self {
        let phase = classify_frequencies(&frequencies, imag_tolerance);
        Self { frequencies, phase, imag_tolerance, method }
    }

    /// Largest `|Im λ|`.
    pub fn max_imag(&self) -> f64 {
        max_imag(&self.frequencies)
    }

    /// Largest `|Im λ| / max(1, |λ|)`, the quantity compared against the tolerance.
    pub fn max_relative_imag(&self) -> f64 {
        max_relative_imag(&self.frequencies)
    }

    /// Frequencies sorted by real then imaginary part, for stable output.
    pub fn sorted(&self) -> Vec<Complex64> {
        let mut v = self.frequencies.clone();
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }
}

pub fn max_imag(freqs: &[Complex64]) -> f64 {
    freqs.iter().map(|l| l.im.abs()).fold(0.0, f64::max)
}

pub fn max_relative_imag(freqs: &[Complex64]) -> f64 {
    freqs.iter().map(|l| l.im.abs() / l.norm().max(1.0)).fold(0.0, f64::max)
}

fn classify_frequencies(freqs: &[Complex64], tol: f64) -> Phase {
    if max_relative_imag(freqs) <= tol {
        Phase::Unbroken
    } else {
        Phase::Broken
    }
}

/// Unbroken iff every `|Im λ| ≤ tol · max(1, |λ|)`.
pub fn classify(spectrum: &Spectrum, tol: f64) -> Phase {
    classify_frequencies(&spectrum.frequencies, tol)
}

/// Bottleneck distance between two equally sized multisets under greedy
/// nearest matching.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = alloc::vec![false; b.len()];
    let mut worst = 0.0f64;
    for x in a {
        let mut best = (usize::MAX, f64::INFINITY);
        for (j, y) in b.iter().enumerate() {
            if !used[j] {
                let d = (x - y).norm();
                if d < best.1 {
                    best = (j, d);
                }
            }
        }
        used[best.0] = true;
        worst = worst.max(best.1);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_reality_test() {
        let s = Spectrum::new(
            alloc::vec![Complex64::new(100.0, 5e-8), Complex64::new(0.5, 5e-10)],
            DEFAULT_IMAG_TOL,
            Method::Qep,
        );
        assert_eq!(s.phase, Phase::Unbroken);
        assert_eq!(classify(&s, 1e-12), Phase::Broken);
        assert_eq!(s.max_imag(), 5e-8);
    }

    #[test]
    fn multiset_distance_is_order_free() {
        let a = [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 2.0)];
        let b = [Complex64::new(-1.0, 2.0), Complex64::new(1.0, 1e-3)];
        assert!((multiset_distance(&a, &b) - 1e-3).abs() < 1e-15);
        assert!(multiset_distance(&a, &b[..1]).is_infinite());
    }
}
