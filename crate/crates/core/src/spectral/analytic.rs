#[allow(unused_imports)]
use num_traits::Float;

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

use super::{Method, Spectrum, DEFAULT_IMAG_TOL};
use crate::error::{invalid, Result};
use crate::poly;

/// Frequencies of one loss/gain pair with independent loss `μ` and gain `ν`,
/// the roots of `λ⁴ − i(μ−ν)λ³ − (2ω²−μν)λ² + iω²(μ−ν)λ + ω⁴ − ε² = 0`.
pub fn quartic_frequencies_general(mu: f64, nu: f64, omega: f64, epsilon: f64) -> Result<Spectrum> {
    if !(omega > 0.0) {
        return Err(invalid("omega must be positive"));
    }
    let w2 = omega * omega;
    let i = Complex64::i();
    let coeffs = [
        Complex64::new(w2 * w2 - epsilon * epsilon, 0.0),
        i * (w2 * (mu - nu)),
        Complex64::new(-(2.0 * w2 - mu * nu), 0.0),
        -i * (mu - nu),
        Complex64::new(1.0, 0.0),
    ];
    Ok(Spectrum::new(poly::roots(&coeffs)?, DEFAULT_IMAG_TOL, Method::Companion))
}

/// Candidate and genuine `z = sin(π(2k+1)/(4N+2))` values.
#[derive(Debug, Clone, PartialEq)]
pub struct ZRoots {
    pub n: usize,
    /// All `4N + 2` candidates, `k = 0..=4N+1`.
    pub candidates: Vec<f64>,
    /// Distinct candidates with `|z| ≠ 1`, ascending; `2N` values.
    pub genuine: Vec<f64>,
    /// Smallest positive genuine value.
    pub z_min: f64,
    /// Largest genuine value.
    pub z_max: f64,
}

impl ZRoots {
    /// The `N` distinct `z²`, ascending.
    pub fn z_squared(&self) -> Vec<f64> {
        self.genuine.iter().filter(|z| **z > 0.0).map(|z| z * z).collect()
    }
}

pub fn analytic_z_roots(n: usize) -> Result<ZRoots> {
    if n == 0 {
        return Err(invalid("N must be at least 1"));
    }
    let denom = (4 * n + 2) as f64;
    let candidates: Vec<f64> =
        (0..=4 * n + 1).map(|k| (PI * (2 * k + 1) as f64 / denom).sin()).collect();
    let mut genuine: Vec<f64> =
        candidates.iter().copied().filter(|z| (z.abs() - 1.0).abs() > 1e-12).collect();
    genuine.sort_by(f64::total_cmp);
    genuine.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let z_min = genuine.iter().copied().filter(|z| *z > 0.0).fold(f64::INFINITY, f64::min);
    let z_max = genuine[genuine.len() - 1];
    Ok(ZRoots { n, candidates, genuine, z_min, z_max })
}

/// `λ = ±√(ω² − 2γ² ± 2√(γ²(γ²−ω²) + ε²z²))` over the genuine `z²` of a
/// uniform chain of `2N` oscillators, principal square roots throughout.
pub fn analytic_spectrum(n: usize, omega: f64, gamma: f64, epsilon: f64) -> Result<Spectrum> {
    if !(omega > 0.0) || !(gamma >= 0.0) {
        return Err(invalid("omega must be positive and gamma non-negative"));
    }
    let z = analytic_z_roots(n)?;
    let (w2, g2) = (omega * omega, gamma * gamma);
    let mut freqs = Vec::with_capacity(4 * n);
    for z2 in z.z_squared() {
        let disc = Complex64::new(g2 * (g2 - w2) + epsilon * epsilon * z2, 0.0).sqrt();
        for s in [1.0, -1.0] {
            let l = (Complex64::new(w2 - 2.0 * g2, 0.0) + 2.0 * s * disc).sqrt();
            freqs.push(l);
            freqs.push(-l);
        }
    }
    Ok(Spectrum::new(freqs, DEFAULT_IMAG_TOL, Method::Analytic))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z_roots_small_n() {
        let z1 = analytic_z_roots(1).unwrap();
        assert_eq!(z1.candidates.len(), 6);
        assert_eq!(z1.genuine.len(), 2);
        assert!((z1.genuine[1] - 0.5).abs() < 1e-15 && (z1.genuine[0] + 0.5).abs() < 1e-15);
        let z2 = analytic_z_roots(2).unwrap();
        let s5 = 5f64.sqrt();
        let want = [-(1.0 + s5) / 4.0, (1.0 - s5) / 4.0, (s5 - 1.0) / 4.0, (1.0 + s5) / 4.0];
        for (a, b) in z2.genuine.iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
        for n in 1..30 {
            let z = analytic_z_roots(n).unwrap();
            assert_eq!(z.genuine.len(), 2 * n);
            assert_eq!(z.z_squared().len(), n);
        }
    }

    #[test]
    fn decoupled_limit() {
        let s = analytic_spectrum(3, 1.3, 0.0, 0.0).unwrap();
        assert!(s.frequencies.iter().all(|l| (l.re.abs() - 1.3).abs() < 1e-15 && l.im == 0.0));
        let q = quartic_frequencies_general(0.0, 0.0, 1.0, 0.0).unwrap();
        assert!(q.frequencies.iter().all(|l| (l.norm() - 1.0).abs() < 1e-7));
    }
}
