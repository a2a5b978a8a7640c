use super::ChainSpec;
use crate::compensated::Scalar;
use crate::error::{check_len, Error, Result};

fn uniform(spec: &ChainSpec, what: &'static str) -> Result<(f64, f64, f64)> {
    spec.uniform_parameters().ok_or(Error::Unsupported(what))
}

/// Lagrangian of the uniform even chain. The γ term is
/// `γ(x_{2k−1} ẋ_{2j+2k} − ẋ_{2k−1} x_{2j+2k})`, the orientation obtained by
/// Legendre-transforming the sum Hamiltonian.
pub fn eval_lagrangian(spec: &ChainSpec, coords: &[f64], velocities: &[f64]) -> Result<f64> {
    let (w, g, e) = uniform(spec, "the Lagrangian is defined for uniform even chains only")?;
    let n = spec.oscillators();
    check_len(n, coords.len())?;
    check_len(n, velocities.len())?;
    let (x, v) = (coords, velocities);
    let mut l = 0.0;
    for j in 0..spec.n_pairs() {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        for k in 1..=spec.n_pairs() - j {
            let (a, b) = (2 * k - 2, 2 * j + 2 * k - 1);
            l += sign * (g * (x[a] * v[b] - v[a] * x[b]) - w * w * x[a] * x[b] + v[a] * v[b]);
        }
    }
    Ok(l - 0.5 * e * x.iter().map(|c| c * c).sum::<f64>())
}

/// Conserved energy of the uniform even chain from coordinates and velocities.
/// Only ω and ε enter.
pub fn conserved_energy(spec: &ChainSpec, coords: &[f64], velocities: &[f64]) -> Result<f64> {
    let (w, _, e) = uniform(spec, "the conserved energy is defined for uniform even chains only")?;
    check_len(spec.oscillators(), coords.len())?;
    check_len(spec.oscillators(), velocities.len())?;
    Ok(energy_terms(w, e, coords, velocities))
}

/// The same sum evaluated in any [`Scalar`]; used for high-precision diagnostics.
pub fn energy_terms<S: Scalar>(omega: f64, epsilon: f64, x: &[S], v: &[S]) -> S {
    let n = x.len();
    let w2 = S::from(omega * omega);
    let eps = S::from(epsilon);
    let mut acc = S::zero();
    for j in 0..n.saturating_sub(1) {
        acc = acc + v[j] * v[j + 1] + w2 * x[j] * x[j + 1];
    }
    acc = acc + S::from(0.5 * epsilon) * (x[0] * x[0] + x[n - 1] * x[n - 1]);
    for xj in x.iter().take(n - 1).skip(1) {
        acc = acc + eps * *xj * *xj;
    }
    for j in 0..n.saturating_sub(2) {
        acc = acc + eps * x[j] * x[j + 2];
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::build_uniform_chain;

    #[test]
    fn trivial_values() {
        let s = build_uniform_chain(1, 1.0, 0.0, 0.5).unwrap();
        assert_eq!(eval_lagrangian(&s, &[0.0, 0.0], &[0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(eval_lagrangian(&s, &[1.0, 0.0], &[0.0, 0.0]).unwrap(), -0.25);
        assert_eq!(conserved_energy(&s, &[0.0, 0.0], &[0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(conserved_energy(&s, &[1.0, 1.0], &[0.0, 0.0]).unwrap(), 1.5);
    }

    #[test]
    fn non_uniform_unsupported() {
        let s = ChainSpec::new(
            2,
            crate::chain::Parity::Even,
            alloc::vec![1.0, 2.0],
            alloc::vec![0.1, 0.1],
            alloc::vec![0.3, 0.3],
        )
        .unwrap();
        assert!(matches!(eval_lagrangian(&s, &[0.0; 4], &[0.0; 4]), Err(Error::Unsupported(_))));
        assert!(matches!(conserved_energy(&s, &[0.0; 4], &[0.0; 4]), Err(Error::Unsupported(_))));
    }

    #[test]
    fn energy_ignores_gamma() {
        let x = [0.3, -0.2, 0.5, 0.1];
        let v = [0.4, 0.0, -0.6, 0.2];
        let a = conserved_energy(&build_uniform_chain(2, 1.0, 0.0, 0.4).unwrap(), &x, &v).unwrap();
        let b = conserved_energy(&build_uniform_chain(2, 1.0, 0.3, 0.4).unwrap(), &x, &v).unwrap();
        assert_eq!(a, b);
    }
}
