#[allow(unused_imports)]
use num_traits::Float;

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use num_complex::Complex64;

use crate::compensated::{DoubleDouble, Scalar};
use crate::error::{invalid, Error, Result};

/// Largest degree whose coefficient table fits in `i128`.
pub const MAX_EXACT_DEGREE: usize = 94;

/// `P_N(χ, ε) = Σ_k c_k χ^k ε^{2(N−k)}` with exact integer `c_k`, stored in
/// ascending powers of `χ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharPoly {
    coeffs: Vec<i128>,
}

impl CharPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficients(&self) -> &[i128] {
        &self.coeffs
    }

    /// Horner evaluation accumulated in double-double, since the alternating
    /// coefficients cancel heavily for `0 < χ < 4ε²`.
    pub fn eval(&self, chi: f64, epsilon: f64) -> f64 {
        let n = self.degree();
        let e2 = DoubleDouble::from(epsilon) * DoubleDouble::from(epsilon);
        let x = DoubleDouble::from(chi);
        let mut acc = DoubleDouble::ZERO;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            acc = acc * x + DoubleDouble::from(c as f64) * dd_pow(e2, n - k);
        }
        acc.to_f64()
    }

    pub fn eval_complex(&self, chi: Complex64, epsilon: f64) -> Complex64 {
        let e2 = epsilon * epsilon;
        let n = self.degree();
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            acc = acc * chi + c as f64 * e2.powi((n - k) as i32);
        }
        acc
    }
}

/// Coefficient table from `P_N = (χ − 2ε²) P_{N−1} − ε⁴ P_{N−2}`, `P_0 = 1`.
pub fn charpoly_recursive(n: usize) -> Result<CharPoly> {
    if n == 0 {
        return Err(invalid("characteristic polynomial degree must be at least 1"));
    }
    let overflow = Error::CoefficientOverflow { degree: n, max_degree: MAX_EXACT_DEGREE };
    let mut prev: Vec<i128> = vec![1];
    let mut cur: Vec<i128> = vec![-1, 1];
    for _ in 2..=n {
        let mut next = vec![0i128; cur.len() + 1];
        for (k, slot) in next.iter_mut().enumerate() {
            let shifted = if k >= 1 { cur[k - 1] } else { 0 };
            let own = cur.get(k).copied().unwrap_or(0);
            let back = prev.get(k).copied().unwrap_or(0);
            *slot = own
                .checked_mul(2)
                .and_then(|d| shifted.checked_sub(d))
                .and_then(|v| v.checked_sub(back))
                .ok_or(overflow.clone())?;
        }
        prev = core::mem::replace(&mut cur, next);
    }
    Ok(CharPoly { coeffs: cur })
}

/// Three-term recursion evaluated directly in floating point.
pub fn charpoly_value_recursive(n: usize, chi: f64, epsilon: f64) -> f64 {
    recursive_value(n, chi, epsilon * epsilon)
}

/// The recursion carried out in double-double; a high-accuracy reference.
pub fn charpoly_value_recursive_dd(n: usize, chi: f64, epsilon: f64) -> f64 {
    let e = DoubleDouble::from(epsilon);
    recursive_value(n, DoubleDouble::from(chi), e * e).to_f64()
}

fn recursive_value<S: Scalar>(n: usize, chi: S, e2: S) -> S {
    let mut prev = S::from(1.0);
    if n == 0 {
        return prev;
    }
    let mut cur = chi - e2;
    let two_e2 = e2 + e2;
    let e4 = e2 * e2;
    for _ in 1..n {
        let next = (chi - two_e2) * cur - e4 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

fn dd_pow(x: DoubleDouble, k: usize) -> DoubleDouble {
    (0..k).fold(DoubleDouble::from(1.0), |acc, _| acc * x)
}

/// `(2N−k)! / (2^m m! k! (2m−1)!!)` with `m = N − k`, exact while the factorials
/// fit in `u128`.
fn gamma_sum_coefficient(n: usize, k: usize) -> f64 {
    let m = n - k;
    let fact = |j: usize| (1..=j as u128).try_fold(1u128, |a, f| a.checked_mul(f));
    let dfact = |j: usize| (1..=j as u128).rev().step_by(2).try_fold(1u128, |a, f| a.checked_mul(f));
    let exact = (|| {
        let num = fact(2 * n - k)?;
        let den = fact(m)?
            .checked_mul(fact(k)?)?
            .checked_mul(dfact((2 * m).saturating_sub(1))?)?
            .checked_mul(1u128.checked_shl(m as u32)?)?;
        Some(num / den)
    })();
    if let Some(c) = exact {
        return c as f64;
    }
    let mut c = 1.0;
    for f in 1..=(2 * n - k) {
        c *= f as f64;
    }
    for f in 1..=m {
        c /= 2.0 * f as f64;
    }
    for f in 1..=k {
        c /= f as f64;
    }
    let mut f = 2 * m as i64 - 1;
    while f > 1 {
        c /= f as f64;
        f -= 2;
    }
    c
}

/// Binomial-type sum with the half-integer Gamma function, written through
/// `Γ(m + ½) = √π (2m−1)!! / 2^m` so that `√π 4^{k−N}/Γ(N−k+½)` becomes
/// `2^{−m}/(2m−1)!!`. Terms are accumulated in double-double.
pub fn charpoly_gamma_sum(n: usize, chi: f64, epsilon: f64) -> f64 {
    let e2 = DoubleDouble::from(epsilon) * DoubleDouble::from(epsilon);
    let x = DoubleDouble::from(chi);
    let mut total = DoubleDouble::ZERO;
    for k in 0..=n {
        let c = DoubleDouble::from(gamma_sum_coefficient(n, k));
        let term = c * dd_pow(x, n - k) * dd_pow(e2, k);
        total = if k % 2 == 0 { total + term } else { total - term };
    }
    total.to_f64()
}

/// Closed form in `y = −χ/(4ε²)`, `Δ = √(y(y+1))`; falls back to the recursion
/// when `ε = 0` or `Δ` is too small for the division to be accurate.
pub fn charpoly_closed_form(n: usize, chi: f64, epsilon: f64) -> f64 {
    let e2 = epsilon * epsilon;
    if e2 == 0.0 {
        return chi.powi(n as i32);
    }
    let y = -chi / (4.0 * e2);
    let yc = Complex64::new(y, 0.0);
    let delta = (yc * (yc + 1.0)).sqrt();
    if delta.norm() < 1e-4 * (1.0 + y.abs()) {
        return charpoly_value_recursive(n, chi, epsilon);
    }
    let minus = (1.0 + 2.0 * yc - 2.0 * delta).powu(n as u32) * (delta - yc);
    let plus = (1.0 + 2.0 * yc + 2.0 * delta).powu(n as u32) * (delta + yc);
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    (e2.powi(n as i32) * sign * (minus + plus) / (2.0 * delta)).re
}

/// `χ(λ) = (λ² − ω²)² + 4λ²γ²`.
pub fn chi_of_lambda(lambda: Complex64, omega: f64, gamma: f64) -> Complex64 {
    let l2 = lambda * lambda;
    let a = l2 - omega * omega;
    a * a + 4.0 * gamma * gamma * l2
}

impl fmt::Display for CharPoly {
    /// `-e^6 + 6 x e^4 - 5 x^2 e^2 + x^3`, ascending in `x = χ`, `e = ε`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sep = match (first, c < 0) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            f.write_str(sep)?;
            first = false;
            let mag = c.unsigned_abs();
            let e_pow = 2 * (n - k);
            let mut parts: Vec<alloc::string::String> = Vec::new();
            if mag != 1 || (k == 0 && e_pow == 0) {
                parts.push(alloc::format!("{mag}"));
            }
            match k {
                0 => {}
                1 => parts.push("x".into()),
                _ => parts.push(alloc::format!("x^{k}")),
            }
            if e_pow > 0 {
                parts.push(alloc::format!("e^{e_pow}"));
            }
            f.write_str(&parts.join(" "))?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}
