//! Eigenvalues of a dense complex matrix.
//!
//! The matrix is balanced (diagonal similarity by powers of two), reduced to
//! upper Hessenberg form with Householder reflectors, and driven to upper
//! triangular form by single-shift QR sweeps built from Givens rotations.
//! Only eigenvalues are computed, so each sweep touches just the active
//! unreduced block.

use alloc::{format, vec, vec::Vec};
use core::ops::{Index, IndexMut};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

/// Square row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        ComplexMatrix { n, data: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    /// Builds a complex matrix from real row-major entries.
    pub fn from_real(n: usize, entries: &[f64]) -> Result<Self> {
        crate::error::check_len(n * n, entries.len())?;
        Ok(ComplexMatrix { n, data: entries.iter().map(|&v| Complex64::new(v, 0.0)).collect() })
    }

    pub fn from_complex(n: usize, entries: Vec<Complex64>) -> Result<Self> {
        crate::error::check_len(n * n, entries.len())?;
        Ok(ComplexMatrix { n, data: entries })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.n + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.n + c]
    }
}

#[inline]
fn abs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// All eigenvalues of `a`, in no particular order.
pub fn eigenvalues(mut a: ComplexMatrix) -> Result<Vec<Complex64>> {
    if !a.is_finite() {
        return Err(Error::NumericalFailure {
            method: "complex QR",
            detail: "matrix has non-finite entries".into(),
        });
    }
    match a.n {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![a[(0, 0)]]),
        _ => {}
    }
    balance(&mut a);
    reduce_to_hessenberg(&mut a);
    hessenberg_qr(&mut a)
}

fn balance(a: &mut ComplexMatrix) {
    const RADIX: f64 = 2.0;
    let n = a.n;
    loop {
        let mut converged = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += abs1(a[(j, i)]);
                    r += abs1(a[(i, j)]);
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + r) / f < 0.95 * s {
                converged = false;
                let inv = 1.0 / f;
                for j in 0..n {
                    a[(i, j)] *= inv;
                    a[(j, i)] *= f;
                }
            }
        }
        if converged {
            return;
        }
    }
}

fn reduce_to_hessenberg(a: &mut ComplexMatrix) {
    let n = a.n;
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n.saturating_sub(2) {
        let len = n - k - 1;
        let mut norm_sq = 0.0;
        for i in 0..len {
            v[i] = a[(k + 1 + i, k)];
            norm_sq += v[i].norm_sqr();
        }
        let tail: f64 = v[1..len].iter().map(|z| z.norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let norm = norm_sq.sqrt();
        let x0 = v[0];
        let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        v[0] -= alpha;
        let vnorm = v[..len].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut v[..len] {
            *z /= vnorm;
        }
        // A <- (I - 2vv^H) A on rows k+1..n
        for c in k..n {
            let mut s = Complex64::new(0.0, 0.0);
            for i in 0..len {
                s += v[i].conj() * a[(k + 1 + i, c)];
            }
            let s2 = s * 2.0;
            for i in 0..len {
                let vi = v[i];
                a[(k + 1 + i, c)] -= vi * s2;
            }
        }
        // A <- A (I - 2vv^H) on columns k+1..n
        for r in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for i in 0..len {
                s += a[(r, k + 1 + i)] * v[i];
            }
            let s2 = s * 2.0;
            for i in 0..len {
                let vc = v[i].conj();
                a[(r, k + 1 + i)] -= s2 * vc;
            }
        }
        a[(k + 1, k)] = alpha;
        for i in 1..len {
            a[(k + 1 + i, k)] = Complex64::new(0.0, 0.0);
        }
    }
}

/// Eigenvalues of `[[a, b], [c, d]]`, larger-magnitude root first.
fn eig2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let m = (a + d) * 0.5;
    let h = (a - d) * 0.5;
    let mut disc = (h * h + b * c).sqrt();
    if (m.conj() * disc).re < 0.0 {
        disc = -disc;
    }
    let l1 = m + disc;
    let det = a * d - b * c;
    let l2 = if l1.norm() > 0.0 { det / l1 } else { m - disc };
    (l1, l2)
}

/// Givens rotation (c real, s complex) with `[c s; -conj(s) c] [f; g] = [r; 0]`.
#[inline]
fn givens(f: Complex64, g: Complex64) -> (f64, Complex64) {
    let af = f.norm();
    let ag = g.norm();
    if ag == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if af == 0.0 {
        return (0.0, g.conj() / ag);
    }
    let norm = af.hypot(ag);
    let alpha = f / af;
    (af / norm, alpha * g.conj() / norm)
}

fn hessenberg_qr(h: &mut ComplexMatrix) -> Result<Vec<Complex64>> {
    let n = h.n;
    let mut eig = vec![Complex64::new(0.0, 0.0); n];
    let mut rot: Vec<(f64, Complex64)> = vec![(1.0, Complex64::new(0.0, 0.0)); n];
    let norm = h.data.iter().map(|&z| abs1(z)).fold(0.0, f64::max);
    let small = f64::MIN_POSITIVE / f64::EPSILON;
    let mut hi = n - 1;
    let mut sweeps = 0usize;
    loop {
        // locate the start of the active unreduced block
        let mut lo = hi;
        while lo > 0 {
            let sub = abs1(h[(lo, lo - 1)]);
            let mut diag = abs1(h[(lo, lo)]) + abs1(h[(lo - 1, lo - 1)]);
            if diag == 0.0 {
                diag = norm;
            }
            if sub <= f64::EPSILON * diag || sub <= small {
                h[(lo, lo - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig[hi] = h[(hi, hi)];
            sweeps = 0;
            if hi == 0 {
                return Ok(eig);
            }
            hi -= 1;
            continue;
        }
        if lo + 1 == hi {
            let (l1, l2) = eig2(h[(lo, lo)], h[(lo, hi)], h[(hi, lo)], h[(hi, hi)]);
            eig[lo] = l1;
            eig[hi] = l2;
            sweeps = 0;
            if lo == 0 {
                return Ok(eig);
            }
            hi = lo - 1;
            continue;
        }
        sweeps += 1;
        if sweeps > MAX_SWEEPS_PER_EIGENVALUE {
            return Err(Error::NumericalFailure {
                method: "complex QR",
                detail: format!(
                    "no deflation after {MAX_SWEEPS_PER_EIGENVALUE} sweeps on block {lo}..={hi} of a {n}x{n} matrix; |h[{hi},{}]| = {:e}",
                    hi - 1,
                    h[(hi, hi - 1)].norm()
                ),
            });
        }
        let shift = if sweeps % 11 == 10 {
            // exceptional shift to break cycles
            h[(hi, hi)] + Complex64::new(abs1(h[(hi, hi - 1)]) + abs1(h[(hi - 1, hi - 2)]), 0.0)
        } else {
            let (l1, l2) =
                eig2(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)]);
            let d = h[(hi, hi)];
            if (l1 - d).norm() < (l2 - d).norm() {
                l1
            } else {
                l2
            }
        };
        for k in lo..=hi {
            h[(k, k)] -= shift;
        }
        // H - shift = QR: rotations from the left
        for k in lo..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            rot[k] = (c, s);
            for col in k..=hi {
                let x = h[(k, col)];
                let y = h[(k + 1, col)];
                h[(k, col)] = x * c + s * y;
                h[(k + 1, col)] = y * c - s.conj() * x;
            }
            h[(k + 1, k)] = Complex64::new(0.0, 0.0);
        }
        // RQ: rotations from the right
        for k in lo..hi {
            let (c, s) = rot[k];
            for row in lo..=k + 1 {
                let x = h[(row, k)];
                let y = h[(row, k + 1)];
                h[(row, k)] = x * c + y * s.conj();
                h[(row, k + 1)] = y * c - x * s;
            }
        }
        for k in lo..=hi {
            h[(k, k)] += shift;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_by_re_im(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn diagonal_matrix() {
        let a = ComplexMatrix::from_real(3, &[3.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 2.0]).unwrap();
        let e = sorted_by_re_im(eigenvalues(a).unwrap());
        assert_eq!(e.iter().map(|z| z.re).collect::<Vec<_>>(), [-1.0, 2.0, 3.0]);
    }

    #[test]
    fn rotation_generator_has_imaginary_pair() {
        let a = ComplexMatrix::from_real(2, &[0.0, -1.0, 1.0, 0.0]).unwrap();
        let e = sorted_by_re_im(eigenvalues(a).unwrap());
        assert!((e[0] - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        assert!((e[1] - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn companion_of_known_roots() {
        // (x-1)(x-2)(x-3)(x-4) = x^4 - 10x^3 + 35x^2 - 50x + 24
        let c = [24.0, -50.0, 35.0, -10.0];
        let n = 4;
        let mut m = vec![0.0; n * n];
        for i in 1..n {
            m[i * n + i - 1] = 1.0;
        }
        for i in 0..n {
            m[i * n + n - 1] = -c[i];
        }
        let e = sorted_by_re_im(eigenvalues(ComplexMatrix::from_real(n, &m).unwrap()).unwrap());
        for (k, z) in e.iter().enumerate() {
            assert!((z - Complex64::new(k as f64 + 1.0, 0.0)).norm() < 1e-10, "{z}");
        }
    }

    #[test]
    fn jordan_block_is_handled() {
        let a = ComplexMatrix::from_real(3, &[2.0, 1.0, 0.0, 0.0, 2.0, 1.0, 0.0, 0.0, 2.0]).unwrap();
        for z in eigenvalues(a).unwrap() {
            assert!((z - Complex64::new(2.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn non_finite_input_is_rejected() {
        let a = ComplexMatrix::from_real(2, &[f64::NAN, 0.0, 0.0, 1.0]).unwrap();
        assert!(eigenvalues(a).is_err());
    }
}
