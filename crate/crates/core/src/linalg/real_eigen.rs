//! Eigenvalues of real matrices: balancing, Householder reduction to upper
//! Hessenberg form and the Francis double-shift QR iteration.

#[allow(unused_imports)]
use num_traits::Float;

use alloc::format;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{check_len, Error, Result};

const MAX_ITERATIONS_PER_EIGENVALUE: usize = 300;

/// All eigenvalues of the row-major `n × n` real matrix `a`; complex pairs appear
/// as `(re + i·im, re − i·im)`.
pub fn real_eigenvalues(n: usize, mut a: Vec<f64>) -> Result<Vec<Complex64>> {
    check_len(n * n, a.len())?;
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::NumericalFailure {
            method: "real Hessenberg QR",
            detail: "matrix has non-finite entries".into(),
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    balance(n, &mut a);
    hessenberg(n, &mut a);
    francis(n, &mut a)
}

fn balance(n: usize, a: &mut [f64]) {
    const RADIX: f64 = 2.0;
    loop {
        let mut done = true;
        for i in 0..n {
            let (mut r, mut c) = (0.0, 0.0);
            for j in 0..n {
                if j != i {
                    c += a[j * n + i].abs();
                    r += a[i * n + j].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            let g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                for j in 0..n {
                    a[i * n + j] /= f;
                    a[j * n + i] *= f;
                }
            }
        }
        if done {
            return;
        }
    }
}

fn hessenberg(n: usize, a: &mut [f64]) {
    let mut v = alloc::vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        let scale: f64 = (k + 1..n).map(|i| a[i * n + k].abs()).sum();
        if scale == 0.0 {
            continue;
        }
        let mut norm2 = 0.0;
        for i in k + 1..n {
            v[i] = a[i * n + k] / scale;
            norm2 += v[i] * v[i];
        }
        let alpha = -v[k + 1].signum() * norm2.sqrt();
        let h = norm2 - v[k + 1] * alpha;
        v[k + 1] -= alpha;
        // H = I − v vᵀ / h applied on both sides
        for j in 0..n {
            let mut s = 0.0;
            for i in k + 1..n {
                s += v[i] * a[i * n + j];
            }
            let f = s / h;
            for i in k + 1..n {
                a[i * n + j] -= f * v[i];
            }
        }
        for i in 0..n {
            let row = &mut a[i * n..(i + 1) * n];
            let mut s = 0.0;
            for j in k + 1..n {
                s += row[j] * v[j];
            }
            let f = s / h;
            for j in k + 1..n {
                row[j] -= f * v[j];
            }
        }
        for i in k + 2..n {
            a[i * n + k] = 0.0;
        }
    }
}

fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

fn francis(n: usize, a: &mut [f64]) -> Result<Vec<Complex64>> {
    let at = |a: &[f64], i: usize, j: usize| a[i * n + j];
    let mut wr = alloc::vec![0.0; n];
    let mut wi = alloc::vec![0.0; n];
    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += at(a, i, j).abs();
        }
    }
    let mut nn = n as isize - 1;
    let mut t = 0.0;
    while nn >= 0 {
        let hi = nn as usize;
        let mut its = 0;
        loop {
            // look for a negligible subdiagonal element
            let mut l = hi;
            while l >= 1 {
                let mut s = at(a, l - 1, l - 1).abs() + at(a, l, l).abs();
                if s == 0.0 {
                    s = anorm;
                }
                if at(a, l, l - 1).abs() + s == s {
                    a[l * n + l - 1] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = at(a, hi, hi);
            if l == hi {
                wr[hi] = x + t;
                wi[hi] = 0.0;
                nn -= 1;
                break;
            }
            let mut y = at(a, hi - 1, hi - 1);
            let mut w = at(a, hi, hi - 1) * at(a, hi - 1, hi);
            if l == hi - 1 {
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    let z = p + sign(z, p);
                    wr[hi - 1] = x + z;
                    wr[hi] = if z != 0.0 { x - w / z } else { x + z };
                    wi[hi - 1] = 0.0;
                    wi[hi] = 0.0;
                } else {
                    wr[hi - 1] = x + p;
                    wr[hi] = x + p;
                    wi[hi - 1] = -z;
                    wi[hi] = z;
                }
                nn -= 2;
                break;
            }
            if its == MAX_ITERATIONS_PER_EIGENVALUE {
                return Err(Error::NumericalFailure {
                    method: "real Hessenberg QR",
                    detail: format!(
                        "no convergence after {its} iterations on the active block ending at row {hi} of {n}"
                    ),
                });
            }
            if its % 10 == 9 {
                // exceptional shifts, alternating between the bottom and the
                // top of the active block
                if (its / 10) % 2 == 0 {
                    t += x;
                    for i in 0..=hi {
                        a[i * n + i] -= x;
                    }
                    let s = at(a, hi, hi - 1).abs() + at(a, hi - 1, hi - 2).abs();
                    x = 0.75 * s;
                    w = -0.4375 * s * s;
                } else {
                    let s = at(a, l + 1, l).abs() + at(a, l + 2, l + 1).abs();
                    x = at(a, l, l) + 0.75 * s;
                    w = -0.4375 * s * s;
                }
                y = x;
            }
            its += 1;
            // two consecutive small subdiagonal elements
            let mut m = hi - 2;
            let (mut p, mut q, mut r);
            loop {
                let z = at(a, m, m);
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / at(a, m + 1, m) + at(a, m, m + 1);
                q = at(a, m + 1, m + 1) - z - rr - ss;
                r = at(a, m + 2, m + 1);
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = at(a, m, m - 1).abs() * (q.abs() + r.abs());
                let v = p.abs() * (at(a, m - 1, m - 1).abs() + z.abs() + at(a, m + 1, m + 1).abs());
                if u + v == v {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=hi {
                a[i * n + i - 2] = 0.0;
                if i != m + 2 {
                    a[i * n + i - 3] = 0.0;
                }
            }
            let mut k = m;
            while k < hi {
                let mut xk = 0.0;
                if k != m {
                    p = at(a, k, k - 1);
                    q = at(a, k + 1, k - 1);
                    r = if k != hi - 1 { at(a, k + 2, k - 1) } else { 0.0 };
                    xk = p.abs() + q.abs() + r.abs();
                    if xk != 0.0 {
                        p /= xk;
                        q /= xk;
                        r /= xk;
                    }
                }
                let s = sign((p * p + q * q + r * r).sqrt(), p);
                if s != 0.0 {
                    if k == m {
                        if l != m {
                            a[k * n + k - 1] = -a[k * n + k - 1];
                        }
                    } else {
                        a[k * n + k - 1] = -s * xk;
                    }
                    p += s;
                    let (x1, y1, z1) = (p / s, q / s, r / s);
                    q /= p;
                    r /= p;
                    for j in k..=hi {
                        let mut pp = a[k * n + j] + q * a[(k + 1) * n + j];
                        if k != hi - 1 {
                            pp += r * a[(k + 2) * n + j];
                            a[(k + 2) * n + j] -= pp * z1;
                        }
                        a[(k + 1) * n + j] -= pp * y1;
                        a[k * n + j] -= pp * x1;
                    }
                    let mmin = if hi < k + 3 { hi } else { k + 3 };
                    for i in l..=mmin {
                        let mut pp = x1 * a[i * n + k] + y1 * a[i * n + k + 1];
                        if k != hi - 1 {
                            pp += z1 * a[i * n + k + 2];
                            a[i * n + k + 2] -= pp * r;
                        }
                        a[i * n + k + 1] -= pp * q;
                        a[i * n + k] -= pp;
                    }
                }
                k += 1;
            }
        }
    }
    Ok(wr.into_iter().zip(wi).map(|(r, i)| Complex64::new(r, i)).collect())
}
