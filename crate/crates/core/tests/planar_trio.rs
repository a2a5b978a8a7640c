use num_complex::Complex64;
use proptest::prelude::*;
use ptchain_core::planar::{
    trio_classify, trio_classify_critical, trio_eps2_scan, trio_hamiltonian,
    trio_hamiltonian_general, trio_im_lambda_trace, trio_phase_diagram, trio_qep_spectrum,
    trio_spectrum, CubicCoeffs, TrioParams,
};
use ptchain_core::region::{scan_with, Sequential};
use ptchain_core::spectral::{multiset_distance, Phase};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The sextic in λ written out term by term.
fn sextic(w: f64, g: f64, e1: f64, e2: f64, l: Complex64) -> Complex64 {
    l.powi(6) + l.powi(4) * (4.0 * g * g - 2.0 * w * w - 1.0)
        + l * l * (w.powi(4) + 2.0 * w * w - 2.0 * e1 * e1 - e2 * e2 - 4.0 * g * g)
        + 2.0 * e1 * e1 * (e2 + w * w)
        + e2 * e2
        - w.powi(4)
}

fn det3(m: [[Complex64; 3]; 3]) -> Complex64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn params(w: f64, g: f64, e1: f64, e2: f64) -> TrioParams {
    TrioParams::new(w, g, e1, e2).unwrap()
}

#[test]
fn sextic_residual() {
    let s = trio_spectrum(&params(0.8, 0.1, 0.1, 0.3)).unwrap();
    assert_eq!(s.frequencies.len(), 6);
    for l in &s.frequencies {
        assert!(sextic(0.8, 0.1, 0.1, 0.3, *l).norm() < 1e-10);
    }
}

#[test]
fn cubic_and_pencil_routes_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..100 {
        let p = params(
            rng.random_range(0.5..1.5),
            rng.random_range(0.0..0.5),
            rng.random_range(0.0..0.8),
            rng.random_range(0.0..0.8),
        );
        let a = trio_spectrum(&p).unwrap();
        let b = trio_qep_spectrum(&p).unwrap();
        let d = multiset_distance(&a.frequencies, &b.frequencies);
        assert!(d < 1e-8, "{p:?}: {d}");
    }
}

#[test]
fn pencil_determinant_is_the_cubic() {
    // det(K + iλC − λ²) = −p(λ²)
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..50 {
        let p = params(rng.random_range(0.5..1.5), rng.random_range(0.0..0.5), rng.random_range(-0.8..0.8), rng.random_range(-0.8..0.8));
        let (k, c) = (p.stiffness(), p.damping());
        let l = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let i = Complex64::i();
        let mut m = [[Complex64::new(0.0, 0.0); 3]; 3];
        for r in 0..3 {
            for s in 0..3 {
                m[r][s] = k[r * 3 + s] + i * l * c[r * 3 + s] - if r == s { l * l } else { 0.0.into() };
            }
        }
        let cc = CubicCoeffs::new(&p);
        let mu = l * l;
        let cubic = mu.powi(3) - cc.alpha * mu * mu + cc.beta * mu - cc.sigma;
        assert!((det3(m) + cubic).norm() < 1e-10 * (1.0 + cubic.norm()));
        let sx: Complex64 = cc.sextic().iter().rev().fold(0.0.into(), |acc, &a| acc * l + a);
        assert!((sx - cubic).norm() < 1e-12 * (1.0 + cubic.norm()));
    }
}

#[test]
fn classification_routes_agree_away_from_boundaries() {
    let n = 200;
    let mut mismatches = 0;
    for w in [0.8, 1.0] {
        for g in [0.02, 0.1, 0.3] {
            for i in 0..n {
                for j in 0..n {
                    let p = params(w, g, i as f64 / n as f64, j as f64 / n as f64);
                    if trio_classify(&p) != trio_classify_critical(&p) {
                        mismatches += 1;
                        // either a boundary is within reach or p has a double root,
                        // where the strict critical-point inequalities fail
                        let near = [-1e-6, 1e-6].iter().any(|d| {
                            trio_classify(&p.with_eps2(p.eps2 + d)) != trio_classify(&p)
                        });
                        let r = CubicCoeffs::new(&p).roots();
                        let double = (0..3).any(|a| (a + 1..3).any(|b| (r[a] - r[b]).norm() < 1e-6));
                        assert!(near || double, "{p:?}");
                    }
                }
            }
        }
    }
    assert!(mismatches < 10);
}

fn qep_phase(p: &TrioParams) -> Phase {
    trio_qep_spectrum(p).unwrap().phase
}

#[test]
fn five_phase_intervals_along_eps2() {
    let base = params(0.8, 0.1, 0.1, 0.0);
    let r = trio_eps2_scan(&base, (0.0, 0.7), 141, 1e-8, &Sequential).unwrap();
    let phases: Vec<Phase> = r.intervals.iter().map(|i| i.phase).collect();
    use Phase::{Broken as B, Unbroken as U};
    assert_eq!(phases, [B, U, B, U, B]);
    // boundaries located independently from the pencil eigenvalues
    let oracle = scan_with("eps2", (0.0, 0.7), 141, 1e-8, &Sequential, |e| {
        Ok((qep_phase(&base.with_eps2(e)), 0.0))
    })
    .unwrap();
    let (a, b) = (r.boundaries(), oracle.boundaries());
    assert_eq!(a.len(), 4);
    assert_eq!(b.len(), 4);
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-6, "{a:?} vs {b:?}");
    }
}

#[test]
fn large_gamma_shrinks_the_unbroken_set() {
    for w in [0.8, 0.9, 1.0, 1.1] {
        let count = |g| {
            trio_phase_diagram(w, g, (0.0, 1.0), (0.0, 1.0), 64, &Sequential).unwrap().unbroken_count()
        };
        let (small, large) = (count(0.02), count(0.5));
        assert!(large < small, "w={w}: {large} vs {small}");
        assert_eq!(count(2.0), 0);
    }
}

#[test]
fn im_trace_vanishes_on_two_windows() {
    let t = trio_im_lambda_trace(0.8, 0.1, 0.1, (0.0, 0.7), 701).unwrap();
    let real: Vec<bool> = t.branches.iter().map(|b| b.iter().all(|v| v.abs() < 1e-9)).collect();
    let windows = real.windows(2).filter(|w| !w[0] && w[1]).count() + usize::from(real[0]);
    assert_eq!(windows, 2);
    let r = trio_eps2_scan(&params(0.8, 0.1, 0.1, 0.0), (0.0, 0.7), 141, 1e-8, &Sequential).unwrap();
    let step = 0.7 / 700.0;
    for b in r.boundaries() {
        let k = (b / step).floor() as usize;
        assert_ne!(real[k], real[k + 1], "boundary {b} not bracketed by the trace");
    }
}

#[test]
fn hermitian_trio_has_real_trace() {
    let t = trio_im_lambda_trace(0.8, 0.0, 0.05, (0.0, 0.3), 64).unwrap();
    assert!(t.branches.iter().all(|b| b.iter().all(|v| *v == 0.0)));
    assert_eq!(trio_classify(&params(1.0, 0.0, 0.01, 0.01)), Phase::Unbroken);
}

#[test]
fn hamilton_equations_reproduce_second_order_system() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..50 {
        let (w1, w2) = (rng.random_range(0.5..1.5), rng.random_range(0.5..1.5));
        let (g, e1, e2) = (rng.random_range(0.0..0.5), rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5));
        let q: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
        let v: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
        let h = trio_hamiltonian_general(w1, w2, g, e1, e2);
        let acc = h.accelerations(&q, &v).unwrap();
        let want = [
            -w1 * w1 * q[0] - 2.0 * g * v[0] + e1 * q[1] + e2 * q[2],
            -w2 * w2 * q[1] + e1 * (q[0] + q[2]),
            -w1 * w1 * q[2] + 2.0 * g * v[2] + e1 * q[1] + e2 * q[0],
        ];
        for k in 0..3 {
            assert!((acc[k] - want[k]).abs() < 1e-12, "{acc:?} vs {want:?}");
        }
        let p = params(w1, g, e1, e2);
        let acc1 = trio_hamiltonian(&p).accelerations(&q, &v).unwrap();
        let want1 = p.accelerations([q[0], q[1], q[2]], [v[0], v[1], v[2]]);
        for k in 0..3 {
            assert!((acc1[k] - want1[k]).abs() < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn roots_closed_under_negation_and_conjugation(
        w in 0.5..1.5f64, g in 0.0..0.5f64, e1 in -0.8..0.8f64, e2 in -0.8..0.8f64,
    ) {
        let s = trio_spectrum(&params(w, g, e1, e2)).unwrap();
        let neg: Vec<Complex64> = s.frequencies.iter().map(|l| -l).collect();
        let conj: Vec<Complex64> = s.frequencies.iter().map(|l| l.conj()).collect();
        prop_assert!(multiset_distance(&s.frequencies, &neg) < 1e-12);
        prop_assert!(multiset_distance(&s.frequencies, &conj) < 1e-12);
    }
}
