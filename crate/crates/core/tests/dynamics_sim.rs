use proptest::prelude::*;
use ptchain_core::chain::{
    apply_parity, apply_time_reversal, build_uniform_chain, GaugeConstants, HamiltonianRep,
    PhaseState,
};
use ptchain_core::dynamics::{conservation_report, integrate, integrate_strided, HamiltonianSystem};
use ptchain_core::planar::TrioParams;
use ptchain_core::spectral::analytic_spectrum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn kick(sys: &HamiltonianSystem, n: usize) -> PhaseState {
    let mut x = vec![0.0; n];
    x[0] = 1.0;
    sys.state_from_velocities(&x, &vec![0.0; n], 0.0).unwrap()
}

fn random_gauge(rng: &mut ChaCha8Rng, n: usize) -> GaugeConstants {
    let mut a = GaugeConstants::new();
    for m in 0..n {
        for k in m + 1..n {
            if rng.random_bool(0.5) {
                a.insert((m, k), rng.random_range(-1.0..1.0));
            }
        }
    }
    a
}

#[test]
fn conservation_and_step_halving() {
    let spec = build_uniform_chain(2, 1.0, 0.1, 0.4).unwrap();
    let sys = HamiltonianSystem::chain(&spec, &HamiltonianRep::Sum).unwrap();
    let init = kick(&sys, 4);
    let r1 = conservation_report(&integrate_strided(&sys, &init, 100.0, 1e-3, 100).unwrap());
    let r2 = conservation_report(&integrate_strided(&sys, &init, 100.0, 5e-4, 200).unwrap());
    let (e1, e2) = (r1.energy.unwrap(), r2.energy.unwrap());
    assert!(e1 < 1e-6 && r1.hamiltonian < 1e-6);
    assert!(e1 / e2 >= 8.0, "{e1} {e2}");
    assert!(r1.hamiltonian / r2.hamiltonian >= 8.0, "{} {}", r1.hamiltonian, r2.hamiltonian);
}

#[test]
fn energy_drift_does_not_depend_on_gamma() {
    for g in [0.0, 0.1] {
        let spec = build_uniform_chain(2, 1.0, g, 0.4).unwrap();
        let sys = HamiltonianSystem::chain(&spec, &HamiltonianRep::Sum).unwrap();
        let r = conservation_report(&integrate_strided(&sys, &kick(&sys, 4), 50.0, 1e-3, 50).unwrap());
        assert!(r.energy.unwrap() < 1e-12, "g={g}: {:?}", r.energy);
    }
}

fn distance(a: &PhaseState, b: &PhaseState) -> f64 {
    a.to_vec().iter().zip(b.to_vec()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn global_error_is_fourth_order() {
    let spec = build_uniform_chain(1, 1.0, 0.1, 0.5).unwrap();
    let sys = HamiltonianSystem::chain(&spec, &HamiltonianRep::Sum).unwrap();
    let init = kick(&sys, 2);
    let end = |dt: f64| integrate(&sys, &init, 10.0, dt).unwrap().states.last().unwrap().clone();
    let (a, b, c) = (end(0.02), end(0.01), end(0.005));
    let ratio = distance(&a, &b) / distance(&b, &c);
    assert!((12.0..20.0).contains(&ratio), "{ratio}");
}

#[test]
fn gauge_and_product_trajectories_coincide() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for n in [2, 3] {
        let spec = build_uniform_chain(n, 1.0, 0.1, 0.3).unwrap();
        let dim = 2 * n;
        let x0: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let v0: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let run = |rep: &HamiltonianRep| {
            let sys = HamiltonianSystem::chain(&spec, rep).unwrap();
            let init = sys.state_from_velocities(&x0, &v0, 0.0).unwrap();
            (sys.clone(), integrate_strided(&sys, &init, 20.0, 1e-3, 100).unwrap())
        };
        let (ref_sys, reference) = run(&HamiltonianRep::Sum);
        let mut reps = vec![HamiltonianRep::Product];
        reps.extend((0..10).map(|_| HamiltonianRep::Gauge(random_gauge(&mut rng, dim))));
        for rep in &reps {
            let (sys, traj) = run(rep);
            for (s, r) in traj.states.iter().zip(&reference.states) {
                let d = s.coords.iter().zip(&r.coords).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                assert!(d < 1e-8, "n={n}: {d}");
                // same second-order field at the same (x, ẋ)
                let v = ref_sys.velocities(r);
                let a1 = sys.form().accelerations(&r.coords, &v).unwrap();
                let a2 = ref_sys.form().accelerations(&r.coords, &v).unwrap();
                for (p, q) in a1.iter().zip(&a2) {
                    assert!((p - q).abs() < 1e-12);
                }
            }
        }
    }
}

fn pt(s: &PhaseState) -> PhaseState {
    apply_time_reversal(&apply_parity(s), true)
}

#[test]
fn pt_image_of_a_trajectory_is_a_trajectory() {
    let spec = build_uniform_chain(2, 1.0, 0.1, 0.4).unwrap();
    let sys = HamiltonianSystem::chain(&spec, &HamiltonianRep::Sum).unwrap();
    let fwd = integrate(&sys, &kick(&sys, 4), 10.0, 1e-3).unwrap();
    let start = pt(fwd.states.last().unwrap());
    assert!((start.time + 10.0).abs() < 1e-12);
    let back = integrate(&sys, &start, 10.0, 1e-3).unwrap();
    let m = fwd.len() - 1;
    for k in (0..=m).step_by(100) {
        let image = pt(&fwd.states[m - k]);
        assert!(distance(&back.states[k], &image) < 1e-10);
        assert!((back.states[k].time - image.time).abs() < 1e-9);
    }
}

/// Moving average of `v` over `w` samples.
fn smooth(v: &[f64], w: usize) -> Vec<f64> {
    v.windows(w).map(|s| s.iter().sum::<f64>() / w as f64).collect()
}

#[test]
fn unbroken_pair_shows_power_oscillation() {
    let spec = build_uniform_chain(1, 1.0, 0.1, 0.5).unwrap();
    let sys = HamiltonianSystem::chain(&spec, &HamiltonianRep::Sum).unwrap();
    let t = integrate_strided(&sys, &kick(&sys, 2), 200.0, 1e-3, 10).unwrap();
    assert!(t.max_amplitude.iter().all(|a| *a < 10.0));
    let power = |j: usize| -> Vec<f64> {
        t.states.iter().map(|s| {
            let v = sys.velocities(s);
            v[j] * v[j] + s.coords[j] * s.coords[j]
        }).collect()
    };
    // average over one fast period (dt·stride = 0.01)
    let (p1, p2) = (smooth(&power(0), 628), smooth(&power(1), 628));
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (m1, m2) = (mean(&p1), mean(&p2));
    let cov: f64 = p1.iter().zip(&p2).map(|(a, b)| (a - m1) * (b - m2)).sum();
    let var = |v: &[f64], m: f64| v.iter().map(|a| (a - m).powi(2)).sum::<f64>();
    let corr = cov / (var(&p1, m1) * var(&p2, m2)).sqrt();
    assert!(corr < -0.5, "envelopes not out of phase: {corr}");
}

#[test]
fn broken_pair_grows_at_the_imaginary_rate() {
    let spec = build_uniform_chain(1, 1.0, 0.1, 0.05).unwrap();
    let sp = analytic_spectrum(1, 1.0, 0.1, 0.05).unwrap();
    let rate = sp.max_imag();
    let period = 2.0 * std::f64::consts::PI / sp.frequencies[0].re.abs();
    let sys = HamiltonianSystem::chain(&spec, &HamiltonianRep::Sum).unwrap();
    for init in [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, -1.0]] {
        let st = sys.state_from_velocities(&init, &[0.0, 0.0], 0.0).unwrap();
        let t = integrate_strided(&sys, &st, 40.0, 1e-3, 10).unwrap();
        // peak amplitude over one period ending at `end`; windows whole periods
        // apart see the same phase of the oscillation
        let peak = |end: f64| {
            let (a, b) = (((end - period) / 0.01).ceil() as usize, (end / 0.01).floor() as usize);
            t.max_amplitude[a..=b].iter().cloned().fold(0.0, f64::max)
        };
        let (t1, t2) = (20.0, 20.0 + 3.0 * period);
        let measured = (peak(t2) / peak(t1)).ln() / (t2 - t1);
        assert!((measured - rate).abs() < 0.05 * rate, "{init:?}: {measured} vs {rate}");
    }
}

#[test]
fn trio_hamiltonian_flow() {
    let p = TrioParams::new(0.8, 0.1, 0.1, 0.2).unwrap();
    let sys = HamiltonianSystem::trio(&p).unwrap();
    assert!(!sys.tracks_energy());
    let t = integrate_strided(&sys, &kick(&sys, 3), 50.0, 1e-3, 100).unwrap();
    assert!(conservation_report(&t).hamiltonian < 1e-10);
    for s in &t.states {
        let v = sys.velocities(s);
        let a = sys.form().accelerations(&s.coords, &v).unwrap();
        let want = p.accelerations([s.coords[0], s.coords[1], s.coords[2]], [v[0], v[1], v[2]]);
        for k in 0..3 {
            assert!((a[k] - want[k]).abs() < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn short_runs_conserve_h(g in 0.0..0.3f64, e in 0.1..0.9f64, x in -1.0..1.0f64) {
        let spec = build_uniform_chain(1, 1.0, g, e).unwrap();
        let sys = HamiltonianSystem::chain(&spec, &HamiltonianRep::Sum).unwrap();
        let init = sys.state_from_velocities(&[x, 0.3], &[0.0, 0.1], 0.0).unwrap();
        let t = integrate_strided(&sys, &init, 5.0, 1e-3, 50).unwrap();
        let scale = t.hamiltonian[0].abs().max(1e-3);
        prop_assert!(t.hamiltonian_deviation.iter().all(|d| d.abs() < 1e-10 * scale.max(1.0)));
    }
}
