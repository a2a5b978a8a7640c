use std::fs;

use proptest::prelude::*;

use ptchain::config::{CommandName, Format, RunConfig, Tolerances};
use ptchain::output::{num, phase_table_csv};
use ptchain::{emit_phase_table, frequency_extract, FrequencyEstimate, Rayon};
use ptchain_core::chain::{build_uniform_chain, HamiltonianRep, PhaseState};
use ptchain_core::dynamics::{integrate_strided, HamiltonianSystem};
use ptchain_core::region::{scan_epsilon, ChainTemplate, RegionReport, Sequential};
use ptchain_core::spectral::analytic_spectrum;

fn report(n: usize) -> RegionReport {
    scan_epsilon(&ChainTemplate::uniform(n, 1.0, 0.1), (0.0, 1.5), 400, 1e-10, &Sequential).unwrap()
}

fn phase_column(csv: &str) -> Vec<String> {
    csv.lines()
        .skip(1)
        .take_while(|l| !l.is_empty())
        .map(|l| l.rsplit(',').next().unwrap().to_string())
        .collect()
}

#[test]
fn single_pair_table_flips_twice() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("n1.csv");
    emit_phase_table(&report(1), &path).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("epsilon,max_im_lambda,phase\n"));
    assert!(!text.contains('\r'));
    let phases = phase_column(&text);
    assert_eq!(phases.len(), 400);
    assert_eq!(phases.windows(2).filter(|w| w[0] != w[1]).count(), 2);
}

#[test]
fn two_pair_summary_lists_three_intervals() {
    let text = phase_table_csv(&report(2));
    let summary: Vec<&str> = text.lines().filter(|l| l.starts_with("# ") && !l.starts_with("# lo") && !l.starts_with("# intervals")).collect();
    let tags: Vec<&str> = summary.iter().map(|l| l.split(',').nth(2).unwrap()).collect();
    assert_eq!(tags, ["broken", "unbroken", "broken"]);
}

#[test]
fn empty_report_is_header_only() {
    let empty = RegionReport {
        param: "epsilon".into(),
        grid: vec![],
        max_imag: vec![],
        phases: vec![],
        intervals: vec![],
        refine_tol: 1e-10,
    };
    assert_eq!(phase_table_csv(&empty), "epsilon,max_im_lambda,phase\n");
}

#[test]
fn table_bytes_do_not_depend_on_threads() {
    let t = ChainTemplate::uniform(3, 1.0, 0.05);
    let a = scan_epsilon(&t, (0.0, 1.5), 300, 1e-10, &Sequential).unwrap();
    let b = scan_epsilon(&t, (0.0, 1.5), 300, 1e-10, &Rayon::new(3).unwrap()).unwrap();
    assert_eq!(phase_table_csv(&a), phase_table_csv(&b));
}

#[test]
fn unwritable_path_is_an_io_error() {
    let err = emit_phase_table(&report(1), std::path::Path::new("/nonexistent/dir/t.csv")).unwrap_err();
    assert_eq!(err.code(), 4);
}

fn kicked(n: usize, omega: f64, gamma: f64, eps: f64, t_end: f64) -> ptchain_core::dynamics::Trajectory {
    let spec = build_uniform_chain(n, omega, gamma, eps).unwrap();
    let sys = HamiltonianSystem::chain(&spec, &HamiltonianRep::Sum).unwrap();
    let mut x = vec![0.0; 2 * n];
    x[0] = 1.0;
    let init = sys.state_from_velocities(&x, &vec![0.0; 2 * n], 0.0).unwrap();
    integrate_strided(&sys, &init, t_end, 0.01, 10).unwrap()
}

fn positive_real(n: usize, omega: f64, gamma: f64, eps: f64) -> Vec<f64> {
    let mut v: Vec<f64> = analytic_spectrum(n, omega, gamma, eps)
        .unwrap()
        .frequencies
        .iter()
        .filter(|l| l.re > 0.0)
        .map(|l| l.re)
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

fn assert_peaks(est: FrequencyEstimate, want: &[f64]) {
    let FrequencyEstimate::Peaks { frequencies, bin_width, .. } = est else { panic!("unexpected growth flag") };
    assert_eq!(frequencies.len(), want.len(), "{frequencies:?} vs {want:?}");
    for (f, w) in frequencies.iter().zip(want) {
        assert!((f - w).abs() < bin_width, "{f} vs {w}, bin {bin_width}");
    }
}

#[test]
fn single_pair_peaks() {
    // slowest period ≈ 8.7, so 400 covers more than 40 of them
    assert_peaks(frequency_extract(&kicked(1, 1.0, 0.1, 0.5, 400.0)).unwrap(), &positive_real(1, 1.0, 0.1, 0.5));
}

#[test]
fn uncoupled_oscillator_peak() {
    assert_peaks(frequency_extract(&kicked(1, 1.3, 0.0, 0.0, 400.0)).unwrap(), &[1.3]);
}

#[test]
fn two_pair_peaks() {
    let want = positive_real(2, 1.0, 0.1, 0.45);
    assert_eq!(want.len(), 4);
    assert_peaks(frequency_extract(&kicked(2, 1.0, 0.1, 0.45, 1200.0)).unwrap(), &want);
}

#[test]
fn broken_trajectory_reports_growth() {
    let est = frequency_extract(&kicked(1, 1.0, 0.1, 0.1, 300.0)).unwrap();
    let FrequencyEstimate::Growth { rate } = est else { panic!("{est:?}") };
    let expected = analytic_spectrum(1, 1.0, 0.1, 0.1).unwrap().max_imag();
    assert!((rate - expected).abs() < 0.1 * expected, "{rate} vs {expected}");
}

#[test]
fn zero_trajectory_has_no_peaks() {
    let spec = build_uniform_chain(1, 1.0, 0.1, 0.5).unwrap();
    let sys = HamiltonianSystem::chain(&spec, &HamiltonianRep::Sum).unwrap();
    let t = integrate_strided(&sys, &PhaseState::zeros(2), 10.0, 0.01, 1).unwrap();
    assert!(matches!(frequency_extract(&t).unwrap(), FrequencyEstimate::Peaks { frequencies, .. } if frequencies.is_empty()));
}

fn command() -> impl Strategy<Value = CommandName> {
    prop_oneof![
        Just(CommandName::Spectrum),
        Just(CommandName::Scan),
        Just(CommandName::GammaCrit),
        Just(CommandName::Planar),
        Just(CommandName::Simulate),
        Just(CommandName::Impurity),
        Just(CommandName::Poly),
    ]
}

proptest! {
    #[test]
    fn csv_numbers_round_trip(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        prop_assert_eq!(num(x).parse::<f64>().unwrap(), x + 0.0);
    }

    #[test]
    fn run_config_round_trips(
        cmd in command(),
        n in 1usize..50,
        omega in 0.1f64..3.0,
        list in proptest::collection::vec(-2.0f64..2.0, 1..5),
        json in any::<bool>(),
        seed in any::<u64>(),
        imag in 1e-14f64..1e-3,
        out in proptest::option::of("[a-z]{1,8}\\.csv"),
    ) {
        let mut c = RunConfig::new(cmd);
        c.params.insert("n".into(), n.into());
        c.params.insert("omega".into(), omega.into());
        c.params.insert("epsilon".into(), serde_json::to_value(&list).unwrap());
        c.format = if json { Format::Json } else { Format::Csv };
        c.seed = seed;
        c.tolerances = Tolerances { imag, ..Tolerances::default() };
        c.output = out.map(Into::into);
        prop_assert_eq!(RunConfig::from_json(&c.to_json()).unwrap(), c);
    }
}
