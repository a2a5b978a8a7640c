use std::fs;
use std::process::{Command, Output};

fn ptchain(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptchain")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn single_pair_spectrum_is_real() {
    let o = ptchain(&["spectrum", "--n", "1", "--omega", "1", "--gamma", "0.1", "--epsilon", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("frequencies: 4 (real: 4)"), "{s}");
    assert!(s.contains("phase: unbroken"));
    assert!(s.contains("0.19899749 < epsilon < 1.00000000"));
}

#[test]
fn four_pair_spectrum_has_complex_frequencies() {
    let o = ptchain(&["spectrum", "--n", "4", "--omega", "1", "--gamma", "0.1", "--epsilon", "0.3"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("phase: broken"), "{s}");
    assert!(!s.contains("(real: 16)"));
}

#[test]
fn missing_flag_is_a_usage_error() {
    let o = ptchain(&["spectrum", "--n", "1", "--gamma", "0.1", "--epsilon", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("omega"));
    assert_eq!(ptchain(&["spectrum", "--bogus", "1"]).status.code(), Some(2));
    assert_eq!(ptchain(&[]).status.code(), Some(2));
    assert_eq!(ptchain(&["--help"]).status.code(), Some(0));
}

#[test]
fn poly_layout() {
    let o = ptchain(&["poly", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "-e^6 + 6 x e^4 - 5 x^2 e^2 + x^3\n");
}

#[test]
fn coefficient_overflow_is_numerical() {
    assert_eq!(ptchain(&["poly", "--n", "95"]).status.code(), Some(3));
}

#[test]
fn planar_five_regions() {
    let o = ptchain(&["planar", "--omega", "0.8", "--gamma", "0.10", "--eps1", "0.10", "--eps2-max", "0.70"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "regions: 5"), "{}", stdout(&o));
}

#[test]
fn gamma_crit_table() {
    let o = ptchain(&["gamma-crit", "--profile", "inverse", "--n-max", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<f64> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(rows.len(), 3);
    // a single pair sees the full amplitude under every profile
    assert!((rows[0] - 0.5f64.sqrt()).abs() < 1e-5);
}

#[test]
fn unwritable_output_is_an_io_error() {
    let o = ptchain(&["poly", "--n", "2", "-o", "/nonexistent/dir/p.csv"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn config_file_round_trip_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let o = ptchain(&[
        "scan", "--n", "2", "--omega", "1", "--gamma", "0.1", "--grid", "64", "-o", &p("a.csv"),
        "--emit-config", &p("run.json"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = ptchain(&["--config", &p("run.json"), "-o", &p("b.csv")]);
    assert_eq!(o.status.code(), Some(0));
    let a = fs::read(p("a.csv")).unwrap();
    assert_eq!(a, fs::read(p("b.csv")).unwrap());

    let threaded = Command::new(env!("CARGO_BIN_EXE_ptchain"))
        .env("PTCHAIN_THREADS", "2")
        .args(["--config", &p("run.json"), "-o", &p("c.csv")])
        .output()
        .unwrap();
    assert_eq!(threaded.status.code(), Some(0));
    assert_eq!(a, fs::read(p("c.csv")).unwrap());

    // flags override the file
    let o = ptchain(&["--config", &p("run.json"), "scan", "--gamma", "0.3", "-o", &p("d.csv")]);
    assert_eq!(o.status.code(), Some(0));
    assert_ne!(a, fs::read(p("d.csv")).unwrap());
    assert_eq!(ptchain(&["--config", &p("run.json"), "poly"]).status.code(), Some(2));
}

#[test]
fn config_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, r#"{"command": "poly", "params": {"n": 2, "order": 3}}"#).unwrap();
    assert_eq!(ptchain(&["--config", path.to_str().unwrap()]).status.code(), Some(2));
    fs::write(&path, r#"{"command": "poly", "params": {"n": 2}, "colour": "red"}"#).unwrap();
    assert_eq!(ptchain(&["--config", path.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(ptchain(&["--config", "/nonexistent/run.json"]).status.code(), Some(4));
}

#[test]
fn simulate_reports_peaks_and_writes_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let o = ptchain(&[
        "simulate", "--n", "1", "--omega", "1", "--gamma", "0.1", "--epsilon", "0.5", "--t-end", "300",
        "--dt", "0.01", "--stride", "10", "--peaks", "0", "-o", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert_eq!(s.lines().filter(|l| l.starts_with("peak:")).count(), 2, "{s}");
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("t,x1,x2,p1,p2,E,H\n"));
    assert_eq!(text.lines().count(), 3002);

    let big = ptchain(&["simulate", "--n", "1", "--omega", "1", "--gamma", "0.1", "--epsilon", "0.5", "--t-end", "1", "--dt", "0.5"]);
    assert_eq!(big.status.code(), Some(2));
}

#[test]
fn seeded_random_start_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |seed: &str, name: &str| {
        let path = dir.path().join(name);
        let o = ptchain(&[
            "simulate", "--system", "trio", "--omega", "0.8", "--gamma", "0.1", "--eps1", "0.1", "--eps2", "0.2",
            "--t-end", "5", "--dt", "0.01", "--initial", "random", "--seed", seed, "--format", "json", "-o",
            path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        fs::read(path).unwrap()
    };
    assert_eq!(run("7", "a.json"), run("7", "b.json"));
    assert_ne!(run("7", "a.json"), run("8", "c.json"));
}

#[test]
fn impurity_mode_and_window() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.csv");
    let o = ptchain(&["impurity", "--omega", "1", "--epsilon", "0.5", "--gamma", "0.3", "--big-omega", "1.1", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("x,re_s,im_s,re_d,im_d\n"));
    assert_eq!(text.lines().count(), 2002);
    let o = ptchain(&["impurity", "--omega", "1", "--epsilon", "0.5", "--gamma", "0.3", "--big-omega", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn impurity_evolution_frames() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("h.json");
    let o = ptchain(&[
        "impurity", "--omega", "1", "--epsilon", "0.5", "--gamma", "0.3", "--big-omega", "1", "--evolve", "2",
        "--format", "json", "-o", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["x"].as_array().unwrap().len(), 801);
    assert_eq!(v["frames"].as_array().unwrap().len(), 3);
}

#[test]
fn planar_diagram_and_trace_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("d.csv");
    let o = ptchain(&["planar", "--mode", "diagram", "--omega", "0.8", "--gamma", "0.1", "--eps1-max", "0.7", "--eps2-max", "0.7", "--resolution", "32", "-o", d.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&d).unwrap();
    assert_eq!(text.lines().count(), 1 + 32 * 32);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",0") || l.ends_with(",1")));
    let t = dir.path().join("t.csv");
    let o = ptchain(&["planar", "--mode", "trace", "--omega", "0.8", "--gamma", "0.1", "--eps1", "0.1", "--eps2-max", "0.7", "-o", t.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&t).unwrap();
    assert_eq!(text.lines().next().unwrap().split(',').count(), 7);
    assert_eq!(ptchain(&["planar", "--mode", "trace", "--omega", "0.8", "--gamma", "0.1", "--eps2-max", "0.7"]).status.code(), Some(2));
}
