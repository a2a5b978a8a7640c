//! Deterministic CSV and JSON emission. CSV is comma separated with a header
//! row and LF line endings; floats carry 17 significant digits. Auxiliary
//! blocks are `#` comment lines after a blank line, which gnuplot skips and
//! treats as a dataset break.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use ptchain_core::chain::PhaseState;
use ptchain_core::continuum::{FieldHistory, ImpuritySolution};
use ptchain_core::dynamics::Trajectory;
use ptchain_core::planar::{ImTrace, PhaseDiagram};
use ptchain_core::region::RegionReport;
use ptchain_core::spectral::{CharPoly, Spectrum};

use crate::error::{CliError, CliResult};

/// `{:.16e}`, i.e. 17 significant digits, which round-trips every `f64`.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        // `+ 0.0` turns −0 into +0
        format!("{:.16e}", x + 0.0)
    }
}

fn row(out: &mut String, fields: &[String]) {
    out.push_str(&fields.join(","));
    out.push('\n');
}

/// Writes through a sibling temporary file and a rename, so readers never
/// see a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let name = path
        .file_name()
        .ok_or_else(|| CliError::Io(format!("{}: not a file path", path.display())))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".tmp{}", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map_err(io)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("value serializes");
    s.push('\n');
    s
}

pub fn spectrum_csv(s: &Spectrum) -> String {
    let mut out = String::from("index,re,im\n");
    for (i, l) in s.sorted().iter().enumerate() {
        row(&mut out, &[i.to_string(), num(l.re), num(l.im)]);
    }
    out
}

fn complex_pairs(v: &[Complex64]) -> Vec<[f64; 2]> {
    v.iter().map(|c| [c.re, c.im]).collect()
}

pub fn spectrum_json(s: &Spectrum) -> String {
    to_json(&json!({
        "method": s.method.as_str(),
        "phase": s.phase.as_str(),
        "imag_tolerance": s.imag_tolerance,
        "frequencies": complex_pairs(&s.sorted()),
    }))
}

/// One row per grid point, then the interval summary as comment lines. An
/// empty report gives the header alone.
pub fn phase_table_csv(report: &RegionReport) -> String {
    let mut out = format!("{},max_im_lambda,phase\n", report.param);
    if report.grid.is_empty() {
        return out;
    }
    for ((x, m), p) in report.grid.iter().zip(&report.max_imag).zip(&report.phases) {
        row(&mut out, &[num(*x), num(*m), p.as_str().into()]);
    }
    let _ = write!(out, "\n# intervals refined to {}\n# lo,hi,phase,lo_refined,hi_refined\n", num(report.refine_tol));
    for i in &report.intervals {
        let _ = writeln!(
            out,
            "# {},{},{},{},{}",
            num(i.lo),
            num(i.hi),
            i.phase.as_str(),
            i.lo_refined,
            i.hi_refined
        );
    }
    out
}

pub fn phase_table_json(report: &RegionReport) -> String {
    let intervals: Vec<_> = report
        .intervals
        .iter()
        .map(|i| {
            json!({
                "lo": i.lo, "hi": i.hi, "phase": i.phase.as_str(),
                "lo_refined": i.lo_refined, "hi_refined": i.hi_refined,
            })
        })
        .collect();
    to_json(&json!({
        "param": report.param,
        "grid": report.grid,
        "max_im_lambda": report.max_imag,
        "phase": report.phases.iter().map(|p| p.as_str()).collect::<Vec<_>>(),
        "refine_tol": report.refine_tol,
        "intervals": intervals,
    }))
}

pub fn emit_phase_table(report: &RegionReport, path: &Path) -> CliResult<()> {
    write_atomic(path, &phase_table_csv(report))
}

pub fn diagram_csv(d: &PhaseDiagram) -> String {
    let mut out = String::from("eps1,eps2,unbroken\n");
    for (i2, e2) in d.eps2.iter().enumerate() {
        for (i1, e1) in d.eps1.iter().enumerate() {
            row(&mut out, &[num(*e1), num(*e2), (d.get(i1, i2) as u8).to_string()]);
        }
    }
    out
}

/// Dense form: `unbroken[i2][i1]` with `ε₂` rows.
pub fn diagram_json(d: &PhaseDiagram) -> String {
    let rows: Vec<Vec<u8>> = d.unbroken.chunks(d.eps1.len().max(1)).map(|r| r.iter().map(|b| *b as u8).collect()).collect();
    to_json(&json!({
        "omega": d.omega, "gamma": d.gamma, "eps1": d.eps1, "eps2": d.eps2, "unbroken": rows,
    }))
}

pub fn trace_csv(t: &ImTrace) -> String {
    let mut out = String::from("eps2,im1,im2,im3,im4,im5,im6\n");
    for (e, b) in t.eps2.iter().zip(&t.branches) {
        let mut f = vec![num(*e)];
        f.extend(b.iter().map(|x| num(*x)));
        row(&mut out, &f);
    }
    out
}

pub fn trace_json(t: &ImTrace) -> String {
    to_json(&json!({ "eps2": t.eps2, "im_lambda": t.branches }))
}

/// `t, x_1..x_n, p_1..p_n, [E,] H`; the `E` column appears only when the
/// trajectory tracks it.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let n = traj.states.first().map_or(0, PhaseState::dim);
    let mut header = vec!["t".to_string()];
    header.extend((1..=n).map(|i| format!("x{i}")));
    header.extend((1..=n).map(|i| format!("p{i}")));
    if traj.energy.is_some() {
        header.push("E".into());
    }
    header.push("H".into());
    let mut out = String::new();
    row(&mut out, &header);
    for (k, s) in traj.states.iter().enumerate() {
        let mut f = vec![num(traj.times[k])];
        f.extend(s.coords.iter().chain(&s.momenta).map(|x| num(*x)));
        if let Some(e) = &traj.energy {
            f.push(num(e[k]));
        }
        f.push(num(traj.hamiltonian[k]));
        row(&mut out, &f);
    }
    out
}

pub fn trajectory_json(traj: &Trajectory) -> String {
    to_json(&json!({
        "dt": traj.dt,
        "t": traj.times,
        "x": traj.states.iter().map(|s| &s.coords).collect::<Vec<_>>(),
        "p": traj.states.iter().map(|s| &s.momenta).collect::<Vec<_>>(),
        "E": traj.energy,
        "H": traj.hamiltonian,
        "max_amplitude": traj.max_amplitude,
    }))
}

pub fn mode_csv(m: &ImpuritySolution) -> String {
    let mut out = String::from("x,re_s,im_s,re_d,im_d\n");
    for ((x, s), d) in m.x.iter().zip(&m.s).zip(&m.d) {
        row(&mut out, &[num(*x), num(s.re), num(s.im), num(d.re), num(d.im)]);
    }
    out
}

pub fn mode_json(m: &ImpuritySolution) -> String {
    let p = &m.params;
    to_json(&json!({
        "c": p.c, "omega": p.omega, "epsilon": p.epsilon, "gamma": p.gamma,
        "big_omega": m.big_omega, "a": m.a, "b": m.b,
        "x": m.x, "s": complex_pairs(&m.s), "d": complex_pairs(&m.d),
    }))
}

/// Long format `t,x,S,D`, one block per recorded time separated by blank
/// lines (gnuplot `index`).
pub fn history_csv(h: &FieldHistory) -> String {
    let mut out = String::from("t,x,S,D\n");
    for (k, t) in h.times.iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        for (i, x) in h.x.iter().enumerate() {
            row(&mut out, &[num(*t), num(*x), num(h.s[k][i]), num(h.d[k][i])]);
        }
    }
    out
}

pub fn history_json(h: &FieldHistory) -> String {
    let frames: Vec<_> = h
        .times
        .iter()
        .zip(h.s.iter().zip(&h.d))
        .map(|(t, (s, d))| json!({ "t": t, "S": s, "D": d }))
        .collect();
    to_json(&json!({ "x": h.x, "frames": frames }))
}

pub fn poly_csv(p: &CharPoly) -> String {
    let n = p.degree();
    let mut out = String::from("chi_power,eps_power,coefficient\n");
    for (k, c) in p.coefficients().iter().enumerate() {
        row(&mut out, &[k.to_string(), (2 * (n - k)).to_string(), c.to_string()]);
    }
    out
}

pub fn poly_json(p: &CharPoly) -> String {
    let coeffs: Vec<String> = p.coefficients().iter().map(|c| c.to_string()).collect();
    // coefficients as strings: beyond 2^53 a JSON number loses digits in most readers
    to_json(&json!({ "degree": p.degree(), "coefficients": coeffs, "display": p.to_string() }))
}

pub fn gamma_crit_csv(rows: &[(usize, f64)]) -> String {
    let mut out = String::from("n,gamma_crit\n");
    for (n, g) in rows {
        row(&mut out, &[n.to_string(), num(*g)]);
    }
    out
}

pub fn gamma_crit_json(profile: &str, omega: f64, rows: &[(usize, f64)]) -> String {
    to_json(&json!({
        "profile": profile,
        "omega": omega,
        "n": rows.iter().map(|r| r.0).collect::<Vec<_>>(),
        "gamma_crit": rows.iter().map(|r| r.1).collect::<Vec<_>>(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(num(1.0), "1.0000000000000000e0");
        assert_eq!(num(-0.1), "-1.0000000000000001e-1");
        for x in [0.1, 1.0 / 3.0, 6.02e23, -2.5e-300] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.csv");
        write_atomic(&p, "one\n").unwrap();
        write_atomic(&p, "two\n").unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "two\n");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
        assert!(matches!(write_atomic(&dir.path().join("no/such/dir.csv"), "x"), Err(CliError::Io(_))));
    }
}
