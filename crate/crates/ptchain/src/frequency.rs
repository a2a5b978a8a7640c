//! Dominant frequencies of a trajectory from a Hann-windowed periodogram.

use rustfft::{num_complex::Complex, FftPlanner};
use serde::Serialize;

use ptchain_core::dynamics::Trajectory;
use ptchain_core::Error;

/// Zero-padding factor; interpolates the periodogram, does not improve resolution.
pub const PADDING: usize = 8;
/// Peaks below this fraction of the largest amplitude are dropped. The
/// highest Hann sidelobe is at about 0.028.
pub const PEAK_THRESHOLD: f64 = 0.05;
/// Ratio of late to early amplitude above which a trajectory counts as growing.
pub const GROWTH_RATIO: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FrequencyEstimate {
    /// Angular frequencies in increasing order. `bin_width = 2π/T` is the
    /// resolution of a record of length `T`.
    Peaks { frequencies: Vec<f64>, amplitudes: Vec<f64>, bin_width: f64 },
    /// Amplitude grows, `rate` is the mean exponential rate between the
    /// first and last quarter of the record.
    Growth { rate: f64 },
}

/// Peaks of coordinate 0.
pub fn frequency_extract(traj: &Trajectory) -> Result<FrequencyEstimate, Error> {
    frequency_extract_coordinate(traj, 0)
}

pub fn frequency_extract_coordinate(traj: &Trajectory, coordinate: usize) -> Result<FrequencyEstimate, Error> {
    let m = traj.len();
    if m < 16 {
        return Err(Error::InvalidArgument("periodogram needs at least 16 samples".into()));
    }
    let n = traj.states[0].coords.len();
    if coordinate >= n {
        return Err(Error::DimensionMismatch { expected: n, found: coordinate + 1 });
    }
    if let Some(rate) = growth_rate(traj) {
        return Ok(FrequencyEstimate::Growth { rate });
    }
    let h = traj.times[1] - traj.times[0];
    let signal = traj.coordinate(coordinate);
    let mean = signal.iter().sum::<f64>() / m as f64;
    let len = (m * PADDING).next_power_of_two();
    let mut buf = vec![Complex::new(0.0, 0.0); len];
    for (k, x) in signal.iter().enumerate() {
        let w = 0.5 * (1.0 - (2.0 * std::f64::consts::PI * k as f64 / (m - 1) as f64).cos());
        buf[k] = Complex::new((x - mean) * w, 0.0);
    }
    FftPlanner::new().plan_fft_forward(len).process(&mut buf);
    let mag: Vec<f64> = buf[..len / 2].iter().map(|c| c.norm()).collect();
    let bin = 2.0 * std::f64::consts::PI / (len as f64 * h);
    let bin_width = 2.0 * std::f64::consts::PI / (m as f64 * h);
    let top = mag.iter().skip(1).fold(0.0, |a: f64, b| a.max(*b));
    if top == 0.0 {
        return Ok(FrequencyEstimate::Peaks { frequencies: vec![], amplitudes: vec![], bin_width });
    }
    let mut peaks: Vec<(f64, f64)> = (2..mag.len() - 1)
        .filter(|&j| mag[j] > mag[j - 1] && mag[j] >= mag[j + 1] && mag[j] >= PEAK_THRESHOLD * top)
        .map(|j| {
            // parabola through the log magnitudes
            let (a, b, c) = (mag[j - 1].ln(), mag[j].ln(), mag[j + 1].ln());
            let den = a - 2.0 * b + c;
            let d = if den != 0.0 { 0.5 * (a - c) / den } else { 0.0 };
            ((j as f64 + d) * bin, mag[j] / top)
        })
        .collect();
    // the Hann main lobe spans two resolution bins on each side
    peaks.sort_by(|x, y| y.1.total_cmp(&x.1));
    let mut kept: Vec<(f64, f64)> = Vec::new();
    for p in peaks {
        if kept.iter().all(|k| (k.0 - p.0).abs() > 2.0 * bin_width) {
            kept.push(p);
        }
    }
    kept.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(FrequencyEstimate::Peaks {
        frequencies: kept.iter().map(|p| p.0).collect(),
        amplitudes: kept.iter().map(|p| p.1).collect(),
        bin_width,
    })
}

fn growth_rate(traj: &Trajectory) -> Option<f64> {
    let a = &traj.max_amplitude;
    if a.iter().any(|x| !x.is_finite()) {
        return Some(f64::INFINITY);
    }
    let q = a.len() / 4;
    let early = a[..q].iter().fold(0.0, |m: f64, x| m.max(*x));
    let late = a[a.len() - q..].iter().fold(0.0, |m: f64, x| m.max(*x));
    if early == 0.0 || late <= GROWTH_RATIO * early {
        return None;
    }
    let span = traj.times[a.len() - q / 2 - 1] - traj.times[q / 2];
    Some((late / early).ln() / span)
}
