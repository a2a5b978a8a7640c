use super::PhaseState;

/// Index reflection with sign flip, `x_k → −x_{n+1−k}` and likewise for momenta.
/// For odd chains the center maps to minus itself.
pub fn apply_parity(state: &PhaseState) -> PhaseState {
    let flip = |v: &[f64]| v.iter().rev().map(|a| -a).collect();
    PhaseState { coords: flip(&state.coords), momenta: flip(&state.momenta), time: state.time }
}

/// Momentum reversal. With `velocity_sense` set the clock is reversed as well,
/// so the image is the corresponding point of the time-reversed trajectory.
pub fn apply_time_reversal(state: &PhaseState, velocity_sense: bool) -> PhaseState {
    PhaseState {
        coords: state.coords.clone(),
        momenta: state.momenta.iter().map(|p| -p).collect(),
        time: if velocity_sense { -state.time } else { state.time },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_oscillator_parity() {
        let s = PhaseState::new(alloc::vec![1.0, 2.0], alloc::vec![3.0, 4.0], 0.5).unwrap();
        let p = apply_parity(&s);
        assert_eq!(p.coords, [-2.0, -1.0]);
        assert_eq!(p.momenta, [-4.0, -3.0]);
        let t = apply_time_reversal(&s, false);
        assert_eq!(t.coords, s.coords);
        assert_eq!(t.momenta, [-3.0, -4.0]);
        assert_eq!(t.time, 0.5);
        assert_eq!(apply_time_reversal(&s, true).time, -0.5);
    }

    #[test]
    fn odd_center_flips_sign() {
        let s = PhaseState::new(alloc::vec![1.0, 2.0, 3.0], alloc::vec![0.0; 3], 0.0).unwrap();
        assert_eq!(apply_parity(&s).coords, [-3.0, -2.0, -1.0]);
    }
}
