use std::f64::consts::FRAC_PI_2;

use mollow_core::constants::TWO_PI;
use mollow_core::mechanics::{
    driven_response, force_for_amplitude, response_sweep, susceptibility, trajectory_samples, DriveSpec, ModePair,
    ModeParams, PlanePhasor,
};
use mollow_core::{Execution, PlaneVector};
use num_complex::Complex64;

fn modes() -> ModePair {
    ModePair::new([
        ModeParams::from_hz(5.99e6, 180e3, 1e-15, 10f64.to_radians()),
        ModeParams::from_hz(6.29e6, 190e3, 1e-15, 100f64.to_radians()),
    ])
    .unwrap()
}

fn drive(frequency_hz: f64) -> DriveSpec {
    DriveSpec {
        force: 1e-12,
        orientation: PlaneVector::new(40f64.to_radians().cos(), 40f64.to_radians().sin()),
        frequency: TWO_PI * frequency_hz,
        phase: 0.0,
    }
}

#[test]
fn susceptibility_peaks_within_one_linewidth() {
    for mode in modes().0 {
        let n = 20001;
        let span = 10.0 * mode.damping;
        let (best, _) = (0..n)
            .map(|k| {
                let w = mode.frequency - span + 2.0 * span * k as f64 / (n - 1) as f64;
                (w, susceptibility(&mode, w).norm())
            })
            .fold((0.0, 0.0), |acc, (w, m)| if m > acc.1 { (w, m) } else { acc });
        assert!((best - mode.frequency).abs() < mode.damping, "peak at {best}");
    }
}

#[test]
fn susceptibility_phase_passes_quadrature_at_resonance() {
    let mode = modes().0[1];
    let at = susceptibility(&mode, mode.frequency);
    assert!((at.arg() - FRAC_PI_2).abs() < 1e-12);
    assert!(at.re.abs() < 1e-12 * at.norm());
    // Continuous sweep: phase climbs monotonically from 0 through π/2 toward π.
    let mut last = susceptibility(&mode, 0.5 * mode.frequency).arg();
    assert!(last > 0.0 && last < 0.1);
    for k in 1..=2000 {
        let w = mode.frequency * (0.5 + k as f64 / 2000.0);
        let phase = susceptibility(&mode, w).arg();
        assert!(phase > last && phase - last < 0.05, "jump at {w}");
        last = phase;
    }
    assert!(last > 3.0);
}

#[test]
fn response_is_linear_in_force() {
    let m = modes();
    for f in [5.5e6, 5.99e6, 6.1e6, 6.29e6, 7e6] {
        let d = drive(f);
        let single = driven_response(&m, &d);
        let double = driven_response(&m, &DriveSpec { force: 2.0 * d.force, ..d });
        for i in 0..2 {
            assert_eq!(double.0[i], single.0[i] * 2.0);
        }
    }
}

#[test]
fn trajectory_is_closed_with_zero_mean() {
    let m = modes();
    let d = drive(6.1e6);
    let phasor = driven_response(&m, &d);
    let period = TWO_PI / d.frequency;
    let n = 256;
    let times: Vec<f64> = (0..=n).map(|k| period * k as f64 / n as f64).collect();
    let path = trajectory_samples(&phasor, d.frequency, &times);
    let scale = phasor.norm();
    assert!((path[0] - path[n]).norm() < 1e-9 * scale);
    let mean = path[..n].iter().fold(PlaneVector::zeros(), |a, p| a + p) / n as f64;
    assert!(mean.norm() < 1e-12 * scale);
}

#[test]
fn quadrature_phasor_traces_a_circle() {
    let r = 5e-9;
    let phasor = PlanePhasor([Complex64::new(r, 0.0), Complex64::new(0.0, r)]);
    let omega = TWO_PI * 6.29e6;
    let times: Vec<f64> = (0..100).map(|k| k as f64 * 1.3e-9).collect();
    for p in trajectory_samples(&phasor, omega, &times) {
        assert!((p.norm() - r).abs() < 1e-12 * r);
    }
}

#[test]
fn between_modes_the_trajectory_is_elliptical() {
    let m = modes();
    let d = drive(6.14e6);
    let phasor = driven_response(&m, &d);
    let period = TWO_PI / d.frequency;
    let radii: Vec<f64> = (0..64)
        .map(|k| phasor.at(d.frequency, period * k as f64 / 64.0).norm())
        .collect();
    let (lo, hi) = radii.iter().fold((f64::MAX, 0.0f64), |(a, b), &r| (a.min(r), b.max(r)));
    assert!(lo > 0.05 * hi, "degenerate line, minor/major = {}", lo / hi);
    assert!(lo < 0.95 * hi);
}

#[test]
fn force_for_amplitude_inverts_the_response() {
    let m = modes();
    let d = drive(5.99e6);
    let force = force_for_amplitude(&m, &d, 5e-9).unwrap();
    let amp = driven_response(&m, &DriveSpec { force, ..d }).norm();
    assert!((amp - 5e-9).abs() < 1e-12 * 5e-9);
}

#[test]
fn sweep_is_execution_independent() {
    let m = modes();
    let d = drive(6e6);
    let freqs: Vec<f64> = (0..301).map(|k| TWO_PI * (5.7e6 + 3e3 * k as f64)).collect();
    let a = response_sweep(Execution::Sequential, &m, &d, &freqs);
    let b = response_sweep(Execution::Parallel, &m, &d, &freqs);
    assert_eq!(a, b);
}
