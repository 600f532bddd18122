use std::f64::consts::{FRAC_PI_2, PI};

use mollow_core::constants::TWO_PI;
use mollow_core::dynamics::{integrate_rabi, RabiRun, Relaxation};
use mollow_core::grid::{GridSpec, PlaneSpec};
use mollow_core::magnetostatics::{dipole_field, dipole_gradient, field_map, MagnetModel};
use mollow_core::mechanics::{driven_response, DriveSpec, ModePair, ModeParams};
use mollow_core::nv::{diagonalize, readout_contrast, spin_hamiltonian_frequencies, CouplingVector, QubitModel};
use mollow_core::spectral::{modulation_depth, mollow_splitting};
use mollow_core::{Execution, PlaneVector, Vector3};
use nalgebra::{Rotation3, Unit};
use proptest::prelude::*;

fn magnet() -> MagnetModel {
    MagnetModel::from_remanence(9e-6, 1.4, Vector3::new(0.2, -0.1, 1.0), Vector3::new(1e-6, 0.0, -2e-6)).unwrap()
}

fn direction() -> impl Strategy<Value = Vector3> {
    (0.0..PI, 0.0..TWO_PI).prop_map(|(theta, phi)| {
        Vector3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos())
    })
}

fn outside_point() -> impl Strategy<Value = Vector3> {
    (direction(), 10e-6..200e-6).prop_map(|(d, r)| magnet().position + d * r)
}

fn field() -> impl Strategy<Value = Vector3> {
    (direction(), 0.0..0.3).prop_map(|(d, b)| d * b)
}

proptest! {
    #[test]
    fn gradient_is_symmetric_and_traceless(r in outside_point()) {
        let g = dipole_gradient(&magnet(), &r).unwrap();
        prop_assert!(g.asymmetry() < 1e-9);
        prop_assert!(g.relative_trace() < 1e-9);
    }

    #[test]
    fn field_falls_off_as_inverse_cube(d in direction(), r in 10e-6..100e-6) {
        let m = magnet();
        let near = dipole_field(&m, &(m.position + d * r)).unwrap();
        let far = dipole_field(&m, &(m.position + d * (2.0 * r))).unwrap();
        prop_assert!((far * 8.0 - near).norm() <= 1e-12 * near.norm());
    }

    #[test]
    fn eigenvalues_sum_to_trace(b in field()) {
        let q = QubitModel::default();
        let sys = diagonalize(&q, &b);
        let sum: f64 = sys.energies.iter().sum();
        prop_assert!((sum - sys.trace).abs() <= 1e-12 * sys.trace.abs().max(sys.energies.iter().fold(0.0, |a, e| a + e.abs())));
    }

    #[test]
    fn axial_splitting_is_twice_zeeman(bz in -0.3..0.3f64) {
        let q = QubitModel::default();
        let t = spin_hamiltonian_frequencies(&q, &Vector3::new(0.0, 0.0, bz));
        let expected = 2.0 * q.gyromagnetic_ratio * bz.abs();
        prop_assert!((t.upper() - t.lower() - expected).abs() <= 1e-9 * expected.max(q.zero_field_splitting));
    }

    #[test]
    fn contrast_invariant_about_the_axis(b in field(), angle in 0.0..TWO_PI, tilt in direction()) {
        let q = QubitModel { axis: (Vector3::z() + 0.3 * tilt).normalize(), ..Default::default() };
        let rot = Rotation3::from_axis_angle(&Unit::new_normalize(q.axis), angle);
        let a = readout_contrast(&q, &b);
        let c = readout_contrast(&q, &(rot * b));
        prop_assert!((a - c).abs() < 1e-9);
    }

    #[test]
    fn modulation_depth_is_projected_response(
        f1 in 1e6..10e6f64, f2 in 1e6..10e6f64,
        g1 in 1e3..1e6f64, g2 in 1e3..1e6f64,
        mass in 1e-16..1e-13f64,
        theta in 0.0..PI,
        force_angle in 0.0..TWO_PI, force in 1e-14..1e-9f64, phase in 0.0..TWO_PI,
        drive in 0.5e6..12e6f64,
        lambda_mag in 0.01..2.0f64, lambda_angle in 0.0..TWO_PI,
    ) {
        let modes = ModePair::new([
            ModeParams::from_hz(f1, g1, mass, theta),
            ModeParams::from_hz(f2, g2, mass, theta + FRAC_PI_2),
        ]).unwrap();
        let d = DriveSpec {
            force,
            orientation: PlaneVector::new(force_angle.cos(), force_angle.sin()),
            frequency: TWO_PI * drive,
            phase,
        };
        let lambda = CouplingVector::from_polar(lambda_mag, lambda_angle);
        let depth = modulation_depth(&modes, &d, &lambda);
        let projected = driven_response(&modes, &d).project(&lambda.lambda).norm();
        prop_assert!((depth - projected).abs() <= 1e-12 * projected.max(f64::MIN_POSITIVE));
    }

    #[test]
    fn mollow_splitting_even_and_monotone(offset in -5.0..5.0f64, depth in 0.0..10.0f64, extra in 1e-6..5.0f64) {
        let (a, b) = (6.29, 6.29 + offset);
        prop_assert_eq!(mollow_splitting(a, b, depth), mollow_splitting(b, a, depth));
        prop_assert_eq!(mollow_splitting(0.0, offset, depth), mollow_splitting(0.0, -offset, depth));
        prop_assert!(mollow_splitting(a, b, depth + extra) > mollow_splitting(a, b, depth));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bloch_vector_stays_on_or_inside_the_sphere(
        rabi in 1e6..8e6f64,
        depth in 0.0..5e6f64,
        detuning in -3e6..3e6f64,
        phase in 0.0..TWO_PI,
        gamma in prop_oneof![Just(0.0), 1e3..300e3f64],
    ) {
        let drive = TWO_PI * 6.29e6;
        let run = RabiRun {
            rabi_frequency: TWO_PI * rabi,
            detuning: TWO_PI * detuning,
            modulation_depth: TWO_PI * depth,
            drive_frequency: drive,
            phase,
            relaxation: Relaxation::from_decay_rate_hz(gamma),
            ..RabiRun::resonant(drive, 10e-6, 0.5e-9)
        };
        let ts = integrate_rabi(&run).unwrap();
        for s in &ts.states {
            prop_assert!(s.z.abs() <= 1.0 + 1e-6);
            prop_assert!(s.norm() <= 1.0 + 1e-6);
            if gamma == 0.0 {
                prop_assert!((s.norm() - 1.0).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn maps_do_not_depend_on_scheduling(nu in 2usize..40, nv in 2usize..40, z in 12e-6..40e-6f64) {
        let plane = PlaneSpec::xy(Vector3::new(0.0, 0.0, z));
        let grid = GridSpec::new(nu, nv, (-10e-6, 10e-6), (-8e-6, 8e-6)).unwrap();
        let m = MagnetModel::from_remanence(9e-6, 1.4, Vector3::z(), Vector3::zeros()).unwrap();
        let a = field_map(Execution::Sequential, &m, &plane, &grid);
        let b = field_map(Execution::Parallel, &m, &plane, &grid);
        prop_assert_eq!(a.is_ok(), b.is_ok());
        if let (Ok(a), Ok(b)) = (a, b) {
            prop_assert_eq!(a.values, b.values);
        }
    }
}
