//! Core-library objects built from a resolved configuration.

use mollow_core::constants::TWO_PI;
use mollow_core::dynamics::{RabiRun, Relaxation};
use mollow_core::grid::{GridSpec, PlaneSpec};
use mollow_core::magnetostatics::{
    on_axis_standoff_for_field, on_axis_standoff_for_gradient, MagnetModel,
};
use mollow_core::mechanics::{force_for_amplitude, DriveSpec, ModePair, ModeParams};
use mollow_core::nv::{coupling_vector_at, Branch, CouplingVector, EsrReadout, QubitModel};
use mollow_core::spectral::{modulation_depth, quadrature_phases, TripletSettings};
use mollow_core::{Error, PlaneVector, Vector3};

use crate::config::{CouplingConfig, Excitation, Placement, SystemConfig};
use crate::error::SimError;

pub struct Model {
    pub magnet: MagnetModel,
    pub qubit: QubitModel,
    pub readout: EsrReadout,
    pub modes: ModePair,
    /// In-plane basis of the oscillation plane, lab frame.
    pub e1: Vector3,
    pub e2: Vector3,
    pub lambda: CouplingVector,
    /// Drive at the configured frequency with δF resolved.
    pub drive: DriveSpec,
}

fn v3(a: [f64; 3]) -> Vector3 {
    Vector3::new(a[0], a[1], a[2])
}

impl Model {
    pub fn build(cfg: &SystemConfig) -> Result<Self, SimError> {
        let m = &cfg.magnet;
        let magnet = match m.moment {
            Some(moment) => MagnetModel::new(v3(moment), v3(m.position), m.radius)?,
            None => MagnetModel::from_remanence(m.radius, m.remanence, v3(m.easy_axis), v3(m.position))?,
        };
        let q = &cfg.qubit;
        let axis = magnet.moment.normalize();
        let r0 = match q.placement {
            Placement::Position(p) => v3(p),
            Placement::Standoff(s) => magnet.position + axis * s,
            Placement::TargetField(b) => magnet.position + axis * on_axis_standoff_for_field(&magnet, b)?,
            Placement::TargetCoupling(c) => {
                let gradient = c * 1e15 / q.gyromagnetic_ratio;
                magnet.position + axis * on_axis_standoff_for_gradient(&magnet, gradient)?
            }
        };
        let qubit = QubitModel {
            zero_field_splitting: q.zero_field_splitting,
            gyromagnetic_ratio: q.gyromagnetic_ratio,
            axis: v3(q.axis).normalize(),
            branch: if q.branch == "plus" { Branch::Plus } else { Branch::Minus },
            rest_position: r0,
            decay_rate: q.decay_rate,
        };
        qubit.validate()?;
        let readout = EsrReadout { base_rate: 1.0, dip_depth: q.contrast, linewidth: q.linewidth };

        let mech = &cfg.mechanics;
        let mode = |k: usize| {
            let c = &mech.modes[k];
            ModeParams::from_hz(c.frequency, c.damping, c.m_eff, c.angle_deg.to_radians())
        };
        let modes = ModePair::new([mode(0), mode(1)])?;
        let e1 = v3(mech.e1).normalize();
        let e2 = v3(mech.e2).normalize();

        let lambda = match cfg.coupling {
            CouplingConfig::Magnet { step } => coupling_vector_at(&qubit, &magnet, &r0, (&e1, &e2), step)?,
            CouplingConfig::Explicit { magnitude_mhz_per_nm, angle_deg } => {
                CouplingVector::from_polar(magnitude_mhz_per_nm, angle_deg.to_radians())
            }
        };

        let d = &cfg.drive;
        let angle = d.force_angle_deg.to_radians();
        let mut drive = DriveSpec {
            force: 0.0,
            orientation: PlaneVector::new(angle.cos(), angle.sin()),
            frequency: TWO_PI * d.frequency,
            phase: d.phase_deg.to_radians(),
        };
        drive.force = match d.excitation {
            Excitation::Force(f) => f,
            Excitation::Amplitude(a) => force_for_amplitude(&modes, &drive, a)?,
        };
        drive.validate()?;
        Ok(Self { magnet, qubit, readout, modes, e1, e2, lambda, drive })
    }

    /// δω₀ for the configured drive (rad/s), unless overridden.
    pub fn modulation_depth(&self, cfg: &SystemConfig) -> f64 {
        match cfg.dynamics.modulation_depth {
            Some(hz) => TWO_PI * hz,
            None => modulation_depth(&self.modes, &self.drive, &self.lambda),
        }
    }
}

pub fn relaxation(cfg: &SystemConfig) -> Relaxation {
    Relaxation {
        gamma1: TWO_PI * cfg.dynamics.gamma1,
        gamma2: TWO_PI * cfg.dynamics.gamma2,
        equilibrium: 1.0,
    }
}

pub fn triplet_settings(cfg: &SystemConfig) -> TripletSettings {
    let d = &cfg.dynamics;
    TripletSettings {
        rabi_offset: d.rabi_offset,
        detuning: d.detuning,
        relaxation: relaxation(cfg),
        duration: d.duration,
        dt: d.dt,
        sample_stride: d.sample_stride,
        pad_factor: cfg.analysis.pad_factor,
        window: cfg.window(),
        search_band: cfg.analysis.search_band,
        phases: if d.average_phases { quadrature_phases() } else { vec![d.phase_deg.to_radians()] },
    }
}

/// Single Rabi window at the configured drive, phase and depth (rad/s).
pub fn rabi_run(cfg: &SystemConfig, depth: f64) -> RabiRun {
    let mut run = triplet_settings(cfg).run(cfg.drive.frequency, depth, cfg.dynamics.phase_deg.to_radians());
    run.sample_stride = cfg.dynamics.sample_stride;
    run
}

pub fn map_grid(cfg: &SystemConfig) -> Result<(PlaneSpec, GridSpec), Error> {
    let m = &cfg.maps;
    let plane = PlaneSpec::new(v3(m.origin), v3(m.u), v3(m.v))?;
    let grid = GridSpec::new(m.nu, m.nv, (m.u_range[0], m.u_range[1]), (m.v_range[0], m.v_range[1]))?;
    Ok((plane, grid))
}

/// Drive frequencies of the bimodal sweep, Hz.
pub fn sweep_grid(cfg: &SystemConfig) -> Vec<f64> {
    let s = &cfg.sweep;
    let step = (s.stop - s.start) / (s.points - 1) as f64;
    (0..s.points).map(|k| s.start + step * k as f64).collect()
}
