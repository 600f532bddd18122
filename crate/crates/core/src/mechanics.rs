//! Two flexural eigenmodes driven by an in-plane force.
//!
//! Phasors follow the e^{−iΩt} convention: a phasor δr[Ω] describes the real
//! trajectory δr(t) = Re(δr[Ω]·e^{−iΩt}). With 1/χ = M(Ω_m² − Ω² − iΩΓ_m) the
//! response lags the force, and arg χ passes through +π/2 at resonance in
//! this convention (the displacement trails by a quarter period).

use num_complex::Complex64;

use crate::constants::{BOLTZMANN, HBAR, TWO_PI};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::PlaneVector;

/// One flexural eigenmode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeParams {
    /// Ω_m, rad/s.
    pub frequency: f64,
    /// Γ_m, rad/s.
    pub damping: f64,
    /// M_eff, kg.
    pub mass: f64,
    /// e_m, unit vector in the oscillation plane.
    pub orientation: PlaneVector,
}

impl ModeParams {
    /// Builds a mode from frequencies in Hz and an orientation angle (rad)
    /// measured from e₁.
    pub fn from_hz(frequency_hz: f64, damping_hz: f64, mass: f64, angle: f64) -> Self {
        Self {
            frequency: TWO_PI * frequency_hz,
            damping: TWO_PI * damping_hz,
            mass,
            orientation: PlaneVector::new(angle.cos(), angle.sin()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.frequency > 0.0 && self.frequency.is_finite()) {
            return Err(Error::param("mechanics.frequency", "must be > 0"));
        }
        if !(self.damping > 0.0 && self.damping.is_finite()) {
            return Err(Error::param("mechanics.damping", "must be > 0"));
        }
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return Err(Error::param("mechanics.m_eff", "must be > 0"));
        }
        if (self.orientation.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::param("mechanics.orientation", "must be a unit vector"));
        }
        Ok(())
    }
}

/// The pair of orthogonal eigenmodes spanning the oscillation plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModePair(pub [ModeParams; 2]);

impl ModePair {
    pub fn new(modes: [ModeParams; 2]) -> Result<Self> {
        for m in &modes {
            m.validate()?;
        }
        if modes[0].orientation.dot(&modes[1].orientation).abs() > 1e-9 {
            return Err(Error::param("mechanics.orientation", "eigenmodes must be orthogonal"));
        }
        Ok(Self(modes))
    }

    pub fn iter(&self) -> impl Iterator<Item = &ModeParams> {
        self.0.iter()
    }
}

/// Coherent force drive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveSpec {
    /// δF, N.
    pub force: f64,
    /// e_F, unit vector in the oscillation plane.
    pub orientation: PlaneVector,
    /// Ω_d, rad/s.
    pub frequency: f64,
    /// φ, rad.
    pub phase: f64,
}

impl DriveSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.force >= 0.0 && self.force.is_finite()) {
            return Err(Error::param("drive.force", "must be >= 0"));
        }
        if (self.orientation.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::param("drive.orientation", "must be a unit vector"));
        }
        if !(self.frequency >= 0.0 && self.frequency.is_finite()) {
            return Err(Error::param("drive.frequency", "must be >= 0"));
        }
        Ok(())
    }

    pub fn at_frequency(&self, frequency: f64) -> Self {
        Self { frequency, ..*self }
    }
}

/// Complex in-plane displacement, components along (e₁, e₂), meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanePhasor(pub [Complex64; 2]);

impl PlanePhasor {
    pub fn zero() -> Self {
        Self([Complex64::new(0.0, 0.0); 2])
    }

    /// δr·v for a real plane vector.
    pub fn project(&self, v: &PlaneVector) -> Complex64 {
        self.0[0] * v.x + self.0[1] * v.y
    }

    /// Hermitian norm (|c₁|² + |c₂|²)^{1/2}: the semi-major/minor axes of the
    /// trajectory ellipse satisfy a² + b² = |δr|².
    pub fn norm(&self) -> f64 {
        (self.0[0].norm_sqr() + self.0[1].norm_sqr()).sqrt()
    }

    pub fn scale(&self, k: f64) -> Self {
        Self([self.0[0] * k, self.0[1] * k])
    }

    /// Real displacement at time t.
    pub fn at(&self, omega: f64, t: f64) -> PlaneVector {
        let rot = Complex64::from_polar(1.0, -omega * t);
        PlaneVector::new((self.0[0] * rot).re, (self.0[1] * rot).re)
    }
}

/// χ_m[Ω] = 1/[M_eff(Ω_m² − Ω² − iΩΓ_m)], m/N.
pub fn susceptibility(mode: &ModeParams, omega: f64) -> Complex64 {
    let inv = Complex64::new(
        mode.mass * (mode.frequency * mode.frequency - omega * omega),
        -mode.mass * omega * mode.damping,
    );
    inv.inv()
}

/// δr[Ω_d] = Σ_m χ_m[Ω_d]·(δF e^{iφ} e_F·e_m)·e_m.
pub fn driven_response(modes: &ModePair, drive: &DriveSpec) -> PlanePhasor {
    let force = Complex64::from_polar(drive.force, drive.phase);
    let mut out = [Complex64::new(0.0, 0.0); 2];
    for mode in modes.iter() {
        let amp = susceptibility(mode, drive.frequency) * force * drive.orientation.dot(&mode.orientation);
        out[0] += amp * mode.orientation.x;
        out[1] += amp * mode.orientation.y;
    }
    PlanePhasor(out)
}

/// Force magnitude giving |δr[Ω_d]| = `amplitude` for the drive's orientation
/// and frequency.
pub fn force_for_amplitude(modes: &ModePair, drive: &DriveSpec, amplitude: f64) -> Result<f64> {
    let unit = driven_response(modes, &DriveSpec { force: 1.0, ..*drive }).norm();
    if !(unit > 0.0) {
        return Err(Error::param("drive.orientation", "force does not couple to either mode"));
    }
    Ok(amplitude / unit)
}

/// δr(t) = Re(δr[Ω_d]·e^{−iΩ_d t}) at each requested time.
pub fn trajectory_samples(phasor: &PlanePhasor, omega: f64, times: &[f64]) -> Vec<PlaneVector> {
    times.iter().map(|&t| phasor.at(omega, t)).collect()
}

/// Response of the drive swept over `frequencies` (rad/s) at fixed force.
pub fn response_sweep(exec: Execution, modes: &ModePair, drive: &DriveSpec, frequencies: &[f64]) -> Vec<PlanePhasor> {
    exec.map(frequencies.len(), |k| driven_response(modes, &drive.at_frequency(frequencies[k])))
}

/// Δx_th = (k_B T / M_eff Ω_m²)^{1/2}, m.
pub fn thermal_spread(mode: &ModeParams, temperature: f64) -> Result<f64> {
    if !(temperature >= 0.0) {
        return Err(Error::param("mechanics.temperature", "must be >= 0"));
    }
    Ok((BOLTZMANN * temperature / (mode.mass * mode.frequency * mode.frequency)).sqrt())
}

/// Δx_q = (ħ / 2 M_eff Ω_m)^{1/2}, m.
pub fn zero_point(mode: &ModeParams) -> f64 {
    (HBAR / (2.0 * mode.mass * mode.frequency)).sqrt()
}
