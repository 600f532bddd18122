//! Rotating-frame Bloch equations of the microwave-dressed qubit under
//! mechanical parametric modulation.
//!
//! In the frame rotating with the microwave (RWA), the qubit sees a static
//! Rabi field Ω_R along x and a time-dependent detuning
//! δ(t) = Δ_mw + δω₀·cos(Ω_d t + φ) along z:
//!
//! ```text
//! ds_x/dt = −δ(t)·s_y − Γ₂·s_x
//! ds_y/dt =  δ(t)·s_x − Ω_R·s_z − Γ₂·s_y
//! ds_z/dt =  Ω_R·s_y − Γ₁·(s_z − s_z^eq)
//! ```
//!
//! All rates are angular (rad/s). Integration is classical fixed-step RK4 so
//! that output grids are exactly uniform.

use std::ops::{Add, Mul};

use crate::constants::TWO_PI;
use crate::error::{Error, Result};

/// Bloch vector (⟨σ_x⟩, ⟨σ_y⟩, ⟨σ_z⟩).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BlochState {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochState {
    pub const GROUND: BlochState = BlochState { x: 0.0, y: 0.0, z: 1.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

impl Add for BlochState {
    type Output = BlochState;
    fn add(self, o: BlochState) -> BlochState {
        BlochState::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Mul<f64> for BlochState {
    type Output = BlochState;
    fn mul(self, k: f64) -> BlochState {
        BlochState::new(self.x * k, self.y * k, self.z * k)
    }
}

/// Longitudinal and transverse relaxation, rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Relaxation {
    pub gamma1: f64,
    pub gamma2: f64,
    /// Equilibrium s_z the population relaxes toward.
    pub equilibrium: f64,
}

impl Relaxation {
    pub const NONE: Relaxation = Relaxation { gamma1: 0.0, gamma2: 0.0, equilibrium: 1.0 };

    /// Γ₁ = Γ₂ = 2π·Γ_spin, relaxing toward s_z = +1.
    pub fn from_decay_rate_hz(gamma_spin: f64) -> Self {
        let g = TWO_PI * gamma_spin;
        Self { gamma1: g, gamma2: g, equilibrium: 1.0 }
    }
}

/// One Rabi window: all frequencies angular (rad/s), times in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RabiRun {
    pub rabi_frequency: f64,
    pub detuning: f64,
    pub modulation_depth: f64,
    pub drive_frequency: f64,
    pub phase: f64,
    pub relaxation: Relaxation,
    pub duration: f64,
    pub dt: f64,
    pub sample_stride: usize,
    pub initial: BlochState,
}

impl RabiRun {
    /// Resonant Rabi window with no modulation and no decay; callers adjust
    /// the remaining fields with struct update syntax.
    pub fn resonant(rabi_frequency: f64, duration: f64, dt: f64) -> Self {
        Self {
            rabi_frequency,
            detuning: 0.0,
            modulation_depth: 0.0,
            drive_frequency: rabi_frequency,
            phase: 0.0,
            relaxation: Relaxation::NONE,
            duration,
            dt,
            sample_stride: 1,
            initial: BlochState::GROUND,
        }
    }

    /// Fastest angular rate the step must resolve.
    pub fn fastest_rate(&self) -> f64 {
        self.rabi_frequency
            .abs()
            .max(self.drive_frequency.abs())
            .max(self.modulation_depth.abs())
            .max(self.detuning.abs())
    }

    pub fn steps(&self) -> usize {
        (self.duration / self.dt).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::param("dynamics.dt", "must be > 0"));
        }
        if !(self.duration >= 0.0 && self.duration.is_finite()) {
            return Err(Error::param("dynamics.duration", "must be >= 0"));
        }
        if self.sample_stride == 0 {
            return Err(Error::param("dynamics.sample_stride", "must be >= 1"));
        }
        let r = &self.relaxation;
        if !(r.gamma1 >= 0.0 && r.gamma2 >= 0.0) {
            return Err(Error::param("dynamics.relaxation", "rates must be >= 0"));
        }
        let cycles_per_step = self.dt * self.fastest_rate() / TWO_PI;
        if cycles_per_step > 0.02 * (1.0 + 1e-12) {
            return Err(Error::StepTooLarge { dt: self.dt, steps_per_cycle: 1.0 / cycles_per_step });
        }
        if self.drive_frequency > 0.0 && self.duration < 10.0 * TWO_PI / self.drive_frequency * (1.0 - 1e-12) {
            return Err(Error::param("dynamics.duration", "must span at least 10 drive periods"));
        }
        Ok(())
    }
}

/// δ(t) = Δ_mw + δω₀·cos(Ω_d t + φ), rad/s.
pub fn modulation_waveform(run: &RabiRun, t: f64) -> f64 {
    run.detuning + run.modulation_depth * (run.drive_frequency * t + run.phase).cos()
}

pub fn bloch_derivative(s: &BlochState, run: &RabiRun, t: f64) -> BlochState {
    derivative(s, run, modulation_waveform(run, t))
}

#[inline]
fn derivative(s: &BlochState, run: &RabiRun, delta: f64) -> BlochState {
    let r = &run.relaxation;
    let w = run.rabi_frequency;
    BlochState {
        x: -delta * s.y - r.gamma2 * s.x,
        y: delta * s.x - w * s.z - r.gamma2 * s.y,
        z: w * s.y - r.gamma1 * (s.z - r.equilibrium),
    }
}

#[inline]
fn rk4_step(s: BlochState, run: &RabiRun, t: f64, h: f64) -> BlochState {
    let mid = modulation_waveform(run, t + 0.5 * h);
    let k1 = derivative(&s, run, modulation_waveform(run, t));
    let k2 = derivative(&(s + k1 * (0.5 * h)), run, mid);
    let k3 = derivative(&(s + k2 * (0.5 * h)), run, mid);
    let k4 = derivative(&(s + k3 * h), run, modulation_waveform(run, t + h));
    s + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

/// Uniformly sampled Bloch trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub states: Vec<BlochState>,
}

impl TimeSeries {
    pub fn sz(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.z).collect()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn sample_interval(&self) -> Option<f64> {
        (self.times.len() >= 2).then(|| self.times[1] - self.times[0])
    }
}

/// Integrates `steps` RK4 steps of signed size `h` from (`t0`, `state`),
/// recording every `stride`-th state including the first and last.
pub fn integrate_span(
    run: &RabiRun,
    state: BlochState,
    t0: f64,
    h: f64,
    steps: usize,
    stride: usize,
) -> TimeSeries {
    let stride = stride.max(1);
    let capacity = steps / stride + 2;
    let mut times = Vec::with_capacity(capacity);
    let mut states = Vec::with_capacity(capacity);
    let mut s = state;
    times.push(t0);
    states.push(s);
    for k in 0..steps {
        // Times are rebuilt from the index to avoid accumulated rounding.
        let t = t0 + k as f64 * h;
        s = rk4_step(s, run, t, h);
        if (k + 1) % stride == 0 {
            times.push(t0 + (k + 1) as f64 * h);
            states.push(s);
        }
    }
    TimeSeries { times, states }
}

/// Integrates a Rabi window from its initial state over [0, duration].
pub fn integrate_rabi(run: &RabiRun) -> Result<TimeSeries> {
    run.validate()?;
    Ok(integrate_span(run, run.initial, 0.0, run.dt, run.steps(), run.sample_stride))
}

/// Largest |s_z| difference between integrations at dt and dt/2 on the shared
/// sample grid.
pub fn halve_step_check(run: &RabiRun) -> Result<f64> {
    if run.duration == 0.0 {
        return Ok(0.0);
    }
    run.validate()?;
    let coarse = integrate_span(run, run.initial, 0.0, run.dt, run.steps(), run.sample_stride);
    let fine = integrate_span(run, run.initial, 0.0, 0.5 * run.dt, 2 * run.steps(), 2 * run.sample_stride);
    Ok(coarse
        .states
        .iter()
        .zip(&fine.states)
        .map(|(a, b)| (a.z - b.z).abs())
        .fold(0.0, f64::max))
}
