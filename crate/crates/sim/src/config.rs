//! TOML experiment description, validated into a fully resolved [`SystemConfig`].
//!
//! Every quantity is in SI units with frequencies in Hz; angles carry a `_deg`
//! suffix. Missing optional keys are filled with documented defaults and the
//! resolved form is what gets hashed.

use std::fmt;
use std::path::Path;

use mollow_core::constants::{NV_GYROMAGNETIC_RATIO, NV_ZERO_FIELD_SPLITTING};
use mollow_core::spectral::Window;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Issue {
    pub path: String,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{} validation error(s): {}", .0.len(), .0.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("; "))]
    Validation(Vec<Issue>),
}

type Vec3 = [f64; 3];

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    magnet: RawMagnet,
    #[serde(default)]
    qubit: RawQubit,
    #[serde(default)]
    mechanics: RawMechanics,
    #[serde(default)]
    coupling: RawCoupling,
    #[serde(default)]
    drive: RawDrive,
    #[serde(default)]
    sweep: RawSweep,
    #[serde(default)]
    dynamics: RawDynamics,
    #[serde(default)]
    analysis: RawAnalysis,
    #[serde(default)]
    maps: RawMaps,
    #[serde(default)]
    output: RawOutput,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMagnet {
    radius: Option<f64>,
    remanence: Option<f64>,
    moment: Option<Vec3>,
    easy_axis: Option<Vec3>,
    position: Option<Vec3>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawQubit {
    zero_field_splitting: Option<f64>,
    gyromagnetic_ratio: Option<f64>,
    axis: Option<Vec3>,
    branch: Option<String>,
    position: Option<Vec3>,
    standoff: Option<f64>,
    target_field: Option<f64>,
    target_coupling_mhz_per_nm: Option<f64>,
    decay_rate: Option<f64>,
    contrast: Option<f64>,
    linewidth: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMechanics {
    m_eff: Option<f64>,
    temperature: Option<f64>,
    e1: Option<Vec3>,
    e2: Option<Vec3>,
    #[serde(default)]
    modes: Vec<RawMode>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMode {
    frequency: Option<f64>,
    damping: Option<f64>,
    angle_deg: Option<f64>,
    m_eff: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCoupling {
    source: Option<String>,
    step: Option<f64>,
    magnitude_mhz_per_nm: Option<f64>,
    angle_deg: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDrive {
    frequency: Option<f64>,
    force_angle_deg: Option<f64>,
    force: Option<f64>,
    amplitude: Option<f64>,
    phase_deg: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    start: Option<f64>,
    stop: Option<f64>,
    points: Option<usize>,
    force: Option<f64>,
    peak_modulation: Option<f64>,
    simulate: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDynamics {
    rabi_offset: Option<f64>,
    detuning: Option<f64>,
    modulation_depth: Option<f64>,
    phase_deg: Option<f64>,
    average_phases: Option<bool>,
    duration: Option<f64>,
    dt: Option<f64>,
    sample_stride: Option<usize>,
    gamma1: Option<f64>,
    gamma2: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAnalysis {
    pad_factor: Option<usize>,
    search_band: Option<f64>,
    window: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMaps {
    origin: Option<Vec3>,
    u: Option<Vec3>,
    v: Option<Vec3>,
    nu: Option<usize>,
    nv: Option<usize>,
    u_range: Option<[f64; 2]>,
    v_range: Option<[f64; 2]>,
    mw_frequencies: Option<Vec<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MagnetConfig {
    pub radius: f64,
    pub remanence: f64,
    /// Explicit moment, A·m²; overrides the remanence calibration.
    pub moment: Option<Vec3>,
    pub easy_axis: Vec3,
    pub position: Vec3,
}

/// How the qubit rest position r₀ is fixed.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    Position(Vec3),
    /// Distance from the magnet center along the easy axis.
    Standoff(f64),
    /// On-axis point where |B| equals this value, T.
    TargetField(f64),
    /// On-axis point where γ·|∂B/∂z| equals this coupling, MHz/nm.
    TargetCoupling(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QubitConfig {
    pub zero_field_splitting: f64,
    pub gyromagnetic_ratio: f64,
    pub axis: Vec3,
    pub branch: String,
    pub placement: Placement,
    pub decay_rate: f64,
    pub contrast: f64,
    pub linewidth: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeConfig {
    pub frequency: f64,
    pub damping: f64,
    pub angle_deg: f64,
    pub m_eff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MechanicsConfig {
    pub temperature: f64,
    pub e1: Vec3,
    pub e2: Vec3,
    pub modes: [ModeConfig; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingConfig {
    /// Finite-difference gradient of the qubit frequency at r₀.
    Magnet { step: f64 },
    Explicit { magnitude_mhz_per_nm: f64, angle_deg: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Excitation {
    Force(f64),
    /// Target |δr| at the drive frequency, m.
    Amplitude(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DriveConfig {
    pub frequency: f64,
    pub force_angle_deg: f64,
    pub excitation: Excitation,
    pub phase_deg: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepForce {
    Force(f64),
    /// Scale δF so the largest δω₀/2π on the grid equals this, Hz.
    PeakModulation(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub force: SweepForce,
    pub simulate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DynamicsConfig {
    pub rabi_offset: f64,
    pub detuning: f64,
    pub modulation_depth: Option<f64>,
    pub phase_deg: f64,
    pub average_phases: bool,
    pub duration: f64,
    pub dt: f64,
    pub sample_stride: usize,
    pub gamma1: f64,
    pub gamma2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisConfig {
    pub pad_factor: usize,
    pub search_band: f64,
    pub window: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MapsConfig {
    pub origin: Vec3,
    pub u: Vec3,
    pub v: Vec3,
    pub nu: usize,
    pub nv: usize,
    pub u_range: [f64; 2],
    pub v_range: [f64; 2],
    pub mw_frequencies: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SystemConfig {
    pub magnet: MagnetConfig,
    pub qubit: QubitConfig,
    pub mechanics: MechanicsConfig,
    pub coupling: CouplingConfig,
    pub drive: DriveConfig,
    pub sweep: SweepConfig,
    pub dynamics: DynamicsConfig,
    pub analysis: AnalysisConfig,
    pub maps: MapsConfig,
    /// Output location does not change results and stays out of the hash.
    #[serde(skip)]
    pub output_dir: Option<String>,
}

impl SystemConfig {
    /// SHA-256 of the canonical JSON form of the resolved config.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(&canonical))
    }

    pub fn window(&self) -> Window {
        match self.analysis.window.as_str() {
            "rectangular" => Window::Rectangular,
            _ => Window::Hann,
        }
    }
}

pub fn load_config(path: &Path) -> Result<SystemConfig, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<SystemConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    let mut v = Validator::default();
    let cfg = resolve(raw, &mut v);
    if v.issues.is_empty() {
        Ok(cfg)
    } else {
        Err(ConfigError::Validation(v.issues))
    }
}

#[derive(Default)]
struct Validator {
    issues: Vec<Issue>,
}

impl Validator {
    fn fail(&mut self, path: &str, message: impl Into<String>) {
        self.issues.push(Issue { path: path.to_string(), message: message.into() });
    }

    fn require(&mut self, path: &str, value: Option<f64>) -> f64 {
        match value {
            Some(x) if x.is_finite() => x,
            Some(_) => {
                self.fail(path, "must be finite");
                f64::NAN
            }
            None => {
                self.fail(path, "is required");
                f64::NAN
            }
        }
    }

    fn positive(&mut self, path: &str, value: f64) -> f64 {
        if !(value > 0.0 && value.is_finite()) {
            self.fail(path, format!("must be > 0, got {value}"));
        }
        value
    }

    fn non_negative(&mut self, path: &str, value: f64) -> f64 {
        if !(value >= 0.0 && value.is_finite()) {
            self.fail(path, format!("must be >= 0, got {value}"));
        }
        value
    }

    fn finite(&mut self, path: &str, value: f64) -> f64 {
        if !value.is_finite() {
            self.fail(path, "must be finite");
        }
        value
    }

    fn vector(&mut self, path: &str, value: Vec3, nonzero: bool) -> Vec3 {
        if value.iter().any(|x| !x.is_finite()) {
            self.fail(path, "components must be finite");
        } else if nonzero && value.iter().all(|&x| x == 0.0) {
            self.fail(path, "must be non-zero");
        }
        value
    }
}

fn resolve(raw: RawConfig, v: &mut Validator) -> SystemConfig {
    let magnet = resolve_magnet(raw.magnet, v);
    let qubit = resolve_qubit(raw.qubit, v);
    let mechanics = resolve_mechanics(raw.mechanics, v);
    let coupling = resolve_coupling(raw.coupling, v);
    let drive = resolve_drive(raw.drive, v);
    let sweep = resolve_sweep(raw.sweep, &mechanics, v);
    let dynamics = resolve_dynamics(raw.dynamics, &qubit, v);
    let analysis = resolve_analysis(raw.analysis, v);
    let maps = resolve_maps(raw.maps, &magnet, v);
    let cfg = SystemConfig {
        magnet,
        qubit,
        mechanics,
        coupling,
        drive,
        sweep,
        dynamics,
        analysis,
        maps,
        output_dir: raw.output.dir,
    };
    check_step(&cfg, v);
    cfg
}

fn resolve_magnet(raw: RawMagnet, v: &mut Validator) -> MagnetConfig {
    let radius = v.require("magnet.radius", raw.radius);
    v.positive("magnet.radius", radius);
    let remanence = v.non_negative("magnet.remanence", raw.remanence.unwrap_or(1.4));
    let moment = raw.moment.map(|m| v.vector("magnet.moment", m, true));
    if moment.is_some() && raw.remanence.is_some() {
        v.fail("magnet.moment", "give either moment or remanence, not both");
    }
    MagnetConfig {
        radius,
        remanence,
        moment,
        easy_axis: v.vector("magnet.easy_axis", raw.easy_axis.unwrap_or([0.0, 0.0, 1.0]), true),
        position: v.vector("magnet.position", raw.position.unwrap_or([0.0; 3]), false),
    }
}

fn resolve_qubit(raw: RawQubit, v: &mut Validator) -> QubitConfig {
    let d = v.positive("qubit.zero_field_splitting", raw.zero_field_splitting.unwrap_or(NV_ZERO_FIELD_SPLITTING));
    let g = v.positive("qubit.gyromagnetic_ratio", raw.gyromagnetic_ratio.unwrap_or(NV_GYROMAGNETIC_RATIO));
    let branch = raw.branch.unwrap_or_else(|| "minus".into());
    if branch != "minus" && branch != "plus" {
        v.fail("qubit.branch", format!("must be \"minus\" or \"plus\", got {branch:?}"));
    }
    let mut placements = Vec::new();
    if let Some(p) = raw.position {
        placements.push(Placement::Position(v.vector("qubit.position", p, false)));
    }
    if let Some(s) = raw.standoff {
        placements.push(Placement::Standoff(v.positive("qubit.standoff", s)));
    }
    if let Some(b) = raw.target_field {
        placements.push(Placement::TargetField(v.positive("qubit.target_field", b)));
    }
    if let Some(c) = raw.target_coupling_mhz_per_nm {
        placements.push(Placement::TargetCoupling(v.positive("qubit.target_coupling_mhz_per_nm", c)));
    }
    let placement = match placements.len() {
        1 => placements.remove(0),
        0 => {
            v.fail("qubit.position", "one of position, standoff, target_field, target_coupling_mhz_per_nm is required");
            Placement::Position([0.0; 3])
        }
        _ => {
            v.fail("qubit.position", "position, standoff, target_field and target_coupling_mhz_per_nm are exclusive");
            placements.remove(0)
        }
    };
    let contrast = raw.contrast.unwrap_or(0.3);
    if !(0.0..=1.0).contains(&contrast) {
        v.fail("qubit.contrast", format!("must lie in [0, 1], got {contrast}"));
    }
    QubitConfig {
        zero_field_splitting: d,
        gyromagnetic_ratio: g,
        axis: v.vector("qubit.axis", raw.axis.unwrap_or([0.0, 0.0, 1.0]), true),
        branch,
        placement,
        decay_rate: v.non_negative("qubit.decay_rate", raw.decay_rate.unwrap_or(100e3)),
        contrast,
        linewidth: v.positive("qubit.linewidth", raw.linewidth.unwrap_or(4e6)),
    }
}

fn resolve_mechanics(raw: RawMechanics, v: &mut Validator) -> MechanicsConfig {
    let shared = raw.m_eff.unwrap_or(1e-15);
    v.positive("mechanics.m_eff", shared);
    if raw.modes.len() != 2 {
        v.fail("mechanics.modes", format!("exactly two modes are required, got {}", raw.modes.len()));
    }
    let mut modes = raw.modes.into_iter().enumerate().map(|(k, m)| {
        let p = format!("mechanics.modes[{k}]");
        let frequency = v.require(&format!("{p}.frequency"), m.frequency);
        v.positive(&format!("{p}.frequency"), frequency);
        let damping = v.require(&format!("{p}.damping"), m.damping);
        v.positive(&format!("{p}.damping"), damping);
        let m_eff = match m.m_eff {
            Some(x) => v.positive(&format!("{p}.m_eff"), x),
            None => shared,
        };
        ModeConfig {
            frequency,
            damping,
            angle_deg: v.finite(&format!("{p}.angle_deg"), m.angle_deg.unwrap_or(if k == 0 { 0.0 } else { 90.0 })),
            m_eff,
        }
    });
    let placeholder = || ModeConfig { frequency: f64::NAN, damping: f64::NAN, angle_deg: 0.0, m_eff: shared };
    let first = modes.next().unwrap_or_else(placeholder);
    let second = modes.next().unwrap_or_else(placeholder);
    drop(modes);
    let gap = (first.angle_deg - second.angle_deg).rem_euclid(180.0);
    if (gap - 90.0).abs() > 1e-6 {
        v.fail("mechanics.modes", "mode orientations must be orthogonal");
    }
    let e1 = v.vector("mechanics.e1", raw.e1.unwrap_or([1.0, 0.0, 0.0]), true);
    let e2 = v.vector("mechanics.e2", raw.e2.unwrap_or([0.0, 0.0, 1.0]), true);
    let dot: f64 = e1.iter().zip(&e2).map(|(a, b)| a * b).sum();
    let n1: f64 = e1.iter().map(|a| a * a).sum::<f64>().sqrt();
    let n2: f64 = e2.iter().map(|a| a * a).sum::<f64>().sqrt();
    if n1 > 0.0 && n2 > 0.0 && (dot / (n1 * n2)).abs() > 1e-9 {
        v.fail("mechanics.e2", "must be orthogonal to mechanics.e1");
    }
    MechanicsConfig {
        temperature: v.non_negative("mechanics.temperature", raw.temperature.unwrap_or(300.0)),
        e1,
        e2,
        modes: [first, second],
    }
}

fn resolve_coupling(raw: RawCoupling, v: &mut Validator) -> CouplingConfig {
    match raw.source.as_deref().unwrap_or("magnet") {
        "magnet" => {
            if raw.magnitude_mhz_per_nm.is_some() || raw.angle_deg.is_some() {
                v.fail("coupling.magnitude_mhz_per_nm", "only used with source = \"explicit\"");
            }
            CouplingConfig::Magnet { step: v.positive("coupling.step", raw.step.unwrap_or(1e-9)) }
        }
        "explicit" => {
            let magnitude = v.require("coupling.magnitude_mhz_per_nm", raw.magnitude_mhz_per_nm);
            v.non_negative("coupling.magnitude_mhz_per_nm", magnitude);
            CouplingConfig::Explicit {
                magnitude_mhz_per_nm: magnitude,
                angle_deg: v.finite("coupling.angle_deg", raw.angle_deg.unwrap_or(90.0)),
            }
        }
        other => {
            v.fail("coupling.source", format!("must be \"magnet\" or \"explicit\", got {other:?}"));
            CouplingConfig::Magnet { step: 1e-9 }
        }
    }
}

fn resolve_drive(raw: RawDrive, v: &mut Validator) -> DriveConfig {
    let frequency = v.require("drive.frequency", raw.frequency);
    v.positive("drive.frequency", frequency);
    let excitation = match (raw.force, raw.amplitude) {
        (Some(f), None) => Excitation::Force(v.non_negative("drive.force", f)),
        (None, Some(a)) => Excitation::Amplitude(v.non_negative("drive.amplitude", a)),
        (None, None) => {
            v.fail("drive.force", "one of force or amplitude is required");
            Excitation::Force(0.0)
        }
        (Some(f), Some(_)) => {
            v.fail("drive.force", "force and amplitude are exclusive");
            Excitation::Force(f)
        }
    };
    DriveConfig {
        frequency,
        force_angle_deg: v.finite("drive.force_angle_deg", raw.force_angle_deg.unwrap_or(45.0)),
        excitation,
        phase_deg: v.finite("drive.phase_deg", raw.phase_deg.unwrap_or(0.0)),
    }
}

fn resolve_sweep(raw: RawSweep, mech: &MechanicsConfig, v: &mut Validator) -> SweepConfig {
    let [a, b] = &mech.modes;
    let lo = a.frequency.min(b.frequency) - 3.0 * a.damping.max(b.damping);
    let hi = a.frequency.max(b.frequency) + 3.0 * a.damping.max(b.damping);
    let start = v.finite("sweep.start", raw.start.unwrap_or(lo));
    let stop = v.finite("sweep.stop", raw.stop.unwrap_or(hi));
    let points = raw.points.unwrap_or(31);
    if points < 2 {
        v.fail("sweep.points", "must be >= 2");
    }
    if !(start > 0.0 && stop > start) {
        v.fail("sweep.stop", format!("need 0 < start < stop, got {start}..{stop}"));
    }
    let force = match (raw.force, raw.peak_modulation) {
        (Some(f), None) => SweepForce::Force(v.non_negative("sweep.force", f)),
        (None, Some(p)) => SweepForce::PeakModulation(v.positive("sweep.peak_modulation", p)),
        (None, None) => SweepForce::PeakModulation(4e6),
        (Some(f), Some(_)) => {
            v.fail("sweep.force", "force and peak_modulation are exclusive");
            SweepForce::Force(f)
        }
    };
    SweepConfig { start, stop, points, force, simulate: raw.simulate.unwrap_or(false) }
}

fn resolve_dynamics(raw: RawDynamics, qubit: &QubitConfig, v: &mut Validator) -> DynamicsConfig {
    let sample_stride = raw.sample_stride.unwrap_or(1);
    if sample_stride == 0 {
        v.fail("dynamics.sample_stride", "must be >= 1");
    }
    DynamicsConfig {
        rabi_offset: v.finite("dynamics.rabi_offset", raw.rabi_offset.unwrap_or(0.0)),
        detuning: v.finite("dynamics.detuning", raw.detuning.unwrap_or(0.0)),
        modulation_depth: raw.modulation_depth.map(|m| v.non_negative("dynamics.modulation_depth", m)),
        phase_deg: v.finite("dynamics.phase_deg", raw.phase_deg.unwrap_or(0.0)),
        average_phases: raw.average_phases.unwrap_or(true),
        duration: v.positive("dynamics.duration", raw.duration.unwrap_or(20e-6)),
        dt: v.positive("dynamics.dt", raw.dt.unwrap_or(1e-9)),
        sample_stride,
        gamma1: v.non_negative("dynamics.gamma1", raw.gamma1.unwrap_or(qubit.decay_rate)),
        gamma2: v.non_negative("dynamics.gamma2", raw.gamma2.unwrap_or(qubit.decay_rate)),
    }
}

fn resolve_analysis(raw: RawAnalysis, v: &mut Validator) -> AnalysisConfig {
    let pad_factor = raw.pad_factor.unwrap_or(8);
    if pad_factor == 0 {
        v.fail("analysis.pad_factor", "must be >= 1");
    }
    let window = raw.window.unwrap_or_else(|| "hann".into());
    if window != "hann" && window != "rectangular" {
        v.fail("analysis.window", format!("must be \"hann\" or \"rectangular\", got {window:?}"));
    }
    AnalysisConfig {
        pad_factor,
        search_band: v.positive("analysis.search_band", raw.search_band.unwrap_or(3.5e6)),
        window,
    }
}

fn resolve_maps(raw: RawMaps, magnet: &MagnetConfig, v: &mut Validator) -> MapsConfig {
    let nu = raw.nu.unwrap_or(101);
    let nv = raw.nv.unwrap_or(101);
    if nu < 2 || nv < 2 {
        v.fail("maps.nu", "grids need at least 2 x 2 points");
    }
    let u_range = raw.u_range.unwrap_or([-20e-6, 20e-6]);
    let v_range = raw.v_range.unwrap_or([12e-6, 52e-6]);
    for (path, r) in [("maps.u_range", u_range), ("maps.v_range", v_range)] {
        if !(r[0].is_finite() && r[1].is_finite() && r[1] > r[0]) {
            v.fail(path, "must be an increasing pair");
        }
    }
    let mw_frequencies = raw.mw_frequencies.unwrap_or_default();
    for (k, f) in mw_frequencies.iter().enumerate() {
        v.positive(&format!("maps.mw_frequencies[{k}]"), *f);
    }
    MapsConfig {
        origin: v.vector("maps.origin", raw.origin.unwrap_or(magnet.position), false),
        u: v.vector("maps.u", raw.u.unwrap_or([1.0, 0.0, 0.0]), true),
        v: v.vector("maps.v", raw.v.unwrap_or([0.0, 0.0, 1.0]), true),
        nu,
        nv,
        u_range,
        v_range,
        mw_frequencies,
    }
}

/// Step-size check for the rates known before any field evaluation.
fn check_step(cfg: &SystemConfig, v: &mut Validator) {
    let d = &cfg.dynamics;
    let drive = cfg.drive.frequency;
    let fastest = [drive, drive + d.rabi_offset, d.detuning, d.modulation_depth.unwrap_or(0.0)]
        .iter()
        .fold(0.0f64, |a, x| a.max(x.abs()));
    if d.dt * fastest > 0.02 * (1.0 + 1e-12) {
        v.fail("dynamics.dt", format!("{} s gives fewer than 50 steps per {fastest} Hz cycle", d.dt));
    }
    if drive > 0.0 && d.duration < 10.0 / drive * (1.0 - 1e-12) {
        v.fail("dynamics.duration", "must span at least 10 drive periods");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const MINIMAL: &str = r#"
        [magnet]
        radius = 9e-6

        [qubit]
        standoff = 20e-6

        [[mechanics.modes]]
        frequency = 5.99e6
        damping = 180e3

        [[mechanics.modes]]
        frequency = 6.29e6
        damping = 190e3

        [drive]
        frequency = 6.29e6
        amplitude = 5e-9
    "#;

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.qubit.zero_field_splitting, 2.870e9);
        assert_eq!(cfg.qubit.gyromagnetic_ratio, 28.0e9);
        assert_eq!(cfg.analysis.pad_factor, 8);
        assert_eq!(cfg.magnet.remanence, 1.4);
        assert_eq!(cfg.mechanics.modes[1].angle_deg, 90.0);
        assert_eq!(cfg.dynamics.gamma1, 100e3);
        assert_eq!(cfg.sweep.points, 31);
    }

    #[test]
    fn negative_mass_names_the_key() {
        let text = MINIMAL.replace("[[mechanics.modes]]\n        frequency = 5.99e6", "[mechanics]\n        m_eff = -1e-15\n\n        [[mechanics.modes]]\n        frequency = 5.99e6");
        match parse_config(&text) {
            Err(ConfigError::Validation(issues)) => {
                assert!(issues.iter().any(|i| i.path == "mechanics.m_eff"), "{issues:?}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn all_violations_are_reported() {
        let text = MINIMAL
            .replace("radius = 9e-6", "radius = -1.0")
            .replace("damping = 190e3", "damping = 0.0")
            .replace("amplitude = 5e-9", "amplitude = 5e-9\n        force = 1e-12");
        let Err(ConfigError::Validation(issues)) = parse_config(&text) else { panic!() };
        let paths: Vec<_> = issues.iter().map(|i| i.path.as_str()).collect();
        assert!(paths.contains(&"magnet.radius"));
        assert!(paths.contains(&"mechanics.modes[1].damping"));
        assert!(paths.contains(&"drive.force"));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = format!("{MINIMAL}\n[analysis]\npadding = 4\n");
        assert!(matches!(parse_config(&text), Err(ConfigError::Parse(_))));
    }

    #[test]
    fn hash_ignores_formatting_but_not_values() {
        let a = parse_config(MINIMAL).unwrap();
        let b = parse_config(&MINIMAL.replace("radius = 9e-6", "radius   =   0.000009 # sphere")).unwrap();
        assert_eq!(a.hash(), b.hash());
        let c = parse_config(&MINIMAL.replace("standoff = 20e-6", "standoff = 21e-6")).unwrap();
        assert_ne!(a.hash(), c.hash());
        assert_eq!(a.hash().len(), 64);
    }

    #[test]
    fn step_limit_checked_at_load() {
        let text = format!("{MINIMAL}\n[dynamics]\ndt = 1e-8\n");
        let Err(ConfigError::Validation(issues)) = parse_config(&text) else { panic!() };
        assert_eq!(issues[0].path, "dynamics.dt");
    }
}
