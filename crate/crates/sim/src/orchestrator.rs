//! Subcommand dispatch: builds the model, runs the requested recipe and emits
//! its tables.

use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use mollow_core::constants::{rad_per_s_per_m_to_mhz_per_nm, TWO_PI};
use mollow_core::dynamics::integrate_rabi;
use mollow_core::magnetostatics::{dipole_field, field_map, FieldSource};
use mollow_core::mechanics::{response_sweep, thermal_spread, zero_point, DriveSpec};
use mollow_core::nv::{
    qubit_frequency, qubit_frequency_map, readout_contrast, resonance_image, spin_hamiltonian_frequencies,
    CouplingVector, QubitModel,
};
use mollow_core::spectral::{
    bimodal_sweep, mollow_resolution_length, mollow_splitting, modulation_depth, quantum_coupling_rate,
    simulate_triplet, thermal_modulation, ForcePolicy, SweepPoint, TripletAnalysis,
};
use mollow_core::{Execution, Vector3};
use serde_json::{json, Value};

use crate::config::{SweepForce, SystemConfig};
use crate::error::SimError;
use crate::model::{map_grid, rabi_run, sweep_grid, triplet_settings, Model};
use crate::output::{num, OutputDir, Written};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Task {
    FieldMap,
    EsrMap,
    MechResponse,
    Rabi,
    Triplet,
    MollowSweep,
    Scales,
    Report,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::FieldMap => "field-map",
            Task::EsrMap => "esr-map",
            Task::MechResponse => "mech-response",
            Task::Rabi => "rabi",
            Task::Triplet => "triplet",
            Task::MollowSweep => "mollow-sweep",
            Task::Scales => "scales",
            Task::Report => "report",
        }
    }
}

/// Provenance recorded alongside the outputs.
#[derive(Debug, Clone, Default)]
pub struct RunInfo {
    pub config_path: String,
    pub config_bytes: Vec<u8>,
    pub threads: Option<usize>,
    pub seed: Option<u64>,
}

fn now() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0)
}

/// Runs one subcommand into `out` and writes `manifest.json` last.
pub fn run_subcommand(
    task: Task,
    cfg: &SystemConfig,
    out: &Path,
    exec: Execution,
    info: &RunInfo,
) -> Result<Vec<Written>, SimError> {
    let started = now();
    let hash = cfg.hash();
    let mut dir = OutputDir::create(out, &hash)?;
    let model = Model::build(cfg)?;
    match task {
        Task::FieldMap => emit_field_map(cfg, &model, exec, &mut dir)?,
        Task::EsrMap => emit_esr_map(cfg, &model, exec, &mut dir)?,
        Task::MechResponse => emit_mech_response(cfg, &model, exec, &mut dir)?,
        Task::Rabi => emit_rabi(cfg, &model, &mut dir)?,
        Task::Triplet => emit_triplet(cfg, &model, exec, &mut dir)?,
        Task::MollowSweep => emit_sweep(cfg, &model, exec, &mut dir)?,
        Task::Scales => emit_scales(cfg, &model, &mut dir)?,
        Task::Report => emit_report(cfg, &model, exec, &mut dir)?,
    }
    let outputs = dir.written().to_vec();
    let manifest = json!({
        "tool": "sim",
        "version": env!("CARGO_PKG_VERSION"),
        "subcommand": task.name(),
        "config_path": info.config_path,
        "config_sha256": hex::encode(<sha2::Sha256 as sha2::Digest>::digest(&info.config_bytes)),
        "threads": info.threads,
        "seed": info.seed,
        "started_unix": started,
        "finished_unix": now(),
        "outputs": outputs,
    });
    dir.json("manifest.json", manifest)?;
    Ok(outputs)
}

fn finite(label: &str, x: f64) -> Result<f64, SimError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(SimError::Numeric(format!("{label} is not finite")))
    }
}

fn vec3(v: &Vector3) -> Value {
    json!([v.x, v.y, v.z])
}

fn grid_json(cfg: &SystemConfig) -> Value {
    let m = &cfg.maps;
    json!({
        "plane": { "origin": m.origin, "u": m.u, "v": m.v },
        "grid": { "nu": m.nu, "nv": m.nv, "u_range": m.u_range, "v_range": m.v_range, "order": "row-major, u fastest" },
    })
}

fn emit_field_map(cfg: &SystemConfig, model: &Model, exec: Execution, dir: &mut OutputDir) -> Result<(), SimError> {
    let (plane, grid) = map_grid(cfg)?;
    let map = field_map(exec, &model.magnet, &plane, &grid)?;
    let rows = (0..grid.len()).map(|k| {
        let r = map.position(k);
        let b = map.values[k];
        vec![num(r.x), num(r.y), num(r.z), num(b.x), num(b.y), num(b.z)]
    });
    dir.csv("field_map.csv", &["x", "y", "z", "Bx", "By", "Bz"], rows)?;
    let mut side = grid_json(cfg);
    side["kind"] = json!("field_map");
    side["units"] = json!({ "x": "m", "y": "m", "z": "m", "B": "T" });
    side["magnet"] = json!({
        "moment": vec3(&model.magnet.moment),
        "position": vec3(&model.magnet.position),
        "radius": model.magnet.radius,
    });
    dir.json("field_map.json", side)
}

fn emit_esr_map(cfg: &SystemConfig, model: &Model, exec: Execution, dir: &mut OutputDir) -> Result<(), SimError> {
    let (plane, grid) = map_grid(cfg)?;
    let source: &dyn FieldSource = &model.magnet;
    let coords = |k: usize| grid.coords(k);
    let xy = |k: usize, v: f64| {
        let (a, b) = coords(k);
        vec![num(a), num(b), num(v)]
    };

    let freq = qubit_frequency_map(exec, &model.qubit, source, &plane, &grid)?;
    dir.csv("qubit_frequency.csv", &["x", "y", "value"], (0..grid.len()).map(|k| xy(k, freq.values[k])))?;
    let contrast = exec.try_map(grid.len(), |k| {
        let (a, b) = coords(k);
        Ok::<_, SimError>(readout_contrast(&model.qubit, &source.field_at(&plane.point(a, b))?))
    })?;
    dir.csv("readout_contrast.csv", &["x", "y", "value"], (0..grid.len()).map(|k| xy(k, contrast[k])))?;

    let mw = if cfg.maps.mw_frequencies.is_empty() {
        vec![qubit_frequency(&model.qubit, &dipole_field(&model.magnet, &model.qubit.rest_position)?)]
    } else {
        cfg.maps.mw_frequencies.clone()
    };
    let mut images = Vec::new();
    for (i, &f) in mw.iter().enumerate() {
        let img = resonance_image(exec, &model.qubit, source, &plane, &grid, &model.readout, f)?;
        let name = format!("esr_{i:02}.csv");
        dir.csv(&name, &["x", "y", "value"], (0..grid.len()).map(|k| xy(k, img.values[k])))?;
        images.push(json!({ "file": name, "mw_frequency_Hz": f }));
    }
    let mut side = grid_json(cfg);
    side["kind"] = json!("esr_map");
    side["units"] = json!({ "x": "m (along u)", "y": "m (along v)", "qubit_frequency": "Hz", "readout_contrast": "1", "esr": "R0 = 1" });
    side["files"] = json!({ "qubit_frequency": "qubit_frequency.csv", "readout_contrast": "readout_contrast.csv", "esr": images });
    side["qubit"] = json!({
        "zero_field_splitting_Hz": model.qubit.zero_field_splitting,
        "gyromagnetic_ratio_Hz_per_T": model.qubit.gyromagnetic_ratio,
        "axis": vec3(&model.qubit.axis),
        "branch": cfg.qubit.branch,
        "contrast": model.readout.dip_depth,
        "linewidth_Hz": model.readout.linewidth,
    });
    dir.json("esr_map.json", side)
}

fn emit_mech_response(cfg: &SystemConfig, model: &Model, exec: Execution, dir: &mut OutputDir) -> Result<(), SimError> {
    let freqs = sweep_grid(cfg);
    let omegas: Vec<f64> = freqs.iter().map(|f| TWO_PI * f).collect();
    let resp = response_sweep(exec, &model.modes, &model.drive, &omegas);
    let rows = freqs.iter().zip(&resp).map(|(f, r)| {
        vec![num(*f), num(r.0[0].re), num(r.0[0].im), num(r.0[1].re), num(r.0[1].im), num(r.norm())]
    });
    dir.csv("mech_response.csv", &["f_Hz", "re_dr1_m", "im_dr1_m", "re_dr2_m", "im_dr2_m", "abs_dr_m"], rows)
}

fn emit_rabi(cfg: &SystemConfig, model: &Model, dir: &mut OutputDir) -> Result<(), SimError> {
    let depth = finite("modulation depth", model.modulation_depth(cfg))?;
    let ts = integrate_rabi(&rabi_run(cfg, depth))?;
    let rows = ts.times.iter().zip(&ts.states).map(|(t, s)| vec![num(*t), num(s.x), num(s.y), num(s.z)]);
    dir.csv("rabi.csv", &["t_s", "s_x", "s_y", "s_z"], rows)
}

fn triplet_row(drive_hz: f64, depth: f64, rabi_offset: f64, a: &TripletAnalysis) -> Vec<String> {
    let fit = &a.fit;
    let predicted = 2.0 * mollow_splitting(drive_hz, drive_hz + rabi_offset, depth / TWO_PI);
    vec![
        num(drive_hz),
        num(depth / TWO_PI),
        num(predicted),
        num(fit.center),
        num(fit.lower),
        num(fit.upper),
        num(fit.separation),
        num(fit.amplitudes[0]),
        num(fit.amplitudes[1]),
        num(fit.amplitudes[2]),
        fit.quality.as_str().to_string(),
    ]
}

const TRIPLET_COLUMNS: [&str; 11] = [
    "f_drive_Hz",
    "delta_omega0_Hz",
    "predicted_separation_Hz",
    "center_Hz",
    "lower_Hz",
    "upper_Hz",
    "separation_Hz",
    "amp_lower",
    "amp_center",
    "amp_upper",
    "quality",
];

fn emit_triplet(cfg: &SystemConfig, model: &Model, exec: Execution, dir: &mut OutputDir) -> Result<(), SimError> {
    let depth = finite("modulation depth", model.modulation_depth(cfg))?;
    let settings = triplet_settings(cfg);
    let f = cfg.drive.frequency;
    let analysis = simulate_triplet(exec, &settings, f, depth)?;
    // Keep the spectrum file to the region that can hold the triplet.
    let f_max = f + 2.0 * settings.search_band;
    let s = &analysis.spectrum;
    let rows = s
        .frequencies
        .iter()
        .zip(&s.magnitude)
        .take_while(|(fr, _)| **fr <= f_max)
        .map(|(fr, m)| vec![num(*fr), num(*m)]);
    dir.csv("spectrum.csv", &["f_Hz", "magnitude"], rows)?;
    dir.csv("triplet.csv", &TRIPLET_COLUMNS, [triplet_row(f, depth, settings.rabi_offset, &analysis)])
}

/// δF for the sweep: either configured or scaled to the requested peak δω₀.
pub fn sweep_force(cfg: &SystemConfig, model: &Model, grid: &[f64]) -> Result<f64, SimError> {
    match cfg.sweep.force {
        SweepForce::Force(f) => Ok(f),
        SweepForce::PeakModulation(peak) => {
            let unit = grid
                .iter()
                .map(|f| {
                    let d = DriveSpec { force: 1.0, frequency: TWO_PI * f, ..model.drive };
                    modulation_depth(&model.modes, &d, &model.lambda)
                })
                .fold(0.0, f64::max);
            if !(unit > 0.0) {
                return Err(SimError::Numeric("drive does not modulate the qubit anywhere on the sweep grid".into()));
            }
            Ok(TWO_PI * peak / unit)
        }
    }
}

pub fn run_sweep(cfg: &SystemConfig, model: &Model, exec: Execution, simulate: bool) -> Result<Vec<SweepPoint>, SimError> {
    let grid = sweep_grid(cfg);
    let force = sweep_force(cfg, model, &grid)?;
    let settings = triplet_settings(cfg);
    Ok(bimodal_sweep(
        exec,
        &model.modes,
        &model.drive,
        ForcePolicy::Constant(force),
        &model.lambda,
        &grid,
        simulate.then_some(&settings),
    )?)
}

fn emit_sweep(cfg: &SystemConfig, model: &Model, exec: Execution, dir: &mut OutputDir) -> Result<(), SimError> {
    let points = run_sweep(cfg, model, exec, cfg.sweep.simulate)?;
    let rows = points.iter().map(|p| {
        let (center, sep, quality) = match &p.fit {
            Some(fit) => (fit.center, fit.separation, fit.quality.as_str()),
            None => (f64::NAN, f64::NAN, "not_simulated"),
        };
        vec![
            num(p.drive),
            num(p.modulation_depth),
            num(p.sideband_lo),
            num(p.sideband_hi),
            num(center),
            num(sep),
            quality.to_string(),
        ]
    });
    dir.csv(
        "mollow_sweep.csv",
        &[
            "f_drive_Hz",
            "delta_omega0_Hz",
            "sideband_lo_Hz",
            "sideband_hi_Hz",
            "fitted_center_Hz",
            "fitted_separation_Hz",
            "quality",
        ],
        rows,
    )
}

/// Interior strict local maxima.
pub fn local_maxima(values: &[f64]) -> Vec<usize> {
    (1..values.len().saturating_sub(1))
        .filter(|&k| values[k] > values[k - 1] && values[k] > values[k + 1])
        .collect()
}

pub struct ScaleRow {
    pub quantity: &'static str,
    pub mode: usize,
    pub value: f64,
    pub unit: &'static str,
}

pub fn scales(cfg: &SystemConfig, model: &Model) -> Result<Vec<ScaleRow>, SimError> {
    let lambda = model.lambda.magnitude();
    let t = cfg.mechanics.temperature;
    let mut rows = vec![ScaleRow {
        quantity: "coupling",
        mode: 0,
        value: rad_per_s_per_m_to_mhz_per_nm(lambda),
        unit: "MHz/nm",
    }];
    for (k, mode) in model.modes.iter().enumerate() {
        let m = k + 1;
        rows.push(ScaleRow { quantity: "thermal_spread", mode: m, value: thermal_spread(mode, t)?, unit: "m" });
        rows.push(ScaleRow { quantity: "zero_point", mode: m, value: zero_point(mode), unit: "m" });
        rows.push(ScaleRow {
            quantity: "thermal_modulation",
            mode: m,
            value: thermal_modulation(lambda, mode, t)? / TWO_PI,
            unit: "Hz",
        });
        rows.push(ScaleRow {
            quantity: "quantum_coupling",
            mode: m,
            value: quantum_coupling_rate(lambda, mode) / TWO_PI,
            unit: "Hz",
        });
    }
    rows.push(ScaleRow {
        quantity: "resolution_length",
        mode: 0,
        value: mollow_resolution_length(model.qubit.decay_rate, lambda)?,
        unit: "m",
    });
    Ok(rows)
}

fn emit_scales(cfg: &SystemConfig, model: &Model, dir: &mut OutputDir) -> Result<(), SimError> {
    let rows = scales(cfg, model)?;
    dir.csv(
        "scales.csv",
        &["quantity", "mode", "value", "unit"],
        rows.iter().map(|r| vec![r.quantity.to_string(), r.mode.to_string(), num(r.value), r.unit.to_string()]),
    )
}

/// Extracted separation against amplitude along e₂ (δω₀ = a·|λ·e₂|).
pub struct Linearity {
    pub amplitudes: Vec<f64>,
    pub separations: Vec<f64>,
    pub depths: Vec<f64>,
    pub slope: f64,
    pub r2: f64,
}

pub fn splitting_linearity(
    cfg: &SystemConfig,
    lambda: &CouplingVector,
    exec: Execution,
    amplitudes: &[f64],
) -> Result<Linearity, SimError> {
    let mut settings = triplet_settings(cfg);
    settings.rabi_offset = 0.0;
    settings.detuning = 0.0;
    let along = lambda.lambda.y.abs();
    let f = cfg.drive.frequency;
    let fits = exec.try_map(amplitudes.len(), |k| {
        simulate_triplet(Execution::Sequential, &settings, f, along * amplitudes[k]).map(|a| a.fit)
    })?;
    let separations: Vec<f64> = fits.iter().map(|fit| fit.separation).collect();
    let (slope, r2) = fit_line(amplitudes, &separations);
    Ok(Linearity {
        amplitudes: amplitudes.to_vec(),
        depths: amplitudes.iter().map(|a| along * a / TWO_PI).collect(),
        separations,
        slope,
        r2,
    })
}

/// Least-squares slope and r² of y against x.
pub fn fit_line(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 })
}

fn emit_report(cfg: &SystemConfig, model: &Model, exec: Execution, dir: &mut OutputDir) -> Result<(), SimError> {
    let r0 = model.qubit.rest_position;
    let b0 = dipole_field(&model.magnet, &r0)?;
    let esr = |b: f64| {
        let t = spin_hamiltonian_frequencies(&QubitModel { ..model.qubit }, &(model.qubit.axis * b));
        json!({ "lower_Hz": t.lower(), "upper_Hz": t.upper() })
    };
    let scale_rows = scales(cfg, model)?;
    let scales_json: Vec<Value> = scale_rows
        .iter()
        .map(|r| json!({ "quantity": r.quantity, "mode": r.mode, "value": r.value, "unit": r.unit }))
        .collect();

    let depth = finite("modulation depth", model.modulation_depth(cfg))?;
    let triplet = simulate_triplet(exec, &triplet_settings(cfg), cfg.drive.frequency, depth)?;
    let fit = triplet.fit;

    let amplitudes: Vec<f64> = (1..=9).map(|k| k as f64 / 1e9).collect();
    let lin = splitting_linearity(cfg, &model.lambda, exec, &amplitudes)?;

    let sweep = run_sweep(cfg, model, exec, false)?;
    let depths: Vec<f64> = sweep.iter().map(|p| p.modulation_depth).collect();
    let maxima: Vec<f64> = local_maxima(&depths).into_iter().map(|k| sweep[k].drive).collect();

    dir.json(
        "report.json",
        json!({
            "working_point": {
                "position_m": vec3(&r0),
                "field_T": vec3(&b0),
                "qubit_frequency_Hz": qubit_frequency(&model.qubit, &b0),
                "readout_contrast": readout_contrast(&model.qubit, &b0),
                "coupling_mhz_per_nm": model.lambda.magnitude_mhz_per_nm(),
                "coupling_e1_mhz_per_nm": rad_per_s_per_m_to_mhz_per_nm(model.lambda.lambda.x),
                "coupling_e2_mhz_per_nm": rad_per_s_per_m_to_mhz_per_nm(model.lambda.lambda.y),
            },
            "esr": { "axial_50mT": esr(0.05), "zero_field": esr(0.0) },
            "scales": scales_json,
            "triplet": {
                "drive_Hz": cfg.drive.frequency,
                "delta_omega0_Hz": depth / TWO_PI,
                "predicted_separation_Hz": 2.0 * mollow_splitting(cfg.drive.frequency, cfg.drive.frequency + cfg.dynamics.rabi_offset, depth / TWO_PI),
                "center_Hz": fit.center,
                "separation_Hz": fit.separation,
                "quality": fit.quality.as_str(),
            },
            "linearity": {
                "amplitudes_m": lin.amplitudes,
                "delta_omega0_Hz": lin.depths,
                "separations_Hz": lin.separations,
                "slope_mhz_per_nm": lin.slope * 1e-15,
                "r2": lin.r2,
            },
            "sweep": {
                "mode_frequencies_Hz": cfg.mechanics.modes.iter().map(|m| m.frequency).collect::<Vec<_>>(),
                "delta_omega0_maxima_Hz": maxima,
            },
        }),
    )
}
