//! Fourier analysis of Rabi traces, triplet extraction and the dressed-state
//! splitting laws.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::constants::TWO_PI;
use crate::dynamics::{integrate_rabi, RabiRun, Relaxation};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::mechanics::{susceptibility, thermal_spread, zero_point, DriveSpec, ModePair, ModeParams};
use crate::nv::CouplingVector;

/// One-sided magnitude spectrum on a uniform frequency grid (Hz).
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub frequencies: Vec<f64>,
    pub magnitude: Vec<f64>,
}

impl Spectrum {
    pub fn resolution(&self) -> f64 {
        self.frequencies[1] - self.frequencies[0]
    }

    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }

    /// Index of the largest magnitude above DC.
    pub fn dominant_bin(&self) -> usize {
        (1..self.len())
            .max_by(|&a, &b| self.magnitude[a].total_cmp(&self.magnitude[b]))
            .unwrap_or(0)
    }

    fn bin_of(&self, f: f64) -> f64 {
        f / self.resolution()
    }
}

/// Taper applied to the mean-subtracted series before the transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Window {
    #[default]
    Rectangular,
    /// sin²(πk/N) over the full record.
    Hann,
}

impl Window {
    fn weights(self, n: usize) -> Vec<f64> {
        match self {
            Window::Rectangular => vec![1.0; n],
            Window::Hann => (0..n)
                .map(|k| {
                    let s = (std::f64::consts::PI * k as f64 / n as f64).sin();
                    s * s
                })
                .collect(),
        }
    }

    /// Mean of the weights; divides out of the magnitude scale.
    fn coherent_gain(self) -> f64 {
        match self {
            Window::Rectangular => 1.0,
            Window::Hann => 0.5,
        }
    }
}

/// Magnitude of the DFT of the mean-subtracted series, zero padded to
/// `pad_factor`·N points. Magnitudes are scaled by 2/N so a tone of amplitude
/// A sampled over whole periods peaks at A.
pub fn rabi_spectrum(times: &[f64], values: &[f64], pad_factor: usize) -> Result<Spectrum> {
    windowed_spectrum(times, values, pad_factor, Window::Rectangular)
}

/// [`rabi_spectrum`] with an explicit taper.
pub fn windowed_spectrum(times: &[f64], values: &[f64], pad_factor: usize, window: Window) -> Result<Spectrum> {
    const MIN_SAMPLES: usize = 64;
    let n = values.len();
    if n < MIN_SAMPLES || times.len() != n {
        return Err(Error::TooFewSamples { len: n.min(times.len()), min: MIN_SAMPLES });
    }
    if pad_factor == 0 {
        return Err(Error::param("analysis.pad_factor", "must be >= 1"));
    }
    let dt = times[1] - times[0];
    if !(dt > 0.0) {
        return Err(Error::NonUniformSampling { index: 1 });
    }
    for k in 1..n {
        // Compare against the index-derived grid so drift is caught too.
        let expected = times[0] + k as f64 * dt;
        if (times[k] - expected).abs() > 1e-9 * dt * (k as f64).max(1.0).sqrt() + 1e-6 * dt {
            return Err(Error::NonUniformSampling { index: k });
        }
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let m = n * pad_factor;
    let weights = window.weights(n);
    let mut buf: Vec<Complex64> = values
        .iter()
        .zip(&weights)
        .map(|(&v, &w)| Complex64::new((v - mean) * w, 0.0))
        .chain(std::iter::repeat(Complex64::new(0.0, 0.0)))
        .take(m)
        .collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    let half = m / 2 + 1;
    let scale = 2.0 / (n as f64 * window.coherent_gain());
    let df = 1.0 / (m as f64 * dt);
    Ok(Spectrum {
        frequencies: (0..half).map(|k| k as f64 * df).collect(),
        magnitude: buf[..half].iter().map(|c| c.norm() * scale).collect(),
    })
}

/// Root-mean-square average of magnitude spectra sharing one frequency grid.
///
/// Averaging power rather than magnitude removes the cross terms between
/// overlapping lines whose relative phase varies across the ensemble.
pub fn average_spectra(spectra: &[Spectrum]) -> Option<Spectrum> {
    let first = spectra.first()?;
    let mut power = vec![0.0; first.len()];
    for s in spectra {
        debug_assert_eq!(s.len(), first.len());
        for (acc, v) in power.iter_mut().zip(&s.magnitude) {
            *acc += v * v;
        }
    }
    let k = 1.0 / spectra.len() as f64;
    let magnitude = power.iter().map(|p| (p * k).sqrt()).collect();
    Some(Spectrum { frequencies: first.frequencies.clone(), magnitude })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitQuality {
    /// Center and both sidebands resolved.
    Resolved,
    /// Fewer than three resolvable maxima; separation reported as 0.
    PeaksNotFound,
}

impl FitQuality {
    pub fn as_str(&self) -> &'static str {
        match self {
            FitQuality::Resolved => "resolved",
            FitQuality::PeaksNotFound => "peaks_not_found",
        }
    }
}

/// Extracted triplet features, Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripletFit {
    pub center: f64,
    pub lower: f64,
    pub upper: f64,
    /// upper − lower.
    pub separation: f64,
    /// Magnitudes of (lower, center, upper).
    pub amplitudes: [f64; 3],
    pub quality: FitQuality,
}

/// Parabolic vertex through bins k−1, k, k+1: (fractional bin, height).
fn quadratic_peak(mag: &[f64], k: usize) -> (f64, f64) {
    if k == 0 || k + 1 >= mag.len() {
        return (k as f64, mag[k]);
    }
    let (y0, y1, y2) = (mag[k - 1], mag[k], mag[k + 1]);
    let a = 0.5 * (y0 + y2) - y1;
    let b = 0.5 * (y2 - y0);
    if a.abs() < f64::EPSILON * y1.abs() {
        return (k as f64, y1);
    }
    let delta = (-b / (2.0 * a)).clamp(-1.0, 1.0);
    (k as f64 + delta, y1 - b * b / (4.0 * a))
}

/// Locates the triplet around `drive_frequency` (Hz) within ±`search_band`.
///
/// The center is the local maximum nearest the drive frequency. Each sideband
/// is the strongest local maximum on its side of the center, ignoring maxima
/// that do not stand above the surrounding trough by `min_prominence` of the
/// center height.
pub fn detect_triplet(spec: &Spectrum, drive_frequency: f64, search_band: f64) -> Result<TripletFit> {
    let lo_f = drive_frequency - search_band;
    let hi_f = drive_frequency + search_band;
    let f_max = *spec.frequencies.last().unwrap_or(&0.0);
    if spec.len() < 3 || !(search_band > 0.0) || lo_f <= 0.0 || hi_f >= f_max {
        return Err(Error::BandOutsideSpectrum { lo: lo_f, hi: hi_f });
    }
    let mag = &spec.magnitude;
    let lo = spec.bin_of(lo_f).ceil() as usize;
    let hi = (spec.bin_of(hi_f).floor() as usize).min(spec.len() - 2);
    let maxima: Vec<usize> = (lo.max(1)..=hi)
        .filter(|&k| mag[k] > mag[k - 1] && mag[k] >= mag[k + 1])
        .collect();

    let not_found = |center: f64, amp: f64| TripletFit {
        center,
        lower: center,
        upper: center,
        separation: 0.0,
        amplitudes: [0.0, amp, 0.0],
        quality: FitQuality::PeaksNotFound,
    };

    let drive_bin = spec.bin_of(drive_frequency);
    let Some(&center_k) = maxima
        .iter()
        .min_by(|&&a, &&b| (a as f64 - drive_bin).abs().total_cmp(&(b as f64 - drive_bin).abs()))
    else {
        return Ok(not_found(drive_frequency, 0.0));
    };
    let (cb, ca) = quadratic_peak(mag, center_k);
    let center = cb * spec.resolution();

    let prominence = |k: usize| -> f64 {
        // Height above the higher of the two troughs separating k from the
        // center and from the band edge.
        let (a, b) = if k < center_k { (k, center_k) } else { (center_k, k) };
        let inner = mag[a..=b].iter().cloned().fold(f64::INFINITY, f64::min);
        let outer = if k < center_k {
            mag[lo..=k].iter().cloned().fold(f64::INFINITY, f64::min)
        } else {
            mag[k..=hi].iter().cloned().fold(f64::INFINITY, f64::min)
        };
        mag[k] - inner.max(outer)
    };
    let min_prominence = MIN_PROMINENCE * ca;
    let strongest = |side: &mut dyn Iterator<Item = usize>| {
        side.filter(|&k| prominence(k) > min_prominence)
            .max_by(|&a, &b| mag[a].total_cmp(&mag[b]))
    };
    let lower_k = strongest(&mut maxima.iter().copied().filter(|&k| k < center_k));
    let upper_k = strongest(&mut maxima.iter().copied().filter(|&k| k > center_k));
    match (lower_k, upper_k) {
        (Some(l), Some(u)) => {
            let (lb, la) = quadratic_peak(mag, l);
            let (ub, ua) = quadratic_peak(mag, u);
            let (lower, upper) = (lb * spec.resolution(), ub * spec.resolution());
            Ok(TripletFit {
                center,
                lower,
                upper,
                separation: upper - lower,
                amplitudes: [la, ca, ua],
                quality: FitQuality::Resolved,
            })
        }
        _ => Ok(not_found(center, ca)),
    }
}

/// Relative prominence a side maximum needs to count as a triplet component.
const MIN_PROMINENCE: f64 = 0.02;

/// Δ_Mollow = ((Ω_d − Ω_R)² + δω₀²/4)^{1/2}; any consistent frequency unit.
pub fn mollow_splitting(drive: f64, rabi: f64, modulation_depth: f64) -> f64 {
    let d = drive - rabi;
    (d * d + 0.25 * modulation_depth * modulation_depth).sqrt()
}

/// δω₀[Ω] = |Σ_m χ_m[Ω](δF·e_m)(e_m·λ)|, rad/s.
pub fn modulation_depth(modes: &ModePair, drive: &DriveSpec, lambda: &CouplingVector) -> f64 {
    let force = Complex64::from_polar(drive.force, drive.phase);
    modes
        .iter()
        .map(|m| {
            susceptibility(m, drive.frequency)
                * force
                * drive.orientation.dot(&m.orientation)
                * m.orientation.dot(&lambda.lambda)
        })
        .sum::<Complex64>()
        .norm()
}

/// g_z = λ·Δx_q, rad/s.
pub fn quantum_coupling_rate(lambda: f64, mode: &ModeParams) -> f64 {
    lambda * zero_point(mode)
}

/// δω₀^th = λ·Δx_th, rad/s.
pub fn thermal_modulation(lambda: f64, mode: &ModeParams, temperature: f64) -> Result<f64> {
    Ok(lambda * thermal_spread(mode, temperature)?)
}

/// δr_Mollow = 2π·Γ_spin / λ, m (Γ_spin in Hz, λ in rad·s⁻¹/m).
pub fn mollow_resolution_length(gamma_spin: f64, lambda: f64) -> Result<f64> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::DivisionByZeroCoupling);
    }
    Ok(TWO_PI * gamma_spin / lambda.abs())
}

/// Everything needed to turn a modulation depth into an analyzed triplet.
#[derive(Debug, Clone, PartialEq)]
pub struct TripletSettings {
    /// Ω_R − Ω_d, Hz.
    pub rabi_offset: f64,
    /// Static microwave detuning Δ_mw, Hz.
    pub detuning: f64,
    pub relaxation: Relaxation,
    pub duration: f64,
    pub dt: f64,
    pub sample_stride: usize,
    pub pad_factor: usize,
    pub window: Window,
    /// Half-width of the triplet search band around Ω_d, Hz.
    pub search_band: f64,
    /// Drive phases whose spectra are averaged.
    pub phases: Vec<f64>,
}

impl Default for TripletSettings {
    fn default() -> Self {
        Self {
            rabi_offset: 0.0,
            detuning: 0.0,
            relaxation: Relaxation::from_decay_rate_hz(100e3),
            duration: 20e-6,
            dt: 1e-9,
            sample_stride: 1,
            pad_factor: 8,
            window: Window::Hann,
            search_band: 3.5e6,
            phases: quadrature_phases(),
        }
    }
}

/// φ ∈ {0, π/2, π, 3π/2}.
pub fn quadrature_phases() -> Vec<f64> {
    (0..4).map(|k| k as f64 * std::f64::consts::FRAC_PI_2).collect()
}

impl TripletSettings {
    pub fn run(&self, drive_hz: f64, modulation_depth: f64, phase: f64) -> RabiRun {
        RabiRun {
            rabi_frequency: TWO_PI * (drive_hz + self.rabi_offset),
            detuning: TWO_PI * self.detuning,
            modulation_depth,
            drive_frequency: TWO_PI * drive_hz,
            phase,
            relaxation: self.relaxation,
            duration: self.duration,
            dt: self.dt,
            sample_stride: self.sample_stride,
            initial: crate::dynamics::BlochState::GROUND,
        }
    }
}

/// Phase-averaged (RMS) spectrum of simulated Rabi traces and its triplet fit.
#[derive(Debug, Clone, PartialEq)]
pub struct TripletAnalysis {
    pub spectrum: Spectrum,
    pub fit: TripletFit,
}

/// Integrates the Bloch equations at drive frequency `drive_hz` with
/// modulation depth `modulation_depth` (rad/s) for each configured phase,
/// averages the spectra and extracts the triplet.
pub fn simulate_triplet(
    exec: Execution,
    settings: &TripletSettings,
    drive_hz: f64,
    modulation_depth: f64,
) -> Result<TripletAnalysis> {
    if settings.phases.is_empty() {
        return Err(Error::param("dynamics.phases", "at least one phase required"));
    }
    let spectra = exec.try_map(settings.phases.len(), |k| {
        let run = settings.run(drive_hz, modulation_depth, settings.phases[k]);
        let ts = integrate_rabi(&run)?;
        windowed_spectrum(&ts.times, &ts.sz(), settings.pad_factor, settings.window)
    })?;
    let spectrum = average_spectra(&spectra).expect("non-empty");
    let fit = detect_triplet(&spectrum, drive_hz, settings.search_band)?;
    Ok(TripletAnalysis { spectrum, fit })
}

/// How the drive force varies across a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ForcePolicy {
    /// Same δF at every frequency.
    Constant(f64),
}

/// One drive frequency of a bimodal sweep (all Hz).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub drive: f64,
    /// δω₀/2π.
    pub modulation_depth: f64,
    pub sideband_lo: f64,
    pub sideband_hi: f64,
    pub fit: Option<TripletFit>,
}

/// Evaluates δω₀[Ω_d] across `drive_hz` with Ω_R tracking Ω_d, optionally
/// simulating and fitting the triplet at every point.
pub fn bimodal_sweep(
    exec: Execution,
    modes: &ModePair,
    drive: &DriveSpec,
    policy: ForcePolicy,
    lambda: &CouplingVector,
    drive_hz: &[f64],
    simulate: Option<&TripletSettings>,
) -> Result<Vec<SweepPoint>> {
    drive.validate()?;
    exec.try_map(drive_hz.len(), |k| {
        let f = drive_hz[k];
        let ForcePolicy::Constant(force) = policy;
        let d = DriveSpec { force, frequency: TWO_PI * f, ..*drive };
        let depth = modulation_depth(modes, &d, lambda);
        let half = depth / TWO_PI / 2.0;
        let fit = match simulate {
            // Inner phase averages stay sequential; the sweep is the parallel axis.
            Some(s) => Some(simulate_triplet(Execution::Sequential, s, f, depth)?.fit),
            None => None,
        };
        Ok(SweepPoint {
            drive: f,
            modulation_depth: depth / TWO_PI,
            sideband_lo: f - half,
            sideband_hi: f + half,
            fit,
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mechanics::ModeParams;
    use crate::PlaneVector;
    use std::f64::consts::FRAC_PI_2;

    fn tone_series(n: usize, dt: f64, tones: &[(f64, f64, f64)]) -> (Vec<f64>, Vec<f64>) {
        // (frequency, amplitude, decay rate)
        let times: Vec<f64> = (0..n).map(|k| k as f64 * dt).collect();
        let values = times
            .iter()
            .map(|&t| tones.iter().map(|&(f, a, g)| a * (-g * t).exp() * (TWO_PI * f * t).cos()).sum())
            .collect();
        (times, values)
    }

    #[test]
    fn pure_on_bin_tone() {
        // 1024 samples at 1 ns with 64 whole periods.
        let n = 1024;
        let f = 64.0 / (n as f64 * 1e-9);
        let (t, v) = tone_series(n, 1e-9, &[(f, 1.0, 0.0)]);
        let s = rabi_spectrum(&t, &v, 1).unwrap();
        assert_eq!(s.dominant_bin(), 64);
        assert!((s.magnitude[64] - 1.0).abs() < 1e-12);
        for (k, m) in s.magnitude.iter().enumerate() {
            if k != 64 {
                assert!(*m < 1e-10 * s.magnitude[64], "bin {k}: {m}");
            }
        }
    }

    #[test]
    fn constant_series_has_empty_spectrum() {
        let t: Vec<f64> = (0..128).map(|k| k as f64 * 1e-9).collect();
        let s = rabi_spectrum(&t, &vec![0.37; 128], 8).unwrap();
        assert!(s.magnitude.iter().all(|&m| m < 1e-14), "{:?}", s.magnitude.iter().cloned().fold(0.0, f64::max));
        assert_eq!(s.len(), 128 * 8 / 2 + 1);
    }

    #[test]
    fn sampling_errors() {
        let mut t: Vec<f64> = (0..100).map(|k| k as f64 * 1e-9).collect();
        let v = vec![0.0; 100];
        t[50] += 3e-10;
        assert!(matches!(rabi_spectrum(&t, &v, 8), Err(Error::NonUniformSampling { index: 50 })));
        assert!(matches!(
            rabi_spectrum(&t[..10], &v[..10], 8),
            Err(Error::TooFewSamples { len: 10, .. })
        ));
    }

    #[test]
    fn hann_window_keeps_tone_amplitude() {
        let n = 4096;
        let f = 256.0 / (n as f64 * 1e-9);
        let (t, v) = tone_series(n, 1e-9, &[(f, 0.8, 0.0)]);
        let s = windowed_spectrum(&t, &v, 1, Window::Hann).unwrap();
        assert!((s.magnitude[256] - 0.8).abs() < 1e-9);
    }

    #[test]
    fn synthetic_triplet_recovered() {
        let (t, v) = tone_series(
            20_000,
            1e-9,
            &[(6.29e6, 1.0, 6e5), (6.29e6 - 1.25e6, 0.6, 6e5), (6.29e6 + 1.25e6, 0.6, 6e5)],
        );
        let s = windowed_spectrum(&t, &v, 8, Window::Hann).unwrap();
        let fit = detect_triplet(&s, 6.29e6, 3.0e6).unwrap();
        let bin = s.resolution();
        assert_eq!(fit.quality, FitQuality::Resolved);
        assert!((fit.center - 6.29e6).abs() < bin, "{}", fit.center);
        assert!((fit.separation - 2.5e6).abs() < bin, "{}", fit.separation);
        assert!(fit.amplitudes[1] > fit.amplitudes[0]);
    }

    #[test]
    fn single_peak_reports_not_found() {
        let (t, v) = tone_series(20_000, 1e-9, &[(6.29e6, 1.0, 6e5)]);
        let s = windowed_spectrum(&t, &v, 8, Window::Hann).unwrap();
        let fit = detect_triplet(&s, 6.29e6, 2.0e6).unwrap();
        assert_eq!(fit.quality, FitQuality::PeaksNotFound);
        assert_eq!(fit.separation, 0.0);
        assert!((fit.center - 6.29e6).abs() < s.resolution());
    }

    #[test]
    fn band_outside_support_is_an_error() {
        let (t, v) = tone_series(1000, 1e-9, &[(6.29e6, 1.0, 0.0)]);
        let s = rabi_spectrum(&t, &v, 8).unwrap();
        assert!(matches!(detect_triplet(&s, 6.29e6, 7e6), Err(Error::BandOutsideSpectrum { .. })));
        assert!(matches!(detect_triplet(&s, 499e6, 2e6), Err(Error::BandOutsideSpectrum { .. })));
    }

    #[test]
    fn splitting_law_cases() {
        assert_eq!(mollow_splitting(6.29, 6.29, 2.5), 1.25);
        assert_eq!(mollow_splitting(6.29, 5.29, 0.0), 1.0);
        assert_eq!(mollow_splitting(3.0, 0.0, 8.0), 5.0);
    }

    fn modes() -> ModePair {
        ModePair::new([
            ModeParams::from_hz(5.99e6, 180e3, 1e-15, 0.0),
            ModeParams::from_hz(6.29e6, 190e3, 1e-15, FRAC_PI_2),
        ])
        .unwrap()
    }

    #[test]
    fn orthogonal_coupling_gives_no_modulation() {
        let m = modes();
        // Force only excites mode 2, λ only sees mode 1.
        let drive = DriveSpec {
            force: 1e-10,
            orientation: PlaneVector::new(0.0, 1.0),
            frequency: m.0[1].frequency,
            phase: 0.0,
        };
        let lambda = CouplingVector::from_polar(0.5, 0.0);
        assert!(modulation_depth(&m, &drive, &lambda) < 1e-12 * lambda.magnitude() * 1e-9);
    }

    #[test]
    fn nine_nanometers_give_four_and_a_half_megahertz() {
        let m = modes();
        let template = DriveSpec {
            force: 0.0,
            orientation: PlaneVector::new(0.0, 1.0),
            frequency: m.0[1].frequency,
            phase: 0.0,
        };
        let force = crate::mechanics::force_for_amplitude(&m, &template, 9e-9).unwrap();
        let lambda = CouplingVector::from_polar(0.5, FRAC_PI_2);
        let depth = modulation_depth(&m, &DriveSpec { force, ..template }, &lambda);
        assert!((depth / TWO_PI - 4.5e6).abs() < 1e-3, "{}", depth / TWO_PI);
    }

    #[test]
    fn derived_scales() {
        let lambda = crate::constants::mhz_per_nm_to_rad_per_s_per_m(0.5);
        // λΔx_th with Δx_th = 52 pm
        assert!((lambda * 52e-12 / TWO_PI - 26e3).abs() < 1.0);
        let r = mollow_resolution_length(100e3, lambda).unwrap();
        assert!((r - 200e-12).abs() < 1e-20);
        assert_eq!(mollow_resolution_length(100e3, 0.0), Err(Error::DivisionByZeroCoupling));

        let mode = ModeParams::from_hz(6.29e6, 190e3, 1e-15, 0.0);
        let gz = quantum_coupling_rate(lambda, &mode) / TWO_PI;
        assert!((gz - 18.0).abs() < 1.0, "{gz}");
        let th = thermal_modulation(lambda, &mode, 300.0).unwrap() / TWO_PI;
        assert!((23e3..28e3).contains(&th), "{th}");
    }

    #[test]
    fn coupling_along_first_mode_gives_single_maximum() {
        let m = modes();
        let drive = DriveSpec {
            force: 1e-10,
            orientation: PlaneVector::new(1.0, 1.0).normalize(),
            frequency: 0.0,
            phase: 0.0,
        };
        let lambda = CouplingVector::from_polar(0.5, 0.0);
        let grid: Vec<f64> = (0..=900).map(|k| 5.7e6 + k as f64 * 1e3).collect();
        let pts =
            bimodal_sweep(Execution::Sequential, &m, &drive, ForcePolicy::Constant(1e-10), &lambda, &grid, None).unwrap();
        let maxima: Vec<f64> = (1..pts.len() - 1)
            .filter(|&k| {
                pts[k].modulation_depth > pts[k - 1].modulation_depth
                    && pts[k].modulation_depth >= pts[k + 1].modulation_depth
            })
            .map(|k| pts[k].drive)
            .collect();
        assert_eq!(maxima.len(), 1, "{maxima:?}");
        assert!((maxima[0] - 5.99e6).abs() < 2e3, "{}", maxima[0]);
        let p = &pts[100];
        assert!((p.sideband_hi - p.sideband_lo - p.modulation_depth).abs() < 1e-6);
    }
}
