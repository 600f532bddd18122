//! Spin-1 ground-state model of the NV-like qubit.
//!
//! H/h = D·S_z² + γ·B·S, written in the {+1, 0, −1} basis quantized along the
//! configured axis. Strain and hyperfine terms are not modeled; each branch
//! is treated as a single two-level transition.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{Matrix3, SymmetricEigen};
use num_complex::Complex64;

use crate::constants::{NV_GYROMAGNETIC_RATIO, NV_ZERO_FIELD_SPLITTING, TWO_PI};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::grid::{GridSpec, PlaneMap, PlaneSpec};
use crate::magnetostatics::{with_index, FieldSource};
use crate::{PlaneVector, Vector3};

/// Which transition out of m_s = 0 defines the qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Branch {
    /// m_s = 0 → −1
    #[default]
    Minus,
    /// m_s = 0 → +1
    Plus,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitModel {
    /// Zero-field splitting D, Hz.
    pub zero_field_splitting: f64,
    /// γ, Hz/T.
    pub gyromagnetic_ratio: f64,
    /// Unit quantization axis.
    pub axis: Vector3,
    pub branch: Branch,
    /// Rest position r₀ of the qubit, m.
    pub rest_position: Vector3,
    /// Γ_spin, Hz.
    pub decay_rate: f64,
}

impl Default for QubitModel {
    fn default() -> Self {
        Self {
            zero_field_splitting: NV_ZERO_FIELD_SPLITTING,
            gyromagnetic_ratio: NV_GYROMAGNETIC_RATIO,
            axis: Vector3::z(),
            branch: Branch::Minus,
            rest_position: Vector3::zeros(),
            decay_rate: 100e3,
        }
    }
}

impl QubitModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.zero_field_splitting > 0.0) {
            return Err(Error::param("qubit.zero_field_splitting", "must be > 0"));
        }
        if !(self.gyromagnetic_ratio > 0.0) {
            return Err(Error::param("qubit.gyromagnetic_ratio", "must be > 0"));
        }
        if (self.axis.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::param("qubit.axis", "must be normalized"));
        }
        if !(self.decay_rate >= 0.0) {
            return Err(Error::param("qubit.decay_rate", "must be >= 0"));
        }
        Ok(())
    }

    /// Orthonormal transverse pair completing `axis` to a right-handed frame.
    fn transverse_frame(&self) -> (Vector3, Vector3) {
        let a = self.axis;
        let helper = if a.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
        let ex = (helper - a * a.dot(&helper)).normalize();
        let ey = a.cross(&ex);
        (ex, ey)
    }

    /// H/h in Hz, basis order {+1, 0, −1}.
    pub fn hamiltonian(&self, b: &Vector3) -> Matrix3<Complex64> {
        let (ex, ey) = self.transverse_frame();
        let g = self.gyromagnetic_ratio;
        let (bx, by, bz) = (g * b.dot(&ex), g * b.dot(&ey), g * b.dot(&self.axis));
        let d = self.zero_field_splitting;
        let c = |re: f64, im: f64| Complex64::new(re, im);
        // γ(B_x S_x + B_y S_y) couples neighbouring m_s with (B_x ∓ iB_y)/√2.
        let off = c(bx * FRAC_1_SQRT_2, -by * FRAC_1_SQRT_2);
        Matrix3::new(
            c(d + bz, 0.0), off, c(0.0, 0.0),
            off.conj(), c(0.0, 0.0), off,
            c(0.0, 0.0), off.conj(), c(d - bz, 0.0),
        )
    }
}

/// Eigen-decomposition of the spin Hamiltonian with states labelled by the
/// bare level they are adiabatically connected to.
#[derive(Debug, Clone, Copy)]
pub struct SpinEigensystem {
    /// Energies (Hz) of the states connected to m_s = +1, 0, −1.
    pub energies: [f64; 3],
    /// |⟨0̃|0⟩|².
    pub zero_population: f64,
    pub trace: f64,
}

pub fn diagonalize(qubit: &QubitModel, b: &Vector3) -> SpinEigensystem {
    let h = qubit.hamiltonian(b);
    let trace = h.trace().re;
    let eig = SymmetricEigen::new(h);
    let pop = |k: usize, level: usize| eig.eigenvectors[(level, k)].norm_sqr();
    let zero = (0..3)
        .max_by(|&i, &j| pop(i, 1).total_cmp(&pop(j, 1)))
        .expect("three eigenvectors");
    let mut rest: Vec<usize> = (0..3).filter(|&k| k != zero).collect();
    let sz = |k: usize| pop(k, 0) - pop(k, 2);
    let (a, b_) = (rest[0], rest[1]);
    let a_is_plus = if (sz(a) - sz(b_)).abs() > 1e-9 {
        sz(a) > sz(b_)
    } else {
        eig.eigenvalues[a] > eig.eigenvalues[b_]
    };
    if !a_is_plus {
        rest.swap(0, 1);
    }
    SpinEigensystem {
        energies: [eig.eigenvalues[rest[0]], eig.eigenvalues[zero], eig.eigenvalues[rest[1]]],
        zero_population: pop(zero, 1),
        trace,
    }
}

/// The two ESR transitions out of the m_s = 0-like state, as signed energy
/// differences. `minus` turns negative once the −1 level crosses below 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionPair {
    /// E(−1̃) − E(0̃), Hz.
    pub minus: f64,
    /// E(+1̃) − E(0̃), Hz.
    pub plus: f64,
}

impl TransitionPair {
    pub fn lower(&self) -> f64 {
        self.minus.min(self.plus)
    }

    pub fn upper(&self) -> f64 {
        self.minus.max(self.plus)
    }

    /// Transition frequency (always ≥ 0) of one branch.
    pub fn branch(&self, branch: Branch) -> f64 {
        match branch {
            Branch::Minus => self.minus.abs(),
            Branch::Plus => self.plus.abs(),
        }
    }
}

pub fn spin_hamiltonian_frequencies(qubit: &QubitModel, b: &Vector3) -> TransitionPair {
    let e = diagonalize(qubit, b).energies;
    TransitionPair {
        minus: e[2] - e[1],
        plus: e[0] - e[1],
    }
}

/// Qubit transition frequency ω₀/2π on the configured branch, Hz.
pub fn qubit_frequency(qubit: &QubitModel, b: &Vector3) -> f64 {
    spin_hamiltonian_frequencies(qubit, b).branch(qubit.branch)
}

/// Phenomenological readout contrast |⟨0̃|0⟩|⁴.
pub fn readout_contrast(qubit: &QubitModel, b: &Vector3) -> f64 {
    let p = diagonalize(qubit, b).zero_population;
    (p * p).clamp(0.0, 1.0)
}

pub fn qubit_frequency_map(
    exec: Execution,
    qubit: &QubitModel,
    source: &dyn FieldSource,
    plane: &PlaneSpec,
    grid: &GridSpec,
) -> Result<PlaneMap<f64>> {
    grid.validate()?;
    let values = exec.try_map(grid.len(), |k| {
        let (a, b) = grid.coords(k);
        let field = source.field_at(&plane.point(a, b)).map_err(|e| with_index(e, k))?;
        Ok(qubit_frequency(qubit, &field))
    })?;
    Ok(PlaneMap { plane: *plane, grid: *grid, values })
}

/// Optical detection settings for simulated ODMR images.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EsrReadout {
    /// Fluorescence rate R₀ of an unquenched, off-resonant qubit (arbitrary units).
    pub base_rate: f64,
    /// ESR dip depth for a perfectly aligned field.
    pub dip_depth: f64,
    /// ESR full width at half maximum, Hz.
    pub linewidth: f64,
}

impl Default for EsrReadout {
    fn default() -> Self {
        Self { base_rate: 1.0, dip_depth: 0.3, linewidth: 4e6 }
    }
}

/// Unit-peak Lorentzian of full width `fwhm`.
pub fn lorentzian(detuning: f64, fwhm: f64) -> f64 {
    let hw = 0.5 * fwhm;
    hw * hw / (detuning * detuning + hw * hw)
}

/// Fluorescence of one pixel: R₀·[1 − C·L(f₀ − f_mw)]·Q, with Q the readout
/// contrast and C = dip_depth·Q.
pub fn fluorescence(qubit: &QubitModel, readout: &EsrReadout, b: &Vector3, mw_frequency: f64) -> f64 {
    let sys = diagonalize(qubit, b);
    let e = sys.energies;
    let f0 = match qubit.branch {
        Branch::Minus => (e[2] - e[1]).abs(),
        Branch::Plus => (e[0] - e[1]).abs(),
    };
    let q = (sys.zero_population * sys.zero_population).clamp(0.0, 1.0);
    let dip = readout.dip_depth * q;
    readout.base_rate * (1.0 - dip * lorentzian(f0 - mw_frequency, readout.linewidth)) * q
}

pub fn resonance_image(
    exec: Execution,
    qubit: &QubitModel,
    source: &dyn FieldSource,
    plane: &PlaneSpec,
    grid: &GridSpec,
    readout: &EsrReadout,
    mw_frequency: f64,
) -> Result<PlaneMap<f64>> {
    if !(readout.linewidth > 0.0) {
        return Err(Error::param("qubit.linewidth", "must be > 0"));
    }
    if !(0.0..=1.0).contains(&readout.dip_depth) {
        return Err(Error::param("qubit.contrast", "must lie in [0, 1]"));
    }
    grid.validate()?;
    let values = exec.try_map(grid.len(), |k| {
        let (a, b) = grid.coords(k);
        let field = source.field_at(&plane.point(a, b)).map_err(|e| with_index(e, k))?;
        Ok(fluorescence(qubit, readout, &field, mw_frequency))
    })?;
    Ok(PlaneMap { plane: *plane, grid: *grid, values })
}

/// In-plane gradient λ = ∇ω₀ of the qubit angular frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingVector {
    /// Components along (e₁, e₂), rad·s⁻¹/m.
    pub lambda: PlaneVector,
}

impl CouplingVector {
    pub fn new(lambda: PlaneVector) -> Self {
        Self { lambda }
    }

    /// Coupling of magnitude `mhz_per_nm` (as λ/2π) at `angle` from e₁.
    pub fn from_polar(mhz_per_nm: f64, angle: f64) -> Self {
        let m = crate::constants::mhz_per_nm_to_rad_per_s_per_m(mhz_per_nm);
        Self { lambda: PlaneVector::new(m * angle.cos(), m * angle.sin()) }
    }

    /// |λ| in rad·s⁻¹/m.
    pub fn magnitude(&self) -> f64 {
        self.lambda.norm()
    }

    /// |λ|/2π in MHz/nm.
    pub fn magnitude_mhz_per_nm(&self) -> f64 {
        crate::constants::rad_per_s_per_m_to_mhz_per_nm(self.magnitude())
    }

    /// e_λ, or `None` for a vanishing coupling.
    pub fn orientation(&self) -> Option<PlaneVector> {
        let n = self.magnitude();
        (n > 0.0).then(|| self.lambda / n)
    }
}

/// Central finite difference of ω₀ = 2π·f₀ along the in-plane unit vectors
/// `e1` and `e2` around `r0`.
pub fn coupling_vector_at(
    qubit: &QubitModel,
    source: &dyn FieldSource,
    r0: &Vector3,
    basis: (&Vector3, &Vector3),
    step: f64,
) -> Result<CouplingVector> {
    if !(step > 0.0) {
        return Err(Error::param("step", "must be > 0"));
    }
    let omega = |r: Vector3| -> Result<f64> { Ok(TWO_PI * qubit_frequency(qubit, &source.field_at(&r)?)) };
    let mut lambda = PlaneVector::zeros();
    for (k, e) in [basis.0, basis.1].into_iter().enumerate() {
        let hi = omega(r0 + e * step)?;
        let lo = omega(r0 - e * step)?;
        lambda[k] = (hi - lo) / (2.0 * step);
    }
    Ok(CouplingVector { lambda })
}
