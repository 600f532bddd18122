//! Physical constants (SI, CODATA 2018 exact values where defined).

use std::f64::consts::PI;

/// μ₀/4π in T·m/A, taken as exactly 1e−7.
pub const MU0_OVER_4PI: f64 = 1e-7;
/// Vacuum permeability μ₀ = 4π·1e−7 T·m/A.
pub const MU0: f64 = 4.0 * PI * MU0_OVER_4PI;
/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

pub const TWO_PI: f64 = 2.0 * PI;

/// NV ground-state zero-field splitting, Hz.
pub const NV_ZERO_FIELD_SPLITTING: f64 = 2.870e9;
/// NV electron gyromagnetic ratio, Hz/T.
pub const NV_GYROMAGNETIC_RATIO: f64 = 28.0e9;

/// Converts a coupling in rad·s⁻¹/m to MHz/nm (i.e. divides out 2π and rescales).
pub fn rad_per_s_per_m_to_mhz_per_nm(lambda: f64) -> f64 {
    lambda / TWO_PI * 1e-9 / 1e6
}

/// Inverse of [`rad_per_s_per_m_to_mhz_per_nm`].
pub fn mhz_per_nm_to_rad_per_s_per_m(lambda: f64) -> f64 {
    lambda * TWO_PI * 1e6 / 1e-9
}
