//! Simulation core for a spin qubit parametrically coupled to a two-mode
//! nanomechanical oscillator.
//!
//! The crate is organised bottom-up:
//!
//! * [`magnetostatics`]: point-dipole field, gradient tensor and scan maps.
//! * [`nv`]: spin-1 ground-state Hamiltonian, readout quenching, qubit
//!   frequency maps and extraction of the coupling vector.
//! * [`mechanics`]: susceptibilities, driven response and trajectories of the
//!   two flexural eigenmodes, plus thermal and zero-point scales.
//! * [`dynamics`]: rotating-frame Bloch equations under parametric
//!   modulation, integrated with fixed-step RK4.
//! * [`spectral`]: Fourier analysis of Rabi traces, triplet detection and the
//!   dressed-state splitting laws.
//!
//! Batch operations (maps, sweeps) take an [`Execution`] strategy. With the
//! default `parallel` feature the work is spread over rayon's pool; without it
//! every strategy runs sequentially. Output order is always the input index
//! order.

pub mod constants;
pub mod dynamics;
pub mod error;
pub mod exec;
pub mod grid;
pub mod magnetostatics;
pub mod mechanics;
pub mod nv;
pub mod spectral;

pub use error::{Error, Result};
pub use exec::Execution;

/// Real 3-vector (tesla, meters, A·m² depending on context).
pub type Vector3 = nalgebra::Vector3<f64>;
/// Real 2-vector in the oscillation plane.
pub type PlaneVector = nalgebra::Vector2<f64>;
