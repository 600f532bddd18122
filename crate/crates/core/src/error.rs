use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Evaluation point lies inside (or on) the magnet exclusion sphere.
    /// `index` is the row-major grid index when raised from a map.
    #[error("evaluation point at {distance:.3e} m from the dipole is inside the magnet (radius {radius:.3e} m){}", index.map(|i| format!(" at grid index {i}")).unwrap_or_default())]
    EvaluationInsideMagnet {
        distance: f64,
        radius: f64,
        index: Option<usize>,
    },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("time step {dt:.3e} s resolves the fastest rate with only {steps_per_cycle:.1} steps per cycle (need >= 50)")]
    StepTooLarge { dt: f64, steps_per_cycle: f64 },

    #[error("time series is not uniformly sampled (sample {index})")]
    NonUniformSampling { index: usize },

    #[error("time series has {len} samples, at least {min} required")]
    TooFewSamples { len: usize, min: usize },

    #[error("search band [{lo:.6e}, {hi:.6e}] Hz is outside the spectrum support")]
    BandOutsideSpectrum { lo: f64, hi: f64 },

    #[error("coupling strength is zero")]
    DivisionByZeroCoupling,
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
