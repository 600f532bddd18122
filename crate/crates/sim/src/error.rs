use serde_json::json;

use crate::config::ConfigError;

#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Model(#[from] mollow_core::Error),
    #[error("{0}")]
    Numeric(String),
    #[error("{0}")]
    Analysis(String),
    #[error("i/o failure on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("cannot start worker pool: {0}")]
    Pool(String),
}

impl SimError {
    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        SimError::Io { path: path.as_ref().display().to_string(), source }
    }

    fn kind(&self) -> &'static str {
        use mollow_core::Error as E;
        match self {
            SimError::Config(_) => "config",
            SimError::Model(E::InvalidParameter { .. } | E::InvalidGrid(_) | E::StepTooLarge { .. }) => "config",
            SimError::Model(E::EvaluationInsideMagnet { .. } | E::DivisionByZeroCoupling) | SimError::Numeric(_) => {
                "numeric"
            }
            SimError::Model(E::NonUniformSampling { .. } | E::TooFewSamples { .. } | E::BandOutsideSpectrum { .. })
            | SimError::Analysis(_) => "analysis",
            SimError::Io { .. } | SimError::Pool(_) => "io",
        }
    }

    /// 2 config, 3 numeric, 4 analysis, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            "config" => 2,
            "numeric" => 3,
            "analysis" => 4,
            _ => 1,
        }
    }

    /// One-line JSON record for stderr.
    pub fn record(&self) -> String {
        let issues: Vec<_> = match self {
            SimError::Config(ConfigError::Validation(list)) => {
                list.iter().map(|i| json!({ "path": i.path, "message": i.message })).collect()
            }
            _ => Vec::new(),
        };
        json!({
            "error": {
                "kind": self.kind(),
                "exit_code": self.exit_code(),
                "message": self.to_string(),
                "issues": issues,
            }
        })
        .to_string()
    }
}
