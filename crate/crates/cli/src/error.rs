use std::path::Path;
use std::process::ExitCode;

use qcpg_core::dataset::DatasetError;
use qcpg_core::evaluation::EvalError;
use qcpg_core::generator::GeneratorError;
use qcpg_core::quality::QualityError;
use qcpg_core::reference::ReferenceError;
use qcpg_core::selection::SelectionError;
use qcpg_core::semantic::SemanticError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Insufficient(DatasetError),
    #[error(transparent)]
    Infeasible(SelectionError),
    #[error("external command failed: {0}")]
    External(String),
    #[error(transparent)]
    Model(ReferenceError),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io { path: path.display().to_string(), source }
    }

    pub fn input(message: impl Into<String>) -> Self {
        Self::Input(message.into())
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            Self::Internal(_) => 1,
            Self::Usage(_) => 2,
            Self::Io { .. } => 3,
            Self::Input(_) => 4,
            Self::Insufficient(_) => 5,
            Self::Infeasible(_) => 6,
            Self::External(_) => 7,
            Self::Model(_) => 8,
        })
    }
}

impl From<DatasetError> for CliError {
    fn from(e: DatasetError) -> Self {
        match e {
            DatasetError::Io { path, source } => Self::Io { path, source },
            DatasetError::InsufficientData { .. } => Self::Insufficient(e),
            DatasetError::UnknownPairMode(_) => Self::Usage(e.to_string()),
            _ => Self::Input(e.to_string()),
        }
    }
}

impl From<SemanticError> for CliError {
    fn from(e: SemanticError) -> Self {
        match e {
            SemanticError::External(_) => Self::External(e.to_string()),
            SemanticError::EmptyCommand | SemanticError::UnknownScorer(_) => Self::Usage(e.to_string()),
            SemanticError::NonFiniteRaw(_) => Self::External(e.to_string()),
        }
    }
}

impl From<QualityError> for CliError {
    fn from(e: QualityError) -> Self {
        match e {
            QualityError::Semantic(inner) => inner.into(),
            other => Self::Input(other.to_string()),
        }
    }
}

impl From<GeneratorError> for CliError {
    fn from(e: GeneratorError) -> Self {
        match e {
            GeneratorError::External(_) | GeneratorError::EmptyOutput => Self::External(e.to_string()),
            GeneratorError::Quality(inner) => inner.into(),
            GeneratorError::InvalidNoise(_) | GeneratorError::EmptyCommand | GeneratorError::UnknownGenerator(_) => {
                Self::Usage(e.to_string())
            }
            other => Self::Input(other.to_string()),
        }
    }
}

impl From<ReferenceError> for CliError {
    fn from(e: ReferenceError) -> Self {
        match e {
            ReferenceError::Io { path, source } => Self::Io { path, source },
            ReferenceError::InvalidLambda(_) => Self::Usage(e.to_string()),
            other => Self::Model(other),
        }
    }
}

impl From<SelectionError> for CliError {
    fn from(e: SelectionError) -> Self {
        match e {
            SelectionError::NoFeasibleOffset { .. } => Self::Infeasible(e),
            SelectionError::Io { path, source } => Self::Io { path, source },
            SelectionError::InvalidAxis(_) | SelectionError::MissingZeroPoint | SelectionError::EmptyGrid => {
                Self::Usage(e.to_string())
            }
            SelectionError::Generator(inner) => inner.into(),
            SelectionError::Quality(inner) => inner.into(),
            other => Self::Input(other.to_string()),
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Quality(inner) => inner.into(),
            other => Self::Input(other.to_string()),
        }
    }
}
