use thiserror::Error;

/// Failure of one CLI invocation, split by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad file, bad flag or bad graph description (exit code 1).
    #[error("{0}")]
    Input(String),
    /// Non-convergence, singular solve or similar (exit code 2).
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl From<qgraph::Error> for CliError {
    fn from(e: qgraph::Error) -> Self {
        if e.is_input_error() {
            CliError::Input(e.to_string())
        } else {
            CliError::Numerical(e.to_string())
        }
    }
}

macro_rules! via_library_error {
    ($($t:ty),*) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                qgraph::Error::from(e).into()
            }
        })*
    };
}

via_library_error!(
    qgraph::graph::GraphError,
    qgraph::linalg::LinalgError,
    qgraph::vertex_space::VertexSpaceError,
    qgraph::discrete::DiscreteError,
    qgraph::krein::KreinError,
    qgraph::spectral::SpectralError,
    qgraph::fem::FemError
);
