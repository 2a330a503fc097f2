use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("operator is defective at an exceptional point; no eigenbasis exists")]
    ExceptionalPoint,

    #[error("PT symmetry is broken (gamma = {gamma}); quantity only defined for gamma < 1")]
    BrokenPhase { gamma: f64 },

    #[error("degenerate spectrum: |lambda1 - lambda2| = {gap:e}")]
    DegenerateSpectrum { gap: f64 },

    #[error("decay rate must be positive, got {0}")]
    NonPositiveRate(f64),

    #[error("matrix is not hermitian")]
    NotHermitian,

    #[error("B matrix is singular (|det B| = {det:e}); second-order form does not exist")]
    SingularB { det: f64 },

    #[error("step {step} too large for spectral scale {scale} (step * scale = {product:.3} > 0.1)")]
    StepTooLarge { step: f64, scale: f64, product: f64 },

    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("operation needs a {expected} trajectory, got {found}")]
    WrongRepresentation {
        expected: &'static str,
        found: &'static str,
    },

    #[error("scale separation violated: omega / a = {ratio:.2} < 20")]
    ScaleSeparationViolated { ratio: f64 },

    #[error("circuit with a resistor cannot be built as a lossless Foucault system")]
    UnexpectedResistor,

    #[error("{0} self-check(s) failed")]
    CheckFailed(usize),

    #[error("spec error: {0}")]
    Spec(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Process exit code for the command-line driver: 2 spec errors, 3 domain
    /// errors, 4 I/O errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Spec(_) => 2,
            Error::Io { .. } => 4,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
