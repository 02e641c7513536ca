use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("Fock truncation n_max must be at least 1")]
    InvalidTruncation,

    #[error("subsystem dimension must be positive (label `{0}`)")]
    EmptySubsystem(String),

    #[error("duplicate subsystem label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown subsystem label `{0}`")]
    UnknownSubsystem(String),

    #[error("state index {index} out of range for subsystem `{label}` of dimension {dim}")]
    StateOutOfRange {
        label: String,
        index: usize,
        dim: usize,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operands live on different Hilbert-space layouts")]
    LayoutMismatch,

    #[error("matrix is not Hermitian (max |A - A†| = {0:.3e})")]
    NotHermitian(f64),

    #[error("density operator trace is {0} (expected 1)")]
    TraceNotUnity(f64),

    #[error("density operator has negative eigenvalue {0:.3e}")]
    NotPositive(f64),

    #[error("collapse rate must be non-negative, got {0}")]
    NegativeRate(f64),

    #[error("Liouvillian has no dissipative channel; the steady state is not unique")]
    NoDissipation,

    #[error("multiple steady states detected (independent solves differ by {0:.3e})")]
    DegenerateSteadyState(f64),

    #[error("steady-state solve did not converge (residual {residual:.3e}, target {target:.3e})")]
    NotConverged { residual: f64, target: f64 },

    #[error("state is not stationary under the Liouvillian (residual {residual:.3e}, target {target:.3e})")]
    NotSteadyState { residual: f64, target: f64 },

    #[error("step size underflow at t = {t}")]
    StepSizeUnderflow { t: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("correlation undefined: zero photon flux in channel `{0}`")]
    UndefinedCorrelation(String),

    #[error("second-order correlation has imaginary part {0:.3e}")]
    NonRealCorrelation(f64),

    #[error("expected a first-order correlation series")]
    NotFirstOrder,

    #[error("correlation tail {tail:.3e} exceeds {threshold:.1e} of its peak and windowing is disabled; extend tau_max")]
    TailTooLong { tail: f64, threshold: f64 },

    #[error("E_minus is not the adjoint of E_plus")]
    NotAdjointPair,

    #[error("negative flux {0:.3e}; the supplied state is corrupt")]
    NegativeFlux(f64),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("manifold {0} is required but excluded from the basis")]
    ManifoldExcluded(String),

    #[error("system has no operator named `{0}`")]
    MissingOperator(String),

    #[error("linear algebra failure: {0}")]
    LinearAlgebra(String),
}
