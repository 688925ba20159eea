//! hesim simulates photon pairs whose signal polarization is entangled with
//! the transverse path of the idler behind a birefringent double slit.
//!
//! The crate is organized as a pipeline:
//!
//! * [`hilbert`]: small complex register states and density operators,
//! * [`source`]: preparation of the hybrid two-qubit state,
//! * [`optics`]: slit geometry and far-field mode amplitudes,
//! * [`patterns`]: joint, marginal, and corrected detection densities,
//! * [`analysis`]: visibilities and complementarity diagnostics,
//! * [`harness`]: synthetic counting experiments and curve fits,
//! * [`verify`]: the self-check suite behind `hesim verify`.
//!
//! All angles are radians and all lengths are meters unless a name says
//! otherwise. Run configuration (see [`config`]) accepts degrees and
//! unit-suffixed lengths and converts at the boundary.

pub mod analysis;
pub mod config;
pub mod harness;
pub mod hilbert;
pub mod optics;
pub mod patterns;
pub mod quad;
pub mod report;
pub mod source;
pub mod verify;

pub use num_complex::Complex64;

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("duplicate qubit label {0:?}")]
    DuplicateLabel(hilbert::QubitLabel),
    #[error("label {0:?} not present in register")]
    LabelNotFound(hilbert::QubitLabel),
    #[error("amplitude vector of length {got} does not match {qubits} qubit(s)")]
    DimensionMismatch { got: usize, qubits: usize },
    #[error("register size {0} outside supported range {1}..={2}")]
    RegisterSize(usize, usize, usize),
    #[error("state norm² = {0}, expected 1")]
    NotNormalized(f64),
    #[error("label sets differ between states")]
    LabelMismatch,
    #[error("density operator failed validation: {0}")]
    InvalidDensity(&'static str),
    #[error("partial trace must remove a nonempty proper subset of labels")]
    PartialTraceScope,
    #[error("projection has vanishing success probability")]
    ProjectionVanishes,
    #[error("projection coefficients invalid: {0}")]
    InvalidProjection(&'static str),
    #[error("state is not of the expected pipeline form: {0}")]
    UnexpectedStateForm(&'static str),
    #[error("slit geometry invalid: {0}")]
    InvalidGeometry(&'static str),
    #[error("scan configuration invalid: {0}")]
    InvalidScan(&'static str),
    #[error("all scan rates are zero; nothing to normalize")]
    AllRatesZero,
    #[error("fit failed: {0}")]
    FitFailed(&'static str),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
