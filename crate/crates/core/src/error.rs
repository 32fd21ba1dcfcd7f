use thiserror::Error;

/// Errors raised across the pipeline.
///
/// Variants are grouped by the stage that produces them. Input problems
/// (bad files, out-of-range indices) are distinguished from violated
/// preconditions of the algebra (non-pierced codes, invalid profiles) so
/// the CLI can map them to different exit codes.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("neuron index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("neuron count {n} exceeds the supported maximum of {max}")]
    TooManyNeurons { n: usize, max: usize },

    #[error("interval bottom {sigma} is not contained in top {tau}")]
    NotAnInterval { sigma: String, tau: String },

    #[error("supports overlap at index {0}: x{0}*y{0} is not a pseudo-monomial")]
    OverlappingSupports(usize),

    #[error("invalid piercing step for neuron {neuron}: {msg}")]
    InvalidStep { neuron: usize, msg: String },

    #[error("neuron {0} never fires")]
    SilentNeuron(usize),

    #[error("code has silent neurons {silent:?} or duplicate pairs {duplicates:?}")]
    Diagnostics {
        silent: Vec<usize>,
        duplicates: Vec<(usize, usize)>,
    },

    #[error("generator {0} is not quadratic")]
    NotQuadratic(String),

    #[error("ordering is not simplicial at step {step} (vertex {vertex})")]
    NotSimplicial { step: usize, vertex: usize },

    #[error("{what} limited to {max}, got {got}")]
    Guard {
        what: &'static str,
        max: usize,
        got: usize,
    },

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("inversion produced an invalid profile: {0}")]
    InvalidInversion(String),

    #[error("the zero ideal has no regularity")]
    ZeroIdeal,

    #[error("empty Betti table")]
    EmptyTable,

    #[error("could not start worker threads: {0}")]
    ThreadPool(String),

    #[error("arithmetic overflow")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, Error>;
