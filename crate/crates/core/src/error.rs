use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("grid size {0} is not a power of two")]
    GridSize(usize),
    #[error("invalid grid spacing {0}")]
    GridSpacing(f64),
    #[error("field length {got} does not match grid size {expected}")]
    Length { expected: usize, got: usize },
    #[error("spectral derivative order {0} not supported (1 or 2)")]
    DerivativeOrder(u32),
    #[error("coupling constants inconsistent with sector: {0}")]
    Sector(&'static str),
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },
    #[error("boundary injection rejected: {0}")]
    Boundary(String),
    #[error("non-Hermitian hopping gives a complex band (max |Im ω| = {0})")]
    NonHermitian(f64),
    #[error("integration diverged at step {step} (t = {time} s) in {field}")]
    Divergence { step: u64, time: f64, field: &'static str },
    #[error("steady state not reached after {steps} steps (residual {residual:e})")]
    NotConverged { steps: u64, residual: f64, history: Vec<f64> },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Parameter { name, reason: reason.into() }
    }
}
