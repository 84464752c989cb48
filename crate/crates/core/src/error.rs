use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by kernel construction, root finding, contour counting and
/// time integration.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error("invalid kernel: {0}")]
    InvalidKernel(String),
    #[error("alpha_sq diverges: power-law exponent gamma = {gamma} must exceed 1")]
    DivergentAlphaSq { gamma: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("evaluation point {z} is within {distance:e} of the pole -b_{index}")]
    PoleHit {
        z: Complex64,
        index: usize,
        distance: f64,
    },
    #[error("no sign change on ({lo}, {hi}) for branch j = {j}")]
    BracketFailure { j: usize, lo: f64, hi: f64 },
    #[error("phase tracking hit the subdivision depth limit near {at}")]
    PhaseJump { at: Complex64 },
    #[error("winding number {raw} is {distance} away from an integer")]
    WindingQuality { raw: f64, distance: f64 },
    #[error("boundary passes within {distance:e} of the pole -b_{index}")]
    BoundaryTooClose { index: usize, distance: f64 },
    #[error("gap condition exhausted: no admissible N within {stored} stored terms for n = {n}")]
    GapConditionExhausted { n: u32, stored: usize },
    #[error("Rouche premise violated: worst |K|n^2/|z| = {worst_margin} at {at}")]
    RoucheViolation { worst_margin: f64, at: Complex64 },
    #[error("complex pair not found for n = {n}: {reason}")]
    PairNotFound { n: u32, reason: String },
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },
}

pub type Result<T> = std::result::Result<T, SpectrumError>;
