use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised anywhere in the kernel. Coordinate indices are stored
/// 0-based and displayed 1-based.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },

    #[error("index {index} out of range for N = {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("evaluation on a pole: x{} = x{}", .i + 1, .j + 1)]
    Pole { i: usize, j: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("input is not a polynomial (denominator present)")]
    NotPolynomial,

    #[error("section is not {expected}")]
    SymmetryMismatch { expected: &'static str },

    #[error("N = {n} exceeds the configured cap {cap}")]
    TooManyParticles { n: usize, cap: usize },

    #[error("path leaves the chamber (margin {margin}) at waypoint {waypoint}")]
    OutsideChamber { waypoint: usize, margin: f64 },

    #[error("step size underflow on segment {segment} at local time {t}")]
    StepUnderflow { segment: usize, t: f64 },

    #[error("particles x{} and x{} collided at t = {t}", .i + 1, .i + 2)]
    Collision { t: f64, i: usize },

    #[error("no candidate permutation conjugates the connection exactly")]
    NoEquivariance,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
