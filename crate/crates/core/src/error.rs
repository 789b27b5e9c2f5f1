use thiserror::Error;

/// Errors produced by the numerical and symbolic kernels.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A K-type index does not have the parity required by the M-character.
    #[error("K-type {n} is not compatible with parity delta={delta}")]
    Parity { delta: u8, n: i64 },

    /// The character is singular on the non-regular set |Tr g| = 2.
    #[error("character undefined at non-regular element (|Tr g| = {trace})")]
    NonRegular { trace: f64 },

    /// The radial Casimir is singular at t = 0.
    #[error("t_min must be positive, got {0}")]
    InvalidTMin(f64),

    /// A quadrature did not reach its tolerance.
    #[error("{what} did not converge (estimate {estimate:e}, tolerance {tolerance:e})")]
    NonConvergence {
        what: &'static str,
        estimate: f64,
        tolerance: f64,
    },

    /// The spectral parameter sits on the continuous spectrum [1, inf).
    #[error("z = {re}{im:+}i lies on the cut [1, +inf)")]
    OnCut { re: f64, im: f64 },

    /// The requested point is a pole of the continued resolvent.
    #[error("zeta is at the pole -{l}i")]
    Pole { l: u32 },

    /// The requested point is not above the shifted contour.
    #[error("zeta (Im = {im}) lies on or below the contour Im = -{y}")]
    BelowContour { im: f64, y: f64 },

    /// Invalid contour, test function or run configuration.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// The density has no pole at the requested point.
    #[error("{kind} has no pole at lambda = -{l}i")]
    NoPole { kind: &'static str, l: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
