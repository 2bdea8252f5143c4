use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported dimension N = {0} (need N >= {1})")]
    UnsupportedDimension(u32, u32),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A hypothesis of the existence theory is violated; the payload names it.
    #[error("regime error: {0}")]
    Regime(String),

    #[error("pair is not admissible: mu*|v|_{{2*}}^{{2*}} + 2* int |u|^{{2*-1}} v = {0:e} <= 0")]
    NotAdmissible(f64),

    #[error("quadrature did not converge: refinements differ by {rel_diff:e} (relative)")]
    QuadratureNonconvergence { rel_diff: f64 },

    #[error("iteration stagnated after {0} steps")]
    Stagnation(usize),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
}

pub type Result<T> = std::result::Result<T, Error>;
