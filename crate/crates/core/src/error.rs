use thiserror::Error;

/// Errors produced by market construction, clearing, and the solvers.
#[derive(Debug, Clone, Error)]
pub enum MarketError {
    #[error("invalid {field}: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    /// Both sides of the market are empty, or an operation needs a side that
    /// is missing (e.g. abundance with no buyers).
    #[error("degenerate market: {0}")]
    DegenerateMarket(&'static str),

    /// Excess demand never changes sign on the search bracket.
    #[error(
        "no crossing of demand and supply on [{lo}, {hi}]: \
         residual {f_lo} at the lower end, {f_hi} at the upper end"
    )]
    NoCrossing { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    /// The implicit-function slope needs a nonzero density at the
    /// equilibrium price.
    #[error("scarcity derivative undefined at p* = {price}: degenerate density")]
    DerivativeUndefined { price: f64 },

    #[error("economy is not productive: spectral radius {radius} is not below 1")]
    NonProductive { radius: f64 },

    #[error("linear system is singular to working precision: {0}")]
    IllConditioned(String),

    /// Neumann partial sums stopped shrinking; the input matrix is almost
    /// certainly non-productive.
    #[error("series increments not shrinking after {terms} terms (last increment {increment})")]
    SeriesDiverging { terms: usize, increment: f64 },

    #[error("session log inconsistent with market: {0}")]
    InconsistentLog(String),

    #[error("index {index} out of range for {len} goods")]
    IndexOutOfRange { index: usize, len: usize },
}

impl MarketError {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        MarketError::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }
}
