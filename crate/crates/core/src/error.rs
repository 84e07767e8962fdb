use thiserror::Error;

/// Errors raised by the toolkit.
///
/// Quadrature divergence is not an error: it is carried as a
/// flag on [`crate::quadrature::QuadResult`] and surfaces as
/// [`crate::extended::Extended::Infinite`] in norms and weights.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole of the Gamma function at {re} + {im}i")]
    Pole { re: f64, im: f64 },

    #[error("Nyquist violation: frequency {xi} needs more than {needed} samples, got {samples}")]
    Nyquist { xi: i64, samples: usize, needed: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("numeric divergence: {0}")]
    Divergence(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
