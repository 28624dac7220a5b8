use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A constructor parameter is outside its admissible domain.
    #[error("parameter out of domain: {0}")]
    ParamDomain(String),

    /// A numeric moment estimate failed to converge (effectively infinite).
    #[error("moment integration diverged: {0}")]
    InfiniteMoment(String),

    /// A numeric grid was too coarse to certify a required property.
    #[error("grid resolution insufficient: {0}")]
    Resolution(String),

    /// An evaluation point or grid lies outside the distribution's support.
    #[error("evaluation outside support: {0}")]
    Domain(String),

    /// The requested computation needs a capability the input lacks
    /// (typically a density for a cdf-only numeric distribution).
    #[error("unsupported input: {0}")]
    Unsupported(String),

    /// No fixed point of the mean residual life exists in the search range.
    #[error("no fixed point found: {0}")]
    NoFixedPoint(String),

    /// Realized demand does not exceed the wholesale price.
    #[error("no transaction: realized demand {alpha} <= wholesale price {r_star}")]
    NoTransaction { alpha: f64, r_star: f64 },

    /// A monotone map handle violated its contract on a probe grid.
    #[error("contract violation: {0}")]
    Contract(String),

    /// Mutually inconsistent internal results; indicates a bug.
    #[error("internal inconsistency: {0}")]
    Internal(String),

    /// A declarative distribution spec failed to parse.
    #[error("spec parse error at {pointer}: {message}")]
    SpecParse { pointer: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
