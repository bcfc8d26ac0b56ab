use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("need at least 3 observations, got {0}")]
    TooFewObservations(usize),

    #[error("the {0} observation is not unique; the largest and smallest values must be strict")]
    TiedExtreme(Extreme),

    #[error("observation {index} is not finite")]
    NonFiniteValue { index: usize },

    #[error("lambda must be finite and nonzero, got {0}")]
    InvalidLambda(f64),

    #[error("lambda = {0} is negative; the (alpha, beta, gamma) form is undefined")]
    NegativeLambda(f64),

    #[error(
        "lambda * x + tau must be positive for every observation (lambda = {lambda}, tau = {tau})"
    )]
    DomainViolation { lambda: f64, tau: f64 },

    #[error("alpha = {alpha} must lie strictly below the smallest observation {x_min}")]
    AlphaOutOfDomain { alpha: f64, x_min: f64 },

    #[error("the {0} branch recorded no profile points")]
    EmptyProfile(crate::search::Branch),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown built-in dataset {0} (expected 1..=6)")]
    UnknownDataset(usize),

    #[error("{0}")]
    Io(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extreme {
    Largest,
    Smallest,
}

impl std::fmt::Display for Extreme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Extreme::Largest => f.write_str("largest"),
            Extreme::Smallest => f.write_str("smallest"),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
