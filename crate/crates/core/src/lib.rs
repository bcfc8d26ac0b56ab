//! Primary relative maximum (local MLE) of the three-parameter lognormal
//! likelihood.
//!
//! The threshold parameter is eliminated by working in the `(lambda, tau, s)`
//! parameterization of the extended lognormal family: `s` is profiled out in
//! closed form, `tau` is found by bisection for every `lambda` on a grid, and
//! the resulting one-dimensional profile shows directly whether an interior
//! maximum exists.
//!
//! ```
//! use lnprm::{datasets, search};
//!
//! let sample = datasets::builtin(1).unwrap();
//! let est = search::estimate(&sample, &search::SearchConfig::default()).unwrap();
//! let prm = est.refined.found().unwrap();
//! assert!((prm.repar.lambda - 0.9095).abs() < 1e-9);
//! ```

pub mod datasets;
pub mod error;
pub mod io;
pub mod math;
pub mod montecarlo;
pub mod params;
pub mod report;
pub mod sample;
pub mod search;

pub use error::{Error, Result};
pub use params::{ClassicParams, ExtendedParams, ReparParams};
pub use sample::Sample;
pub use search::{PrmOutcome, SearchConfig};
