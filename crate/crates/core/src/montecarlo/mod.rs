//! Simulation studies on samples drawn from the extended lognormal.
//!
//! Standard normals come from `rand_distr::StandardNormal` (ziggurat) driven
//! by a ChaCha8 stream. Each replication gets its own stream, seeded from
//! `(seed, n, lambda, replication)` through a SplitMix64 mix, so results do
//! not depend on thread scheduling.

mod munro_wixley;

pub use munro_wixley::{
    extended_loglik, munro_wixley_search, newton_solve, score, MwBranch, MwOutcome, MwPoint,
    NewtonFailure, NEWTON_MAX_ITER, NEWTON_TOL, SUCCESS_CRITERION,
};

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::params::check_lambda;
use crate::sample::Sample;
use crate::search::{self, Branch, PrmOutcome, SearchConfig};

/// Draws `n` observations `mu + sigma * (exp(lambda Z) - 1) / lambda`,
/// redrawing the whole sample in the (measure-zero) event of tied extremes.
pub fn sample_extended_lognormal<R: Rng + ?Sized>(
    n: usize,
    lambda: f64,
    mu: f64,
    sigma: f64,
    rng: &mut R,
) -> Result<Sample> {
    check_lambda(lambda)?;
    if !(sigma > 0.0) || !mu.is_finite() || !sigma.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "sampling needs finite mu and sigma > 0 (mu = {mu}, sigma = {sigma})"
        )));
    }
    if n < 3 {
        return Err(Error::TooFewObservations(n));
    }
    let mut raw = vec![0.0; n];
    loop {
        for v in raw.iter_mut() {
            let z: f64 = rng.sample(StandardNormal);
            *v = mu + sigma * (lambda * z).exp_m1() / lambda;
        }
        if let Ok(s) = Sample::new(&raw) {
            return Ok(s);
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of the random stream for one replication of one cell.
pub fn replication_seed(seed: u64, n: usize, lambda: f64, replication: usize) -> u64 {
    let mut h = splitmix64(seed);
    h = splitmix64(h ^ n as u64);
    h = splitmix64(h ^ lambda.to_bits());
    splitmix64(h ^ replication as u64)
}

pub fn replication_rng(seed: u64, n: usize, lambda: f64, replication: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(replication_seed(seed, n, lambda, replication))
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub sample_sizes: Vec<usize>,
    pub lambdas: Vec<f64>,
    pub mu: f64,
    pub sigma: f64,
    pub replications: usize,
    pub seed: u64,
    pub search: SearchConfig,
}

impl Default for StudyConfig {
    fn default() -> Self {
        StudyConfig {
            sample_sizes: vec![10, 15, 20],
            lambdas: vec![0.01, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0],
            mu: 0.0,
            sigma: 1.0,
            replications: 1000,
            seed: 7,
            search: SearchConfig::default(),
        }
    }
}

impl StudyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::InvalidConfig(
                "replications must be at least 1".into(),
            ));
        }
        if !(self.sigma > 0.0) || !self.mu.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "need sigma > 0 and finite mu (mu = {}, sigma = {})",
                self.mu, self.sigma
            )));
        }
        if let Some(&n) = self.sample_sizes.iter().find(|&&n| n < 3) {
            return Err(Error::TooFewObservations(n));
        }
        for &l in &self.lambdas {
            check_lambda(l)?;
        }
        self.search.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StudyKind {
    /// Fraction of replications with an interior profile maximum.
    PrmExistence,
    /// Among replications with a maximum, the fraction whose `lambda` is positive.
    PositiveLambda,
    /// Fraction of replications where the Newton comparator succeeds.
    MunroWixleySuccess,
}

impl StudyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StudyKind::PrmExistence => "prm_existence",
            StudyKind::PositiveLambda => "positive_lambda",
            StudyKind::MunroWixleySuccess => "munro_wixley_success",
        }
    }

    pub fn method(self) -> Method {
        match self {
            StudyKind::PrmExistence | StudyKind::PositiveLambda => Method::Profile,
            StudyKind::MunroWixleySuccess => Method::MunroWixley,
        }
    }
}

impl fmt::Display for StudyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Bisection profile search.
    Profile,
    MunroWixley,
}

impl Method {
    pub fn kinds(self) -> &'static [StudyKind] {
        match self {
            Method::Profile => &[StudyKind::PrmExistence, StudyKind::PositiveLambda],
            Method::MunroWixley => &[StudyKind::MunroWixleySuccess],
        }
    }
}

/// Per-replication verdict of one method.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdict {
    pub found: bool,
    pub positive: bool,
}

/// Coarse-grid judgement, as used in the simulation tables: refinement
/// never changes the sign of lambda or whether a maximum exists.
pub fn judge_profile(sample: &Sample, config: &SearchConfig) -> Result<Verdict> {
    let pos = search::trace_profile(sample, Branch::Positive, config)?;
    let neg = search::trace_profile(sample, Branch::Negative, config)?;
    let outcome = match search::detect_prm(&pos, &neg) {
        Ok(o) => o,
        Err(Error::EmptyProfile(_)) => {
            return Ok(Verdict {
                found: false,
                positive: false,
            })
        }
        Err(e) => return Err(e),
    };
    Ok(match outcome {
        PrmOutcome::Found(e) => Verdict {
            found: true,
            positive: e.repar.lambda > 0.0,
        },
        PrmOutcome::NotFound(_) => Verdict {
            found: false,
            positive: false,
        },
    })
}

pub fn judge_munro_wixley(sample: &Sample, config: &SearchConfig) -> Verdict {
    let out = munro_wixley_search(sample, config);
    Verdict {
        found: out.success,
        positive: out.estimate.is_some_and(|p| p.lambda > 0.0),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellCounts {
    pub n: usize,
    pub lambda: f64,
    pub replications: usize,
    pub found: usize,
    pub positive: usize,
}

/// Runs every `(n, lambda)` cell for one method. Replications run in
/// parallel; counts are identical for any thread count.
pub fn run_cells(config: &StudyConfig, method: Method) -> Result<Vec<CellCounts>> {
    config.validate()?;
    let cells: Vec<(usize, f64)> = config
        .sample_sizes
        .iter()
        .flat_map(|&n| config.lambdas.iter().map(move |&l| (n, l)))
        .collect();
    let reps = config.replications;
    let verdicts: Vec<Verdict> = (0..cells.len() * reps)
        .into_par_iter()
        .map(|job| {
            let (n, lambda) = cells[job / reps];
            let mut rng = replication_rng(config.seed, n, lambda, job % reps);
            let sample = sample_extended_lognormal(n, lambda, config.mu, config.sigma, &mut rng)?;
            match method {
                Method::Profile => judge_profile(&sample, &config.search),
                Method::MunroWixley => Ok(judge_munro_wixley(&sample, &config.search)),
            }
        })
        .collect::<Result<_>>()?;
    Ok(cells
        .iter()
        .zip(verdicts.chunks(reps))
        .map(|(&(n, lambda), chunk)| CellCounts {
            n,
            lambda,
            replications: reps,
            found: chunk.iter().filter(|v| v.found).count(),
            positive: chunk.iter().filter(|v| v.found && v.positive).count(),
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateRow {
    pub n: usize,
    pub lambda: f64,
    pub rate: f64,
    pub count: usize,
    pub denominator: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateTable {
    pub kind: StudyKind,
    pub replications: usize,
    pub seed: u64,
    pub rows: Vec<RateRow>,
}

impl RateTable {
    pub fn from_counts(kind: StudyKind, config: &StudyConfig, counts: &[CellCounts]) -> RateTable {
        let rows = counts
            .iter()
            .map(|c| {
                let (count, denominator) = match kind {
                    StudyKind::PrmExistence | StudyKind::MunroWixleySuccess => {
                        (c.found, c.replications)
                    }
                    StudyKind::PositiveLambda => (c.positive, c.found),
                };
                let rate = if denominator == 0 {
                    0.0
                } else {
                    count as f64 / denominator as f64
                };
                RateRow {
                    n: c.n,
                    lambda: c.lambda,
                    rate,
                    count,
                    denominator,
                }
            })
            .collect();
        RateTable {
            kind,
            replications: config.replications,
            seed: config.seed,
            rows,
        }
    }

    pub fn rate(&self, n: usize, lambda: f64) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.n == n && r.lambda == lambda)
            .map(|r| r.rate)
    }

    /// Rows for one sample size, in configured `lambda` order.
    pub fn row_for(&self, n: usize) -> Vec<RateRow> {
        self.rows.iter().filter(|r| r.n == n).copied().collect()
    }

    pub fn csv_header() -> &'static str {
        "kind,n,lambda,rate,replications,seed,count,denominator"
    }

    /// Data lines, no header.
    pub fn csv_rows(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                self.kind,
                r.n,
                r.lambda,
                r.rate,
                self.replications,
                self.seed,
                r.count,
                r.denominator
            ));
        }
        out
    }

    pub fn to_csv(&self) -> String {
        format!("{}\n{}", Self::csv_header(), self.csv_rows())
    }
}

/// One rate table of the given kind.
pub fn run_study(config: &StudyConfig, kind: StudyKind) -> Result<RateTable> {
    let counts = run_cells(config, kind.method())?;
    Ok(RateTable::from_counts(kind, config, &counts))
}

/// All tables a method produces from a single pass over the replications.
pub fn run_method(config: &StudyConfig, method: Method) -> Result<Vec<RateTable>> {
    let counts = run_cells(config, method)?;
    Ok(method
        .kinds()
        .iter()
        .map(|&k| RateTable::from_counts(k, config, &counts))
        .collect())
}
