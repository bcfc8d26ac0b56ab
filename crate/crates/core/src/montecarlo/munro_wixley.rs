//! Comparator: the same `lambda` grid march, but solving the two score
//! equations in `(mu, sigma)` with Newton's method at every grid point,
//! continuing from the previous solution.

use crate::math::LN_SQRT_2PI;
use crate::params::ExtendedParams;
use crate::sample::Sample;
use crate::search::{best_interior_max, Branch, SearchConfig};

/// Newton stops once `max(|d/dmu|, |d/dsigma|) * sigma / n` drops below this.
pub const NEWTON_TOL: f64 = 1e-10;
pub const NEWTON_MAX_ITER: usize = 50;

/// How success is judged; emitted with every comparator rate table.
pub const SUCCESS_CRITERION: &str = "success = the (mu, sigma) Newton continuation, started at \
(xbar, population sd) for lambda = +-eps0 and warm-started from the previous grid point, \
converges (scaled score < 1e-10 within 50 iterations, iterates inside sigma + lambda (x_i - mu) > 0) \
at every grid point up to and including both neighbours of an interior maximum of the profile \
log-likelihood; a branch ends at its first failed solve";

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NewtonFailure {
    LeftDomain,
    SingularHessian,
    NoConvergence,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MwPoint {
    pub lambda: f64,
    pub mu: f64,
    pub sigma: f64,
    pub log_likelihood: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MwBranch {
    pub branch: Branch,
    pub points: Vec<MwPoint>,
    /// `Some((lambda, why))` when a Newton solve failed.
    pub failure: Option<(f64, NewtonFailure)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MwOutcome {
    pub success: bool,
    pub estimate: Option<MwPoint>,
    pub positive: MwBranch,
    pub negative: MwBranch,
}

/// `ln L~(lambda, mu, sigma)`; `None` outside the support.
pub fn extended_loglik(sample: &Sample, p: &ExtendedParams) -> Option<f64> {
    let ln_sigma = p.sigma.ln();
    let two_l2 = 2.0 * p.lambda * p.lambda;
    let mut total = 0.0;
    for &x in sample.values() {
        let a = p.sigma + p.lambda * (x - p.mu);
        if !(a > 0.0) {
            return None;
        }
        let y = a.ln() - ln_sigma;
        total += -LN_SQRT_2PI - a.ln() - y * y / two_l2;
    }
    Some(total)
}

/// Gradient and Hessian of `ln L~` in `(mu, sigma)`.
///
/// With `a_i = sigma + lambda (x_i - mu)` and `y_i = ln a_i - ln sigma`:
///
/// ```text
/// d/dmu        = sum (lambda^2 + y) / (lambda a)
/// d/dsigma     = sum -1/a - (y / lambda^2)(1/a - 1/sigma)
/// d2/dmu2      = sum (lambda^2 + y - 1) / a^2
/// d2/dmu dsig  = sum (1 - a/sigma - lambda^2 - y) / (lambda a^2)
/// d2/dsigma2   = sum 1/a^2 - ((1/a - 1/sigma)^2 + y (1/sigma^2 - 1/a^2)) / lambda^2
/// ```
pub fn score(sample: &Sample, p: &ExtendedParams) -> Option<([f64; 2], [[f64; 2]; 2])> {
    let l = p.lambda;
    let l2 = l * l;
    let inv_s = p.sigma.recip();
    let ln_sigma = p.sigma.ln();
    let mut g = [0.0; 2];
    let mut h = [[0.0; 2]; 2];
    for &x in sample.values() {
        let a = p.sigma + l * (x - p.mu);
        if !(a > 0.0) {
            return None;
        }
        let y = a.ln() - ln_sigma;
        let inv_a = a.recip();
        let d = inv_a - inv_s;
        g[0] += (l2 + y) * inv_a / l;
        g[1] += -inv_a - y * d / l2;
        h[0][0] += (l2 + y - 1.0) * inv_a * inv_a;
        h[0][1] += (1.0 - a * inv_s - l2 - y) * inv_a * inv_a / l;
        h[1][1] += inv_a * inv_a - (d * d + y * (inv_s * inv_s - inv_a * inv_a)) / l2;
    }
    h[1][0] = h[0][1];
    Some((g, h))
}

fn scaled_residual(g: [f64; 2], sigma: f64, n: usize) -> f64 {
    g[0].abs().max(g[1].abs()) * sigma / n as f64
}

/// Newton iteration on the score equations at fixed `lambda`.
pub fn newton_solve(
    sample: &Sample,
    lambda: f64,
    mu0: f64,
    sigma0: f64,
) -> Result<(f64, f64, usize), NewtonFailure> {
    let n = sample.len();
    let (mut mu, mut sigma) = (mu0, sigma0);
    for it in 0..=NEWTON_MAX_ITER {
        if !(sigma > 0.0) || !mu.is_finite() || !sigma.is_finite() {
            return Err(NewtonFailure::LeftDomain);
        }
        let p = ExtendedParams { lambda, mu, sigma };
        let (g, h) = score(sample, &p).ok_or(NewtonFailure::LeftDomain)?;
        if scaled_residual(g, sigma, n) < NEWTON_TOL {
            return Ok((mu, sigma, it));
        }
        if it == NEWTON_MAX_ITER {
            break;
        }
        let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
        if det == 0.0 || !det.is_finite() {
            return Err(NewtonFailure::SingularHessian);
        }
        // solve H d = -g
        let d_mu = (-g[0] * h[1][1] + g[1] * h[0][1]) / det;
        let d_sigma = (-g[1] * h[0][0] + g[0] * h[1][0]) / det;
        mu += d_mu;
        sigma += d_sigma;
    }
    Err(NewtonFailure::NoConvergence)
}

fn march(sample: &Sample, branch: Branch, config: &SearchConfig) -> MwBranch {
    let sign = branch.sign();
    let limit = match branch {
        Branch::Positive => config.lambda_max_pos,
        Branch::Negative => -config.lambda_min_neg,
    };
    let steps = ((limit - config.eps0) / config.dlambda + 1e-9).floor() as usize;
    let n = sample.len() as f64;
    let mut mu = sample.mean();
    let mut sigma = (sample
        .values()
        .iter()
        .map(|x| (x - mu).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    let mut points = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        let lambda = sign * (config.eps0 + k as f64 * config.dlambda);
        match newton_solve(sample, lambda, mu, sigma) {
            Ok((m, s, iterations)) => {
                mu = m;
                sigma = s;
                let p = ExtendedParams { lambda, mu, sigma };
                let log_likelihood = extended_loglik(sample, &p).expect("converged inside domain");
                points.push(MwPoint {
                    lambda,
                    mu,
                    sigma,
                    log_likelihood,
                    iterations,
                });
            }
            Err(why) => {
                return MwBranch {
                    branch,
                    points,
                    failure: Some((lambda, why)),
                }
            }
        }
    }
    MwBranch {
        branch,
        points,
        failure: None,
    }
}

/// Runs the comparator on both branches and reports whether it located an
/// interior maximum; see [`SUCCESS_CRITERION`].
pub fn munro_wixley_search(sample: &Sample, config: &SearchConfig) -> MwOutcome {
    let positive = march(sample, Branch::Positive, config);
    let negative = march(sample, Branch::Negative, config);
    let curve: Vec<MwPoint> = negative
        .points
        .iter()
        .rev()
        .chain(positive.points.iter())
        .copied()
        .collect();
    let ll: Vec<f64> = curve.iter().map(|p| p.log_likelihood).collect();
    let estimate = best_interior_max(&ll, |k| curve[k].lambda.abs()).map(|k| curve[k]);
    MwOutcome {
        success: estimate.is_some(),
        estimate,
        positive,
        negative,
    }
}
