//! Closed-form quantities of the reparameterized log-likelihood.
//!
//! For a fixed shape `lambda`, profiling `s` out of the log-likelihood leaves
//!
//! ```text
//! F(lambda, tau) = -(1 / 2 lambda^2) * sum (ln a_i - m)^2 - sum ln a_i,
//! a_i = lambda * x_i + tau,   m = (1/n) sum ln a_i
//! ```
//!
//! which is the textbook three-sum expression with the first two sums merged
//! into a centered sum of squares. Every `a_i` is formed as
//! `lambda * (x_i - x_e) + gap` where `x_e` is the observation that touches the
//! domain boundary (the minimum for `lambda > 0`, the maximum for
//! `lambda < 0`) and `gap = lambda * x_e + tau`. The boundary term is then the
//! gap itself, exact to the last bit, which matters because the admissible
//! `tau` interval shrinks like `exp(-lambda^2)`.
//!
//! The `*_at_gap` variants take the gap directly and stay accurate at large
//! `|lambda|` where `tau` itself can no longer resolve the interval.

use crate::error::{Error, Result};
use crate::params::{check_lambda, ReparParams};
use crate::sample::Sample;

/// `ln sqrt(2 pi)`.
pub const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// The observation at which `lambda * x + tau` is smallest.
pub fn anchor(sample: &Sample, lambda: f64) -> f64 {
    if lambda > 0.0 {
        sample.min()
    } else {
        sample.max()
    }
}

/// `lambda * x_e + tau`, rounded once.
pub fn gap_from_tau(sample: &Sample, lambda: f64, tau: f64) -> f64 {
    lambda.mul_add(anchor(sample, lambda), tau)
}

pub fn tau_from_gap(sample: &Sample, lambda: f64, gap: f64) -> f64 {
    (-lambda).mul_add(anchor(sample, lambda), gap)
}

/// Sums over `ln a_i` shared by `F` and its `tau` derivatives.
#[derive(Debug, Clone, Copy)]
struct LogSums {
    n: f64,
    /// sum ln a_i
    log: f64,
    /// sum (ln a_i - m)^2
    centered_sq: f64,
    /// sum 1 / a_i
    inv: f64,
    /// sum (ln a_i - m) / a_i
    centered_inv: f64,
    /// sum 1 / a_i^2
    inv_sq: f64,
    /// sum (ln a_i - m) / a_i^2
    centered_inv_sq: f64,
}

impl LogSums {
    fn new(sample: &Sample, lambda: f64, gap: f64) -> Option<LogSums> {
        LogSums::over(sample.values(), anchor(sample, lambda), lambda, gap)
    }

    fn over(xs: &[f64], x_e: f64, lambda: f64, gap: f64) -> Option<LogSums> {
        if !(gap > 0.0) || !gap.is_finite() {
            return None;
        }
        let n = xs.len() as f64;
        let logs: Vec<f64> = xs
            .iter()
            .map(|&x| (lambda * (x - x_e) + gap).ln())
            .collect();
        let log: f64 = logs.iter().sum();
        let m = log / n;

        let mut sums = LogSums {
            n,
            log,
            centered_sq: 0.0,
            inv: 0.0,
            centered_inv: 0.0,
            inv_sq: 0.0,
            centered_inv_sq: 0.0,
        };
        for (&x, &l) in xs.iter().zip(&logs) {
            let r = (lambda * (x - x_e) + gap).recip();
            let c = l - m;
            sums.centered_sq += c * c;
            sums.inv += r;
            sums.centered_inv += c * r;
            sums.inv_sq += r * r;
            sums.centered_inv_sq += c * r * r;
        }
        Some(sums)
    }

    fn f(&self, lambda: f64) -> f64 {
        -self.centered_sq / (2.0 * lambda * lambda) - self.log
    }

    fn df(&self, lambda: f64) -> f64 {
        -self.centered_inv / (lambda * lambda) - self.inv
    }

    fn d2f(&self, lambda: f64) -> f64 {
        (self.inv * self.inv / self.n + self.centered_inv_sq - self.inv_sq) / (lambda * lambda)
            + self.inv_sq
    }
}

fn sums_at_gap(sample: &Sample, lambda: f64, gap: f64) -> Result<LogSums> {
    check_lambda(lambda)?;
    LogSums::new(sample, lambda, gap).ok_or(Error::DomainViolation {
        lambda,
        tau: tau_from_gap(sample, lambda, gap),
    })
}

fn sums_at_tau(sample: &Sample, lambda: f64, tau: f64) -> Result<LogSums> {
    check_lambda(lambda)?;
    LogSums::new(sample, lambda, gap_from_tau(sample, lambda, tau))
        .ok_or(Error::DomainViolation { lambda, tau })
}

/// The profiled objective `F(lambda, tau)`.
pub fn f_objective(sample: &Sample, lambda: f64, tau: f64) -> Result<f64> {
    Ok(sums_at_tau(sample, lambda, tau)?.f(lambda))
}

/// `dF/dtau`.
pub fn df_dtau(sample: &Sample, lambda: f64, tau: f64) -> Result<f64> {
    Ok(sums_at_tau(sample, lambda, tau)?.df(lambda))
}

/// `d^2F/dtau^2`.
pub fn d2f_dtau2(sample: &Sample, lambda: f64, tau: f64) -> Result<f64> {
    Ok(sums_at_tau(sample, lambda, tau)?.d2f(lambda))
}

pub fn f_objective_at_gap(sample: &Sample, lambda: f64, gap: f64) -> Result<f64> {
    Ok(sums_at_gap(sample, lambda, gap)?.f(lambda))
}

pub fn df_dtau_at_gap(sample: &Sample, lambda: f64, gap: f64) -> Result<f64> {
    Ok(sums_at_gap(sample, lambda, gap)?.df(lambda))
}

pub fn d2f_dtau2_at_gap(sample: &Sample, lambda: f64, gap: f64) -> Result<f64> {
    Ok(sums_at_gap(sample, lambda, gap)?.d2f(lambda))
}

/// The open interval that contains the unique root of `dF/dtau` for one
/// `lambda`: `(-lambda x_n, tau_U+)` for `lambda > 0` and
/// `(-lambda x_1, tau_U-)` for `lambda < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauBracket {
    pub lambda: f64,
    pub lower: f64,
    pub upper: f64,
    /// `upper - lower`, computed without cancellation.
    pub gap_upper: f64,
}

impl TauBracket {
    pub fn width(&self) -> f64 {
        self.gap_upper
    }

    pub fn contains(&self, tau: f64) -> bool {
        self.lower < tau && tau < self.upper
    }
}

/// Builds the root bracket for `lambda`.
///
/// `tau_U+ = -lambda x_n (1 - (xbar / x_n) e^{-lambda^2}) / (1 - e^{-lambda^2})`
/// is rewritten as `-lambda x_n + lambda (xbar - x_n) / expm1(lambda^2)`; the
/// second term is the bracket width and never cancels.
pub fn tau_bracket(sample: &Sample, lambda: f64) -> Result<TauBracket> {
    check_lambda(lambda)?;
    let x_e = anchor(sample, lambda);
    let gap_upper = lambda * (sample.mean() - x_e) / (lambda * lambda).exp_m1();
    Ok(TauBracket {
        lambda,
        lower: -lambda * x_e,
        upper: tau_from_gap(sample, lambda, gap_upper),
        gap_upper,
    })
}

/// Location of the relative maximum of the `lambda -> 0` limit of `F`:
/// `(1/n) sqrt(sum_{i<j} (x_i - x_j)^2)`, i.e. the population standard
/// deviation.
pub fn tau_star(sample: &Sample) -> f64 {
    let mean = sample.mean();
    let ss: f64 = sample.values().iter().map(|x| (x - mean).powi(2)).sum();
    (ss / sample.len() as f64).sqrt()
}

/// The maximizing `s` for fixed `(lambda, tau)`: the mean of `ln a_i`.
pub fn s_hat(sample: &Sample, lambda: f64, tau: f64) -> Result<f64> {
    let sums = sums_at_tau(sample, lambda, tau)?;
    Ok(sums.log / sums.n)
}

pub(crate) fn s_hat_at_gap(sample: &Sample, lambda: f64, gap: f64) -> Result<f64> {
    let sums = sums_at_gap(sample, lambda, gap)?;
    Ok(sums.log / sums.n)
}

/// Full log-likelihood `sum ln fbar(x_i; lambda, tau, s)` evaluated term by
/// term.
pub fn repar_loglik(sample: &Sample, p: &ReparParams) -> Result<f64> {
    check_lambda(p.lambda)?;
    let gap = gap_from_tau(sample, p.lambda, p.tau);
    if !(gap > 0.0) {
        return Err(Error::DomainViolation {
            lambda: p.lambda,
            tau: p.tau,
        });
    }
    let x_e = anchor(sample, p.lambda);
    let two_l2 = 2.0 * p.lambda * p.lambda;
    Ok(sample
        .values()
        .iter()
        .map(|&x| {
            let a = p.lambda * (x - x_e) + gap;
            let d = a.ln() - p.s;
            -LN_SQRT_2PI - a.ln() - d * d / two_l2
        })
        .sum())
}

/// `ln Lhat(alpha)`: the classic log-likelihood with shape and scale
/// profiled out for a fixed threshold `alpha < x_n`.
///
/// With `gamma_hat = exp(mean ln(x_i - alpha))` and `beta_hat` the RMS of
/// `ln(x_i - alpha) - ln gamma_hat`, this reduces to
/// `-n ln sqrt(2 pi) - sum ln(x_i - alpha) - n ln beta_hat - n / 2`.
pub fn classic_profile_loglik(sample: &Sample, alpha: f64) -> Result<f64> {
    let x_min = sample.min();
    if !(alpha < x_min) {
        return Err(Error::AlphaOutOfDomain { alpha, x_min });
    }
    let n = sample.len() as f64;
    // x_i - alpha = (x_i - x_n) + (x_n - alpha)
    let offset = x_min - alpha;
    let logs: Vec<f64> = sample
        .values()
        .iter()
        .map(|&x| ((x - x_min) + offset).ln())
        .collect();
    let sum: f64 = logs.iter().sum();
    let mean = sum / n;
    let var = logs.iter().map(|l| (l - mean).powi(2)).sum::<f64>() / n;
    let beta_hat = var.sqrt();
    Ok(-n * LN_SQRT_2PI - sum - n * beta_hat.ln() - 0.5 * n)
}

/// `(beta_hat(alpha), gamma_hat(alpha))` for the classic profile.
pub fn classic_profile_params(sample: &Sample, alpha: f64) -> Result<(f64, f64)> {
    let x_min = sample.min();
    if !(alpha < x_min) {
        return Err(Error::AlphaOutOfDomain { alpha, x_min });
    }
    let n = sample.len() as f64;
    let offset = x_min - alpha;
    let logs: Vec<f64> = sample
        .values()
        .iter()
        .map(|&x| ((x - x_min) + offset).ln())
        .collect();
    let mean = logs.iter().sum::<f64>() / n;
    let var = logs.iter().map(|l| (l - mean).powi(2)).sum::<f64>() / n;
    Ok((var.sqrt(), mean.exp()))
}
