//! Human-readable reports and CSV emitters used by the command-line tool.

use std::fmt::Write;

use crate::error::Result;
use crate::math;
use crate::sample::Sample;
use crate::search::{combined_profile, Estimation, PrmOutcome, ProfileRecord};

pub const PROFILE_HEADER: &str = "lambda,tau0,F,tau_upper,F_upper";
pub const CLASSIC_HEADER: &str = "alpha,log_likelihood";

/// 17 significant digits.
fn full(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn estimate_report(sample: &Sample, est: &Estimation) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "n = {}, mean = {:.4}", sample.len(), sample.mean());
    match &est.refined {
        PrmOutcome::Found(e) => {
            let r = e.repar;
            let x = e.extended;
            let _ = writeln!(out, "primary relative maximum found");
            let _ = writeln!(
                out,
                "  (lambda, tau, s)     = ({:.4}, {:.4}, {:.4})",
                r.lambda, r.tau, r.s
            );
            let _ = writeln!(
                out,
                "  (lambda, mu, sigma)  = ({:.4}, {:.4}, {:.4})",
                x.lambda, x.mu, x.sigma
            );
            match e.classic {
                Some(c) => {
                    let _ = writeln!(
                        out,
                        "  (alpha, beta, gamma) = ({:.4}, {:.4}, {:.4})",
                        c.alpha, c.beta, c.gamma
                    );
                }
                None => {
                    let _ = writeln!(
                        out,
                        "  note: lambda < 0, so there is no (alpha, beta, gamma) form; the fitted \
                         distribution is bounded above at {:.4}",
                        r.threshold()
                    );
                }
            }
            let _ = writeln!(
                out,
                "  F = {:.4}, log-likelihood = {:.4}",
                e.f_value, e.log_likelihood
            );
            let _ = writeln!(out, "  lambda resolution = {}", e.lambda_resolution);
            if let PrmOutcome::Found(c) = &est.coarse {
                let _ = writeln!(
                    out,
                    "  coarse grid maximum at lambda = {:.4} (step {})",
                    c.repar.lambda, c.lambda_resolution
                );
            }
        }
        PrmOutcome::NotFound(no) => {
            let _ = writeln!(out, "no PRM exists");
            let _ = writeln!(out, "  {}", no.reason);
            let _ = writeln!(
                out,
                "  recorded points: {} positive, {} negative",
                est.positive.points.len(),
                est.negative.points.len()
            );
            let _ = writeln!(
                out,
                "  an interior grid maximum is required; a profile rising toward the lambda limits is not reported"
            );
        }
    }
    out
}

/// Profile CSV in increasing `lambda` order, with the value of `F` at the
/// upper bracket end alongside for comparison.
pub fn profile_csv(sample: &Sample, pos: &ProfileRecord, neg: &ProfileRecord) -> Result<String> {
    let mut out = String::from(PROFILE_HEADER);
    out.push('\n');
    for p in combined_profile(pos, neg) {
        let b = math::tau_bracket(sample, p.lambda)?;
        let f_upper = math::f_objective_at_gap(sample, p.lambda, b.gap_upper)?;
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            full(p.lambda),
            full(p.tau0),
            full(p.f_value),
            full(b.upper),
            full(f_upper)
        );
    }
    Ok(out)
}

/// Evenly spaced thresholds from `from` to `to` inclusive.
pub fn alpha_grid(from: f64, to: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![from],
        _ => (0..points)
            .map(|k| from + (to - from) * k as f64 / (points - 1) as f64)
            .collect(),
    }
}

pub fn classic_profile_csv(sample: &Sample, alphas: &[f64]) -> Result<String> {
    let mut out = String::from(CLASSIC_HEADER);
    out.push('\n');
    for &a in alphas {
        let ll = math::classic_profile_loglik(sample, a)?;
        let _ = writeln!(out, "{},{}", full(a), full(ll));
    }
    Ok(out)
}

/// Gnuplot script drawing the profile CSV: solid line for `F(lambda, tau0)`,
/// dotted for `F` at the upper bracket end.
pub fn profile_plot_script(csv_path: &str) -> String {
    format!(
        "set datafile separator ','\n\
         set key autotitle columnhead\n\
         set xlabel 'lambda'\n\
         set ylabel 'F'\n\
         plot '{csv_path}' using 1:3 with lines lw 2 title 'F(lambda, tau0)', \\\n\
         \x20    '' using 1:5 with lines dt 3 title 'F(lambda, tau_U)'\n\
         pause mouse close\n"
    )
}

pub fn classic_plot_script(csv_path: &str) -> String {
    format!(
        "set datafile separator ','\n\
         set key autotitle columnhead\n\
         set xlabel 'alpha'\n\
         set ylabel 'ln L(alpha)'\n\
         plot '{csv_path}' using 1:2 with lines lw 2 title 'profile log-likelihood'\n\
         pause mouse close\n"
    )
}
