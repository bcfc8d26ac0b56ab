//! Profile search over `lambda`.
//!
//! For each `lambda` on a grid the unique root `tau0(lambda)` of `dF/dtau` is
//! located by bisection inside [`TauBracket`], warm-started from the root at
//! the previous grid point. The resulting curve `lambda -> F(lambda, tau0)`
//! is scanned for an interior local maximum, which is then refined on a fine
//! grid.

use std::fmt;

use crate::error::{Error, Result};
use crate::math::{self, LN_SQRT_2PI};
use crate::params::{ClassicParams, ExtendedParams, ReparParams};
use crate::sample::Sample;

/// Fine `lambda` step used when refining a coarse maximum.
pub const REFINE_STEP: f64 = 5e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Positive,
    Negative,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Positive => 1.0,
            Branch::Negative => -1.0,
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branch::Positive => f.write_str("positive"),
            Branch::Negative => f.write_str("negative"),
        }
    }
}

/// Constants of the profile search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    /// Initial `tau` for the first grid point of each branch; `None` uses
    /// [`math::tau_star`].
    pub delta0: Option<f64>,
    /// Smallest `|lambda|` visited.
    pub eps0: f64,
    /// Relative bisection tolerance on `tau`.
    pub eps1: f64,
    /// Largest accepted `|dF/dtau|` at the bisection result.
    pub eps2: f64,
    pub lambda_max_pos: f64,
    pub lambda_min_neg: f64,
    pub dlambda: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            delta0: None,
            eps0: 0.05,
            eps1: 1e-14,
            eps2: 0.01,
            lambda_max_pos: 6.0,
            lambda_min_neg: -6.0,
            dlambda: 0.05,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("eps0", self.eps0),
            ("eps1", self.eps1),
            ("eps2", self.eps2),
            ("dlambda", self.dlambda),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if !(self.lambda_max_pos >= self.eps0) || !self.lambda_max_pos.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "lambda_max_pos = {} must be at least eps0 = {}",
                self.lambda_max_pos, self.eps0
            )));
        }
        if !(self.lambda_min_neg <= -self.eps0) || !self.lambda_min_neg.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "lambda_min_neg = {} must be at most -eps0 = {}",
                self.lambda_min_neg, -self.eps0
            )));
        }
        if let Some(d) = self.delta0 {
            if !d.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "delta0 must be finite, got {d}"
                )));
            }
        }
        Ok(())
    }

    fn branch_limit(&self, branch: Branch) -> f64 {
        match branch {
            Branch::Positive => self.lambda_max_pos,
            Branch::Negative => -self.lambda_min_neg,
        }
    }
}

/// Result of one bisection solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tau0 {
    pub tau0: f64,
    /// `lambda * x_e + tau0`, see [`math::gap_from_tau`].
    pub gap: f64,
    /// `|dF/dtau|` at `tau0`.
    pub residual: f64,
}

/// Finds `tau0(lambda)` by bisection on the sign of `dF/dtau`.
///
/// The bracket endpoints are tracked as gaps above the domain boundary so
/// that the arithmetic stays exact near the boundary; the stopping rule is
/// the relative width in `tau`, `(tau_max - tau_min) / |tau_max| <= eps1`.
/// A warm start strictly inside the bracket replaces whichever end its
/// derivative sign allows. The upper end is returned.
pub fn solve_tau0(
    sample: &Sample,
    lambda: f64,
    warm_tau: Option<f64>,
    config: &SearchConfig,
) -> Result<Tau0> {
    let bracket = math::tau_bracket(sample, lambda)?;
    let slope = |gap: f64| math::df_dtau_at_gap(sample, lambda, gap);

    let mut lo = 0.0;
    let mut hi = bracket.gap_upper;
    if let Some(tau) = warm_tau {
        if bracket.contains(tau) {
            let g = math::gap_from_tau(sample, lambda, tau);
            if g > lo && g < hi {
                if slope(g)? > 0.0 {
                    lo = g;
                } else {
                    hi = g;
                }
            }
        }
    }

    loop {
        let tau_hi = math::tau_from_gap(sample, lambda, hi);
        if (hi - lo) <= config.eps1 * tau_hi.abs() {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // adjacent floats; nothing left to split
            break;
        }
        if slope(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    Ok(Tau0 {
        tau0: math::tau_from_gap(sample, lambda, hi),
        gap: hi,
        residual: slope(hi)?.abs(),
    })
}

/// One recorded grid point of a profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfilePoint {
    pub lambda: f64,
    pub tau0: f64,
    pub f_value: f64,
    pub s_hat: f64,
    pub gap: f64,
    pub residual: f64,
}

impl ProfilePoint {
    pub fn repar(&self) -> ReparParams {
        ReparParams {
            lambda: self.lambda,
            tau: self.tau0,
            s: self.s_hat,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Truncation {
    ReachedLambdaLimit,
    ResidualExceeded { lambda: f64, residual: f64 },
}

impl fmt::Display for Truncation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Truncation::ReachedLambdaLimit => f.write_str("reached the lambda limit"),
            Truncation::ResidualExceeded { lambda, residual } => write!(
                f,
                "stopped at lambda = {lambda:.4}: |dF/dtau| = {residual:.3e} not below eps2"
            ),
        }
    }
}

/// The recorded profile along one branch, ordered by increasing `|lambda|`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileRecord {
    pub branch: Branch,
    pub step: f64,
    pub sample_size: usize,
    pub points: Vec<ProfilePoint>,
    pub truncation: Truncation,
}

fn march(
    sample: &Sample,
    branch: Branch,
    start: f64,
    end: f64,
    step: f64,
    warm_tau: f64,
    config: &SearchConfig,
) -> Result<ProfileRecord> {
    let sign = branch.sign();
    let steps = if end >= start {
        ((end - start) / step + 1e-9).floor() as usize
    } else {
        0
    };
    let mut points = Vec::with_capacity(steps + 1);
    let mut tau = warm_tau;
    let mut truncation = Truncation::ReachedLambdaLimit;
    for k in 0..=steps {
        let lambda = sign * (start + k as f64 * step);
        let root = solve_tau0(sample, lambda, Some(tau), config)?;
        tau = root.tau0;
        if !(root.residual < config.eps2) {
            truncation = Truncation::ResidualExceeded {
                lambda,
                residual: root.residual,
            };
            break;
        }
        points.push(ProfilePoint {
            lambda,
            tau0: root.tau0,
            f_value: math::f_objective_at_gap(sample, lambda, root.gap)?,
            s_hat: math::s_hat_at_gap(sample, lambda, root.gap)?,
            gap: root.gap,
            residual: root.residual,
        });
    }
    Ok(ProfileRecord {
        branch,
        step,
        sample_size: sample.len(),
        points,
        truncation,
    })
}

/// Marches one branch from `+-eps0` outwards by `dlambda`.
pub fn trace_profile(
    sample: &Sample,
    branch: Branch,
    config: &SearchConfig,
) -> Result<ProfileRecord> {
    config.validate()?;
    let warm = config.delta0.unwrap_or_else(|| math::tau_star(sample));
    march(
        sample,
        branch,
        config.eps0,
        config.branch_limit(branch),
        config.dlambda,
        warm,
        config,
    )
}

/// A located primary relative maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct PrmEstimate {
    pub repar: ReparParams,
    pub extended: ExtendedParams,
    /// Present only for `lambda > 0`.
    pub classic: Option<ClassicParams>,
    pub f_value: f64,
    /// `F - n ln sqrt(2 pi)`.
    pub log_likelihood: f64,
    pub lambda_resolution: f64,
    pub point: ProfilePoint,
    /// Grid neighbours on either side in `lambda` order.
    pub neighbors: (ProfilePoint, ProfilePoint),
}

impl PrmEstimate {
    fn new(
        point: ProfilePoint,
        neighbors: (ProfilePoint, ProfilePoint),
        n: usize,
        resolution: f64,
    ) -> PrmEstimate {
        let repar = point.repar();
        PrmEstimate {
            repar,
            extended: repar.to_extended(),
            classic: repar.to_classic().ok(),
            f_value: point.f_value,
            log_likelihood: point.f_value - n as f64 * LN_SQRT_2PI,
            lambda_resolution: resolution,
            point,
            neighbors,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoPrm {
    pub reason: String,
    pub positive: ProfileRecord,
    pub negative: ProfileRecord,
}

#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum PrmOutcome {
    Found(PrmEstimate),
    NotFound(Box<NoPrm>),
}

impl PrmOutcome {
    pub fn found(&self) -> Option<&PrmEstimate> {
        match self {
            PrmOutcome::Found(e) => Some(e),
            PrmOutcome::NotFound(_) => None,
        }
    }
}

/// Both branches joined into one curve ordered by increasing `lambda`.
pub fn combined_profile(pos: &ProfileRecord, neg: &ProfileRecord) -> Vec<ProfilePoint> {
    neg.points
        .iter()
        .rev()
        .chain(pos.points.iter())
        .copied()
        .collect()
}

/// Index of the highest strict interior local maximum of `values`; ties go
/// to the entry with smaller `key`.
pub(crate) fn best_interior_max(values: &[f64], key: impl Fn(usize) -> f64) -> Option<usize> {
    let mut best: Option<usize> = None;
    for k in 1..values.len().saturating_sub(1) {
        if values[k] > values[k - 1] && values[k] > values[k + 1] {
            best = match best {
                None => Some(k),
                Some(b) if values[k] > values[b] => Some(k),
                Some(b) if values[k] == values[b] && key(k) < key(b) => Some(k),
                keep => keep,
            };
        }
    }
    best
}

/// Looks for an interior local maximum of the joined profile.
pub fn detect_prm(pos: &ProfileRecord, neg: &ProfileRecord) -> Result<PrmOutcome> {
    for rec in [pos, neg] {
        if rec.points.is_empty() {
            return Err(Error::EmptyProfile(rec.branch));
        }
    }
    let curve = combined_profile(pos, neg);
    let f: Vec<f64> = curve.iter().map(|p| p.f_value).collect();
    match best_interior_max(&f, |k| curve[k].lambda.abs()) {
        Some(k) => Ok(PrmOutcome::Found(PrmEstimate::new(
            curve[k],
            (curve[k - 1], curve[k + 1]),
            pos.sample_size,
            pos.step.max(neg.step),
        ))),
        None => Ok(PrmOutcome::NotFound(Box::new(NoPrm {
            reason: format!(
                "the profile has no interior local maximum (positive branch {}; negative branch {})",
                pos.truncation, neg.truncation
            ),
            positive: pos.clone(),
            negative: neg.clone(),
        }))),
    }
}

/// Re-marches `[bracket_lo, bracket_hi]` with step [`REFINE_STEP`] and
/// returns the fine-grid maximum. `warm_tau` is the root at the end of the
/// bracket nearest `lambda = 0`. A bracket that straddles zero is marched
/// outward on both sides starting from `|lambda| = REFINE_STEP`.
pub fn refine_prm(
    sample: &Sample,
    bracket_lo: f64,
    bracket_hi: f64,
    warm_tau: f64,
    config: &SearchConfig,
) -> Result<PrmOutcome> {
    config.validate()?;
    if !(bracket_lo < bracket_hi) || bracket_lo == 0.0 || bracket_hi == 0.0 {
        return Err(Error::InvalidConfig(format!(
            "refinement bracket [{bracket_lo}, {bracket_hi}] must be ordered and exclude zero"
        )));
    }
    let (pos, neg) = if bracket_lo > 0.0 {
        let pos = march(
            sample,
            Branch::Positive,
            bracket_lo,
            bracket_hi,
            REFINE_STEP,
            warm_tau,
            config,
        )?;
        (pos, empty_record(sample, Branch::Negative))
    } else if bracket_hi < 0.0 {
        let neg = march(
            sample,
            Branch::Negative,
            -bracket_hi,
            -bracket_lo,
            REFINE_STEP,
            warm_tau,
            config,
        )?;
        (empty_record(sample, Branch::Positive), neg)
    } else {
        let pos = march(
            sample,
            Branch::Positive,
            REFINE_STEP,
            bracket_hi,
            REFINE_STEP,
            warm_tau,
            config,
        )?;
        let neg = march(
            sample,
            Branch::Negative,
            REFINE_STEP,
            -bracket_lo,
            REFINE_STEP,
            warm_tau,
            config,
        )?;
        (pos, neg)
    };

    let curve = combined_profile(&pos, &neg);
    let f: Vec<f64> = curve.iter().map(|p| p.f_value).collect();
    match best_interior_max(&f, |k| curve[k].lambda.abs()) {
        Some(k) => Ok(PrmOutcome::Found(PrmEstimate::new(
            curve[k],
            (curve[k - 1], curve[k + 1]),
            sample.len(),
            REFINE_STEP,
        ))),
        None => Ok(PrmOutcome::NotFound(Box::new(NoPrm {
            reason: format!(
                "refinement over [{bracket_lo:.4}, {bracket_hi:.4}] found no interior maximum"
            ),
            positive: pos,
            negative: neg,
        }))),
    }
}

fn empty_record(sample: &Sample, branch: Branch) -> ProfileRecord {
    ProfileRecord {
        branch,
        step: REFINE_STEP,
        sample_size: sample.len(),
        points: Vec::new(),
        truncation: Truncation::ReachedLambdaLimit,
    }
}

/// Everything produced by a full estimation run.
#[derive(Debug, Clone, PartialEq)]
pub struct Estimation {
    pub positive: ProfileRecord,
    pub negative: ProfileRecord,
    pub coarse: PrmOutcome,
    /// Equal to `coarse` when no maximum was found.
    pub refined: PrmOutcome,
}

/// Traces both branches, detects the coarse maximum and refines it.
pub fn estimate(sample: &Sample, config: &SearchConfig) -> Result<Estimation> {
    config.validate()?;
    let (positive, negative) = rayon::join(
        || trace_profile(sample, Branch::Positive, config),
        || trace_profile(sample, Branch::Negative, config),
    );
    let (positive, negative) = (positive?, negative?);
    let coarse = detect_prm(&positive, &negative)?;
    let refined = match &coarse {
        PrmOutcome::Found(est) => {
            let (lo, hi) = est.neighbors;
            let warm = if lo.lambda > 0.0 {
                lo.tau0
            } else if hi.lambda < 0.0 {
                hi.tau0
            } else {
                config.delta0.unwrap_or_else(|| math::tau_star(sample))
            };
            refine_prm(sample, lo.lambda, hi.lambda, warm, config)?
        }
        PrmOutcome::NotFound(_) => coarse.clone(),
    };
    Ok(Estimation {
        positive,
        negative,
        coarse,
        refined,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets;

    fn point_at(rec: &ProfileRecord, lambda: f64) -> ProfilePoint {
        *rec.points
            .iter()
            .find(|p| (p.lambda - lambda).abs() < 1e-9)
            .unwrap_or_else(|| panic!("no point at {lambda}"))
    }

    #[test]
    fn default_config_is_valid() {
        SearchConfig::default().validate().unwrap();
        let bad = SearchConfig {
            eps0: 0.0,
            ..SearchConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = SearchConfig {
            lambda_min_neg: -0.01,
            ..SearchConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn bearing_record_block() {
        let s = datasets::builtin(1).unwrap();
        let rec = trace_profile(&s, Branch::Positive, &SearchConfig::default()).unwrap();
        for (l, t, f) in [
            (0.85, -121.0106, -43.4512),
            (0.90, -129.4756, -43.4380),
            (0.95, -137.8374, -43.4433),
        ] {
            let p = point_at(&rec, l);
            assert!((p.tau0 - t).abs() < 5e-5, "{l}: tau {}", p.tau0);
            assert!((p.f_value - f).abs() < 5e-5, "{l}: F {}", p.f_value);
        }
    }

    #[test]
    fn solve_straddles_root() {
        let s = datasets::builtin(1).unwrap();
        let cfg = SearchConfig::default();
        for &l in &[0.3, 0.9, 2.0, -0.4, -1.5] {
            let r = solve_tau0(&s, l, None, &cfg).unwrap();
            let w = 10.0 * cfg.eps1 * r.tau0.abs();
            assert!(
                math::df_dtau(&s, l, r.tau0 - w).unwrap() > 0.0,
                "lambda {l}"
            );
            assert!(
                math::df_dtau(&s, l, r.tau0 + w).unwrap() < 0.0,
                "lambda {l}"
            );
        }
    }

    #[test]
    fn warm_start_does_not_change_root() {
        let s = datasets::builtin(2).unwrap();
        let cfg = SearchConfig::default();
        let cold = solve_tau0(&s, 0.7, None, &cfg).unwrap();
        for warm in [cold.tau0 - 5.0, cold.tau0 + 3.0, 1e9] {
            let hot = solve_tau0(&s, 0.7, Some(warm), &cfg).unwrap();
            assert!((hot.tau0 - cold.tau0).abs() <= 4.0 * cfg.eps1 * cold.tau0.abs());
        }
    }

    #[test]
    fn recorded_points_respect_invariants() {
        let cfg = SearchConfig::default();
        for d in 1..=6 {
            let s = datasets::builtin(d).unwrap();
            for branch in [Branch::Positive, Branch::Negative] {
                let rec = trace_profile(&s, branch, &cfg).unwrap();
                assert!(!rec.points.is_empty());
                let mut last = 0.0;
                for p in &rec.points {
                    assert!(p.lambda.abs() > last);
                    last = p.lambda.abs();
                    assert!(p.residual < cfg.eps2);
                    let b = math::tau_bracket(&s, p.lambda).unwrap();
                    assert!(p.gap > 0.0 && p.gap <= b.gap_upper);
                }
            }
        }
    }

    #[test]
    fn detection_on_reference_data() {
        let cfg = SearchConfig::default();
        let s = datasets::builtin(1).unwrap();
        let est = estimate(&s, &cfg).unwrap();
        let c = est.coarse.found().unwrap();
        assert!((c.repar.lambda - 0.90).abs() < 1e-9);

        let s = datasets::builtin(3).unwrap();
        let est = estimate(&s, &cfg).unwrap();
        let r = est.refined.found().unwrap();
        assert!(r.repar.lambda < 0.0);
        assert!(r.classic.is_none());

        let s = datasets::builtin(6).unwrap();
        let est = estimate(&s, &cfg).unwrap();
        assert!(matches!(est.coarse, PrmOutcome::NotFound(_)));
    }

    #[test]
    fn refinement_of_bearings() {
        let s = datasets::builtin(1).unwrap();
        let out = refine_prm(&s, 0.85, 0.95, -121.0106, &SearchConfig::default()).unwrap();
        let e = out.found().unwrap();
        assert!((e.repar.lambda - 0.9095).abs() < 1e-9);
        assert!((e.repar.tau - (-131.0716)).abs() < 5e-5);
        assert!(e.f_value >= -43.437_956_4);
        assert_eq!(e.lambda_resolution, REFINE_STEP);
    }

    #[test]
    fn empty_branch_is_an_error() {
        let s = datasets::builtin(1).unwrap();
        let rec = trace_profile(&s, Branch::Positive, &SearchConfig::default()).unwrap();
        let empty = empty_record(&s, Branch::Negative);
        assert_eq!(
            detect_prm(&rec, &empty),
            Err(Error::EmptyProfile(Branch::Negative))
        );
    }

    #[test]
    fn interior_max_rules() {
        // endpoints never count
        assert_eq!(best_interior_max(&[3.0, 1.0, 2.0], |_| 0.0), None);
        assert_eq!(best_interior_max(&[1.0, 2.0, 3.0], |_| 0.0), None);
        // largest wins
        assert_eq!(
            best_interior_max(&[0.0, 2.0, 0.0, 5.0, 0.0], |_| 0.0),
            Some(3)
        );
        // plateau is not a strict maximum
        assert_eq!(best_interior_max(&[0.0, 2.0, 2.0, 0.0], |_| 0.0), None);
        // tie goes to the smaller key
        let keys = [0.0, 3.0, 0.0, 1.0, 0.0];
        assert_eq!(
            best_interior_max(&[0.0, 2.0, 0.0, 2.0, 0.0], |k| keys[k]),
            Some(3)
        );
    }

    #[test]
    fn straddling_bracket_refines_both_sides() {
        // the bearing maximum lies inside [-0.05, 1.2], so the fine march has to
        // come out of zero on the positive side and still find it
        let s = datasets::builtin(1).unwrap();
        let out = refine_prm(&s, -0.05, 1.2, math::tau_star(&s), &SearchConfig::default()).unwrap();
        let e = out.found().unwrap();
        assert!((e.repar.lambda - 0.9095).abs() < 1e-9);
    }

    #[test]
    fn slope_is_large_close_to_the_boundary_relative_to_the_root() {
        let config = SearchConfig::default();
        for i in 1..=datasets::COUNT {
            let s = datasets::builtin(i).unwrap();
            for k in 1..=120 {
                for lambda in [0.05 * k as f64, -0.05 * k as f64] {
                    let root = solve_tau0(&s, lambda, None, &config).unwrap();
                    let d = math::df_dtau_at_gap(&s, lambda, 1e-12 * root.gap).unwrap();
                    assert!(d > 1e3, "Data {i}, lambda {lambda}: {d}");
                }
            }
        }
    }

    #[test]
    fn objective_at_upper_end_eventually_grows() {
        let upper_f = |s: &Sample, lambda: f64| {
            let b = math::tau_bracket(s, lambda).unwrap();
            math::f_objective_at_gap(s, lambda, b.gap_upper).unwrap()
        };
        for i in 1..=datasets::COUNT {
            let s = datasets::builtin(i).unwrap();
            let v: Vec<f64> = [2.0, 10.0, 15.0, 20.0]
                .iter()
                .map(|&l| upper_f(&s, l))
                .collect();
            assert!(v[1] < v[2] && v[2] < v[3], "Data {i}: {v:?}");
            assert!(v[3] - v[0] >= 10.0, "Data {i}: {v:?}");
        }
    }
}
