//! The three equivalent parameterizations of the extended lognormal family
//! and the exact maps between them.
//!
//! * classic `(alpha, beta, gamma)`: threshold, shape, scale; only defined
//!   for a positive shape.
//! * extended `(lambda, mu, sigma)`: the Munro-Wixley form, which admits a
//!   negative `lambda` and tends to `N(mu, sigma^2)` as `lambda -> 0`.
//! * reparameterized `(lambda, tau, s)` with `tau = sigma - lambda * mu` and
//!   `s = ln sigma`; the log-likelihood profiles out `s` in closed form.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtendedParams {
    pub lambda: f64,
    pub mu: f64,
    pub sigma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReparParams {
    pub lambda: f64,
    pub tau: f64,
    pub s: f64,
}

pub(crate) fn check_lambda(lambda: f64) -> Result<()> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::InvalidLambda(lambda));
    }
    Ok(())
}

impl ClassicParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        if !(beta > 0.0
            && gamma > 0.0
            && alpha.is_finite()
            && beta.is_finite()
            && gamma.is_finite())
        {
            return Err(Error::InvalidConfig(format!(
                "classic parameters need beta > 0 and gamma > 0 (beta = {beta}, gamma = {gamma})"
            )));
        }
        Ok(ClassicParams { alpha, beta, gamma })
    }

    pub fn to_extended(self) -> ExtendedParams {
        ExtendedParams {
            lambda: self.beta,
            mu: self.alpha + self.gamma,
            sigma: self.beta * self.gamma,
        }
    }
}

impl ExtendedParams {
    pub fn new(lambda: f64, mu: f64, sigma: f64) -> Result<Self> {
        check_lambda(lambda)?;
        if !(sigma > 0.0 && sigma.is_finite() && mu.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "extended parameters need a finite mu and sigma > 0 (mu = {mu}, sigma = {sigma})"
            )));
        }
        Ok(ExtendedParams { lambda, mu, sigma })
    }

    /// `tau = sigma - lambda * mu`, `s = ln sigma`.
    pub fn to_repar(self) -> ReparParams {
        ReparParams {
            lambda: self.lambda,
            tau: self.sigma - self.lambda * self.mu,
            s: self.sigma.ln(),
        }
    }

    /// `alpha = mu - sigma / lambda`, `beta = lambda`, `gamma = sigma / lambda`.
    pub fn to_classic(self) -> Result<ClassicParams> {
        if self.lambda < 0.0 {
            return Err(Error::NegativeLambda(self.lambda));
        }
        let gamma = self.sigma / self.lambda;
        Ok(ClassicParams {
            alpha: self.mu - gamma,
            beta: self.lambda,
            gamma,
        })
    }

    /// Log-density of one observation; `None` outside the support.
    pub fn ln_pdf(&self, x: f64) -> Option<f64> {
        let a = self.sigma + self.lambda * (x - self.mu);
        if a <= 0.0 {
            return None;
        }
        let y = (a.ln() - self.sigma.ln()) / self.lambda;
        Some(-crate::math::LN_SQRT_2PI - a.ln() - 0.5 * y * y)
    }
}

impl ReparParams {
    pub fn new(lambda: f64, tau: f64, s: f64) -> Result<Self> {
        check_lambda(lambda)?;
        if !(tau.is_finite() && s.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "tau and s must be finite (tau = {tau}, s = {s})"
            )));
        }
        Ok(ReparParams { lambda, tau, s })
    }

    /// `sigma = e^s`, `mu = (e^s - tau) / lambda`.
    pub fn to_extended(self) -> ExtendedParams {
        let sigma = self.s.exp();
        ExtendedParams {
            lambda: self.lambda,
            mu: (sigma - self.tau) / self.lambda,
            sigma,
        }
    }

    /// Threshold `alpha = -tau / lambda`, valid for either sign of lambda.
    pub fn threshold(&self) -> f64 {
        -self.tau / self.lambda
    }

    pub fn to_classic(self) -> Result<ClassicParams> {
        if self.lambda < 0.0 {
            return Err(Error::NegativeLambda(self.lambda));
        }
        let sigma = self.s.exp();
        Ok(ClassicParams {
            alpha: self.threshold(),
            beta: self.lambda,
            gamma: sigma / self.lambda,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
    }

    #[test]
    fn repar_to_extended_small_cases() {
        let e = ReparParams::new(1.0, 1.0, 0.0).unwrap().to_extended();
        assert_eq!((e.lambda, e.mu, e.sigma), (1.0, 0.0, 1.0));
        let e = ReparParams::new(2.0, -1.0, 0.0).unwrap().to_extended();
        assert_eq!((e.lambda, e.mu, e.sigma), (2.0, 1.0, 1.0));
    }

    #[test]
    fn extended_to_repar_small_cases() {
        let r = ExtendedParams::new(1.0, 0.0, 1.0).unwrap().to_repar();
        assert_eq!((r.lambda, r.tau, r.s), (1.0, 1.0, 0.0));
        let r = ExtendedParams::new(2.0, 1.0, 1.0).unwrap().to_repar();
        assert_eq!((r.lambda, r.tau, r.s), (2.0, -1.0, 0.0));
    }

    #[test]
    fn extended_to_classic_unit() {
        let c = ExtendedParams::new(1.0, 1.0, 1.0)
            .unwrap()
            .to_classic()
            .unwrap();
        assert_eq!((c.alpha, c.beta, c.gamma), (0.0, 1.0, 1.0));
        let back = c.to_extended();
        assert_eq!((back.lambda, back.mu, back.sigma), (1.0, 1.0, 1.0));
    }

    #[test]
    fn threshold_for_bearing_estimate() {
        // alpha = 131.0716 / 0.9095
        let r = ReparParams::new(0.9095, -131.0716, 3.9).unwrap();
        let c = r.to_extended().to_classic().unwrap();
        assert!(
            (c.alpha - 144.113_908_741_066_5).abs() < 1e-9,
            "{}",
            c.alpha
        );
        assert!(rel(c.alpha, r.to_classic().unwrap().alpha) < 1e-12);
    }

    #[test]
    fn negative_lambda_has_no_classic_form() {
        let e = ReparParams::new(-0.2955, 0.5984, -1.0)
            .unwrap()
            .to_extended();
        assert_eq!(e.to_classic(), Err(Error::NegativeLambda(-0.2955)));
    }

    #[test]
    fn zero_lambda_rejected() {
        assert_eq!(
            ReparParams::new(0.0, 1.0, 0.0),
            Err(Error::InvalidLambda(0.0))
        );
        assert!(ExtendedParams::new(1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn ln_pdf_matches_classic_density() {
        // classic lognormal density evaluated directly
        let c = ClassicParams::new(2.0, 0.7, 3.0).unwrap();
        let x: f64 = 4.5;
        let z = ((x - c.alpha) / c.gamma).ln() / c.beta;
        let direct =
            -(2.0 * std::f64::consts::PI).sqrt().ln() - ((x - c.alpha) * c.beta).ln() - 0.5 * z * z;
        let via = c.to_extended().ln_pdf(x).unwrap();
        assert!(rel(direct, via) < 1e-13);
        assert!(c.to_extended().ln_pdf(1.0).is_none());
    }

    proptest! {
        #[test]
        fn repar_round_trip(
            lambda in prop_oneof![-6.0..-1e-3f64, 1e-3..6.0f64],
            tau in -1e3..1e3f64,
            s in -5.0..8.0f64,
        ) {
            let r = ReparParams::new(lambda, tau, s).unwrap();
            let back = r.to_extended().to_repar();
            prop_assert_eq!(back.lambda, lambda);
            // tau = sigma - lambda * mu loses digits only when tau is tiny next to sigma
            let scale = tau.abs().max(s.exp());
            prop_assert!((back.tau - tau).abs() <= 1e-12 * scale * 4.0);
            prop_assert!((back.s - s).abs() <= 1e-12 * s.abs().max(1.0));
        }

        #[test]
        fn extended_round_trip(
            lambda in prop_oneof![-6.0..-1e-3f64, 1e-3..6.0f64],
            mu in -1e3..1e3f64,
            sigma in 1e-2..1e3f64,
        ) {
            let e = ExtendedParams::new(lambda, mu, sigma).unwrap();
            let back = e.to_repar().to_extended();
            prop_assert!(rel(back.sigma, sigma) <= 1e-12);
            let scale = mu.abs().max(sigma / lambda.abs());
            prop_assert!((back.mu - mu).abs() <= 1e-12 * scale * 4.0);
        }

        #[test]
        fn threshold_identity(lambda in 1e-3..6.0f64, tau in -1e3..1e3f64, s in -5.0..8.0f64) {
            let r = ReparParams::new(lambda, tau, s).unwrap();
            let alpha = r.to_extended().to_classic().unwrap().alpha;
            let scale = (tau / lambda).abs().max(s.exp() / lambda);
            prop_assert!((alpha - (-tau / lambda)).abs() <= 1e-12 * scale * 4.0);
        }
    }
}
