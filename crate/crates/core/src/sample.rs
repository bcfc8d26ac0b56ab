//! Validated observation sets.

use crate::error::{Error, Extreme, Result};

/// Observations sorted in descending order, with a strictly unique maximum
/// and minimum.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
    mean: f64,
}

impl Sample {
    /// Validates and sorts raw observations.
    pub fn new(raw: &[f64]) -> Result<Self> {
        if let Some(index) = raw.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue { index });
        }
        if raw.len() < 3 {
            return Err(Error::TooFewObservations(raw.len()));
        }
        let mut values = raw.to_vec();
        values.sort_by(|a, b| b.total_cmp(a));
        let n = values.len();
        if values[0] <= values[1] {
            return Err(Error::TiedExtreme(Extreme::Largest));
        }
        if values[n - 2] <= values[n - 1] {
            return Err(Error::TiedExtreme(Extreme::Smallest));
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        Ok(Sample { values, mean })
    }

    /// Descending order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn max(&self) -> f64 {
        self.values[0]
    }

    pub fn min(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Applies `x -> scale * x + shift` to every observation. `scale` must
    /// be positive.
    pub fn affine(&self, scale: f64, shift: f64) -> Result<Sample> {
        let raw: Vec<f64> = self.values.iter().map(|x| scale * x + shift).collect();
        Sample::new(&raw)
    }

    /// The sample with every observation negated.
    pub fn mirrored(&self) -> Sample {
        let raw: Vec<f64> = self.values.iter().map(|x| -x).collect();
        Sample::new(&raw).expect("negation preserves strict extremes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorts_descending() {
        let s = Sample::new(&[3.0, 1.0, 2.0]).unwrap();
        assert_eq!(s.values(), &[3.0, 2.0, 1.0]);
        assert_eq!(s.len(), 3);
        assert_eq!(s.mean(), 2.0);
    }

    #[test]
    fn rejects_ties_at_extremes() {
        assert_eq!(
            Sample::new(&[1.0, 1.0, 1.0]),
            Err(Error::TiedExtreme(Extreme::Largest))
        );
        assert_eq!(
            Sample::new(&[5.0, 1.0, 1.0]),
            Err(Error::TiedExtreme(Extreme::Smallest))
        );
        // interior ties are fine
        assert!(Sample::new(&[5.0, 2.0, 2.0, 1.0]).is_ok());
    }

    #[test]
    fn rejects_short_and_non_finite() {
        assert_eq!(Sample::new(&[1.0, 2.0]), Err(Error::TooFewObservations(2)));
        assert_eq!(
            Sample::new(&[1.0, f64::NAN, 2.0]),
            Err(Error::NonFiniteValue { index: 1 })
        );
        assert_eq!(
            Sample::new(&[f64::INFINITY]),
            Err(Error::NonFiniteValue { index: 0 })
        );
    }

    #[test]
    fn mirror_negates() {
        let s = Sample::new(&[3.0, 1.0, 2.0]).unwrap();
        assert_eq!(s.mirrored().values(), &[-1.0, -2.0, -3.0]);
    }
}
