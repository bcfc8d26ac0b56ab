//! The six reference datasets used throughout the test suite and the CLI.

use crate::error::{Error, Result};
use crate::sample::Sample;

pub const COUNT: usize = 6;

/// Fatigue life in hours of 10 bearings.
const BEARINGS: [f64; 10] = [
    152.7, 172.0, 172.5, 173.3, 193.0, 204.7, 216.5, 234.9, 262.6, 422.6,
];

/// Times to failure of vehicles.
const VEHICLES: [f64; 20] = [
    184.0, 250.0, 439.0, 444.0, 450.0, 478.0, 487.0, 524.0, 688.0, 850.0, 1048.0, 1280.0, 1364.0,
    1488.0, 1513.0, 1860.0, 1947.0, 1991.0, 2200.0, 2446.0,
];

/// Strengths of 15 cm fibres.
const FIBRES: [f64; 46] = [
    0.37, 0.40, 0.70, 0.75, 0.80, 0.81, 0.83, 0.86, 0.92, 0.92, 0.94, 0.95, 0.98, 1.03, 1.06, 1.06,
    1.08, 1.09, 1.10, 1.10, 1.13, 1.14, 1.15, 1.17, 1.20, 1.20, 1.21, 1.22, 1.25, 1.28, 1.28, 1.29,
    1.29, 1.30, 1.35, 1.35, 1.37, 1.37, 1.38, 1.40, 1.40, 1.42, 1.43, 1.51, 1.53, 1.61,
];

/// Menon's example, stored as exponents; the observations are `e^k`.
const MENON_EXPONENTS: [f64; 20] = [
    -6.824, -3.506, -2.64, -1.686, -1.064, -0.832, -0.758, -0.754, -0.684, -0.438, -0.41, -0.216,
    -0.03, 0.032, 0.438, 0.716, 1.262, 1.954, 2.208, 4.054,
];

/// Beach pollution counts.
const POLLUTION: [f64; 20] = [
    109.0, 111.0, 154.0, 200.0, 282.0, 327.0, 336.0, 482.0, 718.0, 900.0, 918.0, 1045.0, 1082.0,
    1345.0, 1415.0, 1918.0, 2120.0, 5900.0, 6091.0, 53600.0,
];

/// Simulated draw with lambda = 0.4, mu = 0, sigma = 1; has no interior
/// likelihood maximum.
const SIMULATED: [f64; 10] = [
    -0.912527, -0.905886, -0.836045, -0.382619, -0.319501, 0.030242, 0.326860, 2.325620, 4.333967,
    5.663170,
];

pub fn description(index: usize) -> Result<&'static str> {
    Ok(match index {
        1 => "fatigue life in hours of 10 bearings",
        2 => "times to failure of vehicles",
        3 => "strengths of 15 cm fibres",
        4 => "Menon's data example (stored as exp of the tabulated exponents)",
        5 => "pollution data",
        6 => "artificial data set generated in Monte Carlo simulation",
        _ => return Err(Error::UnknownDataset(index)),
    })
}

/// Raw observations in table order.
pub fn raw(index: usize) -> Result<Vec<f64>> {
    Ok(match index {
        1 => BEARINGS.to_vec(),
        2 => VEHICLES.to_vec(),
        3 => FIBRES.to_vec(),
        4 => MENON_EXPONENTS.iter().map(|k| k.exp()).collect(),
        5 => POLLUTION.to_vec(),
        6 => SIMULATED.to_vec(),
        _ => return Err(Error::UnknownDataset(index)),
    })
}

pub fn builtin(index: usize) -> Result<Sample> {
    Sample::new(&raw(index)?)
}
