//! Observation files and dataset references.
//!
//! Input format: one observation per line in plain decimal or scientific
//! notation; blank lines and lines starting with `#` are skipped. Parsing
//! goes through `f64::from_str` and never consults the locale.

use std::path::{Path, PathBuf};

use crate::datasets;
use crate::error::{Error, Extreme, Result};
use crate::sample::Sample;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DatasetRef {
    BuiltIn(usize),
    File(PathBuf),
}

impl DatasetRef {
    pub fn load(&self) -> Result<Sample> {
        match self {
            DatasetRef::BuiltIn(i) => datasets::builtin(*i),
            DatasetRef::File(p) => read_sample(p),
        }
    }
}

/// `(line number, value)` pairs, 1-based lines.
pub fn parse_observations(text: &str) -> Result<Vec<(usize, f64)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let v: f64 = t.parse().map_err(|_| Error::Parse {
            line: i + 1,
            message: format!("cannot parse {t:?} as a number"),
        })?;
        out.push((i + 1, v));
    }
    Ok(out)
}

/// Parses and validates, reporting problems against input line numbers.
pub fn sample_from_text(text: &str) -> Result<Sample> {
    let obs = parse_observations(text)?;
    let raw: Vec<f64> = obs.iter().map(|&(_, v)| v).collect();
    Sample::new(&raw).map_err(|e| match e {
        Error::NonFiniteValue { index } => Error::Parse {
            line: obs[index].0,
            message: format!("{} is not a finite value", obs[index].1),
        },
        Error::TiedExtreme(which) => {
            let target = match which {
                Extreme::Largest => raw.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                Extreme::Smallest => raw.iter().copied().fold(f64::INFINITY, f64::min),
            };
            let lines: Vec<usize> = obs
                .iter()
                .filter(|&&(_, v)| v == target)
                .map(|&(l, _)| l)
                .collect();
            let list: Vec<String> = lines.iter().map(|l| l.to_string()).collect();
            Error::Parse {
                line: lines[0],
                message: format!(
                    "the {which} value {target} is repeated on lines {}; extremes must be unique",
                    list.join(", ")
                ),
            }
        }
        other => other,
    })
}

pub fn read_sample(path: &Path) -> Result<Sample> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    sample_from_text(&text)
}

/// Writes observations one per line with a comment header; values use the
/// shortest representation that parses back to the same `f64`.
pub fn format_observations(header: &str, values: &[f64]) -> String {
    let mut out = String::new();
    for line in header.lines() {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    for v in values {
        out.push_str(&format!("{v}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_blank_lines() {
        let s = sample_from_text("# header\n3\n\n  1.5e0 \n# more\n2\n").unwrap();
        assert_eq!(s.values(), &[3.0, 2.0, 1.5]);
    }

    #[test]
    fn bad_number_reports_line() {
        let e = sample_from_text("1\n2\n3,5\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e:?}");
    }

    #[test]
    fn tie_reports_lines() {
        let e = sample_from_text("# x\n1\n5\n2\n1\n").unwrap_err();
        match e {
            Error::Parse { line, message } => {
                assert_eq!(line, 2);
                assert!(message.contains("2, 5"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn non_finite_reports_line() {
        let e = sample_from_text("1\n2\nNaN\n4\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e:?}");
    }

    #[test]
    fn builtin_round_trip() {
        for d in 1..=datasets::COUNT {
            let raw = datasets::raw(d).unwrap();
            let text = format_observations("Data", &raw);
            assert_eq!(
                sample_from_text(&text).unwrap(),
                datasets::builtin(d).unwrap()
            );
        }
    }
}
