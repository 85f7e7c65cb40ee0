//! `--weights` grammar: `oscar:<λ1>,<λ2>` | `l1:<λ>` | `linf:<t1>` | `file:<path>`.
//!
//! The dimension is never part of the spec; it comes from the data.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use owl_core::WeightVector;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum WeightSpec {
    Oscar { lambda1: f64, lambda2: f64 },
    L1 { lambda: f64 },
    Linf { t1: f64 },
    File(PathBuf),
}

impl WeightSpec {
    /// Builds the weight vector for dimension `n`.
    pub fn resolve(&self, n: usize) -> Result<WeightVector, CliError> {
        let w = match self {
            WeightSpec::Oscar { lambda1, lambda2 } => WeightVector::oscar(n, *lambda1, *lambda2)?,
            WeightSpec::L1 { lambda } => WeightVector::l1(n, *lambda)?,
            WeightSpec::Linf { t1 } => WeightVector::linf(n, *t1)?,
            WeightSpec::File(path) => {
                let w = load_weight_file(path)?;
                if w.len() != n {
                    return Err(CliError::Dimension(format!(
                        "weight file {} has {} entries, data needs {n}",
                        path.display(),
                        w.len()
                    )));
                }
                w
            }
        };
        Ok(w)
    }
}

/// One decimal weight per line; blank lines are skipped.
pub fn load_weight_file(path: &Path) -> Result<WeightVector, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let v = line.parse::<f64>().map_err(|_| {
            CliError::Parse(format!(
                "{}:{}: not a number: {line:?}",
                path.display(),
                lineno + 1
            ))
        })?;
        values.push(v);
    }
    Ok(WeightVector::new(values)?)
}

fn number(kind: &str, s: &str) -> Result<f64, CliError> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| CliError::Parse(format!("{kind}: not a number: {s:?}")))
}

impl FromStr for WeightSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| CliError::Parse(format!("weight spec {s:?} has no ':'")))?;
        match kind {
            "oscar" => {
                let (a, b) = rest.split_once(',').ok_or_else(|| {
                    CliError::Parse(format!("oscar spec needs two values, got {rest:?}"))
                })?;
                Ok(WeightSpec::Oscar {
                    lambda1: number("oscar", a)?,
                    lambda2: number("oscar", b)?,
                })
            }
            "l1" => Ok(WeightSpec::L1 {
                lambda: number("l1", rest)?,
            }),
            "linf" => Ok(WeightSpec::Linf {
                t1: number("linf", rest)?,
            }),
            "file" if !rest.is_empty() => Ok(WeightSpec::File(PathBuf::from(rest))),
            "file" => Err(CliError::Parse("file spec needs a path".into())),
            other => Err(CliError::Parse(format!(
                "unknown weight kind {other:?} (expected oscar, l1, linf or file)"
            ))),
        }
    }
}

impl fmt::Display for WeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightSpec::Oscar { lambda1, lambda2 } => write!(f, "oscar:{lambda1},{lambda2}"),
            WeightSpec::L1 { lambda } => write!(f, "l1:{lambda}"),
            WeightSpec::Linf { t1 } => write!(f, "linf:{t1}"),
            WeightSpec::File(path) => write!(f, "file:{}", path.display()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_each_kind() {
        assert_eq!(
            "oscar:1,0.5".parse::<WeightSpec>().unwrap(),
            WeightSpec::Oscar {
                lambda1: 1.0,
                lambda2: 0.5
            }
        );
        assert_eq!(
            "l1:2".parse::<WeightSpec>().unwrap(),
            WeightSpec::L1 { lambda: 2.0 }
        );
        assert_eq!(
            "linf:3".parse::<WeightSpec>().unwrap(),
            WeightSpec::Linf { t1: 3.0 }
        );
        assert_eq!(
            "file:w.txt".parse::<WeightSpec>().unwrap(),
            WeightSpec::File("w.txt".into())
        );
        for bad in ["oscar:1", "l1:x", "nope:1", "l1", "file:"] {
            assert!(bad.parse::<WeightSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn resolves_against_dimension() {
        let w = "oscar:1,0.5"
            .parse::<WeightSpec>()
            .unwrap()
            .resolve(2)
            .unwrap();
        assert_eq!(w.as_slice(), &[1.5, 1.0]);
        let w = "linf:2".parse::<WeightSpec>().unwrap().resolve(3).unwrap();
        assert_eq!(w.as_slice(), &[2.0, 0.0, 0.0]);
        assert!("l1:0".parse::<WeightSpec>().unwrap().resolve(3).is_err());
    }

    #[test]
    fn weight_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.txt");
        std::fs::write(&path, "2\n1.5\n\n1\n").unwrap();
        let spec = WeightSpec::File(path.clone());
        assert_eq!(spec.resolve(3).unwrap().as_slice(), &[2.0, 1.5, 1.0]);
        assert!(matches!(spec.resolve(2), Err(CliError::Dimension(_))));
        std::fs::write(&path, "1\n2\n").unwrap();
        assert!(matches!(
            spec.resolve(2),
            Err(CliError::Weights(owl_core::WeightError::NotSorted { .. }))
        ));
    }

    fn spec_strategy() -> impl Strategy<Value = WeightSpec> {
        prop_oneof![
            (any::<f64>(), any::<f64>())
                .prop_map(|(lambda1, lambda2)| WeightSpec::Oscar { lambda1, lambda2 }),
            any::<f64>().prop_map(|lambda| WeightSpec::L1 { lambda }),
            any::<f64>().prop_map(|t1| WeightSpec::Linf { t1 }),
            "[a-z0-9_./]{1,20}".prop_map(|p| WeightSpec::File(p.into())),
        ]
        .prop_filter("NaN never compares equal", |s| match s {
            WeightSpec::Oscar { lambda1, lambda2 } => !lambda1.is_nan() && !lambda2.is_nan(),
            WeightSpec::L1 { lambda } => !lambda.is_nan(),
            WeightSpec::Linf { t1 } => !t1.is_nan(),
            WeightSpec::File(_) => true,
        })
    }

    proptest! {
        #[test]
        fn format_parse_round_trip(spec in spec_strategy()) {
            let text = spec.to_string();
            prop_assert_eq!(text.parse::<WeightSpec>().unwrap(), spec);
        }
    }
}
