use std::fs::File;
use std::io::Read;
use std::path::Path;

use crate::dist::{make_empirical, EmpiricalDist};
use crate::error::{Error, Result};

/// Which column of a CSV file holds the losses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnSelector {
    Name(String),
    /// Zero-based.
    Index(usize),
}

impl std::str::FromStr for ColumnSelector {
    type Err = std::convert::Infallible;

    /// Digits select by index, anything else by header name.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s.trim().parse::<usize>() {
            Ok(i) => ColumnSelector::Index(i),
            Err(_) => ColumnSelector::Name(s.trim().to_string()),
        })
    }
}

/// What happened while reading a sample.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IngestReport {
    pub rows: usize,
    pub header: Option<String>,
    /// 1-based line numbers of rows whose selected field was empty.
    pub skipped_lines: Vec<usize>,
}

/// Reads one numeric column of a CSV file into an [`EmpiricalDist`].
///
/// A single header row is detected when the first row's selected field is
/// not numeric. Every value is divided by `scale` when given.
pub fn read_sample_csv(
    path: impl AsRef<Path>,
    column: &ColumnSelector,
    scale: Option<f64>,
) -> Result<(EmpiricalDist, IngestReport)> {
    let mut text = String::new();
    File::open(path.as_ref())?.read_to_string(&mut text)?;
    parse_sample_csv(&text, column, scale)
}

/// [`read_sample_csv`] on in-memory text.
pub fn parse_sample_csv(
    text: &str,
    column: &ColumnSelector,
    scale: Option<f64>,
) -> Result<(EmpiricalDist, IngestReport)> {
    if let Some(s) = scale {
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::invalid(format!("scale must be positive, got {s}")));
        }
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let mut report = IngestReport::default();
    let mut values = Vec::new();
    let mut index: Option<usize> = match column {
        ColumnSelector::Index(i) => Some(*i),
        ColumnSelector::Name(_) => None,
    };
    let mut first = true;
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if first {
            first = false;
            match column {
                ColumnSelector::Name(name) => {
                    let i = record.iter().position(|h| h == name).ok_or_else(|| Error::Parse {
                        line,
                        message: format!("no column named `{name}` in header"),
                    })?;
                    index = Some(i);
                    report.header = Some(name.clone());
                    continue;
                }
                ColumnSelector::Index(i) => {
                    if let Some(field) = record.get(*i) {
                        if !field.is_empty() && field.parse::<f64>().is_err() {
                            report.header = Some(field.to_string());
                            continue;
                        }
                    }
                }
            }
        }
        let i = index.expect("column resolved on first row");
        let field = record.get(i).unwrap_or("");
        if field.is_empty() {
            report.skipped_lines.push(line);
            continue;
        }
        let v: f64 = field.parse().map_err(|_| Error::Parse {
            line,
            message: format!("`{field}` is not a number"),
        })?;
        if !v.is_finite() || v < 0.0 {
            return Err(Error::Parse {
                line,
                message: format!("loss {v} is negative or not finite"),
            });
        }
        values.push(match scale {
            Some(s) => v / s,
            None => v,
        });
    }
    report.rows = values.len();
    if values.is_empty() {
        return Err(Error::InvalidSample("selected column is empty".into()));
    }
    Ok((make_empirical(values, None)?, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::Distribution;

    fn name(s: &str) -> ColumnSelector {
        ColumnSelector::Name(s.into())
    }

    #[test]
    fn header_and_rows() {
        let (d, r) = parse_sample_csv("loss\n0\n2\n", &name("loss"), None).unwrap();
        assert_eq!(d.values(), &[0.0, 2.0]);
        assert_eq!(r.rows, 2);
        assert_eq!(r.header.as_deref(), Some("loss"));
    }

    #[test]
    fn header_autodetected_by_index() {
        let (d, r) = parse_sample_csv("year,loss\n1992,15500\n1989,2000\n", &ColumnSelector::Index(1), Some(1e3)).unwrap();
        assert_eq!(d.values(), &[2.0, 15.5]);
        assert_eq!(r.header.as_deref(), Some("loss"));
        let (d, r) = parse_sample_csv("3\n4\n", &ColumnSelector::Index(0), None).unwrap();
        assert_eq!(d.mean(), 3.5);
        assert!(r.header.is_none());
    }

    #[test]
    fn negative_value_names_line() {
        let err = parse_sample_csv("loss\n1\n-3\n", &name("loss"), None).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse_sample_csv("loss\n1\n−3\n", &name("loss"), None).unwrap_err();
        assert!(err.to_string().starts_with("line 3"), "{err}");
    }

    #[test]
    fn skipped_and_missing() {
        let (_, r) = parse_sample_csv("a,b\n1,2\n3,\n5,6\n", &name("b"), None).unwrap();
        assert_eq!(r.skipped_lines, vec![3]);
        assert!(parse_sample_csv("a\n", &name("a"), None).is_err());
        assert!(parse_sample_csv("a\n1\n", &name("z"), None).is_err());
        assert!(parse_sample_csv("a\n1\n2\n", &name("a"), Some(0.0)).is_err());
    }

    #[test]
    fn selector_parsing() {
        assert_eq!("2".parse::<ColumnSelector>().unwrap(), ColumnSelector::Index(2));
        assert_eq!("loss".parse::<ColumnSelector>().unwrap(), name("loss"));
    }
}
