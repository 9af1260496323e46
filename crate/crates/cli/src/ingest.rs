//! Point data from CSV, JSON or inline lists.

use std::fs;
use std::path::Path;

use serde_json::Value;
use starmetric::{Point, PointSet, StarMetricSpace};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{source_name}: row {row}, column {col}: {msg}")]
    Cell {
        source_name: String,
        row: usize,
        col: usize,
        msg: String,
    },
    #[error("{source_name}: row {row} has {found} values, expected {expected}")]
    Ragged {
        source_name: String,
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("{0}: no points")]
    Empty(String),
    #[error("{source_name}: {msg}")]
    Malformed { source_name: String, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}

/// A point set together with the row numbers it came from.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub points: PointSet,
    pub source: String,
    pub format: Format,
    /// 1-based source row of each point.
    pub rows: Vec<usize>,
}

fn parse_number(cell: &str) -> Result<f64, String> {
    let cell = cell.trim();
    if cell.is_empty() {
        return Err("empty cell".into());
    }
    let v: f64 = cell.parse().map_err(|_| format!("{cell:?} is not a number"))?;
    if !v.is_finite() {
        return Err(format!("{cell:?} is not finite"));
    }
    Ok(v)
}

fn build(source: &str, format: Format, rows: Vec<(usize, Vec<f64>)>) -> Result<Dataset, IngestError> {
    let Some((_, first)) = rows.first() else {
        return Err(IngestError::Empty(source.into()));
    };
    let expected = first.len();
    if expected == 0 {
        return Err(IngestError::Malformed {
            source_name: source.into(),
            msg: "points need at least one coordinate".into(),
        });
    }
    let mut points = Vec::with_capacity(rows.len());
    let mut numbers = Vec::with_capacity(rows.len());
    for (row, coords) in rows {
        if coords.len() != expected {
            return Err(IngestError::Ragged {
                source_name: source.into(),
                row,
                expected,
                found: coords.len(),
            });
        }
        points.push(Point::new(coords).map_err(|e| IngestError::Malformed {
            source_name: source.into(),
            msg: e.to_string(),
        })?);
        numbers.push(row);
    }
    let points = PointSet::new(points)
        .map_err(|e| IngestError::Malformed {
            source_name: source.into(),
            msg: e.to_string(),
        })?
        .with_source(source);
    Ok(Dataset {
        points,
        source: source.into(),
        format,
        rows: numbers,
    })
}

/// One point per row. The first row is a header when none of its cells
/// parses as a number.
pub fn parse_csv(text: &str, source: &str) -> Result<Dataset, IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| IngestError::Malformed {
            source_name: source.into(),
            msg: e.to_string(),
        })?;
        let row = record.position().map_or(i + 1, |p| p.line() as usize);
        if record.iter().all(|c| c.is_empty()) {
            continue;
        }
        if rows.is_empty() && i == 0 && record.iter().all(|c| parse_number(c).is_err()) {
            continue;
        }
        let coords = record
            .iter()
            .enumerate()
            .map(|(j, c)| {
                parse_number(c).map_err(|msg| IngestError::Cell {
                    source_name: source.into(),
                    row,
                    col: j + 1,
                    msg,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push((row, coords));
    }
    build(source, Format::Csv, rows)
}

/// An array of arrays of numbers.
pub fn parse_json(text: &str, source: &str) -> Result<Dataset, IngestError> {
    let malformed = |msg: String| IngestError::Malformed {
        source_name: source.into(),
        msg,
    };
    let value: Value = serde_json::from_str(text).map_err(|e| malformed(e.to_string()))?;
    let Value::Array(items) = value else {
        return Err(malformed("expected an array of arrays of numbers".into()));
    };
    let mut rows = Vec::with_capacity(items.len());
    for (i, item) in items.iter().enumerate() {
        let row = i + 1;
        let Value::Array(cells) = item else {
            return Err(malformed(format!("row {row} is not an array")));
        };
        let coords = cells
            .iter()
            .enumerate()
            .map(|(j, c)| {
                c.as_f64().ok_or_else(|| IngestError::Cell {
                    source_name: source.into(),
                    row,
                    col: j + 1,
                    msg: format!("{c} is not a number"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push((row, coords));
    }
    build(source, Format::Json, rows)
}

pub fn ingest(path: &Path, format: Option<Format>) -> Result<Dataset, IngestError> {
    let text = fs::read_to_string(path).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let source = path.display().to_string();
    match format.unwrap_or_else(|| Format::from_path(path)) {
        Format::Csv => parse_csv(&text, &source),
        Format::Json => parse_json(&text, &source),
    }
}

/// Inline points: `;` separates points, `,` separates coordinates. A list
/// without `;` is read as scalars when `arity` is 1.
pub fn parse_inline(text: &str, arity: usize) -> Result<Dataset, IngestError> {
    let source = "--points";
    let groups: Vec<&str> = if text.contains(';') || arity != 1 {
        text.split(';').collect()
    } else {
        text.split(',').collect()
    };
    let mut rows = Vec::new();
    for (i, g) in groups.iter().enumerate() {
        if g.trim().is_empty() {
            continue;
        }
        let coords = g
            .split(',')
            .enumerate()
            .map(|(j, c)| {
                parse_number(c).map_err(|msg| IngestError::Cell {
                    source_name: source.into(),
                    row: i + 1,
                    col: j + 1,
                    msg,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push((i + 1, coords));
    }
    build(source, Format::Csv, rows)
}

/// Checks arity and per-coordinate domains, naming the offending row and column.
pub fn check_against(data: &Dataset, space: &StarMetricSpace) -> Result<(), IngestError> {
    if data.points.arity() != space.arity() {
        return Err(IngestError::Malformed {
            source_name: data.source.clone(),
            msg: format!(
                "points have {} coordinates but {} has arity {}",
                data.points.arity(),
                space.name(),
                space.arity()
            ),
        });
    }
    for (p, &row) in data.points.iter().zip(&data.rows) {
        for (j, (&v, dom)) in p.coords().iter().zip(space.domains()).enumerate() {
            if !dom.contains(v) {
                return Err(IngestError::Cell {
                    source_name: data.source.clone(),
                    row,
                    col: j + 1,
                    msg: format!("{v} is outside the domain of {}", space.name()),
                });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use starmetric::metric::induced_metric;
    use starmetric::{TDefiner, ToleranceConfig};

    #[test]
    fn csv_rows() {
        let d = parse_csv("1,2\n3,4\n", "t").unwrap();
        assert_eq!(d.points.len(), 2);
        assert_eq!(d.points.arity(), 2);
    }

    #[test]
    fn csv_header_is_skipped() {
        let d = parse_csv("x,y\n1,2\n3,4e1\n", "t").unwrap();
        assert_eq!(d.points.points()[1].coords(), &[3.0, 40.0]);
        assert_eq!(d.rows, vec![2, 3]);
    }

    #[test]
    fn csv_bad_cell_names_row_and_column() {
        match parse_csv("1,x\n", "t") {
            Err(IngestError::Cell { row: 1, col: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse_csv("1,2\n3,nan\n", "t") {
            Err(IngestError::Cell { row: 2, col: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn csv_ragged_and_empty() {
        assert!(matches!(parse_csv("1,2\n3\n", "t"), Err(IngestError::Ragged { row: 2, .. })));
        assert!(matches!(parse_csv("", "t"), Err(IngestError::Empty(_))));
        assert!(matches!(parse_csv("a,b\n", "t"), Err(IngestError::Empty(_))));
    }

    #[test]
    fn json_rows() {
        let d = parse_json("[[1, 2], [3, 4.5]]", "t").unwrap();
        assert_eq!(d.points.points()[1].coords(), &[3.0, 4.5]);
        assert!(matches!(parse_json("[[1], [\"a\"]]", "t"), Err(IngestError::Cell { row: 2, col: 1, .. })));
        assert!(matches!(parse_json("[]", "t"), Err(IngestError::Empty(_))));
        assert!(parse_json("{}", "t").is_err());
    }

    #[test]
    fn domain_violation() {
        let space = induced_metric(&TDefiner::p(), &ToleranceConfig::default()).unwrap();
        let d = parse_json("[[-1]]", "t").unwrap();
        assert!(matches!(check_against(&d, &space), Err(IngestError::Cell { row: 1, col: 1, .. })));
    }

    #[test]
    fn inline_lists() {
        assert_eq!(parse_inline("1,16,25", 1).unwrap().points.len(), 3);
        let d = parse_inline("0,0; 1,2", 2).unwrap();
        assert_eq!(d.points.points()[1].coords(), &[1.0, 2.0]);
        assert!(parse_inline("", 1).is_err());
    }
}
