use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::data::DataMatrix;
use crate::error::{Error, Result};

/// Which CSV column carries the ground-truth class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LabelColumn {
    /// Zero-based column index.
    Index(usize),
    /// Header name.
    Name(String),
}

impl FromStr for LabelColumn {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim().parse::<usize>() {
            Ok(i) => Self::Index(i),
            Err(_) => Self::Name(s.trim().to_string()),
        })
    }
}

impl fmt::Display for LabelColumn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Index(i) => write!(f, "{i}"),
            Self::Name(n) => f.write_str(n),
        }
    }
}

fn is_numeric(cell: &str) -> bool {
    cell.trim().parse::<f64>().is_ok()
}

/// Reads a comma-separated file. See [`parse_csv`].
pub fn load_csv(path: impl AsRef<Path>, label_column: Option<&LabelColumn>) -> Result<DataMatrix> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_csv(&text, label_column).map_err(|e| match e {
        Error::InvalidInput(message) => Error::Format {
            path: path.to_path_buf(),
            message,
        },
        other => other,
    })
}

/// Parses CSV text with one sample per row.
///
/// The first row is a header when some column is non-numeric there but
/// numeric in the second row (or, for a single row, when every cell is
/// non-numeric). Label cells are mapped to ids `0, 1, ...` in order of first
/// appearance; the original strings are kept as label names.
pub fn parse_csv(text: &str, label_column: Option<&LabelColumn>) -> Result<DataMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut records = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse {
            row: i + 1,
            column: 0,
            message: e.to_string(),
        })?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        records.push(rec);
    }
    if records.is_empty() {
        return Err(Error::InvalidInput("CSV input is empty".into()));
    }

    let first = &records[0];
    let has_header = match records.get(1) {
        Some(second) => first
            .iter()
            .zip(second.iter())
            .any(|(a, b)| !is_numeric(a) && is_numeric(b)),
        None => first.iter().all(|c| !is_numeric(c)),
    };
    let header: Option<Vec<String>> =
        has_header.then(|| first.iter().map(str::to_string).collect());
    let body = if has_header {
        &records[1..]
    } else {
        &records[..]
    };
    let offset = usize::from(has_header) + 1;
    let width = first.len();

    let label_idx = match label_column {
        None => None,
        Some(LabelColumn::Index(i)) if *i < width => Some(*i),
        Some(LabelColumn::Index(i)) => {
            return Err(Error::InvalidParameter(format!(
                "label column {i} out of range for {width} columns"
            )))
        }
        Some(LabelColumn::Name(name)) => {
            let header = header.as_ref().ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "label column '{name}' given but CSV has no header"
                ))
            })?;
            Some(
                header
                    .iter()
                    .position(|h| h == name)
                    .ok_or_else(|| Error::InvalidParameter(format!("no column named '{name}'")))?,
            )
        }
    };

    let d = width - usize::from(label_idx.is_some());
    let mut values = DMatrix::zeros(d, body.len());
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut names: Vec<String> = Vec::new();
    let mut labels = Vec::with_capacity(body.len());
    for (s, rec) in body.iter().enumerate() {
        let row = s + offset;
        if rec.len() != width {
            return Err(Error::Parse {
                row,
                column: 0,
                message: format!("expected {width} cells, found {}", rec.len()),
            });
        }
        let mut f = 0;
        for (c, cell) in rec.iter().enumerate() {
            if Some(c) == label_idx {
                let id = *ids.entry(cell.to_string()).or_insert_with(|| {
                    names.push(cell.to_string());
                    names.len() - 1
                });
                labels.push(id);
                continue;
            }
            values[(f, s)] = cell.parse::<f64>().map_err(|_| Error::Parse {
                row,
                column: c + 1,
                message: format!("'{cell}' is not a number"),
            })?;
            f += 1;
        }
    }

    let data = DataMatrix::new(values, label_idx.map(|_| labels))?;
    Ok(if label_idx.is_some() {
        data.with_label_names(names)
    } else {
        data
    })
}

/// Reads a label vector: tokens separated by newlines, commas or whitespace.
/// Non-negative integers are kept as is; anything else is mapped to ids in
/// order of first appearance.
pub fn load_label_file(path: impl AsRef<Path>) -> Result<Vec<usize>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let tokens: Vec<&str> = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .collect();
    if tokens.is_empty() {
        return Err(Error::Format {
            path: path.to_path_buf(),
            message: "label file is empty".into(),
        });
    }
    if let Ok(parsed) = tokens.iter().map(|t| t.parse::<usize>()).collect() {
        return Ok(parsed);
    }
    let mut ids = HashMap::new();
    Ok(tokens
        .iter()
        .map(|t| {
            let next = ids.len();
            *ids.entry(*t).or_insert(next)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_numeric_csv() {
        let d = parse_csv("1,2\n3,4\n5,6\n", None).unwrap();
        assert_eq!((d.n(), d.d()), (3, 2));
        assert!(d.true_labels().is_none());
        assert_eq!(d.sample(1).as_slice(), &[3.0, 4.0]);
    }

    #[test]
    fn header_and_named_label() {
        let text = "x,y,kind\n1,2,a\n3,4,b\n5,6,a\n";
        let d = parse_csv(text, Some(&LabelColumn::Name("kind".into()))).unwrap();
        assert_eq!((d.n(), d.d()), (3, 2));
        assert_eq!(d.true_labels().unwrap(), &[0, 1, 0]);
        assert_eq!(
            d.label_names().unwrap(),
            &["a".to_string(), "b".to_string()]
        );
    }

    #[test]
    fn text_label_without_header_by_index() {
        let d = parse_csv("b,1,2\na,3,4\n", Some(&LabelColumn::Index(0))).unwrap();
        assert_eq!(d.d(), 2);
        assert_eq!(d.true_labels().unwrap(), &[0, 1]);
    }

    #[test]
    fn bad_cell_reports_location() {
        let err = parse_csv("a,b\n1,2\n3,x\n", None).unwrap_err();
        match err {
            Error::Parse { row, column, .. } => assert_eq!((row, column), (3, 2)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_and_bad_label_column() {
        assert!(parse_csv("", None).is_err());
        assert!(parse_csv("1,2\n3,4\n", Some(&LabelColumn::Index(5))).is_err());
        assert!(parse_csv("1,2\n3,4\n", Some(&LabelColumn::Name("y".into()))).is_err());
    }

    #[test]
    fn label_column_parsing() {
        assert_eq!("3".parse::<LabelColumn>().unwrap(), LabelColumn::Index(3));
        assert_eq!(
            "species".parse::<LabelColumn>().unwrap(),
            LabelColumn::Name("species".into())
        );
    }

    #[test]
    fn label_file_forms() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("l.txt");
        std::fs::write(&p, "3\n1\n3\n").unwrap();
        assert_eq!(load_label_file(&p).unwrap(), vec![3, 1, 3]);
        std::fs::write(&p, "b,a,b").unwrap();
        assert_eq!(load_label_file(&p).unwrap(), vec![0, 1, 0]);
        std::fs::write(&p, "\n").unwrap();
        assert!(load_label_file(&p).is_err());
    }
}
