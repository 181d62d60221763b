//! Loading support sets from JSON files or inline integer lists.

use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::lattice::{LatticeError, SupportSet};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("schema error in {origin}: {message}")]
    SchemaError { origin: String, message: String },
    #[error("duplicate point {point:?} in {origin}")]
    DuplicatePoint { origin: String, point: Vec<i64> },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SupportJson {
    dim: usize,
    points: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SupportFile {
    One(SupportJson),
    Many(Vec<SupportJson>),
}

fn validate(origin: &str, dim: usize, points: Vec<Vec<i64>>) -> Result<SupportSet, IoError> {
    SupportSet::new(dim, points).map_err(|e| match e {
        LatticeError::DuplicatePoint(point) => IoError::DuplicatePoint { origin: origin.to_owned(), point },
        other => IoError::SchemaError { origin: origin.to_owned(), message: other.to_string() },
    })
}

/// `"0,2,3"` as a subset of `Z^1`.
pub fn parse_inline(list: &str) -> Result<SupportSet, IoError> {
    let schema = |message: String| IoError::SchemaError { origin: format!("{list:?}"), message };
    let values = list
        .split(',')
        .map(|v| v.trim().parse::<i64>().map_err(|e| schema(format!("{v:?}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    validate(&format!("{list:?}"), 1, values.into_iter().map(|v| vec![v]).collect())
}

/// Supports from JSON text: one `{"dim", "points"}` object or an array of them.
pub fn parse_json(origin: &str, text: &str) -> Result<Vec<SupportSet>, IoError> {
    let file: SupportFile = serde_json::from_str(text)
        .map_err(|e| IoError::SchemaError { origin: origin.to_owned(), message: e.to_string() })?;
    let sets = match file {
        SupportFile::One(s) => vec![s],
        SupportFile::Many(v) => v,
    };
    sets.into_iter().map(|s| validate(origin, s.dim, s.points)).collect()
}

/// Reads `source` as a JSON file when such a file exists, and as an inline
/// comma list otherwise.
pub fn load_supports(source: &str) -> Result<Vec<SupportSet>, IoError> {
    let path = Path::new(source);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| IoError::Read { path: source.to_owned(), source: e })?;
        parse_json(source, &text)
    } else if source.trim_start().starts_with(['{', '[']) {
        parse_json("inline JSON", source)
    } else {
        Ok(vec![parse_inline(source)?])
    }
}

/// Exactly one support from `source`.
pub fn load_support(source: &str) -> Result<SupportSet, IoError> {
    let mut sets = load_supports(source)?;
    if sets.len() != 1 {
        return Err(IoError::SchemaError { origin: source.to_owned(), message: format!("expected one support, found {}", sets.len()) });
    }
    Ok(sets.pop().expect("one support"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inline_list() {
        assert_eq!(load_support("0,2,3").unwrap(), SupportSet::from_ints(&[0, 2, 3]).unwrap());
        assert_eq!(load_support(" 4 ").unwrap(), SupportSet::from_ints(&[4]).unwrap());
        assert!(matches!(load_support("0,x"), Err(IoError::SchemaError { .. })));
        assert!(matches!(load_support("1,1"), Err(IoError::DuplicatePoint { point, .. }) if point == vec![1]));
    }

    #[test]
    fn json_objects_and_arrays() {
        let one = parse_json("t", r#"{"dim":2,"points":[[0,0],[1,2]]}"#).unwrap();
        assert_eq!(one[0], SupportSet::new(2, vec![vec![0, 0], vec![1, 2]]).unwrap());
        let two = parse_json("t", r#"[{"dim":1,"points":[[0]]},{"dim":1,"points":[[3]]}]"#).unwrap();
        assert_eq!(two.len(), 2);
    }

    #[test]
    fn schema_violations() {
        for bad in [r#"{"dim":2}"#, r#"{"dim":2,"points":[[0]]}"#, r#"{"dim":1,"points":[],"x":1}"#, "[1,2]"] {
            assert!(matches!(parse_json("t", bad), Err(IoError::SchemaError { .. })), "{bad}");
        }
        assert!(matches!(
            parse_json("t", r#"{"dim":1,"points":[[2],[2]]}"#),
            Err(IoError::DuplicatePoint { .. })
        ));
    }
}
