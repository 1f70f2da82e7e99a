//! JSON file format for matrices and vectors:
//! `{"kind": "unitary" | "orthogonal" | "vector", "d": int, "re": [[..]], "im": [[..]]}`,
//! row-major, with `"im"` omitted for real data.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::types::{CVector, OrthogonalMatrix, UnitaryMatrix, C64};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Unitary,
    Orthogonal,
    Vector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entries {
    Flat(Vec<f64>),
    Nested(Vec<Vec<f64>>),
}

impl Entries {
    fn flatten_rows(&self, d: usize, what: &str) -> Result<Vec<f64>> {
        match self {
            Entries::Nested(rows) => {
                if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                    return Err(Error::InvalidInput(format!("{what}: expected {d}x{d} rows")));
                }
                Ok(rows.iter().flatten().copied().collect())
            }
            Entries::Flat(v) if v.len() == d * d => Ok(v.clone()),
            Entries::Flat(v) => Err(Error::InvalidInput(format!(
                "{what}: expected {} entries, got {}",
                d * d,
                v.len()
            ))),
        }
    }

    fn flatten_vector(&self, d: usize, what: &str) -> Result<Vec<f64>> {
        let values: Vec<f64> = match self {
            Entries::Flat(v) => v.clone(),
            Entries::Nested(rows) if rows.len() == 1 => rows[0].clone(),
            Entries::Nested(rows) if rows.iter().all(|r| r.len() == 1) => {
                rows.iter().map(|r| r[0]).collect()
            }
            Entries::Nested(_) => {
                return Err(Error::InvalidInput(format!("{what}: vector must be a single row or column")))
            }
        };
        if values.len() != d {
            return Err(Error::InvalidInput(format!(
                "{what}: expected {d} entries, got {}",
                values.len()
            )));
        }
        Ok(values)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrayFile {
    pub kind: Kind,
    pub d: usize,
    pub re: Entries,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Entries>,
}

/// An operator loaded from file.
#[derive(Debug, Clone, PartialEq)]
pub enum Operator {
    Unitary(UnitaryMatrix),
    Orthogonal(OrthogonalMatrix),
}

impl Operator {
    pub fn dim(&self) -> usize {
        match self {
            Operator::Unitary(u) => u.dim(),
            Operator::Orthogonal(r) => r.dim(),
        }
    }

    /// The operator as a unitary (orthogonal matrices are complexified).
    pub fn to_unitary(&self) -> UnitaryMatrix {
        match self {
            Operator::Unitary(u) => u.clone(),
            Operator::Orthogonal(r) => r.complexify(),
        }
    }
}

fn parse_file(json: &str) -> Result<ArrayFile> {
    let file: ArrayFile =
        serde_json::from_str(json).map_err(|e| Error::InvalidInput(format!("bad JSON: {e}")))?;
    if file.d == 0 {
        return Err(Error::InvalidDimension(0));
    }
    Ok(file)
}

pub fn parse_operator(json: &str) -> Result<Operator> {
    let file = parse_file(json)?;
    let d = file.d;
    match file.kind {
        Kind::Vector => Err(Error::InvalidInput("expected a matrix, found kind \"vector\"".into())),
        Kind::Orthogonal => {
            if file.im.is_some() {
                return Err(Error::InvalidInput("orthogonal matrices are real; drop \"im\"".into()));
            }
            let re = file.re.flatten_rows(d, "re")?;
            Ok(Operator::Orthogonal(OrthogonalMatrix::new(DMatrix::from_row_slice(d, d, &re))?))
        }
        Kind::Unitary => {
            let re = file.re.flatten_rows(d, "re")?;
            let im = match &file.im {
                Some(im) => im.flatten_rows(d, "im")?,
                None => vec![0.0; d * d],
            };
            let entries: Vec<C64> = re.iter().zip(&im).map(|(&a, &b)| C64::new(a, b)).collect();
            Ok(Operator::Unitary(UnitaryMatrix::new(DMatrix::from_row_slice(d, d, &entries))?))
        }
    }
}

pub fn parse_vector(json: &str) -> Result<CVector> {
    let file = parse_file(json)?;
    if file.kind != Kind::Vector {
        return Err(Error::InvalidInput("expected kind \"vector\"".into()));
    }
    let d = file.d;
    let re = file.re.flatten_vector(d, "re")?;
    let im = match &file.im {
        Some(im) => im.flatten_vector(d, "im")?,
        None => vec![0.0; d],
    };
    CVector::new(DVector::from_iterator(d, re.iter().zip(&im).map(|(&a, &b)| C64::new(a, b))))
}

fn rows_of<T: Copy>(m: &DMatrix<T>, f: impl Fn(T) -> f64) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| f(m[(i, j)])).collect())
        .collect()
}

pub fn unitary_file(u: &UnitaryMatrix) -> ArrayFile {
    ArrayFile {
        kind: Kind::Unitary,
        d: u.dim(),
        re: Entries::Nested(rows_of(u.matrix(), |c| c.re)),
        im: Some(Entries::Nested(rows_of(u.matrix(), |c| c.im))),
    }
}

pub fn orthogonal_file(r: &OrthogonalMatrix) -> ArrayFile {
    ArrayFile {
        kind: Kind::Orthogonal,
        d: r.dim(),
        re: Entries::Nested(rows_of(r.matrix(), |x| x)),
        im: None,
    }
}

pub fn vector_file(v: &CVector) -> ArrayFile {
    ArrayFile {
        kind: Kind::Vector,
        d: v.dim(),
        re: Entries::Flat(v.iter().map(|c| c.re).collect()),
        im: if v.is_real() {
            None
        } else {
            Some(Entries::Flat(v.iter().map(|c| c.im).collect()))
        },
    }
}

impl ArrayFile {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("array files always serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{haar_unitary, SeedStream};

    #[test]
    fn identity_parses() {
        let op = parse_operator(r#"{"kind":"unitary","d":2,"re":[[1,0],[0,1]]}"#).unwrap();
        assert_eq!(op.to_unitary(), UnitaryMatrix::identity(2).unwrap());
    }

    #[test]
    fn orthogonal_rejects_imaginary_part() {
        let err = parse_operator(r#"{"kind":"orthogonal","d":1,"re":[[1]],"im":[[0]]}"#);
        assert!(matches!(err, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn non_unitary_rejected() {
        let err = parse_operator(r#"{"kind":"unitary","d":2,"re":[[1,1],[0,1]]}"#);
        assert!(matches!(err, Err(Error::InvalidMatrix(_))));
    }

    #[test]
    fn malformed_json_and_shapes() {
        assert!(matches!(parse_operator("{"), Err(Error::InvalidInput(_))));
        assert!(parse_operator(r#"{"kind":"unitary","d":2,"re":[[1,0]]}"#).is_err());
        assert!(parse_operator(r#"{"kind":"unitary","d":0,"re":[]}"#).is_err());
        assert!(parse_vector(r#"{"kind":"vector","d":3,"re":[1,0]}"#).is_err());
        assert!(parse_operator(r#"{"kind":"unitary","d":1,"re":[[1]],"extra":1}"#).is_err());
    }

    #[test]
    fn vector_shapes_accepted() {
        let flat = parse_vector(r#"{"kind":"vector","d":2,"re":[1,0]}"#).unwrap();
        let col = parse_vector(r#"{"kind":"vector","d":2,"re":[[1],[0]]}"#).unwrap();
        assert_eq!(flat, col);
        let cplx = parse_vector(r#"{"kind":"vector","d":2,"re":[0,0],"im":[1,0]}"#).unwrap();
        assert_eq!(cplx[0], C64::new(0.0, 1.0));
    }

    #[test]
    fn unitary_round_trip_is_exact() {
        let u = haar_unitary(4, &SeedStream::new(5, 0)).unwrap();
        let back = parse_operator(&unitary_file(&u).to_json()).unwrap();
        assert_eq!(back.to_unitary().matrix(), u.matrix());
    }
}
