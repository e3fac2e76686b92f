//! JSON records for games, pairs, and points.
//!
//! One record shape covers both games and pairs: cones and an operator are
//! always present, base functionals (alpha, beta) mark a game record, and
//! program data (b, c) marks a pair record; a record may carry both. Field
//! order is fixed, numbers print as the shortest round-trip decimal, and
//! absent fields are omitted, so serialize -> parse -> serialize is
//! byte-identical.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::cones::{ConeBlock, ConeProduct, Point};
use crate::error::{Error, Result};
use crate::game::ConicGame;
use crate::operators::LinOp;
use crate::programs::ConicPair;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConeRecord {
    kind: String,
    size: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OperatorRecord {
    rows: usize,
    cols: usize,
    /// Row-major entries; semidefinite coordinates use the svec packing.
    data: Vec<f64>,
}

/// On-disk description of a game and/or a conic pair over shared cones and
/// operator.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Record {
    #[serde(rename = "cones_C")]
    cones_c: Vec<ConeRecord>,
    #[serde(rename = "cones_K")]
    cones_k: Vec<ConeRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    beta: Option<Vec<f64>>,
    operator: OperatorRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    b: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    c: Option<Vec<f64>>,
}

fn cone_records(p: &ConeProduct) -> Vec<ConeRecord> {
    p.blocks()
        .iter()
        .map(|blk| match blk {
            ConeBlock::Orthant(n) => ConeRecord {
                kind: "orthant".to_string(),
                size: *n,
            },
            ConeBlock::Psd(n) => ConeRecord {
                kind: "psd".to_string(),
                size: *n,
            },
        })
        .collect()
}

fn cone_product(records: &[ConeRecord]) -> Result<ConeProduct> {
    let blocks = records
        .iter()
        .map(|r| match r.kind.as_str() {
            "orthant" => Ok(ConeBlock::Orthant(r.size)),
            "psd" => Ok(ConeBlock::Psd(r.size)),
            other => Err(Error::Parse(format!("unknown cone kind {other:?}"))),
        })
        .collect::<Result<Vec<_>>>()?;
    ConeProduct::new(blocks)
}

fn operator_record(op: &LinOp) -> OperatorRecord {
    let m = op.matrix();
    OperatorRecord {
        rows: m.nrows(),
        cols: m.ncols(),
        data: m.transpose().as_slice().to_vec(),
    }
}

fn operator(rec: &OperatorRecord) -> Result<LinOp> {
    let expected = rec.rows * rec.cols;
    if rec.data.len() != expected {
        return Err(Error::dims("operator data length", expected, rec.data.len()));
    }
    finite(&rec.data, "operator data")?;
    Ok(LinOp::new(DMatrix::from_row_slice(
        rec.rows, rec.cols, &rec.data,
    )))
}

fn finite(xs: &[f64], what: &str) -> Result<()> {
    if xs.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::Parse(format!("{what} contains a non-finite number")))
    }
}

fn vector(field: &Option<Vec<f64>>, name: &str) -> Result<Point> {
    match field {
        Some(xs) => {
            finite(xs, name)?;
            Ok(DVector::from_column_slice(xs))
        }
        None => Err(Error::Parse(format!("record is missing the {name} field"))),
    }
}

impl Record {
    pub fn from_game(game: &ConicGame) -> Record {
        Record {
            cones_c: cone_records(game.cone_c()),
            cones_k: cone_records(game.cone_k()),
            alpha: Some(game.alpha().as_slice().to_vec()),
            beta: Some(game.beta().as_slice().to_vec()),
            operator: operator_record(game.op()),
            b: None,
            c: None,
        }
    }

    pub fn from_pair(pair: &ConicPair) -> Record {
        Record {
            cones_c: cone_records(pair.cone_c()),
            cones_k: cone_records(pair.cone_k()),
            alpha: None,
            beta: None,
            operator: operator_record(pair.op()),
            b: Some(pair.b().as_slice().to_vec()),
            c: Some(pair.c().as_slice().to_vec()),
        }
    }

    /// Game and pair record over the same cones and operator.
    pub fn from_both(game: &ConicGame, pair: &ConicPair) -> Record {
        let mut rec = Record::from_game(game);
        rec.b = Some(pair.b().as_slice().to_vec());
        rec.c = Some(pair.c().as_slice().to_vec());
        rec
    }

    pub fn to_game(&self) -> Result<ConicGame> {
        ConicGame::new(
            cone_product(&self.cones_c)?,
            cone_product(&self.cones_k)?,
            vector(&self.alpha, "alpha")?,
            vector(&self.beta, "beta")?,
            operator(&self.operator)?,
        )
    }

    pub fn to_pair(&self) -> Result<ConicPair> {
        ConicPair::new(
            cone_product(&self.cones_c)?,
            cone_product(&self.cones_k)?,
            operator(&self.operator)?,
            vector(&self.b, "b")?,
            vector(&self.c, "c")?,
        )
    }
}

pub fn parse_record(text: &str) -> Result<Record> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn serialize_record(record: &Record) -> String {
    serde_json::to_string(record).expect("record serialization is infallible")
}

pub fn read_record(path: &Path) -> Result<Record> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_record(&text)
}

pub fn write_record(path: &Path, record: &Record) -> Result<()> {
    let mut text = serialize_record(record);
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Points travel as bare JSON arrays of numbers.
pub fn parse_point(text: &str) -> Result<Point> {
    let xs: Vec<f64> = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    finite(&xs, "point")?;
    Ok(DVector::from_column_slice(&xs))
}

pub fn serialize_point(point: &Point) -> String {
    serde_json::to_string(point.as_slice()).expect("point serialization is infallible")
}

pub fn read_point(path: &Path) -> Result<Point> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_point(&text)
}

pub fn write_point(path: &Path, point: &Point) -> Result<()> {
    let mut text = serialize_point(point);
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
