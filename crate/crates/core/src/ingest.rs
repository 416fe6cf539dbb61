//! Generator files and table fixtures.
//!
//! Both formats are JSON with every integer written as a decimal string, so
//! no parser ever sees a bounded numeric type.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{parse_integer, parse_rational, rat, Rational};
use crate::mordell::{on_curve, Model, MordellCurve, MordellPoint};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn rational_string(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGeneratorFile {
    #[serde(rename = "D")]
    disc: String,
    model: String,
    points: Vec<[String; 2]>,
    #[serde(default)]
    source: String,
}

/// Points on E^{-27D} computed elsewhere, in either curve model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorFile {
    pub disc: BigInt,
    pub model: Model,
    pub points: Vec<(Rational, Rational)>,
    pub source: String,
}

impl GeneratorFile {
    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawGeneratorFile =
            serde_json::from_str(text).map_err(|e| parse_err(format!("generator file: {e}")))?;
        let disc = parse_integer(&raw.disc).map_err(|e| parse_err(format!("field D: {e}")))?;
        let model = Model::from_tag(&raw.model)?;
        let points = raw
            .points
            .iter()
            .enumerate()
            .map(|(i, [x, y])| {
                let px = parse_rational(x).map_err(|e| parse_err(format!("point {i} x: {e}")))?;
                let py = parse_rational(y).map_err(|e| parse_err(format!("point {i} y: {e}")))?;
                Ok((px, py))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GeneratorFile { disc, model, points, source: raw.source })
    }

    pub fn to_json(&self) -> String {
        let raw = RawGeneratorFile {
            disc: self.disc.to_string(),
            model: self.model.tag().to_string(),
            points: self
                .points
                .iter()
                .map(|(x, y)| [rational_string(x), rational_string(y)])
                .collect(),
            source: self.source.clone(),
        };
        serde_json::to_string_pretty(&raw).expect("plain strings serialize")
    }

    /// The curve the points live on, in the file's model.
    pub fn curve(&self) -> Result<MordellCurve> {
        MordellCurve::new(rat(-27) * Rational::from_integer(self.disc.clone()), self.model)
    }

    /// Points converted to the 4X3 model, each checked against E^{-27D}.
    pub fn quartic_points(&self) -> Result<Vec<MordellPoint>> {
        let curve = self.curve()?;
        self.points
            .iter()
            .map(|(x, y)| {
                let p = MordellPoint::affine(x.clone(), y.clone(), self.model);
                if !on_curve(&curve, &p) {
                    return Err(Error::OffCurve(format!(
                        "({}, {}) [{}] is not on the curve of D = {}",
                        rational_string(x),
                        rational_string(y),
                        self.model.tag(),
                        self.disc
                    )));
                }
                Ok(p.to_quartic())
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldStatus {
    #[serde(rename = "known")]
    Known,
    /// printed in bold: monogenity unknown at the time of tabulation
    #[serde(rename = "bold-unknown")]
    BoldUnknown,
}

impl fmt::Display for FieldStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FieldStatus::Known => "known",
            FieldStatus::BoldUnknown => "bold-unknown",
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawField {
    m: String,
    trivially_monogenic: bool,
    status: FieldStatus,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRow {
    #[serde(rename = "D")]
    disc: String,
    rank_grh: String,
    field_count: String,
    fields: Vec<RawField>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableField {
    pub m: BigInt,
    pub trivially_monogenic: bool,
    pub status: FieldStatus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub disc: BigInt,
    pub rank_grh: u32,
    pub field_count: u64,
    pub fields: Vec<TableField>,
}

impl TableRow {
    pub fn parse_line(line: &str) -> Result<Self> {
        let raw: RawRow = serde_json::from_str(line).map_err(|e| parse_err(format!("fixture row: {e}")))?;
        let small = |s: &str, name: &str| -> Result<u64> {
            if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
                return Err(parse_err(format!("{name}: {s:?} is not a decimal count")));
            }
            s.parse::<u64>().map_err(|_| parse_err(format!("{name}: {s} out of range")))
        };
        let rank = small(&raw.rank_grh, "rank_grh")?;
        let rank_grh = u32::try_from(rank).map_err(|_| parse_err("rank_grh out of range"))?;
        let fields = raw
            .fields
            .into_iter()
            .map(|f| {
                Ok(TableField {
                    m: parse_integer(&f.m).map_err(|e| parse_err(format!("field m: {e}")))?,
                    trivially_monogenic: f.trivially_monogenic,
                    status: f.status,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TableRow {
            disc: parse_integer(&raw.disc).map_err(|e| parse_err(format!("D: {e}")))?,
            rank_grh,
            field_count: small(&raw.field_count, "field_count")?,
            fields,
        })
    }

    pub fn to_json_line(&self) -> String {
        let raw = RawRow {
            disc: self.disc.to_string(),
            rank_grh: self.rank_grh.to_string(),
            field_count: self.field_count.to_string(),
            fields: self
                .fields
                .iter()
                .map(|f| RawField {
                    m: f.m.to_string(),
                    trivially_monogenic: f.trivially_monogenic,
                    status: f.status,
                })
                .collect(),
        };
        serde_json::to_string(&raw).expect("plain strings serialize")
    }
}

/// One row per non-blank line; errors carry the 1-based line number.
pub fn parse_fixture(text: &str) -> Result<Vec<TableRow>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            TableRow::parse_line(l).map_err(|e| match e {
                Error::Parse(msg) => Error::Parse(format!("line {}: {msg}", i + 1)),
                other => other,
            })
        })
        .collect()
}

/// Parses "x,y" into a 4X3 point; "infinity" is accepted.
pub fn parse_point(s: &str) -> Result<MordellPoint> {
    let s = s.trim();
    if s == "infinity" {
        return Ok(MordellPoint::Infinity);
    }
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| parse_err(format!("point {s:?} is not of the form x,y")))?;
    Ok(MordellPoint::quartic(parse_rational(x.trim())?, parse_rational(y.trim())?))
}
