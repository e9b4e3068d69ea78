//! Tabular output with stable column names and deterministic formatting.
//!
//! Reals are written with Rust's shortest round-trip digits, in exponent form
//! outside `[1e-5, 1e16)`, and `+∞` as the token `inf`. Rows keep the order
//! in which they were produced.

use std::fmt::Write as _;

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

use crate::error::{LdpError, Result};
use crate::extended::ExtendedReal;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Real(f64),
    Ext(ExtendedReal),
    Int(u64),
    Bool(bool),
    Tag(&'static str),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<ExtendedReal> for Cell {
    fn from(v: ExtendedReal) -> Self {
        Cell::Ext(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&'static str> for Cell {
    fn from(v: &'static str) -> Self {
        Cell::Tag(v)
    }
}

fn write_real(out: &mut String, v: f64) {
    debug_assert!(!v.is_nan());
    let v = v + 0.0;
    if v == f64::INFINITY || v.is_nan() {
        out.push_str("inf");
    } else if v == f64::NEG_INFINITY {
        out.push_str("-inf");
    } else if v == 0.0 || (1e-5..1e16).contains(&v.abs()) {
        let _ = write!(out, "{v}");
    } else {
        let _ = write!(out, "{v:e}");
    }
}

impl Cell {
    fn write_csv(&self, out: &mut String) {
        match self {
            Cell::Real(v) => write_real(out, *v),
            Cell::Ext(ExtendedReal::Finite(v)) => write_real(out, *v),
            Cell::Ext(ExtendedReal::PosInf) => out.push_str("inf"),
            Cell::Int(v) => {
                let _ = write!(out, "{v}");
            }
            Cell::Bool(v) => out.push_str(if *v { "true" } else { "false" }),
            Cell::Tag(s) => out.push_str(s),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Cell::Real(v) if v.is_finite() => s.serialize_f64(*v + 0.0),
            Cell::Real(v) if *v < 0.0 => s.serialize_str("-inf"),
            Cell::Real(_) => s.serialize_str("inf"),
            Cell::Ext(v) => v.serialize(s),
            Cell::Int(v) => s.serialize_u64(*v),
            Cell::Bool(v) => s.serialize_bool(*v),
            Cell::Tag(v) => s.serialize_str(v),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            for (k, cell) in row.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                cell.write_csv(&mut out);
            }
            out.push('\n');
        }
        out
    }
}

struct Row<'a>(&'a [&'static str], &'a [Cell]);

impl Serialize for Row<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0.iter().zip(self.1) {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

/// A table serializes as an array of objects keyed by column name.
impl Serialize for Table {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows.len()))?;
        for row in &self.rows {
            seq.serialize_element(&Row(&self.columns, row))?;
        }
        seq.end()
    }
}

/// Sample points along one axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub include_min: bool,
    pub include_max: bool,
}

impl Axis {
    /// `count` equally spaced points on `[min, max]`, both ends included.
    pub fn closed(min: f64, max: f64, count: usize) -> Result<Self> {
        Self::checked(Self { min, max, count, include_min: true, include_max: true })
    }

    /// `count` equally spaced points on `(min, max]`.
    pub fn left_open(min: f64, max: f64, count: usize) -> Result<Self> {
        Self::checked(Self { min, max, count, include_min: false, include_max: true })
    }

    /// `count` equally spaced points strictly inside `(min, max)`.
    pub fn open(min: f64, max: f64, count: usize) -> Result<Self> {
        Self::checked(Self { min, max, count, include_min: false, include_max: false })
    }

    fn checked(axis: Self) -> Result<Self> {
        if !(axis.min < axis.max) || !axis.min.is_finite() || !axis.max.is_finite() {
            return Err(LdpError::InvalidArgument(format!("axis needs min < max, got {}:{}", axis.min, axis.max)));
        }
        let least = if axis.include_min && axis.include_max { 2 } else { 1 };
        if axis.count < least {
            return Err(LdpError::InvalidArgument(format!("axis needs at least {least} points, got {}", axis.count)));
        }
        Ok(axis)
    }

    /// Points in increasing order. Each is `min + (max - min)·k/d` for an
    /// integer `k` so that round values land exactly.
    pub fn points(&self) -> Vec<f64> {
        let span = self.max - self.min;
        let (first, denom) = match (self.include_min, self.include_max) {
            (true, true) => (0, self.count - 1),
            (false, true) => (1, self.count),
            (true, false) => (0, self.count),
            (false, false) => (1, self.count + 1),
        };
        (0..self.count)
            .map(|i| {
                let k = first + i;
                if k == denom {
                    self.max
                } else {
                    self.min + span * k as f64 / denom as f64
                }
            })
            .collect()
    }
}
