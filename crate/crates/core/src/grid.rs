//! Rectangular grids and grid-sampled scalar fields.
//!
//! Values are stored row-major with `y` as the outer index: node `(i, j)`
//! (column `i` along x, row `j` along y) lives at `j * nx + i`. The CSV
//! form lists nodes in the same order, one `x,y,value` line per node.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::fmt17;

/// Rectangle `[x_min, x_max] × [y_min, y_max]` with `nx × ny` uniformly spaced nodes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64, nx: usize, ny: usize) -> Result<Self> {
        let spec = GridSpec {
            x_min,
            x_max,
            y_min,
            y_max,
            nx,
            ny,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Square node layout `n × n` on the given rectangle.
    pub fn square(x: (f64, f64), y: (f64, f64), n: usize) -> Result<Self> {
        Self::new(x.0, x.1, y.0, y.1, n, n)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.x_min, self.x_max, self.y_min, self.y_max]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidGrid("bounds must be finite".into()));
        }
        if !(self.x_min < self.x_max) {
            return Err(Error::InvalidGrid(format!(
                "x_min ({}) must be < x_max ({})",
                self.x_min, self.x_max
            )));
        }
        if !(self.y_min < self.y_max) {
            return Err(Error::InvalidGrid(format!(
                "y_min ({}) must be < y_max ({})",
                self.y_min, self.y_max
            )));
        }
        if self.nx < 3 || self.ny < 3 {
            return Err(Error::InvalidGrid(format!(
                "need at least 3 nodes per axis, got {}x{}",
                self.nx, self.ny
            )));
        }
        Ok(())
    }

    pub fn hx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn hy(&self) -> f64 {
        (self.y_max - self.y_min) / (self.ny - 1) as f64
    }

    /// x-coordinate of column `i`; the last column is pinned to `x_max`.
    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.nx {
            self.x_max
        } else {
            self.x_min + i as f64 * self.hx()
        }
    }

    pub fn y(&self, j: usize) -> f64 {
        if j + 1 == self.ny {
            self.y_max
        } else {
            self.y_min + j as f64 * self.hy()
        }
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.nx).map(|i| self.x(i)).collect()
    }

    pub fn ys(&self) -> Vec<f64> {
        (0..self.ny).map(|j| self.y(j)).collect()
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn is_boundary(&self, i: usize, j: usize) -> bool {
        i == 0 || j == 0 || i + 1 == self.nx || j + 1 == self.ny
    }

    /// Same rectangle with each axis refined to `2n - 1` nodes (spacing halved).
    pub fn refined(&self) -> GridSpec {
        GridSpec {
            nx: 2 * self.nx - 1,
            ny: 2 * self.ny - 1,
            ..*self
        }
    }
}

/// A real function sampled on every node of a [`GridSpec`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawField")]
pub struct ScalarField {
    spec: GridSpec,
    values: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawField {
    spec: GridSpec,
    values: Vec<f64>,
}

impl TryFrom<RawField> for ScalarField {
    type Error = Error;

    fn try_from(raw: RawField) -> Result<Self> {
        ScalarField::from_values(raw.spec, raw.values)
    }
}

impl ScalarField {
    pub fn from_values(spec: GridSpec, values: Vec<f64>) -> Result<Self> {
        spec.validate()?;
        if values.len() != spec.len() {
            return Err(Error::InvalidField(format!(
                "expected {} values for a {}x{} grid, got {}",
                spec.len(),
                spec.nx,
                spec.ny,
                values.len()
            )));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidField(format!(
                "non-finite value at node ({}, {})",
                k % spec.nx,
                k / spec.nx
            )));
        }
        Ok(ScalarField { spec, values })
    }

    /// Samples `f(x, y)` at every node.
    pub fn from_fn(spec: GridSpec, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        spec.validate()?;
        let mut values = Vec::with_capacity(spec.len());
        for j in 0..spec.ny {
            let y = spec.y(j);
            for i in 0..spec.nx {
                values.push(f(spec.x(i), y));
            }
        }
        Self::from_values(spec, values)
    }

    /// Like [`from_fn`](Self::from_fn) for evaluators that can fail.
    pub fn try_from_fn(spec: GridSpec, f: impl Fn(f64, f64) -> Result<f64>) -> Result<Self> {
        spec.validate()?;
        let mut values = Vec::with_capacity(spec.len());
        for j in 0..spec.ny {
            let y = spec.y(j);
            for i in 0..spec.nx {
                values.push(f(spec.x(i), y)?);
            }
        }
        Self::from_values(spec, values)
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.spec.index(i, j)]
    }

    /// Values of row `j` (fixed y).
    pub fn row(&self, j: usize) -> &[f64] {
        let start = j * self.spec.nx;
        &self.values[start..start + self.spec.nx]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `max |self - other|` over nodes; both fields must share a grid.
    pub fn max_abs_diff(&self, other: &ScalarField) -> Result<f64> {
        if self.spec != other.spec {
            return Err(Error::RangeMismatch("fields live on different grids".into()));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["x", "y", "value"])?;
        for j in 0..self.spec.ny {
            let y = fmt17(self.spec.y(j));
            for i in 0..self.spec.nx {
                w.write_record([fmt17(self.spec.x(i)), y.clone(), fmt17(self.at(i, j))])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv output is ASCII")
    }

    /// Reads the `x,y,value` layout written by [`write_csv`](Self::write_csv).
    ///
    /// The grid is recovered from the node coordinates, which must be
    /// row-major with y outer and uniformly spaced.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(reader);
        let headers = r.headers()?.clone();
        if headers.iter().map(str::trim).collect::<Vec<_>>() != ["x", "y", "value"] {
            return Err(Error::InvalidField(format!(
                "expected header `x,y,value`, got `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut rows: Vec<[f64; 3]> = Vec::new();
        for (line, record) in r.records().enumerate() {
            let record = record?;
            if record.len() != 3 {
                return Err(Error::InvalidField(format!("row {} has {} columns", line + 1, record.len())));
            }
            let mut row = [0.0; 3];
            for (k, cell) in record.iter().enumerate() {
                row[k] = cell.trim().parse::<f64>().map_err(|e| {
                    Error::InvalidField(format!("row {} column {}: {e}", line + 1, k + 1))
                })?;
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::InvalidField("no data rows".into()));
        }
        let y0 = rows[0][1];
        let nx = rows.iter().take_while(|r| r[1] == y0).count();
        if nx == 0 || !rows.len().is_multiple_of(nx) {
            return Err(Error::InvalidField(format!(
                "{} rows cannot form a grid with {} columns",
                rows.len(),
                nx
            )));
        }
        let ny = rows.len() / nx;
        let last = rows[rows.len() - 1];
        let spec = GridSpec::new(rows[0][0], rows[nx - 1][0], y0, last[1], nx, ny)?;
        let tol_x = 1e-9 * (spec.x_max - spec.x_min);
        let tol_y = 1e-9 * (spec.y_max - spec.y_min);
        for (k, row) in rows.iter().enumerate() {
            let (i, j) = (k % nx, k / nx);
            if (row[0] - spec.x(i)).abs() > tol_x || (row[1] - spec.y(j)).abs() > tol_y {
                return Err(Error::InvalidField(format!(
                    "row {} at ({}, {}) does not match a uniform row-major grid",
                    k + 1,
                    row[0],
                    row[1]
                )));
            }
        }
        Self::from_values(spec, rows.into_iter().map(|r| r[2]).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_small_or_inverted_grids() {
        assert!(GridSpec::new(0.0, 1.0, 0.0, 1.0, 2, 5).is_err());
        assert!(GridSpec::new(1.0, 0.0, 0.0, 1.0, 5, 5).is_err());
        assert!(GridSpec::new(0.0, 1.0, 0.0, 0.0, 5, 5).is_err());
        assert!(GridSpec::new(0.0, f64::NAN, 0.0, 1.0, 5, 5).is_err());
        let g = GridSpec::new(0.0, 1.0, -1.0, 1.0, 5, 3).unwrap();
        assert_eq!(g.hx(), 0.25);
        assert_eq!(g.hy(), 1.0);
        assert_eq!(g.x(4), 1.0);
    }

    #[test]
    fn layout_is_row_major_y_outer() {
        let g = GridSpec::new(0.0, 2.0, 0.0, 1.0, 3, 3).unwrap();
        let f = ScalarField::from_fn(g, |x, y| x + 10.0 * y).unwrap();
        assert_eq!(f.values()[..3], [0.0, 1.0, 2.0]);
        assert_eq!(f.at(1, 2), 1.0 + 10.0);
        assert_eq!(f.row(1), &[5.0, 6.0, 7.0]);
    }

    #[test]
    fn rejects_wrong_length_and_non_finite() {
        let g = GridSpec::new(0.0, 1.0, 0.0, 1.0, 3, 3).unwrap();
        assert!(ScalarField::from_values(g, vec![0.0; 8]).is_err());
        let mut v = vec![0.0; 9];
        v[4] = f64::INFINITY;
        assert!(ScalarField::from_values(g, v).is_err());
    }

    #[test]
    fn csv_round_trip_is_lossless() {
        let g = GridSpec::new(-1.0, 1.0, 0.0, 0.7, 7, 4).unwrap();
        let f = ScalarField::from_fn(g, |x, y| (x * 3.1).sin() + y.exp() / 3.0).unwrap();
        let text = f.to_csv_string();
        assert!(text.starts_with("x,y,value\n"));
        let back = ScalarField::read_csv(text.as_bytes()).unwrap();
        assert_eq!(back.spec().nx, 7);
        assert_eq!(back.spec().ny, 4);
        assert_eq!(back.values(), f.values());
    }

    #[test]
    fn csv_rejects_bad_header_and_ragged_rows() {
        assert!(ScalarField::read_csv("a,b,c\n0,0,0\n".as_bytes()).is_err());
        let ragged = "x,y,value\n0,0,1\n1,0,1\n2,0,1\n0,1,1\n";
        assert!(ScalarField::read_csv(ragged.as_bytes()).is_err());
    }

    #[test]
    fn json_validates_on_deserialize() {
        let g = GridSpec::new(0.0, 1.0, 0.0, 1.0, 3, 3).unwrap();
        let f = ScalarField::from_fn(g, |x, y| x * y).unwrap();
        let text = serde_json::to_string(&f).unwrap();
        let back: ScalarField = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
        let bad = r#"{"spec":{"x_min":0,"x_max":1,"y_min":0,"y_max":1,"nx":3,"ny":3},"values":[1,2]}"#;
        assert!(serde_json::from_str::<ScalarField>(bad).is_err());
    }
}
