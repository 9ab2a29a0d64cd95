//! Points, point sets and the plain-text point file format.
//!
//! Point files hold one point per line. Coordinates are separated by
//! whitespace and/or commas; blank lines and lines starting with `#` are
//! skipped. Indices are 0-based everywhere: point `k` is the `k`-th data line.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point in d-dimensional Euclidean space with finite coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyPoint);
        }
        if let Some((index, &value)) = coords.iter().enumerate().find(|(_, c)| !c.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(Self { coords })
    }

    /// The origin of `dim`-dimensional space.
    pub fn origin(dim: usize) -> Result<Self> {
        Self::new(vec![0.0; dim])
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Coordinates of `self - other`.
    pub fn sub(&self, other: &Point) -> Result<Point> {
        check_dims(self.dim(), other.dim())?;
        Ok(Point {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Point::new(coords)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.coords
    }
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Euclidean distance between raw coordinate slices of equal length.
#[inline]
pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Euclidean distance `|a - b|`.
pub fn distance(a: &Point, b: &Point) -> Result<f64> {
    check_dims(a.dim(), b.dim())?;
    Ok(dist(&a.coords, &b.coords))
}

/// An ordered collection of points sharing one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<Point>,
    dim: usize,
}

impl PointSet {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        let dim = points.first().ok_or(Error::EmptyInput)?.dim();
        for p in &points {
            check_dims(dim, p.dim())?;
        }
        Ok(Self { points, dim })
    }

    /// Builds a point set from raw rows, validating every coordinate.
    pub fn from_rows<I>(rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<f64>>,
    {
        Self::new(
            rows.into_iter()
                .map(Point::new)
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn get(&self, index: usize) -> Result<&Point> {
        self.points.get(index).ok_or(Error::IndexOutOfRange {
            index,
            len: self.points.len(),
        })
    }

    pub(crate) fn coords(&self, index: usize) -> &[f64] {
        &self.points[index].coords
    }

    pub(crate) fn dist(&self, i: usize, j: usize) -> f64 {
        dist(self.coords(i), self.coords(j))
    }

    /// Dense all-pairs distance matrix, row-major.
    pub fn distance_matrix(&self) -> Vec<Vec<f64>> {
        let n = self.len();
        (0..n).map(|i| (0..n).map(|j| if i == j { 0.0 } else { self.dist(i, j) }).collect()).collect()
    }

    /// A new set with the points reordered so that point `k` of the result
    /// is point `perm[k]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let points = perm
            .iter()
            .map(|&i| self.get(i).cloned())
            .collect::<Result<Vec<_>>>()?;
        Self::new(points)
    }
}

/// A center point `v` together with the satellites `a_i` it is joined to.
#[derive(Debug, Clone, PartialEq)]
pub struct StarInstance {
    center: Point,
    satellites: Vec<Point>,
}

impl StarInstance {
    pub fn new(center: Point, satellites: Vec<Point>) -> Result<Self> {
        for s in &satellites {
            check_dims(center.dim(), s.dim())?;
        }
        Ok(Self { center, satellites })
    }

    /// Star centered at `ps[center]` whose satellites are all other points, in
    /// input order.
    pub fn from_point_set(ps: &PointSet, center: usize) -> Result<Self> {
        let c = ps.get(center)?.clone();
        let satellites = ps
            .points()
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != center)
            .map(|(_, p)| p.clone())
            .collect();
        Self::new(c, satellites)
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn satellites(&self) -> &[Point] {
        &self.satellites
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }
}

/// Star weight `S`: the sum of center-to-satellite distances.
pub fn star_weight(s: &StarInstance) -> f64 {
    s.satellites
        .iter()
        .map(|a| dist(&s.center.coords, &a.coords))
        .sum()
}

/// Reads a point file.
pub fn load_points<R: Read>(mut source: R) -> Result<PointSet> {
    let mut text = String::new();
    source.read_to_string(&mut text)?;
    parse_points(&text)
}

pub fn parse_points(text: &str) -> Result<PointSet> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width = None;
    for (lineno, line) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut row = Vec::new();
        let mut column = 0;
        for token in line.split(|c: char| c.is_whitespace() || c == ',') {
            if token.is_empty() {
                continue;
            }
            column += 1;
            let value: f64 = token.parse().map_err(|_| Error::Parse {
                line: line_no,
                column,
                token: token.to_string(),
            })?;
            if !value.is_finite() {
                return Err(Error::Parse {
                    line: line_no,
                    column,
                    token: token.to_string(),
                });
            }
            row.push(value);
        }
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(Error::RaggedRow {
                    line: line_no,
                    expected: w,
                    found: row.len(),
                })
            }
            _ => {}
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::EmptyInput);
    }
    PointSet::from_rows(rows)
}

/// Writes a point file; coordinates use the shortest decimal form that parses
/// back to the same `f64`.
pub fn write_points<W: Write>(mut out: W, ps: &PointSet) -> Result<()> {
    for p in ps.points() {
        let line = p
            .coords()
            .iter()
            .map(|c| format!("{c:?}"))
            .collect::<Vec<_>>()
            .join(" ");
        writeln!(out, "{line}")?;
    }
    Ok(())
}
