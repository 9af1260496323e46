use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of a (possibly product) space. Scalar spaces use one coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Usage("a point needs at least one coordinate".into()));
        }
        if let Some(i) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::Domain(format!(
                "coordinate {} is not finite ({})",
                i + 1,
                coords[i]
            )));
        }
        Ok(Point(coords))
    }

    pub fn scalar(x: f64) -> Result<Self> {
        Point::new(vec![x])
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }
}

impl From<f64> for Point {
    /// Panics on a non-finite value; use [`Point::scalar`] for checked input.
    fn from(x: f64) -> Self {
        Point::scalar(x).expect("finite scalar")
    }
}

impl<const N: usize> From<[f64; N]> for Point {
    fn from(coords: [f64; N]) -> Self {
        Point::new(coords.to_vec()).expect("finite coordinates")
    }
}

/// A finite list of points sharing one arity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    points: Vec<Point>,
    arity: usize,
    /// Where the points came from (file path, generator description).
    pub source: Option<String>,
}

impl PointSet {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        let arity = match points.first() {
            Some(p) => p.arity(),
            None => return Err(Error::Usage("point set is empty".into())),
        };
        if let Some(i) = points.iter().position(|p| p.arity() != arity) {
            return Err(Error::Usage(format!(
                "point {} has arity {}, expected {}",
                i + 1,
                points[i].arity(),
                arity
            )));
        }
        Ok(PointSet {
            points,
            arity,
            source: None,
        })
    }

    pub fn from_scalars(values: &[f64]) -> Result<Self> {
        PointSet::new(values.iter().map(|&v| Point::scalar(v)).collect::<Result<_>>()?)
    }

    pub fn with_source(mut self, source: impl Into<String>) -> Self {
        self.source = Some(source.into());
        self
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.points.iter()
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = &'a Point;
    type IntoIter = std::slice::Iter<'a, Point>;

    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite() {
        assert!(matches!(Point::new(vec![1.0, f64::NAN]), Err(Error::Domain(_))));
        assert!(matches!(Point::scalar(f64::INFINITY), Err(Error::Domain(_))));
    }

    #[test]
    fn rejects_ragged_and_empty_sets() {
        assert!(PointSet::new(vec![]).is_err());
        let ragged = vec![Point::from([1.0, 2.0]), Point::from(3.0)];
        assert!(matches!(PointSet::new(ragged), Err(Error::Usage(_))));
    }
}
