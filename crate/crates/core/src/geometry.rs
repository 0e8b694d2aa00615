//! Points, rectangles and uniform grid geometry.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A point in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2<S> {
    pub x: S,
    pub y: S,
}

impl<S: Scalar> Point2<S> {
    pub fn new(x: S, y: S) -> Self {
        Point2 { x, y }
    }

    pub fn distance(self, other: Self) -> S {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Closed axis-aligned rectangle `[x0, x1] x [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect<S> {
    pub x0: S,
    pub x1: S,
    pub y0: S,
    pub y1: S,
}

impl<S: Scalar> Rect<S> {
    pub fn new(x0: S, x1: S, y0: S, y1: S) -> Result<Self> {
        let all_finite = [x0, x1, y0, y1].iter().all(|v| v.is_finite());
        if !all_finite || x0 >= x1 || y0 >= y1 {
            return Err(Error::Validation(format!(
                "rectangle corners must be finite with x0 < x1 and y0 < y1, got \
                 [{:?}, {:?}]x[{:?}, {:?}]",
                x0, x1, y0, y1
            )));
        }
        Ok(Rect { x0, x1, y0, y1 })
    }

    /// Square `[-a, a] x [-a, a]`.
    pub fn centered(a: S) -> Result<Self> {
        Rect::new(-a, a, -a, a)
    }

    pub fn contains(&self, p: Point2<S>) -> bool {
        p.x >= self.x0 && p.x <= self.x1 && p.y >= self.y0 && p.y <= self.y1
    }

    pub fn contains_rect(&self, other: &Rect<S>) -> bool {
        other.x0 >= self.x0 && other.x1 <= self.x1 && other.y0 >= self.y0 && other.y1 <= self.y1
    }

    /// Rectangle shrunk by `pad` on every side; errors when it collapses.
    pub fn inset(&self, pad: S) -> Result<Self> {
        Rect::new(self.x0 + pad, self.x1 - pad, self.y0 + pad, self.y1 - pad)
    }

    pub fn width(&self) -> S {
        self.x1 - self.x0
    }

    pub fn height(&self) -> S {
        self.y1 - self.y0
    }

    fn to_f64(self) -> (f64, f64, f64, f64) {
        (
            self.x0.as_f64(),
            self.x1.as_f64(),
            self.y0.as_f64(),
            self.y1.as_f64(),
        )
    }

    pub(crate) fn outside_error(&self, p: Point2<S>) -> Error {
        let (x0, x1, y0, y1) = self.to_f64();
        Error::OutsideDomain {
            x: p.x.as_f64(),
            y: p.y.as_f64(),
            x0,
            x1,
            y0,
            y1,
        }
    }
}

/// Vertex-centred uniform grid over a rectangle: `nx` columns in x, `ny`
/// rows in y. Values attached to such a grid are stored row-major with x as
/// the slow index: node `(i, j)` lives at flat index `i*ny + j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec<S> {
    pub rect: Rect<S>,
    pub nx: usize,
    pub ny: usize,
}

impl<S: Scalar> GridSpec<S> {
    pub fn new(rect: Rect<S>, nx: usize, ny: usize) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(Error::Validation(format!(
                "grid needs at least 2 points per axis, got {nx}x{ny}"
            )));
        }
        Ok(GridSpec { rect, nx, ny })
    }

    pub fn dx(&self) -> S {
        self.rect.width() / S::from_usize(self.nx - 1).unwrap()
    }

    pub fn dy(&self) -> S {
        self.rect.height() / S::from_usize(self.ny - 1).unwrap()
    }

    /// x-coordinate of column `i`; the last column is exactly `x1` so that
    /// boundary nodes stay inside the rectangle despite rounding.
    pub fn x(&self, i: usize) -> S {
        if i == self.nx - 1 {
            self.rect.x1
        } else {
            self.rect.x0 + self.dx() * S::from_usize(i).unwrap()
        }
    }

    pub fn y(&self, j: usize) -> S {
        if j == self.ny - 1 {
            self.rect.y1
        } else {
            self.rect.y0 + self.dy() * S::from_usize(j).unwrap()
        }
    }

    pub fn node(&self, i: usize, j: usize) -> Point2<S> {
        Point2::new(self.x(i), self.y(j))
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.ny + j
    }

    /// All `(i, j)` index pairs in storage order.
    pub fn indices(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let ny = self.ny;
        (0..self.nx).flat_map(move |i| (0..ny).map(move |j| (i, j)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rect_rejects_flipped_corners() {
        assert!(Rect::new(1.0, 0.0, 0.0, 1.0).is_err());
        assert!(Rect::new(0.0, 1.0, 2.0, 1.0).is_err());
        assert!(Rect::new(0.0, f64::NAN, 0.0, 1.0).is_err());
    }

    #[test]
    fn grid_boundary_nodes_are_exact() {
        let rect = Rect::new(-2.0, 2.0, -1.0, 1.0).unwrap();
        let spec = GridSpec::new(rect, 101, 7).unwrap();
        assert_eq!(spec.x(0), -2.0);
        assert_eq!(spec.x(100), 2.0);
        assert_eq!(spec.y(6), 1.0);
        assert!(rect.contains(spec.node(100, 6)));
    }

    #[test]
    fn grid_index_is_x_slow() {
        let rect = Rect::new(0.0, 1.0, 0.0, 1.0).unwrap();
        let spec = GridSpec::new(rect, 3, 2).unwrap();
        assert_eq!(spec.index(0, 0), 0);
        assert_eq!(spec.index(0, 1), 1);
        assert_eq!(spec.index(1, 0), 2);
        assert_eq!(spec.len(), 6);
    }

    #[test]
    fn grid_requires_two_points_per_axis() {
        let rect = Rect::new(0.0, 1.0, 0.0, 1.0).unwrap();
        assert!(GridSpec::new(rect, 1, 5).is_err());
    }
}
