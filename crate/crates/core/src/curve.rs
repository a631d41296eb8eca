//! Closed and open polylines in R³.

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Point3 = [f64; 3];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurveError {
    #[error("polyline needs at least {0} distinct points")]
    TooShort(usize),
    #[error("non-finite coordinate at vertex {0}")]
    NonFinite(usize),
}

/// Ordered vertices. A closed curve repeats its first vertex at the end, and
/// no two consecutive vertices coincide.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polyline3 {
    pub points: Vec<Point3>,
    pub closed: bool,
}

impl Polyline3 {
    /// Drops consecutive duplicates and, for closed curves, appends the first
    /// vertex if it is not already repeated.
    pub fn new(points: Vec<Point3>, closed: bool) -> Result<Self, CurveError> {
        let mut out: Vec<Point3> = Vec::with_capacity(points.len() + 1);
        for (i, p) in points.into_iter().enumerate() {
            if p.iter().any(|c| !c.is_finite()) {
                return Err(CurveError::NonFinite(i));
            }
            if out.last() != Some(&p) {
                out.push(p);
            }
        }
        if closed {
            while out.len() > 1 && out.last() == out.first() {
                out.pop();
            }
            if out.len() < 3 {
                return Err(CurveError::TooShort(3));
            }
            out.push(out[0]);
        } else if out.len() < 2 {
            return Err(CurveError::TooShort(2));
        }
        Ok(Self { points: out, closed })
    }

    /// Keeps a vertex only when it is at least `h` from the last kept one.
    /// The first vertex always stays, and so does the last of an open curve.
    pub fn decimated(&self, h: f64) -> Result<Self, CurveError> {
        let n = self.vertex_count();
        let mut out: Vec<Point3> = vec![self.points[0]];
        for p in &self.points[1..n] {
            if dist(p, out.last().unwrap()) >= h {
                out.push(*p);
            }
        }
        if self.closed {
            while out.len() > 1 && dist(out.last().unwrap(), &out[0]) < h {
                out.pop();
            }
        } else if n > 1 {
            out.push(self.points[n - 1]);
        }
        Self::new(out, self.closed)
    }

    /// Number of vertices, not counting the repeated closing vertex.
    pub fn vertex_count(&self) -> usize {
        self.points.len() - usize::from(self.closed)
    }

    /// Edges as consecutive vertex pairs.
    pub fn segments(&self) -> impl Iterator<Item = (Point3, Point3)> + '_ {
        self.points.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn length(&self) -> f64 {
        self.segments().map(|(a, b)| dist(&a, &b)).sum()
    }

    /// True when the invariants hold: closed curves repeat the first vertex and
    /// consecutive vertices differ.
    pub fn is_valid(&self) -> bool {
        let dup = self.points.windows(2).any(|w| w[0] == w[1]);
        let ends = !self.closed || self.points.first() == self.points.last();
        !dup && ends && self.points.len() >= 2
    }

    /// CSV with columns `x,y,z`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,y,z\n");
        for p in &self.points {
            s.push_str(&format!("{:.16e},{:.16e},{:.16e}\n", p[0], p[1], p[2]));
        }
        s
    }
}

pub fn dist(a: &Point3, b: &Point3) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}
