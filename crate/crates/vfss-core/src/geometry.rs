//! The anatomical reference frame defined by the C2–C4 cervical spine.
//!
//! C4 is the origin, the y' axis points from C4 toward C2, and the x' axis
//! is perpendicular to it. The transform is rigid, so distances carry over
//! from pixel space unchanged.

use crate::error::{Error, Result};

/// A point in image pixel coordinates, `(x, y) = (col, row)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(&self, other: &Point) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2)).sqrt()
    }
}

/// Anterior-inferior corners of the C2 and C4 vertebrae, in pixels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpineLandmarks {
    pub c2: Point,
    pub c4: Point,
}

impl SpineLandmarks {
    pub fn new(c2: Point, c4: Point) -> Result<Self> {
        if c2.dist(&c4) == 0.0 {
            return Err(Error::CoincidentLandmarks);
        }
        Ok(SpineLandmarks { c2, c4 })
    }

    /// C2–C4 Euclidean distance in pixels (the normalization unit).
    pub fn distance(&self) -> f64 {
        self.c2.dist(&self.c4)
    }
}

/// Rigid transform into the spine frame: C4 maps to (0, 0), C2 to (0, d).
///
/// `unit_x` is `unit_y` rotated by −90° in image-pixel axes (x right,
/// y down), so x' grows toward the anterior side in a left-facing lateral
/// projection. Set `flip_x` when the recording faces the other way.
#[derive(Debug, Clone, Copy)]
pub struct SpineTransform {
    origin: Point,
    unit_x: Point,
    unit_y: Point,
    d: f64,
}

impl SpineTransform {
    pub fn from_landmarks(landmarks: &SpineLandmarks) -> Result<Self> {
        Self::with_orientation(landmarks, false)
    }

    pub fn with_orientation(landmarks: &SpineLandmarks, flip_x: bool) -> Result<Self> {
        let d = landmarks.distance();
        if d == 0.0 {
            return Err(Error::CoincidentLandmarks);
        }
        let unit_y = Point::new(
            (landmarks.c2.x - landmarks.c4.x) / d,
            (landmarks.c2.y - landmarks.c4.y) / d,
        );
        let mut unit_x = Point::new(unit_y.y, -unit_y.x);
        if flip_x {
            unit_x = Point::new(-unit_x.x, -unit_x.y);
        }
        Ok(SpineTransform {
            origin: landmarks.c4,
            unit_x,
            unit_y,
            d,
        })
    }

    /// C2–C4 distance in pixels.
    pub fn distance(&self) -> f64 {
        self.d
    }

    /// Map a pixel point into spine coordinates (x', y').
    pub fn to_spine(&self, p: Point) -> Point {
        let dx = p.x - self.origin.x;
        let dy = p.y - self.origin.y;
        Point::new(
            dx * self.unit_x.x + dy * self.unit_x.y,
            dx * self.unit_y.x + dy * self.unit_y.y,
        )
    }
}
