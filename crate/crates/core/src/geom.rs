//! Plane points, vectors and rigid motions.

use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

/// A point (or free vector) in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    /// Counter-clockwise quarter turn.
    pub fn perp(self) -> Point2 {
        Point2::new(-self.y, self.x)
    }

    pub fn normalized(self) -> Point2 {
        let n = self.norm();
        Point2::new(self.x / n, self.y / n)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, k: f64) -> Point2 {
        Point2::new(self.x * k, self.y * k)
    }
}

impl Mul<Point2> for f64 {
    type Output = Point2;
    fn mul(self, p: Point2) -> Point2 {
        p * self
    }
}

/// Rotation by `angle` (radians, counter-clockwise) followed by a translation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Isometry {
    pub angle: f64,
    pub translation: Point2,
    #[serde(skip)]
    cos: f64,
    #[serde(skip)]
    sin: f64,
}

impl Default for Isometry {
    fn default() -> Self {
        Isometry::IDENTITY
    }
}

impl Isometry {
    pub const IDENTITY: Isometry = Isometry {
        angle: 0.0,
        translation: Point2::ORIGIN,
        cos: 1.0,
        sin: 0.0,
    };

    pub fn new(angle: f64, translation: Point2) -> Self {
        let (sin, cos) = angle.sin_cos();
        Isometry {
            angle,
            translation,
            cos,
            sin,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.angle == 0.0 && self.translation == Point2::ORIGIN
    }

    /// Rotates a free vector; translation is not applied.
    pub fn rotate(&self, v: Point2) -> Point2 {
        Point2::new(self.cos * v.x - self.sin * v.y, self.sin * v.x + self.cos * v.y)
    }

    pub fn rotate_inverse(&self, v: Point2) -> Point2 {
        Point2::new(self.cos * v.x + self.sin * v.y, -self.sin * v.x + self.cos * v.y)
    }

    pub fn apply(&self, p: Point2) -> Point2 {
        self.rotate(p) + self.translation
    }

    pub fn apply_inverse(&self, p: Point2) -> Point2 {
        self.rotate_inverse(p - self.translation)
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn compose(&self, inner: &Isometry) -> Isometry {
        Isometry::new(self.angle + inner.angle, self.apply(inner.translation))
    }
}

/// Orthonormal frame with the convex-side normal as its second axis.
///
/// Frame coordinates `(x, y)` of a world point `Q` are
/// `((Q - origin)·tangent, (Q - origin)·normal)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    pub origin: Point2,
    pub tangent: Point2,
    pub normal: Point2,
}

impl Frame {
    /// Frame from an origin and a (not necessarily unit) tangent direction.
    /// The normal is the counter-clockwise quarter turn of the tangent.
    pub fn new(origin: Point2, tangent: Point2) -> Self {
        let tangent = tangent.normalized();
        Frame {
            origin,
            tangent,
            normal: tangent.perp(),
        }
    }

    pub fn to_local(&self, p: Point2) -> Point2 {
        let d = p - self.origin;
        Point2::new(d.dot(self.tangent), d.dot(self.normal))
    }

    pub fn to_world(&self, p: Point2) -> Point2 {
        self.origin + self.tangent * p.x + self.normal * p.y
    }

    pub fn vector_to_world(&self, v: Point2) -> Point2 {
        self.tangent * v.x + self.normal * v.y
    }
}

/// Area of a triangle from its vertices (always non-negative).
pub fn triangle_area(a: Point2, b: Point2, c: Point2) -> f64 {
    0.5 * (b - a).cross(c - a).abs()
}
