//! Planar primitives shared by every other module.
//!
//! All regions are closed: a point on the boundary is inside. Predicates use a
//! fixed absolute tolerance of [`EPS`] meters.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for geometric predicates, in meters.
pub const EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };
    pub const X: Vec2 = Vec2 { x: 1.0, y: 0.0 };
    pub const Y: Vec2 = Vec2 { x: 0.0, y: 1.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Unit vector at `angle` radians from +x.
    pub fn from_angle(angle: f64) -> Self {
        Self::new(angle.cos(), angle.sin())
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3-D cross product.
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    /// Unit vector in the same direction, or `None` for a (near-)zero vector.
    pub fn normalized(self) -> Option<Vec2> {
        let n = self.norm();
        (n > EPS).then(|| Vec2::new(self.x / n, self.y / n))
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    /// Counterclockwise perpendicular.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    fn lex_cmp(&self, other: &Vec2) -> std::cmp::Ordering {
        self.x
            .total_cmp(&other.x)
            .then_with(|| self.y.total_cmp(&other.y))
    }
}

impl From<[f64; 2]> for Vec2 {
    fn from(a: [f64; 2]) -> Self {
        Vec2::new(a[0], a[1])
    }
}

impl From<Vec2> for [f64; 2] {
    fn from(v: Vec2) -> Self {
        [v.x, v.y]
    }
}

impl From<(f64, f64)> for Vec2 {
    fn from((x, y): (f64, f64)) -> Self {
        Vec2::new(x, y)
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign for Vec2 {
    fn add_assign(&mut self, rhs: Vec2) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, k: f64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Rotates `v` counterclockwise by `phi` radians about the z-axis.
pub fn rotate(v: Vec2, phi: f64) -> Vec2 {
    let (s, c) = phi.sin_cos();
    Vec2::new(c * v.x - s * v.y, s * v.x + c * v.y)
}

pub fn dist(a: Vec2, b: Vec2) -> f64 {
    (a - b).norm()
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(a: f64) -> f64 {
    let mut a = a % std::f64::consts::TAU;
    if a > std::f64::consts::PI {
        a -= std::f64::consts::TAU;
    } else if a <= -std::f64::consts::PI {
        a += std::f64::consts::TAU;
    }
    a
}

pub fn dist_to_segment(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let ab = b - a;
    let len_sq = ab.norm_sq();
    if len_sq <= EPS * EPS {
        return dist(p, a);
    }
    let t = ((p - a).dot(ab) / len_sq).clamp(0.0, 1.0);
    dist(p, a + ab * t)
}

/// A convex polygon in canonical form: counterclockwise, no collinear
/// vertices, lexicographically smallest vertex first.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexPolygon {
    vertices: Vec<Vec2>,
}

impl ConvexPolygon {
    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vec2, Vec2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn contains(&self, p: Vec2) -> bool {
        self.edges().all(|(a, b)| {
            let edge = b - a;
            edge.cross(p - a) >= -EPS * edge.norm()
        })
    }

    pub fn distance(&self, p: Vec2) -> f64 {
        if self.contains(p) {
            return 0.0;
        }
        self.edges()
            .map(|(a, b)| dist_to_segment(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Like [`ConvexPolygon::distance`] outside; minus the distance to the
    /// boundary inside.
    pub fn signed_distance(&self, p: Vec2) -> f64 {
        let boundary = self
            .edges()
            .map(|(a, b)| dist_to_segment(p, a, b))
            .fold(f64::INFINITY, f64::min);
        if self.contains(p) {
            -boundary
        } else {
            boundary
        }
    }

    pub fn area(&self) -> f64 {
        0.5 * self.edges().map(|(a, b)| a.cross(b)).sum::<f64>()
    }
}

/// Result of [`convex_hull`]; degenerate inputs collapse to lower dimension.
#[derive(Debug, Clone, PartialEq)]
pub enum Hull {
    Point(Vec2),
    /// Extreme points of a collinear set, lexicographic order.
    Segment(Vec2, Vec2),
    Polygon(ConvexPolygon),
}

impl Hull {
    pub fn vertices(&self) -> Vec<Vec2> {
        match self {
            Hull::Point(p) => vec![*p],
            Hull::Segment(a, b) => vec![*a, *b],
            Hull::Polygon(poly) => poly.vertices.clone(),
        }
    }
}

/// Convex hull by Andrew's monotone chain.
///
/// Collinear and duplicate points (within [`EPS`]) are dropped from the
/// vertex list, which makes the output canonical.
pub fn convex_hull(points: &[Vec2]) -> Result<Hull> {
    if points.is_empty() {
        return Err(Error::Geometry("empty point set".into()));
    }
    if let Some(bad) = points.iter().find(|p| !p.is_finite()) {
        return Err(Error::Geometry(format!("non-finite point {bad}")));
    }

    let mut pts = points.to_vec();
    pts.sort_by(Vec2::lex_cmp);
    pts.dedup_by(|a, b| dist(*a, *b) <= EPS);
    if pts.len() == 1 {
        return Ok(Hull::Point(pts[0]));
    }

    // Strictly-left turns only; collinear middles are popped.
    let turn = |o: Vec2, a: Vec2, b: Vec2| {
        let (oa, ob) = (a - o, b - o);
        oa.cross(ob) > EPS * oa.norm().max(ob.norm())
    };

    let mut hull: Vec<Vec2> = Vec::with_capacity(pts.len() * 2);
    for &p in &pts {
        while hull.len() >= 2 && !turn(hull[hull.len() - 2], hull[hull.len() - 1], p) {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && !turn(hull[hull.len() - 2], hull[hull.len() - 1], p) {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();

    if hull.len() < 3 {
        let first = pts[0];
        let last = pts[pts.len() - 1];
        return Ok(Hull::Segment(first, last));
    }
    Ok(Hull::Polygon(ConvexPolygon { vertices: hull }))
}

/// Potential freezing zone. The variant follows from how many points it was
/// built from: one point gives a circle, two (or a collinear set) an inflated
/// segment, three or more a convex polygon.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Pfz {
    Polygon(ConvexPolygon),
    Circle { center: Vec2, radius: f64 },
    Segment { a: Vec2, b: Vec2, inflation: f64 },
}

impl Pfz {
    pub fn contains(&self, p: Vec2) -> bool {
        match self {
            Pfz::Polygon(poly) => poly.contains(p),
            Pfz::Circle { center, radius } => dist(p, *center) <= radius + EPS,
            Pfz::Segment { a, b, inflation } => dist_to_segment(p, *a, *b) <= inflation + EPS,
        }
    }

    /// Euclidean distance from `p` to the zone; zero exactly when
    /// [`Pfz::contains`] holds.
    pub fn distance(&self, p: Vec2) -> f64 {
        if self.contains(p) {
            return 0.0;
        }
        match self {
            Pfz::Polygon(poly) => poly.distance(p),
            Pfz::Circle { center, radius } => dist(p, *center) - radius,
            Pfz::Segment { a, b, inflation } => dist_to_segment(p, *a, *b) - inflation,
        }
    }

    /// Signed distance to the zone boundary, negative inside.
    pub fn signed_distance(&self, p: Vec2) -> f64 {
        match self {
            Pfz::Polygon(poly) => poly.signed_distance(p),
            Pfz::Circle { center, radius } => dist(p, *center) - radius,
            Pfz::Segment { a, b, inflation } => dist_to_segment(p, *a, *b) - inflation,
        }
    }

    /// Applies a rigid transform `p -> rotate(p, angle) + offset`.
    pub fn transformed(&self, angle: f64, offset: Vec2) -> Pfz {
        let tf = |p: Vec2| rotate(p, angle) + offset;
        match self {
            Pfz::Polygon(poly) => Pfz::Polygon(ConvexPolygon {
                // rotation keeps orientation; restore the canonical start vertex
                vertices: canonical_rotation(poly.vertices.iter().map(|&v| tf(v)).collect()),
            }),
            Pfz::Circle { center, radius } => Pfz::Circle {
                center: tf(*center),
                radius: *radius,
            },
            Pfz::Segment { a, b, inflation } => Pfz::Segment {
                a: tf(*a),
                b: tf(*b),
                inflation: *inflation,
            },
        }
    }
}

fn canonical_rotation(mut v: Vec<Vec2>) -> Vec<Vec2> {
    if let Some((i, _)) = v.iter().enumerate().min_by(|a, b| a.1.lex_cmp(b.1)) {
        v.rotate_left(i);
    }
    v
}

pub fn contains(zone: &Pfz, p: Vec2) -> bool {
    zone.contains(p)
}

pub fn dist_to_zone(zone: &Pfz, p: Vec2) -> f64 {
    zone.distance(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    fn triangle() -> Pfz {
        match convex_hull(&[
            Vec2::new(1.0, 0.0),
            Vec2::new(2.0, 1.0),
            Vec2::new(2.0, -1.0),
        ])
        .unwrap()
        {
            Hull::Polygon(p) => Pfz::Polygon(p),
            other => panic!("expected polygon, got {other:?}"),
        }
    }

    #[test]
    fn rotate_examples() {
        let r = rotate(Vec2::X, 0.0);
        assert_eq!(r, Vec2::X);
        let r = rotate(Vec2::X, FRAC_PI_2);
        assert_abs_diff_eq!(r.x, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.y, 1.0, epsilon = 1e-12);
        let r = rotate(Vec2::new(0.5, 0.0), 0.3);
        assert_abs_diff_eq!(r.x, 0.477668, epsilon = 1e-6);
        assert_abs_diff_eq!(r.y, 0.147760, epsilon = 1e-6);
    }

    #[test]
    fn hull_of_triangle_is_canonical() {
        let hull = convex_hull(&[
            Vec2::new(2.0, 1.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(2.0, -1.0),
            Vec2::new(1.5, 0.0),
        ])
        .unwrap();
        assert_eq!(
            hull.vertices(),
            vec![
                Vec2::new(1.0, 0.0),
                Vec2::new(2.0, -1.0),
                Vec2::new(2.0, 1.0)
            ]
        );
    }

    #[test]
    fn collinear_hull_is_segment() {
        let hull = convex_hull(&[
            Vec2::new(1.0, 1.0),
            Vec2::new(0.0, 0.0),
            Vec2::new(2.0, 2.0),
        ])
        .unwrap();
        assert_eq!(
            hull,
            Hull::Segment(Vec2::new(0.0, 0.0), Vec2::new(2.0, 2.0))
        );
    }

    #[test]
    fn single_and_duplicate_points() {
        let p = Vec2::new(0.3, -0.2);
        assert_eq!(convex_hull(&[p, p, p]).unwrap(), Hull::Point(p));
    }

    #[test]
    fn empty_hull_is_an_error() {
        let err = convex_hull(&[]).unwrap_err();
        assert!(err.to_string().contains("empty point set"));
    }

    #[test]
    fn containment_examples() {
        let circle = Pfz::Circle {
            center: Vec2::new(2.0, 0.0),
            radius: 0.4,
        };
        assert!(circle.contains(Vec2::new(2.0, 0.3)));
        assert!(triangle().contains(Vec2::new(1.5, 0.0)));
        assert!(!triangle().contains(Vec2::new(0.0, 0.0)));
        // boundary is inside
        assert!(triangle().contains(Vec2::new(2.0, 0.0)));
    }

    #[test]
    fn distance_examples() {
        assert_eq!(dist(Vec2::ZERO, Vec2::new(3.0, 4.0)), 5.0);
        let circle = Pfz::Circle {
            center: Vec2::new(2.0, 0.0),
            radius: 0.4,
        };
        assert_abs_diff_eq!(circle.distance(Vec2::new(4.0, 0.0)), 1.6, epsilon = 1e-12);
        assert_abs_diff_eq!(triangle().distance(Vec2::ZERO), 1.0, epsilon = 1e-12);
        assert_eq!(triangle().distance(Vec2::new(1.9, 0.1)), 0.0);
    }

    #[test]
    fn segment_zone() {
        let seg = Pfz::Segment {
            a: Vec2::new(1.0, -1.0),
            b: Vec2::new(1.0, 1.0),
            inflation: 0.4,
        };
        assert!(seg.contains(Vec2::new(1.3, 0.5)));
        assert!(!seg.contains(Vec2::new(1.0, 1.5)));
        assert_abs_diff_eq!(seg.distance(Vec2::new(2.0, 0.0)), 0.6, epsilon = 1e-12);
    }

    #[test]
    fn transformed_polygon_stays_canonical() {
        let moved = triangle().transformed(FRAC_PI_2, Vec2::new(1.0, 1.0));
        let Pfz::Polygon(poly) = moved else { panic!() };
        let again = convex_hull(poly.vertices()).unwrap();
        assert_eq!(again, Hull::Polygon(poly));
    }

    #[test]
    fn wrap_angle_range() {
        assert_abs_diff_eq!(wrap_angle(3.0 * std::f64::consts::PI), std::f64::consts::PI);
        assert_abs_diff_eq!(wrap_angle(-0.5), -0.5);
    }
}
