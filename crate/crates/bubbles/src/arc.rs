//! Circular arcs described by a chord and a signed half-angle.
//!
//! An arc runs from `start` to `end`. Its half-angle `θ` is half of the
//! central angle it subtends, so the radius is `C / (2 sin θ)` for chord
//! length `C`. A positive half-angle bulges to the left of the directed
//! chord, a negative one to the right, and `θ = 0` is a straight segment.

use std::f64::consts::PI;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Below this magnitude the closed forms switch to their Taylor expansions.
pub const SERIES_THRESHOLD: f64 = 1e-6;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    /// Unit vector at `angle` radians from the positive x axis.
    pub fn polar(angle: f64) -> Self {
        Point::new(angle.cos(), angle.sin())
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn rotate(self, angle: f64) -> Point {
        let (s, c) = angle.sin_cos();
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    /// Rotation by a quarter turn counterclockwise.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn unit(self) -> Point {
        self / self.norm()
    }

    pub fn lerp(self, o: Point, t: f64) -> Point {
        self + (o - self) * t
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Div<f64> for Point {
    type Output = Point;
    fn div(self, s: f64) -> Point {
        Point::new(self.x / s, self.y / s)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// A circular arc or straight segment between two distinct points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArcSpec {
    start: Point,
    end: Point,
    half_angle: f64,
}

impl ArcSpec {
    pub fn new(start: Point, end: Point, half_angle: f64) -> Result<Self> {
        if !start.is_finite() || !end.is_finite() {
            return Err(Error::NonFinite("arc endpoint"));
        }
        if !half_angle.is_finite() {
            return Err(Error::NonFinite("half-angle"));
        }
        if half_angle.abs() >= PI {
            return Err(Error::HalfAngleOutOfRange(half_angle));
        }
        if start == end {
            return Err(Error::DegenerateChord);
        }
        Ok(ArcSpec { start, end, half_angle })
    }

    pub fn straight(start: Point, end: Point) -> Result<Self> {
        Self::new(start, end, 0.0)
    }

    pub fn start(&self) -> Point {
        self.start
    }

    pub fn end(&self) -> Point {
        self.end
    }

    pub fn half_angle(&self) -> f64 {
        self.half_angle
    }

    pub fn is_straight(&self) -> bool {
        self.half_angle == 0.0
    }

    pub fn chord(&self) -> f64 {
        self.start.dist(self.end)
    }

    pub fn chord_direction(&self) -> Point {
        (self.end - self.start).unit()
    }

    /// Signed curvature `2 sin θ / C`; positive when bulging left.
    pub fn curvature(&self) -> f64 {
        2.0 * self.half_angle.sin() / self.chord()
    }

    pub fn radius(&self) -> f64 {
        arc_radius(self)
    }

    pub fn length(&self) -> f64 {
        arc_length(self)
    }

    pub fn segment_area(&self) -> f64 {
        segment_area(self)
    }

    /// Unit tangent when leaving `start`.
    pub fn start_tangent(&self) -> Point {
        self.chord_direction().rotate(self.half_angle)
    }

    /// Unit tangent of travel when arriving at `end`.
    pub fn end_tangent(&self) -> Point {
        self.chord_direction().rotate(-self.half_angle)
    }

    /// Same curve traversed from `end` to `start`.
    pub fn reversed(&self) -> ArcSpec {
        ArcSpec { start: self.end, end: self.start, half_angle: -self.half_angle }
    }

    /// Signed distance from the chord midpoint to the arc midpoint, measured
    /// along the left normal.
    pub fn sagitta(&self) -> f64 {
        0.5 * self.chord() * (0.5 * self.half_angle).tan()
    }

    pub fn center(&self) -> Option<Point> {
        if self.is_straight() {
            return None;
        }
        let mid = self.start.lerp(self.end, 0.5);
        let normal = self.chord_direction().perp();
        Some(mid - normal * (0.5 * self.chord() / self.half_angle.tan()))
    }

    /// Point at fraction `t` of the arc length.
    pub fn point_at(&self, t: f64) -> Point {
        match self.center() {
            Some(c) if self.half_angle.abs() > 1e-9 => c + (self.start - c).rotate(-2.0 * self.half_angle * t),
            _ => {
                // Parabolic approximation of a nearly straight arc.
                let base = self.start.lerp(self.end, t);
                let bulge = 4.0 * t * (1.0 - t) * self.sagitta();
                base + self.chord_direction().perp() * bulge
            }
        }
    }

    /// Splits the arc at fraction `t` of its length into two arcs on the same circle.
    pub fn split_at(&self, t: f64) -> Result<(ArcSpec, ArcSpec)> {
        let p = self.point_at(t);
        Ok((ArcSpec::new(self.start, p, self.half_angle * t)?, ArcSpec::new(p, self.end, self.half_angle * (1.0 - t))?))
    }

    /// Fraction along the arc of the point nearest to `p` on its supporting curve.
    pub fn parameter_of(&self, p: Point) -> f64 {
        match self.center() {
            Some(c) if self.half_angle.abs() > 1e-9 => {
                let a0 = (self.start - c).angle();
                let a1 = (p - c).angle();
                let mut sweep = a1 - a0;
                // Travel is clockwise for positive half-angles.
                if self.half_angle > 0.0 {
                    sweep = -sweep;
                }
                let sweep = sweep.rem_euclid(2.0 * PI);
                sweep / (2.0 * self.half_angle.abs())
            }
            _ => {
                let d = self.end - self.start;
                (p - self.start).dot(d) / d.dot(d)
            }
        }
    }

    /// Axis-aligned bounds of the curve as `(min, max)`.
    pub fn bounds(&self) -> (Point, Point) {
        let mut lo = Point::new(self.start.x.min(self.end.x), self.start.y.min(self.end.y));
        let mut hi = Point::new(self.start.x.max(self.end.x), self.start.y.max(self.end.y));
        if let Some(c) = self.center().filter(|_| self.half_angle.abs() > 1e-9) {
            let r = self.radius().abs();
            for k in 0..4 {
                let dir = Point::polar(k as f64 * PI / 2.0);
                let q = c + dir * r;
                let t = self.parameter_of(q);
                if t <= 1.0 {
                    lo = Point::new(lo.x.min(q.x), lo.y.min(q.y));
                    hi = Point::new(hi.x.max(q.x), hi.y.max(q.y));
                }
            }
        }
        (lo, hi)
    }

    /// Polyline through `n + 1` points along the arc.
    pub fn sample(&self, n: usize) -> Vec<Point> {
        (0..=n).map(|i| self.point_at(i as f64 / n as f64)).collect()
    }
}

/// `θ / sin θ`, continuous at zero.
fn theta_over_sin(theta: f64) -> f64 {
    if theta.abs() < SERIES_THRESHOLD {
        1.0 + theta * theta / 6.0
    } else {
        theta / theta.sin()
    }
}

/// `x - sin x` without cancellation for small `x`.
fn x_minus_sin(x: f64) -> f64 {
    if x.abs() < 1.0 {
        let x2 = x * x;
        let mut term = x * x2 / 6.0;
        let mut sum = term;
        let mut k = 3.0;
        while term.abs() > 1e-18 * sum.abs() {
            term *= -x2 / ((k + 1.0) * (k + 2.0));
            sum += term;
            k += 2.0;
        }
        sum
    } else {
        x - x.sin()
    }
}

/// Arc length for chord `c` and half-angle `theta`.
pub fn arc_length_from(c: f64, theta: f64) -> f64 {
    c * theta_over_sin(theta)
}

/// Signed area between the arc and its chord for chord `c` and half-angle `theta`.
pub fn segment_area_from(c: f64, theta: f64) -> f64 {
    if theta == 0.0 {
        return 0.0;
    }
    if theta.abs() < SERIES_THRESHOLD {
        return c * c * theta / 6.0 * (1.0 + 2.0 * theta * theta / 15.0);
    }
    let s = theta.sin();
    // θ - sin θ cos θ = (2θ - sin 2θ) / 2
    c * c * x_minus_sin(2.0 * theta) / (8.0 * s * s)
}

/// Signed radius `C / (2 sin θ)`; infinite for a straight segment.
pub fn arc_radius(spec: &ArcSpec) -> f64 {
    if spec.is_straight() {
        f64::INFINITY
    } else {
        spec.chord() / (2.0 * spec.half_angle.sin())
    }
}

pub fn arc_length(spec: &ArcSpec) -> f64 {
    arc_length_from(spec.chord(), spec.half_angle)
}

pub fn segment_area(spec: &ArcSpec) -> f64 {
    segment_area_from(spec.chord(), spec.half_angle)
}

/// Angle in `[0, π]` between the tangents of `a` and `b` leaving their common endpoint `at`.
pub fn meeting_angle(a: &ArcSpec, b: &ArcSpec, at: Point) -> Result<f64> {
    let ta = outgoing_tangent(a, at)?;
    let tb = outgoing_tangent(b, at)?;
    Ok(ta.cross(tb).abs().atan2(ta.dot(tb)))
}

fn outgoing_tangent(arc: &ArcSpec, at: Point) -> Result<Point> {
    let tol = 1e-9 * arc.chord().max(1.0);
    if arc.start.dist(at) <= tol {
        Ok(arc.start_tangent())
    } else if arc.end.dist(at) <= tol {
        Ok(-arc.end_tangent())
    } else {
        Err(Error::NotAnEndpoint)
    }
}

/// Distance between the centres of two circles of radii `r1`, `r2` crossing at `2π/3`.
pub fn two_arc_center_distance(r1: f64, r2: f64) -> Result<f64> {
    for r in [r1, r2] {
        if !(r > 0.0) {
            return Err(Error::NonPositiveRadius(r));
        }
    }
    Ok((r1 * r1 + r2 * r2 - r1 * r2).sqrt())
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    let w = (a + PI).rem_euclid(2.0 * PI) - PI;
    if w <= -PI {
        w + 2.0 * PI
    } else {
        w
    }
}
