//! Exact constructions of equal-pressure n-gons and reference complexes.
//!
//! With exterior curvature `κ` the equal-pressure family has
//!
//! * 3-gon: a semicircle on a chord of `2/κ` with flat sides `b = 2/(√3κ)`;
//! * 4-gon: an arc of half-angle `π/3` on a chord of `√3/κ`, two sides of
//!   length `t` and a central edge of length `√3/κ − t`;
//! * 5-gon: an arc of half-angle `π/6` on a chord of `1/κ`, two parallel
//!   sides `h1`, `h2` and two inner edges whose lengths sum to `b`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::arc::Point;
use crate::complex::{BubbleComplex, ComplexBuilder, RegionLabel};
use crate::error::{Error, Result};

/// Unit vector at an angle given in degrees.
pub(crate) fn dir(deg: f64) -> Point {
    Point::polar(deg.to_radians())
}

/// Flat side of the equal-pressure 3-gon.
pub fn threegon_side(kappa: f64) -> f64 {
    2.0 / (3f64.sqrt() * kappa)
}

/// Chord of the equal-pressure 4-gon's exterior arc.
pub fn fourgon_chord(kappa: f64) -> f64 {
    3f64.sqrt() / kappa
}

/// Chord of the equal-pressure 5-gon's exterior arc.
pub fn fivegon_chord(kappa: f64) -> f64 {
    1.0 / kappa
}

/// Builds complexes face by face from counterclockwise boundaries.
///
/// Each boundary entry is a vertex and the half-angle of the edge leaving it
/// (with the face on the left). Coincident vertices and shared edges are
/// identified automatically; sides no face claims border the exterior.
#[derive(Clone, Debug, Default)]
pub struct Sketch {
    b: ComplexBuilder,
    next_key: u64,
}

impl Sketch {
    pub fn new() -> Self {
        Sketch { b: ComplexBuilder::new(), next_key: 1 }
    }

    fn vertex(&mut self, p: Point) -> usize {
        let tol = 1e-9 * p.norm().max(1.0);
        match self.b.vertices.iter().position(|q| q.dist(p) <= tol) {
            Some(v) => v,
            None => self.b.vertex(p),
        }
    }

    pub fn face(&mut self, label: RegionLabel, boundary: &[(Point, f64)]) -> &mut Self {
        let key = self.next_key;
        self.next_key += 1;
        self.b.face(key, label);
        let ids: Vec<usize> = boundary.iter().map(|&(p, _)| self.vertex(p)).collect();
        for (i, &(_, theta)) in boundary.iter().enumerate() {
            let (u, v) = (ids[i], ids[(i + 1) % ids.len()]);
            let existing = self
                .b
                .edges
                .iter()
                .position(|e| e.from == v && e.to == u && (e.half_angle + theta).abs() < 1e-9 && e.right.is_none());
            match existing {
                Some(e) => {
                    self.b.set_right(e, key);
                }
                None => {
                    let e = self.b.edge(u, v, theta);
                    self.b.set_left(e, key);
                }
            }
        }
        self
    }

    pub fn build(&self) -> Result<BubbleComplex> {
        self.b.build()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NgonKind {
    Threegon,
    Fourgon,
    Fivegon,
}

/// Parameters of a single equal-pressure n-gon.
///
/// The 4-gon takes `t`, the length of its two sides meeting the exterior
/// arc. The 5-gon takes `u` and `v`, the lengths of its two parallel sides;
/// its inner edges then have lengths `b/2 + (v − u)` and `b/2 − (v − u)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NgonParams {
    pub kind: NgonKind,
    pub kappa: f64,
    pub t: Option<f64>,
    pub u: Option<f64>,
    pub v: Option<f64>,
}

impl NgonParams {
    pub fn threegon(kappa: f64) -> Self {
        NgonParams { kind: NgonKind::Threegon, kappa, t: None, u: None, v: None }
    }

    pub fn fourgon(kappa: f64, t: f64) -> Self {
        NgonParams { kind: NgonKind::Fourgon, kappa, t: Some(t), u: None, v: None }
    }

    pub fn fivegon(kappa: f64, u: f64, v: f64) -> Self {
        NgonParams { kind: NgonKind::Fivegon, kappa, t: None, u: Some(u), v: Some(v) }
    }

    /// Central edge of a 4-gon, which is also the side of the equilateral
    /// triangle cut off by extending its two sides.
    pub fn fourgon_central_edge(&self) -> Option<f64> {
        self.t.map(|t| fourgon_chord(self.kappa) - t)
    }

    /// Inner edge lengths of a 5-gon: the one meeting the `u` side first.
    pub fn fivegon_inner_edges(&self) -> Option<(f64, f64)> {
        let (u, v) = (self.u?, self.v?);
        let s = threegon_side(self.kappa);
        Some((s / 2.0 + (v - u), s / 2.0 - (v - u)))
    }

    fn check(&self) -> Result<()> {
        if !(self.kappa > 0.0) || !self.kappa.is_finite() {
            return Err(Error::InvalidArgument(format!("kappa must be positive, got {}", self.kappa)));
        }
        let (t, u, v) = (self.t, self.u, self.v);
        match self.kind {
            NgonKind::Threegon if t.is_some() || u.is_some() || v.is_some() => {
                Err(Error::InvalidArgument("a 3-gon takes no shape parameters".into()))
            }
            NgonKind::Fourgon if t.is_none() || u.is_some() || v.is_some() => {
                Err(Error::InvalidArgument("a 4-gon takes exactly the parameter t".into()))
            }
            NgonKind::Fivegon if t.is_some() || u.is_none() || v.is_none() => {
                Err(Error::InvalidArgument("a 5-gon takes exactly the parameters u and v".into()))
            }
            NgonKind::Fourgon => {
                let t = self.t.unwrap_or_default();
                let c = fourgon_chord(self.kappa);
                if t > 0.0 && t < c {
                    Ok(())
                } else {
                    Err(Error::Infeasible(format!("4-gon side t = {t} must lie in (0, {c})")))
                }
            }
            NgonKind::Fivegon => {
                let (u, v) = (self.u.unwrap_or_default(), self.v.unwrap_or_default());
                let s = threegon_side(self.kappa);
                if u > 0.0 && v > 0.0 && (v - u).abs() < s / 2.0 {
                    Ok(())
                } else {
                    Err(Error::Infeasible(format!(
                        "5-gon sides u = {u}, v = {v} need u, v > 0 and |u - v| < {}",
                        s / 2.0
                    )))
                }
            }
            NgonKind::Threegon => Ok(()),
        }
    }

    /// Counterclockwise boundary of the n-gon with its exterior arc first,
    /// the chord horizontal and centred on the origin.
    pub fn boundary(&self) -> Result<Vec<(Point, f64)>> {
        self.check()?;
        let k = self.kappa;
        Ok(match self.kind {
            NgonKind::Threegon => {
                let h = 1.0 / k;
                vec![
                    (Point::new(-h, 0.0), -PI / 2.0),
                    (Point::new(h, 0.0), 0.0),
                    (Point::new(0.0, h / 3f64.sqrt()), 0.0),
                ]
            }
            NgonKind::Fourgon => {
                let t = self.t.unwrap_or_default();
                let c = fourgon_chord(k);
                let l = Point::new(-c / 2.0, 0.0);
                let r = Point::new(c / 2.0, 0.0);
                vec![(l, -PI / 3.0), (r, 0.0), (r + dir(120.0) * t, 0.0), (l + dir(60.0) * t, 0.0)]
            }
            NgonKind::Fivegon => {
                let (u, v) = (self.u.unwrap_or_default(), self.v.unwrap_or_default());
                let w = fivegon_chord(k);
                let (a_in, _) = self.fivegon_inner_edges().unwrap_or_default();
                let o = Point::new(-w / 2.0, 0.0);
                let t1 = o + Point::new(0.0, u);
                let t2 = o + Point::new(w, v);
                vec![(o, -PI / 6.0), (o + Point::new(w, 0.0), 0.0), (t2, 0.0), (t1 + dir(30.0) * a_in, 0.0), (t1, 0.0)]
            }
        })
    }
}

/// A single n-gon with label 1 surrounded by the exterior.
pub fn build_ngon(p: &NgonParams) -> Result<BubbleComplex> {
    let boundary = p.boundary()?;
    Sketch::new().face(RegionLabel::new(1), &boundary).build()
}

/// A triangle given by its side lengths; `a` is opposite the angle `α`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangleSpec {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl TriangleSpec {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        let ok = [a, b, c].iter().all(|x| *x > 0.0 && x.is_finite()) && a < b + c && b < a + c && c < a + b;
        if ok {
            Ok(TriangleSpec { a, b, c })
        } else {
            Err(Error::InvalidArgument(format!("({a}, {b}, {c}) are not the sides of a triangle")))
        }
    }

    /// Angles `(α, β, γ)` opposite the sides `(a, b, c)`.
    pub fn angles(&self) -> (f64, f64, f64) {
        let (a, b, c) = (self.a, self.b, self.c);
        let alpha = ((b * b + c * c - a * a) / (2.0 * b * c)).clamp(-1.0, 1.0).acos();
        let beta = ((a * a + c * c - b * b) / (2.0 * a * c)).clamp(-1.0, 1.0).acos();
        (alpha, beta, PI - alpha - beta)
    }

    /// Vertices `(A, B, C)` in counterclockwise order with `A` at the origin
    /// and `B` on the positive x axis.
    pub fn vertices(&self) -> (Point, Point, Point) {
        let (alpha, _, _) = self.angles();
        (Point::ORIGIN, Point::new(self.c, 0.0), Point::polar(alpha) * self.b)
    }
}

/// Outward bulge half-angles `(θ_α, θ_β, θ_γ) = (α − π/6, β − π/6, γ − π/6)`
/// on the sides `(a, b, c)` that make a 3-gon with all angles `2π/3`.
pub fn threegon_from_triangle(t: &TriangleSpec) -> (f64, f64, f64) {
    let (alpha, beta, gamma) = t.angles();
    (alpha - PI / 6.0, beta - PI / 6.0, gamma - PI / 6.0)
}

/// The 3-gon with all angles `2π/3` on a given vertex triangle.
pub fn threegon_on_triangle(t: &TriangleSpec) -> Result<BubbleComplex> {
    let (ta, tb, tc) = threegon_from_triangle(t);
    let (a, b, c) = t.vertices();
    Sketch::new().face(RegionLabel::new(1), &[(a, -tc), (b, -ta), (c, -tb)]).build()
}

/// The 3-gon whose sides have signed curvatures `(k1, k2, k3)`, positive when
/// bulging outward, meeting at angles of `2π/3`.
///
/// With circumradius `R`, a side opposite the angle `x` has curvature
/// `(√3 − cot x)/(2R)`, and the cotangents of a triangle's angles satisfy
/// `Σ cot·cot = 1`, which leaves a quadratic in `R`.
pub fn threegon_from_curvatures(k1: f64, k2: f64, k3: f64) -> Result<BubbleComplex> {
    let ks = [k1, k2, k3];
    if ks.iter().any(|k| !k.is_finite()) {
        return Err(Error::InvalidArgument("curvatures must be finite".into()));
    }
    let s3 = 3f64.sqrt();
    let k_sum: f64 = ks.iter().sum();
    let k_pair = k1 * k2 + k2 * k3 + k3 * k1;
    let scale = ks.iter().fold(0.0f64, |m, k| m.max(k.abs()));
    let mut roots = Vec::new();
    if k_pair.abs() <= 1e-14 * scale * scale {
        if k_sum > 0.0 {
            roots.push(2.0 / (s3 * k_sum));
        }
    } else {
        let disc = 3.0 * k_sum * k_sum - 8.0 * k_pair;
        if disc >= 0.0 {
            let sq = disc.sqrt();
            roots.push((s3 * k_sum + sq) / (2.0 * k_pair));
            roots.push((s3 * k_sum - sq) / (2.0 * k_pair));
        }
    }
    for r in roots {
        if !(r > 0.0) || !r.is_finite() {
            continue;
        }
        let ang: Vec<f64> = ks.iter().map(|k| 1f64.atan2(s3 - 2.0 * r * k)).collect();
        if (ang.iter().sum::<f64>() - PI).abs() > 1e-9 {
            continue;
        }
        let t = TriangleSpec::new(2.0 * r * ang[0].sin(), 2.0 * r * ang[1].sin(), 2.0 * r * ang[2].sin())?;
        return threegon_on_triangle(&t);
    }
    Err(Error::Infeasible(format!("no 3-gon has edge curvatures ({k1}, {k2}, {k3})")))
}

fn check_kappa(kappa: f64) -> Result<()> {
    if kappa > 0.0 && kappa.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("kappa must be positive, got {kappa}")))
    }
}

fn check_area(a: f64) -> Result<()> {
    if a > 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("areas must be positive, got {a}")))
    }
}

/// A circle of radius `r` split into `pieces` arcs, enclosing region `label`.
pub fn circle(center: Point, r: f64, label: RegionLabel, pieces: usize) -> Result<BubbleComplex> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::NonPositiveRadius(r));
    }
    let mut b = ComplexBuilder::new();
    b.face(1, label);
    b.circle(center, r, pieces, 1, None);
    b.build()
}

/// Double bubble with outer radii `r1`, `r2`; the region-1 circle is centred
/// at the origin and the region-2 circle on the positive x axis.
pub fn double_from_radii(r1: f64, r2: f64) -> Result<BubbleComplex> {
    if !(r1 > 0.0) || !(r2 > 0.0) {
        return Err(Error::NonPositiveRadius(r1.min(r2)));
    }
    let d = (r1 * r1 + r2 * r2 - r1 * r2).sqrt();
    let x0 = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    let y0 = (r1 * r1 - x0 * x0).max(0.0).sqrt();
    let (top, bottom) = (Point::new(x0, y0), Point::new(x0, -y0));
    let phi1 = y0.atan2(x0);
    let phi2 = y0.atan2(d - x0);
    let k_mid = 1.0 / r2 - 1.0 / r1;
    let theta_mid = (k_mid * y0).clamp(-1.0, 1.0).asin();
    let mut s = Sketch::new();
    s.face(RegionLabel::new(1), &[(top, -(PI - phi1)), (bottom, theta_mid)]);
    s.face(RegionLabel::new(2), &[(bottom, -(PI - phi2)), (top, -theta_mid)]);
    s.build()
}

fn double_areas(r1: f64, r2: f64) -> Result<(f64, f64)> {
    let c = double_from_radii(r1, r2)?;
    Ok((c.region_area(RegionLabel::new(1))?, c.region_area(RegionLabel::new(2))?))
}

/// Standard double bubble enclosing areas `a1` (region 1) and `a2` (region 2).
pub fn construct_standard_double(a1: f64, a2: f64) -> Result<BubbleComplex> {
    check_area(a1)?;
    check_area(a2)?;
    let unit = double_areas(1.0, 1.0)?.0;
    if a1 == a2 {
        let r = (a1 / unit).sqrt();
        return double_from_radii(r, r);
    }
    // Newton iteration in log-radii, seeded from two equal-area solutions.
    let mut x = [(a1 / unit).sqrt().ln(), (a2 / unit).sqrt().ln()];
    let resid = |x: &[f64; 2]| -> Result<[f64; 2]> {
        let (b1, b2) = double_areas(x[0].exp(), x[1].exp())?;
        Ok([b1 / a1 - 1.0, b2 / a2 - 1.0])
    };
    for _ in 0..100 {
        let f = resid(&x)?;
        if f[0].abs().max(f[1].abs()) <= 1e-13 {
            return double_from_radii(x[0].exp(), x[1].exp());
        }
        let h = 1e-7;
        let mut jac = [[0.0; 2]; 2];
        for j in 0..2 {
            let mut xp = x;
            let mut xm = x;
            xp[j] += h;
            xm[j] -= h;
            let (fp, fm) = (resid(&xp)?, resid(&xm)?);
            for i in 0..2 {
                jac[i][j] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if det.abs() < 1e-300 {
            break;
        }
        let dx = [(jac[1][1] * f[0] - jac[0][1] * f[1]) / det, (jac[0][0] * f[1] - jac[1][0] * f[0]) / det];
        let step = dx[0].abs().max(dx[1].abs());
        let damp = if step > 0.5 { 0.5 / step } else { 1.0 };
        x = [x[0] - damp * dx[0], x[1] - damp * dx[1]];
    }
    Err(Error::Infeasible(format!("double bubble solve for areas ({a1}, {a2}) did not converge")))
}

/// Standard triple bubble with equal pressures `kappa`, regions 1, 2, 3.
pub fn construct_standard_triple(kappa: f64) -> Result<BubbleComplex> {
    check_kappa(kappa)?;
    let b = threegon_side(kappa);
    let o = Point::ORIGIN;
    let tips: Vec<Point> = [90.0, 210.0, 330.0].iter().map(|&d| dir(d) * b).collect();
    let mut s = Sketch::new();
    for i in 0..3 {
        s.face(RegionLabel::new(i as u32 + 1), &[(o, 0.0), (tips[i], -PI / 2.0), (tips[(i + 1) % 3], 0.0)]);
    }
    s.build()
}

/// Key points of the standard quadruple bubble.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadrupleLayout {
    pub p: Point,
    pub q: Point,
    /// Upper left, upper right, lower left, lower right exterior vertices.
    pub e: [Point; 4],
}

impl QuadrupleLayout {
    pub fn new(kappa: f64) -> Self {
        let b = threegon_side(kappa);
        let a = b / 2.0;
        let p = Point::new(0.0, a / 2.0);
        let q = Point::new(0.0, -a / 2.0);
        QuadrupleLayout { p, q, e: [p + dir(150.0) * b, p + dir(30.0) * b, q + dir(210.0) * b, q + dir(330.0) * b] }
    }
}

/// Standard quadruple bubble: 3-gons on top and bottom, 4-gons left and right.
/// `labels` are (top, right, bottom, left).
pub fn quadruple_with_labels(kappa: f64, labels: [u32; 4]) -> Result<BubbleComplex> {
    check_kappa(kappa)?;
    let QuadrupleLayout { p, q, e } = QuadrupleLayout::new(kappa);
    let l = labels.map(RegionLabel::new);
    let mut s = Sketch::new();
    s.face(l[0], &[(p, 0.0), (e[1], -PI / 2.0), (e[0], 0.0)]);
    s.face(l[1], &[(q, 0.0), (e[3], -PI / 3.0), (e[1], 0.0), (p, 0.0)]);
    s.face(l[2], &[(q, 0.0), (e[2], -PI / 2.0), (e[3], 0.0)]);
    s.face(l[3], &[(p, 0.0), (e[0], -PI / 3.0), (e[2], 0.0), (q, 0.0)]);
    s.build()
}

/// Standard quadruple bubble with labels 1 (top), 2 (right), 3 (bottom), 4 (left).
pub fn construct_standard_quadruple(kappa: f64) -> Result<BubbleComplex> {
    quadruple_with_labels(kappa, [1, 2, 3, 4])
}

/// The flower: six 4-gons alternating between regions 1 and 3 and six 5-gons
/// of region 2 around a cluster of straight-edged hexagons.
///
/// `fivegon_params` lists the parallel sides `(u, v)` of each 5-gon in
/// counterclockwise order; the `v` side of one 5-gon is shared with the next
/// 4-gon, whose other side is the following 5-gon's `u`. An empty list gives
/// the symmetric flower.
pub fn construct_flower(kappa: f64, fivegon_params: &[(f64, f64)]) -> Result<BubbleComplex> {
    check_kappa(kappa)?;
    let b = threegon_side(kappa);
    let t: Vec<f64> = match fivegon_params.len() {
        0 => vec![b; 6],
        6 => {
            for j in 0..6 {
                let (_, v) = fivegon_params[j];
                let (u_next, _) = fivegon_params[(j + 1) % 6];
                if (v - u_next).abs() > 1e-12 * b {
                    return Err(Error::InvalidArgument(format!(
                        "5-gon {j} ends with side {v} but 5-gon {} starts with {u_next}",
                        (j + 1) % 6
                    )));
                }
            }
            fivegon_params.iter().map(|p| p.0).collect()
        }
        n => return Err(Error::InvalidArgument(format!("a flower needs 0 or 6 5-gon parameter pairs, got {n}"))),
    };
    flower_from_sides(kappa, &t)
}

/// Flower whose 4-gon `j` has side length `t[j]`.
pub fn flower_from_sides(kappa: f64, t: &[f64]) -> Result<BubbleComplex> {
    check_kappa(kappa)?;
    if t.len() != 6 {
        return Err(Error::InvalidArgument("a flower has six 4-gons".into()));
    }
    let c4 = fourgon_chord(kappa);
    let s = threegon_side(kappa);
    for j in 0..6 {
        NgonParams::fourgon(kappa, t[j]).check()?;
        NgonParams::fivegon(kappa, t[j], t[(j + 1) % 6]).check()?;
    }
    // Walk the inner boundary of the ring counterclockwise: the 4-gon's
    // central edge, then the 5-gon's two inner edges.
    let r0 = s * 2.0;
    let mut pos = Point::new(-(c4 - t[0]) / 2.0, -r0);
    let mut heading: f64 = 0.0;
    let mut a_pts = Vec::new();
    let mut b_pts = Vec::new();
    let mut apex = Vec::new();
    for j in 0..6 {
        let tn = t[(j + 1) % 6];
        a_pts.push(pos);
        pos = pos + dir(heading) * (c4 - t[j]);
        b_pts.push(pos);
        pos = pos + dir(heading + 60.0) * (s / 2.0 + (tn - t[j]));
        apex.push(pos);
        pos = pos + dir(heading) * (s / 2.0 - (tn - t[j]));
        heading += 60.0;
    }
    let gap = pos.dist(a_pts[0]);
    if gap > 1e-10 * s.max(1.0) {
        return Err(Error::Infeasible(format!("flower ring does not close (gap {gap:e})")));
    }

    // Spokes from each 5-gon apex and the central hexagon:
    // S_{j+1} + l_{j+1} d_{j+1} − S_j − l_j d_j = m_j e_j.
    // Lengthening every spoke equally shrinks the centre by the same amount,
    // so the total spoke length is pinned to the centre's perimeter.
    let spoke = |j: usize| dir(60.0 * j as f64 + 120.0);
    let side = |j: usize| dir(60.0 * j as f64 + 60.0);
    let mut m = DMatrix::<f64>::zeros(13, 12);
    let mut rhs = DVector::<f64>::zeros(13);
    for j in 0..6 {
        m[(12, j)] = 1.0;
        m[(12, 6 + j)] = -1.0;
    }
    for j in 0..6 {
        let jn = (j + 1) % 6;
        let (dj, dn, ej) = (spoke(j), spoke(jn), side(j));
        let diff = apex[jn] - apex[j];
        for (row, (pj, pn, pe, r)) in [(dj.x, dn.x, ej.x, diff.x), (dj.y, dn.y, ej.y, diff.y)].into_iter().enumerate() {
            let i = 2 * j + row;
            m[(i, j)] -= pj;
            m[(i, jn)] += pn;
            m[(i, 6 + j)] -= pe;
            rhs[i] = -r;
        }
    }
    let sol = m
        .clone()
        .svd(true, true)
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::Infeasible(format!("flower hexagon net: {e}")))?;
    if (&m * &sol - &rhs).amax() > 1e-10 * s {
        return Err(Error::Infeasible("flower hexagon net does not close".into()));
    }
    if sol.iter().any(|&x| x <= 1e-9 * s) {
        return Err(Error::Infeasible("flower hexagon net has a non-positive edge".into()));
    }
    let z: Vec<Point> = (0..6).map(|j| apex[j] + spoke(j) * sol[j]).collect();

    let label4 = |j: usize| RegionLabel::new(if j % 2 == 0 { 1 } else { 3 });
    let inner = |j: usize| RegionLabel::new(if j % 2 == 0 { 3 } else { 1 });
    let mut sk = Sketch::new();
    for j in 0..6 {
        let jn = (j + 1) % 6;
        let h = 60.0 * j as f64;
        let oa = a_pts[j] + dir(h - 120.0) * t[j];
        let ob = b_pts[j] + dir(h - 60.0) * t[j];
        sk.face(label4(j), &[(b_pts[j], 0.0), (a_pts[j], 0.0), (oa, -PI / 3.0), (ob, 0.0)]);
        let oan = a_pts[jn] + dir(h + 60.0 - 120.0) * t[jn];
        sk.face(RegionLabel::new(2), &[(a_pts[jn], 0.0), (apex[j], 0.0), (b_pts[j], 0.0), (ob, -PI / 6.0), (oan, 0.0)]);
        let jp = (j + 5) % 6;
        sk.face(
            inner(j),
            &[(apex[jp], 0.0), (a_pts[j], 0.0), (b_pts[j], 0.0), (apex[j], 0.0), (z[j], 0.0), (z[jp], 0.0)],
        );
    }
    let centre: Vec<(Point, f64)> = z.iter().map(|&p| (p, 0.0)).collect();
    sk.face(RegionLabel::new(2), &centre);
    sk.build()
}

/// One circle of total area `Σ areas` cut by radii into sectors of the given
/// areas, labelled 1, 2, … counterclockwise from the top.
pub fn circle_with_radii(areas: &[f64]) -> Result<BubbleComplex> {
    if areas.is_empty() {
        return Err(Error::InvalidArgument("at least one area is required".into()));
    }
    for &a in areas {
        check_area(a)?;
    }
    let total: f64 = areas.iter().sum();
    let r = (total / PI).sqrt();
    if areas.len() == 1 {
        return circle(Point::ORIGIN, r, RegionLabel::new(1), 2);
    }
    let mut s = Sketch::new();
    let mut start = PI / 2.0;
    for (i, &a) in areas.iter().enumerate() {
        let phi = 2.0 * a / (r * r);
        let end = start + phi;
        s.face(
            RegionLabel::new(i as u32 + 1),
            &[(Point::ORIGIN, 0.0), (Point::polar(start) * r, -phi / 2.0), (Point::polar(end) * r, 0.0)],
        );
        start = end;
    }
    s.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::FaceId;

    #[test]
    fn threegon_area() {
        let c = build_ngon(&NgonParams::threegon(1.0)).unwrap();
        let want = PI / 2.0 + 1.0 / 3f64.sqrt();
        assert!((c.face_area(FaceId(1)).unwrap() - want).abs() < 1e-13);
    }

    #[test]
    fn parameter_validation() {
        assert!(matches!(build_ngon(&NgonParams::fourgon(1.0, 2.0)), Err(Error::Infeasible(_))));
        assert!(matches!(build_ngon(&NgonParams::fivegon(1.0, 0.1, 1.0)), Err(Error::Infeasible(_))));
        let mut p = NgonParams::threegon(1.0);
        p.t = Some(0.3);
        assert!(matches!(build_ngon(&p), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn flower_closes() {
        let c = construct_flower(1.0, &[]).unwrap();
        assert_eq!(c.interior_faces().count(), 19);
        let b = threegon_side(1.0);
        let uneven = [(b, 0.8 * b), (0.8 * b, b), (b, 0.8 * b), (0.8 * b, b), (b, 0.8 * b), (0.8 * b, b)];
        assert!(construct_flower(1.0, &uneven).is_ok());
    }

    #[test]
    fn double_bubble_hits_areas() {
        let c = construct_standard_double(1.0, 2.5).unwrap();
        assert!((c.region_area(RegionLabel::new(1)).unwrap() - 1.0).abs() < 1e-12);
        assert!((c.region_area(RegionLabel::new(2)).unwrap() - 2.5).abs() < 1e-12);
    }
}
