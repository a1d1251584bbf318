//! Named complexes used by the moves, the tests and the command line.
//!
//! Regular fixtures come from the standard families; the others each break
//! regularity in one specific way or set up the pattern a move expects.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::arc::Point;
use crate::complex::{BubbleComplex, FaceId, RegionLabel};
use crate::error::{Error, Result};
use crate::families::{dir, fivegon_chord, threegon_side, Sketch};

/// A complex with some of its faces named.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub complex: BubbleComplex,
    pub faces: BTreeMap<&'static str, FaceId>,
}

impl Fixture {
    /// Face registered under `name`.
    pub fn face(&self, name: &str) -> FaceId {
        self.faces[name]
    }
}

/// Sketch that remembers an interior point of each named face.
struct Named {
    sketch: Sketch,
    probes: Vec<(&'static str, Point)>,
}

impl Named {
    fn new() -> Self {
        Named { sketch: Sketch::new(), probes: Vec::new() }
    }

    fn face(&mut self, name: &'static str, label: u32, boundary: &[(Point, f64)]) -> &mut Self {
        let sum = boundary.iter().fold(Point::ORIGIN, |s, &(p, _)| s + p);
        self.probes.push((name, sum / boundary.len() as f64));
        self.sketch.face(RegionLabel::new(label), boundary);
        self
    }

    fn build(&self) -> Result<Fixture> {
        let complex = self.sketch.build()?;
        let mut faces = BTreeMap::new();
        for &(name, p) in &self.probes {
            let f = complex.locate(p);
            if f == complex.exterior() {
                return Err(Error::InvalidComplex(format!("probe for face {name} landed outside")));
            }
            faces.insert(name, f);
        }
        Ok(Fixture { complex, faces })
    }
}

/// Three 3-gons alternating with three symmetric 5-gons around a central vertex.
///
/// Faces are named `t`, `f1`, `n1`, `g`, `n2`, `f2` counterclockwise from the
/// top 3-gon and take the matching entries of `labels`.
pub fn tri_penta_ring(kappa: f64, labels: [u32; 6]) -> Result<Fixture> {
    if !(kappa.is_finite() && kappa > 0.0) {
        return Err(Error::InvalidArgument(format!("kappa must be positive, got {kappa}")));
    }
    let b = threegon_side(kappa);
    let a = b / 2.0;
    let spokes = [90.0, 210.0, 330.0];
    let ends: Vec<Point> = spokes.iter().map(|&d| dir(d) * a).collect();
    let plus = |i: usize| ends[i] + dir(spokes[i] + 60.0) * b;
    let minus = |i: usize| ends[i] + dir(spokes[i] - 60.0) * b;
    let names = [("t", "f1"), ("n1", "g"), ("n2", "f2")];
    let mut s = Named::new();
    for i in 0..3 {
        let j = (i + 1) % 3;
        s.face(names[i].0, labels[2 * i], &[(ends[i], 0.0), (minus(i), -PI / 2.0), (plus(i), 0.0)]);
        s.face(
            names[i].1,
            labels[2 * i + 1],
            &[(Point::ORIGIN, 0.0), (ends[i], 0.0), (plus(i), -PI / 6.0), (minus(j), 0.0), (ends[j], 0.0)],
        );
    }
    s.build()
}

/// Ring labeled so that swapping `f1` and `f2` deletes two walls.
pub fn swap_ring(kappa: f64) -> Result<Fixture> {
    tri_penta_ring(kappa, [1, 2, 3, 1, 2, 3])
}

/// Ring at unit 3-gon chord in which the 3-gons `t` and `n1` share region 1.
pub fn pop_ring() -> Result<Fixture> {
    tri_penta_ring(2.0, [1, 2, 1, 4, 2, 3])
}

/// A 3-gon `t`, 4-gons `f` and `o`, a symmetric 5-gon `v` and a 3-gon `w`
/// meeting at three inner vertices.
///
/// Labels are `t` = 1, `f` = 2, `v` = 3, with `o` and `w` given.
pub fn fixture_345(kappa: f64, o_label: u32, w_label: u32) -> Result<Fixture> {
    let a = threegon_side(kappa) / 2.0;
    let p = Point::ORIGIN;
    let q = Point::new(0.0, -a);
    let x = q + dir(330.0) * a;
    let e1 = p + dir(150.0) * (2.0 * a);
    let e2 = p + dir(30.0) * (2.0 * a);
    let e3 = q + dir(210.0) * (2.0 * a);
    let e4 = x + dir(30.0) * (2.0 * a);
    let xd = x + dir(270.0) * (2.0 * a);
    let mut s = Named::new();
    s.face("t", 1, &[(p, 0.0), (e2, -PI / 2.0), (e1, 0.0)])
        .face("f", 2, &[(p, 0.0), (e1, -PI / 3.0), (e3, 0.0), (q, 0.0)])
        .face("v", 3, &[(p, 0.0), (q, 0.0), (x, 0.0), (e4, -PI / 6.0), (e2, 0.0)])
        .face("o", o_label, &[(q, 0.0), (e3, -PI / 3.0), (xd, 0.0), (x, 0.0)])
        .face("w", w_label, &[(x, 0.0), (xd, -PI / 2.0), (e4, 0.0)]);
    s.build()
}

/// Region 1 is a unit disc carrying two lens-shaped 2-gons, `top` (region 2)
/// and `bottom` (region 3), straddling its boundary circle.
///
/// `delta` is half the angle the lens corners subtend at the center, in (0, pi/3).
pub fn lenses_on_circle(delta: f64) -> Result<Fixture> {
    if !(delta > 0.0 && delta < PI / 3.0) {
        return Err(Error::InvalidArgument(format!("lens half-angle {delta} outside (0, pi/3)")));
    }
    let at = |deg: f64| Point::polar(deg.to_radians());
    let d = delta.to_degrees();
    let (ur, ul, bl, br) = (at(90.0 - d), at(90.0 + d), at(270.0 - d), at(270.0 + d));
    let wall = -(PI / 2.0 - delta);
    let inner = PI / 3.0 - delta;
    let outer = PI / 3.0 + delta;
    let mut s = Named::new();
    s.face("disc", 1, &[(br, wall), (ur, inner), (ul, wall), (bl, inner)])
        .face("top", 2, &[(ul, -inner), (ur, -outer)])
        .face("bottom", 3, &[(br, -inner), (bl, -outer)]);
    let mut fx = s.build()?;
    // The vertex average of a lens lies on its chord; probe its middle instead.
    fx.faces.insert("top", fx.complex.locate(Point::new(0.0, 1.0)));
    fx.faces.insert("bottom", fx.complex.locate(Point::new(0.0, -1.0)));
    fx.faces.insert("disc", fx.complex.locate(Point::ORIGIN));
    Ok(fx)
}

/// Two unit discs touching at the origin, which becomes a 4-valent vertex.
pub fn tangent_circles() -> Result<Fixture> {
    let (o, l, r) = (Point::ORIGIN, Point::new(-2.0, 0.0), Point::new(2.0, 0.0));
    let mut s = Named::new();
    s.face("left", 1, &[(o, -PI / 2.0), (l, -PI / 2.0)]).face("right", 2, &[(o, -PI / 2.0), (r, -PI / 2.0)]);
    let mut fx = s.build()?;
    fx.faces.insert("left", fx.complex.locate(Point::new(-1.0, 0.0)));
    fx.faces.insert("right", fx.complex.locate(Point::new(1.0, 0.0)));
    Ok(fx)
}

/// Region 1 split into a unit circle `small` and a disjoint circle `large` of
/// radius 2, so the two boundaries with the exterior disagree in curvature.
pub fn unequal_circles() -> Result<Fixture> {
    let c = crate::families::circle(Point::ORIGIN, 1.0, RegionLabel::new(1), 2)?;
    let c = c.add_disjoint_circles(&BTreeMap::from([(RegionLabel::new(1), 4.0 * PI)]))?;
    let small = c.locate(Point::ORIGIN);
    let large = c
        .interior_faces()
        .map(|f| f.id)
        .find(|&f| f != small)
        .ok_or_else(|| Error::InvalidComplex("second circle missing".into()))?;
    Ok(Fixture { complex: c, faces: BTreeMap::from([("small", small), ("large", large)]) })
}

/// Standard triple bubble whose region 1 arc bulges `extra` radians further.
pub fn perturbed_triple(kappa: f64, extra: f64) -> Result<Fixture> {
    let b = threegon_side(kappa);
    let tips: Vec<Point> = [90.0, 210.0, 330.0].iter().map(|&d| dir(d) * b).collect();
    let names = ["r1", "r2", "r3"];
    let mut s = Named::new();
    for i in 0..3 {
        let theta = if i == 0 { -PI / 2.0 - extra } else { -PI / 2.0 };
        s.face(names[i], i as u32 + 1, &[(Point::ORIGIN, 0.0), (tips[i], theta), (tips[(i + 1) % 3], 0.0)]);
    }
    s.build()
}

/// Three bubbles in a row; the middle one is a 4-gon meeting the exterior
/// along both its top and bottom arcs.
pub fn chain3(width: f64) -> Result<Fixture> {
    if !(width.is_finite() && width > 0.0) {
        return Err(Error::InvalidArgument(format!("width must be positive, got {width}")));
    }
    let h = 3f64.sqrt() * width;
    let (p0, p1, p2, p3) = (Point::ORIGIN, Point::new(width, 0.0), Point::new(width, h), Point::new(0.0, h));
    let mut s = Named::new();
    s.face("left", 1, &[(p0, 0.0), (p3, -2.0 * PI / 3.0)])
        .face("middle", 2, &[(p0, -PI / 6.0), (p1, 0.0), (p2, -PI / 6.0), (p3, 0.0)])
        .face("right", 3, &[(p2, 0.0), (p1, -2.0 * PI / 3.0)]);
    let mut fx = s.build()?;
    fx.faces.insert("left", fx.complex.locate(Point::new(-0.3 * width, 0.5 * h)));
    fx.faces.insert("right", fx.complex.locate(Point::new(1.3 * width, 0.5 * h)));
    Ok(fx)
}

/// Standard triple bubble with an empty lens-shaped chamber on the spoke
/// between regions 1 and 3.
pub fn empty_lens_triple(kappa: f64) -> Result<Fixture> {
    let b = threegon_side(kappa);
    let o = Point::ORIGIN;
    let tips: Vec<Point> = [90.0, 210.0, 330.0].iter().map(|&d| dir(d) * b).collect();
    let (l1, l2) = (tips[0] / 3.0, tips[0] * (2.0 / 3.0));
    let lens = PI / 3.0;
    let mut s = Named::new();
    s.face("r1", 1, &[(o, 0.0), (l1, lens), (l2, 0.0), (tips[0], -PI / 2.0), (tips[1], 0.0)])
        .face("r2", 2, &[(o, 0.0), (tips[1], -PI / 2.0), (tips[2], 0.0)])
        .face("r3", 3, &[(o, 0.0), (tips[2], -PI / 2.0), (tips[0], 0.0), (l2, lens), (l1, 0.0)])
        .face("chamber", RegionLabel::EMPTY.value(), &[(l1, -lens), (l2, -lens)]);
    let mut fx = s.build()?;
    fx.faces.insert("chamber", fx.complex.locate((l1 + l2) / 2.0));
    Ok(fx)
}

/// Two adjacent 5-gons of curvature 1 sharing a parallel side: `small` is
/// symmetric, `large` has a longer far side. Straight-edged caps `k1`
/// (region 3) and `k2` (region 2, same as `large`) close them off above.
pub fn adjacent_fivegons() -> Result<Fixture> {
    let w = fivegon_chord(1.0);
    let s_len = threegon_side(1.0);
    let (hs, hl) = (0.8, 1.0);
    let a_in = s_len / 2.0 + (hs - hl);
    let v = Point::new(w, hs);
    let apex_l = Point::new(0.0, hl) + dir(30.0) * a_in;
    let apex_s = Point::new(2.0 * w, hs) + dir(150.0) * (s_len / 2.0);
    let u = Point::new(w, 2.0);
    let top_right = Point::new(2.0 * w, 2.0);
    let mut s = Named::new();
    s.face(
        "large",
        2,
        &[(Point::ORIGIN, -PI / 6.0), (Point::new(w, 0.0), 0.0), (v, 0.0), (apex_l, 0.0), (Point::new(0.0, hl), 0.0)],
    )
    .face(
        "small",
        1,
        &[
            (Point::new(w, 0.0), -PI / 6.0),
            (Point::new(2.0 * w, 0.0), 0.0),
            (Point::new(2.0 * w, hs), 0.0),
            (apex_s, 0.0),
            (v, 0.0),
        ],
    )
    .face("k1", 3, &[(v, 0.0), (apex_s, 0.0), (u, 0.0), (apex_l, 0.0)])
    .face("k2", 2, &[(Point::new(2.0 * w, hs), 0.0), (top_right, 0.0), (u, 0.0), (apex_s, 0.0)]);
    s.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regularity::{validate, FindingKind, DEFAULT_TOL};

    #[test]
    fn ring_is_regular() {
        let fx = swap_ring(1.0).unwrap();
        let r = validate(&fx.complex, DEFAULT_TOL);
        assert!(r.passes(), "{r:#?}");
        assert_eq!(fx.faces.len(), 6);
        assert_eq!(fx.complex.face(fx.face("f1")).side_count, 5);
        assert_eq!(fx.complex.face(fx.face("t")).side_count, 3);
    }

    #[test]
    fn fixture_345_is_regular() {
        let fx = fixture_345(1.0, 4, 1).unwrap();
        let r = validate(&fx.complex, DEFAULT_TOL);
        assert!(r.passes(), "{r:#?}");
        let sides: Vec<usize> =
            ["t", "f", "v", "o", "w"].iter().map(|n| fx.complex.face(fx.face(n)).side_count).collect();
        assert_eq!(sides, [3, 4, 5, 4, 3]);
    }

    #[test]
    fn lenses_are_two_gons() {
        let fx = lenses_on_circle(20f64.to_radians()).unwrap();
        let r = validate(&fx.complex, DEFAULT_TOL);
        assert!(r.conditions_pass(), "{r:#?}");
        assert!(r.has_finding(FindingKind::TwoGon));
        assert_eq!(fx.complex.face(fx.face("top")).side_count, 2);
    }

    #[test]
    fn counterexamples_fail_as_intended() {
        let r = validate(&tangent_circles().unwrap().complex, DEFAULT_TOL);
        assert!(!r.trivalent.pass);
        let r = validate(&perturbed_triple(1.0, 0.1).unwrap().complex, DEFAULT_TOL);
        assert!(!r.cocycle.pass || !r.pair_curvature_consistency.pass);
        let r = validate(&chain3(1.0).unwrap().complex, DEFAULT_TOL);
        assert!(r.conditions_pass(), "{r:#?}");
        assert!(r.has_finding(FindingKind::DoubleExteriorEdge));
        let r = validate(&empty_lens_triple(1.0).unwrap().complex, DEFAULT_TOL);
        assert!(r.has_finding(FindingKind::EmptyChamber));
    }

    #[test]
    fn adjacent_fivegons_have_five_sides() {
        let fx = adjacent_fivegons().unwrap();
        for n in ["small", "large"] {
            assert_eq!(fx.complex.face(fx.face(n)).side_count, 5, "{n}");
        }
    }
}
