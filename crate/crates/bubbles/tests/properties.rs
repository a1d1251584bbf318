use std::f64::consts::PI;

use bubbles::arc::{arc_length_from, meeting_angle, segment_area_from};
use bubbles::document::ComplexDocument;
use bubbles::families::*;
use bubbles::fixtures::lenses_on_circle;
use bubbles::moves::slide_2gon;
use bubbles::regularity::{cocycle_residual, gauss_bonnet_residual, perimeter_pressure_residual, pressures, validate};
use bubbles::{ArcSpec, BubbleComplex, Point};
use proptest::prelude::*;

fn max_gauss_bonnet(c: &BubbleComplex) -> f64 {
    c.interior_faces().map(|f| gauss_bonnet_residual(c, f.id).unwrap()).fold(0.0, f64::max)
}

fn point() -> impl Strategy<Value = Point> {
    (-5.0..5.0f64, -5.0..5.0f64).prop_map(|(x, y)| Point::new(x, y))
}

fn arc() -> impl Strategy<Value = ArcSpec> {
    (point(), point(), -3.1..3.1f64)
        .prop_filter("distinct ends", |(a, b, _)| a.dist(*b) > 1e-3)
        .prop_map(|(a, b, t)| ArcSpec::new(a, b, t).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn arc_is_at_least_its_chord(a in arc()) {
        prop_assert!(a.length() >= a.chord() * (1.0 - 1e-12));
        prop_assert!((a.length() - arc_length_from(a.chord(), a.half_angle())).abs() <= 1e-12 * a.length());
    }

    #[test]
    fn segment_area_follows_half_angle(a in arc()) {
        let s = a.segment_area();
        prop_assert!(s * a.half_angle() >= 0.0);
        prop_assert!((a.reversed().segment_area() + s).abs() <= 1e-12 * s.abs().max(1.0));
        prop_assert!((s - segment_area_from(a.chord(), a.half_angle())).abs() <= 1e-12 * s.abs().max(1.0));
    }

    #[test]
    fn splitting_preserves_length_and_area(a in arc(), t in 0.05..0.95f64) {
        let (l, r) = a.split_at(t).unwrap();
        prop_assert!((l.length() + r.length() - a.length()).abs() <= 1e-9 * a.length());
        // The two pieces plus the triangle between the chords make up the whole segment.
        let tri = 0.5 * (l.end() - a.start()).cross(a.end() - a.start());
        let total = l.segment_area() + r.segment_area() - tri;
        prop_assert!((total - a.segment_area()).abs() <= 1e-9 * a.chord().powi(2).max(1.0), "{total} vs {}", a.segment_area());
    }

    #[test]
    fn meeting_angle_is_symmetric(theta in -1.5..1.5f64, phi in -1.5..1.5f64, turn in 0.3..2.8f64) {
        let o = Point::ORIGIN;
        let a = ArcSpec::new(o, Point::new(1.0, 0.0), theta).unwrap();
        let b = ArcSpec::new(o, Point::polar(turn), phi).unwrap();
        let ab = meeting_angle(&a, &b, o).unwrap();
        let ba = meeting_angle(&b, &a, o).unwrap();
        prop_assert!((ab - ba).abs() < 1e-12);
        prop_assert!((0.0..=PI + 1e-12).contains(&ab));
    }

    #[test]
    fn fourgon_family(k in 0.3..3.0f64, frac in 0.02..0.98f64) {
        let t = frac * fourgon_chord(k);
        let p = NgonParams::fourgon(k, t);
        let c = build_ngon(&p).unwrap();
        prop_assert!(max_gauss_bonnet(&c) <= 1e-9);
        let b = threegon_side(k);
        // The central edge closes the equilateral triangle cut off by the two sides.
        prop_assert!((p.fourgon_central_edge().unwrap() - (fourgon_chord(k) - t)).abs() < 1e-12);
        prop_assert!((fourgon_chord(k) - 1.5 * b).abs() < 1e-12);
    }

    #[test]
    fn fivegon_inner_edges_sum_to_threegon_side(k in 0.3..3.0f64, u in 0.05..2.0f64, d in -0.49..0.49f64) {
        let b = threegon_side(k);
        let (u, v) = (u * b, u * b + d * b);
        prop_assume!(v > 0.0);
        let p = NgonParams::fivegon(k, u, v);
        let (i1, i2) = p.fivegon_inner_edges().unwrap();
        prop_assert!((i1 + i2 - b).abs() <= 1e-12 * b.max(1.0));
        let c = build_ngon(&p).unwrap();
        prop_assert!(max_gauss_bonnet(&c) <= 1e-9);
        let f = c.interior_faces().next().unwrap();
        prop_assert_eq!(f.side_count, 5);
    }

    #[test]
    fn triple_identities(k in 0.2..5.0f64) {
        let c = construct_standard_triple(k).unwrap();
        prop_assert!(validate(&c, 1e-9).passes());
        prop_assert!(perimeter_pressure_residual(&c).unwrap() <= 1e-8);
        prop_assert!(cocycle_residual(&c) <= 1e-9);
        let expected = (3.0 * PI + 2.0 * 3f64.sqrt()) / k;
        prop_assert!((c.total_perimeter() - expected).abs() <= 1e-12 * expected);
        let p = pressures(&c, 1e-9).unwrap();
        prop_assert!(p.regions.iter().filter(|(r, _)| !r.is_exterior()).all(|(_, x)| (x - k).abs() <= 1e-9 * k));
    }

    #[test]
    fn double_bubbles_are_regular(a in 0.2..5.0f64, b in 0.2..5.0f64) {
        let c = construct_standard_double(a, b).unwrap();
        let r = validate(&c, 1e-9);
        prop_assert!(r.passes(), "{:?}", r);
        let areas = c.region_areas();
        let got: Vec<f64> = areas.values().copied().collect();
        prop_assert!((got[0] - a).abs() <= 1e-9 * a && (got[1] - b).abs() <= 1e-9 * b);
        prop_assert!(perimeter_pressure_residual(&c).unwrap() <= 1e-8);
    }

    #[test]
    fn edges_carry_pressure_differences(k in 0.3..3.0f64, which in 0usize..3) {
        let c = match which {
            0 => construct_standard_triple(k).unwrap(),
            1 => construct_standard_quadruple(k).unwrap(),
            _ => construct_flower(k, &[]).unwrap(),
        };
        let p = pressures(&c, 1e-9).unwrap();
        for e in c.edge_ids() {
            let h = e.forward();
            let (f, g) = (c.half_edge(h).face, c.half_edge(h.twin()).face);
            prop_assert!((p.faces[g.0] - p.faces[f.0] - c.curvature(h)).abs() <= 1e-9);
        }
    }

    #[test]
    fn rescaling(s in 0.1..10.0f64) {
        let c = construct_standard_quadruple(1.0).unwrap();
        let d = c.rescale(s).unwrap();
        prop_assert!((d.total_perimeter() - s * c.total_perimeter()).abs() <= 1e-12 * s * c.total_perimeter());
        for (r, a) in c.region_areas() {
            prop_assert!((d.region_area(r).unwrap() - s * s * a).abs() <= 1e-12 * s * s * a);
        }
        let (p0, p1) = (pressures(&c, 1e-9).unwrap(), pressures(&d, 1e-9).unwrap());
        for (r, x) in &p0.regions {
            prop_assert!((p1.regions[r] * s - x).abs() <= 1e-9);
        }
    }

    #[test]
    fn documents_round_trip_bit_identically(s in 0.1..10.0f64, which in 0usize..4) {
        let c = match which {
            0 => construct_standard_triple(s).unwrap(),
            1 => construct_standard_double(s, 1.0 / s).unwrap(),
            2 => construct_flower(s, &[]).unwrap(),
            _ => circle_with_radii(&[s, 1.0, 2.0 * s]).unwrap(),
        };
        let doc = ComplexDocument::from_complex(&c);
        let back = ComplexDocument::from_json(&doc.to_json()).unwrap();
        prop_assert_eq!(&doc, &back);
        let d = back.to_complex().unwrap();
        prop_assert_eq!(&ComplexDocument::from_complex(&d), &doc);
        prop_assert_eq!(c.total_perimeter().to_bits(), d.total_perimeter().to_bits());
    }

    #[test]
    fn sliding_keeps_length_and_areas(delta in 0.1..0.8f64, d in -0.3..0.3f64) {
        let fx = lenses_on_circle(delta).unwrap();
        let r = slide_2gon(&fx.complex, fx.face("top"), d).unwrap();
        prop_assert!(r.perimeter_delta.abs() <= 1e-9);
        prop_assert!(r.area_deltas.values().all(|a| a.abs() <= 1e-9));
    }
}
