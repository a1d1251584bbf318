use std::f64::consts::PI;

use bubbles::arc::segment_area_from;
use bubbles::families::{flower_from_sides, quadruple_with_labels, threegon_side};
use bubbles::fixtures::*;
use bubbles::moves::*;
use bubbles::regularity::{validate, DEFAULT_TOL};
use bubbles::{Error, FaceId, Point, RegionLabel};

fn check(report: &MoveReport) {
    assert!(report.perimeter_delta <= 1e-9, "delta {}", report.perimeter_delta);
    for (r, d) in &report.area_deltas {
        assert!(*d >= -1e-9, "region {r} shrank by {d}");
    }
    if report.witness == Witness::EqualLengthNonregular {
        let v = report.violation.as_deref().expect("violation recorded");
        let r = validate(&report.result, DEFAULT_TOL);
        let failed = r.conditions().iter().any(|(n, c)| *n == v && c.evaluated && !c.pass)
            || r.findings.iter().any(|f| f.kind.as_str() == v);
        assert!(failed, "result does not fail {v}");
    }
}

#[test]
fn fill_empty_lens() {
    let fx = empty_lens_triple(1.0).unwrap();
    let before = fx.complex.region_areas();
    let chamber_area = fx.complex.face_area(fx.face("chamber")).unwrap();
    let r = fill_empty_chamber(&fx.complex, fx.face("chamber")).unwrap();
    check(&r);
    assert_eq!(r.witness, Witness::Shorter);
    assert!(r.perimeter_delta < 0.0);
    // Tie between regions 1 and 3 goes to the lower label.
    assert!((r.area_deltas[&RegionLabel::new(1)] - chamber_area).abs() < 1e-12);
    assert!(r.area_deltas[&RegionLabel::new(3)].abs() < 1e-12);
    assert_eq!(before.len(), r.result.region_areas().len());
}

#[test]
fn fill_rejects_non_chamber() {
    let fx = empty_lens_triple(1.0).unwrap();
    assert!(matches!(fill_empty_chamber(&fx.complex, fx.face("r1")), Err(Error::Precondition(_))));
}

#[test]
fn slide_small_step_keeps_length() {
    let fx = lenses_on_circle(20f64.to_radians()).unwrap();
    for d in [0.0, 0.05, -0.1] {
        let r = slide_2gon(&fx.complex, fx.face("top"), d).unwrap();
        check(&r);
        assert!(r.perimeter_delta.abs() < 1e-10, "{d}: {}", r.perimeter_delta);
        assert!(r.area_deltas.values().all(|a| a.abs() < 1e-10));
        assert_eq!(r.witness, Witness::EqualLengthNonregular);
    }
}

#[test]
fn slide_zero_is_identity() {
    let fx = lenses_on_circle(20f64.to_radians()).unwrap();
    let r = slide_2gon(&fx.complex, fx.face("top"), 0.0).unwrap();
    let (a, b) = (fx.complex.vertices(), r.result.vertices());
    assert_eq!(a.len(), b.len());
    for p in a {
        assert!(b.iter().any(|q| q.dist(*p) < 1e-12));
    }
}

#[test]
fn slide_full_length_makes_four_valent_vertex() {
    let fx = lenses_on_circle(20f64.to_radians()).unwrap();
    let full = (PI - 2.0 * 20f64.to_radians()) * 1.0;
    let r = slide_2gon(&fx.complex, fx.face("top"), full).unwrap();
    check(&r);
    assert_eq!(r.witness, Witness::EqualLengthNonregular);
    assert_eq!(r.violation.as_deref(), Some("trivalent"));
    assert!(r.result.vertices().iter().enumerate().any(|(i, _)| r.result.degree(bubbles::VertexId(i)) == 4));
}

#[test]
fn slide_is_path_independent() {
    let fx = lenses_on_circle(20f64.to_radians()).unwrap();
    let once = slide_2gon(&fx.complex, fx.face("top"), 0.3).unwrap().result;
    let mut c = fx.complex.clone();
    for _ in 0..3 {
        let top = c.regions()[&RegionLabel::new(2)][0];
        c = slide_2gon(&c, top, 0.1).unwrap().result;
    }
    for p in once.vertices() {
        assert!(c.vertices().iter().any(|q| q.dist(*p) < 1e-9), "{p:?}");
    }
}

#[test]
fn reflect_4gon_into_3gon_on_quadruple() {
    let c = quadruple_with_labels(1.0, [1, 2, 1, 4]).unwrap();
    let regions = c.regions();
    let top = regions[&RegionLabel::new(1)]
        .iter()
        .copied()
        .find(|&f| c.face(f).side_count == 3 && c.winding(f, Point::new(0.0, 0.8)) != 0)
        .unwrap();
    let left = regions[&RegionLabel::new(4)][0];
    let r = reflect_4gon_into_3gon(&c, left, top).unwrap();
    check(&r);
    assert_eq!(r.witness, Witness::Shorter);
    assert!((r.perimeter_delta + threegon_side(1.0) / 2.0).abs() < 1e-9, "{}", r.perimeter_delta);
    assert!(r.area_deltas.values().all(|a| a.abs() < 1e-9));
}

#[test]
fn reflect_requires_adjacency() {
    let c = quadruple_with_labels(1.0, [1, 2, 1, 4]).unwrap();
    let top = c.locate(Point::new(0.0, 0.8));
    let bottom = c.locate(Point::new(0.0, -0.8));
    assert!(reflect_4gon_into_3gon(&c, bottom, top).is_err());
}

#[test]
fn swap_fivegons_in_ring() {
    let fx = swap_ring(1.0).unwrap();
    let r = swap_regions(&fx.complex, fx.face("f1"), fx.face("f2")).unwrap();
    check(&r);
    assert!((r.perimeter_delta + 2.0 * threegon_side(1.0)).abs() < 1e-9, "{}", r.perimeter_delta);
}

#[test]
fn swap_needs_different_labels() {
    let fx = tri_penta_ring(1.0, [1, 2, 3, 1, 2, 2]).unwrap();
    assert!(swap_regions(&fx.complex, fx.face("f1"), fx.face("f2")).is_err());
}

#[test]
fn reflect_5gon_into_3gon_balances() {
    let fx = fixture_345(1.0, 4, 1).unwrap();
    let r = reflect_5gon_into_3gon(&fx.complex, fx.face("v"), fx.face("t")).unwrap();
    check(&r);
    assert!(r.perimeter_delta.abs() < 1e-9, "{}", r.perimeter_delta);
    assert_eq!(r.witness, Witness::EqualLengthNonregular);
}

#[test]
fn reflect_5gon_into_3gon_wrong_label() {
    let fx = fixture_345(1.0, 4, 2).unwrap();
    assert!(matches!(reflect_5gon_into_3gon(&fx.complex, fx.face("v"), fx.face("t")), Err(Error::Precondition(_))));
}

#[test]
fn reflect_5gon_into_4gon_balances() {
    let fx = fixture_345(1.0, 4, 2).unwrap();
    let r = reflect_5gon_into_4gon(&fx.complex, fx.face("v"), fx.face("f")).unwrap();
    check(&r);
    assert!(r.perimeter_delta.abs() < 1e-9, "{}", r.perimeter_delta);
    let wrong = fixture_345(1.0, 4, 1).unwrap();
    assert!(reflect_5gon_into_4gon(&wrong.complex, wrong.face("v"), wrong.face("f")).is_err());
}

#[test]
fn reflect_small_fivegon() {
    let fx = adjacent_fivegons().unwrap();
    let r = reflect_small_into_large(&fx.complex, fx.face("small"), fx.face("large")).unwrap();
    check(&r);
    assert!(r.perimeter_delta.abs() < 1e-9, "{}", r.perimeter_delta);
    assert_eq!(r.witness, Witness::EqualLengthNonregular);
}

#[test]
fn reflect_small_fourgon_in_flower() {
    let c = flower_from_sides(1.0, &[0.45, 0.65, 0.45, 0.65, 0.45, 0.65]).unwrap();
    let fours: Vec<FaceId> = c.interior_faces().filter(|f| f.side_count == 4).map(|f| f.id).collect();
    let small =
        fours.iter().copied().min_by(|a, b| c.face_area(*a).unwrap().total_cmp(&c.face_area(*b).unwrap())).unwrap();
    let large = fours
        .iter()
        .copied()
        .find(|&f| c.region_of(f) != c.region_of(small) && c.face_area(f).unwrap() > c.face_area(small).unwrap() + 1e-6)
        .unwrap();
    let r = reflect_small_into_large(&c, small, large).unwrap();
    check(&r);
    assert!(r.perimeter_delta.abs() < 1e-9, "{}", r.perimeter_delta);
}

#[test]
fn swap_fourgons_in_flower() {
    let c = flower_from_sides(1.0, &[0.5; 6]).unwrap();
    let fours: Vec<FaceId> = c.interior_faces().filter(|f| f.side_count == 4).map(|f| f.id).collect();
    let (a, b) = (fours[0], fours.iter().copied().find(|&f| c.region_of(f) != c.region_of(fours[0])).unwrap());
    let r = swap_regions(&c, a, b).unwrap();
    check(&r);
    assert!(r.perimeter_delta < -1e-9);
}

#[test]
fn pop_and_expand_at_default_angle() {
    let fx = pop_ring().unwrap();
    let old_arc = PI / 2.0;
    let r = pop_and_expand(&fx.complex, fx.face("t"), fx.face("n1"), POP_THETA).unwrap();
    check(&r);
    let new_arc = POP_THETA / POP_THETA.sin();
    assert!((r.perimeter_delta - (new_arc - 2.0 * old_arc)).abs() < 1e-9, "{}", r.perimeter_delta);
    let gained = segment_area_from(1.0, POP_THETA) - segment_area_from(1.0, PI / 2.0);
    assert!((gained - 0.8646).abs() < 5e-4, "{gained}");
    assert!(r.area_deltas[&RegionLabel::new(1)] > 0.0);
}

#[test]
fn pop_balance_angle_gives_equal_length() {
    let fx = pop_ring().unwrap();
    let theta = pop_balance_angle();
    assert!((theta - PI * theta.sin()).abs() < 1e-12);
    let r = pop_and_expand(&fx.complex, fx.face("t"), fx.face("n1"), theta).unwrap();
    assert!(r.perimeter_delta.abs() < 1e-6);
    check(&r);
}

#[test]
fn pop_rejects_bad_input() {
    let fx = pop_ring().unwrap();
    assert!(pop_and_expand(&fx.complex, fx.face("t"), fx.face("n1"), 1.0).is_err());
    assert!(pop_and_expand(&fx.complex, fx.face("t"), fx.face("n2"), POP_THETA).is_err());
}

#[test]
fn double_exterior_detection() {
    let fx = chain3(1.0).unwrap();
    assert_eq!(detect_double_exterior(&fx.complex), vec![fx.face("middle")]);
    assert!(detect_double_exterior(&bubbles::families::construct_standard_triple(1.0).unwrap()).is_empty());
    assert!(detect_double_exterior(&flower_from_sides(1.0, &[0.5; 6]).unwrap()).is_empty());
}
