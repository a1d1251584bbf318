use std::collections::BTreeMap;
use std::f64::consts::PI;

use bubbles::families::{circle, construct_standard_double, construct_standard_triple};
use bubbles::minimize::*;
use bubbles::regularity::pressures;
use bubbles::{BubbleComplex, Point, RegionLabel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn perturb(c: &BubbleComplex, amount: f64, seed: u64) -> BubbleComplex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = c.diameter() * amount;
    let offsets: Vec<Point> =
        c.vertices().iter().map(|_| Point::new(rng.gen_range(-d..d), rng.gen_range(-d..d))).collect();
    let verts = c.vertices().to_vec();
    c.map_points(|p| p + verts.iter().position(|&q| q == p).map_or(Point::ORIGIN, |i| offsets[i])).unwrap()
}

fn targets(c: &BubbleComplex) -> BTreeMap<RegionLabel, f64> {
    c.region_areas()
}

#[test]
fn gradient_matches_central_differences() {
    let c = subdivide_edges(&construct_standard_triple(1.0).unwrap(), MAX_PIECE_HALF_ANGLE).unwrap();
    let labels = c.region_labels();
    let model = PerimeterModel::new(&c, &labels).unwrap();
    let p = pressures(&c, 1e-9).unwrap();
    let base = model.parameters(&c, &labels.iter().map(|r| p.regions[r]).collect::<Vec<_>>());
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let x: Vec<f64> = base.iter().map(|v| v + rng.gen_range(-0.02..0.02)).collect();
        let (gl, ga) = objective_gradient(&model, &x).unwrap();
        for i in 0..x.len() {
            let h = 1e-6;
            let (mut xp, mut xm) = (x.clone(), x.clone());
            xp[i] += h;
            xm[i] -= h;
            let (ep, em) = (model.eval(&xp).unwrap(), model.eval(&xm).unwrap());
            let fd = (ep.perimeter - em.perimeter) / (2.0 * h);
            assert!((fd - gl[i]).abs() <= 1e-6 * gl[i].abs().max(1.0), "perimeter coord {i}: {fd} vs {}", gl[i]);
            for k in 0..labels.len() {
                let fd = (ep.areas[k] - em.areas[k]) / (2.0 * h);
                assert!((fd - ga[k][i]).abs() <= 1e-6 * ga[k][i].abs().max(1.0), "area {k} coord {i}");
            }
        }
    }
}

#[test]
fn perimeter_gradient_is_translation_invariant() {
    let c = subdivide_edges(&construct_standard_triple(1.0).unwrap(), MAX_PIECE_HALF_ANGLE).unwrap();
    let labels = c.region_labels();
    let model = PerimeterModel::new(&c, &labels).unwrap();
    let x = model.parameters(&c, &[1.0, 1.1, 0.9]);
    let (g, _) = objective_gradient(&model, &x).unwrap();
    let nv = c.vertices().len();
    let sx: f64 = (0..nv).map(|v| g[2 * v]).sum();
    let sy: f64 = (0..nv).map(|v| g[2 * v + 1]).sum();
    assert!(sx.abs() < 1e-12 && sy.abs() < 1e-12);
}

#[test]
fn circle_from_perturbed_start() {
    let c = perturb(&circle(Point::ORIGIN, 1.0, RegionLabel::new(1), 6).unwrap(), 0.05, 1);
    let p = MinimizeProblem::new(c, BTreeMap::from([(RegionLabel::new(1), PI)]));
    let r = minimize(&p).unwrap();
    assert!(r.converged, "{:?}", r.trace.last());
    assert!((r.complex.total_perimeter() - 2.0 * PI).abs() < 1e-6);
    assert!((r.lagrange_multipliers[&RegionLabel::new(1)] - 1.0).abs() < 1e-6);
}

#[test]
fn double_bubble_recovered() {
    let oracle = construct_standard_double(1.0, 1.0).unwrap();
    let p = MinimizeProblem::new(perturb(&oracle, 0.03, 2), targets(&oracle));
    let r = minimize(&p).unwrap();
    assert!(r.converged);
    assert!((r.complex.total_perimeter() - oracle.total_perimeter()).abs() < 1e-6);
    assert!(r.regularity.conditions_pass(), "{:#?}", r.regularity);
}

#[test]
fn triple_bubble_recovered() {
    let oracle = construct_standard_triple(1.0).unwrap();
    let expected = 3.0 * PI + 2.0 * 3f64.sqrt();
    assert!((oracle.total_perimeter() - expected).abs() < 1e-12);
    let p = MinimizeProblem::new(perturb(&oracle, 0.05, 3), targets(&oracle));
    let r = minimize(&p).unwrap();
    assert!(r.converged);
    assert!((r.complex.total_perimeter() - expected).abs() < 1e-6);
    let len = r.complex.total_perimeter();
    let sum: f64 = r.lagrange_multipliers.iter().map(|(l, p)| p * r.complex.region_area(*l).unwrap()).sum();
    assert!((len - 2.0 * sum).abs() / len < 1e-5);
    let bound = upper_bound_length(&targets(&oracle).values().copied().collect::<Vec<_>>()).unwrap();
    assert!(len <= bound + 1e-9);
}

#[test]
fn straight_edge_gradient_is_chord_direction() {
    let c = construct_standard_triple(1.0).unwrap();
    let c = subdivide_edges(&c, MAX_PIECE_HALF_ANGLE).unwrap();
    let labels = c.region_labels();
    let model = PerimeterModel::new(&c, &labels).unwrap();
    let x = model.parameters(&c, &[1.0, 1.0, 1.0]);
    let (g, _) = objective_gradient(&model, &x).unwrap();
    // The center touches three straight spokes; its gradient is minus the sum
    // of their unit directions, which cancel at 2π/3.
    let v = c.vertices().iter().position(|p| p.norm() < 1e-12).unwrap();
    assert!(g[2 * v].abs() < 1e-12 && g[2 * v + 1].abs() < 1e-12);
}

#[test]
fn triple_multistart_agrees() {
    let oracle = construct_standard_triple(1.0).unwrap();
    let expected = oracle.total_perimeter();
    for seed in 10..20 {
        let p = MinimizeProblem::new(perturb(&oracle, 0.05, seed), targets(&oracle));
        let r = minimize(&p).unwrap();
        assert!(r.converged, "seed {seed}");
        assert!((r.complex.total_perimeter() - expected).abs() / expected < 1e-6, "seed {seed}");
        for (l, m) in &r.lagrange_multipliers {
            let measured = pressures(&r.complex, 1e-4).unwrap().regions[l];
            assert!((m - measured).abs() < 1e-5, "seed {seed} region {l}: {m} vs {measured}");
        }
    }
}

#[test]
fn upper_bound_for_unit_areas() {
    let b = upper_bound_length(&[1.0, 1.0, 1.0]).unwrap();
    let closed = 2.0 * (3.0 * PI).sqrt() + 3.0 * (3.0 / PI).sqrt();
    assert!((b - closed).abs() < 1e-12);
    let scaled = upper_bound_length(&[4.0, 4.0, 4.0]).unwrap();
    assert!((scaled - 2.0 * b).abs() < 1e-12);
}

#[test]
fn rejects_bad_targets() {
    let c = construct_standard_triple(1.0).unwrap();
    let mut t = targets(&c);
    t.insert(RegionLabel::new(1), -1.0);
    assert!(minimize(&MinimizeProblem::new(c.clone(), t)).is_err());
    let mut t = targets(&c);
    t.remove(&RegionLabel::new(2));
    assert!(minimize(&MinimizeProblem::new(c, t)).is_err());
}
