//! Area-constrained perimeter minimization over a fixed combinatorial type.
//!
//! The variables are the vertex positions and one pressure per region. Each
//! edge is the arc over its chord whose curvature is the pressure jump across
//! it, so every edge has constant curvature and curvatures add up around
//! vertices by construction. Meeting angles of 2π/3 are not imposed; they
//! appear at stationary points.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::arc::Point;
use crate::complex::{BubbleComplex, ComplexBuilder, RegionLabel};
use crate::error::{Error, Result};
use crate::families::circle_with_radii;
use crate::regularity::{self, ValidationReport};

/// Largest half-angle left on an edge by [`subdivide_edges`].
pub const MAX_PIECE_HALF_ANGLE: f64 = PI / 3.0;

#[derive(Clone, Debug)]
pub struct MinimizeProblem {
    pub topology: BubbleComplex,
    pub target_areas: BTreeMap<RegionLabel, f64>,
    pub area_tol: f64,
    pub grad_tol: f64,
    /// Budget of inner quasi-Newton iterations over the whole run.
    pub max_iterations: usize,
}

impl MinimizeProblem {
    pub fn new(topology: BubbleComplex, target_areas: BTreeMap<RegionLabel, f64>) -> Self {
        MinimizeProblem { topology, target_areas, area_tol: 1e-10, grad_tol: 1e-8, max_iterations: 5000 }
    }
}

/// One accepted step.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TraceRecord {
    pub iteration: usize,
    pub perimeter: f64,
    pub max_area_residual: f64,
    pub grad_norm: f64,
}

#[derive(Clone, Debug)]
pub struct MinimizeResult {
    pub complex: BubbleComplex,
    pub lagrange_multipliers: BTreeMap<RegionLabel, f64>,
    pub converged: bool,
    pub iterations: usize,
    pub final_grad_norm: f64,
    pub regularity: ValidationReport,
    pub trace: Vec<TraceRecord>,
}

/// Splits every edge into equal pieces of half-angle at most `max_half_angle`.
pub fn subdivide_edges(c: &BubbleComplex, max_half_angle: f64) -> Result<BubbleComplex> {
    if !(max_half_angle > 0.0) {
        return Err(Error::InvalidArgument(format!("piece half-angle must be positive, got {max_half_angle}")));
    }
    let src = c.to_builder();
    let mut b = ComplexBuilder { vertices: src.vertices.clone(), edges: Vec::new(), labels: src.labels.clone() };
    for (i, d) in src.edges.iter().enumerate() {
        let arc = c.edge_arc(crate::complex::EdgeId(i));
        let pieces = (d.half_angle.abs() / max_half_angle).ceil().max(1.0) as usize;
        let mut from = d.from;
        for k in 1..=pieces {
            let to = if k == pieces { d.to } else { b.vertex(arc.point_at(k as f64 / pieces as f64)) };
            let e = b.edge(from, to, d.half_angle / pieces as f64);
            b.edges[e].left = d.left;
            b.edges[e].right = d.right;
            from = to;
        }
    }
    b.build()
}

/// Perimeter and region areas of a fixed topology as functions of the
/// parameter vector `[x0, y0, x1, y1, ..., p_1, ..., p_R]`.
#[derive(Clone, Debug)]
pub struct PerimeterModel {
    n_vertices: usize,
    labels: Vec<RegionLabel>,
    /// `(from, to, left region index, right region index)`; `None` is the exterior.
    edges: Vec<(usize, usize, Option<usize>, Option<usize>)>,
    /// Per edge: `(left face, right face)` indices into `face_region`.
    edge_faces: Vec<(usize, usize)>,
    face_interior: Vec<bool>,
}

/// Values and gradients at one parameter vector.
#[derive(Clone, Debug)]
pub struct ModelEval {
    pub perimeter: f64,
    pub perimeter_grad: Vec<f64>,
    pub areas: Vec<f64>,
    pub area_grads: Vec<Vec<f64>>,
    pub face_areas: Vec<f64>,
}

impl PerimeterModel {
    /// Model of `c`; every enclosed face must belong to one of `labels`.
    pub fn new(c: &BubbleComplex, labels: &[RegionLabel]) -> Result<Self> {
        let index: BTreeMap<RegionLabel, usize> = labels.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let region = |f: crate::complex::FaceId| -> Result<Option<usize>> {
            let r = c.region_of(f);
            if r.is_exterior() {
                return Ok(None);
            }
            index
                .get(&r)
                .copied()
                .map(Some)
                .ok_or_else(|| Error::InvalidArgument(format!("no target area for region {r}")))
        };
        let mut edges = Vec::new();
        let mut edge_faces = Vec::new();
        for e in c.edge_ids() {
            let (l, r) = (c.half_edge(e.forward()).face, c.half_edge(e.backward()).face);
            let edge = c.edge(e);
            edges.push((edge.from.0, edge.to.0, region(l)?, region(r)?));
            edge_faces.push((l.0, r.0));
        }
        Ok(PerimeterModel {
            n_vertices: c.vertices().len(),
            labels: labels.to_vec(),
            edges,
            edge_faces,
            face_interior: c.faces().iter().map(|f| !f.region.is_exterior()).collect(),
        })
    }

    pub fn dimension(&self) -> usize {
        2 * self.n_vertices + self.labels.len()
    }

    pub fn labels(&self) -> &[RegionLabel] {
        &self.labels
    }

    fn pressure(&self, x: &[f64], r: Option<usize>) -> f64 {
        r.map_or(0.0, |i| x[2 * self.n_vertices + i])
    }

    fn point(&self, x: &[f64], v: usize) -> Point {
        Point::new(x[2 * v], x[2 * v + 1])
    }

    /// Parameters reproducing the vertices of `c` with the given pressures.
    pub fn parameters(&self, c: &BubbleComplex, pressures: &[f64]) -> Vec<f64> {
        let mut x: Vec<f64> = c.vertices().iter().flat_map(|p| [p.x, p.y]).collect();
        x.extend_from_slice(pressures);
        x
    }

    /// Curvature of edge `e` (of its forward half-edge) at `x`.
    fn curvature(&self, x: &[f64], e: usize) -> f64 {
        let (_, _, l, r) = self.edges[e];
        self.pressure(x, r) - self.pressure(x, l)
    }

    /// Half-angles at `x`, or `None` when some arc does not fit its chord.
    pub fn half_angles(&self, x: &[f64]) -> Option<Vec<f64>> {
        self.edges
            .iter()
            .enumerate()
            .map(|(e, &(a, b, _, _))| {
                let s = self.curvature(x, e) * self.point(x, a).dist(self.point(x, b)) / 2.0;
                (s.abs() < 1.0 && s.is_finite()).then(|| s.asin())
            })
            .collect()
    }

    /// Perimeter, areas and their gradients; `None` outside the feasible domain.
    pub fn eval(&self, x: &[f64]) -> Option<ModelEval> {
        let n = self.dimension();
        let nr = self.labels.len();
        let mut out = ModelEval {
            perimeter: 0.0,
            perimeter_grad: vec![0.0; n],
            areas: vec![0.0; nr],
            area_grads: vec![vec![0.0; n]; nr],
            face_areas: vec![0.0; self.face_interior.len()],
        };
        let pv = 2 * self.n_vertices;
        for (e, &(ia, ib, l, r)) in self.edges.iter().enumerate() {
            let (a, b) = (self.point(x, ia), self.point(x, ib));
            let d = b - a;
            let c = d.norm();
            if c == 0.0 {
                return None;
            }
            let kappa = self.curvature(x, e);
            let s = kappa * c / 2.0;
            if !(s.abs() < 1.0) {
                return None;
            }
            let u = d / c;
            let (g, dg) = len_factor(s);
            let (h, dh) = area_factor(s);

            // Arc length L = C g(s).
            out.perimeter += c * g;
            let dl_dc = g + s * dg;
            let dl_dk = c * c * dg / 2.0;
            add_point(&mut out.perimeter_grad, ia, u * -dl_dc);
            add_point(&mut out.perimeter_grad, ib, u * dl_dc);
            if let Some(i) = r {
                out.perimeter_grad[pv + i] += dl_dk;
            }
            if let Some(i) = l {
                out.perimeter_grad[pv + i] -= dl_dk;
            }

            // Contribution T = a×b/2 − S to the left face, −T to the right face,
            // with segment area S = C² h(s) / 4.
            let t = 0.5 * a.cross(b) - c * c * h / 4.0;
            let ds_dc = c * h / 2.0 + c * s * dh / 4.0;
            let ds_dk = c * c * c * dh / 8.0;
            let ga = Point::new(b.y, -b.x) * 0.5 + u * ds_dc;
            let gb = Point::new(-a.y, a.x) * 0.5 - u * ds_dc;
            let (fl, fr) = self.edge_faces[e];
            out.face_areas[fl] += t;
            out.face_areas[fr] -= t;
            for (side, sign) in [(l, 1.0), (r, -1.0)] {
                let Some(k) = side else { continue };
                out.areas[k] += sign * t;
                let grad = &mut out.area_grads[k];
                add_point(grad, ia, ga * sign);
                add_point(grad, ib, gb * sign);
                if let Some(i) = r {
                    grad[pv + i] -= sign * ds_dk;
                }
                if let Some(i) = l {
                    grad[pv + i] += sign * ds_dk;
                }
            }
        }
        Some(out)
    }

    /// The complex at `x`. Subdivision joints are kept.
    pub fn complex(&self, template: &BubbleComplex, x: &[f64]) -> Result<BubbleComplex> {
        let angles = self.half_angles(x).ok_or_else(|| Error::Minimize("arc does not fit its chord".into()))?;
        let mut b = template.to_builder();
        for v in 0..self.n_vertices {
            b.vertices[v] = self.point(x, v);
        }
        for (d, theta) in b.edges.iter_mut().zip(angles) {
            d.half_angle = theta;
        }
        b.build()
    }
}

fn add_point(g: &mut [f64], v: usize, p: Point) {
    g[2 * v] += p.x;
    g[2 * v + 1] += p.y;
}

/// `asin(s)/s` and its derivative.
fn len_factor(s: f64) -> (f64, f64) {
    if s.abs() < 1e-3 {
        let s2 = s * s;
        (1.0 + s2 / 6.0 + 3.0 * s2 * s2 / 40.0, s / 3.0 + 3.0 * s * s2 / 10.0 + 15.0 * s * s2 * s2 / 56.0)
    } else {
        let g = s.asin() / s;
        (g, (s / (1.0 - s * s).sqrt() - s.asin()) / (s * s))
    }
}

/// `(asin(s) − s√(1−s²))/s²` and its derivative.
fn area_factor(s: f64) -> (f64, f64) {
    if s.abs() < 1e-3 {
        let s2 = s * s;
        (2.0 * s / 3.0 + s * s2 / 5.0 + 3.0 * s * s2 * s2 / 28.0, 2.0 / 3.0 + 3.0 * s2 / 5.0 + 15.0 * s2 * s2 / 28.0)
    } else {
        let r = (1.0 - s * s).sqrt();
        let h = (s.asin() - s * r) / (s * s);
        (h, 2.0 / r - 2.0 * h / s)
    }
}

/// Gradient of total perimeter at `x`, followed by the gradient of each region area.
pub fn objective_gradient(model: &PerimeterModel, x: &[f64]) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let e = model.eval(x).ok_or_else(|| Error::InvalidArgument("parameters outside the feasible domain".into()))?;
    Ok((e.perimeter_grad, e.area_grads))
}

/// Perimeter of a circle split into sectors of the given areas.
pub fn upper_bound_length(areas: &[f64]) -> Result<f64> {
    Ok(circle_with_radii(areas)?.total_perimeter())
}

struct Merit<'a> {
    model: &'a PerimeterModel,
    targets: Vec<f64>,
    lambda: Vec<f64>,
    mu: f64,
}

impl Merit<'_> {
    /// Augmented Lagrangian `ℓ − Σ λ g + μ/2 Σ g²` with `g = A − target`.
    fn value_grad(&self, x: &[f64]) -> Option<(f64, DVector<f64>, ModelEval)> {
        let ev = self.model.eval(x)?;
        let mut f = ev.perimeter;
        let mut grad = DVector::from_column_slice(&ev.perimeter_grad);
        for k in 0..self.targets.len() {
            let g = ev.areas[k] - self.targets[k];
            f += -self.lambda[k] * g + 0.5 * self.mu * g * g;
            let w = -self.lambda[k] + self.mu * g;
            grad.axpy(w, &DVector::from_column_slice(&ev.area_grads[k]), 1.0);
        }
        f.is_finite().then_some((f, grad, ev))
    }
}

/// Minimizes perimeter subject to the target areas, starting from the
/// geometry of `p.topology`.
pub fn minimize(p: &MinimizeProblem) -> Result<MinimizeResult> {
    minimize_with(p, |_| {})
}

/// [`minimize`] reporting every accepted step to `on_step`.
pub fn minimize_with(p: &MinimizeProblem, mut on_step: impl FnMut(&TraceRecord)) -> Result<MinimizeResult> {
    for (r, &a) in &p.target_areas {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidArgument(format!("target area for region {r} must be positive, got {a}")));
        }
    }
    if p.topology.regions().keys().any(|r| r.is_empty_chamber()) {
        return Err(Error::InvalidArgument("empty chambers have no target area".into()));
    }
    let present: Vec<RegionLabel> = p.topology.region_labels();
    if present.iter().collect::<Vec<_>>() != p.target_areas.keys().collect::<Vec<_>>() {
        return Err(Error::InvalidArgument("target areas must name exactly the regions of the complex".into()));
    }
    let topo = subdivide_edges(&p.topology, MAX_PIECE_HALF_ANGLE)?;
    let model = PerimeterModel::new(&topo, &present)?;
    let targets: Vec<f64> = present.iter().map(|r| p.target_areas[r]).collect();
    let min_target = targets.iter().copied().fold(f64::INFINITY, f64::min);
    let mut x = model.parameters(&topo, &initial_pressures(&topo, &present, &targets));
    // Shrink pressures until every arc fits its chord.
    for _ in 0..60 {
        if model.eval(&x).is_some() {
            break;
        }
        let pv = 2 * topo.vertices().len();
        for v in &mut x[pv..] {
            *v *= 0.5;
        }
    }
    if model.eval(&x).is_none() {
        return Err(Error::Minimize("no feasible starting pressures".into()));
    }

    let n = model.dimension();
    let mut merit = Merit { model: &model, targets: targets.clone(), lambda: vec![0.0; targets.len()], mu: 10.0 };
    let mut trace = Vec::new();
    let mut iterations = 0;
    let mut omega = 1e-2;
    let mut prev_violation = f64::INFINITY;
    let mut converged = false;
    let mut grad_norm = f64::INFINITY;

    'outer: for _ in 0..200 {
        // Quasi-Newton on the merit function for fixed multipliers.
        let (mut f, mut g, _) =
            merit.value_grad(&x).ok_or_else(|| Error::Minimize("left the feasible domain".into()))?;
        let mut hinv = DMatrix::<f64>::identity(n, n);
        let mut resets = 0;
        while g.norm() > omega {
            if iterations >= p.max_iterations {
                break 'outer;
            }
            let mut d = -(&hinv * &g);
            if d.dot(&g) >= 0.0 {
                hinv.fill_with_identity();
                d = -g.clone();
            }
            let Some((t, f_new, g_new, ev)) = line_search(&merit, &x, f, &g, &d) else {
                if resets > 2 {
                    break;
                }
                resets += 1;
                hinv.fill_with_identity();
                continue;
            };
            let step = &d * t;
            for (xi, si) in x.iter_mut().zip(step.iter()) {
                *xi += si;
            }
            if let Some((fi, a)) =
                ev.face_areas.iter().enumerate().find(|&(fi, &a)| model.face_interior[fi] && a < 1e-6 * min_target)
            {
                return Err(Error::Minimize(format!("face {fi} degenerated (area {a})")));
            }
            let y = &g_new - &g;
            let sy = step.dot(&y);
            if sy > 1e-14 * step.norm() * y.norm() {
                let rho = 1.0 / sy;
                let hy = &hinv * &y;
                let yhy = y.dot(&hy);
                hinv += (&step * step.transpose()) * (rho * rho * yhy + rho)
                    - (&hy * step.transpose() + &step * hy.transpose()) * rho;
            }
            f = f_new;
            g = g_new;
            iterations += 1;
            let rec = TraceRecord {
                iteration: iterations,
                perimeter: ev.perimeter,
                max_area_residual: max_residual(&ev.areas, &targets),
                grad_norm: g.norm(),
            };
            on_step(&rec);
            trace.push(rec);
        }

        let ev = model.eval(&x).ok_or_else(|| Error::Minimize("left the feasible domain".into()))?;
        let residuals: Vec<f64> = ev.areas.iter().zip(&targets).map(|(a, t)| a - t).collect();
        for k in 0..targets.len() {
            merit.lambda[k] -= merit.mu * residuals[k];
        }
        let violation = max_residual(&ev.areas, &targets);
        grad_norm = lagrangian_grad(&ev, &merit.lambda).norm();
        if !grad_norm.is_finite() || !ev.perimeter.is_finite() {
            return Err(Error::Minimize("iteration diverged".into()));
        }
        if violation <= p.area_tol && grad_norm <= p.grad_tol {
            converged = true;
            break;
        }
        if violation > 0.25 * prev_violation {
            merit.mu = (merit.mu * 10.0).min(1e10);
        }
        prev_violation = violation;
        omega = (omega * 0.1).max(0.1 * p.grad_tol);
    }

    let ev = model.eval(&x).ok_or_else(|| Error::Minimize("left the feasible domain".into()))?;
    let complex = model.complex(&topo, &x)?;
    let regularity = regularity::validate(&complex, (1e3 * p.grad_tol).max(regularity::DEFAULT_TOL));
    if grad_norm.is_infinite() {
        grad_norm = lagrangian_grad(&ev, &merit.lambda).norm();
    }
    Ok(MinimizeResult {
        complex,
        lagrange_multipliers: present.iter().copied().zip(merit.lambda.iter().copied()).collect(),
        converged,
        iterations,
        final_grad_norm: grad_norm,
        regularity,
        trace,
    })
}

fn max_residual(areas: &[f64], targets: &[f64]) -> f64 {
    areas.iter().zip(targets).map(|(a, t)| (a - t).abs()).fold(0.0, f64::max)
}

/// `∇ℓ − Σ λ ∇A`.
fn lagrangian_grad(ev: &ModelEval, lambda: &[f64]) -> DVector<f64> {
    let mut g = DVector::from_column_slice(&ev.perimeter_grad);
    for (k, l) in lambda.iter().enumerate() {
        g.axpy(-l, &DVector::from_column_slice(&ev.area_grads[k]), 1.0);
    }
    g
}

/// Backtracking Armijo search; infeasible trial points count as rejections.
fn line_search(
    merit: &Merit,
    x: &[f64],
    f: f64,
    g: &DVector<f64>,
    d: &DVector<f64>,
) -> Option<(f64, f64, DVector<f64>, ModelEval)> {
    let slope = g.dot(d);
    let mut t = 1.0;
    let mut trial = vec![0.0; x.len()];
    for _ in 0..60 {
        for i in 0..x.len() {
            trial[i] = x[i] + t * d[i];
        }
        if let Some((ft, gt, ev)) = merit.value_grad(&trial) {
            // Near a minimum the decrease drops below rounding noise; then a
            // smaller gradient is the only usable signal.
            let noise = 1e-13 * f.abs().max(1.0);
            if ft <= f + 1e-4 * t * slope || (ft <= f + noise && gt.norm() < 0.9 * g.norm()) {
                return Some((t, ft, gt, ev));
            }
        }
        t *= 0.5;
    }
    None
}

/// Region pressures of `c` when they are well defined, else the common
/// pressure `ℓ / (2 Σ A)` suggested by the perimeter identity.
fn initial_pressures(c: &BubbleComplex, labels: &[RegionLabel], targets: &[f64]) -> Vec<f64> {
    if let Ok(p) = regularity::pressures(c, 1e-6) {
        if labels.iter().all(|r| p.regions.contains_key(r)) {
            return labels.iter().map(|r| p.regions[r]).collect();
        }
    }
    let total: f64 = targets.iter().sum();
    vec![c.total_perimeter() / (2.0 * total); labels.len()]
}
