//! SVG 1.1 rendering: one filled path per face, one stroked path per edge.
//!
//! Output depends only on the complex, with coordinates printed to six
//! decimals, so identical input gives byte-identical files.

use std::fmt::Write;

use crate::arc::{ArcSpec, Point};
use crate::complex::{BubbleComplex, HalfEdgeId, RegionLabel};

/// Fill colors by region label; label `n` uses entry `(n - 1) % len`.
pub const PALETTE: [&str; 8] = ["#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5"];

/// Fill of empty chambers.
pub const EMPTY_FILL: &str = "#d9d9d9";

pub fn fill_for(label: RegionLabel) -> &'static str {
    if label.is_exterior() {
        "none"
    } else if label.is_empty_chamber() {
        EMPTY_FILL
    } else {
        PALETTE[(label.value() as usize - 1) % PALETTE.len()]
    }
}

fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".to_string()
    } else {
        s
    }
}

/// Screen position: the y axis points down in SVG.
fn screen(p: Point) -> String {
    format!("{} {}", num(p.x), num(-p.y))
}

/// Path command drawing `a` from its start (already the current point).
fn segment(a: &ArcSpec) -> String {
    if a.is_straight() {
        return format!("L {}", screen(a.end()));
    }
    let r = num(a.radius().abs());
    let large = u8::from(a.half_angle().abs() > std::f64::consts::FRAC_PI_2);
    // A left-bulging arc turns clockwise; SVG's sweep flag 1 is clockwise on
    // screen, and the y flip keeps the picture's handedness as drawn.
    let sweep = u8::from(a.half_angle() > 0.0);
    format!("A {r} {r} 0 {large} {sweep} {}", screen(a.end()))
}

fn cycle_path(c: &BubbleComplex, cycle: &[HalfEdgeId]) -> String {
    let mut d = format!("M {}", screen(c.half_edge_arc(cycle[0]).start()));
    for &h in cycle {
        d.push(' ');
        d.push_str(&segment(&c.half_edge_arc(h)));
    }
    d.push_str(" Z");
    d
}

/// Renders the complex as a standalone SVG document.
pub fn render(c: &BubbleComplex) -> String {
    let (lo, hi) = c.bounds().unwrap_or((Point::ORIGIN, Point::new(1.0, 1.0)));
    let pad = 0.05 * lo.dist(hi).max(1e-9);
    let (x0, y0) = (lo.x - pad, -hi.y - pad);
    let (w, h) = (hi.x - lo.x + 2.0 * pad, hi.y - lo.y + 2.0 * pad);
    let stroke = num(0.004 * w.max(h));
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{} {} {} {}\" width=\"600\" height=\"{}\">",
        num(x0),
        num(y0),
        num(w),
        num(h),
        (600.0 * h / w).round()
    );
    out.push_str("<g id=\"faces\" stroke=\"none\" fill-rule=\"evenodd\">\n");
    for f in c.interior_faces() {
        let d: Vec<String> = f.cycles.iter().map(|cyc| cycle_path(c, cyc)).collect();
        let _ = writeln!(
            out,
            "<path id=\"face-{}\" data-region=\"{}\" fill=\"{}\" d=\"{}\"/>",
            f.id.0,
            f.region,
            fill_for(f.region),
            d.join(" ")
        );
    }
    out.push_str("</g>\n");
    let _ = writeln!(out, "<g id=\"edges\" fill=\"none\" stroke=\"#000000\" stroke-width=\"{stroke}\">");
    for e in c.edge_ids() {
        let a = c.edge_arc(e);
        let _ = writeln!(out, "<path id=\"edge-{}\" d=\"M {} {}\"/>", e.0, screen(a.start()), segment(&a));
    }
    out.push_str("</g>\n</svg>\n");
    out
}
