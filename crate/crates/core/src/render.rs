//! SVG rendering of an instance with optional grid and reference paths.

use std::fmt::Write;

use crate::fmt_num;
use crate::geometry::Polyline;
use crate::grid::GridPath;
use crate::tessellation::{Instance, Point};

#[derive(Clone, Debug, PartialEq)]
pub struct RenderSpec {
    /// Pixels per unit cell, at least 4.
    pub cell_px: u32,
    pub grid_stroke: String,
    pub ref_stroke: String,
}

impl Default for RenderSpec {
    fn default() -> Self {
        Self {
            cell_px: 40,
            grid_stroke: "black".into(),
            ref_stroke: "red".into(),
        }
    }
}

/// Gray level per weight: distinct weights are ranked, the smallest maps to
/// white (255) and the largest to black (0).
pub fn shade_levels(weights: &[f64]) -> Vec<u8> {
    let mut distinct: Vec<f64> = weights.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    let top = distinct.len().saturating_sub(1);
    weights
        .iter()
        .map(|w| {
            if top == 0 {
                return 255;
            }
            let rank = distinct.partition_point(|d| d < w);
            (255.0 * (1.0 - rank as f64 / top as f64)).round() as u8
        })
        .collect()
}

pub fn render_svg(
    inst: &Instance,
    grid: Option<&GridPath>,
    reference: Option<&Polyline>,
    spec: &RenderSpec,
) -> String {
    let t = &inst.tess;
    let px = f64::from(spec.cell_px.max(4));
    let margin = px / 2.0;
    let width = t.width() as f64 * px + 2.0 * margin;
    let height = t.height() as f64 * px + 2.0 * margin;
    let n = t.height() as f64;
    let sx = |x: f64| fmt_num(margin + x * px);
    let sy = |y: f64| fmt_num(margin + (n - y) * px);
    let points = |pts: &mut dyn Iterator<Item = Point>| {
        pts.map(|p| format!("{},{}", sx(p.x), sy(p.y)))
            .collect::<Vec<_>>()
            .join(" ")
    };

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        fmt_num(width),
        fmt_num(height),
        fmt_num(width),
        fmt_num(height)
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();

    writeln!(
        out,
        r##"<g id="cells" stroke="#808080" stroke-width="0.5">"##
    )
    .unwrap();
    let shades = shade_levels(t.weights());
    for (c, g) in t.cells().zip(shades) {
        writeln!(
            out,
            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="rgb({g},{g},{g})"/>"#,
            sx(c.x as f64 - 1.0),
            sy(c.y as f64),
            fmt_num(px),
            fmt_num(px)
        )
        .unwrap();
    }
    writeln!(out, "</g>").unwrap();

    let stroke = fmt_num(px / 12.0);
    if let Some(gp) = grid {
        let mut it = gp
            .vertices
            .iter()
            .map(|c| Point::new(c.x as f64 - 0.5, c.y as f64 - 0.5));
        writeln!(
            out,
            r#"<polyline id="grid-path" points="{}" fill="none" stroke="{}" stroke-width="{stroke}" stroke-linejoin="round"/>"#,
            points(&mut it),
            spec.grid_stroke
        )
        .unwrap();
    }
    if let Some(r) = reference {
        let mut it = r.points().iter().copied();
        writeln!(
            out,
            r#"<polyline id="ref-path" points="{}" fill="none" stroke="{}" stroke-width="{stroke}" stroke-linejoin="round"/>"#,
            points(&mut it),
            spec.ref_stroke
        )
        .unwrap();
    }

    let radius = fmt_num(px / 10.0);
    let font = fmt_num(px / 2.5);
    for (label, p) in [
        ("s", inst.query.start_point()),
        ("g", inst.query.goal_point()),
    ] {
        writeln!(
            out,
            r#"<circle cx="{}" cy="{}" r="{radius}" fill="black"/>"#,
            sx(p.x),
            sy(p.y)
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="serif" font-style="italic" font-size="{font}" text-anchor="middle">{label}</text>"#,
            sx(p.x),
            sy(p.y - 0.35)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}
