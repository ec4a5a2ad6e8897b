//! SVG diagrams of polygon chains.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::polytope::Polytope;
use crate::web::{ConnectCertificate, Panel};
use crate::zlattice::LatticeVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderOptions {
    /// Pixels per lattice unit.
    pub cell_size: u32,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { cell_size: 24 }
    }
}

enum FiberShape {
    None,
    Segment(LatticeVector, LatticeVector),
    Whole,
}

fn fiber_shape(fiber: Option<&Vec<LatticeVector>>) -> FiberShape {
    let Some(f) = fiber.filter(|f| !f.is_empty()) else { return FiberShape::None };
    let spans_plane = f.iter().any(|a| f.iter().any(|b| a[0] * b[1] - a[1] * b[0] != 0));
    if spans_plane {
        return FiberShape::Whole;
    }
    let lo = f.iter().min().cloned().unwrap();
    let hi = f.iter().max().cloned().unwrap();
    FiberShape::Segment(lo, hi)
}

struct Frame {
    cell: i64,
    radius: i64,
    left: i64,
}

impl Frame {
    fn x(&self, v: &LatticeVector) -> i64 {
        self.left + (v[0] + self.radius + 1) * self.cell
    }

    fn y(&self, v: &LatticeVector) -> i64 {
        (self.radius + 1 - v[1]) * self.cell
    }
}

fn draw_panel(out: &mut String, frame: &Frame, panel: &Panel) {
    let p = &panel.polytope;
    let shape = fiber_shape(panel.fiber.as_ref());
    let fill = if matches!(shape, FiberShape::Whole) { "#999999" } else { "none" };
    let pts: Vec<String> = p.vertices().iter().map(|v| format!("{},{}", frame.x(v), frame.y(v))).collect();
    let _ = writeln!(out, r#"  <polygon points="{}" fill="{fill}" stroke="black" stroke-width="1"/>"#, pts.join(" "));
    if let FiberShape::Segment(a, b) = &shape {
        let _ = writeln!(
            out,
            r##"  <line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#999999" stroke-width="{}"/>"##,
            frame.x(a),
            frame.y(a),
            frame.x(b),
            frame.y(b),
            (frame.cell / 6).max(2)
        );
    }
    let r = (frame.cell / 10).max(2);
    for v in p.lattice_points() {
        let _ = writeln!(out, r#"  <circle cx="{}" cy="{}" r="{r}" fill="black"/>"#, frame.x(&v), frame.y(&v));
    }
    if panel.mori {
        let width = (2 * frame.radius + 2) * frame.cell;
        let _ = writeln!(
            out,
            r#"  <text x="{}" y="{}" font-size="{}" text-anchor="middle" font-family="serif">Mfp</text>"#,
            frame.left + width / 2,
            width + frame.cell / 2,
            (frame.cell * 3 / 5).max(8)
        );
    }
}

/// Panels left to right with the relation symbols between them. A gray
/// segment marks a one-dimensional fiber, a gray fill a fiber equal to the
/// whole polygon, and "Mfp" a Mori fiber polygon.
pub fn render_svg(cert: &ConnectCertificate, opts: RenderOptions) -> Result<String> {
    if let Some(p) = cert.chain.iter().map(|p| &p.polytope).find(|p| p.dim() != 2) {
        return Err(Error::UnsupportedDimension(p.dim()));
    }
    let radius = cert
        .chain
        .iter()
        .flat_map(|p| p.polytope.vertices().iter())
        .flat_map(|v| [v[0].abs(), v[1].abs()])
        .max()
        .unwrap_or(1)
        .max(1);
    let cell = i64::from(opts.cell_size.max(4));
    let panel_width = (2 * radius + 2) * cell;
    let gap = 2 * cell;
    let n = cert.chain.len() as i64;
    let width = n * panel_width + (n - 1).max(0) * gap;
    let height = panel_width + cell;

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    for (i, panel) in cert.chain.iter().enumerate() {
        let left = i as i64 * (panel_width + gap);
        draw_panel(&mut out, &Frame { cell, radius, left }, panel);
        if let Some(rel) = cert.relations.get(i) {
            let _ = writeln!(
                out,
                r#"  <text x="{}" y="{}" font-size="{}" text-anchor="middle" font-family="serif">{}</text>"#,
                left + panel_width + gap / 2,
                panel_width / 2 + cell / 4,
                cell,
                rel.kind.symbol()
            );
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// A single polygon without fiber data.
pub fn render_polytope_svg(p: &Polytope, opts: RenderOptions) -> Result<String> {
    let cert = ConnectCertificate {
        class: crate::polytope::PolytopeClass::Any,
        chain: vec![Panel { polytope: p.clone(), fiber: None, mori: false }],
        relations: vec![],
        sequence: crate::links::LinkSequence::new(vec![], crate::polytope::PolytopeClass::Any),
    };
    render_svg(&cert, opts)
}
