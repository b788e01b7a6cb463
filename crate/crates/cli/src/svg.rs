//! SVG 1.1 drawings of height-one polygon complexes.

use std::fmt::Write as _;

use num_traits::ToPrimitive;

use toresolve_core::resolve3d::{parallelograms, Phase, Piece, ResolutionTrace};
use toresolve_core::{LatticePolytope, LatticeVector};

const MARGIN: i64 = 30;
const TITLE: i64 = 24;
const LEGEND: i64 = 28;
const FIXED_POINT: &str = "#c0392b";
const CURVE: &str = "#2471a3";
const BOX_FILL: &str = "#f5e6a8";
const CELL_EDGE: &str = "#555";
const OUTSIDE_DOT: &str = "#bbb";

/// One polygon complex with the vertices added by each blow-up round.
#[derive(Clone, Debug)]
pub struct Panel {
    pub title: String,
    pub polygon: LatticePolytope,
    pub cells: Vec<LatticePolytope>,
    /// Unit parallelograms before the diagonals were chosen.
    pub boxes: Vec<LatticePolytope>,
    /// `(point, label, colour)`.
    pub labels: Vec<(LatticeVector, String, &'static str)>,
}

impl Panel {
    /// The final complex of `piece`, labelled `F1, F2, …` for fixed-point
    /// rounds and `C1, C2, …` for curve rounds.
    pub fn from_piece(title: String, index: usize, piece: &Piece, trace: &ResolutionTrace) -> toresolve_core::Result<Panel> {
        let boxes = parallelograms(&piece.cdv_complex)?;
        let mut labels = Vec::new();
        let (mut fixed, mut curve) = (0, 0);
        for step in trace.steps.iter().filter(|s| s.piece == Some(index)) {
            let (tag, colour) = match step.phase {
                Phase::FixedPointBlowUp => {
                    fixed += 1;
                    (format!("F{fixed}"), FIXED_POINT)
                }
                Phase::CurveBlowUp => {
                    curve += 1;
                    (format!("C{curve}"), CURVE)
                }
                _ => continue,
            };
            for v in &step.new_rays {
                labels.push((piece.map.mul_vector(v).truncated(), tag.clone(), colour));
            }
        }
        Ok(Panel { title, polygon: piece.polygon.clone(), cells: piece.complex.cells().to_vec(), boxes, labels })
    }
}

fn xy(v: &LatticeVector) -> (i64, i64) {
    (v[0].to_i64().expect("drawable coordinate"), v[1].to_i64().expect("drawable coordinate"))
}

fn bounds(p: &LatticePolytope) -> (i64, i64, i64, i64) {
    let pts: Vec<(i64, i64)> = p.vertices().iter().map(xy).collect();
    let x0 = pts.iter().map(|p| p.0).min().unwrap_or(0);
    let x1 = pts.iter().map(|p| p.0).max().unwrap_or(0);
    let y0 = pts.iter().map(|p| p.1).min().unwrap_or(0);
    let y1 = pts.iter().map(|p| p.1).max().unwrap_or(0);
    (x0, x1, y0, y1)
}

fn points_attr(p: &LatticePolytope, at: &impl Fn(i64, i64) -> (i64, i64)) -> String {
    let pts: Vec<String> = p
        .vertices()
        .iter()
        .map(|v| {
            let (x, y) = xy(v);
            let (sx, sy) = at(x, y);
            format!("{sx},{sy}")
        })
        .collect();
    pts.join(" ")
}

/// Panels side by side, `scale` pixels per lattice step.
pub fn render(panels: &[Panel], scale: i64) -> String {
    let sizes: Vec<(i64, i64)> = panels
        .iter()
        .map(|p| {
            let (x0, x1, y0, y1) = bounds(&p.polygon);
            ((x1 - x0) * scale + 2 * MARGIN, (y1 - y0) * scale + 2 * MARGIN + TITLE)
        })
        .collect();
    let width = sizes.iter().map(|s| s.0).sum::<i64>().max(2 * MARGIN);
    let height = sizes.iter().map(|s| s.1).max().unwrap_or(2 * MARGIN) + LEGEND;
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>"#);
    let mut left = 0;
    for (panel, (w, _)) in panels.iter().zip(&sizes) {
        let (x0, x1, y0, y1) = bounds(&panel.polygon);
        let at = |x: i64, y: i64| (left + MARGIN + (x - x0) * scale, TITLE + MARGIN + (y1 - y) * scale);
        let _ = writeln!(out, "<g>");
        let _ = writeln!(out, r#"<text x="{}" y="18" font-family="sans-serif" font-size="13">{}</text>"#, left + MARGIN, escape(&panel.title));
        for b in &panel.boxes {
            let _ = writeln!(out, r#"<polygon points="{}" fill="{BOX_FILL}" stroke="none"/>"#, points_attr(b, &at));
        }
        for c in &panel.cells {
            let _ = writeln!(out, r#"<polygon points="{}" fill="none" stroke="{CELL_EDGE}" stroke-width="1"/>"#, points_attr(c, &at));
        }
        let _ = writeln!(out, r#"<polygon points="{}" fill="none" stroke="black" stroke-width="2"/>"#, points_attr(&panel.polygon, &at));
        for x in x0..=x1 {
            for y in y0..=y1 {
                let (sx, sy) = at(x, y);
                if panel.polygon.contains(&LatticeVector::from_i64s(&[x, y])) {
                    let _ = writeln!(out, r#"<circle cx="{sx}" cy="{sy}" r="3" fill="black"/>"#);
                } else {
                    let _ = writeln!(out, r#"<circle cx="{sx}" cy="{sy}" r="1.5" fill="{OUTSIDE_DOT}"/>"#);
                }
            }
        }
        for (v, label, colour) in &panel.labels {
            let (x, y) = xy(v);
            let (sx, sy) = at(x, y);
            let _ = writeln!(out, r#"<circle cx="{sx}" cy="{sy}" r="4.5" fill="{colour}"/>"#);
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}" font-family="sans-serif" font-size="10" fill="{colour}">{label}</text>"#,
                sx + 6,
                sy - 6
            );
        }
        let _ = writeln!(out, "</g>");
        left += w;
    }
    let ly = height - 10;
    let _ = writeln!(
        out,
        r#"<text x="{MARGIN}" y="{ly}" font-family="sans-serif" font-size="11"><tspan fill="{FIXED_POINT}">F: fixed-point round</tspan>  <tspan fill="{CURVE}">C: curve round</tspan>  shaded: box before its diagonal</text>"#
    );
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
