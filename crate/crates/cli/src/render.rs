//! SVG and TikZ drawings of marked triangulations and fundamental hexagons.
//!
//! Output depends only on the inputs: elements are emitted in id order and
//! coordinates are printed with fixed precision.

use std::fmt::Write;

use dimer_core::dimer::Tiling;
use dimer_core::fan::Fan;
use dimer_core::jigsaw::Hexagon;
use dimer_core::lattice::V2;
use dimer_core::recipe::RecipeReport;
use dimer_core::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Svg,
    Tikz,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Format, String> {
        match s {
            "svg" => Ok(Format::Svg),
            "tikz" => Ok(Format::Tikz),
            _ => Err(format!("unknown format {s:?}, expected svg or tikz")),
        }
    }
}

/// Labels as drawn: per interior segment and per interior point, vertex ids joined by ", ".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labels {
    pub segments: Vec<(usize, String)>,
    pub points: Vec<(usize, String)>,
}

fn join(v: &[usize]) -> String {
    v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(", ")
}

pub fn labels(report: &RecipeReport) -> Labels {
    Labels {
        segments: report.segments.iter().filter(|(_, v)| !v.is_empty()).map(|(&s, v)| (s, join(v))).collect(),
        points: report.points.iter().map(|(&r, v)| (r, join(v))).collect(),
    }
}

/// Edges of the triangulation as ray pairs, each once.
fn fan_edges(fan: &Fan) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = fan
        .triangles
        .iter()
        .flat_map(|t| {
            let [a, b, c] = t.rays;
            [(a, b), (b, c), (a, c)]
        })
        .map(|(a, b)| (a.min(b), a.max(b)))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

pub fn render_fan(fan: &Fan, report: &RecipeReport, format: Format) -> String {
    match format {
        Format::Svg => fan_svg(fan, report),
        Format::Tikz => fan_tikz(fan, report),
    }
}

const SCALE: i64 = 80;
const MARGIN: i64 = 40;

fn fan_svg(fan: &Fan, report: &RecipeReport) -> String {
    let pts: Vec<V2> = fan.rays.iter().map(|r| r.point).collect();
    let (lo, hi) = bounds(&pts);
    let w = (hi.0 - lo.0) * SCALE + 2 * MARGIN;
    let h = (hi.1 - lo.1) * SCALE + 2 * MARGIN;
    let at = |p: V2| ((p.0 - lo.0) * SCALE + MARGIN, (hi.1 - p.1) * SCALE + MARGIN);
    let mut s = String::new();
    writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#).unwrap();
    writeln!(s, r#"<g stroke="black" stroke-width="1.5">"#).unwrap();
    for (a, b) in fan_edges(fan) {
        let ((x1, y1), (x2, y2)) = (at(pts[a]), at(pts[b]));
        writeln!(s, r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>"#).unwrap();
    }
    writeln!(s, "</g>").unwrap();
    let lab = labels(report);
    writeln!(s, r#"<g font-family="sans-serif" font-size="11" text-anchor="middle">"#).unwrap();
    for (seg, text) in &lab.segments {
        let [a, b] = fan.segments[*seg].rays;
        let ((x1, y1), (x2, y2)) = (at(pts[a]), at(pts[b]));
        let (x, y) = ((x1 + x2) as f64 / 2.0, (y1 + y2) as f64 / 2.0);
        let bw = 8.0 + 6.5 * text.len() as f64;
        writeln!(
            s,
            r#"<rect x="{:.1}" y="{:.1}" width="{bw:.1}" height="14" fill="white" stroke="black"/><text class="segment-label" data-segment="{seg}" x="{x:.1}" y="{:.1}">{text}</text>"#,
            x - bw / 2.0,
            y - 7.0,
            y + 4.0
        )
        .unwrap();
    }
    for (k, &p) in pts.iter().enumerate() {
        let (x, y) = at(p);
        match lab.points.iter().find(|(r, _)| *r == k) {
            Some((_, text)) => {
                let rad = 9 + 3 * text.len();
                writeln!(
                    s,
                    r#"<circle cx="{x}" cy="{y}" r="{rad}" fill="white" stroke="black"/><text class="point-label" data-ray="{k}" x="{x}" y="{}">{text}</text>"#,
                    y + 4
                )
                .unwrap();
            }
            None => writeln!(s, r#"<circle cx="{x}" cy="{y}" r="4" fill="white" stroke="black"/>"#).unwrap(),
        }
    }
    writeln!(s, "</g>\n</svg>").unwrap();
    s
}

fn fan_tikz(fan: &Fan, report: &RecipeReport) -> String {
    let pts: Vec<V2> = fan.rays.iter().map(|r| r.point).collect();
    let lab = labels(report);
    let mut s = String::from("\\begin{tikzpicture}[scale=1.5, every node/.style={scale=1}]\n");
    let c = |p: V2| format!("({},{})", p.0, p.1);
    for (a, b) in fan_edges(fan) {
        let seg = fan.segment(a, b).and_then(|k| lab.segments.iter().find(|(s, _)| *s == k));
        match seg {
            Some((_, text)) => writeln!(
                s,
                "\\draw {} -- node [rectangle,draw,fill=white,sloped,inner sep=1pt] {{\\tiny {text}}} {};",
                c(pts[a]),
                c(pts[b])
            ),
            None => writeln!(s, "\\draw {} -- {};", c(pts[a]), c(pts[b])),
        }
        .unwrap();
    }
    for (k, &p) in pts.iter().enumerate() {
        match lab.points.iter().find(|(r, _)| *r == k) {
            Some((_, text)) => writeln!(
                s,
                "\\draw {} node[circle,draw,fill=white,minimum size=10pt,inner sep=1pt] {{\\tiny {text}}};",
                c(p)
            ),
            None => writeln!(s, "\\draw {} node[circle,draw,fill=white,minimum size=5pt,inner sep=1pt] {{}};", c(p)),
        }
        .unwrap();
    }
    s.push_str("\\end{tikzpicture}\n");
    s
}

fn bounds(pts: &[V2]) -> (V2, V2) {
    pts.iter().fold((V2(i64::MAX, i64::MAX), V2(i64::MIN, i64::MIN)), |(lo, hi), p| {
        (V2(lo.0.min(p.0), lo.1.min(p.1)), V2(hi.0.max(p.0), hi.1.max(p.1)))
    })
}

/// Tiles of `Hex(σ)` placed by their hexagon offsets, with the boundary cycle on top.
/// Needs node positions.
pub fn render_hexagon(t: &Tiling, hex: &Hexagon) -> Result<String> {
    let pos: Vec<[f64; 2]> = t
        .model()
        .nodes
        .iter()
        .map(|n| n.position)
        .collect::<Option<_>>()
        .ok_or_else(|| Error::input("/nodes", "drawing a hexagon needs a position on every node"))?;
    let node_pos = |v: usize, at: V2| [pos[v][0] + at.0 as f64, pos[v][1] + at.1 as f64];
    let mut polys = Vec::new();
    for (i, tile) in t.tiles().iter().enumerate() {
        let corners: Vec<[f64; 2]> = tile
            .darts
            .iter()
            .zip(&tile.corners)
            .map(|(&d, &c)| node_pos(t.dart_ends(d).0, c + hex.offsets[i]))
            .collect();
        polys.push(corners);
    }
    let boundary: Vec<[f64; 2]> = hex.cycle.iter().map(|c| node_pos(c.node, c.at)).collect();
    let all: Vec<&[f64; 2]> = polys.iter().flatten().chain(&boundary).collect();
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for p in &all {
        x0 = x0.min(p[0]);
        y0 = y0.min(p[1]);
        x1 = x1.max(p[0]);
        y1 = y1.max(p[1]);
    }
    let sc = 120.0;
    let m = 20.0;
    let (w, h) = ((x1 - x0) * sc + 2.0 * m, (y1 - y0) * sc + 2.0 * m);
    let at = |p: &[f64; 2]| format!("{:.2},{:.2}", (p[0] - x0) * sc + m, (y1 - p[1]) * sc + m);
    let mut s = String::new();
    writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.2} {h:.2}">"#).unwrap();
    writeln!(s, r#"<g stroke="grey" fill="none" font-family="sans-serif" font-size="12" text-anchor="middle">"#).unwrap();
    for (i, poly) in polys.iter().enumerate() {
        let pts: Vec<String> = poly.iter().map(at).collect();
        let cx = poly.iter().map(|p| p[0]).sum::<f64>() / poly.len() as f64;
        let cy = poly.iter().map(|p| p[1]).sum::<f64>() / poly.len() as f64;
        writeln!(s, r#"<polygon class="tile" data-tile="{i}" points="{}"/>"#, pts.join(" ")).unwrap();
        writeln!(s, r#"<text x="{:.2}" y="{:.2}" fill="black" stroke="none">{i}</text>"#, (cx - x0) * sc + m, (y1 - cy) * sc + m + 4.0).unwrap();
    }
    let pts: Vec<String> = boundary.iter().map(at).collect();
    writeln!(s, r#"<polygon class="hexagon" points="{}" stroke="black" stroke-width="2.5"/>"#, pts.join(" ")).unwrap();
    writeln!(s, "</g>\n</svg>").unwrap();
    Ok(s)
}
