//! SVG rendering. Planar instances draw the simplex, the exit facet, `G`, the
//! vertex cones and the law's vertex values; in three dimensions the same
//! picture is projected onto the three coordinate planes.

use std::fmt::Write;
use std::path::Path;

use rcp_core::report::ReportFile;
use rcp_core::{Scalar, Simplex, Tolerances};

use crate::commands;
use crate::io;

const PANEL: f64 = 360.0;
const MARGIN: f64 = 30.0;

struct Scene {
    simplex: Simplex<f64>,
    g: Vec<Vec<f64>>,
    /// Law vertices paired with their values.
    arrows: Vec<(Vec<f64>, Vec<f64>)>,
    title: String,
}

pub fn render(instance: &Path, report: &Path) -> Result<String, String> {
    let inst = commands::load_instance(instance)?;
    let tol = Tolerances::default();
    let problem = inst.to_problem::<f64>(&tol).map_err(|e| format!("{}: {e}", instance.display()))?;
    let text = io::read(report)?;
    let report = ReportFile::from_json(&text).map_err(|e| format!("{}: {e}", report.display()))?;
    let parse = |rows: &[Vec<String>], what: &str| -> Result<Vec<Vec<f64>>, String> {
        rows.iter()
            .map(|r| {
                r.iter()
                    .map(|x| f64::parse(x).ok_or_else(|| format!("{what}: {x:?} is not a number")))
                    .collect()
            })
            .collect()
    };
    let g = match &report.polytope {
        Some(p) => parse(&p.vertices, "polytope.vertices")?,
        None => Vec::new(),
    };
    let arrows = match &report.law {
        Some(l) => parse(&l.vertices, "law.vertices")?
            .into_iter()
            .zip(parse(&l.values, "law.values")?)
            .collect(),
        None => Vec::new(),
    };
    let tag = report.case.as_ref().map(|c| c.tag.to_string()).unwrap_or_default();
    let scene = Scene {
        simplex: problem.simplex,
        g,
        arrows,
        title: format!("{} {} {}", report.instance.clone().unwrap_or_default(), tag, report.verdict.as_str()),
    };
    match scene.simplex.dim() {
        2 => Ok(planar(&scene, &tol)),
        3 => Ok(projected(&scene)),
        n => Err(format!("plotting supports n = 2 or 3, got n = {n}")),
    }
}

/// Affine map from a bounding box onto one panel; `y` points up.
struct Frame {
    lo: [f64; 2],
    scale: f64,
    dx: f64,
}

impl Frame {
    fn fit(points: &[[f64; 2]], dx: f64) -> Self {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in points {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-12);
        let pad = 0.15 * span;
        Self {
            lo: [lo[0] - pad, lo[1] - pad],
            scale: (PANEL - 2.0 * MARGIN) / (span + 2.0 * pad),
            dx,
        }
    }

    fn map(&self, p: [f64; 2]) -> (f64, f64) {
        (
            self.dx + MARGIN + (p[0] - self.lo[0]) * self.scale,
            PANEL - MARGIN - (p[1] - self.lo[1]) * self.scale,
        )
    }
}

fn header(out: &mut String, width: f64, title: &str) {
    let _ = writeln!(
        out,
        r##"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">
<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="6" markerHeight="6" orient="auto"><path d="M0,0 L10,5 L0,10 z" fill="#2a7f2a"/></marker></defs>
<rect width="100%" height="100%" fill="white"/>
<text x="8" y="16" font-family="sans-serif" font-size="12">{t}</text>"##,
        w = width,
        h = PANEL,
        t = escape(title),
    );
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn polygon(out: &mut String, frame: &Frame, pts: &[[f64; 2]], style: &str) {
    let coords: Vec<String> = pts
        .iter()
        .map(|&p| {
            let (x, y) = frame.map(p);
            format!("{x:.2},{y:.2}")
        })
        .collect();
    let _ = writeln!(out, r#"<polygon points="{}" {style}/>"#, coords.join(" "));
}

fn line(out: &mut String, frame: &Frame, a: [f64; 2], b: [f64; 2], style: &str) {
    let (x1, y1) = frame.map(a);
    let (x2, y2) = frame.map(b);
    let _ = writeln!(out, r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" {style}/>"#);
}

fn dot(out: &mut String, frame: &Frame, p: [f64; 2], style: &str) {
    let (x, y) = frame.map(p);
    let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3.5" {style}/>"#);
}

/// Convex hull order for at most a handful of planar points.
fn hull_order(pts: &[[f64; 2]]) -> Vec<[f64; 2]> {
    if pts.len() < 3 {
        return pts.to_vec();
    }
    let c = [
        pts.iter().map(|p| p[0]).sum::<f64>() / pts.len() as f64,
        pts.iter().map(|p| p[1]).sum::<f64>() / pts.len() as f64,
    ];
    let mut sorted = pts.to_vec();
    sorted.sort_by(|a, b| {
        let ta = (a[1] - c[1]).atan2(a[0] - c[0]);
        let tb = (b[1] - c[1]).atan2(b[0] - c[0]);
        ta.total_cmp(&tb)
    });
    sorted
}

fn arrow_scale(scene: &Scene) -> f64 {
    let peak = scene
        .arrows
        .iter()
        .map(|(_, v)| v.iter().map(|c| c * c).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    if peak > 0.0 {
        0.25 * scene.simplex.diameter() / peak
    } else {
        0.0
    }
}

fn planar(scene: &Scene, tol: &Tolerances) -> String {
    let s = &scene.simplex;
    let vertices: Vec<[f64; 2]> = (0..=2).map(|i| [s.vertex(i)[0], s.vertex(i)[1]]).collect();
    let frame = Frame::fit(&vertices, 0.0);
    let mut out = String::new();
    header(&mut out, PANEL, &scene.title);
    polygon(&mut out, &frame, &vertices, r##"fill="#f4f4f4" stroke="black" stroke-width="1.2""##);
    line(&mut out, &frame, vertices[1], vertices[2], r##"stroke="#c0392b" stroke-width="3""##);

    let g: Vec<[f64; 2]> = scene.g.iter().map(|p| [p[0], p[1]]).collect();
    match g.len() {
        0 => {}
        1 => {}
        2 => line(&mut out, &frame, g[0], g[1], r##"stroke="#1f4e9c" stroke-width="2.5""##),
        _ => polygon(&mut out, &frame, &hull_order(&g), r##"fill="#1f4e9c" fill-opacity="0.25" stroke="#1f4e9c""##),
    }

    let ray = 0.2 * s.diameter();
    for p in &scene.g {
        let Ok(cone) = s.tangent_cone(p, tol.bary) else { continue };
        let base = [p[0], p[1]];
        for (_, h) in cone.normals() {
            for sign in [1.0, -1.0] {
                let d = [-h[1] * sign, h[0] * sign];
                if cone.contains(&d, tol.feas) {
                    let norm = (d[0] * d[0] + d[1] * d[1]).sqrt();
                    let tip = [base[0] + ray * d[0] / norm, base[1] + ray * d[1] / norm];
                    line(&mut out, &frame, base, tip, r##"stroke="#888" stroke-dasharray="4 3""##);
                }
            }
        }
    }

    let k = arrow_scale(scene);
    for (p, v) in &scene.arrows {
        let tip = [p[0] + k * v[0], p[1] + k * v[1]];
        line(&mut out, &frame, [p[0], p[1]], tip, r##"stroke="#2a7f2a" stroke-width="2" marker-end="url(#arrow)""##);
    }
    for p in &g {
        dot(&mut out, &frame, *p, r##"fill="#1f4e9c""##);
    }
    out.push_str("</svg>\n");
    out
}

fn projected(scene: &Scene) -> String {
    let s = &scene.simplex;
    let mut out = String::new();
    header(&mut out, 3.0 * PANEL, &scene.title);
    let k = arrow_scale(scene);
    for (panel, (i, j)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
        let proj = |p: &[f64]| [p[i], p[j]];
        let vertices: Vec<[f64; 2]> = (0..=3).map(|v| proj(s.vertex(v))).collect();
        let frame = Frame::fit(&vertices, panel as f64 * PANEL);
        let names = ["x", "y", "z"];
        let (lx, ly) = (panel as f64 * PANEL + MARGIN, PANEL - 8.0);
        let _ = writeln!(
            out,
            r#"<text x="{lx}" y="{ly}" font-family="sans-serif" font-size="11">{}{} plane</text>"#,
            names[i], names[j]
        );
        for a in 0..=3 {
            for b in a + 1..=3 {
                let style = if a == 0 {
                    r##"stroke="black" stroke-width="1""##
                } else {
                    r##"stroke="#c0392b" stroke-width="2""##
                };
                line(&mut out, &frame, vertices[a], vertices[b], style);
            }
        }
        let g: Vec<[f64; 2]> = scene.g.iter().map(|p| proj(p)).collect();
        match g.len() {
            0 | 1 => {}
            2 => line(&mut out, &frame, g[0], g[1], r##"stroke="#1f4e9c" stroke-width="2.5""##),
            _ => polygon(&mut out, &frame, &hull_order(&g), r##"fill="#1f4e9c" fill-opacity="0.25" stroke="#1f4e9c""##),
        }
        for (p, v) in &scene.arrows {
            let base = proj(p);
            let tip = [base[0] + k * v[i], base[1] + k * v[j]];
            line(&mut out, &frame, base, tip, r##"stroke="#2a7f2a" stroke-width="2" marker-end="url(#arrow)""##);
        }
        for p in &g {
            dot(&mut out, &frame, *p, r##"fill="#1f4e9c""##);
        }
    }
    out.push_str("</svg>\n");
    out
}
