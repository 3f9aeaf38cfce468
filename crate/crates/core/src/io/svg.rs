//! SVG pictures of quotient complexes of rank 1 and 2.

use std::fmt::Write;

use num_traits::ToPrimitive;

use crate::arrangement::QuotientComplex;
use crate::error::{Error, Result};

const SIZE: f64 = 400.0;

fn f(x: &crate::rational::Q) -> f64 {
    x.to_f64().unwrap_or(0.0)
}

pub fn render(qc: &QuotientComplex) -> Result<String> {
    match qc.m() {
        1 => Ok(render_circle(qc)),
        2 => Ok(render_torus(qc)),
        m => Err(Error::Unsupported(format!("no picture for lattice rank {m}"))),
    }
}

fn header(out: &mut String) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
}

fn render_circle(qc: &QuotientComplex) -> String {
    let period = qc.translation[0][0] as f64;
    let (cx, cy, r) = (SIZE / 2.0, SIZE / 2.0, SIZE * 0.4);
    let at = |t: f64| {
        let a = std::f64::consts::TAU * t / period;
        (cx + r * a.cos(), cy - r * a.sin())
    };
    let mut out = String::new();
    header(&mut out);
    let _ = writeln!(out, r#"<circle cx="{cx}" cy="{cy}" r="{r}" fill="none" stroke="black"/>"#);
    for c in &qc.cells {
        let (x, y) = at(f(&c.point[0]));
        if c.dim == 0 {
            let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="black"/>"#);
        }
        let (lx, ly) = (cx + (x - cx) * 1.15, cy + (y - cy) * 1.15);
        let _ = writeln!(
            out,
            r#"<text x="{lx:.2}" y="{ly:.2}" font-size="10" text-anchor="middle">{}</text>"#,
            label_text(qc, c.id)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn render_torus(qc: &QuotientComplex) -> String {
    let k = &qc.translation;
    // bounding box of the fundamental parallelogram
    let corners = [(0, 0), (1, 0), (0, 1), (1, 1)].map(|(a, b)| {
        (
            (k[0][0] * a + k[0][1] * b) as f64,
            (k[1][0] * a + k[1][1] * b) as f64,
        )
    });
    let (x0, x1) = corners.iter().fold((f64::MAX, f64::MIN), |(l, h), p| (l.min(p.0), h.max(p.0)));
    let (y0, y1) = corners.iter().fold((f64::MAX, f64::MIN), |(l, h), p| (l.min(p.1), h.max(p.1)));
    let scale = SIZE * 0.8 / (x1 - x0).max(y1 - y0).max(1.0);
    let pad = SIZE * 0.1;
    let map = |x: f64, y: f64| (pad + (x - x0) * scale, SIZE - pad - (y - y0) * scale);
    let mut out = String::new();
    header(&mut out);
    let poly: Vec<String> = [corners[0], corners[1], corners[3], corners[2]]
        .iter()
        .map(|&(x, y)| {
            let (a, b) = map(x, y);
            format!("{a:.2},{b:.2}")
        })
        .collect();
    let _ = writeln!(
        out,
        r#"<polygon points="{}" fill="none" stroke="gray" stroke-dasharray="4"/>"#,
        poly.join(" ")
    );
    for c in qc.cells.iter().filter(|c| c.dim == 1) {
        if let [a, b] = &c.vertices[..] {
            let (ax, ay) = map(f(&a[0]), f(&a[1]));
            let (bx, by) = map(f(&b[0]), f(&b[1]));
            let _ = writeln!(
                out,
                r#"<line x1="{ax:.2}" y1="{ay:.2}" x2="{bx:.2}" y2="{by:.2}" stroke="black"/>"#
            );
        }
    }
    for c in &qc.cells {
        let (x, y) = map(f(&c.point[0]), f(&c.point[1]));
        if c.dim == 0 {
            let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="black"/>"#);
        }
        let _ = writeln!(
            out,
            r#"<text x="{x:.2}" y="{:.2}" font-size="9" text-anchor="middle">{}</text>"#,
            y - 5.0,
            label_text(qc, c.id)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn label_text(qc: &QuotientComplex, id: usize) -> String {
    crate::lattice::LaurentMonomial::xy(qc.cells[id].label.clone())
        .to_string()
        .replace('<', "&lt;")
}
