//! Four-panel SVG: `L f`, `U f`, `LU f`, `UL f`, each over a dotted `f`.

use std::fmt::Write;

use lulu::lulu::{SemigroupElement, SmootherConfig};
use lulu::PLFunction;

const PANEL_W: f64 = 400.0;
const PANEL_H: f64 = 260.0;
const MARGIN: f64 = 30.0;

struct Frame {
    x0: f64,
    y0: f64,
    a: f64,
    b: f64,
    lo: f64,
    hi: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        self.x0 + MARGIN + (x - self.a) / (self.b - self.a) * (PANEL_W - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        self.y0 + PANEL_H - MARGIN - (y - self.lo) / (self.hi - self.lo) * (PANEL_H - 2.0 * MARGIN)
    }
}

/// Path through the pieces, with vertical strokes at jumps, and the point
/// values that differ from both neighbouring limits.
fn trace(f: &PLFunction, fr: &Frame) -> (String, Vec<(f64, f64)>) {
    let xs = f.breakpoints();
    let mut d = String::new();
    for i in 0..f.num_pieces() {
        let (start, end) = (f.right_limits()[i], f.left_limits()[i]);
        let cmd = if i == 0 { 'M' } else { 'L' };
        write!(
            d,
            "{cmd}{:.3},{:.3} L{:.3},{:.3} ",
            fr.px(xs[i]),
            fr.py(start),
            fr.px(xs[i + 1]),
            fr.py(end)
        )
        .unwrap();
    }
    let mut dots = vec![];
    for (j, (&x, &v)) in xs.iter().zip(f.values()).enumerate() {
        let left = j.checked_sub(1).map(|p| f.left_limits()[p]);
        let right = f.right_limits().get(j).copied();
        if left.is_none_or(|l| l != v) && right.is_none_or(|r| r != v) {
            dots.push((fr.px(x), fr.py(v)));
        }
    }
    (d.trim_end().to_string(), dots)
}

fn draw(out: &mut String, f: &PLFunction, fr: &Frame, style: &str) {
    let (d, dots) = trace(f, fr);
    writeln!(out, r#"    <path d="{d}" fill="none" {style}/>"#).unwrap();
    for (x, y) in dots {
        writeln!(out, r#"    <circle cx="{x:.3}" cy="{y:.3}" r="2.5" fill="black"/>"#).unwrap();
    }
}

pub fn render(f: &PLFunction, cfg: &SmootherConfig) -> String {
    use SemigroupElement::*;
    let (a, b) = f.domain();
    let (mut lo, mut hi) = (f.inf(), f.sup());
    if hi - lo < 1e-12 {
        lo -= 1.0;
        hi += 1.0;
    }
    let pad = 0.05 * (hi - lo);
    let (lo, hi) = (lo - pad, hi + pad);

    let mut out = String::new();
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = 2.0 * PANEL_W,
        h = 2.0 * PANEL_H
    )
    .unwrap();
    writeln!(out, r#"  <rect width="100%" height="100%" fill="white"/>"#).unwrap();
    for (k, e) in [L, U, LU, UL].into_iter().enumerate() {
        let fr = Frame {
            x0: (k % 2) as f64 * PANEL_W,
            y0: (k / 2) as f64 * PANEL_H,
            a,
            b,
            lo,
            hi,
        };
        let g = e.apply(f, cfg);
        writeln!(out, r#"  <g id="panel-{}">"#, e.name()).unwrap();
        writeln!(
            out,
            r##"    <rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="none" stroke="#999"/>"##,
            fr.x0 + MARGIN,
            fr.y0 + MARGIN,
            PANEL_W - 2.0 * MARGIN,
            PANEL_H - 2.0 * MARGIN
        )
        .unwrap();
        writeln!(
            out,
            r#"    <text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="14">{} f, δ = {}</text>"#,
            fr.x0 + MARGIN,
            fr.y0 + MARGIN - 8.0,
            e.name(),
            cfg.delta()
        )
        .unwrap();
        draw(&mut out, f, &fr, r##"stroke="#555" stroke-width="1" stroke-dasharray="2,3""##);
        draw(&mut out, &g, &fr, r##"stroke="#c03" stroke-width="1.6""##);
        writeln!(out, "  </g>").unwrap();
    }
    writeln!(out, "</svg>").unwrap();
    out
}
