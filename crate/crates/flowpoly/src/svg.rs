//! SVG rendering of limiting curves with zeros overlaid, in the Q plane and
//! the 1/Q plane.

use std::fmt::Write;

use num_complex::Complex64;

use flowpoly_core::spectra::{CurveTrace, Window};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Plane {
    Q,
    Inverse,
    Both,
}

const PANEL: f64 = 480.0;
const MARGIN: f64 = 36.0;

struct View {
    re0: f64,
    re1: f64,
    im0: f64,
    im1: f64,
    dx: f64,
}

impl View {
    fn fit(points: &[Complex64]) -> View {
        let (mut a, mut b, mut c, mut d) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for p in points.iter().filter(|p| p.is_finite()) {
            a = a.min(p.re);
            b = b.max(p.re);
            c = c.min(p.im);
            d = d.max(p.im);
        }
        if !a.is_finite() {
            (a, b, c, d) = (-1.0, 1.0, -1.0, 1.0);
        }
        let pad = 0.05 * (b - a).max(d - c).max(1e-9);
        View { re0: a - pad, re1: b + pad, im0: c - pad, im1: d + pad, dx: 0.0 }
    }

    fn from_window(w: &Window) -> View {
        View { re0: w.re0, re1: w.re1, im0: w.im0, im1: w.im1, dx: 0.0 }
    }

    fn map(&self, z: Complex64) -> (f64, f64) {
        let s = (PANEL / (self.re1 - self.re0)).min(PANEL / (self.im1 - self.im0));
        (self.dx + MARGIN + (z.re - self.re0) * s, MARGIN + (self.im1 - z.im) * s)
    }
}

const COLOURS: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

fn panel(out: &mut String, view: &View, title: &str, curve: &CurveTrace, zeros: &[Complex64], f: impl Fn(Complex64) -> Complex64) {
    let (x0, y0) = view.map(Complex64::new(view.re0, view.im1));
    let (x1, y1) = view.map(Complex64::new(view.re1, view.im0));
    let _ = writeln!(out, r##"<rect x="{x0:.2}" y="{y0:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#888"/>"##, x1 - x0, y1 - y0);
    let _ = writeln!(out, r#"<text x="{x0:.2}" y="{:.2}" font-size="13">{title}</text>"#, y0 - 8.0);
    if view.im0 < 0.0 && view.im1 > 0.0 {
        let (a, b) = view.map(Complex64::new(view.re0, 0.0));
        let (c, _) = view.map(Complex64::new(view.re1, 0.0));
        let _ = writeln!(out, r##"<line x1="{a:.2}" y1="{b:.2}" x2="{c:.2}" y2="{b:.2}" stroke="#ccc"/>"##);
    }
    if view.re0 < 0.0 && view.re1 > 0.0 {
        let (a, b) = view.map(Complex64::new(0.0, view.im1));
        let (_, d) = view.map(Complex64::new(0.0, view.im0));
        let _ = writeln!(out, r##"<line x1="{a:.2}" y1="{b:.2}" x2="{a:.2}" y2="{d:.2}" stroke="#ccc"/>"##);
    }
    for (i, line) in curve.polylines.iter().enumerate() {
        let pts: Vec<String> = line
            .iter()
            .map(|p| f(p.q))
            .filter(|z| z.is_finite())
            .map(|z| {
                let (x, y) = view.map(z);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
            pts.join(" "),
            COLOURS[i % COLOURS.len()]
        );
    }
    for z in zeros.iter().map(|&z| f(z)).filter(|z| z.is_finite()) {
        if z.re < view.re0 || z.re > view.re1 || z.im < view.im0 || z.im > view.im1 {
            continue;
        }
        let (x, y) = view.map(z);
        let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2" fill="black"/>"#);
    }
}

pub fn render(curve: &CurveTrace, zeros: &[Complex64], window: &Window, plane: Plane, title: &str) -> String {
    let panels: Vec<Plane> = match plane {
        Plane::Both => vec![Plane::Q, Plane::Inverse],
        p => vec![p],
    };
    let w = panels.len() as f64 * (PANEL + 2.0 * MARGIN);
    let h = PANEL + 2.0 * MARGIN;
    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}">"#);
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (i, p) in panels.iter().enumerate() {
        let dx = i as f64 * (PANEL + 2.0 * MARGIN);
        match p {
            Plane::Q | Plane::Both => {
                let view = View { dx, ..View::from_window(window) };
                panel(&mut out, &view, &format!("{title}: Q plane"), curve, zeros, |z| z);
            }
            Plane::Inverse => {
                let inv = |z: Complex64| if z.norm() > 0.0 { 1.0 / z } else { Complex64::new(f64::NAN, 0.0) };
                let mut pts: Vec<Complex64> = curve.points().map(|p| inv(p.q)).collect();
                pts.push(Complex64::new(0.0, 0.0));
                let view = View { dx, ..View::fit(&pts) };
                panel(&mut out, &view, &format!("{title}: 1/Q plane"), curve, zeros, inv);
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use flowpoly_core::spectra::{CurvePoint, SectorId};

    #[test]
    fn renders_both_panels() {
        let pair = (SectorId::Trivial, SectorId::Trivial);
        let line = vec![
            CurvePoint { q: Complex64::new(1.0, 0.0), pair: pair.clone() },
            CurvePoint { q: Complex64::new(2.0, 1.0), pair },
        ];
        let curve = CurveTrace { polylines: vec![line], unresolved: vec![] };
        let w = Window { re0: 0.0, re1: 3.0, im0: -2.0, im1: 2.0 };
        let s = render(&curve, &[Complex64::new(1.5, 0.5)], &w, Plane::Both, "test");
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
        assert_eq!(s.matches("<polyline").count(), 2);
        assert_eq!(s.matches("<circle").count(), 2);
        assert!(s.contains("1/Q plane"));
    }
}
