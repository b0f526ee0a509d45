//! Minimal log-log SVG plots for sweep diagnostics.

use std::fmt::Write;

use crate::asymptotics::ConvergenceReport;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const MARGIN: f64 = 64.0;

struct Axes {
    x_lo: f64,
    x_hi: f64,
    y_lo: f64,
    y_hi: f64,
}

impl Axes {
    fn px(&self, x: f64) -> f64 {
        MARGIN + (x.log10() - self.x_lo) / (self.x_hi - self.x_lo) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y.log10() - self.y_lo) / (self.y_hi - self.y_lo) * (HEIGHT - 2.0 * MARGIN)
    }
}

fn decade_range(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    let (lo, hi) = values
        .filter(|v| *v > 0.0 && v.is_finite())
        .map(f64::log10)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return None;
    }
    let (lo, hi) = (lo.floor(), hi.ceil());
    Some(if hi > lo { (lo, hi) } else { (lo, lo + 1.0) })
}

/// Log-log plot of `(x, y)` with an optional slope guide through the last point.
pub fn loglog_svg(title: &str, x_label: &str, y_label: &str, x: &[f64], y: &[f64], guide_slope: Option<f64>) -> String {
    let pts: Vec<(f64, f64)> = x.iter().zip(y).filter(|(a, b)| **a > 0.0 && **b > 0.0).map(|(a, b)| (*a, *b)).collect();
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(svg, r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#, WIDTH / 2.0, escape(title));
    let (Some((x_lo, x_hi)), Some((y_lo, y_hi))) =
        (decade_range(pts.iter().map(|p| p.0)), decade_range(pts.iter().map(|p| p.1)))
    else {
        let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="middle">no positive data</text>"#, WIDTH / 2.0, HEIGHT / 2.0);
        svg.push_str("</svg>\n");
        return svg;
    };
    let axes = Axes { x_lo, x_hi, y_lo, y_hi };
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(svg, r#"<rect x="{left}" y="{top}" width="{}" height="{}" fill="none" stroke="black"/>"#, right - left, bottom - top);
    for k in x_lo as i32..=x_hi as i32 {
        let v = 10f64.powi(k);
        let px = axes.px(v);
        let _ = writeln!(svg, r##"<line x1="{px:.2}" y1="{top}" x2="{px:.2}" y2="{bottom}" stroke="#ddd"/>"##);
        let _ = writeln!(svg, r#"<text x="{px:.2}" y="{}" text-anchor="middle">1e{k}</text>"#, bottom + 16.0);
    }
    for k in y_lo as i32..=y_hi as i32 {
        let v = 10f64.powi(k);
        let py = axes.py(v);
        let _ = writeln!(svg, r##"<line x1="{left}" y1="{py:.2}" x2="{right}" y2="{py:.2}" stroke="#ddd"/>"##);
        let _ = writeln!(svg, r#"<text x="{}" y="{:.2}" text-anchor="end">1e{k}</text>"#, left - 6.0, py + 4.0);
    }
    let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, WIDTH / 2.0, HEIGHT - 16.0, escape(x_label));
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(y_label)
    );
    let line: Vec<String> = pts.iter().map(|(a, b)| format!("{:.2},{:.2}", axes.px(*a), axes.py(*b))).collect();
    let _ = writeln!(svg, r##"<polyline points="{}" fill="none" stroke="#1f77b4" stroke-width="2"/>"##, line.join(" "));
    for (a, b) in &pts {
        let _ = writeln!(svg, r##"<circle cx="{:.2}" cy="{:.2}" r="3" fill="#1f77b4"/>"##, axes.px(*a), axes.py(*b));
    }
    if let (Some(m), Some(&(xa, ya))) = (guide_slope, pts.last()) {
        let xb = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
        let yb = ya * (xb / xa).powf(m);
        if yb > 0.0 && yb.is_finite() {
            let _ = writeln!(
                svg,
                r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#d62728" stroke-dasharray="6 4"/>"##,
                axes.px(xa),
                axes.py(ya),
                axes.px(xb),
                axes.py(yb)
            );
            let _ = writeln!(
                svg,
                r##"<text x="{}" y="{}" fill="#d62728">slope {m:.3}</text>"##,
                right - 90.0,
                top + 18.0
            );
        }
    }
    svg.push_str("</svg>\n");
    svg
}

/// Raw energies against `ε` with the predicted slope as guide.
pub fn sweep_svg(report: &ConvergenceReport) -> String {
    loglog_svg(
        &format!("{} ({} regime)", report.function, report.regime.label),
        "eps",
        "energy",
        &report.eps_ladder,
        &report.raw_energies,
        Some(report.predicted_slope),
    )
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn draws_polyline_and_guide() {
        let x = [0.1, 0.01, 0.001];
        let y = [1e-2, 1e-4, 1e-6];
        let svg = loglog_svg("t<1>", "eps", "E", &x, &y, Some(2.0));
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("<polyline"));
        assert!(svg.contains("slope 2.000"));
        assert!(svg.contains("t&lt;1&gt;"));
        assert_eq!(svg.matches("<circle").count(), 3);
    }

    #[test]
    fn empty_data_is_handled() {
        let svg = loglog_svg("t", "x", "y", &[0.1], &[0.0], None);
        assert!(svg.contains("no positive data"));
    }
}
