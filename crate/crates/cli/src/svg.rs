//! Standalone SVG rendering of the discriminant.
//!
//! The plot shows the trace curve over an energy range, dashed reference
//! lines at ±2, and the bands as bold segments on the energy axis with
//! their edges labeled.  Output is assembled from `format!` primitives
//! with fixed-precision coordinates (two decimals; edge labels four), so
//! a given model, range, and grid always produce the same bytes.

use std::fmt::Write;

use jacobi_spectra::{discriminant_eval, BandStructure, OperatorSpec};

const WIDTH: f64 = 840.0;
const HEIGHT: f64 = 520.0;
const MARGIN_LEFT: f64 = 60.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 20.0;
const MARGIN_BOTTOM: f64 = 50.0;

/// Largest |trace| the vertical scale will stretch to accommodate; the
/// curve is clipped beyond it so steep gap growth cannot flatten the bands.
const MAX_VERTICAL_SPAN: f64 = 8.0;

fn escape_xml(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

/// Render the discriminant of `spec` over `[e_lo, e_hi]` with `grid`
/// sample points (at least 2, enforced by the caller).
pub fn discriminant_plot(
    spec: &OperatorSpec,
    bands: &BandStructure,
    e_lo: f64,
    e_hi: f64,
    grid: usize,
) -> String {
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;

    let samples: Vec<(f64, f64)> = (0..grid)
        .map(|i| {
            let e = e_lo + (e_hi - e_lo) * i as f64 / (grid - 1) as f64;
            (e, discriminant_eval(spec, e))
        })
        .collect();

    let peak = samples.iter().fold(
        2.2f64,
        |m, &(_, v)| if v.is_finite() { m.max(v.abs()) } else { m },
    );
    let v_span = (1.15 * peak).min(MAX_VERTICAL_SPAN);

    let x_of = |e: f64| MARGIN_LEFT + (e - e_lo) / (e_hi - e_lo) * plot_w;
    let y_of = |v: f64| MARGIN_TOP + plot_h / 2.0 - v / v_span * (plot_h / 2.0);

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH:.0}" height="{HEIGHT:.0}" viewBox="0 0 {WIDTH:.0} {HEIGHT:.0}">"#
    );
    let _ = writeln!(
        svg,
        r##"<rect width="{WIDTH:.0}" height="{HEIGHT:.0}" fill="#ffffff"/>"##
    );
    let _ = writeln!(
        svg,
        r#"<clipPath id="plot"><rect x="{MARGIN_LEFT:.2}" y="{MARGIN_TOP:.2}" width="{plot_w:.2}" height="{plot_h:.2}"/></clipPath>"#
    );

    // Frame and title.
    let _ = writeln!(
        svg,
        r##"<rect x="{MARGIN_LEFT:.2}" y="{MARGIN_TOP:.2}" width="{plot_w:.2}" height="{plot_h:.2}" fill="none" stroke="#cccccc" stroke-width="1"/>"##
    );
    let _ = writeln!(
        svg,
        r##"<text x="{:.2}" y="{:.2}" font-family="monospace" font-size="13" fill="#333333">{} (period {})</text>"##,
        MARGIN_LEFT,
        MARGIN_TOP - 6.0,
        escape_xml(&spec.label),
        spec.period
    );

    // Reference lines at trace = +2, 0, -2.
    for (level, label) in [(2.0, "+2"), (-2.0, "-2")] {
        let y = y_of(level);
        let _ = writeln!(
            svg,
            r##"<line x1="{MARGIN_LEFT:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#999999" stroke-width="1" stroke-dasharray="6,4"/>"##,
            MARGIN_LEFT + plot_w
        );
        let _ = writeln!(
            svg,
            r##"<text x="{:.2}" y="{:.2}" font-family="monospace" font-size="11" fill="#666666">{label}</text>"##,
            MARGIN_LEFT + plot_w + 3.0,
            y + 4.0
        );
    }
    let axis_y = y_of(0.0);
    let _ = writeln!(
        svg,
        r##"<line x1="{MARGIN_LEFT:.2}" y1="{axis_y:.2}" x2="{:.2}" y2="{axis_y:.2}" stroke="#bbbbbb" stroke-width="1"/>"##,
        MARGIN_LEFT + plot_w
    );

    // The discriminant curve.
    let mut points = String::new();
    for &(e, v) in &samples {
        let _ = write!(points, "{:.2},{:.2} ", x_of(e), y_of(v));
    }
    let _ = writeln!(
        svg,
        r##"<polyline points="{}" fill="none" stroke="#2b6cb0" stroke-width="1.5" clip-path="url(#plot)"/>"##,
        points.trim_end()
    );

    // Bands as bold segments on the axis, edges ticked and labeled.
    for band in &bands.bands {
        let (x1, x2) = (x_of(band.left), x_of(band.right));
        let _ = writeln!(
            svg,
            r##"<line x1="{x1:.2}" y1="{axis_y:.2}" x2="{x2:.2}" y2="{axis_y:.2}" stroke="#1a1a1a" stroke-width="6" clip-path="url(#plot)"/>"##
        );
        for (edge, x) in [(band.left, x1), (band.right, x2)] {
            if x < MARGIN_LEFT - 0.01 || x > MARGIN_LEFT + plot_w + 0.01 {
                continue;
            }
            let _ = writeln!(
                svg,
                r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#1a1a1a" stroke-width="1"/>"##,
                MARGIN_TOP + plot_h,
                MARGIN_TOP + plot_h + 5.0
            );
            let _ = writeln!(
                svg,
                r##"<text x="{x:.2}" y="{:.2}" font-family="monospace" font-size="10" fill="#333333" text-anchor="middle">{edge:.4}</text>"##,
                MARGIN_TOP + plot_h + 17.0
            );
        }
    }

    svg.push_str("</svg>\n");
    svg
}
