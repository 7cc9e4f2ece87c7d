//! Two-dimensional scatter plots as SVG.

use std::fmt::Write as _;

use ndarray::ArrayView2;

const SIZE: f64 = 500.0;
const MARGIN: f64 = 40.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !(hi > lo) {
        // Constant or empty column: centre it.
        let c = if lo.is_finite() { lo } else { 0.0 };
        (c - 1.0, c + 1.0)
    } else {
        (lo, hi)
    }
}

/// Scatter of the first two columns of `points` (a single column is drawn
/// along the x axis). Points are coloured by label when labels are given.
pub fn scatter_svg(points: ArrayView2<'_, f64>, labels: Option<&[i32]>, title: &str) -> String {
    let x = points.column(0);
    let y = (points.ncols() > 1).then(|| points.column(1));
    let (x0, x1) = span(x.iter().copied());
    let (y0, y1) = match &y {
        Some(y) => span(y.iter().copied()),
        None => (-1.0, 1.0),
    };
    let inner = SIZE - 2.0 * MARGIN;
    let px = |v: f64| MARGIN + (v - x0) / (x1 - x0) * inner;
    let py = |v: f64| SIZE - MARGIN - (v - y0) / (y1 - y0) * inner;

    let mut classes: Vec<i32> = labels.map(|l| l.to_vec()).unwrap_or_default();
    classes.sort_unstable();
    classes.dedup();

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{inner}" height="{inner}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>"#,
        SIZE / 2.0,
        escape(title)
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12">component 1</text>"#,
        SIZE / 2.0,
        SIZE - 12.0
    );
    if y.is_some() {
        let _ = writeln!(
            svg,
            r#"<text x="14" y="{0}" text-anchor="middle" font-family="sans-serif" font-size="12" transform="rotate(-90 14 {0})">component 2</text>"#,
            SIZE / 2.0
        );
    }

    for i in 0..points.nrows() {
        let cy = y.as_ref().map_or(0.0, |y| y[i]);
        let colour = labels
            .and_then(|l| classes.iter().position(|&c| c == l[i]))
            .map_or("black", |k| PALETTE[k % PALETTE.len()]);
        let _ = writeln!(
            svg,
            r#"<circle cx="{:.3}" cy="{:.3}" r="2.5" fill="{colour}" fill-opacity="0.7"/>"#,
            px(x[i]),
            py(cy)
        );
    }
    for (k, c) in classes.iter().enumerate() {
        let ly = MARGIN + 14.0 + 16.0 * k as f64;
        let _ = writeln!(
            svg,
            r#"<circle cx="{}" cy="{ly}" r="4" fill="{}"/><text x="{}" y="{}" font-family="sans-serif" font-size="12">class {c}</text>"#,
            MARGIN + 12.0,
            PALETTE[k % PALETTE.len()],
            MARGIN + 22.0,
            ly + 4.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn one_circle_per_point_plus_legend() {
        let p = array![[0.0, 1.0], [2.0, -1.0], [1.0, 0.0]];
        let svg = scatter_svg(p.view(), Some(&[1, 2, 1]), "a < b");
        assert_eq!(svg.matches("<circle").count(), 3 + 2);
        assert!(svg.contains("a &lt; b"));
        assert_eq!(svg, scatter_svg(p.view(), Some(&[1, 2, 1]), "a < b"));
    }

    #[test]
    fn constant_and_single_column_inputs() {
        let p = array![[1.0], [1.0]];
        let svg = scatter_svg(p.view(), None, "flat");
        assert!(!svg.contains("NaN"));
        assert_eq!(svg.matches("<circle").count(), 2);
    }
}
