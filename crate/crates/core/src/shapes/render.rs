//! Line-drawing of a face shape as SVG.

use std::fmt::Write as _;

use super::{LandmarkRoleMap, Shape};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const CANVAS_SIZE: f64 = 400.0;
const MARGIN: f64 = 40.0;
const EYEBALL_RADIUS: f64 = 5.0;
const CONTOUR_SEGMENTS: usize = 48;

fn to_canvas(v: f64) -> f64 {
    MARGIN + v * (CANVAS_SIZE - 2.0 * MARGIN)
}

fn point_list<T: Scalar>(shape: &Shape<T>, idx: &[usize]) -> String {
    idx.iter()
        .map(|&i| {
            let (x, y) = shape.point(i);
            format!("{:.3},{:.3}", to_canvas(x.as_f64()), to_canvas(y.as_f64()))
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Least-squares parabola `y = a x^2 + b x + c` through `points`.
///
/// Needs at least three points with three distinct x values.
pub fn fit_parabola<T: Scalar>(points: &[(T, T)]) -> Result<(T, T, T)> {
    if points.len() < 3 {
        return Err(Error::arg(format!(
            "a parabola needs at least 3 points, got {}",
            points.len()
        )));
    }
    // Normal equations for the basis (x^2, x, 1).
    let mut m = [[T::zero(); 4]; 3];
    for &(x, y) in points {
        let row = [x * x, x, T::one()];
        for r in 0..3 {
            for c in 0..3 {
                m[r][c] = m[r][c] + row[r] * row[c];
            }
            m[r][3] = m[r][3] + row[r] * y;
        }
    }
    let scale = m
        .iter()
        .flat_map(|r| r[..3].iter())
        .fold(T::zero(), |acc, v| acc.max(v.abs()));
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&a, &b| m[a][col].abs().partial_cmp(&m[b][col].abs()).expect("finite"))
            .expect("non-empty range");
        if !(m[pivot][col].abs() > T::tol(1e-12) * scale) {
            return Err(Error::InvalidInput(
                "contour points do not determine a parabola (fewer than 3 distinct x values)".into(),
            ));
        }
        m.swap(col, pivot);
        for r in 0..3 {
            if r != col {
                let f = m[r][col] / m[col][col];
                for c in col..4 {
                    m[r][c] = m[r][c] - f * m[col][c];
                }
            }
        }
    }
    Ok((m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]))
}

/// Renders `shape` (coordinates in `[0, 1]`) on a fixed 400 x 400 canvas:
/// brows, eyes and nose as polylines, eyeballs as circles, the mouth as a
/// closed polygon and the face outline as a parabola fitted to the contour
/// landmarks. Output is byte-for-byte deterministic.
pub fn render_face_svg<T: Scalar>(shape: &Shape<T>, roles: &LandmarkRoleMap) -> Result<String> {
    roles.validate(shape.n_points())?;
    let contour: Vec<(T, T)> = roles.contour.iter().map(|&i| shape.point(i)).collect();
    let (a, b, c) = fit_parabola(&contour)?;
    let (lo, hi) = contour.iter().fold((T::infinity(), T::neg_infinity()), |(lo, hi), &(x, _)| {
        (lo.min(x), hi.max(x))
    });

    let mut svg = String::new();
    let size = CANVAS_SIZE;
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{size}" height="{size}" fill="white"/>"#);
    let _ = writeln!(svg, r#"<g fill="none" stroke="black" stroke-width="2" stroke-linejoin="round">"#);

    for (name, idx) in [
        ("right_brow", &roles.right_brow),
        ("left_brow", &roles.left_brow),
        ("right_eye", &roles.right_eye),
        ("left_eye", &roles.left_eye),
        ("nose", &roles.nose),
    ] {
        if idx.len() >= 2 {
            let _ = writeln!(svg, r#"<polyline id="{name}" points="{}"/>"#, point_list(shape, idx));
        }
    }
    for &i in &roles.eyeballs {
        let (x, y) = shape.point(i);
        let _ = writeln!(
            svg,
            r#"<circle cx="{:.3}" cy="{:.3}" r="{EYEBALL_RADIUS}"/>"#,
            to_canvas(x.as_f64()),
            to_canvas(y.as_f64())
        );
    }
    if roles.mouth.len() >= 2 {
        let _ = writeln!(svg, r#"<polygon id="mouth" points="{}"/>"#, point_list(shape, &roles.mouth));
    }

    let mut d = String::new();
    for s in 0..=CONTOUR_SEGMENTS {
        let x = lo + (hi - lo) * T::count(s) / T::count(CONTOUR_SEGMENTS);
        let y = a * x * x + b * x + c;
        let cmd = if s == 0 { 'M' } else { 'L' };
        let _ = write!(d, "{cmd}{:.3},{:.3} ", to_canvas(x.as_f64()), to_canvas(y.as_f64()));
    }
    let _ = writeln!(svg, r#"<path id="contour" d="{}"/>"#, d.trim_end());
    svg.push_str("</g>\n</svg>\n");
    Ok(svg)
}
