//! PTS landmark files:
//!
//! ```text
//! version: 1
//! n_points: 20
//! {
//! 159.128 108.541
//! ...
//! }
//! ```
//!
//! Leading and trailing whitespace on every line is ignored, as are blank
//! lines. Anything after the expected tokens of a line is an error.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::Shape;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub fn read_pts<T: Scalar>(path: impl AsRef<Path>) -> Result<Shape<T>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_pts(&text).map_err(|(line, msg)| Error::parse(path, line, msg))
}

pub fn write_pts<T: Scalar>(path: impl AsRef<Path>, shape: &Shape<T>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_pts(shape)).map_err(|e| Error::io(path, e))
}

pub fn format_pts<T: Scalar>(shape: &Shape<T>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "version: 1");
    let _ = writeln!(out, "n_points: {}", shape.n_points());
    out.push_str("{\n");
    for (x, y) in shape.points() {
        let _ = writeln!(out, "{x} {y}");
    }
    out.push_str("}\n");
    out
}

/// Parses PTS text. Errors carry the 1-based line number.
pub fn parse_pts<T: Scalar>(text: &str) -> std::result::Result<Shape<T>, (usize, String)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let mut next = |what: &str| {
        lines
            .next()
            .ok_or_else(|| (text.lines().count().max(1), format!("unexpected end of file, expected {what}")))
    };

    let (ln, line) = next("version header")?;
    let version = header_value(line, "version").map_err(|m| (ln, m))?;
    if version != "1" {
        return Err((ln, format!("unsupported version {version}")));
    }

    let (ln, line) = next("n_points header")?;
    let count: usize = header_value(line, "n_points")
        .map_err(|m| (ln, m))?
        .parse()
        .map_err(|_| (ln, "n_points is not a non-negative integer".to_string()))?;

    let (ln, line) = next("'{'")?;
    if line != "{" {
        return Err((ln, format!("expected '{{', found {line:?}")));
    }

    let mut points = Vec::with_capacity(count);
    for _ in 0..count {
        let (ln, line) = next("a point")?;
        let mut tokens = line.split_whitespace();
        let mut coord = |axis: &str| -> std::result::Result<T, (usize, String)> {
            let tok = tokens
                .next()
                .ok_or_else(|| (ln, format!("missing {axis} coordinate")))?;
            tok.parse::<T>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| (ln, format!("invalid {axis} coordinate {tok:?}")))
        };
        let x = coord("x")?;
        let y = coord("y")?;
        if let Some(extra) = tokens.next() {
            return Err((ln, format!("unexpected trailing content {extra:?}")));
        }
        points.push((x, y));
    }

    let (ln, line) = next("'}'")?;
    if line != "}" {
        return Err((ln, format!("expected '}}', found {line:?}")));
    }
    if let Some((ln, line)) = lines.next() {
        return Err((ln, format!("unexpected content after '}}': {line:?}")));
    }
    Shape::from_points(&points).map_err(|e| (ln, e.to_string()))
}

fn header_value<'a>(line: &'a str, key: &str) -> std::result::Result<&'a str, String> {
    let (k, v) = line
        .split_once(':')
        .ok_or_else(|| format!("expected '{key}: <value>', found {line:?}"))?;
    if k.trim() != key {
        return Err(format!("expected key {key:?}, found {:?}", k.trim()));
    }
    let mut parts = v.split_whitespace();
    let value = parts
        .next()
        .ok_or_else(|| format!("missing value for {key}"))?;
    if let Some(extra) = parts.next() {
        return Err(format!("unexpected trailing content {extra:?}"));
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "version: 1\nn_points: 3\n{\n1.5 2\n  3 4.25  \n\n5 6\n}\n";

    #[test]
    fn parses_whitespace_tolerant_input() {
        let s: Shape<f64> = parse_pts(SAMPLE).unwrap();
        assert_eq!(s.coords().to_vec(), vec![1.5, 2.0, 3.0, 4.25, 5.0, 6.0]);
    }

    #[test]
    fn trailing_comment_rejected() {
        let text = SAMPLE.replace("5 6", "5 6 # chin");
        let err = parse_pts::<f64>(&text).unwrap_err();
        assert_eq!(err.0, 7);
        let text = SAMPLE.replace("n_points: 3", "n_points: 3 // three");
        assert_eq!(parse_pts::<f64>(&text).unwrap_err().0, 2);
    }

    #[test]
    fn structural_errors() {
        assert!(parse_pts::<f64>("").is_err());
        assert!(parse_pts::<f64>(&SAMPLE.replace("version: 1", "version: 2")).is_err());
        assert!(parse_pts::<f64>(&SAMPLE.replace("n_points: 3", "n_points: 4")).is_err());
        assert!(parse_pts::<f64>(&SAMPLE.replace('}', "")).is_err());
        assert!(parse_pts::<f64>(&SAMPLE.replace("1.5", "abc")).is_err());
        assert!(parse_pts::<f64>(&format!("{SAMPLE}extra\n")).is_err());
    }

    #[test]
    fn round_trip() {
        let s: Shape<f64> = parse_pts(SAMPLE).unwrap();
        let again: Shape<f64> = parse_pts(&format_pts(&s)).unwrap();
        assert_eq!(s, again);
    }
}
