//! Netpbm greyscale images, plain (P2) and raw (P5).

use std::fs;
use std::path::Path;

use ndarray::Array1;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PgmImage {
    pub width: usize,
    pub height: usize,
    pub maxval: u16,
    /// Row-major.
    pub pixels: Vec<u16>,
}

impl PgmImage {
    /// Intensities as a row-major vector of reals in `[0, maxval]`.
    pub fn to_vector<T: Scalar>(&self) -> Array1<T> {
        self.pixels.iter().map(|&p| T::lit(f64::from(p))).collect()
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn line(&self) -> usize {
        1 + self.bytes[..self.pos.min(self.bytes.len())]
            .iter()
            .filter(|&&b| b == b'\n')
            .count()
    }

    fn err<V>(&self, msg: impl Into<String>) -> std::result::Result<V, (usize, String)> {
        Err((self.line(), msg.into()))
    }

    /// Skips whitespace and `#` comments running to end of line.
    fn skip_blank(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while self.bytes.get(self.pos).is_some_and(|&c| c != b'\n') {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> std::result::Result<u32, (usize, String)> {
        self.skip_blank();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return match self.bytes.get(self.pos) {
                None => self.err(format!("unexpected end of data, expected {what}")),
                Some(_) => self.err(format!("expected {what}")),
            };
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("ascii digits")
            .parse()
            .or_else(|_| self.err(format!("{what} out of range")))
    }
}

/// Decodes a P2 or P5 image. `Err` carries the line where decoding failed.
pub fn parse_pgm(bytes: &[u8]) -> std::result::Result<PgmImage, (usize, String)> {
    let mut cur = Cursor { bytes, pos: 0 };
    let raw = match bytes.get(..2) {
        Some(b"P2") => false,
        Some(b"P5") => true,
        _ => return cur.err("missing P2/P5 magic number"),
    };
    cur.pos = 2;
    if !bytes.get(2).is_some_and(|b| b.is_ascii_whitespace() || *b == b'#') {
        return cur.err("malformed magic number");
    }
    let width = cur.number("width")? as usize;
    let height = cur.number("height")? as usize;
    let maxval = cur.number("maxval")?;
    if width == 0 || height == 0 {
        return cur.err("image dimensions must be positive");
    }
    if maxval == 0 || maxval > 65535 {
        return cur.err(format!("maxval {maxval} outside 1..=65535"));
    }
    let maxval = maxval as u16;
    let count = width
        .checked_mul(height)
        .ok_or_else(|| (cur.line(), "image dimensions overflow".to_string()))?;

    let mut pixels = Vec::with_capacity(count);
    if raw {
        // Exactly one whitespace byte separates the header from the raster.
        if !bytes.get(cur.pos).is_some_and(u8::is_ascii_whitespace) {
            return cur.err("missing separator after maxval");
        }
        cur.pos += 1;
        let depth = if maxval < 256 { 1 } else { 2 };
        let payload = &bytes[cur.pos..];
        if payload.len() < count * depth {
            return cur.err(format!(
                "truncated raster: {} bytes, expected {}",
                payload.len(),
                count * depth
            ));
        }
        for chunk in payload[..count * depth].chunks_exact(depth) {
            let v = if depth == 1 {
                u16::from(chunk[0])
            } else {
                u16::from_be_bytes([chunk[0], chunk[1]])
            };
            if v > maxval {
                return cur.err(format!("pixel value {v} exceeds maxval {maxval}"));
            }
            pixels.push(v);
        }
    } else {
        for _ in 0..count {
            let v = cur.number("pixel value")?;
            if v > u32::from(maxval) {
                return cur.err(format!("pixel value {v} exceeds maxval {maxval}"));
            }
            pixels.push(v as u16);
        }
    }
    Ok(PgmImage {
        width,
        height,
        maxval,
        pixels,
    })
}

pub fn read_pgm(path: impl AsRef<Path>) -> Result<PgmImage> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_pgm(&bytes).map_err(|(line, msg)| Error::parse(path, line, msg))
}

/// Reads an image straight into a flattened intensity vector.
pub fn read_pgm_vector<T: Scalar>(path: impl AsRef<Path>) -> Result<Array1<T>> {
    Ok(read_pgm(path)?.to_vector())
}

/// Writes `img` as raw P5 when `raw` is set, otherwise as plain P2.
pub fn write_pgm(path: impl AsRef<Path>, img: &PgmImage, raw: bool) -> Result<()> {
    let path = path.as_ref();
    if img.pixels.len() != img.width * img.height {
        return Err(Error::dims(img.width * img.height, img.pixels.len()));
    }
    if let Some(&v) = img.pixels.iter().find(|&&v| v > img.maxval) {
        return Err(Error::arg(format!("pixel value {v} exceeds maxval {}", img.maxval)));
    }
    let magic = if raw { "P5" } else { "P2" };
    let mut out = format!("{magic}\n{} {}\n{}\n", img.width, img.height, img.maxval).into_bytes();
    if raw {
        for &p in &img.pixels {
            if img.maxval < 256 {
                out.push(p as u8);
            } else {
                out.extend_from_slice(&p.to_be_bytes());
            }
        }
    } else {
        for row in img.pixels.chunks(img.width) {
            let line: Vec<String> = row.iter().map(u16::to_string).collect();
            out.extend_from_slice(line.join(" ").as_bytes());
            out.push(b'\n');
        }
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}
