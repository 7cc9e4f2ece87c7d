//! Flat binary container for fitted models.
//!
//! All integers and reals are little-endian; reals are IEEE-754 `f64`
//! regardless of the in-memory scalar type. Matrices are row-major.
//!
//! ```text
//! magic    8 bytes  "KPCAMDL\0"
//! version  u32      1
//! kind     u32      1 = PCA, 2 = kernel PCA
//!
//! PCA:        D u64, M u64, mean[D], basis[D x M], eigenvalues[M]
//! kernel PCA: kernel u32 (0 linear, 1 polynomial, 2 gaussian),
//!             degree u32 (0 unless polynomial),
//!             param f64 (polynomial offset, gaussian sigma, else 0),
//!             N u64, D u64, M u64,
//!             training[N x D], coefficients[N x M], eigenvalues[M],
//!             gram[N x N]
//! ```

use std::fs;
use std::path::Path;

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::kernels::KernelSpec;
use crate::kpca::KpcaModel;
use crate::pca::PcaModel;
use crate::scalar::Scalar;

pub const MAGIC: &[u8; 8] = b"KPCAMDL\0";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum SavedModel<T> {
    Pca(PcaModel<T>),
    Kpca(KpcaModel<T>),
}

#[derive(Default)]
struct Writer(Vec<u8>);

impl Writer {
    fn u32(&mut self, v: u32) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn u64(&mut self, v: usize) {
        self.0.extend_from_slice(&(v as u64).to_le_bytes());
    }
    fn reals<'a, T: Scalar>(&mut self, it: impl IntoIterator<Item = &'a T>) {
        for v in it {
            self.0.extend_from_slice(&v.as_f64().to_le_bytes());
        }
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> std::result::Result<&'a [u8], String> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| format!("truncated container at byte {}", self.pos))?;
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }
    fn u32(&mut self) -> std::result::Result<u32, String> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }
    fn u64(&mut self) -> std::result::Result<usize, String> {
        let v = u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes"));
        usize::try_from(v).map_err(|_| format!("dimension {v} too large"))
    }
    fn f64(&mut self) -> std::result::Result<f64, String> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }
    fn reals<T: Scalar>(&mut self, n: usize) -> std::result::Result<Vec<T>, String> {
        let bytes = self.take(n.checked_mul(8).ok_or("size overflow")?)?;
        Ok(bytes
            .chunks_exact(8)
            .map(|c| T::lit(f64::from_le_bytes(c.try_into().expect("8 bytes"))))
            .collect())
    }
    fn matrix<T: Scalar>(&mut self, rows: usize, cols: usize) -> std::result::Result<Array2<T>, String> {
        let n = rows.checked_mul(cols).ok_or("size overflow")?;
        Ok(Array2::from_shape_vec((rows, cols), self.reals(n)?).expect("sized"))
    }
}

pub fn encode_model<T: Scalar>(model: &SavedModel<T>) -> Vec<u8> {
    let mut w = Writer::default();
    w.0.extend_from_slice(MAGIC);
    w.u32(VERSION);
    match model {
        SavedModel::Pca(m) => {
            w.u32(1);
            w.u64(m.dim());
            w.u64(m.n_components());
            w.reals(m.mean().iter());
            w.reals(m.basis().iter());
            w.reals(m.eigenvalues().iter());
        }
        SavedModel::Kpca(m) => {
            w.u32(2);
            let (tag, degree, param) = match *m.spec() {
                KernelSpec::Linear => (0, 0, 0.0),
                KernelSpec::Polynomial { degree, offset } => (1, degree, offset.as_f64()),
                KernelSpec::Gaussian { sigma } => (2, 0, sigma.as_f64()),
            };
            w.u32(tag);
            w.u32(degree);
            w.0.extend_from_slice(&param.to_le_bytes());
            w.u64(m.n_samples());
            w.u64(m.dim());
            w.u64(m.n_components());
            w.reals(m.training().iter());
            w.reals(m.coefficients().iter());
            w.reals(m.eigenvalues().iter());
            w.reals(m.train_gram().iter());
        }
    }
    w.0
}

/// Decodes a container; `Err` is a human-readable reason.
pub fn decode_model<T: Scalar>(bytes: &[u8]) -> std::result::Result<SavedModel<T>, String> {
    let mut r = Reader { bytes, pos: 0 };
    if r.take(8)? != MAGIC {
        return Err("not a model container (bad magic)".into());
    }
    let version = r.u32()?;
    if version != VERSION {
        return Err(format!("unsupported container version {version}"));
    }
    let model = match r.u32()? {
        1 => {
            let d = r.u64()?;
            let m = r.u64()?;
            let mean = Array1::from(r.reals(d)?);
            let basis = r.matrix(d, m)?;
            let eigenvalues = Array1::from(r.reals(m)?);
            SavedModel::Pca(PcaModel::from_parts(mean, basis, eigenvalues).map_err(|e| e.to_string())?)
        }
        2 => {
            let tag = r.u32()?;
            let degree = r.u32()?;
            let param = r.f64()?;
            let spec = match tag {
                0 => KernelSpec::Linear,
                1 => KernelSpec::Polynomial {
                    degree,
                    offset: T::lit(param),
                },
                2 => KernelSpec::Gaussian { sigma: T::lit(param) },
                other => return Err(format!("unknown kernel tag {other}")),
            };
            let n = r.u64()?;
            let d = r.u64()?;
            let m = r.u64()?;
            let training = r.matrix(n, d)?;
            let coefficients = r.matrix(n, m)?;
            let eigenvalues = Array1::from(r.reals(m)?);
            let gram = r.matrix(n, n)?;
            SavedModel::Kpca(
                KpcaModel::from_parts(training, spec, coefficients, eigenvalues, gram)
                    .map_err(|e| e.to_string())?,
            )
        }
        other => return Err(format!("unknown model kind {other}")),
    };
    if r.pos != bytes.len() {
        return Err(format!("{} trailing bytes after model", bytes.len() - r.pos));
    }
    Ok(model)
}

pub fn write_model<T: Scalar>(path: impl AsRef<Path>, model: &SavedModel<T>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_model(model)).map_err(|e| Error::io(path, e))
}

pub fn read_model<T: Scalar>(path: impl AsRef<Path>) -> Result<SavedModel<T>> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_model(&bytes).map_err(|msg| Error::parse(path, 0, msg))
}
