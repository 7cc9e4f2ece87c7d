//! Kernel functions, kernel matrices and Gram-matrix centering.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis, Zip};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Which kernel to evaluate.
///
/// `Polynomial { degree, offset: 0 }` is the homogeneous form `(x^T y)^d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSpec<T> {
    Linear,
    Polynomial { degree: u32, offset: T },
    /// `exp(-|x - y|^2 / (2 sigma^2))`
    Gaussian { sigma: T },
}

impl<T: Scalar> KernelSpec<T> {
    pub fn polynomial(degree: u32, offset: T) -> Result<Self> {
        let spec = KernelSpec::Polynomial { degree, offset };
        spec.validate()?;
        Ok(spec)
    }

    pub fn gaussian(sigma: T) -> Result<Self> {
        let spec = KernelSpec::Gaussian { sigma };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelSpec::Linear => Ok(()),
            KernelSpec::Polynomial { degree, offset } => {
                if degree < 1 {
                    Err(Error::arg("polynomial degree must be >= 1"))
                } else if !(offset >= T::zero()) || !offset.is_finite() {
                    Err(Error::arg(format!("polynomial offset must be >= 0, got {offset}")))
                } else {
                    Ok(())
                }
            }
            KernelSpec::Gaussian { sigma } => {
                if sigma > T::zero() && sigma.is_finite() {
                    Ok(())
                } else {
                    Err(Error::arg(format!("gaussian width must be > 0, got {sigma}")))
                }
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            KernelSpec::Linear => "linear",
            KernelSpec::Polynomial { .. } => "polynomial",
            KernelSpec::Gaussian { .. } => "gaussian",
        }
    }

    /// Evaluates without dimension checks; `x` and `y` must have equal length.
    pub(crate) fn eval_unchecked(&self, x: ArrayView1<'_, T>, y: ArrayView1<'_, T>) -> T {
        match *self {
            KernelSpec::Linear => dot(x, y),
            KernelSpec::Polynomial { degree, offset } => {
                let base = dot(x, y) + offset;
                base.powi(degree as i32)
            }
            KernelSpec::Gaussian { sigma } => {
                let two = T::lit(2.0);
                (-squared_distance(x, y) / (two * sigma * sigma)).exp()
            }
        }
    }
}

// Plain sequential loops: the linear kernel has to agree bit-for-bit with
// itself regardless of which matrix it is called on.
fn dot<T: Scalar>(x: ArrayView1<'_, T>, y: ArrayView1<'_, T>) -> T {
    x.iter()
        .zip(y.iter())
        .fold(T::zero(), |acc, (&a, &b)| acc + a * b)
}

pub(crate) fn squared_distance<T: Scalar>(x: ArrayView1<'_, T>, y: ArrayView1<'_, T>) -> T {
    x.iter().zip(y.iter()).fold(T::zero(), |acc, (&a, &b)| {
        let d = a - b;
        acc + d * d
    })
}

pub fn eval_kernel<T: Scalar>(
    spec: &KernelSpec<T>,
    x: ArrayView1<'_, T>,
    y: ArrayView1<'_, T>,
) -> Result<T> {
    if x.len() != y.len() {
        return Err(Error::dims(x.len(), y.len()));
    }
    spec.validate()?;
    Ok(spec.eval_unchecked(x, y))
}

/// `K[i][j] = k(a_i, b_j)` over the rows of `a` and `b`.
///
/// Entries are computed in parallel; each one is an independent evaluation
/// so the result does not depend on the thread count.
pub fn kernel_matrix<T: Scalar>(
    spec: &KernelSpec<T>,
    a: ArrayView2<'_, T>,
    b: ArrayView2<'_, T>,
) -> Result<Array2<T>> {
    if a.ncols() != b.ncols() {
        return Err(Error::dims(a.ncols(), b.ncols()));
    }
    spec.validate()?;
    let mut out = Array2::zeros((a.nrows(), b.nrows()));
    Zip::indexed(&mut out).par_for_each(|(i, j), v| {
        *v = spec.eval_unchecked(a.row(i), b.row(j));
    });
    Ok(out)
}

fn means<T: Scalar>(k: ArrayView2<'_, T>, axis: Axis) -> Array1<T> {
    // Summing lane by lane in index order gives identical row and column
    // means for a symmetric input, which keeps the centered result exactly
    // symmetric.
    let n = T::count(k.len_of(axis));
    k.lanes(axis)
        .into_iter()
        .map(|lane| lane.iter().fold(T::zero(), |acc, &v| acc + v) / n)
        .collect()
}

/// Centered Gram matrix `K - 1K - K1 + 1K1`, where `1` is the N x N matrix
/// with every entry `1/N`. Rows and columns of the result sum to zero.
pub fn center_gram<T: Scalar>(k: ArrayView2<'_, T>) -> Result<Array2<T>> {
    let (rows, cols) = k.dim();
    if rows != cols {
        return Err(Error::arg(format!(
            "Gram centering needs a square matrix, got {rows}x{cols}"
        )));
    }
    if rows == 0 {
        return Ok(Array2::zeros((0, 0)));
    }
    let row_means = means(k, Axis(1));
    let col_means = means(k, Axis(0));
    let grand = row_means.iter().fold(T::zero(), |acc, &v| acc + v) / T::count(rows);
    Ok(Array2::from_shape_fn((rows, cols), |(i, j)| {
        k[[i, j]] - (row_means[i] + col_means[j]) + grand
    }))
}

/// Centers a T x N block of test-versus-training kernel values with the
/// training statistics:
/// `K_test - 1' K_train - K_test 1 + 1' K_train 1`.
pub fn center_cross<T: Scalar>(k_test: ArrayView2<'_, T>, k_train: ArrayView2<'_, T>) -> Result<Array2<T>> {
    let n = k_train.nrows();
    if k_train.ncols() != n {
        return Err(Error::arg(format!(
            "training kernel matrix must be square, got {}x{}",
            n,
            k_train.ncols()
        )));
    }
    if k_test.ncols() != n {
        return Err(Error::dims(n, k_test.ncols()));
    }
    if n == 0 {
        return Ok(Array2::zeros((k_test.nrows(), 0)));
    }
    let train_col_means = means(k_train, Axis(0));
    let grand = means(k_train, Axis(1))
        .iter()
        .fold(T::zero(), |acc, &v| acc + v)
        / T::count(n);
    let test_row_means = means(k_test, Axis(1));
    Ok(Array2::from_shape_fn(k_test.dim(), |(t, i)| {
        k_test[[t, i]] - (test_row_means[t] + train_col_means[i]) + grand
    }))
}
