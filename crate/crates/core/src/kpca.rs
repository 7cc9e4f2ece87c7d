//! Kernel PCA: fitting, out-of-sample projection, Gaussian pre-images and
//! the nearest-neighbour width heuristic.
//!
//! The fit diagonalizes the centered Gram matrix `K~`. An eigenpair
//! `(mu_k, u_k)` of `K~` gives the component variance `lambda_k = mu_k / N`
//! and coefficients `a_k = u_k / sqrt(mu_k)`, so that
//! `lambda_k * N * a_k^T a_k = 1` and the implicit feature-space direction
//! has unit length.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};
use rayon::prelude::*;

use crate::eigen::{sym_eig, SymmetricMatrix};
use crate::error::{Error, Result};
use crate::kernels::{center_cross, center_gram, kernel_matrix, squared_distance, KernelSpec};
use crate::scalar::Scalar;

/// Relative eigenvalue floor below which components are discarded.
pub const EIGENVALUE_FLOOR: f64 = 1e-10;

/// Pre-image denominators smaller than this in magnitude abort the iteration.
pub const DENOMINATOR_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq)]
pub struct KpcaModel<T> {
    training: Array2<T>,
    spec: KernelSpec<T>,
    coefficients: Array2<T>,
    eigenvalues: Array1<T>,
    train_gram: Array2<T>,
}

impl<T: Scalar> KpcaModel<T> {
    /// Rebuilds a model from stored parts, checking shapes only.
    pub fn from_parts(
        training: Array2<T>,
        spec: KernelSpec<T>,
        coefficients: Array2<T>,
        eigenvalues: Array1<T>,
        train_gram: Array2<T>,
    ) -> Result<Self> {
        spec.validate()?;
        let n = training.nrows();
        if coefficients.nrows() != n {
            return Err(Error::dims(n, coefficients.nrows()));
        }
        if coefficients.ncols() != eigenvalues.len() {
            return Err(Error::dims(coefficients.ncols(), eigenvalues.len()));
        }
        if train_gram.dim() != (n, n) {
            return Err(Error::dims(n, train_gram.nrows()));
        }
        Ok(Self {
            training,
            spec,
            coefficients,
            eigenvalues,
            train_gram,
        })
    }

    pub fn training(&self) -> &Array2<T> {
        &self.training
    }

    pub fn spec(&self) -> &KernelSpec<T> {
        &self.spec
    }

    /// N x M; column `k` holds the expansion coefficients `a_k`.
    pub fn coefficients(&self) -> &Array2<T> {
        &self.coefficients
    }

    /// Component variances, descending and strictly positive.
    pub fn eigenvalues(&self) -> &Array1<T> {
        &self.eigenvalues
    }

    /// The uncentered training kernel matrix.
    pub fn train_gram(&self) -> &Array2<T> {
        &self.train_gram
    }

    pub fn n_components(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn n_samples(&self) -> usize {
        self.training.nrows()
    }

    pub fn dim(&self) -> usize {
        self.training.ncols()
    }

    /// Keeps only the leading `m` components.
    pub fn truncated(&self, m: usize) -> Self {
        let m = m.min(self.n_components());
        Self {
            training: self.training.clone(),
            spec: self.spec,
            coefficients: self.coefficients.slice(ndarray::s![.., ..m]).to_owned(),
            eigenvalues: self.eigenvalues.slice(ndarray::s![..m]).to_owned(),
            train_gram: self.train_gram.clone(),
        }
    }
}

/// Fits up to `m` kernel principal components of the rows of `x`.
///
/// Components whose Gram eigenvalue is not above `1e-10` times the largest
/// are dropped, so the returned model may hold fewer than `m` (possibly
/// zero) components.
pub fn fit_kpca<T: Scalar>(x: ArrayView2<'_, T>, spec: &KernelSpec<T>, m: usize) -> Result<KpcaModel<T>> {
    let n = x.nrows();
    if n < 2 {
        return Err(Error::arg(format!("kernel PCA needs at least 2 samples, got {n}")));
    }
    if m == 0 || m > n {
        return Err(Error::arg(format!("component count {m} outside 1..={n}")));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("data matrix has non-finite entries".into()));
    }
    let k = kernel_matrix(spec, x, x)?;
    let centered = center_gram(k.view())?;
    let eig = sym_eig(&SymmetricMatrix::new(centered)?)?;

    let largest = eig.values[0];
    let scale = k.iter().fold(T::zero(), |acc, v| acc.max(v.abs())) * T::count(n);
    // A centered Gram matrix that is zero up to roundoff has no components.
    let numerically_zero = largest <= T::tol(1e-13) * scale;
    let floor = T::lit(EIGENVALUE_FLOOR) * largest;
    let kept = if numerically_zero {
        0
    } else {
        eig.values.iter().take(m).take_while(|&&mu| mu > floor).count()
    };

    let nf = T::count(n);
    let mut coefficients = Array2::zeros((n, kept));
    let mut eigenvalues = Array1::zeros(kept);
    for c in 0..kept {
        let mu = eig.values[c];
        coefficients
            .column_mut(c)
            .assign(&(&eig.vectors.column(c) / mu.sqrt()));
        eigenvalues[c] = mu / nf;
    }
    Ok(KpcaModel {
        training: x.to_owned(),
        spec: *spec,
        coefficients,
        eigenvalues,
        train_gram: k,
    })
}

/// Projects the rows of `q` onto the model components using the
/// cross-centered kernel rows.
pub fn kpca_transform<T: Scalar>(model: &KpcaModel<T>, q: ArrayView2<'_, T>) -> Result<Array2<T>> {
    if q.ncols() != model.dim() {
        return Err(Error::dims(model.dim(), q.ncols()));
    }
    let k_test = kernel_matrix(&model.spec, q, model.training.view())?;
    let centered = center_cross(k_test.view(), model.train_gram.view())?;
    Ok(centered.dot(&model.coefficients))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PreimageConfig<T> {
    pub max_iterations: usize,
    /// Convergence threshold on `|z_{t+1} - z_t|`.
    pub tolerance: T,
    /// Starting point; the training mean when `None`.
    pub initial: Option<Array1<T>>,
}

impl<T: Scalar> Default for PreimageConfig<T> {
    fn default() -> Self {
        Self {
            max_iterations: 1000,
            tolerance: T::lit(1e-9),
            initial: None,
        }
    }
}

impl<T: Scalar> PreimageConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations < 1 {
            return Err(Error::arg("max_iterations must be >= 1"));
        }
        if !(self.tolerance > T::zero()) {
            return Err(Error::arg(format!("tolerance must be > 0, got {}", self.tolerance)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Preimage<T> {
    pub z: Array1<T>,
    pub iterations: usize,
    pub converged: bool,
}

/// Per-sample weights of the feature-space point whose projection
/// coordinates are `y`, including the feature-mean term that centering
/// removed: `gamma_i - mean(gamma) + 1/N` with `gamma = A y`.
pub fn preimage_weights<T: Scalar>(model: &KpcaModel<T>, y: ArrayView1<'_, T>) -> Result<Array1<T>> {
    if y.len() != model.n_components() {
        return Err(Error::dims(model.n_components(), y.len()));
    }
    let gamma = model.coefficients.dot(&y);
    let n = T::count(model.n_samples());
    let mean = gamma.iter().fold(T::zero(), |acc, &g| acc + g) / n;
    let inv_n = T::one() / n;
    Ok(gamma.mapv(|g| g - mean + inv_n))
}

/// Approximate input-space pre-image of the feature vector `y` by
/// fixed-point iteration of
/// `z <- sum_i w_i k(z, x_i) x_i / sum_i w_i k(z, x_i)`.
///
/// Only defined for Gaussian kernels.
pub fn kpca_preimage<T: Scalar>(
    model: &KpcaModel<T>,
    y: ArrayView1<'_, T>,
    cfg: &PreimageConfig<T>,
) -> Result<Preimage<T>> {
    let sigma = match model.spec {
        KernelSpec::Gaussian { sigma } => sigma,
        other => return Err(Error::UnsupportedKernel(format!(
            "pre-images need a gaussian kernel, model uses {}",
            other.name()
        ))),
    };
    cfg.validate()?;
    let weights = preimage_weights(model, y)?;
    let mut z = match &cfg.initial {
        Some(z0) if z0.len() != model.dim() => return Err(Error::dims(model.dim(), z0.len())),
        Some(z0) => z0.clone(),
        None => model.training.mean_axis(Axis(0)).expect("non-empty training set"),
    };

    let denom_floor = T::lit(DENOMINATOR_FLOOR).max(T::min_positive_value());
    let two_sigma_sq = T::lit(2.0) * sigma * sigma;
    for iteration in 1..=cfg.max_iterations {
        // Kernel values are taken relative to the nearest training row. The
        // common factor cancels in the ratio and keeps far iterates from
        // underflowing every term to zero.
        let dist: Vec<T> = model
            .training
            .rows()
            .into_iter()
            .map(|x| squared_distance(z.view(), x))
            .collect();
        let nearest = dist.iter().fold(T::infinity(), |acc, &d| acc.min(d));
        let mut numerator = Array1::zeros(model.dim());
        let mut denominator = T::zero();
        for ((x, &w), &d) in model.training.rows().into_iter().zip(weights.iter()).zip(&dist) {
            let g = w * (-(d - nearest) / two_sigma_sq).exp();
            numerator.scaled_add(g, &x);
            denominator = denominator + g;
        }
        if !(denominator.abs() >= denom_floor) {
            return Err(Error::Divergence {
                iteration,
                denominator: denominator.as_f64(),
                iterate: z.iter().map(|v| v.as_f64()).collect(),
            });
        }
        let next = numerator / denominator;
        if next.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence {
                iteration,
                denominator: denominator.as_f64(),
                iterate: z.iter().map(|v| v.as_f64()).collect(),
            });
        }
        let step = squared_distance(next.view(), z.view()).sqrt();
        z = next;
        if step < cfg.tolerance {
            return Ok(Preimage {
                z,
                iterations: iteration,
                converged: true,
            });
        }
    }
    Ok(Preimage {
        z,
        iterations: cfg.max_iterations,
        converged: false,
    })
}

/// Kernel width from the nearest-neighbour heuristic: five times the mean
/// distance from each row to its nearest other row.
pub fn select_sigma<T: Scalar>(x: ArrayView2<'_, T>) -> Result<T> {
    let n = x.nrows();
    if n < 2 {
        return Err(Error::arg(format!("width selection needs at least 2 samples, got {n}")));
    }
    let nearest: Vec<T> = (0..n)
        .into_par_iter()
        .map(|i| {
            let xi = x.row(i);
            (0..n)
                .filter(|&j| j != i)
                .map(|j| squared_distance(xi, x.row(j)))
                .fold(T::infinity(), T::min)
                .sqrt()
        })
        .collect();
    let mean = nearest.iter().fold(T::zero(), |acc, &d| acc + d) / T::count(n);
    let sigma = T::lit(5.0) * mean;
    if !(sigma > T::zero()) {
        return Err(Error::arg("all rows coincide; nearest-neighbour width is zero"));
    }
    Ok(sigma)
}
