//! Standard PCA with a 1/N sample covariance.
//!
//! [`fit_pca`] diagonalizes the D x D covariance directly; [`fit_pca_dual`]
//! works through the N x N inner-product matrix of the centered rows, which
//! is far cheaper when D >> N. Both return the same model.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};

use crate::eigen::{sym_eig, SymmetricMatrix};
use crate::error::{Error, Result};
use crate::kernels::{kernel_matrix, KernelSpec};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct PcaModel<T> {
    mean: Array1<T>,
    basis: Array2<T>,
    eigenvalues: Array1<T>,
}

impl<T: Scalar> PcaModel<T> {
    /// Rebuilds a model from stored parts, checking shapes only.
    pub fn from_parts(mean: Array1<T>, basis: Array2<T>, eigenvalues: Array1<T>) -> Result<Self> {
        if basis.nrows() != mean.len() {
            return Err(Error::dims(mean.len(), basis.nrows()));
        }
        if basis.ncols() != eigenvalues.len() {
            return Err(Error::dims(basis.ncols(), eigenvalues.len()));
        }
        Ok(Self {
            mean,
            basis,
            eigenvalues,
        })
    }

    pub fn mean(&self) -> &Array1<T> {
        &self.mean
    }

    /// D x M, one orthonormal principal direction per column.
    pub fn basis(&self) -> &Array2<T> {
        &self.basis
    }

    pub fn eigenvalues(&self) -> &Array1<T> {
        &self.eigenvalues
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn n_components(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Projects every row of `x`.
    pub fn project_rows(&self, x: ArrayView2<'_, T>) -> Result<Array2<T>> {
        if x.ncols() != self.dim() {
            return Err(Error::dims(self.dim(), x.ncols()));
        }
        let centered = &x - &self.mean.view().insert_axis(Axis(0));
        Ok(centered.dot(&self.basis))
    }
}

fn check_fit_args<T: Scalar>(x: ArrayView2<'_, T>, m: usize) -> Result<()> {
    let (n, d) = x.dim();
    if n < 2 {
        return Err(Error::arg(format!("PCA needs at least 2 samples, got {n}")));
    }
    if m == 0 || m > n.min(d) {
        return Err(Error::arg(format!(
            "component count {m} outside 1..={}",
            n.min(d)
        )));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("data matrix has non-finite entries".into()));
    }
    Ok(())
}

fn center<T: Scalar>(x: ArrayView2<'_, T>) -> (Array1<T>, Array2<T>) {
    let mean = x.mean_axis(Axis(0)).expect("non-empty");
    let centered = &x - &mean.view().insert_axis(Axis(0));
    (mean, centered)
}

/// Top-`m` principal components of the rows of `x`.
pub fn fit_pca<T: Scalar>(x: ArrayView2<'_, T>, m: usize) -> Result<PcaModel<T>> {
    check_fit_args(x, m)?;
    let n = T::count(x.nrows());
    let (mean, centered) = center(x);
    let cov = centered.t().dot(&centered) / n;
    let eig = sym_eig(&SymmetricMatrix::new(symmetrize(cov))?)?;
    let basis = eig.vectors.slice(ndarray::s![.., ..m]).to_owned();
    let eigenvalues = eig.values.slice(ndarray::s![..m]).mapv(|v| v.max(T::zero()));
    Ok(PcaModel {
        mean,
        basis,
        eigenvalues,
    })
}

/// Same contract as [`fit_pca`], computed from the N x N matrix of inner
/// products between centered rows.
pub fn fit_pca_dual<T: Scalar>(x: ArrayView2<'_, T>, m: usize) -> Result<PcaModel<T>> {
    check_fit_args(x, m)?;
    let (n_rows, d) = x.dim();
    let n = T::count(n_rows);
    let (mean, centered) = center(x);
    let gram = kernel_matrix(&KernelSpec::Linear, centered.view(), centered.view())? / n;
    let eig = sym_eig(&SymmetricMatrix::new(gram)?)?;

    let top = eig.values[0].max(T::zero());
    let null_tol = T::tol(1e-12) * top;
    let mut basis = Array2::zeros((d, m));
    let mut eigenvalues = Array1::zeros(m);
    let mut filled = 0;
    for k in 0..m {
        let lambda = eig.values[k];
        if top == T::zero() || lambda <= null_tol {
            break;
        }
        let mut u = centered.t().dot(&eig.vectors.column(k));
        let norm = u.dot(&u).sqrt();
        u.mapv_inplace(|x| x / norm);
        apply_sign_convention(&mut u);
        basis.column_mut(k).assign(&u);
        eigenvalues[k] = lambda;
        filled += 1;
    }
    // The centered rows span at most N - 1 directions; any further requested
    // components have zero variance and are completed to an orthonormal set.
    complete_orthonormal(&mut basis, filled);
    Ok(PcaModel {
        mean,
        basis,
        eigenvalues,
    })
}

/// Coordinates of `x` in the model basis: `(x - mean)^T u_k`.
pub fn pca_project<T: Scalar>(model: &PcaModel<T>, x: ArrayView1<'_, T>) -> Result<Array1<T>> {
    if x.len() != model.dim() {
        return Err(Error::dims(model.dim(), x.len()));
    }
    let centered = &x - &model.mean;
    Ok(model.basis.t().dot(&centered))
}

/// `mean + sum_k y_k u_k`.
pub fn pca_reconstruct<T: Scalar>(model: &PcaModel<T>, y: ArrayView1<'_, T>) -> Result<Array1<T>> {
    if y.len() != model.n_components() {
        return Err(Error::dims(model.n_components(), y.len()));
    }
    Ok(&model.mean + &model.basis.dot(&y))
}

/// Averages `a` with its transpose to remove roundoff asymmetry from
/// products such as `X^T X`.
fn symmetrize<T: Scalar>(mut a: Array2<T>) -> Array2<T> {
    let n = a.nrows();
    let half = T::lit(0.5);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = (a[[i, j]] + a[[j, i]]) * half;
            a[[i, j]] = v;
            a[[j, i]] = v;
        }
    }
    a
}

pub(crate) fn apply_sign_convention<T: Scalar>(v: &mut Array1<T>) {
    let mut pivot = 0;
    for (k, x) in v.iter().enumerate() {
        if x.abs() > v[pivot].abs() {
            pivot = k;
        }
    }
    if v[pivot] < T::zero() {
        v.mapv_inplace(|x| -x);
    }
}

/// Fills columns `filled..` of `basis` with unit vectors orthogonal to all
/// previous columns, drawn from the standard basis by Gram-Schmidt.
fn complete_orthonormal<T: Scalar>(basis: &mut Array2<T>, filled: usize) {
    let (d, m) = basis.dim();
    let mut col = filled;
    let mut candidate = 0;
    while col < m && candidate < d {
        let mut v = Array1::zeros(d);
        v[candidate] = T::one();
        candidate += 1;
        // Two passes of classical Gram-Schmidt for stability.
        for _ in 0..2 {
            for j in 0..col {
                let q = basis.column(j);
                let proj = q.dot(&v);
                v.scaled_add(-proj, &q);
            }
        }
        let norm = v.dot(&v).sqrt();
        if norm > T::lit(1e-6) {
            v.mapv_inplace(|x| x / norm);
            apply_sign_convention(&mut v);
            basis.column_mut(col).assign(&v);
            col += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn two_point_model() {
        // S = (1/2) * [(1,0)(1,0)^T + (-1,0)(-1,0)^T] = diag(1, 0)
        let x = array![[0.0f64, 0.0], [2.0, 0.0]];
        for model in [fit_pca(x.view(), 1).unwrap(), fit_pca_dual(x.view(), 1).unwrap()] {
            assert_eq!(model.mean().to_vec(), vec![1.0, 0.0]);
            assert!((model.basis()[[0, 0]] - 1.0).abs() < 1e-15);
            assert!(model.basis()[[1, 0]].abs() < 1e-15);
            assert!((model.eigenvalues()[0] - 1.0).abs() < 1e-15);

            let y = pca_project(&model, array![2.0, 0.0].view()).unwrap();
            assert!((y[0] - 1.0).abs() < 1e-15);
            let back = pca_reconstruct(&model, array![1.0].view()).unwrap();
            assert!((back[0] - 2.0).abs() < 1e-15 && back[1].abs() < 1e-15);
        }
    }

    #[test]
    fn identical_rows_give_zero_eigenvalues() {
        let x = Array2::<f64>::from_shape_fn((5, 3), |(_, j)| j as f64 + 0.25);
        for model in [fit_pca(x.view(), 3).unwrap(), fit_pca_dual(x.view(), 3).unwrap()] {
            assert!(model.eigenvalues().iter().all(|&v| v == 0.0));
            let g = model.basis().t().dot(model.basis());
            assert!((g - Array2::<f64>::eye(3)).iter().all(|v| v.abs() < 1e-12));
        }
    }

    #[test]
    fn mean_maps_to_origin_and_back() {
        let x = array![[1.0f64, 2.0], [3.0, 1.0], [0.0, -1.0]];
        let model = fit_pca(x.view(), 2).unwrap();
        let y = pca_project(&model, model.mean().view()).unwrap();
        assert!(y.iter().all(|v| v.abs() < 1e-15));
        let back = pca_reconstruct(&model, Array1::zeros(2).view()).unwrap();
        assert_eq!(back, model.mean());
        let step = model.mean() + &model.basis().column(0);
        let y = pca_project(&model, step.view()).unwrap();
        assert!((y[0] - 1.0).abs() < 1e-12 && y[1].abs() < 1e-12);
    }

    #[test]
    fn rank_one_dual() {
        let x = array![[1.0f64, 2.0, 3.0], [2.0, 4.0, 6.0], [-1.0, -2.0, -3.0]];
        let model = fit_pca_dual(x.view(), 3).unwrap();
        assert!(model.eigenvalues()[0] > 0.1);
        assert_eq!(model.eigenvalues()[1], 0.0);
        assert_eq!(model.eigenvalues()[2], 0.0);
        let g = model.basis().t().dot(model.basis());
        assert!((g - Array2::<f64>::eye(3)).iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn argument_errors() {
        let x = array![[0.0, 0.0], [2.0, 0.0]];
        assert!(matches!(fit_pca(x.view(), 0), Err(Error::InvalidArgument(_))));
        assert!(matches!(fit_pca(x.view(), 3), Err(Error::InvalidArgument(_))));
        assert!(matches!(
            fit_pca(array![[1.0, 2.0]].view(), 1),
            Err(Error::InvalidArgument(_))
        ));
        let model = fit_pca(x.view(), 1).unwrap();
        assert!(matches!(
            pca_project(&model, array![1.0].view()),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            pca_reconstruct(&model, array![1.0, 2.0].view()),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
