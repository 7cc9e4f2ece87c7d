//! Least-squares linear classifier on +-1 targets.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Ridge added to the (per-sample averaged) normal equations.
pub const RIDGE: f64 = 1e-10;

/// Weights over the features followed by a bias term.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearClassifier<T> {
    weights: Array1<T>,
}

impl<T: Scalar> LinearClassifier<T> {
    pub fn from_weights(weights: Array1<T>) -> Result<Self> {
        if weights.is_empty() || weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::arg("classifier weights must be finite and non-empty"));
        }
        Ok(Self { weights })
    }

    /// `M + 1` entries, bias last.
    pub fn weights(&self) -> &Array1<T> {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.weights.len() - 1
    }

    fn score(&self, x: ArrayView1<'_, T>) -> T {
        let m = self.dim();
        x.iter()
            .zip(self.weights.iter())
            .fold(self.weights[m], |acc, (&a, &w)| acc + a * w)
    }

    /// Same classifier with every decision flipped.
    pub fn inverted(&self) -> Self {
        Self {
            weights: self.weights.mapv(|w| -w),
        }
    }
}

fn check_labels(labels: &[i32]) -> Result<()> {
    if let Some(bad) = labels.iter().find(|&&l| l != 1 && l != -1) {
        return Err(Error::arg(format!("labels must be +1 or -1, found {bad}")));
    }
    Ok(())
}

/// Maps a two-class label vector to +-1: the smaller label becomes +1.
pub fn to_signed_labels(labels: &[i32]) -> Result<(Vec<i32>, [i32; 2])> {
    let mut classes: Vec<i32> = labels.to_vec();
    classes.sort_unstable();
    classes.dedup();
    if classes.len() != 2 {
        return Err(Error::arg(format!(
            "expected exactly two classes, found {}",
            classes.len()
        )));
    }
    let signed = labels
        .iter()
        .map(|&l| if l == classes[0] { 1 } else { -1 })
        .collect();
    Ok((signed, [classes[0], classes[1]]))
}

/// Solves `(X^T X / N + ridge I) w = X^T y / N` for `X` = features with a
/// column of ones appended.
pub fn fit_linear<T: Scalar>(features: ArrayView2<'_, T>, labels: &[i32]) -> Result<LinearClassifier<T>> {
    let (n, m) = features.dim();
    if labels.len() != n {
        return Err(Error::dims(n, labels.len()));
    }
    if n < 2 {
        return Err(Error::arg(format!("need at least 2 samples, got {n}")));
    }
    check_labels(labels)?;
    if !(labels.contains(&1) && labels.contains(&-1)) {
        return Err(Error::arg("both classes must be present"));
    }
    if features.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("features contain non-finite values".into()));
    }

    let mut design = Array2::ones((n, m + 1));
    design.slice_mut(ndarray::s![.., ..m]).assign(&features);
    let targets: Array1<T> = labels.iter().map(|&l| T::lit(f64::from(l))).collect();
    let nf = T::count(n);
    let mut normal = design.t().dot(&design) / nf;
    for i in 0..=m {
        normal[[i, i]] = normal[[i, i]] + T::lit(RIDGE);
    }
    let rhs = design.t().dot(&targets) / nf;
    let weights = cholesky_solve(normal, rhs)?;
    LinearClassifier::from_weights(weights)
}

fn cholesky_solve<T: Scalar>(mut a: Array2<T>, mut b: Array1<T>) -> Result<Array1<T>> {
    let n = a.nrows();
    for j in 0..n {
        let mut d = a[[j, j]];
        for k in 0..j {
            d = d - a[[j, k]] * a[[j, k]];
        }
        if !(d > T::zero()) {
            return Err(Error::InvalidInput(
                "normal equations are not positive definite".into(),
            ));
        }
        let d = d.sqrt();
        a[[j, j]] = d;
        for i in (j + 1)..n {
            let mut s = a[[i, j]];
            for k in 0..j {
                s = s - a[[i, k]] * a[[j, k]];
            }
            a[[i, j]] = s / d;
        }
    }
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s = s - a[[i, k]] * b[k];
        }
        b[i] = s / a[[i, i]];
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in (i + 1)..n {
            s = s - a[[k, i]] * b[k];
        }
        b[i] = s / a[[i, i]];
    }
    Ok(b)
}

/// Sign of `w^T [x; 1]`; a score of exactly zero maps to +1.
pub fn predict<T: Scalar>(c: &LinearClassifier<T>, x: ArrayView1<'_, T>) -> Result<i32> {
    if x.len() != c.dim() {
        return Err(Error::dims(c.dim(), x.len()));
    }
    Ok(if c.score(x) >= T::zero() { 1 } else { -1 })
}

pub fn predict_batch<T: Scalar>(c: &LinearClassifier<T>, features: ArrayView2<'_, T>) -> Result<Vec<i32>> {
    features.rows().into_iter().map(|row| predict(c, row)).collect()
}

/// Fraction of rows whose prediction differs from the label.
pub fn error_rate<T: Scalar>(c: &LinearClassifier<T>, features: ArrayView2<'_, T>, labels: &[i32]) -> Result<T> {
    if labels.len() != features.nrows() {
        return Err(Error::dims(features.nrows(), labels.len()));
    }
    if labels.is_empty() {
        return Err(Error::arg("no samples to score"));
    }
    check_labels(labels)?;
    let wrong = predict_batch(c, features)?
        .iter()
        .zip(labels)
        .filter(|(p, l)| p != l)
        .count();
    Ok(T::count(wrong) / T::count(labels.len()))
}
