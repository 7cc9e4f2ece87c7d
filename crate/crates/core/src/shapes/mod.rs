//! Point distribution models over 2-D landmark shapes.
//!
//! A shape with `n` landmarks is the `2n` vector `[x1, y1, ..., xn, yn]`.
//! Shapes are assumed aligned; [`normalize_shapes`] only rescales each axis
//! of each shape into `[0, 1]`.

mod pts;
mod render;
mod roles;

pub use pts::{read_pts, write_pts, parse_pts, format_pts};
pub use render::{fit_parabola, render_face_svg, CANVAS_SIZE};
pub use roles::LandmarkRoleMap;

use ndarray::{Array1, Array2, ArrayView1};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernels::KernelSpec;
use crate::kpca::{fit_kpca, kpca_preimage, kpca_transform, select_sigma, KpcaModel, PreimageConfig};
use crate::pca::{fit_pca, pca_project, PcaModel};
use crate::scalar::Scalar;

/// Landmark shape, stored interleaved as `[x1, y1, ..., xn, yn]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Shape<T> {
    coords: Array1<T>,
}

impl<T: Scalar> Shape<T> {
    pub fn new(coords: Array1<T>) -> Result<Self> {
        if !coords.len().is_multiple_of(2) {
            return Err(Error::arg(format!(
                "shape vector length {} is odd",
                coords.len()
            )));
        }
        if coords.len() < 6 {
            return Err(Error::arg(format!(
                "a shape needs at least 3 points, got {}",
                coords.len() / 2
            )));
        }
        if coords.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("shape has non-finite coordinates".into()));
        }
        Ok(Self { coords })
    }

    pub fn from_points(points: &[(T, T)]) -> Result<Self> {
        Self::new(points.iter().flat_map(|&(x, y)| [x, y]).collect())
    }

    pub fn n_points(&self) -> usize {
        self.coords.len() / 2
    }

    pub fn point(&self, j: usize) -> (T, T) {
        (self.coords[2 * j], self.coords[2 * j + 1])
    }

    pub fn points(&self) -> impl Iterator<Item = (T, T)> + '_ {
        (0..self.n_points()).map(|j| self.point(j))
    }

    pub fn coords(&self) -> &Array1<T> {
        &self.coords
    }

    pub fn into_coords(self) -> Array1<T> {
        self.coords
    }
}

fn common_point_count<T: Scalar>(shapes: &[Shape<T>]) -> Result<usize> {
    let first = shapes
        .first()
        .ok_or_else(|| Error::arg("shape list is empty"))?
        .n_points();
    if let Some((i, s)) = shapes.iter().enumerate().find(|(_, s)| s.n_points() != first) {
        return Err(Error::arg(format!(
            "shape {i} has {} points, expected {first}",
            s.n_points()
        )));
    }
    Ok(first)
}

/// Maps each shape's x coordinates so min -> 0 and max -> 1, and likewise
/// its y coordinates.
pub fn normalize_shapes<T: Scalar>(shapes: &[Shape<T>]) -> Result<Vec<Shape<T>>> {
    common_point_count(shapes)?;
    shapes
        .iter()
        .enumerate()
        .map(|(index, shape)| {
            let mut coords = shape.coords.clone();
            for (axis, name) in [(0usize, 'x'), (1, 'y')] {
                let (lo, hi) = coords
                    .iter()
                    .skip(axis)
                    .step_by(2)
                    .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &v| {
                        (lo.min(v), hi.max(v))
                    });
                let range = hi - lo;
                if !(range > T::zero()) {
                    return Err(Error::DegenerateShape { index, axis: name });
                }
                for v in coords.iter_mut().skip(axis).step_by(2) {
                    *v = (*v - lo) / range;
                }
            }
            Ok(Shape { coords })
        })
        .collect()
}

/// Stacks shapes as the rows of an N x 2n matrix.
pub fn shape_matrix<T: Scalar>(shapes: &[Shape<T>]) -> Result<Array2<T>> {
    let n = common_point_count(shapes)?;
    let mut out = Array2::zeros((shapes.len(), 2 * n));
    for (mut row, s) in out.rows_mut().into_iter().zip(shapes) {
        row.assign(&s.coords);
    }
    Ok(out)
}

/// Mean shape plus the leading `t` deformation modes.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeModel<T> {
    pca: PcaModel<T>,
}

impl<T: Scalar> ShapeModel<T> {
    pub fn mean_shape(&self) -> &Array1<T> {
        self.pca.mean()
    }

    /// 2n x t, columns are the deformation modes `p_k`.
    pub fn basis(&self) -> &Array2<T> {
        self.pca.basis()
    }

    pub fn eigenvalues(&self) -> &Array1<T> {
        self.pca.eigenvalues()
    }

    pub fn n_modes(&self) -> usize {
        self.pca.n_components()
    }

    pub fn pca(&self) -> &PcaModel<T> {
        &self.pca
    }

    /// `3 sqrt(lambda_k)`, the admissible magnitude of weight `k`.
    pub fn limit(&self, k: usize) -> T {
        T::lit(3.0) * self.eigenvalues()[k].sqrt()
    }

    /// Weights `b` of a shape: `P^T (x - mean)`.
    pub fn project(&self, shape: &Shape<T>) -> Result<Array1<T>> {
        pca_project(&self.pca, shape.coords.view())
    }
}

pub fn fit_shape_model<T: Scalar>(shapes: &[Shape<T>], t: usize) -> Result<ShapeModel<T>> {
    let x = shape_matrix(shapes)?;
    Ok(ShapeModel {
        pca: fit_pca(x.view(), t)?,
    })
}

/// Clips every weight into `[-3 sqrt(lambda_k), 3 sqrt(lambda_k)]`.
pub fn clamp_deformation<T: Scalar>(model: &ShapeModel<T>, b: ArrayView1<'_, T>) -> Result<Array1<T>> {
    if b.len() != model.n_modes() {
        return Err(Error::dims(model.n_modes(), b.len()));
    }
    Ok(Array1::from_shape_fn(b.len(), |k| {
        let lim = model.limit(k);
        b[k].max(-lim).min(lim)
    }))
}

/// `mean + P b`, with `b` clamped first when `clamp` is set.
pub fn synthesize<T: Scalar>(model: &ShapeModel<T>, b: ArrayView1<'_, T>, clamp: bool) -> Result<Shape<T>> {
    let b = if clamp {
        clamp_deformation(model, b)?
    } else {
        if b.len() != model.n_modes() {
            return Err(Error::dims(model.n_modes(), b.len()));
        }
        b.to_owned()
    };
    Shape::new(model.mean_shape() + &model.basis().dot(&b))
}

/// `steps` evenly spaced values across `[-half, half]`, both ends included;
/// for odd `steps` the middle value is exactly zero.
fn symmetric_grid<T: Scalar>(half: T, steps: usize) -> impl Iterator<Item = T> {
    let last = steps - 1;
    (0..steps).map(move |i| {
        let num = T::count(2 * i) - T::count(last);
        half * num / T::count(last)
    })
}

/// Varies weight `k` (1-based) across its admissible range with all other
/// weights zero.
pub fn sweep_pca_feature<T: Scalar>(model: &ShapeModel<T>, k: usize, steps: usize) -> Result<Vec<Shape<T>>> {
    if k < 1 || k > model.n_modes() {
        return Err(Error::arg(format!(
            "feature index {k} outside 1..={}",
            model.n_modes()
        )));
    }
    if steps < 2 {
        return Err(Error::arg(format!("a sweep needs at least 2 steps, got {steps}")));
    }
    let lim = model.limit(k - 1);
    symmetric_grid(lim, steps)
        .map(|bk| {
            let mut b = Array1::zeros(model.n_modes());
            b[k - 1] = bk;
            synthesize(model, b.view(), false)
        })
        .collect()
}

/// Fits a Gaussian kernel PCA model on shape vectors. The width defaults to
/// the nearest-neighbour heuristic.
pub fn fit_shape_kpca<T: Scalar>(shapes: &[Shape<T>], m: usize, sigma: Option<T>) -> Result<KpcaModel<T>> {
    let x = shape_matrix(shapes)?;
    let sigma = match sigma {
        Some(s) => s,
        None => select_sigma(x.view())?,
    };
    let m = m.min(x.nrows());
    fit_kpca(x.view(), &KernelSpec::gaussian(sigma)?, m)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepShape<T> {
    pub shape: Shape<T>,
    /// The feature vector that was inverted.
    pub features: Array1<T>,
    pub iterations: usize,
    pub converged: bool,
}

/// Per-component mean and (1/N) standard deviation of the training
/// features.
pub fn feature_statistics<T: Scalar>(model: &KpcaModel<T>) -> Result<(Array1<T>, Array1<T>)> {
    let feats = kpca_transform(model, model.training().view())?;
    let n = T::count(feats.nrows());
    let mean = feats.sum_axis(ndarray::Axis(0)) / n;
    let sd = Array1::from_shape_fn(feats.ncols(), |k| {
        let var = feats
            .column(k)
            .iter()
            .fold(T::zero(), |acc, &v| acc + (v - mean[k]) * (v - mean[k]))
            / n;
        var.sqrt()
    });
    Ok((mean, sd))
}

/// Varies kernel feature `k` (1-based) across `mean_k +- c sd_k` with the
/// other features held at their training means, and reconstructs a shape
/// for each sample by Gaussian pre-image iteration.
pub fn sweep_kpca_feature<T: Scalar>(
    model: &KpcaModel<T>,
    k: usize,
    c: T,
    steps: usize,
    cfg: &PreimageConfig<T>,
) -> Result<Vec<SweepShape<T>>> {
    if !matches!(model.spec(), KernelSpec::Gaussian { .. }) {
        return Err(Error::UnsupportedKernel(format!(
            "shape sweeps need a gaussian kernel, model uses {}",
            model.spec().name()
        )));
    }
    if k < 1 || k > model.n_components() {
        return Err(Error::arg(format!(
            "feature index {k} outside 1..={}",
            model.n_components()
        )));
    }
    if steps < 2 {
        return Err(Error::arg(format!("a sweep needs at least 2 steps, got {steps}")));
    }
    if !(c > T::zero()) {
        return Err(Error::arg(format!("range multiplier must be > 0, got {c}")));
    }
    if !model.dim().is_multiple_of(2) {
        return Err(Error::arg("model was not fitted on 2-D shape vectors"));
    }
    let (mean, sd) = feature_statistics(model)?;
    let half = c * sd[k - 1];
    let targets: Vec<Array1<T>> = symmetric_grid(half, steps)
        .map(|offset| {
            let mut y = mean.clone();
            y[k - 1] = mean[k - 1] + offset;
            y
        })
        .collect();

    targets
        .into_par_iter()
        .enumerate()
        .map(|(step, y)| {
            let wrap = |e: Error| Error::SweepStep {
                step,
                source: Box::new(e),
            };
            let p = kpca_preimage(model, y.view(), cfg).map_err(wrap)?;
            let shape = Shape::new(p.z).map_err(wrap)?;
            Ok(SweepShape {
                shape,
                features: y,
                iterations: p.iterations,
                converged: p.converged,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn square(scale: f64, dx: f64, dy: f64) -> Shape<f64> {
        Shape::from_points(&[
            (dx, dy),
            (dx + scale, dy),
            (dx + scale, dy + scale),
            (dx, dy + scale),
        ])
        .unwrap()
    }

    #[test]
    fn shape_validation() {
        assert!(Shape::new(array![0.0, 1.0, 2.0]).is_err());
        assert!(Shape::new(array![0.0, 1.0, 2.0, 3.0]).is_err());
        assert!(Shape::new(array![0.0, 1.0, 2.0, 3.0, f64::NAN, 1.0]).is_err());
    }

    #[test]
    fn unit_square_is_already_normalized() {
        let s = square(1.0, 0.0, 0.0);
        let out = normalize_shapes(std::slice::from_ref(&s)).unwrap();
        assert_eq!(out[0], s);
    }

    #[test]
    fn normalization_removes_scale_and_shift() {
        let base = Shape::<f64>::from_points(&[(0.0, 0.0), (2.0, 1.0), (1.0, 3.0), (0.5, 0.5)]).unwrap();
        let moved = Shape::new(base.coords().mapv(|v| 7.0 * v) + 4.0).unwrap();
        let out = normalize_shapes(&[base, moved]).unwrap();
        assert!((out[0].coords() - out[1].coords()).iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn degenerate_axis_named() {
        let ok = square(1.0, 0.0, 0.0);
        let flat = Shape::from_points(&[(1.0, 0.0), (1.0, 2.0), (1.0, 5.0)]).unwrap();
        let flat4 = Shape::from_points(&[(1.0, 0.0), (1.0, 2.0), (1.0, 5.0), (1.0, 1.0)]).unwrap();
        assert!(matches!(
            normalize_shapes(&[ok.clone(), flat4]),
            Err(Error::DegenerateShape { index: 1, axis: 'x' })
        ));
        assert!(normalize_shapes(&[ok, flat]).is_err());
        assert!(normalize_shapes::<f64>(&[]).is_err());
    }

    #[test]
    fn symmetric_pair_has_one_mode() {
        let a = Shape::<f64>::from_points(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]).unwrap();
        let b = Shape::from_points(&[(0.0, 0.2), (1.0, 0.0), (0.0, 1.0)]).unwrap();
        let model = fit_shape_model(&[a, b], 2).unwrap();
        assert!(model.eigenvalues()[0] > 0.0);
        assert!(model.eigenvalues()[1].abs() < 1e-15);
        let p = model.basis().column(0);
        assert!((p[1].abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn copies_have_zero_modes_and_mixed_sizes_fail() {
        let a = square(1.0, 0.0, 0.0);
        let model = fit_shape_model(&[a.clone(), a.clone(), a.clone()], 3).unwrap();
        assert!(model.eigenvalues().iter().all(|&v| v == 0.0));
        let tri = Shape::from_points(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]).unwrap();
        assert!(fit_shape_model(&[a, tri], 1).is_err());
    }

    fn toy_model() -> ShapeModel<f64> {
        let shapes = vec![
            Shape::from_points(&[(0.0, 0.0), (1.0, 0.1), (0.5, 1.0)]).unwrap(),
            Shape::from_points(&[(0.1, 0.0), (0.9, 0.0), (0.5, 0.8)]).unwrap(),
            Shape::from_points(&[(0.0, 0.2), (1.0, 0.0), (0.4, 1.0)]).unwrap(),
            Shape::from_points(&[(0.2, 0.1), (1.0, 0.3), (0.6, 0.9)]).unwrap(),
        ];
        fit_shape_model(&shapes, 3).unwrap()
    }

    #[test]
    fn synthesize_zero_is_mean_and_clamp_saturates() {
        let model = toy_model();
        let s = synthesize(&model, Array1::zeros(3).view(), true).unwrap();
        assert_eq!(s.coords(), model.mean_shape());

        let big = Array1::from_shape_fn(3, |k| 10.0 * model.eigenvalues()[k].sqrt());
        let edge = Array1::from_shape_fn(3, |k| model.limit(k));
        let a = synthesize(&model, big.view(), true).unwrap();
        let b = synthesize(&model, edge.view(), false).unwrap();
        assert_eq!(a, b);
        assert!(synthesize(&model, Array1::zeros(2).view(), true).is_err());
    }

    #[test]
    fn sweep_endpoints_and_middle() {
        let model = toy_model();
        let shapes = sweep_pca_feature(&model, 1, 3).unwrap();
        assert_eq!(shapes.len(), 3);
        assert_eq!(shapes[1].coords(), model.mean_shape());
        let b0 = model.project(&shapes[0]).unwrap();
        assert!((b0[0] + model.limit(0)).abs() < 1e-12);
        assert!(sweep_pca_feature(&model, 0, 3).is_err());
        assert!(sweep_pca_feature(&model, 4, 3).is_err());
        assert!(sweep_pca_feature(&model, 1, 1).is_err());
        assert_eq!(sweep_pca_feature(&model, 2, 2).unwrap().len(), 2);
    }

    #[test]
    fn grid_is_exactly_symmetric() {
        let g: Vec<f64> = symmetric_grid(0.3, 5).collect();
        assert_eq!(g, vec![-0.3, -0.15, 0.0, 0.15, 0.3]);
    }
}
