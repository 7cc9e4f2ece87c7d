//! PCA, kernel PCA and point distribution models.
//!
//! * [`eigen`]: deterministic dense symmetric eigendecomposition.
//! * [`pca`]: standard PCA with primal and dual (N x N) fitting.
//! * [`kernels`]: linear, polynomial and Gaussian kernels; Gram centering.
//! * [`kpca`]: kernel PCA, out-of-sample projection, Gaussian pre-images
//!   and the nearest-neighbour width heuristic.
//! * [`shapes`]: landmark shapes, PCA and kernel-PCA shape models,
//!   deformation sweeps and face rendering.
//! * [`classify`]: least-squares linear classifier.
//! * [`data`]: two-spheres generator, CSV and PGM ingestion.
//! * [`persist`]: binary model container.
//!
//! Everything numerical is generic over [`Scalar`] (`f32` or `f64`); the
//! `*64` aliases below fix the common double-precision case.
//!
//! ```
//! use kpca_lab::{fit_kpca, kpca_transform, select_sigma, KernelSpec};
//! use ndarray::array;
//!
//! let x = array![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [4.0, 4.0]];
//! let sigma = select_sigma(x.view()).unwrap();
//! let model = fit_kpca(x.view(), &KernelSpec::gaussian(sigma).unwrap(), 2).unwrap();
//! let y = kpca_transform(&model, x.view()).unwrap();
//! assert_eq!(y.dim(), (4, 2));
//! ```

pub mod classify;
pub mod data;
pub mod eigen;
mod error;
pub mod kernels;
pub mod kpca;
pub mod pca;
pub mod persist;
mod scalar;
pub mod shapes;

pub use classify::{error_rate, fit_linear, predict, predict_batch, LinearClassifier};
pub use eigen::{sym_eig, EigenDecomposition, SymmetricMatrix};
pub use error::{Error, Result};
pub use kernels::{center_cross, center_gram, eval_kernel, kernel_matrix, KernelSpec};
pub use kpca::{
    fit_kpca, kpca_preimage, kpca_transform, select_sigma, KpcaModel, Preimage, PreimageConfig,
};
pub use pca::{fit_pca, fit_pca_dual, pca_project, pca_reconstruct, PcaModel};
pub use scalar::Scalar;
pub use shapes::{LandmarkRoleMap, Shape, ShapeModel};

/// Dense N x D sample matrix, one row per sample.
pub type DataMatrix<T> = ndarray::Array2<T>;

pub type DataMatrix64 = DataMatrix<f64>;
pub type KernelSpec64 = KernelSpec<f64>;
pub type PcaModel64 = PcaModel<f64>;
pub type KpcaModel64 = KpcaModel<f64>;
pub type PreimageConfig64 = PreimageConfig<f64>;
pub type ShapeModel64 = ShapeModel<f64>;
pub type Shape64 = Shape<f64>;
pub type LinearClassifier64 = LinearClassifier<f64>;

pub type PcaModel32 = PcaModel<f32>;
pub type KpcaModel32 = KpcaModel<f32>;
pub type ShapeModel32 = ShapeModel<f32>;
