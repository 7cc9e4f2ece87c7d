//! Runs the PCA and kPCA feature-1 sweeps on a directory of PTS files and
//! reports convergence and the largest landmark gap between the two.
//!
//! Usage: cargo run --release --example check_sweep -- <pts-dir> [c] [m]

use kpca_lab::shapes::{
    fit_shape_kpca, fit_shape_model, normalize_shapes, read_pts, sweep_kpca_feature, sweep_pca_feature,
};
use kpca_lab::{PreimageConfig64, Shape64};

fn main() {
    let mut args = std::env::args().skip(1);
    let dir = args.next().expect("usage: check_sweep <pts-dir> [c] [m]");
    let c: f64 = args.next().map_or(500.0, |s| s.parse().expect("c"));
    let m: usize = args.next().map_or(10, |s| s.parse().expect("m"));

    let mut paths: Vec<_> = std::fs::read_dir(&dir)
        .expect("read dir")
        .map(|e| e.expect("dir entry").path())
        .filter(|p| p.extension().is_some_and(|e| e == "pts"))
        .collect();
    paths.sort();
    let shapes: Vec<Shape64> = paths.iter().map(|p| read_pts(p).expect("pts")).collect();
    let shapes = normalize_shapes(&shapes).expect("normalize");

    let pca = fit_shape_model(&shapes, 2 * shapes[0].n_points()).expect("pca");
    let linear = sweep_pca_feature(&pca, 1, 5).expect("pca sweep");
    let kmodel = fit_shape_kpca(&shapes, m, None).expect("kpca");
    println!("shapes={} components={}", shapes.len(), kmodel.n_components());
    match sweep_kpca_feature(&kmodel, 1, c, 5, &PreimageConfig64::default()) {
        Ok(sweep) => {
            let mut gap: f64 = 0.0;
            for (a, b) in sweep.iter().zip(&linear) {
                println!("converged={} iterations={}", a.converged, a.iterations);
                for (u, v) in a.shape.coords().iter().zip(b.coords()) {
                    gap = gap.max((u - v).abs());
                }
            }
            println!("max gap {gap:.6}");
        }
        Err(e) => println!("sweep failed: {e}"),
    }
}
