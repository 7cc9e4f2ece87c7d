#![allow(dead_code)]

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn normal(rng: &mut ChaCha20Rng) -> f64 {
    let u1: f64 = rng.gen();
    let u2: f64 = rng.gen();
    (-2.0 * (1.0 - u1).ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

pub fn random_matrix(rng: &mut ChaCha20Rng, rows: usize, cols: usize) -> Array2<f64> {
    Array2::from_shape_fn((rows, cols), |_| normal(rng))
}

pub fn random_symmetric(rng: &mut ChaCha20Rng, n: usize) -> Array2<f64> {
    let a = random_matrix(rng, n, n);
    Array2::from_shape_fn((n, n), |(i, j)| 0.5 * (a[[i, j]] + a[[j, i]]))
}

/// `B B^T` for a random `n x r` factor: symmetric positive semidefinite.
pub fn random_psd(rng: &mut ChaCha20Rng, n: usize, r: usize) -> Array2<f64> {
    let b = random_matrix(rng, n, r);
    b.dot(&b.t())
}

pub fn max_abs_diff(a: ArrayView2<'_, f64>, b: ArrayView2<'_, f64>) -> f64 {
    assert_eq!(a.dim(), b.dim());
    a.iter().zip(b.iter()).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Largest deviation between matching columns after flipping each column
/// of `b` to agree in sign with `a`.
pub fn max_diff_up_to_sign(a: ArrayView2<'_, f64>, b: ArrayView2<'_, f64>) -> f64 {
    assert_eq!(a.dim(), b.dim());
    let mut worst: f64 = 0.0;
    for (ca, cb) in a.columns().into_iter().zip(b.columns()) {
        let same = ca.iter().zip(cb.iter()).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        let flip = ca.iter().zip(cb.iter()).fold(0.0f64, |m, (x, y)| m.max((x + y).abs()));
        worst = worst.max(same.min(flip));
    }
    worst
}

/// Centering by explicit loops over `K - 1K - K1 + 1K1`.
pub fn brute_center(k: ArrayView2<'_, f64>) -> Array2<f64> {
    let n = k.nrows();
    let nf = n as f64;
    let mut out = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            let mut row = 0.0;
            let mut col = 0.0;
            let mut all = 0.0;
            for l in 0..n {
                row += k[[i, l]];
                col += k[[l, j]];
                for m in 0..n {
                    all += k[[l, m]];
                }
            }
            out[[i, j]] = k[[i, j]] - row / nf - col / nf + all / (nf * nf);
        }
    }
    out
}

/// Sample covariance with the 1/N convention, by loops.
pub fn covariance(x: ArrayView2<'_, f64>) -> Array2<f64> {
    let (n, d) = x.dim();
    let mean: Vec<f64> = (0..d).map(|j| (0..n).map(|i| x[[i, j]]).sum::<f64>() / n as f64).collect();
    let mut s = Array2::zeros((d, d));
    for a in 0..d {
        for b in 0..d {
            s[[a, b]] = (0..n).map(|i| (x[[i, a]] - mean[a]) * (x[[i, b]] - mean[b])).sum::<f64>() / n as f64;
        }
    }
    s
}

pub fn trace(a: ArrayView2<'_, f64>) -> f64 {
    a.diag().sum()
}

/// Right-hand side of the Gaussian pre-image fixed-point map, evaluated
/// directly from the training rows and weights.
pub fn preimage_map(train: ArrayView2<'_, f64>, w: ArrayView1<'_, f64>, sigma: f64, z: ArrayView1<'_, f64>) -> Array1<f64> {
    let mut num = Array1::zeros(train.ncols());
    let mut den = 0.0;
    for (x, &wi) in train.rows().into_iter().zip(w.iter()) {
        let d2: f64 = x.iter().zip(z.iter()).map(|(a, b)| (a - b) * (a - b)).sum();
        let g = wi * (-d2 / (2.0 * sigma * sigma)).exp();
        num.scaled_add(g, &x);
        den += g;
    }
    num / den
}

pub fn norm(v: ArrayView1<'_, f64>) -> f64 {
    v.dot(&v).sqrt()
}
