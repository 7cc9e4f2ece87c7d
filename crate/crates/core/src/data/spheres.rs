//! Two noisy concentric spheres.
//!
//! Draws are made with ChaCha20 (`rand_chacha`), seeded with
//! `seed_from_u64(seed)`; class `c` (0-based) reads from stream `c`, so each
//! class's points depend only on the seed and the class. Per point, in
//! order:
//!
//! 1. `theta = pi * u`, `phi = 2 pi * u` from two uniform draws in `[0, 1)`;
//! 2. three noise values, each from a fresh uniform pair `(u1, u2)` by
//!    Box-Muller: `sqrt(-2 ln(1 - u1)) * cos(2 pi u2)`.
//!
//! Uniforms are `rand`'s standard `f64` sampling (53 random bits).
//! Angles, not surface area, are uniform, so points cluster near the poles.

use std::f64::consts::PI;

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use super::LabeledDataset;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpheresParams {
    /// Total point count, split evenly between the spheres.
    pub n: usize,
    pub r1: f64,
    pub r2: f64,
    pub noise: f64,
    pub seed: u64,
}

impl SpheresParams {
    /// N = 1000, radii 40 and 100, unit noise.
    pub fn paper(seed: u64) -> Self {
        Self {
            n: 1000,
            r1: 40.0,
            r2: 100.0,
            noise: 1.0,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || !self.n.is_multiple_of(2) {
            return Err(Error::arg(format!("point count must be even and positive, got {}", self.n)));
        }
        if !(self.r1 > 0.0 && self.r2 > 0.0) || !self.r1.is_finite() || !self.r2.is_finite() {
            return Err(Error::arg("radii must be positive and finite"));
        }
        if self.r1 == self.r2 {
            return Err(Error::arg("radii must differ"));
        }
        if !(self.noise >= 0.0) || !self.noise.is_finite() {
            return Err(Error::arg("noise level must be non-negative"));
        }
        Ok(())
    }
}

fn standard_normal(rng: &mut ChaCha20Rng) -> f64 {
    let u1: f64 = rng.gen();
    let u2: f64 = rng.gen();
    (-2.0 * (1.0 - u1).ln()).sqrt() * (2.0 * PI * u2).cos()
}

/// Rows `0..n/2` lie on the sphere of radius `r1` (label 1), the rest on
/// radius `r2` (label 2).
pub fn gen_two_spheres<T: Scalar>(p: &SpheresParams) -> Result<LabeledDataset<T>> {
    p.validate()?;
    let half = p.n / 2;
    let mut features = Array2::zeros((p.n, 3));
    let mut labels = Vec::with_capacity(p.n);
    for (class, radius) in [p.r1, p.r2].into_iter().enumerate() {
        let mut rng = ChaCha20Rng::seed_from_u64(p.seed);
        rng.set_stream(class as u64);
        for i in 0..half {
            let theta = PI * rng.gen::<f64>();
            let phi = 2.0 * PI * rng.gen::<f64>();
            let point = [
                theta.sin() * phi.cos(),
                theta.sin() * phi.sin(),
                theta.cos(),
            ];
            let row = class * half + i;
            for (d, &unit) in point.iter().enumerate() {
                let noisy = radius * unit + p.noise * standard_normal(&mut rng);
                features[[row, d]] = T::lit(noisy);
            }
            labels.push(class as i32 + 1);
        }
    }
    LabeledDataset::new(features, labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noiseless_points_sit_on_their_sphere() {
        let p = SpheresParams {
            n: 200,
            noise: 0.0,
            ..SpheresParams::paper(3)
        };
        let d: LabeledDataset<f64> = gen_two_spheres(&p).unwrap();
        for (row, &label) in d.features.rows().into_iter().zip(&d.labels) {
            let r = row.dot(&row).sqrt();
            let want = if label == 1 { 40.0 } else { 100.0 };
            assert!((r - want).abs() < 1e-12 * want);
        }
    }

    #[test]
    fn balanced_and_deterministic() {
        let p = SpheresParams {
            n: 50 * 2,
            ..SpheresParams::paper(42)
        };
        let a: LabeledDataset<f64> = gen_two_spheres(&p).unwrap();
        let b: LabeledDataset<f64> = gen_two_spheres(&p).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.labels.iter().filter(|&&l| l == 1).count(), 50);
        assert_eq!(a.labels.iter().filter(|&&l| l == 2).count(), 50);
        let c: LabeledDataset<f64> = gen_two_spheres(&SpheresParams { seed: 43, ..p }).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn class_streams_are_independent_of_count() {
        // Class 1 draws do not depend on how many class 2 points follow.
        let small: LabeledDataset<f64> =
            gen_two_spheres(&SpheresParams { n: 20, ..SpheresParams::paper(7) }).unwrap();
        let large: LabeledDataset<f64> =
            gen_two_spheres(&SpheresParams { n: 40, ..SpheresParams::paper(7) }).unwrap();
        assert_eq!(small.features.row(0), large.features.row(0));
        assert_eq!(small.features.row(10), large.features.row(20));
    }

    #[test]
    fn invalid_params() {
        let base = SpheresParams::paper(1);
        for p in [
            SpheresParams { n: 999, ..base },
            SpheresParams { n: 0, ..base },
            SpheresParams { r2: 40.0, ..base },
            SpheresParams { noise: -1.0, ..base },
            SpheresParams { r1: 0.0, ..base },
        ] {
            assert!(gen_two_spheres::<f64>(&p).is_err());
        }
    }
}
