//! Writes a synthetic corpus of 20-point face annotations in BioID order.
//!
//! Usage: cargo run --example synth_faces -- <out-dir> [count] [seed]

use std::path::PathBuf;

use kpca_lab::shapes::write_pts;
use kpca_lab::Shape64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

// Neutral face in image coordinates (y grows downwards).
const TEMPLATE: [(f64, f64); 20] = [
    (150.0, 120.0), // 0 right pupil
    (230.0, 120.0), // 1 left pupil
    (160.0, 215.0), // 2 right mouth corner
    (220.0, 215.0), // 3 left mouth corner
    (125.0, 100.0), // 4 right brow, outer
    (172.0, 102.0), // 5 right brow, inner
    (208.0, 102.0), // 6 left brow, inner
    (255.0, 100.0), // 7 left brow, outer
    (105.0, 125.0), // 8 right temple
    (137.0, 121.0), // 9 right eye, outer
    (163.0, 121.0), // 10 right eye, inner
    (217.0, 121.0), // 11 left eye, inner
    (243.0, 121.0), // 12 left eye, outer
    (275.0, 125.0), // 13 left temple
    (190.0, 170.0), // 14 nose tip
    (177.0, 180.0), // 15 right nostril
    (203.0, 180.0), // 16 left nostril
    (190.0, 205.0), // 17 upper lip
    (190.0, 228.0), // 18 lower lip
    (190.0, 268.0), // 19 chin
];

fn gauss(rng: &mut ChaCha20Rng) -> f64 {
    let u1: f64 = rng.gen();
    let u2: f64 = rng.gen();
    (-2.0 * (1.0 - u1).ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn face(rng: &mut ChaCha20Rng) -> Shape64 {
    let mut p = TEMPLATE;
    let smile = gauss(rng);
    let brow = gauss(rng);
    let open = gauss(rng).abs();
    let width = gauss(rng);
    let jaw = gauss(rng);

    for i in [2, 3] {
        p[i].1 -= 6.0 * smile;
        p[i].0 += if i == 2 { -4.0 } else { 4.0 } * smile;
    }
    for i in 4..=7 {
        p[i].1 -= 5.0 * brow;
    }
    p[18].1 += 10.0 * open;
    p[19].1 += 6.0 * open + 8.0 * jaw;
    p[8].0 -= 8.0 * width;
    p[13].0 += 8.0 * width;

    let scale = rng.gen_range(0.9..1.1);
    let (dx, dy) = (rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
    let pts: Vec<(f64, f64)> = p
        .iter()
        .map(|&(x, y)| {
            let (nx, ny) = (1.5 * gauss(rng), 1.5 * gauss(rng));
            (scale * (x + nx) + dx, scale * (y + ny) + dy)
        })
        .collect();
    Shape64::from_points(&pts).expect("finite template")
}

fn main() {
    let mut args = std::env::args().skip(1);
    let out = PathBuf::from(args.next().expect("usage: synth_faces <out-dir> [count] [seed]"));
    let count: usize = args.next().map_or(40, |s| s.parse().expect("count"));
    let seed: u64 = args.next().map_or(7, |s| s.parse().expect("seed"));
    std::fs::create_dir_all(&out).expect("create output directory");
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    for i in 0..count {
        let path = out.join(format!("face_{i:03}.pts"));
        write_pts(&path, &face(&mut rng)).expect("write pts");
    }
}
