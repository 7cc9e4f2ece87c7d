use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kpca-lab"))
}

fn run(args: &[&str], cwd: &Path) -> Output {
    bin().args(args).current_dir(cwd).output().expect("spawn kpca-lab")
}

fn faces() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/faces")
}

fn read_matrix(path: &Path) -> Vec<Vec<f64>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

fn manifest(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

#[test]
fn gen_spheres_defaults_and_determinism() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    assert!(run(&["gen-spheres", "--seed", "42", "--out-dir", "a"], d).status.success());
    assert!(run(&["gen-spheres", "--seed", "42", "--out-dir", "b"], d).status.success());
    let a = read_matrix(&d.join("a/features.csv"));
    assert_eq!(a.len(), 1000);
    assert!(a.iter().all(|r| r.len() == 3));
    for f in ["features.csv", "labels.csv"] {
        assert_eq!(fs::read(d.join("a").join(f)).unwrap(), fs::read(d.join("b").join(f)).unwrap());
    }
    let m = manifest(&d.join("a"));
    assert_eq!(m["subcommand"], "gen-spheres");
    assert_eq!(m["seed"], 42);
    assert_eq!(m["parameters"]["r2"], 100.0);

    assert!(run(&["gen-spheres", "--seed", "1", "--n", "10", "--out-dir", "c"], d).status.success());
    assert_eq!(read_matrix(&d.join("c/features.csv")).len(), 10);
}

#[test]
fn missing_seed_is_a_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&["gen-spheres", "--out-dir", "x"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unwritable_output_fails() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("file"), "").unwrap();
    let out = run(&["gen-spheres", "--seed", "1", "--n", "10", "--out-dir", "file/sub"], tmp.path());
    assert_eq!(out.status.code(), Some(1));
}

fn spheres(d: &Path, n: &str) {
    assert!(run(&["gen-spheres", "--seed", "7", "--n", n, "--out-dir", "sph"], d).status.success());
}

#[test]
fn embed_classify_pipeline_on_spheres() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    spheres(d, "300");
    let k = run(
        &["embed", "--input", "sph/features.csv", "--labels", "sph/labels.csv", "--method", "kpca", "--kernel", "gaussian", "--sigma", "auto", "--out-dir", "k"],
        d,
    );
    assert!(k.status.success(), "{}", String::from_utf8_lossy(&k.stderr));
    let m = manifest(&d.join("k"));
    assert!(m["parameters"]["sigma"].as_f64().unwrap() > 0.0);
    let svg = fs::read_to_string(d.join("k/scatter.svg")).unwrap();
    assert_eq!(svg.matches("<circle").count(), 300 + 2);

    let p = run(&["embed", "--input", "sph/features.csv", "--labels", "sph/labels.csv", "--method", "pca", "--out-dir", "p"], d);
    assert!(p.status.success());

    let c = run(
        &["classify", "--train-features", "k/features.csv", "--train-labels", "k/labels.csv", "--test-features", "k/features.csv", "--test-labels", "k/labels.csv", "--out-dir", "ck"],
        d,
    );
    assert!(c.status.success());
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.join("ck/report.json")).unwrap()).unwrap();
    assert!(report["train_error"].as_f64().unwrap() <= 0.01);
    assert_eq!(report["train_error"], report["test_error"]);

    assert!(run(&["classify", "--train-features", "p/features.csv", "--train-labels", "p/labels.csv", "--out-dir", "cp"], d).status.success());
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.join("cp/report.json")).unwrap()).unwrap();
    assert!(report["train_error"].as_f64().unwrap() >= 0.2);
}

#[test]
fn embed_polynomial_and_flag_errors() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    spheres(d, "100");
    let ok = run(&["embed", "--input", "sph/features.csv", "--method", "kpca", "--kernel", "poly", "--degree", "5", "--out-dir", "poly"], d);
    assert!(ok.status.success());
    assert_eq!(manifest(&d.join("poly"))["parameters"]["degree"], 5);

    let bad = run(&["embed", "--input", "sph/features.csv", "--method", "kpca", "--kernel", "linear", "--sigma", "2", "--out-dir", "x"], d);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("--sigma"));

    let bad = run(&["embed", "--input", "sph/features.csv", "--method", "fancy", "--out-dir", "x"], d);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn embed_labels_column_and_dual_path() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    // 4 rows, 6 feature columns plus a label column in position 0.
    let rows = ["1,0,1,2,3,4,5", "1,1,0,2,3,4,5", "2,5,4,3,2,1,0", "2,4,5,3,2,1,1"];
    fs::write(d.join("wide.csv"), rows.join("\n") + "\n").unwrap();
    let out = run(&["embed", "--input", "wide.csv", "--labels-col", "0", "--method", "pca", "--out-dir", "w"], d);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let m = manifest(&d.join("w"));
    assert_eq!(m["parameters"]["dual"], true);
    assert_eq!(m["parameters"]["dims"], 6);
    assert_eq!(fs::read_to_string(d.join("w/labels.csv")).unwrap(), "1\n1\n2\n2\n");
}

#[test]
fn preimage_round_trip_and_non_convergence() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    spheres(d, "60");
    assert!(run(&["embed", "--input", "sph/features.csv", "--components", "60", "--out-dir", "k"], d).status.success());

    let ok = run(&["preimage", "--model", "k/model.bin", "--features", "k/features.csv", "--out-dir", "pre"], d);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    let orig = read_matrix(&d.join("sph/features.csv"));
    let back = read_matrix(&d.join("pre/preimages.csv"));
    let close = orig
        .iter()
        .zip(&back)
        .filter(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt() < 1e-3)
        .count();
    assert!(close >= 57, "{close}");

    let one = run(&["preimage", "--model", "k/model.bin", "--features", "k/features.csv", "--max-iter", "1", "--out-dir", "one"], d);
    assert_eq!(one.status.code(), Some(3));
    let report = fs::read_to_string(d.join("one/report.csv")).unwrap();
    assert!(report.lines().nth(1).unwrap().ends_with(",not_converged,1"));
    assert!(String::from_utf8_lossy(&one.stderr).contains("rows: 0, 1"));
}

#[test]
fn preimage_of_zero_on_symmetric_pair_is_midpoint() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    fs::write(d.join("pair.csv"), "0,0\n2,4\n").unwrap();
    assert!(run(&["embed", "--input", "pair.csv", "--components", "1", "--sigma", "3", "--out-dir", "k"], d).status.success());
    fs::write(d.join("zero.csv"), "0\n").unwrap();
    assert!(run(&["preimage", "--model", "k/model.bin", "--features", "zero.csv", "--out-dir", "pre"], d).status.success());
    let z = read_matrix(&d.join("pre/preimages.csv"));
    assert!((z[0][0] - 1.0).abs() < 1e-9 && (z[0][1] - 2.0).abs() < 1e-9);
}

#[test]
fn transform_matches_embed_features() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    spheres(d, "50");
    assert!(run(&["embed", "--input", "sph/features.csv", "--method", "pca", "--out-dir", "p"], d).status.success());
    assert!(run(&["transform", "--model", "p/model.bin", "--input", "sph/features.csv", "--output", "t.csv"], d).status.success());
    let a = read_matrix(&d.join("p/features.csv"));
    let b = read_matrix(&d.join("t.csv"));
    assert_eq!(a, b);
}

#[test]
fn asm_sweeps_on_bundled_corpus() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let dir = faces();
    let dir = dir.to_str().unwrap();

    assert!(run(&["asm-sweep", "--pts-dir", dir, "--method", "pca", "--feature", "1", "--steps", "5", "--out-dir", "pca"], d).status.success());
    let svgs: Vec<_> = (0..5).map(|i| fs::read_to_string(d.join(format!("pca/step_{i:02}.svg"))).unwrap()).collect();
    assert_ne!(svgs[0], svgs[4]);

    let k = run(&["asm-sweep", "--pts-dir", dir, "--method", "kpca", "--feature", "1", "--c", "500", "--out-dir", "kpca"], d);
    assert_eq!(k.status.code(), Some(0), "{}", String::from_utf8_lossy(&k.stderr));
    let lin = read_matrix(&d.join("pca/shapes.csv"));
    let ker = read_matrix(&d.join("kpca/shapes.csv"));
    assert_eq!(ker.len(), 5);
    let gap = lin
        .iter()
        .zip(&ker)
        .flat_map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()))
        .fold(0.0f64, f64::max);
    assert!(gap > 1e-3);

    assert!(run(&["asm-sweep", "--pts-dir", dir, "--steps", "2", "--out-dir", "two"], d).status.success());
    assert!(d.join("two/step_01.svg").exists() && !d.join("two/step_02.svg").exists());
}

#[test]
fn asm_sweep_middle_step_is_mean_shape() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let dir = faces();
    assert!(run(&["asm-sweep", "--pts-dir", dir.to_str().unwrap(), "--steps", "3", "--out-dir", "s"], d).status.success());
    let shapes = read_matrix(&d.join("s/shapes.csv"));
    // The sweep is symmetric about the mean, so the middle step is the endpoints' average.
    for j in 0..shapes[0].len() {
        let mid = 0.5 * (shapes[0][j] + shapes[2][j]);
        assert!((shapes[1][j] - mid).abs() < 1e-12);
    }
}

#[test]
fn degenerate_shape_is_reported_by_file() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let pts = d.join("pts");
    fs::create_dir(&pts).unwrap();
    fs::write(pts.join("a.pts"), "version: 1\nn_points: 3\n{\n0 0\n1 0\n0 1\n}\n").unwrap();
    fs::write(pts.join("flat.pts"), "version: 1\nn_points: 3\n{\n0 0\n1 0\n2 0\n}\n").unwrap();
    let out = run(&["asm-sweep", "--pts-dir", "pts", "--out-dir", "o"], d);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("flat.pts"));
}

#[test]
fn thread_count_does_not_change_results() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    spheres(d, "200");
    for (threads, out) in [("1", "one"), ("4", "four")] {
        let s = bin()
            .args(["embed", "--input", "sph/features.csv", "--out-dir", out])
            .env("KPCA_LAB_THREADS", threads)
            .current_dir(d)
            .status()
            .unwrap();
        assert!(s.success());
    }
    assert_eq!(fs::read(d.join("one/features.csv")).unwrap(), fs::read(d.join("four/features.csv")).unwrap());
    let bad = bin()
        .args(["gen-spheres", "--seed", "1", "--n", "4", "--out-dir", "z"])
        .env("KPCA_LAB_THREADS", "zero")
        .current_dir(d)
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}
