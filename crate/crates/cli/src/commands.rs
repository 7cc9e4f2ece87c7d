use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use kpca_lab::classify::{error_rate, fit_linear, to_signed_labels};
use kpca_lab::data::{gen_two_spheres, read_csv_matrix, read_labels, write_csv_matrix, write_labels, SpheresParams};
use kpca_lab::kpca::{kpca_preimage, select_sigma, PreimageConfig};
use kpca_lab::persist::{read_model, write_model, SavedModel};
use kpca_lab::shapes::{
    fit_shape_kpca, fit_shape_model, normalize_shapes, read_pts, render_face_svg, sweep_kpca_feature,
    sweep_pca_feature, LandmarkRoleMap,
};
use kpca_lab::{fit_kpca, fit_pca, fit_pca_dual, kpca_transform, DataMatrix64, Error, KernelSpec, Shape64};
use ndarray::{s, Array2, Axis};
use serde_json::json;

use crate::manifest::RunManifest;
use crate::plot::scatter_svg;
use crate::{Command, KernelKind, Method, Sigma};

pub enum Status {
    Complete,
    NotConverged,
}

pub fn run(cmd: Command) -> Result<Status> {
    match cmd {
        Command::GenSpheres { n, r1, r2, noise, seed, out_dir } => gen_spheres(n, r1, r2, noise, seed, &out_dir),
        Command::Embed {
            input,
            method,
            kernel,
            degree,
            offset,
            sigma,
            components,
            labels,
            labels_col,
            out_dir,
        } => {
            let spec = resolve_kernel(method, kernel, degree, offset, sigma)?;
            embed(&input, spec, components, labels.as_deref(), labels_col, &out_dir)
        }
        Command::Transform { model, input, output } => transform(&model, &input, &output),
        Command::Classify {
            train_features,
            train_labels,
            test_features,
            test_labels,
            out_dir,
        } => {
            let test = test_features.zip(test_labels);
            classify(&train_features, &train_labels, test.as_ref(), &out_dir)
        }
        Command::Preimage {
            model,
            features,
            max_iter,
            tol,
            out_dir,
        } => preimage(&model, &features, max_iter, tol, &out_dir),
        Command::AsmSweep {
            pts_dir,
            method,
            feature,
            steps,
            c,
            m,
            sigma,
            max_iter,
            tol,
            roles,
            out_dir,
        } => asm_sweep(&SweepArgs {
            pts_dir,
            method,
            feature,
            steps,
            c,
            m,
            sigma,
            max_iter,
            tol,
            roles,
            out_dir,
        }),
    }
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn gen_spheres(n: usize, r1: f64, r2: f64, noise: f64, seed: u64, out: &Path) -> Result<Status> {
    let params = SpheresParams { n, r1, r2, noise, seed };
    let data = gen_two_spheres::<f64>(&params)?;
    create_dir(out)?;
    let features = out.join("features.csv");
    let labels = out.join("labels.csv");
    write_csv_matrix(&data.features, &features)?;
    write_labels(&data.labels, &labels)?;

    let mut m = RunManifest::new("gen-spheres");
    m.seed = Some(seed);
    m.param("n", n)
        .param("r1", r1)
        .param("r2", r2)
        .param("noise", noise)
        .param("prng", "ChaCha20, one stream per class")
        .output(&features)
        .output(&labels);
    m.write(out)?;
    Ok(Status::Complete)
}

/// What the embed flags ask for, before the Gaussian width is resolved.
#[derive(Debug, Clone, Copy)]
enum EmbedSpec {
    Pca,
    Kpca { kernel: KernelKind, degree: u32, offset: f64, sigma: Sigma },
}

fn resolve_kernel(
    method: Method,
    kernel: Option<KernelKind>,
    degree: Option<u32>,
    offset: Option<f64>,
    sigma: Option<Sigma>,
) -> Result<EmbedSpec> {
    if method == Method::Pca {
        ensure!(
            kernel.is_none() && degree.is_none() && offset.is_none() && sigma.is_none(),
            "--kernel, --degree, --offset and --sigma only apply to --method kpca"
        );
        return Ok(EmbedSpec::Pca);
    }
    let kernel = kernel.unwrap_or(KernelKind::Gaussian);
    if kernel != KernelKind::Poly {
        ensure!(
            degree.is_none() && offset.is_none(),
            "--degree and --offset only apply to --kernel poly"
        );
    }
    if kernel != KernelKind::Gaussian {
        ensure!(sigma.is_none(), "--sigma only applies to --kernel gaussian");
    }
    Ok(EmbedSpec::Kpca {
        kernel,
        degree: degree.unwrap_or(5),
        offset: offset.unwrap_or(0.0),
        sigma: sigma.unwrap_or(Sigma::Auto),
    })
}

fn labels_from_column(x: DataMatrix64, col: usize) -> Result<(DataMatrix64, Vec<i32>)> {
    ensure!(col < x.ncols(), "--labels-col {col} but the input has {} columns", x.ncols());
    ensure!(x.ncols() >= 2, "--labels-col leaves no feature columns");
    let mut labels = Vec::with_capacity(x.nrows());
    for (i, &v) in x.column(col).iter().enumerate() {
        ensure!(
            v.fract() == 0.0 && v.abs() <= f64::from(i32::MAX),
            "row {}: label {v} is not an integer",
            i + 1
        );
        labels.push(v as i32);
    }
    let keep: Vec<usize> = (0..x.ncols()).filter(|&j| j != col).collect();
    Ok((x.select(Axis(1), &keep), labels))
}

fn embed(
    input: &Path,
    spec: EmbedSpec,
    components: usize,
    labels_path: Option<&Path>,
    labels_col: Option<usize>,
    out: &Path,
) -> Result<Status> {
    let mut manifest = RunManifest::new("embed");
    manifest.input(input);
    let mut x: DataMatrix64 = read_csv_matrix(input)?;
    let mut labels = None;
    if let Some(col) = labels_col {
        let (features, l) = labels_from_column(x, col)?;
        x = features;
        labels = Some(l);
        manifest.param("labels_col", col);
    }
    if let Some(path) = labels_path {
        let l = read_labels(path)?;
        ensure!(l.len() == x.nrows(), "{} labels for {} rows", l.len(), x.nrows());
        labels = Some(l);
        manifest.input(path);
    }
    let (n, d) = x.dim();
    manifest.param("components", components).param("rows", n).param("dims", d);

    let (model, features, title) = match spec {
        EmbedSpec::Pca => {
            // The N x N route is cheaper whenever there are more dimensions than samples.
            let dual = d > n;
            let model = if dual { fit_pca_dual(x.view(), components)? } else { fit_pca(x.view(), components)? };
            let features = model.project_rows(x.view())?;
            manifest.param("method", "pca").param("dual", dual);
            (SavedModel::Pca(model), features, "PCA".to_string())
        }
        EmbedSpec::Kpca { kernel, degree, offset, sigma } => {
            let spec = match kernel {
                KernelKind::Linear => KernelSpec::Linear,
                KernelKind::Poly => KernelSpec::polynomial(degree, offset)?,
                KernelKind::Gaussian => {
                    let value = match sigma {
                        Sigma::Auto => select_sigma(x.view())?,
                        Sigma::Value(v) => v,
                    };
                    manifest.param("sigma_mode", if sigma == Sigma::Auto { "auto" } else { "given" });
                    KernelSpec::gaussian(value)?
                }
            };
            let model = fit_kpca(x.view(), &spec, components)?;
            if model.n_components() < components {
                eprintln!(
                    "warning: only {} of {components} kernel components have non-negligible variance",
                    model.n_components()
                );
            }
            let features = kpca_transform(&model, x.view())?;
            manifest.param("method", "kpca").param("kernel", spec.name());
            let title = match spec {
                KernelSpec::Linear => "kernel PCA, linear".to_string(),
                KernelSpec::Polynomial { degree, offset } => {
                    manifest.param("degree", degree).param("offset", offset);
                    format!("kernel PCA, polynomial d={degree} c={offset}")
                }
                KernelSpec::Gaussian { sigma } => {
                    manifest.param("sigma", sigma);
                    format!("kernel PCA, gaussian sigma={sigma:.4}")
                }
            };
            manifest.param("retained_components", model.n_components());
            (SavedModel::Kpca(model), features, title)
        }
    };

    create_dir(out)?;
    let feat_path = out.join("features.csv");
    write_csv_matrix(&features, &feat_path)?;
    let model_path = out.join("model.bin");
    write_model(&model_path, &model)?;
    manifest.output(&feat_path).output(&model_path);
    if let Some(l) = &labels {
        let path = out.join("labels.csv");
        write_labels(l, &path)?;
        manifest.output(&path);
    }
    if features.ncols() > 0 {
        let path = out.join("scatter.svg");
        let shown = features.slice(s![.., ..features.ncols().min(2)]);
        write_text(&path, &scatter_svg(shown, labels.as_deref(), &title))?;
        manifest.output(&path);
    }
    manifest.write(out)?;
    Ok(Status::Complete)
}

fn transform(model_path: &Path, input: &Path, output: &Path) -> Result<Status> {
    let x: DataMatrix64 = read_csv_matrix(input)?;
    let y = match read_model::<f64>(model_path)? {
        SavedModel::Pca(m) => m.project_rows(x.view())?,
        SavedModel::Kpca(m) => kpca_transform(&m, x.view())?,
    };
    if let Some(dir) = output.parent().filter(|p| !p.as_os_str().is_empty()) {
        create_dir(dir)?;
    }
    write_csv_matrix(&y, output)?;
    Ok(Status::Complete)
}

fn classify(
    train_features: &Path,
    train_labels: &Path,
    test: Option<&(PathBuf, PathBuf)>,
    out: &Path,
) -> Result<Status> {
    let mut manifest = RunManifest::new("classify");
    manifest.input(train_features).input(train_labels);
    let x: DataMatrix64 = read_csv_matrix(train_features)?;
    let raw = read_labels(train_labels)?;
    ensure!(raw.len() == x.nrows(), "{} training labels for {} rows", raw.len(), x.nrows());
    let (y, classes) = to_signed_labels(&raw)?;
    let c = fit_linear(x.view(), &y)?;
    let train_err = error_rate(&c, x.view(), &y)?;

    let mut report = format!("classes: {} -> +1, {} -> -1\ntrain error: {:.4}%\n", classes[0], classes[1], 100.0 * train_err);
    let mut test_err = None;
    if let Some((tf, tl)) = test {
        manifest.input(tf).input(tl);
        let xt: DataMatrix64 = read_csv_matrix(tf)?;
        ensure!(
            xt.ncols() == x.ncols(),
            "test features have {} columns, training features {}",
            xt.ncols(),
            x.ncols()
        );
        let raw_t = read_labels(tl)?;
        ensure!(raw_t.len() == xt.nrows(), "{} test labels for {} rows", raw_t.len(), xt.nrows());
        let mut yt = Vec::with_capacity(raw_t.len());
        for &l in &raw_t {
            yt.push(if l == classes[0] {
                1
            } else if l == classes[1] {
                -1
            } else {
                bail!("test label {l} is not one of the training classes {classes:?}")
            });
        }
        let e = error_rate(&c, xt.view(), &yt)?;
        let _ = writeln!(report, "test error: {:.4}%", 100.0 * e);
        test_err = Some(e);
    }
    print!("{report}");

    create_dir(out)?;
    let path = out.join("report.json");
    let body = json!({
        "classes": classes,
        "train_error": train_err,
        "test_error": test_err,
        "weights": c.weights().to_vec(),
    });
    write_text(&path, &(serde_json::to_string_pretty(&body)? + "\n"))?;
    manifest.output(&path).param("ridge", kpca_lab::classify::RIDGE);
    manifest.write(out)?;
    Ok(Status::Complete)
}

fn preimage(model_path: &Path, features: &Path, max_iter: usize, tol: f64, out: &Path) -> Result<Status> {
    let model = match read_model::<f64>(model_path)? {
        SavedModel::Kpca(m) => m,
        SavedModel::Pca(_) => bail!("{}: pre-images need a kernel PCA model", model_path.display()),
    };
    let y: DataMatrix64 = read_csv_matrix(features)?;
    ensure!(
        y.ncols() == model.n_components(),
        "feature rows have {} columns but the model has {} components",
        y.ncols(),
        model.n_components()
    );
    let cfg = PreimageConfig { max_iterations: max_iter, tolerance: tol, initial: None };
    cfg.validate()?;

    let mut z = Array2::from_elem((y.nrows(), model.dim()), f64::NAN);
    let mut report = String::from("row,status,iterations\n");
    let mut failing = Vec::new();
    for (i, row) in y.rows().into_iter().enumerate() {
        match kpca_preimage(&model, row, &cfg) {
            Ok(p) => {
                z.row_mut(i).assign(&p.z);
                let status = if p.converged { "converged" } else { "not_converged" };
                if !p.converged {
                    failing.push(i);
                }
                let _ = writeln!(report, "{i},{status},{}", p.iterations);
            }
            Err(Error::Divergence { iteration, iterate, .. }) => {
                for (dst, v) in z.row_mut(i).iter_mut().zip(iterate) {
                    *dst = v;
                }
                failing.push(i);
                let _ = writeln!(report, "{i},diverged,{iteration}");
            }
            Err(e) => return Err(e.into()),
        }
    }

    create_dir(out)?;
    let z_path = out.join("preimages.csv");
    let r_path = out.join("report.csv");
    write_csv_matrix(&z, &z_path)?;
    write_text(&r_path, &report)?;
    let mut manifest = RunManifest::new("preimage");
    manifest
        .input(model_path)
        .input(features)
        .param("max_iter", max_iter)
        .param("tol", tol)
        .param("failing_rows", failing.clone())
        .output(&z_path)
        .output(&r_path);
    manifest.write(out)?;

    if failing.is_empty() {
        Ok(Status::Complete)
    } else {
        let rows: Vec<String> = failing.iter().map(usize::to_string).collect();
        eprintln!("pre-image did not converge for rows: {}", rows.join(", "));
        Ok(Status::NotConverged)
    }
}

struct SweepArgs {
    pts_dir: PathBuf,
    method: Method,
    feature: usize,
    steps: usize,
    c: f64,
    m: usize,
    sigma: Sigma,
    max_iter: usize,
    tol: f64,
    roles: Option<PathBuf>,
    out_dir: PathBuf,
}

fn load_shapes(dir: &Path) -> Result<(Vec<PathBuf>, Vec<Shape64>)> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    paths.retain(|p| p.extension().is_some_and(|e| e.eq_ignore_ascii_case("pts")));
    paths.sort();
    ensure!(paths.len() >= 2, "{} holds {} .pts files, need at least 2", dir.display(), paths.len());
    let shapes = paths.iter().map(read_pts).collect::<kpca_lab::Result<Vec<Shape64>>>()?;
    let shapes = normalize_shapes(&shapes).map_err(|e| match e {
        Error::DegenerateShape { index, axis } => {
            anyhow::anyhow!("{}: degenerate shape, all {axis} coordinates equal", paths[index].display())
        }
        other => other.into(),
    })?;
    Ok((paths, shapes))
}

fn asm_sweep(a: &SweepArgs) -> Result<Status> {
    let (paths, shapes) = load_shapes(&a.pts_dir)?;
    let roles = match &a.roles {
        Some(p) => LandmarkRoleMap::read(p)?,
        None => LandmarkRoleMap::default(),
    };
    roles.validate(shapes[0].n_points())?;

    let mut manifest = RunManifest::new("asm-sweep");
    manifest.input(&a.pts_dir);
    if let Some(p) = &a.roles {
        manifest.input(p);
    }
    manifest
        .param("shapes", paths.len())
        .param("feature", a.feature)
        .param("steps", a.steps);

    let mut not_converged = Vec::new();
    let swept: Vec<Shape64> = match a.method {
        Method::Pca => {
            let t = (2 * shapes[0].n_points()).min(shapes.len());
            let model = fit_shape_model(&shapes, t)?;
            manifest.param("method", "pca").param("modes", t);
            sweep_pca_feature(&model, a.feature, a.steps)?
        }
        Method::Kpca => {
            let sigma = match a.sigma {
                Sigma::Auto => None,
                Sigma::Value(v) => Some(v),
            };
            let model = fit_shape_kpca(&shapes, a.m, sigma)?;
            let cfg = PreimageConfig { max_iterations: a.max_iter, tolerance: a.tol, initial: None };
            let width = match model.spec() {
                KernelSpec::Gaussian { sigma } => *sigma,
                _ => unreachable!("shape kernel PCA is gaussian"),
            };
            manifest
                .param("method", "kpca")
                .param("c", a.c)
                .param("m", a.m)
                .param("retained_components", model.n_components())
                .param("sigma", width)
                .param("max_iter", a.max_iter)
                .param("tol", a.tol);
            let sweep = sweep_kpca_feature(&model, a.feature, a.c, a.steps, &cfg)?;
            let mut out = Vec::with_capacity(sweep.len());
            for (i, s) in sweep.into_iter().enumerate() {
                if !s.converged {
                    not_converged.push(i);
                }
                out.push(s.shape);
            }
            out
        }
    };

    create_dir(&a.out_dir)?;
    let mut coords = Array2::zeros((swept.len(), swept[0].coords().len()));
    for (i, shape) in swept.iter().enumerate() {
        coords.row_mut(i).assign(shape.coords());
        let path = a.out_dir.join(format!("step_{i:02}.svg"));
        write_text(&path, &render_face_svg(shape, &roles)?)?;
        manifest.output(&path);
    }
    let csv = a.out_dir.join("shapes.csv");
    write_csv_matrix(&coords, &csv)?;
    manifest.output(&csv).param("not_converged_steps", not_converged.clone());
    manifest.write(&a.out_dir)?;

    if not_converged.is_empty() {
        Ok(Status::Complete)
    } else {
        eprintln!("pre-image did not converge for steps: {not_converged:?}");
        Ok(Status::NotConverged)
    }
}
