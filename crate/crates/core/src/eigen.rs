//! Dense symmetric eigendecomposition.
//!
//! Householder reduction to tridiagonal form followed by the implicit QL
//! iteration with Wilkinson-style shifts. Both stages apply orthogonal
//! transforms only, so the accumulated eigenvector basis stays orthonormal
//! even when eigenvalues repeat.
//!
//! Output is normalized so results are reproducible:
//!
//! * eigenvalues are sorted in descending order, ties keep solver order;
//! * each eigenvector is flipped so its largest-magnitude entry is
//!   non-negative (the first such entry when several share the magnitude).

use ndarray::{Array1, Array2, ArrayView2};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A square matrix that has been checked for symmetry and finiteness.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix<T> {
    entries: Array2<T>,
}

impl<T: Scalar> SymmetricMatrix<T> {
    /// Validates `entries`: square, non-empty, all finite, and
    /// `|a_ij - a_ji| <= 1e-12 * max(|a_ij|, |a_ji|)`.
    pub fn new(entries: Array2<T>) -> Result<Self> {
        let (rows, cols) = entries.dim();
        if rows == 0 || rows != cols {
            return Err(Error::InvalidInput(format!(
                "symmetric matrix must be square and non-empty, got {rows}x{cols}"
            )));
        }
        if let Some(((i, j), _)) = entries.indexed_iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite entry at ({i}, {j})"
            )));
        }
        let tol = T::tol(1e-12);
        for i in 0..rows {
            for j in (i + 1)..rows {
                let (a, b) = (entries[[i, j]], entries[[j, i]]);
                if (a - b).abs() > tol * a.abs().max(b.abs()) {
                    return Err(Error::InvalidInput(format!(
                        "matrix not symmetric at ({i}, {j}): {a} vs {b}"
                    )));
                }
            }
        }
        Ok(Self { entries })
    }

    pub fn order(&self) -> usize {
        self.entries.nrows()
    }

    pub fn view(&self) -> ArrayView2<'_, T> {
        self.entries.view()
    }

    pub fn into_inner(self) -> Array2<T> {
        self.entries
    }
}

/// Eigenpairs of a symmetric matrix; `vectors` holds one column per value.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition<T> {
    pub values: Array1<T>,
    pub vectors: Array2<T>,
}

/// Full eigendecomposition of `a`. Deterministic for identical input.
pub fn sym_eig<T: Scalar>(a: &SymmetricMatrix<T>) -> Result<EigenDecomposition<T>> {
    let n = a.order();
    // Row-major working copy of the lower triangle mirrored; the reduction
    // only reads one triangle but a full copy keeps indexing simple.
    let mut v: Vec<T> = a.entries.iter().copied().collect();
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];

    tridiagonalize(n, &mut v, &mut d, &mut e);
    // QL rotates pairs of eigenvector columns; transposing makes them rows.
    let mut w = transpose(n, &v);
    ql_implicit(n, &mut w, &mut d, &mut e)?;

    let mut order: Vec<usize> = (0..n).collect();
    // Stable sort keeps solver order for equal eigenvalues.
    order.sort_by(|&i, &j| d[j].partial_cmp(&d[i]).expect("finite eigenvalues"));

    let values = Array1::from_iter(order.iter().map(|&i| d[i]));
    let mut vectors = Array2::zeros((n, n));
    for (col, &src) in order.iter().enumerate() {
        let row = &w[src * n..(src + 1) * n];
        let mut pivot = 0;
        for (k, x) in row.iter().enumerate() {
            if x.abs() > row[pivot].abs() {
                pivot = k;
            }
        }
        let sign = if row[pivot] < T::zero() {
            -T::one()
        } else {
            T::one()
        };
        for (k, x) in row.iter().enumerate() {
            vectors[[k, col]] = *x * sign;
        }
    }
    Ok(EigenDecomposition { values, vectors })
}

fn transpose<T: Scalar>(n: usize, m: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            out[j * n + i] = m[i * n + j];
        }
    }
    out
}

/// Householder reduction of the row-major `v` (n x n) to tridiagonal form.
/// On return `d` holds the diagonal, `e[1..]` the sub-diagonal and `v` the
/// accumulated orthogonal transform.
fn tridiagonalize<T: Scalar>(n: usize, v: &mut [T], d: &mut [T], e: &mut [T]) {
    let idx = |i: usize, j: usize| i * n + j;
    let zero = T::zero();

    for j in 0..n {
        d[j] = v[idx(n - 1, j)];
    }

    for i in (1..n).rev() {
        let mut scale = zero;
        let mut h = zero;
        for dk in d.iter().take(i) {
            scale = scale + dk.abs();
        }
        if scale == zero {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[idx(i - 1, j)];
                v[idx(i, j)] = zero;
                v[idx(j, i)] = zero;
            }
        } else {
            for dk in d.iter_mut().take(i) {
                *dk = *dk / scale;
                h = h + *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > zero {
                g = -g;
            }
            e[i] = scale * g;
            h = h - f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = zero;
            }

            for j in 0..i {
                f = d[j];
                v[idx(j, i)] = f;
                g = e[j] + v[idx(j, j)] * f;
                for k in (j + 1)..i {
                    g = g + v[idx(k, j)] * d[k];
                    e[k] = e[k] + v[idx(k, j)] * f;
                }
                e[j] = g;
            }
            f = zero;
            for j in 0..i {
                e[j] = e[j] / h;
                f = f + e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] = e[j] - hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[idx(k, j)] = v[idx(k, j)] - (f * e[k] + g * d[k]);
                }
                d[j] = v[idx(i - 1, j)];
                v[idx(i, j)] = zero;
            }
        }
        d[i] = h;
    }

    for i in 0..n.saturating_sub(1) {
        v[idx(n - 1, i)] = v[idx(i, i)];
        v[idx(i, i)] = T::one();
        let h = d[i + 1];
        if h != zero {
            for k in 0..=i {
                d[k] = v[idx(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = zero;
                for k in 0..=i {
                    g = g + v[idx(k, i + 1)] * v[idx(k, j)];
                }
                for k in 0..=i {
                    v[idx(k, j)] = v[idx(k, j)] - g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[idx(k, i + 1)] = zero;
        }
    }
    for j in 0..n {
        d[j] = v[idx(n - 1, j)];
        v[idx(n - 1, j)] = zero;
    }
    v[idx(n - 1, n - 1)] = T::one();
    e[0] = zero;
}

/// Implicit QL on the tridiagonal (`d`, `e`). `w` is the transposed
/// eigenvector matrix: row `i` is eigenvector `i` on return.
fn ql_implicit<T: Scalar>(n: usize, w: &mut [T], d: &mut [T], e: &mut [T]) -> Result<()> {
    const MAX_SWEEPS: usize = 64;
    let zero = T::zero();
    let one = T::one();
    let two = T::lit(2.0);

    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = zero;

    let mut f = zero;
    let mut tst1 = zero;
    let eps = T::epsilon();

    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }

        if m > l {
            let mut sweeps = 0;
            loop {
                sweeps += 1;
                if sweeps > MAX_SWEEPS {
                    return Err(Error::InvalidInput(format!(
                        "eigenvalue {l} did not converge in {MAX_SWEEPS} QL sweeps"
                    )));
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (two * e[l]);
                let mut r = p.hypot(one);
                if p < zero {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di = *di - h;
                }
                f = f + h;

                p = d[m];
                let mut c = one;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = zero;
                let mut s2 = zero;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    let (lo, hi) = w.split_at_mut((i + 1) * n);
                    let row_i = &mut lo[i * n..];
                    let row_next = &mut hi[..n];
                    for (a, b) in row_i.iter_mut().zip(row_next.iter_mut()) {
                        let t = *b;
                        *b = s * *a + c * t;
                        *a = c * *a - s * t;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] = d[l] + f;
        e[l] = zero;
    }
    Ok(())
}
