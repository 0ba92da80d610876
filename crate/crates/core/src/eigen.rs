//! Dense symmetric eigensolver.
//!
//! The matrix is reduced to tridiagonal form by Householder reflections and
//! the tridiagonal problem is solved by implicit QL iteration with Wilkinson
//! shifts. Eigenvectors are kept transposed (one vector per row) so every
//! plane rotation and reflection touches contiguous memory.

use crate::error::{Error, Result};
use crate::graph::SymmetricMatrix;

/// QL sweeps allowed per eigenvalue before giving up.
pub const MAX_SWEEPS: usize = 30;

/// Ascending eigenvalues with matching orthonormal eigenvectors.
///
/// Each eigenvector's entry of largest magnitude (first one on ties) is
/// positive, so the decomposition of a given matrix is fully deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    n: usize,
    eigenvalues: Vec<f64>,
    // Row k is the eigenvector for eigenvalues[k].
    vectors: Vec<f64>,
}

impl SpectralDecomposition {
    /// Assembles a decomposition from raw parts; `vectors` holds eigenvector
    /// `k` in `vectors[k * n..(k + 1) * n]`.
    pub fn from_parts(eigenvalues: Vec<f64>, vectors: Vec<f64>) -> Result<Self> {
        let n = eigenvalues.len();
        if vectors.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: vectors.len(),
            });
        }
        Ok(SpectralDecomposition {
            n,
            eigenvalues,
            vectors,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvector(&self, k: usize) -> &[f64] {
        &self.vectors[k * self.n..(k + 1) * self.n]
    }

    pub fn eigenvectors(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.vectors.chunks_exact(self.n.max(1)).take(self.n)
    }

    /// Eigenvectors as a flat buffer, one vector per row.
    pub fn vectors_row_major(&self) -> &[f64] {
        &self.vectors
    }

    /// `max_k ||A v_k - lambda_k v_k||_2`.
    pub fn max_residual(&self, a: &SymmetricMatrix) -> f64 {
        self.eigenvectors()
            .zip(&self.eigenvalues)
            .map(|(v, &lambda)| {
                a.mul_vec(v)
                    .iter()
                    .zip(v)
                    .map(|(av, x)| (av - lambda * x).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// `max_ij |(V^T V - I)_ij|`.
    pub fn orthogonality_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            let vi = self.eigenvector(i);
            for j in i..self.n {
                let dot: f64 = vi.iter().zip(self.eigenvector(j)).map(|(a, b)| a * b).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

/// Full eigendecomposition of a symmetric matrix.
pub fn eigh(a: &SymmetricMatrix) -> Result<SpectralDecomposition> {
    check_finite(a)?;
    let n = a.n();
    let mut work = a.as_slice().to_vec();
    let (mut diag, mut off, betas) = householder_tridiagonalize(&mut work, n);
    let mut z = accumulate_reflections(&work, &betas, n);
    implicit_ql(&mut diag, &mut off, Some(&mut z), n)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]).then(i.cmp(&j)));
    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = Vec::with_capacity(n * n);
    for &i in &order {
        let row = &z[i * n..(i + 1) * n];
        let pivot = row
            .iter()
            .enumerate()
            .fold(
                (0, 0.0f64),
                |(bi, bv), (j, &x)| if x.abs() > bv { (j, x.abs()) } else { (bi, bv) },
            )
            .0;
        let sign = if row[pivot] < 0.0 { -1.0 } else { 1.0 };
        vectors.extend(row.iter().map(|x| sign * x));
    }
    Ok(SpectralDecomposition {
        n,
        eigenvalues,
        vectors,
    })
}

/// Ascending eigenvalues only. Runs the same arithmetic as [`eigh`] minus
/// the vector accumulation, so the values agree with `eigh` bit for bit.
pub fn spectrum_only(a: &SymmetricMatrix) -> Result<Vec<f64>> {
    check_finite(a)?;
    let n = a.n();
    let mut work = a.as_slice().to_vec();
    let (mut diag, mut off, _) = householder_tridiagonalize(&mut work, n);
    implicit_ql(&mut diag, &mut off, None, n)?;
    diag.sort_by(f64::total_cmp);
    Ok(diag)
}

fn check_finite(a: &SymmetricMatrix) -> Result<()> {
    let n = a.n();
    match a.as_slice().iter().position(|x| !x.is_finite()) {
        Some(idx) => Err(Error::NonFinite(idx / n, idx % n)),
        None => Ok(()),
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Reduces the full row-major symmetric `work` to tridiagonal form
/// `T = Q^T A Q`, `Q = H_0 H_1 ... H_{n-3}`.
///
/// Returns `(diag, off, betas)` where `off[k]` couples `k` and `k + 1`
/// (`off[n - 1] = 0`). Reflector `k` is `I - beta_k v v^T` with `v` left in
/// `work[k][k + 1..]`. The trailing block is updated in full (both
/// triangles) so products and rank-2 updates run along rows; the update
/// formula is symmetric in `(i, j)`, so the block stays exactly symmetric.
fn householder_tridiagonalize(work: &mut [f64], n: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    let mut betas = vec![0.0; n.saturating_sub(2)];
    let mut p = vec![0.0; n];

    for k in 0..n.saturating_sub(2) {
        diag[k] = work[k * n + k];
        let m = n - k - 1;
        let (head, tail) = work.split_at_mut((k + 1) * n);
        let v = &mut head[k * n + k + 1..(k + 1) * n];
        let x0 = v[0];
        let sigma: f64 = v[1..].iter().map(|x| x * x).sum();
        if sigma == 0.0 {
            off[k] = x0;
            v.iter_mut().for_each(|x| *x = 0.0);
            continue;
        }
        let norm = (x0 * x0 + sigma).sqrt();
        let alpha = if x0 >= 0.0 { -norm } else { norm };
        v[0] = x0 - alpha;
        let beta = 2.0 / (v[0] * v[0] + sigma);
        off[k] = alpha;
        betas[k] = beta;

        // p = beta * B v, then w = p - (beta/2)(p.v) v, B -= v w^T + w v^T.
        let p = &mut p[..m];
        for (i, pi) in p.iter_mut().enumerate() {
            let row = &tail[i * n + k + 1..(i + 1) * n];
            *pi = beta * dot(row, v);
        }
        let kappa = 0.5 * beta * dot(p, v);
        for (pi, vi) in p.iter_mut().zip(v.iter()) {
            *pi -= kappa * vi;
        }
        let w = &*p;
        for i in 0..m {
            let (vi, wi) = (v[i], w[i]);
            let row = &mut tail[i * n + k + 1..(i + 1) * n];
            for ((b, &vj), &wj) in row.iter_mut().zip(v.iter()).zip(w) {
                *b -= vi * wj + wi * vj;
            }
        }
    }
    if n >= 2 {
        diag[n - 2] = work[(n - 2) * n + n - 2];
        off[n - 2] = work[(n - 2) * n + n - 1];
    }
    if n >= 1 {
        diag[n - 1] = work[n * n - 1];
    }
    (diag, off, betas)
}

/// Builds `Q^T` (row-major) from the stored reflectors. `Q` is formed by
/// applying `H_{n-3}, ..., H_0` to the identity from the left, which keeps
/// each step inside its trailing block; the result is then transposed.
fn accumulate_reflections(work: &[f64], betas: &[f64], n: usize) -> Vec<f64> {
    let mut q = vec![0.0; n * n];
    for i in 0..n {
        q[i * n + i] = 1.0;
    }
    let mut t = vec![0.0; n];
    for (k, &beta) in betas.iter().enumerate().rev() {
        if beta == 0.0 {
            continue;
        }
        let v = &work[k * n + k + 1..(k + 1) * n];
        let t = &mut t[k + 1..n];
        t.iter_mut().for_each(|x| *x = 0.0);
        for (i, &vi) in v.iter().enumerate() {
            let row = &q[(k + 1 + i) * n + k + 1..(k + 2 + i) * n];
            for (tj, &qij) in t.iter_mut().zip(row) {
                *tj += vi * qij;
            }
        }
        for (i, &vi) in v.iter().enumerate() {
            let scale = beta * vi;
            let row = &mut q[(k + 1 + i) * n + k + 1..(k + 2 + i) * n];
            for (qij, &tj) in row.iter_mut().zip(t.iter()) {
                *qij -= scale * tj;
            }
        }
    }
    // In-place transpose.
    for i in 0..n {
        for j in i + 1..n {
            q.swap(i * n + j, j * n + i);
        }
    }
    q
}

/// Implicit QL with Wilkinson shifts on the tridiagonal `(diag, off)`.
/// When `z` is given, each plane rotation of columns `i, i + 1` of the
/// eigenvector matrix is applied to rows `i, i + 1` of its transpose `z`.
fn implicit_ql(diag: &mut [f64], off: &mut [f64], mut z: Option<&mut [f64]>, n: usize) -> Result<()> {
    if n == 0 {
        return Ok(());
    }
    off[n - 1] = 0.0;
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(Error::NoConvergence {
                    index: l,
                    cap: MAX_SWEEPS,
                });
            }

            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    let (upper, lower) = z.split_at_mut((i + 1) * n);
                    let zi = &mut upper[i * n..];
                    let zi1 = &mut lower[..n];
                    for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                        let t = *b;
                        *b = s * *a + c * t;
                        *a = c * *a - s * t;
                    }
                }
            }
            if underflow {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}
