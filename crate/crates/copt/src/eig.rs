//! Small dense symmetric-matrix helpers shared by the spectral and
//! objective code: sorted eigendecompositions, PSD square roots and their
//! pseudo-inverted counterparts.

use nalgebra::{DMatrix, DVector};

/// Eigendecomposition of a symmetric matrix with eigenvalues sorted
/// ascending and eigenvectors as matching columns.
pub(crate) fn eigh(mat: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let eig = mat.clone().symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let mut values = DVector::zeros(n);
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        values[dst] = eig.eigenvalues[src];
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// (S + S^T) / 2.
pub(crate) fn symmetrize(mat: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = mat.clone();
    let n = mat.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (mat[(i, j)] + mat[(j, i)]);
            out[(i, j)] = v;
            out[(j, i)] = v;
        }
    }
    out
}

/// PSD square root via eigendecomposition, clamping small negative
/// eigenvalues to zero. The result is explicitly symmetrized.
pub(crate) fn sqrt_psd(mat: &DMatrix<f64>) -> DMatrix<f64> {
    let (values, vectors) = eigh(mat);
    let roots = values.map(|v| v.max(0.0).sqrt());
    scaled_eigvec_product(&roots, &vectors)
}

/// Result of [`inv_sqrt_psd`]: the pseudo-inverted square root together with
/// spectrum diagnostics used by the gradient code.
pub(crate) struct InvSqrt {
    pub mat: DMatrix<f64>,
    /// Sum of the square roots of the retained eigenvalues (= trace of the
    /// PSD square root of the input).
    pub trace_sqrt: f64,
    /// True when the spectrum is ambiguous around the zero cutoff: the gap
    /// between the largest excluded and the smallest retained eigenvalue is
    /// below 1e-10, so the pseudo-inversion is subgradient-quality.
    pub degenerate: bool,
}

/// S^{-1/2} for symmetric PSD S, pseudo-inverting the near-zero part of the
/// spectrum. Eigenvalues at or below `rel_cut * max_eigenvalue` are excluded.
pub(crate) fn inv_sqrt_psd(mat: &DMatrix<f64>, rel_cut: f64) -> InvSqrt {
    let (values, vectors) = eigh(mat);
    let max = values.iter().fold(0.0f64, |a, &b| a.max(b));
    let cut = rel_cut * max;

    let mut degenerate = false;
    let mut largest_excluded = f64::NEG_INFINITY;
    let mut smallest_retained = f64::INFINITY;
    let mut trace_sqrt = 0.0;
    let inv_roots = values.map(|v| {
        if v > cut {
            smallest_retained = smallest_retained.min(v);
            trace_sqrt += v.sqrt();
            1.0 / v.sqrt()
        } else {
            largest_excluded = largest_excluded.max(v);
            0.0
        }
    });
    if largest_excluded.is_finite()
        && smallest_retained.is_finite()
        && smallest_retained - largest_excluded < 1e-10
    {
        degenerate = true;
    }

    InvSqrt {
        mat: scaled_eigvec_product(&inv_roots, &vectors),
        trace_sqrt,
        degenerate,
    }
}

/// Q diag(s) Q^T, symmetrized exactly.
fn scaled_eigvec_product(scales: &DVector<f64>, vectors: &DMatrix<f64>) -> DMatrix<f64> {
    let n = vectors.nrows();
    let mut scaled = vectors.clone();
    for (j, s) in scales.iter().enumerate() {
        scaled.column_mut(j).scale_mut(*s);
    }
    let prod = &scaled * vectors.transpose();
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        out[(i, i)] = prod[(i, i)];
        for j in (i + 1)..n {
            let v = 0.5 * (prod[(i, j)] + prod[(j, i)]);
            out[(i, j)] = v;
            out[(j, i)] = v;
        }
    }
    out
}
