//! The analytic coordinated-transport objective, its gradients, Sinkhorn
//! marginal normalization, and the Laplacian reparametrization used for
//! sketching.
//!
//! For graphs X (N vertices) and Y (M vertices) with Laplacian pseudoinverses
//! K = L_X^+ and D = L_Y^+, and a transport plan P (N x M, column sums N,
//! row sums M), the objective is
//!
//! ```text
//! F(P, D) = M tr(K) + N tr(D) - 2 tr((D^{1/2} P^T K P D^{1/2})^{1/2})
//! ```
//!
//! The minimum of F over plans, divided by NM and square-rooted, is the
//! distance between the graphs. Sketching additionally minimizes over D by
//! parametrizing L_Y through the squares of M(M-1)/2 free reals, which makes
//! every iterate a valid Laplacian by construction.
//!
//! Gradients are closed-form. Writing C = K^{1/2} (fixed per problem),
//! W = C P and G = W D W^T, cyclic invariance gives tr of the square root of
//! the inner matrix as tr(G^{1/2}), and with H = G^{-1/2} (pseudo-inverted on
//! the near-zero spectrum):
//!
//! ```text
//! dF/dP   = -2 C H W D
//! dF/dD   =  N I - W^T H W
//! dF/dL_Y = -(D + J/M) (dF/dD) (D + J/M)      (J = all-ones)
//! ```
//!
//! the last line using that (L_Y + J/M)^{-1} = D + J/M for connected L_Y, so
//! the pseudoinverse is a smooth function of L_Y with fixed kernel. The free
//! parameters enter through (L_Y)_{ij} = -v_k^2, giving
//! dF/dv_k = 2 v_k (Phi_ii + Phi_jj - 2 Phi_ij) with Phi = dF/dL_Y.

use crate::eig;
use crate::error::{Error, Result};
use crate::graph::{LaplacianMatrix, PseudoInverse};
use nalgebra::DMatrix;

/// Nonnegative N x M coupling with column sums N and row sums M.
///
/// Construction through [`TransportPlan::from_matrix`] enforces the marginal
/// invariants at 1e-6 (total mass at 1e-4); plans produced by a small number
/// of Sinkhorn sweeps inside the optimizer are looser and only wrapped once
/// re-normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportPlan {
    mat: DMatrix<f64>,
}

impl TransportPlan {
    pub fn from_matrix(mat: DMatrix<f64>) -> Result<Self> {
        let (n, m) = (mat.nrows(), mat.ncols());
        if n == 0 || m == 0 {
            return Err(Error::DimensionMismatch("empty transport plan".into()));
        }
        if mat.iter().any(|&v| v < 0.0) {
            return Err(Error::Numerical("negative transport plan entry".into()));
        }
        let resid = marginal_residual(&mat);
        if resid > 1e-6 {
            return Err(Error::Numerical(format!(
                "transport plan marginal residual {} exceeds 1e-6",
                resid
            )));
        }
        let total: f64 = mat.iter().sum();
        if (total - (n * m) as f64).abs() > 1e-4 {
            return Err(Error::Numerical(format!(
                "transport plan total mass {} differs from {}",
                total,
                n * m
            )));
        }
        Ok(TransportPlan { mat })
    }

    /// Wraps the output of Sinkhorn normalization without re-checking the
    /// marginals; tightness depends on the number of sweeps performed.
    pub(crate) fn from_normalization(mat: DMatrix<f64>) -> Self {
        TransportPlan { mat }
    }

    /// Wraps a matrix without marginal checks. The objective and gradients
    /// are well defined at any nonnegative matrix; finite-difference probes
    /// need to evaluate them just off the marginal constraint set.
    pub fn from_matrix_unchecked(mat: DMatrix<f64>) -> Self {
        TransportPlan { mat }
    }

    /// The uniform plan (all entries 1), which satisfies the marginals
    /// exactly.
    pub fn uniform(n: usize, m: usize) -> Self {
        TransportPlan {
            mat: DMatrix::from_element(n, m, 1.0),
        }
    }

    /// N I_N scaled identity plan, the feasible point used when X = Y.
    pub fn scaled_identity(n: usize) -> Self {
        TransportPlan {
            mat: DMatrix::from_diagonal_element(n, n, n as f64),
        }
    }

    pub fn rows(&self) -> usize {
        self.mat.nrows()
    }

    pub fn cols(&self) -> usize {
        self.mat.ncols()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.mat
    }

    /// Largest deviation of any row sum from M or column sum from N.
    pub fn marginal_residual(&self) -> f64 {
        marginal_residual(&self.mat)
    }

    pub fn transposed(&self) -> TransportPlan {
        TransportPlan {
            mat: self.mat.transpose(),
        }
    }
}

/// Largest marginal deviation of an N x M matrix from row sums M and column
/// sums N.
pub fn marginal_residual(mat: &DMatrix<f64>) -> f64 {
    let (n, m) = (mat.nrows(), mat.ncols());
    let mut worst = 0.0f64;
    for i in 0..n {
        let s: f64 = mat.row(i).iter().sum();
        worst = worst.max((s - m as f64).abs());
    }
    for j in 0..m {
        let s: f64 = mat.column(j).iter().sum();
        worst = worst.max((s - n as f64).abs());
    }
    worst
}

/// One full Sinkhorn sweep rescales every row to sum M, then every column to
/// sum N. Runs `sweeps` of them in place.
pub(crate) fn sinkhorn_sweeps(mat: &mut DMatrix<f64>, sweeps: usize) {
    let (n, m) = (mat.nrows(), mat.ncols());
    for _ in 0..sweeps {
        for i in 0..n {
            let s: f64 = mat.row(i).iter().sum();
            if s > 0.0 {
                let scale = m as f64 / s;
                mat.row_mut(i).iter_mut().for_each(|v| *v *= scale);
            }
        }
        for j in 0..m {
            let s: f64 = mat.column(j).iter().sum();
            if s > 0.0 {
                let scale = n as f64 / s;
                mat.column_mut(j).iter_mut().for_each(|v| *v *= scale);
            }
        }
    }
}

/// Sweeps until the marginal residual drops to `target` or `max_sweeps` is
/// reached; returns the achieved residual.
pub(crate) fn sinkhorn_to_residual(mat: &mut DMatrix<f64>, target: f64, max_sweeps: usize) -> f64 {
    for _ in 0..max_sweeps {
        let resid = marginal_residual(mat);
        if resid <= target {
            return resid;
        }
        sinkhorn_sweeps(mat, 1);
    }
    marginal_residual(mat)
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum ScaleAxis {
    Rows,
    Cols,
}

/// Record of the scaling stages applied by [`sinkhorn_forward`], in
/// application order; each stage stores the matrix it saw as input.
#[derive(Debug, Clone, Default)]
pub(crate) struct SinkhornTape {
    stages: Vec<(ScaleAxis, DMatrix<f64>)>,
}

/// Sinkhorn sweeps that record each stage input, so the optimizer can
/// backpropagate through the normalization to the raw plan variable.
pub(crate) fn sinkhorn_forward(mat: &mut DMatrix<f64>, sweeps: usize) -> SinkhornTape {
    let (n, m) = (mat.nrows(), mat.ncols());
    let mut tape = SinkhornTape::default();
    for _ in 0..sweeps {
        tape.stages.push((ScaleAxis::Rows, mat.clone()));
        for i in 0..n {
            let s: f64 = mat.row(i).iter().sum();
            if s > 0.0 {
                let scale = m as f64 / s;
                mat.row_mut(i).iter_mut().for_each(|v| *v *= scale);
            }
        }
        tape.stages.push((ScaleAxis::Cols, mat.clone()));
        for j in 0..m {
            let s: f64 = mat.column(j).iter().sum();
            if s > 0.0 {
                let scale = n as f64 / s;
                mat.column_mut(j).iter_mut().for_each(|v| *v *= scale);
            }
        }
    }
    tape
}

/// Vector-Jacobian product through the recorded normalization stages.
///
/// One stage rescales each line (row or column) x to x * (target / sum(x));
/// its VJP against an incoming gradient g over the outputs is, per line,
/// scale * (g - <g, x'> / sum(x)) where x' is the scaled line. Lines whose
/// sum was zero pass the gradient through unchanged.
pub(crate) fn sinkhorn_backward(tape: &SinkhornTape, mut grad: DMatrix<f64>) -> DMatrix<f64> {
    let n = grad.nrows();
    let m = grad.ncols();
    for (axis, input) in tape.stages.iter().rev() {
        match axis {
            ScaleAxis::Rows => {
                for i in 0..n {
                    let s: f64 = input.row(i).iter().sum();
                    if s > 0.0 {
                        let scale = m as f64 / s;
                        let inner: f64 = grad
                            .row(i)
                            .iter()
                            .zip(input.row(i).iter())
                            .map(|(g, x)| g * x * scale)
                            .sum();
                        let correction = inner / s;
                        grad.row_mut(i)
                            .iter_mut()
                            .for_each(|g| *g = scale * *g - correction);
                    }
                }
            }
            ScaleAxis::Cols => {
                for j in 0..m {
                    let s: f64 = input.column(j).iter().sum();
                    if s > 0.0 {
                        let scale = n as f64 / s;
                        let inner: f64 = grad
                            .column(j)
                            .iter()
                            .zip(input.column(j).iter())
                            .map(|(g, x)| g * x * scale)
                            .sum();
                        let correction = inner / s;
                        grad.column_mut(j)
                            .iter_mut()
                            .for_each(|g| *g = scale * *g - correction);
                    }
                }
            }
        }
    }
    grad
}

/// Sinkhorn-Knopp normalization of a nonnegative matrix: `iters` full sweeps
/// of row-then-column rescaling toward row sums M and column sums N.
pub fn sinkhorn_normalize(raw: &DMatrix<f64>, iters: usize) -> Result<TransportPlan> {
    let (n, m) = (raw.nrows(), raw.ncols());
    if n == 0 || m == 0 {
        return Err(Error::DimensionMismatch("empty matrix".into()));
    }
    if raw.iter().any(|&v| v < 0.0) {
        return Err(Error::Numerical("negative entry in Sinkhorn input".into()));
    }
    for i in 0..n {
        if raw.row(i).iter().all(|&v| v == 0.0) {
            return Err(Error::ZeroLine { what: "row", index: i });
        }
    }
    for j in 0..m {
        if raw.column(j).iter().all(|&v| v == 0.0) {
            return Err(Error::ZeroLine { what: "column", index: j });
        }
    }
    let mut mat = raw.clone();
    sinkhorn_sweeps(&mut mat, iters);
    Ok(TransportPlan::from_normalization(mat))
}

/// The M(M-1)/2 free reals parametrizing a weighted Laplacian on M vertices
/// (strict upper triangle, row-major pair order).
#[derive(Debug, Clone, PartialEq)]
pub struct SketchParams {
    m: usize,
    values: Vec<f64>,
}

impl SketchParams {
    pub fn new(m: usize, values: Vec<f64>) -> Result<Self> {
        let expect = m * (m.saturating_sub(1)) / 2;
        if values.len() != expect {
            return Err(Error::DimensionMismatch(format!(
                "sketch params for m = {} need {} values, got {}",
                m,
                expect,
                values.len()
            )));
        }
        Ok(SketchParams { m, values })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Iterates the (i, j) pairs, i < j, in the flattened order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> {
        let m = self.m;
        (0..m).flat_map(move |i| ((i + 1)..m).map(move |j| (i, j)))
    }
}

/// Builds the weighted Laplacian from free parameters: off-diagonal
/// (i, j) = -v_k^2, symmetric, diagonal set to the negative row sum. The
/// output satisfies every Laplacian invariant by construction.
pub fn laplacian_from_params(params: &SketchParams) -> LaplacianMatrix {
    let m = params.m();
    let mut mat = DMatrix::zeros(m, m);
    for ((i, j), v) in params.pairs().zip(params.values()) {
        let off = -(v * v);
        mat[(i, j)] = off;
        mat[(j, i)] = off;
    }
    for i in 0..m {
        let mut diag = 0.0;
        for j in 0..m {
            if j != i {
                diag -= mat[(i, j)];
            }
        }
        mat[(i, i)] = diag;
    }
    LaplacianMatrix::from_construction(mat)
}

/// Spectral cut for the gradient's pseudo-inverted square root: eigenvalues
/// below this fraction of the largest are excluded.
pub(crate) const GRADIENT_SPECTRUM_REL_CUT: f64 = 1e-8;

/// Relative noise floor for trace_sqrt: eigenvalues this far below the
/// spectral scale are roundoff artifacts of structurally zero eigenvalues,
/// and sqrt would amplify them (sqrt(1e-13) ~ 3e-7).
const TRACE_SQRT_NOISE_FLOOR: f64 = 1e-12;

/// Sum of the square roots of the eigenvalues of a symmetric PSD matrix.
/// Small negative eigenvalues (down to -1e-6 of the spectral scale) are
/// clamped to zero, as are positive eigenvalues below the roundoff noise
/// floor (1e-12 of the scale); anything below the PSD tolerance is an error.
pub fn trace_sqrt(s: &DMatrix<f64>) -> Result<f64> {
    if s.nrows() != s.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "trace_sqrt needs a square matrix, got {}x{}",
            s.nrows(),
            s.ncols()
        )));
    }
    let sym = eig::symmetrize(s);
    let (values, _) = eig::eigh(&sym);
    let scale = values.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    // The absolute term keeps numerically-zero matrices (e.g. the inner
    // product at the uniform plan) from tripping the relative check.
    if let Some(&min) = values.iter().next() {
        if min < -(1e-6 * scale + 1e-12) {
            return Err(Error::NotPsd { min_eigenvalue: min });
        }
    }
    let floor = TRACE_SQRT_NOISE_FLOOR * scale;
    Ok(values
        .iter()
        .map(|&v| if v > floor { v.sqrt() } else { 0.0 })
        .sum())
}

fn check_dims(lx: &PseudoInverse, ly_dim: usize, plan: &TransportPlan) -> Result<()> {
    if lx.dim() != plan.rows() || ly_dim != plan.cols() {
        return Err(Error::DimensionMismatch(format!(
            "objective needs L_X^+ {0}x{0}, L_Y^+ {1}x{1} for a {0}x{1} plan; got {2} and {3}",
            plan.rows(),
            plan.cols(),
            lx.dim(),
            ly_dim
        )));
    }
    Ok(())
}

/// The analytic objective: M tr(L_X^+) + N tr(L_Y^+) minus twice the trace of
/// the square root of D^{1/2} P^T K P D^{1/2}, symmetrized before the
/// eigendecomposition. Exact arithmetic keeps this nonnegative; roundoff can
/// leave values slightly below zero, which [`copt_distance_value`] clamps.
pub fn copt_objective(lx: &PseudoInverse, ly: &PseudoInverse, plan: &TransportPlan) -> Result<f64> {
    check_dims(lx, ly.dim(), plan)?;
    let n = plan.rows() as f64;
    let m = plan.cols() as f64;
    let sqrt_ly = eig::sqrt_psd(ly.as_matrix());
    let p = plan.as_matrix();
    let inner = &sqrt_ly * p.transpose() * lx.as_matrix() * p * &sqrt_ly;
    let ts = trace_sqrt(&inner)?;
    Ok(m * lx.trace() + n * ly.trace() - 2.0 * ts)
}

/// Distance from an objective value: sqrt(max(objective, 0) / (N M)).
pub fn copt_distance_value(objective: f64, n: usize, m: usize) -> f64 {
    (objective.max(0.0) / (n as f64 * m as f64)).sqrt()
}

/// Gradient of the objective with respect to the plan.
#[derive(Debug, Clone)]
pub struct PlanGradient {
    pub grad_plan: DMatrix<f64>,
    /// The spectrum of the inner matrix was ambiguous around the zero cutoff;
    /// the gradient there is subgradient-quality.
    pub degenerate_spectrum: bool,
}

/// Gradients of the objective with respect to both the plan and the sketch
/// parameters.
#[derive(Debug, Clone)]
pub struct SketchGradient {
    pub grad_plan: DMatrix<f64>,
    pub grad_values: Vec<f64>,
    pub degenerate_spectrum: bool,
}

/// Per-problem precomputation for objective/gradient evaluation: the square
/// root of L_X^+ is fixed while P (and in sketch mode L_Y) move.
#[derive(Debug, Clone)]
pub(crate) struct ObjectiveKernel {
    pub c: DMatrix<f64>,
    pub tr_lx: f64,
    pub n: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct KernelEval {
    pub value: f64,
    pub grad_plan: DMatrix<f64>,
    /// W^T H W, the building block of the L_Y^+ gradient.
    pub wt_h_w: DMatrix<f64>,
    pub degenerate: bool,
}

impl ObjectiveKernel {
    pub fn new(lx: &PseudoInverse) -> Self {
        ObjectiveKernel {
            c: eig::sqrt_psd(lx.as_matrix()),
            tr_lx: lx.trace(),
            n: lx.dim(),
        }
    }

    /// Objective value plus plan gradient at (P, L_Y^+). `ly_pinv` is the
    /// M x M pseudoinverse matrix and `tr_ly` its trace.
    pub fn evaluate(&self, ly_pinv: &DMatrix<f64>, tr_ly: f64, p: &DMatrix<f64>) -> KernelEval {
        let n = self.n as f64;
        let m = ly_pinv.nrows() as f64;
        let w = &self.c * p;
        let g = eig::symmetrize(&(&w * ly_pinv * w.transpose()));
        let inv = eig::inv_sqrt_psd(&g, GRADIENT_SPECTRUM_REL_CUT);
        let value = m * self.tr_lx + n * tr_ly - 2.0 * inv.trace_sqrt;
        let h_w = &inv.mat * &w;
        let grad_plan = -2.0 * &self.c * &h_w * ly_pinv;
        let wt_h_w = eig::symmetrize(&(w.transpose() * &h_w));
        KernelEval {
            value,
            grad_plan,
            wt_h_w,
            degenerate: inv.degenerate,
        }
    }
}

/// Chains the L_Y^+ gradient back to the free sketch parameters.
///
/// `wt_h_w` comes from [`ObjectiveKernel::evaluate`]; `ly_pinv` is the
/// pseudoinverse of the parametrized Laplacian.
pub(crate) fn chain_to_params(
    wt_h_w: &DMatrix<f64>,
    ly_pinv: &DMatrix<f64>,
    n: usize,
    params: &SketchParams,
) -> Vec<f64> {
    let m = params.m();
    // dF/dD = N I - W^T H W
    let mut gamma = -wt_h_w.clone();
    for i in 0..m {
        gamma[(i, i)] += n as f64;
    }
    // (L_Y + J/M)^{-1} = D + J/M
    let shift = 1.0 / m as f64;
    let mut q_inv = ly_pinv.clone();
    q_inv.iter_mut().for_each(|v| *v += shift);
    // dF/dL_Y = -Q^{-1} (dF/dD) Q^{-1}
    let phi = -(&q_inv * gamma * &q_inv);
    params
        .pairs()
        .zip(params.values())
        .map(|((i, j), v)| 2.0 * v * (phi[(i, i)] + phi[(j, j)] - 2.0 * phi[(i, j)]))
        .collect()
}

/// Gradient of the objective with respect to the plan, for two fixed graphs.
pub fn copt_gradient_plan(
    lx: &PseudoInverse,
    ly: &PseudoInverse,
    plan: &TransportPlan,
) -> Result<PlanGradient> {
    check_dims(lx, ly.dim(), plan)?;
    let kernel = ObjectiveKernel::new(lx);
    let eval = kernel.evaluate(ly.as_matrix(), ly.trace(), plan.as_matrix());
    Ok(PlanGradient {
        grad_plan: eval.grad_plan,
        degenerate_spectrum: eval.degenerate,
    })
}

/// Gradients of the objective with respect to the plan and the free sketch
/// parameters, with L_Y^+ a differentiable function of the parameters.
pub fn copt_gradient_sketch(
    lx: &PseudoInverse,
    params: &SketchParams,
    plan: &TransportPlan,
) -> Result<SketchGradient> {
    let ly = laplacian_from_params(params);
    check_dims(lx, ly.dim(), plan)?;
    let ly_pinv = crate::graph::pseudoinverse(&ly)?;
    let kernel = ObjectiveKernel::new(lx);
    let eval = kernel.evaluate(ly_pinv.as_matrix(), ly_pinv.trace(), plan.as_matrix());
    let grad_values = chain_to_params(&eval.wt_h_w, ly_pinv.as_matrix(), kernel.n, params);
    Ok(SketchGradient {
        grad_plan: eval.grad_plan,
        grad_values,
        degenerate_spectrum: eval.degenerate,
    })
}
