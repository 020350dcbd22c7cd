//! Shared test oracles, independent of the library's objective/gradient
//! implementation paths: the Gaussian-transport construction for the
//! closed-form check, transport-polytope vertex enumeration, and exactly
//! feasible random plan generators.

#![allow(dead_code)]

use copt::prelude::*;
use copt::TransportPlan;
use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Sum of sqrt of eigenvalues with negative and roundoff-noise eigenvalues
/// clamped to zero. `ref_scale` is the natural magnitude of the matrix
/// (e.g. the product of the factors' norms): when the matrix is numerically
/// zero its own spectrum cannot tell noise from signal, so the floor is
/// taken relative to max(spectral scale, ref_scale). Local to the test
/// oracle on purpose.
pub fn trace_sqrt_oracle(s: &DMatrix<f64>, ref_scale: f64) -> f64 {
    let sym = 0.5 * (s + s.transpose());
    let eig = sym.symmetric_eigen();
    let scale = eig.eigenvalues.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let floor = 1e-12 * scale.max(ref_scale);
    eig.eigenvalues
        .iter()
        .map(|&v| if v > floor { v.sqrt() } else { 0.0 })
        .sum()
}

/// PSD square root via a fresh eigendecomposition.
pub fn sqrt_psd_oracle(s: &DMatrix<f64>) -> DMatrix<f64> {
    let sym = 0.5 * (s + s.transpose());
    let eig = sym.symmetric_eigen();
    let n = s.nrows();
    let mut out = DMatrix::zeros(n, n);
    for j in 0..n {
        let lambda = eig.eigenvalues[j].max(0.0);
        let col = eig.eigenvectors.column(j);
        out += lambda.sqrt() * col * col.transpose();
    }
    out
}

/// The lifting maps of the closed-form proof: A sends a function f on X to
/// f(x) sqrt(P(x,y)) on X x Y (rows indexed by x * M + y), and B sends a
/// function on Y to f(y) sqrt(P(x,y)).
pub fn lift_maps(plan: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    let (n, m) = (plan.nrows(), plan.ncols());
    let mut a = DMatrix::zeros(n * m, n);
    let mut b = DMatrix::zeros(n * m, m);
    for x in 0..n {
        for y in 0..m {
            let root = plan[(x, y)].max(0.0).sqrt();
            a[(x * m + y, x)] = root;
            b[(x * m + y, y)] = root;
        }
    }
    (a, b)
}

/// Gaussian-transport oracle for the objective: lifts both graph-signal
/// covariances to X x Y and evaluates the two-Gaussian transport cost
/// tr V1 + tr V2 - 2 tr((V1^{1/2} V2 V1^{1/2})^{1/2}).
pub fn gaussian_transport_oracle(
    lx_pinv: &DMatrix<f64>,
    ly_pinv: &DMatrix<f64>,
    plan: &DMatrix<f64>,
) -> f64 {
    let (a, b) = lift_maps(plan);
    let v1 = &a * lx_pinv * a.transpose();
    let v2 = &b * ly_pinv * b.transpose();
    let v1_half = sqrt_psd_oracle(&v1);
    let inner = &v1_half * &v2 * &v1_half;
    let ref_scale = v1.norm() * v2.norm();
    v1.trace() + v2.trace() - 2.0 * trace_sqrt_oracle(&inner, ref_scale)
}

/// Every vertex of the transport polytope (row sums M, column sums N) for
/// small N, M: candidate supports of size N+M-1 solved by least squares and
/// filtered for feasibility. Exponential in N*M; keep N*M small.
pub fn polytope_vertices(n: usize, m: usize) -> Vec<DMatrix<f64>> {
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..m).map(move |j| (i, j))).collect();
    let k = n + m - 1;
    let mut out: Vec<DMatrix<f64>> = Vec::new();
    let mut chosen = vec![0usize; k];

    #[allow(clippy::too_many_arguments)]
    fn rec(
        cells: &[(usize, usize)],
        start: usize,
        chosen: &mut Vec<usize>,
        depth: usize,
        k: usize,
        n: usize,
        m: usize,
        out: &mut Vec<DMatrix<f64>>,
    ) {
        if depth == k {
            let rows = n + m;
            let mut a = DMatrix::<f64>::zeros(rows, k);
            let mut b = nalgebra::DVector::<f64>::zeros(rows);
            for (c, &idx) in chosen.iter().enumerate() {
                let (i, j) = cells[idx];
                a[(i, c)] = 1.0;
                a[(n + j, c)] = 1.0;
            }
            for i in 0..n {
                b[i] = m as f64;
            }
            for j in 0..m {
                b[n + j] = n as f64;
            }
            let svd = a.clone().svd(true, true);
            if let Ok(x) = svd.solve(&b, 1e-10) {
                let resid = (&a * &x - &b).norm();
                if resid < 1e-8 && x.iter().all(|&v| v >= -1e-9) {
                    let mut p = DMatrix::zeros(n, m);
                    for (c, &idx) in chosen.iter().enumerate() {
                        let (i, j) = cells[idx];
                        p[(i, j)] = x[c].max(0.0);
                    }
                    if !out.iter().any(|q| (q - &p).norm() < 1e-7) {
                        out.push(p);
                    }
                }
            }
            return;
        }
        for idx in start..cells.len() {
            chosen[depth] = idx;
            rec(cells, idx + 1, chosen, depth + 1, k, n, m, out);
        }
    }
    rec(&cells, 0, &mut chosen, 0, k, n, m, &mut out);
    out
}

/// Random vertex of the transport polytope via the northwest-corner rule on
/// shuffled row/column orders. Marginals are exact up to a few ulps.
pub fn random_polytope_vertex(n: usize, m: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let mut rows: Vec<usize> = (0..n).collect();
    let mut cols: Vec<usize> = (0..m).collect();
    for i in (1..rows.len()).rev() {
        let j = rng.random_range(0..=i);
        rows.swap(i, j);
    }
    for i in (1..cols.len()).rev() {
        let j = rng.random_range(0..=i);
        cols.swap(i, j);
    }
    let mut supply = vec![m as f64; n];
    let mut demand = vec![n as f64; m];
    let mut p = DMatrix::zeros(n, m);
    let (mut ri, mut ci) = (0usize, 0usize);
    while ri < n && ci < m {
        let r = rows[ri];
        let c = cols[ci];
        let amount = supply[r].min(demand[c]);
        p[(r, c)] += amount;
        supply[r] -= amount;
        demand[c] -= amount;
        if supply[r] <= 0.0 {
            ri += 1;
        }
        if demand[c] <= 0.0 {
            ci += 1;
        }
    }
    p
}

/// Exactly feasible random plan: convex combination of a few random polytope
/// vertices (strictly interior of some face, marginals exact).
pub fn random_feasible_plan(n: usize, m: usize, rng: &mut ChaCha8Rng) -> TransportPlan {
    let parts = rng.random_range(2..5);
    let weights: Vec<f64> = {
        let raw: Vec<f64> = (0..parts).map(|_| rng.random_range(0.2..1.0)).collect();
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|w| w / total).collect()
    };
    let mut p = DMatrix::zeros(n, m);
    for w in weights {
        p += w * random_polytope_vertex(n, m, rng);
    }
    TransportPlan::from_matrix(p).expect("convex combination of vertices is feasible")
}

/// Connected G(n, p) drawn from the given stream.
pub fn random_connected_graph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    loop {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.random_range(0.0..1.0) < p {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::new(n, edges).unwrap();
        if g.is_connected() {
            return g;
        }
    }
}
