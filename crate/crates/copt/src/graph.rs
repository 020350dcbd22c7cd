//! Graph representation, validation, Laplacian construction, pseudoinverse,
//! and spectral utilities.
//!
//! Everything downstream works on connected, undirected, simple graphs with
//! strictly positive edge weights. [`Graph::validate`] is the gate: it checks
//! the structural invariants and connectivity in a fixed order and reports the
//! first violation. [`laplacian`] builds the dense L = D - A, and
//! [`pseudoinverse`] computes the Moore-Penrose inverse by orthogonally
//! projecting out the all-ones direction and taking an ordinary inverse, with
//! an eigendecomposition route ([`pseudoinverse_spectral`]) kept as a
//! cross-check.

use crate::eig;
use crate::error::{Error, Result};
use nalgebra::DMatrix;

/// Relative eigenvalue threshold below which a Laplacian eigenvalue is
/// treated as zero (scaled by the largest eigenvalue).
pub const ZERO_EIGENVALUE_REL_CUT: f64 = 1e-8;

/// Undirected weighted graph stored as a canonical edge list.
///
/// Construction only checks what must hold for the representation itself
/// (vertex indices in range, a nonempty vertex set); the full invariant set
/// is checked by [`Graph::validate`], so invalid structures like self-loops
/// can be represented and then rejected with a precise error.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl Graph {
    /// Unweighted constructor; every edge gets weight 1.0.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::new_weighted(n, edges.into_iter().map(|(u, v)| (u, v, 1.0)).collect())
    }

    /// Weighted constructor. Edges are canonicalized to `u <= v` and sorted.
    pub fn new_weighted(n: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut canonical = Vec::with_capacity(edges.len());
        for (u, v, w) in edges {
            if u >= n {
                return Err(Error::VertexOutOfRange { vertex: u, n });
            }
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            let (a, b) = if u <= v { (u, v) } else { (v, u) };
            canonical.push((a, b, w));
        }
        canonical.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)).then(x.2.total_cmp(&y.2)));
        Ok(Graph { n, edges: canonical })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Checks all graph invariants, reporting the first violation in the
    /// order: self-loops, duplicate edges, non-positive weights, connectivity.
    pub fn validate(&self) -> Result<()> {
        for &(u, v, _) in &self.edges {
            if u == v {
                return Err(Error::SelfLoop(u));
            }
        }
        for w in self.edges.windows(2) {
            if w[0].0 == w[1].0 && w[0].1 == w[1].1 {
                return Err(Error::DuplicateEdge(w[0].0, w[0].1));
            }
        }
        for &(u, v, w) in &self.edges {
            if w <= 0.0 || w.is_nan() {
                return Err(Error::NonPositiveWeight { u, v, weight: w });
            }
        }
        if !self.is_connected() {
            return Err(Error::NotConnected);
        }
        Ok(())
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v, _) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }

    /// Connected components as vertex lists (used by generators for the
    /// bridging fallback).
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v, _) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                for &v in &adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        stack.push(v);
                    }
                }
            }
            comps.push(comp);
        }
        comps
    }

    pub fn degree(&self, v: usize) -> f64 {
        self.edges
            .iter()
            .filter(|&&(a, b, _)| a == v || b == v)
            .map(|&(_, _, w)| w)
            .sum()
    }

    pub fn adjacency_matrix(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for &(u, v, w) in &self.edges {
            a[(u, v)] += w;
            a[(v, u)] += w;
        }
        a
    }

    /// Stable 64-bit content hash (FNV-1a over n, edges and weight bits).
    pub fn content_hash(&self) -> u64 {
        let mut h = fnv1a_init();
        h = fnv1a_u64(h, self.n as u64);
        for &(u, v, w) in &self.edges {
            h = fnv1a_u64(h, u as u64);
            h = fnv1a_u64(h, v as u64);
            h = fnv1a_u64(h, w.to_bits());
        }
        h
    }

    /// Parses the edge-list text format: first line `n <vertex_count>`, then
    /// one edge per line `u v [w]`, `#` starts a comment line.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut edges = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            if n.is_none() {
                let tag = parts.next().unwrap();
                if tag != "n" {
                    return Err(Error::Parse(format!(
                        "line {}: expected header 'n <vertex_count>', got '{}'",
                        lineno + 1,
                        line
                    )));
                }
                let count = parts
                    .next()
                    .ok_or_else(|| Error::Parse(format!("line {}: missing vertex count", lineno + 1)))?
                    .parse::<usize>()
                    .map_err(|e| Error::Parse(format!("line {}: bad vertex count: {}", lineno + 1, e)))?;
                if parts.next().is_some() {
                    return Err(Error::Parse(format!(
                        "line {}: trailing tokens after header",
                        lineno + 1
                    )));
                }
                n = Some(count);
                continue;
            }
            let u = parts
                .next()
                .unwrap()
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("line {}: bad vertex: {}", lineno + 1, e)))?;
            let v = parts
                .next()
                .ok_or_else(|| Error::Parse(format!("line {}: missing second vertex", lineno + 1)))?
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("line {}: bad vertex: {}", lineno + 1, e)))?;
            let w = match parts.next() {
                Some(tok) => tok
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("line {}: bad weight: {}", lineno + 1, e)))?,
                None => 1.0,
            };
            if parts.next().is_some() {
                return Err(Error::Parse(format!(
                    "line {}: trailing tokens after edge",
                    lineno + 1
                )));
            }
            edges.push((u, v, w));
        }
        let n = n.ok_or_else(|| Error::Parse("missing 'n <vertex_count>' header".into()))?;
        Graph::new_weighted(n, edges)
    }

    /// Serializes to the edge-list text format. Weights equal to 1.0 are
    /// omitted so unweighted graphs round-trip tersely.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("n {}\n", self.n));
        for &(u, v, w) in &self.edges {
            if w == 1.0 {
                out.push_str(&format!("{} {}\n", u, v));
            } else {
                out.push_str(&format!("{} {} {}\n", u, v, w));
            }
        }
        out
    }
}

const FNV_OFFSET: u64 = 0xcbf29ce484222325;
const FNV_PRIME: u64 = 0x100000001b3;

fn fnv1a_init() -> u64 {
    FNV_OFFSET
}

pub(crate) fn fnv1a_u64(mut h: u64, value: u64) -> u64 {
    for byte in value.to_le_bytes() {
        h ^= byte as u64;
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

pub(crate) fn fnv1a_start() -> u64 {
    fnv1a_init()
}

/// Dense symmetric graph Laplacian. Instances always satisfy: exact symmetry,
/// non-positive off-diagonal entries, zero row sums (within 1e-10), and
/// positive semidefiniteness.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianMatrix {
    mat: DMatrix<f64>,
}

impl LaplacianMatrix {
    /// Validates all Laplacian invariants on an arbitrary matrix. The PSD
    /// check does an eigendecomposition, so reserve this for untrusted input
    /// (e.g. file loads); internal constructions satisfy the invariants by
    /// construction.
    pub fn from_matrix(mat: DMatrix<f64>) -> Result<Self> {
        let n = mat.nrows();
        if n == 0 || mat.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "Laplacian must be square and nonempty, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        for i in 0..n {
            for j in 0..n {
                if mat[(i, j)] != mat[(j, i)] {
                    return Err(Error::DimensionMismatch(format!(
                        "Laplacian not symmetric at ({}, {})",
                        i, j
                    )));
                }
                if i != j && mat[(i, j)] > 0.0 {
                    return Err(Error::DimensionMismatch(format!(
                        "positive off-diagonal Laplacian entry at ({}, {})",
                        i, j
                    )));
                }
            }
            let row_sum: f64 = mat.row(i).iter().sum();
            if row_sum.abs() > 1e-10 {
                return Err(Error::DimensionMismatch(format!(
                    "Laplacian row {} sums to {}",
                    i, row_sum
                )));
            }
        }
        let (values, _) = eig::eigh(&mat);
        if values[0] < -1e-8 {
            return Err(Error::NotPsd {
                min_eigenvalue: values[0],
            });
        }
        Ok(LaplacianMatrix { mat })
    }

    /// Constructor for matrices that satisfy the invariants by construction.
    pub(crate) fn from_construction(mat: DMatrix<f64>) -> Self {
        debug_assert_eq!(mat.nrows(), mat.ncols());
        LaplacianMatrix { mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.mat
    }

    /// Second-smallest eigenvalue (algebraic connectivity).
    pub fn fiedler_value(&self) -> f64 {
        let (values, _) = eig::eigh(&self.mat);
        values[1]
    }

    /// Fiedler vector: unit eigenvector of the smallest nonzero eigenvalue,
    /// sign-canonicalized.
    pub fn fiedler_vector(&self) -> Result<Vec<f64>> {
        let proj = spectral_projection(self, 1)?;
        Ok(proj.column(0).iter().copied().collect())
    }
}

/// Moore-Penrose pseudoinverse of a connected-graph Laplacian; symmetric PSD
/// and annihilates the all-ones vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoInverse {
    mat: DMatrix<f64>,
}

impl PseudoInverse {
    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace()
    }
}

/// L = D - A with weighted degrees on the diagonal. Validates the graph
/// first.
pub fn laplacian(g: &Graph) -> Result<LaplacianMatrix> {
    g.validate()?;
    let n = g.n();
    let mut l = DMatrix::zeros(n, n);
    for &(u, v, w) in g.edges() {
        l[(u, v)] -= w;
        l[(v, u)] -= w;
        l[(u, u)] += w;
        l[(v, v)] += w;
    }
    Ok(LaplacianMatrix::from_construction(l))
}

/// Pseudoinverse via the projection trick: (L + J/n)^{-1} - J/n with J the
/// all-ones matrix. The result is verified against the defining identity
/// L L^+ L = L; failure means the input had more than one zero eigenvalue.
pub fn pseudoinverse(l: &LaplacianMatrix) -> Result<PseudoInverse> {
    let n = l.dim();
    let shift = 1.0 / n as f64;
    let mut q = l.as_matrix().clone();
    q.iter_mut().for_each(|v| *v += shift);
    let inv = q.try_inverse().ok_or(Error::SingularBeyondOnes)?;
    let mut pinv = inv;
    pinv.iter_mut().for_each(|v| *v -= shift);
    let pinv = eig::symmetrize(&pinv);

    // Identity check L L^+ L = L, relative Frobenius.
    let lm = l.as_matrix();
    let resid = (lm * &pinv * lm - lm).norm();
    let scale = lm.norm().max(1e-300);
    if resid / scale > 1e-6 {
        return Err(Error::SingularBeyondOnes);
    }
    Ok(PseudoInverse { mat: pinv })
}

/// Pseudoinverse via eigendecomposition, inverting only the nonzero part of
/// the spectrum. Cross-check route for [`pseudoinverse`].
pub fn pseudoinverse_spectral(l: &LaplacianMatrix) -> Result<PseudoInverse> {
    let (values, vectors) = eig::eigh(l.as_matrix());
    let n = l.dim();
    let max = values[n - 1].max(0.0);
    let cut = ZERO_EIGENVALUE_REL_CUT * max;
    let zeros = values.iter().filter(|&&v| v <= cut).count();
    if zeros > 1 {
        return Err(Error::SingularBeyondOnes);
    }
    let mut pinv = DMatrix::zeros(n, n);
    for j in 0..n {
        if values[j] > cut {
            let col = vectors.column(j);
            pinv += col * col.transpose() / values[j];
        }
    }
    Ok(PseudoInverse {
        mat: eig::symmetrize(&pinv),
    })
}

/// Unit eigenvectors for the k smallest nonzero eigenvalues, as columns in
/// eigenvalue-ascending order. Sign convention: the first entry of each
/// column whose magnitude exceeds 1e-12 is positive.
pub fn spectral_projection(l: &LaplacianMatrix, k: usize) -> Result<DMatrix<f64>> {
    let n = l.dim();
    if k >= n {
        return Err(Error::KTooLarge { k, dim: n });
    }
    let (values, vectors) = eig::eigh(l.as_matrix());
    let max = values[n - 1].max(0.0);
    let cut = ZERO_EIGENVALUE_REL_CUT * max;
    let nonzero: Vec<usize> = (0..n).filter(|&j| values[j] > cut).collect();
    if nonzero.len() < k {
        return Err(Error::KTooLarge { k, dim: n });
    }
    let mut out = DMatrix::zeros(n, k);
    for (dst, &src) in nonzero.iter().take(k).enumerate() {
        let mut col: Vec<f64> = vectors.column(src).iter().copied().collect();
        if let Some(first) = col.iter().find(|v| v.abs() > 1e-12) {
            if *first < 0.0 {
                col.iter_mut().for_each(|v| *v = -*v);
            }
        }
        for (i, v) in col.iter().enumerate() {
            out[(i, dst)] = *v;
        }
    }
    Ok(out)
}
