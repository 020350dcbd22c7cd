//! Seeded generators for the synthetic graph families used in the
//! experiments: stochastic block models, random geometric and regular graphs,
//! preferential-attachment families, and the deterministic shapes (barbell,
//! wheel, ladder, lollipop, star, grid, ring, caveman).
//!
//! Every generator returns a connected simple graph. Stochastic families
//! enforce connectivity by resampling up to 100 times and, failing that, by
//! adding uniformly random bridging edges between components. Output is
//! deterministic per (family, n, seed).

use crate::error::{Error, Result};
use crate::graph::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Graph family plus its family-specific parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Stochastic block model with `communities` near-equal groups.
    /// `communities: 1` degenerates to an Erdos-Renyi graph.
    Block {
        communities: usize,
        p_in: f64,
        p_out: f64,
    },
    /// Uniform points in the unit square, edges within `radius`.
    RandomGeometric { radius: f64 },
    /// Preferential attachment, `attach` edges per incoming vertex.
    BarabasiAlbert { attach: usize },
    /// Uniform random d-regular graph via the pairing model.
    RandomRegular { degree: usize },
    /// Random tree grown by degree-proportional preferential attachment.
    PowerlawTree,
    /// Near-equal cliques joined in a ring.
    Caveman { cliques: usize },
    /// Two cliques joined by a path.
    Barbell,
    Wheel,
    Ladder,
    Lollipop,
    Star,
    Grid { rows: usize, cols: usize },
    Ring,
}

/// A fully specified generation request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
}

impl FamilySpec {
    pub fn new(family: Family, n: usize, seed: u64) -> Self {
        FamilySpec { family, n, seed }
    }
}

/// Generates the graph for a spec. See [`generate_with_labels`] for planted
/// community labels.
pub fn generate(spec: &FamilySpec) -> Result<Graph> {
    generate_with_labels(spec).map(|(g, _)| g)
}

/// Generates the graph plus planted community labels where the family has
/// them (block models and caveman cliques); `None` otherwise.
pub fn generate_with_labels(spec: &FamilySpec) -> Result<(Graph, Option<Vec<usize>>)> {
    let n = spec.n;
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match &spec.family {
        Family::Block {
            communities,
            p_in,
            p_out,
        } => {
            if *communities == 0 || *communities > n {
                return Err(Error::Unachievable(format!(
                    "{} communities on {} vertices",
                    communities, n
                )));
            }
            for p in [*p_in, *p_out] {
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::Unachievable(format!("probability {} out of range", p)));
                }
            }
            let labels = near_equal_groups(n, *communities);
            let g = connected_stochastic(n, &mut rng, |rng| {
                let mut edges = Vec::new();
                for u in 0..n {
                    for v in (u + 1)..n {
                        let p = if labels[u] == labels[v] { *p_in } else { *p_out };
                        if rng.random_range(0.0..1.0) < p {
                            edges.push((u, v));
                        }
                    }
                }
                edges
            })?;
            Ok((g, Some(labels)))
        }
        Family::RandomGeometric { radius } => {
            if *radius <= 0.0 {
                return Err(Error::Unachievable(format!("radius {} not positive", radius)));
            }
            let r2 = radius * radius;
            let g = connected_stochastic(n, &mut rng, |rng| {
                let points: Vec<(f64, f64)> = (0..n)
                    .map(|_| (rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)))
                    .collect();
                let mut edges = Vec::new();
                for u in 0..n {
                    for v in (u + 1)..n {
                        let dx = points[u].0 - points[v].0;
                        let dy = points[u].1 - points[v].1;
                        if dx * dx + dy * dy < r2 {
                            edges.push((u, v));
                        }
                    }
                }
                edges
            })?;
            Ok((g, None))
        }
        Family::BarabasiAlbert { attach } => {
            let m = *attach;
            if m == 0 || m >= n {
                return Err(Error::Unachievable(format!(
                    "attachment count {} for {} vertices",
                    m, n
                )));
            }
            let mut edges = Vec::new();
            // Vertex m starts by connecting to all earlier vertices; each
            // later vertex attaches to m distinct targets sampled with
            // probability proportional to degree.
            let mut repeated: Vec<usize> = Vec::new();
            for v in 0..m {
                edges.push((v, m));
                repeated.push(v);
                repeated.push(m);
            }
            for v in (m + 1)..n {
                let mut targets = BTreeSet::new();
                while targets.len() < m {
                    let t = repeated[rng.random_range(0..repeated.len())];
                    targets.insert(t);
                }
                for &t in &targets {
                    edges.push((t, v));
                    repeated.push(t);
                    repeated.push(v);
                }
            }
            Ok((Graph::new(n, edges)?, None))
        }
        Family::RandomRegular { degree } => {
            let d = *degree;
            if d == 0 || d >= n || !(n * d).is_multiple_of(2) {
                return Err(Error::Unachievable(format!(
                    "{}-regular graph on {} vertices",
                    d, n
                )));
            }
            let g = connected_stochastic(n, &mut rng, |rng| {
                // Pairing model with rejection of self-loops and multi-edges.
                'outer: for _ in 0..200 {
                    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
                    // Fisher-Yates shuffle.
                    for i in (1..stubs.len()).rev() {
                        let j = rng.random_range(0..=i);
                        stubs.swap(i, j);
                    }
                    let mut seen = BTreeSet::new();
                    let mut edges = Vec::with_capacity(n * d / 2);
                    for pair in stubs.chunks(2) {
                        let (u, v) = (pair[0], pair[1]);
                        if u == v {
                            continue 'outer;
                        }
                        let key = (u.min(v), u.max(v));
                        if !seen.insert(key) {
                            continue 'outer;
                        }
                        edges.push(key);
                    }
                    return edges;
                }
                // Give the connectivity wrapper something to reject.
                Vec::new()
            })?;
            Ok((g, None))
        }
        Family::PowerlawTree => {
            let mut edges = Vec::new();
            let mut repeated = vec![0usize];
            for v in 1..n {
                let t = if v == 1 {
                    0
                } else {
                    repeated[rng.random_range(0..repeated.len())]
                };
                edges.push((t, v));
                repeated.push(t);
                repeated.push(v);
            }
            Ok((Graph::new(n, edges)?, None))
        }
        Family::Caveman { cliques } => {
            let k = *cliques;
            if k == 0 || k > n {
                return Err(Error::Unachievable(format!(
                    "{} cliques on {} vertices",
                    k, n
                )));
            }
            let labels = near_equal_groups(n, k);
            let mut groups: Vec<Vec<usize>> = vec![Vec::new(); k];
            for (v, &g) in labels.iter().enumerate() {
                groups[g].push(v);
            }
            let mut edges = Vec::new();
            for group in &groups {
                for a in 0..group.len() {
                    for b in (a + 1)..group.len() {
                        edges.push((group[a], group[b]));
                    }
                }
            }
            if k > 1 {
                for i in 0..k {
                    let from = *groups[i].last().unwrap();
                    let to = groups[(i + 1) % k][0];
                    if from != to {
                        edges.push((from, to));
                    }
                }
                // A 2-ring would duplicate the bridge; dedupe.
                edges.sort_unstable();
                edges.dedup();
            }
            Ok((Graph::new(n, edges)?, Some(labels)))
        }
        Family::Barbell => {
            if n < 6 {
                return Err(Error::Unachievable(format!("barbell needs n >= 6, got {}", n)));
            }
            let clique = (2 * n / 5).clamp(3, n / 2);
            let mut edges = Vec::new();
            for a in 0..clique {
                for b in (a + 1)..clique {
                    edges.push((a, b));
                }
            }
            for a in (n - clique)..n {
                for b in (a + 1)..n {
                    edges.push((a, b));
                }
            }
            // Path through the middle vertices; empty middle joins the
            // cliques directly.
            let mut prev = clique - 1;
            for v in clique..(n - clique) {
                edges.push((prev, v));
                prev = v;
            }
            edges.push((prev, n - clique));
            Ok((Graph::new(n, edges)?, None))
        }
        Family::Wheel => {
            if n < 4 {
                return Err(Error::Unachievable(format!("wheel needs n >= 4, got {}", n)));
            }
            let mut edges = Vec::new();
            for v in 1..n {
                edges.push((0, v));
            }
            for v in 1..n {
                let next = if v == n - 1 { 1 } else { v + 1 };
                edges.push((v, next));
            }
            Ok((Graph::new(n, edges)?, None))
        }
        Family::Ladder => {
            if n < 4 || !n.is_multiple_of(2) {
                return Err(Error::Unachievable(format!(
                    "ladder needs even n >= 4, got {}",
                    n
                )));
            }
            let h = n / 2;
            let mut edges = Vec::new();
            for v in 0..(h - 1) {
                edges.push((v, v + 1));
                edges.push((h + v, h + v + 1));
            }
            for v in 0..h {
                edges.push((v, h + v));
            }
            Ok((Graph::new(n, edges)?, None))
        }
        Family::Lollipop => {
            if n < 4 {
                return Err(Error::Unachievable(format!("lollipop needs n >= 4, got {}", n)));
            }
            let clique = (n / 2).max(3);
            let mut edges = Vec::new();
            for a in 0..clique {
                for b in (a + 1)..clique {
                    edges.push((a, b));
                }
            }
            for v in clique..n {
                edges.push((v - 1, v));
            }
            Ok((Graph::new(n, edges)?, None))
        }
        Family::Star => {
            if n < 2 {
                return Err(Error::Unachievable(format!("star needs n >= 2, got {}", n)));
            }
            Ok((Graph::new(n, (1..n).map(|v| (0, v)))?, None))
        }
        Family::Grid { rows, cols } => {
            if rows * cols != n || *rows == 0 || *cols == 0 {
                return Err(Error::Unachievable(format!(
                    "{}x{} grid does not have {} vertices",
                    rows, cols, n
                )));
            }
            let mut edges = Vec::new();
            for r in 0..*rows {
                for c in 0..*cols {
                    let v = r * cols + c;
                    if c + 1 < *cols {
                        edges.push((v, v + 1));
                    }
                    if r + 1 < *rows {
                        edges.push((v, v + cols));
                    }
                }
            }
            Ok((Graph::new(n, edges)?, None))
        }
        Family::Ring => {
            if n < 3 {
                return Err(Error::Unachievable(format!("ring needs n >= 3, got {}", n)));
            }
            Ok((
                Graph::new(n, (0..n).map(|v| (v, (v + 1) % n)))?,
                None,
            ))
        }
    }
}

/// Near-equal contiguous split of 0..n into k groups; the first n mod k
/// groups take the extra vertex.
fn near_equal_groups(n: usize, k: usize) -> Vec<usize> {
    let base = n / k;
    let extra = n % k;
    let mut labels = Vec::with_capacity(n);
    for g in 0..k {
        let size = base + usize::from(g < extra);
        labels.extend(std::iter::repeat_n(g, size));
    }
    labels
}

/// Runs a stochastic edge sampler up to 100 times looking for a connected
/// draw, then falls back to bridging components with uniformly random edges.
fn connected_stochastic(
    n: usize,
    rng: &mut ChaCha8Rng,
    mut sample: impl FnMut(&mut ChaCha8Rng) -> Vec<(usize, usize)>,
) -> Result<Graph> {
    let mut last: Option<Graph> = None;
    for _ in 0..100 {
        let edges = sample(rng);
        let g = Graph::new(n, edges)?;
        if g.is_connected() {
            return Ok(g);
        }
        last = Some(g);
    }
    let g = last.ok_or(Error::ConnectivityFailure)?;
    bridge_components(g, rng)
}

fn bridge_components(g: Graph, rng: &mut ChaCha8Rng) -> Result<Graph> {
    let n = g.n();
    let mut edges: Vec<(usize, usize, f64)> = g.edges().to_vec();
    let mut current = g;
    while !current.is_connected() {
        let comps = current.components();
        if comps.len() < 2 {
            return Err(Error::ConnectivityFailure);
        }
        let a = rng.random_range(0..comps.len());
        let b = loop {
            let b = rng.random_range(0..comps.len());
            if b != a {
                break b;
            }
        };
        let u = comps[a][rng.random_range(0..comps[a].len())];
        let v = comps[b][rng.random_range(0..comps[b].len())];
        edges.push((u.min(v), u.max(v), 1.0));
        current = Graph::new_weighted(n, edges.clone())?;
    }
    Ok(current)
}

/// Test helper: G(n, 1/2) conditioned on connectivity, drawn from the given
/// stream.
#[cfg(test)]
pub(crate) fn tests_random_connected(n: usize, rng: &mut ChaCha8Rng) -> Graph {
    loop {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.random_range(0.0..1.0) < 0.5 {
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
