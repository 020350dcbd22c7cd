//! Downstream consumers of optimizer output: summarization (thresholded
//! sketch graph with transport-mass node labels) and the graph-alignment
//! experiment machinery (corruption, permutation, NMI scoring).

use crate::assign;
use crate::error::{Error, Result};
use crate::graph::{fnv1a_start, fnv1a_u64, Graph};
use crate::optim::{optimize_distance, OptimConfig, OptimOverrides, SketchResult};
use crate::synthgen::{generate_with_labels, Family, FamilySpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Community assignment per vertex; ids are remapped to be contiguous from 0
/// in order of first appearance.
#[derive(Debug, Clone, PartialEq)]
pub struct CommunityLabels {
    assignment: Vec<usize>,
}

impl CommunityLabels {
    pub fn new(raw: impl IntoIterator<Item = usize>) -> Self {
        let mut remap: Vec<usize> = Vec::new();
        let assignment = raw
            .into_iter()
            .map(|id| match remap.iter().position(|&r| r == id) {
                Some(idx) => idx,
                None => {
                    remap.push(id);
                    remap.len() - 1
                }
            })
            .collect();
        CommunityLabels { assignment }
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn community_count(&self) -> usize {
        self.assignment.iter().copied().max().map_or(0, |m| m + 1)
    }
}

/// Thresholded sketch graph plus, per sketch node, the original vertices
/// ranked by how much transport mass flowed into it.
#[derive(Debug, Clone)]
pub struct SummaryGraph {
    pub graph: Graph,
    /// `labels[y]` = top source vertices for sketch node y, mass-descending,
    /// ties broken by vertex index.
    pub labels: Vec<Vec<usize>>,
    pub threshold: f64,
}

impl SummaryGraph {
    pub fn is_edgeless(&self) -> bool {
        self.graph.edge_count() == 0
    }

    /// DOT-format text with the transport-mass labels embedded.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph summary {\n");
        for (y, labels) in self.labels.iter().enumerate() {
            let tags: Vec<String> = labels.iter().map(|x| format!("x{}", x)).collect();
            out.push_str(&format!(
                "  y{} [label=\"y{}: {}\"];\n",
                y,
                y,
                tags.join(",")
            ));
        }
        for &(u, v, w) in self.graph.edges() {
            out.push_str(&format!("  y{} -- y{} [weight=\"{:.6}\"];\n", u, v, w));
        }
        out.push_str("}\n");
        out
    }
}

/// Default summarization threshold: half the median magnitude of the nonzero
/// off-diagonal entries of the sketched Laplacian.
pub fn default_edge_threshold(result: &SketchResult) -> f64 {
    let ly = result.laplacian.as_matrix();
    let m = ly.nrows();
    let mut mags: Vec<f64> = Vec::new();
    for i in 0..m {
        for j in (i + 1)..m {
            let v = ly[(i, j)].abs();
            if v > 0.0 {
                mags.push(v);
            }
        }
    }
    if mags.is_empty() {
        return 0.0;
    }
    mags.sort_by(|a, b| a.total_cmp(b));
    let median = if mags.len() % 2 == 1 {
        mags[mags.len() / 2]
    } else {
        0.5 * (mags[mags.len() / 2 - 1] + mags[mags.len() / 2])
    };
    0.5 * median
}

/// Declares an edge wherever the sketched Laplacian's off-diagonal magnitude
/// exceeds `edge_threshold` (weight = that magnitude) and labels each sketch
/// node with the `labels_per_node` top-mass source vertices. Pass
/// `edge_threshold: None` for the default threshold.
pub fn summarize(
    result: &SketchResult,
    edge_threshold: Option<f64>,
    labels_per_node: usize,
) -> Result<SummaryGraph> {
    let threshold = match edge_threshold {
        Some(t) => {
            if t < 0.0 {
                return Err(Error::Numerical(format!("negative edge threshold {}", t)));
            }
            t
        }
        None => default_edge_threshold(result),
    };
    let ly = result.laplacian.as_matrix();
    let m = ly.nrows();
    let mut edges = Vec::new();
    for i in 0..m {
        for j in (i + 1)..m {
            let w = ly[(i, j)].abs();
            if w > threshold {
                edges.push((i, j, w));
            }
        }
    }
    let graph = Graph::new_weighted(m, edges)?;

    let p = result.plan.as_matrix();
    let n = p.nrows();
    let mut labels = Vec::with_capacity(m);
    for y in 0..m {
        let mut ranked: Vec<usize> = (0..n).collect();
        ranked.sort_by(|&a, &b| p[(b, y)].total_cmp(&p[(a, y)]).then(a.cmp(&b)));
        ranked.truncate(labels_per_node);
        labels.push(ranked);
    }
    Ok(SummaryGraph {
        graph,
        labels,
        threshold,
    })
}

/// Removes `edges_removed` random edges, keeping the graph connected
/// (removal sets are resampled up to 1000 times), then relabels the vertices
/// by a random permutation. Returns the corrupted graph and the permutation
/// `perm` with `perm[old] = new`.
pub fn corrupt(g: &Graph, edges_removed: usize, seed: u64) -> Result<(Graph, Vec<usize>)> {
    g.validate()?;
    let edges = g.edges();
    if edges_removed >= edges.len() {
        return Err(Error::Unachievable(format!(
            "cannot remove {} of {} edges",
            edges_removed,
            edges.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = g.n();

    let mut kept: Option<Vec<(usize, usize, f64)>> = None;
    for _ in 0..1000 {
        let mut index: Vec<usize> = (0..edges.len()).collect();
        // Partial Fisher-Yates: the first edges_removed entries drop out.
        for i in 0..edges_removed {
            let j = rng.random_range(i..index.len());
            index.swap(i, j);
        }
        let survivors: Vec<(usize, usize, f64)> =
            index[edges_removed..].iter().map(|&e| edges[e]).collect();
        let candidate = Graph::new_weighted(n, survivors.clone())?;
        if candidate.is_connected() {
            kept = Some(survivors);
            break;
        }
    }
    let kept = kept.ok_or(Error::CannotStayConnected)?;

    let perm = random_permutation(n, &mut rng);
    let permuted: Vec<(usize, usize, f64)> = kept
        .into_iter()
        .map(|(u, v, w)| (perm[u], perm[v], w))
        .collect();
    Ok((Graph::new_weighted(n, permuted)?, perm))
}

/// Node-deletion corruption mode: removes `nodes_removed` random vertices
/// (keeping the graph connected, resampled up to 1000 times), compacts the
/// indices, then permutes. Returns the corrupted graph and, per original
/// vertex, its new index (`None` for deleted vertices).
pub fn corrupt_nodes(
    g: &Graph,
    nodes_removed: usize,
    seed: u64,
) -> Result<(Graph, Vec<Option<usize>>)> {
    g.validate()?;
    let n = g.n();
    if nodes_removed >= n {
        return Err(Error::Unachievable(format!(
            "cannot remove {} of {} vertices",
            nodes_removed, n
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let survivors_n = n - nodes_removed;

    let mut survivor_set: Option<Vec<usize>> = None;
    for _ in 0..1000 {
        let mut verts: Vec<usize> = (0..n).collect();
        for i in 0..nodes_removed {
            let j = rng.random_range(i..verts.len());
            verts.swap(i, j);
        }
        let mut kept: Vec<usize> = verts[nodes_removed..].to_vec();
        kept.sort_unstable();
        let compact: Vec<(usize, usize, f64)> = g
            .edges()
            .iter()
            .filter_map(|&(u, v, w)| {
                let cu = kept.binary_search(&u).ok()?;
                let cv = kept.binary_search(&v).ok()?;
                Some((cu, cv, w))
            })
            .collect();
        if compact.is_empty() {
            continue;
        }
        let candidate = Graph::new_weighted(survivors_n, compact)?;
        if candidate.is_connected() {
            survivor_set = Some(kept);
            break;
        }
    }
    let kept = survivor_set.ok_or(Error::CannotStayConnected)?;

    let perm = random_permutation(survivors_n, &mut rng);
    let edges: Vec<(usize, usize, f64)> = g
        .edges()
        .iter()
        .filter_map(|&(u, v, w)| {
            let cu = kept.binary_search(&u).ok()?;
            let cv = kept.binary_search(&v).ok()?;
            Some((perm[cu], perm[cv], w))
        })
        .collect();
    let corrupted = Graph::new_weighted(survivors_n, edges)?;

    let mut mapping = vec![None; n];
    for (compact, &old) in kept.iter().enumerate() {
        mapping[old] = Some(perm[compact]);
    }
    Ok((corrupted, mapping))
}

fn random_permutation(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        perm.swap(i, j);
    }
    perm
}

/// Normalized mutual information I(a;b) / sqrt(H(a) H(b)), in [0, 1].
/// If either labeling has zero entropy the value is 1 when the partitions
/// are identical and 0 otherwise.
pub fn nmi(a: &CommunityLabels, b: &CommunityLabels) -> Result<f64> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::LabelSetMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let n = a.len() as f64;
    let ka = a.community_count();
    let kb = b.community_count();
    let mut joint = vec![vec![0usize; kb]; ka];
    for (&x, &y) in a.assignment().iter().zip(b.assignment()) {
        joint[x][y] += 1;
    }
    let pa: Vec<f64> = (0..ka)
        .map(|x| joint[x].iter().sum::<usize>() as f64 / n)
        .collect();
    let pb: Vec<f64> = (0..kb)
        .map(|y| (0..ka).map(|x| joint[x][y]).sum::<usize>() as f64 / n)
        .collect();
    let entropy = |p: &[f64]| -> f64 { -p.iter().filter(|&&v| v > 0.0).map(|&v| v * v.ln()).sum::<f64>() };
    let ha = entropy(&pa);
    let hb = entropy(&pb);
    if ha == 0.0 || hb == 0.0 {
        // Degenerate case: a single-community labeling carries no
        // information; score 1 only for identical partitions.
        let identical = same_partition(a, b);
        return Ok(if identical { 1.0 } else { 0.0 });
    }
    let mut mi = 0.0;
    for x in 0..ka {
        for y in 0..kb {
            let pxy = joint[x][y] as f64 / n;
            if pxy > 0.0 {
                mi += pxy * (pxy / (pa[x] * pb[y])).ln();
            }
        }
    }
    Ok((mi / (ha * hb).sqrt()).clamp(0.0, 1.0))
}

fn same_partition(a: &CommunityLabels, b: &CommunityLabels) -> bool {
    // Labels are canonicalized by first appearance, so identical partitions
    // have identical assignments.
    a.assignment() == b.assignment()
}

/// Aligns `original` against `corrupted` with the distance optimizer, rounds
/// the plan to an assignment of corrupted vertices to distinct original
/// vertices (Hungarian on the mass matrix), transports the planted labels
/// through it, and scores against the corrupted graph's true labels.
///
/// Surplus original vertices stay unmatched and are excluded from the score.
pub fn align_and_score(
    original: &Graph,
    planted: &CommunityLabels,
    corrupted: &Graph,
    corrupted_truth: &CommunityLabels,
    cfg: &OptimConfig,
) -> Result<f64> {
    if planted.len() != original.n() {
        return Err(Error::LabelSetMismatch {
            left: planted.len(),
            right: original.n(),
        });
    }
    if corrupted_truth.len() != corrupted.n() {
        return Err(Error::LabelSetMismatch {
            left: corrupted_truth.len(),
            right: corrupted.n(),
        });
    }
    let result = optimize_distance(original, corrupted, cfg)?;
    let p = result.plan.as_matrix();
    // Rows are original vertices (N), columns corrupted ones (M <= N):
    // assign each corrupted vertex a distinct original vertex.
    let assignment = assign::max_weight_assignment(&p.transpose());
    let transported = CommunityLabels::new(
        assignment
            .iter()
            .map(|&orig| planted.assignment()[orig]),
    );
    nmi(corrupted_truth, &transported)
}

/// Which corruption the alignment experiment applies: remove edges (the
/// default the experiments report) or delete nodes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorruptionMode {
    #[default]
    Edges,
    Nodes,
}

/// Specification of one alignment experiment: corrupt labeled graphs, align
/// them back with the distance optimizer, and score community recovery by
/// NMI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlignmentRunSpec {
    /// Family template; must plant community labels (block or caveman).
    pub family: Family,
    pub n: usize,
    #[serde(default)]
    pub mode: CorruptionMode,
    /// Edges (or nodes) removed per trial.
    pub removed: usize,
    pub trials: usize,
    pub seed: u64,
    #[serde(default)]
    pub optim: OptimOverrides,
}

#[derive(Debug, Clone)]
pub struct AlignmentSummary {
    pub mean_nmi: f64,
    pub std_nmi: f64,
    pub scores: Vec<f64>,
}

fn trial_seed(base: u64, stream: u64, trial: u64) -> u64 {
    let mut h = fnv1a_start();
    h = fnv1a_u64(h, base);
    h = fnv1a_u64(h, stream);
    h = fnv1a_u64(h, trial);
    h
}

/// One alignment trial: generate, corrupt, align, score.
pub fn alignment_trial(spec: &AlignmentRunSpec, trial: usize) -> Result<f64> {
    let graph_spec = FamilySpec::new(
        spec.family.clone(),
        spec.n,
        trial_seed(spec.seed, 1, trial as u64),
    );
    let (g, labels) = generate_with_labels(&graph_spec)?;
    let labels = labels.ok_or_else(|| {
        Error::InvalidParameter("alignment experiments need a label-planting family".into())
    })?;
    let planted = CommunityLabels::new(labels);

    let corrupt_seed = trial_seed(spec.seed, 2, trial as u64);
    let cfg = spec.optim.apply(OptimConfig {
        seed: trial_seed(spec.seed, 3, trial as u64),
        ..OptimConfig::distance(0)
    });

    match spec.mode {
        CorruptionMode::Edges => {
            let (h, perm) = corrupt(&g, spec.removed, corrupt_seed)?;
            let mut truth = vec![0usize; h.n()];
            for (old, &new) in perm.iter().enumerate() {
                truth[new] = planted.assignment()[old];
            }
            align_and_score(&g, &planted, &h, &CommunityLabels::new(truth), &cfg)
        }
        CorruptionMode::Nodes => {
            let (h, mapping) = corrupt_nodes(&g, spec.removed, corrupt_seed)?;
            let mut truth = vec![0usize; h.n()];
            for (old, maybe_new) in mapping.iter().enumerate() {
                if let Some(new) = maybe_new {
                    truth[*new] = planted.assignment()[old];
                }
            }
            align_and_score(&g, &planted, &h, &CommunityLabels::new(truth), &cfg)
        }
    }
}

/// Runs the trials in parallel (deterministic per trial index) and reports
/// mean and standard deviation of the NMI scores.
pub fn run_alignment_experiment(spec: &AlignmentRunSpec) -> Result<AlignmentSummary> {
    if spec.trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    let scores: Vec<f64> = (0..spec.trials)
        .into_par_iter()
        .map(|t| alignment_trial(spec, t))
        .collect::<Result<_>>()?;
    let (mean_nmi, std_nmi) = crate::retrieval::mean_std(&scores);
    Ok(AlignmentSummary {
        mean_nmi,
        std_nmi,
        scores,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optim::optimize_sketch;

    fn k4() -> Graph {
        Graph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn nmi_identical_labelings() {
        let a = CommunityLabels::new(vec![0, 0, 1, 1, 2, 2]);
        assert!((nmi(&a, &a).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nmi_is_relabel_invariant() {
        let a = CommunityLabels::new(vec![0, 0, 1, 1]);
        let b = CommunityLabels::new(vec![1, 1, 0, 0]);
        assert!((nmi(&a, &b).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nmi_independent_labelings() {
        let a = CommunityLabels::new(vec![0, 0, 1, 1]);
        let b = CommunityLabels::new(vec![0, 1, 0, 1]);
        assert!(nmi(&a, &b).unwrap().abs() < 1e-12);
    }

    #[test]
    fn nmi_symmetric() {
        let a = CommunityLabels::new(vec![0, 0, 1, 1, 2, 0, 1]);
        let b = CommunityLabels::new(vec![0, 1, 1, 1, 2, 2, 0]);
        let ab = nmi(&a, &b).unwrap();
        let ba = nmi(&b, &a).unwrap();
        assert!((ab - ba).abs() < 1e-12);
        assert!((0.0..=1.0).contains(&ab));
    }

    #[test]
    fn nmi_degenerate_single_class() {
        let a = CommunityLabels::new(vec![0, 0, 0]);
        let b = CommunityLabels::new(vec![0, 0, 0]);
        assert_eq!(nmi(&a, &b).unwrap(), 1.0);
        let c = CommunityLabels::new(vec![0, 1, 0]);
        assert_eq!(nmi(&a, &c).unwrap(), 0.0);
    }

    #[test]
    fn nmi_rejects_mismatched_lengths() {
        let a = CommunityLabels::new(vec![0, 1]);
        let b = CommunityLabels::new(vec![0, 1, 1]);
        assert!(matches!(nmi(&a, &b), Err(Error::LabelSetMismatch { .. })));
    }

    #[test]
    fn corrupt_zero_edges_is_isomorphic() {
        let g = k4();
        let (h, perm) = corrupt(&g, 0, 5).unwrap();
        assert_eq!(h.n(), 4);
        assert_eq!(h.edge_count(), 6);
        // K4 is complete; any permutation maps it to itself.
        assert_eq!(g, h);
        let mut sorted = perm.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![0, 1, 2, 3]);
    }

    #[test]
    fn corrupt_k4_keeps_connectivity() {
        let (h, _) = corrupt(&k4(), 1, 9).unwrap();
        assert_eq!(h.edge_count(), 5);
        assert!(h.is_connected());
    }

    #[test]
    fn corrupt_fails_when_connectivity_is_impossible() {
        // A 5-cycle has 5 edges; any 4-edge removal leaves a single edge on
        // 5 vertices, so no removal set can stay connected.
        let ring = Graph::new(5, (0..5).map(|v| (v, (v + 1) % 5))).unwrap();
        assert!(matches!(
            corrupt(&ring, 4, 1),
            Err(Error::CannotStayConnected)
        ));
        // Removing as many edges as exist is rejected up front.
        assert!(matches!(corrupt(&ring, 5, 1), Err(Error::Unachievable(_))));
    }

    #[test]
    fn corrupt_carries_block_labels() {
        let spec = FamilySpec::new(
            Family::Block {
                communities: 4,
                p_in: 0.8,
                p_out: 0.05,
            },
            40,
            11,
        );
        let (g, labels) = generate_with_labels(&spec).unwrap();
        let labels = labels.unwrap();
        let (h, perm) = corrupt(&g, 30, 13).unwrap();
        assert!(h.is_connected());
        assert_eq!(h.edge_count(), g.edge_count() - 30);
        // Transport the labels and check the permutation is a bijection.
        let mut moved = vec![usize::MAX; 40];
        for (old, &new) in perm.iter().enumerate() {
            moved[new] = labels[old];
        }
        assert!(moved.iter().all(|&l| l != usize::MAX));
    }

    #[test]
    fn corrupt_nodes_shrinks_and_stays_connected() {
        let spec = FamilySpec::new(
            Family::Block {
                communities: 2,
                p_in: 0.9,
                p_out: 0.2,
            },
            20,
            3,
        );
        let (g, _) = generate_with_labels(&spec).unwrap();
        let (h, mapping) = corrupt_nodes(&g, 5, 21).unwrap();
        assert_eq!(h.n(), 15);
        assert!(h.is_connected());
        assert_eq!(mapping.iter().filter(|m| m.is_some()).count(), 15);
    }

    #[test]
    fn summarize_threshold_zero_keeps_all_offdiagonals() {
        let g = crate::synthgen::generate(&FamilySpec::new(Family::Ring, 12, 0)).unwrap();
        let cfg = OptimConfig {
            n_iter: 60,
            ..OptimConfig::sketch(5)
        };
        let result = optimize_sketch(&g, 4, &cfg).unwrap();
        let all = summarize(&result, Some(0.0), 2).unwrap();
        let nonzero = {
            let ly = result.laplacian.as_matrix();
            let mut c = 0;
            for i in 0..4 {
                for j in (i + 1)..4 {
                    if ly[(i, j)].abs() > 0.0 {
                        c += 1;
                    }
                }
            }
            c
        };
        assert_eq!(all.graph.edge_count(), nonzero);

        // Threshold above the largest magnitude yields an edgeless summary.
        let max_mag = result
            .laplacian
            .as_matrix()
            .iter()
            .fold(0.0f64, |a, &b| a.max(b.abs()));
        let empty = summarize(&result, Some(max_mag + 1.0), 2).unwrap();
        assert!(empty.is_edgeless());

        // Monotonicity: higher threshold never adds edges.
        let t1 = summarize(&result, Some(0.0), 2).unwrap();
        let t2 = summarize(&result, Some(all.threshold + 0.1), 2).unwrap();
        for e in t2.graph.edges() {
            assert!(t1.graph.edges().contains(e));
        }

        // Labels are present and sized.
        assert_eq!(all.labels.len(), 4);
        assert!(all.labels.iter().all(|l| l.len() == 2));

        // DOT text contains every node.
        let dot = all.to_dot();
        for y in 0..4 {
            assert!(dot.contains(&format!("y{} [label", y)));
        }
    }

    #[test]
    fn align_recovers_exact_permutation_copy() {
        let spec = FamilySpec::new(
            Family::Block {
                communities: 2,
                p_in: 0.9,
                p_out: 0.1,
            },
            12,
            31,
        );
        let (g, labels) = generate_with_labels(&spec).unwrap();
        let planted = CommunityLabels::new(labels.unwrap());
        let (h, perm) = corrupt(&g, 0, 77).unwrap();
        let truth = CommunityLabels::new({
            let mut t = vec![0usize; h.n()];
            for (old, &new) in perm.iter().enumerate() {
                t[new] = planted.assignment()[old];
            }
            t
        });
        let cfg = OptimConfig {
            restarts: 3,
            ..OptimConfig::distance(5)
        };
        let score = nmi_score_or_panic(&g, &planted, &h, &truth, &cfg);
        assert!(score >= 0.99, "nmi {}", score);
    }

    fn nmi_score_or_panic(
        g: &Graph,
        planted: &CommunityLabels,
        h: &Graph,
        truth: &CommunityLabels,
        cfg: &OptimConfig,
    ) -> f64 {
        align_and_score(g, planted, h, truth, cfg).unwrap()
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn nmi_stays_in_unit_interval_and_symmetric(
                pairs in proptest::collection::vec((0usize..4, 0usize..4), 2..40),
            ) {
                let (a_raw, b_raw): (Vec<usize>, Vec<usize>) = pairs.into_iter().unzip();
                let a = CommunityLabels::new(a_raw);
                let b = CommunityLabels::new(b_raw);
                let ab = nmi(&a, &b).unwrap();
                let ba = nmi(&b, &a).unwrap();
                prop_assert!((0.0..=1.0).contains(&ab));
                prop_assert!((ab - ba).abs() <= 1e-12);
                prop_assert!((nmi(&a, &a).unwrap() - 1.0).abs() <= 1e-12);
            }
        }
    }
}
