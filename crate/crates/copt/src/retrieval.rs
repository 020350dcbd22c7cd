//! Fixed-dimension graph vectorization (sketch flattening and the spectral
//! baseline), nearest-neighbor retrieval, the coarse-to-fine pipeline, and
//! the retrieval experiment runner.
//!
//! A graph is vectorized either by sketching it to m nodes and flattening the
//! upper triangle of the sketched Laplacian (diagonal included, so m = 15
//! gives 120 dimensions), or by flattening the spectral projection onto the
//! eigenvectors of the k smallest nonzero Laplacian eigenvalues (n = 50,
//! k = 3 gives 150). The canonical sketch variant sorts the flattened
//! entries, which removes the dependence on sketch node order.

use crate::error::{Error, Result};
use crate::graph::{fnv1a_start, fnv1a_u64, laplacian, spectral_projection, Graph};
use crate::optim::{optimize_distance, optimize_sketch, OptimConfig, OptimOverrides};
use crate::synthgen::{generate, Family, FamilySpec};
use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VectorMethod {
    CoptSketch,
    CoptSketchCanonical,
    Spectral,
}

impl VectorMethod {
    fn tag(self) -> u8 {
        match self {
            VectorMethod::CoptSketch => 0,
            VectorMethod::CoptSketchCanonical => 1,
            VectorMethod::Spectral => 2,
        }
    }

    fn from_tag(tag: u8) -> Result<Self> {
        match tag {
            0 => Ok(VectorMethod::CoptSketch),
            1 => Ok(VectorMethod::CoptSketchCanonical),
            2 => Ok(VectorMethod::Spectral),
            other => Err(Error::Parse(format!("unknown vector method tag {}", other))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    L1,
    L2,
}

impl Metric {
    pub fn distance(self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            Metric::L1 => a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum(),
            Metric::L2 => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt(),
        }
    }
}

/// Fixed-length vector representation of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphVector {
    pub method: VectorMethod,
    pub dim: usize,
    pub values: Vec<f64>,
}

/// Upper triangle including the diagonal, row-major.
pub(crate) fn flatten_upper_triangle(mat: &DMatrix<f64>) -> Vec<f64> {
    let m = mat.nrows();
    let mut out = Vec::with_capacity(m * (m + 1) / 2);
    for i in 0..m {
        for j in i..m {
            out.push(mat[(i, j)]);
        }
    }
    out
}

/// Vectorizes a graph. `size` is the sketch size m for the sketch methods
/// and the eigenvector count k for the spectral method.
pub fn vectorize(
    g: &Graph,
    method: VectorMethod,
    size: usize,
    cfg: &OptimConfig,
) -> Result<GraphVector> {
    let values = match method {
        VectorMethod::CoptSketch | VectorMethod::CoptSketchCanonical => {
            if size >= g.n() && size != g.n() {
                return Err(Error::InvalidParameter(format!(
                    "sketch size {} exceeds graph size {}",
                    size,
                    g.n()
                )));
            }
            let result = optimize_sketch(g, size, cfg)?;
            let mut flat = flatten_upper_triangle(result.laplacian.as_matrix());
            if method == VectorMethod::CoptSketchCanonical {
                flat.sort_by(|a, b| a.total_cmp(b));
            }
            flat
        }
        VectorMethod::Spectral => {
            let l = laplacian(g)?;
            let proj = spectral_projection(&l, size)?;
            // Column-major flattening.
            let mut flat = Vec::with_capacity(g.n() * size);
            for j in 0..size {
                for i in 0..g.n() {
                    flat.push(proj[(i, j)]);
                }
            }
            flat
        }
    };
    Ok(GraphVector {
        method,
        dim: values.len(),
        values,
    })
}

/// Index of the dataset vector nearest to the query; ties break toward the
/// lowest index.
pub fn nearest(query: &GraphVector, dataset: &[GraphVector], metric: Metric) -> Result<usize> {
    if dataset.is_empty() {
        return Err(Error::EmptyDataset);
    }
    for (i, v) in dataset.iter().enumerate() {
        if v.method != query.method || v.dim != query.dim {
            return Err(Error::VectorMismatch(format!(
                "dataset vector {} has method {:?} dim {}, query has {:?} dim {}",
                i, v.method, v.dim, query.method, query.dim
            )));
        }
    }
    let mut best = 0usize;
    let mut best_d = metric.distance(&query.values, &dataset[0].values);
    for (i, v) in dataset.iter().enumerate().skip(1) {
        let d = metric.distance(&query.values, &v.values);
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    Ok(best)
}

/// One candidate from the retrieval pipeline.
#[derive(Debug, Clone)]
pub struct RankedCandidate {
    pub index: usize,
    pub coarse_distance: f64,
    pub fine_distance: Option<f64>,
}

/// Coarse stage settings for the pipeline.
#[derive(Debug, Clone)]
pub struct CoarseStage {
    pub method: VectorMethod,
    pub size: usize,
    pub metric: Metric,
    pub cfg: OptimConfig,
}

/// Coarse vector filtering followed by an optional fine re-ranking with the
/// full distance on the original (unsketched) graphs.
pub fn pipeline_retrieve(
    query: &Graph,
    dataset: &[Graph],
    dataset_vectors: &[GraphVector],
    coarse: &CoarseStage,
    top_k: usize,
    fine: Option<&OptimConfig>,
) -> Result<Vec<RankedCandidate>> {
    if dataset.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if dataset.len() != dataset_vectors.len() {
        return Err(Error::VectorMismatch(format!(
            "{} graphs but {} vectors",
            dataset.len(),
            dataset_vectors.len()
        )));
    }
    if top_k == 0 || top_k > dataset.len() {
        return Err(Error::InvalidParameter(format!(
            "top_k {} out of range for dataset of {}",
            top_k,
            dataset.len()
        )));
    }
    let qv = vectorize(query, coarse.method, coarse.size, &coarse.cfg)?;
    let mut ranked: Vec<RankedCandidate> = dataset_vectors
        .iter()
        .enumerate()
        .map(|(i, v)| {
            if v.method != qv.method || v.dim != qv.dim {
                return Err(Error::VectorMismatch(format!(
                    "dataset vector {} does not match the query vector",
                    i
                )));
            }
            Ok(RankedCandidate {
                index: i,
                coarse_distance: coarse.metric.distance(&qv.values, &v.values),
                fine_distance: None,
            })
        })
        .collect::<Result<_>>()?;
    ranked.sort_by(|a, b| a.coarse_distance.total_cmp(&b.coarse_distance).then(a.index.cmp(&b.index)));
    ranked.truncate(top_k);

    if let Some(fine_cfg) = fine {
        for candidate in ranked.iter_mut() {
            let r = optimize_distance(query, &dataset[candidate.index], fine_cfg)?;
            candidate.fine_distance = Some(r.distance);
        }
        ranked.sort_by(|a, b| {
            a.fine_distance
                .unwrap()
                .total_cmp(&b.fine_distance.unwrap())
                .then(a.index.cmp(&b.index))
        });
    }
    Ok(ranked)
}

/// Specification of one retrieval experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RetrievalRunSpec {
    /// One family template per class; graphs of class c are drawn from
    /// `classes[c]` with per-graph seeds.
    pub classes: Vec<Family>,
    pub dataset_per_class: usize,
    pub queries_per_class: usize,
    /// Vertices per generated graph.
    pub n: usize,
    pub method: VectorMethod,
    /// Sketch size m (sketch methods) or eigenvector count k (spectral).
    pub size: usize,
    pub metric: Metric,
    /// When set, the fine stage re-ranks this many coarse candidates with
    /// the full distance on the original graphs.
    pub top_k: Option<usize>,
    pub repeats: usize,
    pub seed: u64,
    #[serde(default)]
    pub optim: OptimOverrides,
}

/// One query outcome for the CSV report.
#[derive(Debug, Clone)]
pub struct QueryRow {
    pub repeat: usize,
    pub query_id: usize,
    pub true_class: usize,
    pub predicted_class: usize,
    /// 1-based rank of the best same-class dataset graph in the coarse
    /// ordering.
    pub coarse_rank_of_truth: usize,
    pub fine_distance: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct RetrievalSummary {
    pub mean_accuracy: f64,
    pub std_accuracy: f64,
    pub per_repeat: Vec<f64>,
    pub rows: Vec<QueryRow>,
}

pub(crate) fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

fn derive_seed(base: u64, stream: u64, index: u64) -> u64 {
    let mut h = fnv1a_start();
    h = fnv1a_u64(h, base);
    h = fnv1a_u64(h, stream);
    h = fnv1a_u64(h, index);
    h
}

/// Runs the retrieval experiment: per repeat, generates a fresh labeled
/// dataset and query set, vectorizes everything (in parallel, through the
/// cache when one is given), predicts each query's class as the class of its
/// nearest neighbor (or of the fine stage's top candidate), and aggregates
/// accuracy as mean and standard deviation over repeats.
pub fn run_retrieval_experiment(
    spec: &RetrievalRunSpec,
    cache: Option<&mut VectorCache>,
) -> Result<RetrievalSummary> {
    if spec.classes.is_empty() || spec.dataset_per_class == 0 || spec.queries_per_class == 0 {
        return Err(Error::InvalidParameter(
            "retrieval experiment needs classes, dataset and query counts".into(),
        ));
    }
    if spec.repeats == 0 {
        return Err(Error::InvalidParameter("repeats must be positive".into()));
    }
    let mut cache = cache;
    let mut per_repeat = Vec::with_capacity(spec.repeats);
    let mut rows = Vec::new();

    for repeat in 0..spec.repeats {
        // One optimizer seed per repeat, shared by every vectorization in it:
        // a common initialization makes sketches of similar graphs line up.
        let base_cfg = OptimConfig {
            seed: derive_seed(spec.seed, 1, repeat as u64),
            ..OptimConfig::sketch(0)
        };
        let cfg = spec.optim.apply(base_cfg);

        let make_specs = |stream: u64, per_class: usize| -> Vec<(FamilySpec, usize)> {
            let mut specs = Vec::new();
            for (class, family) in spec.classes.iter().enumerate() {
                for i in 0..per_class {
                    let seed = derive_seed(
                        spec.seed,
                        stream + 10 * repeat as u64,
                        (class * per_class + i) as u64,
                    );
                    specs.push((FamilySpec::new(family.clone(), spec.n, seed), class));
                }
            }
            specs
        };
        let dataset_specs = make_specs(100, spec.dataset_per_class);
        let query_specs = make_specs(200, spec.queries_per_class);

        let dataset: Vec<(Graph, usize)> = dataset_specs
            .par_iter()
            .map(|(fs, class)| generate(fs).map(|g| (g, *class)))
            .collect::<Result<_>>()?;
        let queries: Vec<(Graph, usize)> = query_specs
            .par_iter()
            .map(|(fs, class)| generate(fs).map(|g| (g, *class)))
            .collect::<Result<_>>()?;

        let dataset_vectors =
            vectorize_all(dataset.iter().map(|(g, _)| g), spec, &cfg, cache.as_deref_mut())?;
        let query_vectors =
            vectorize_all(queries.iter().map(|(g, _)| g), spec, &cfg, cache.as_deref_mut())?;

        let mut correct = 0usize;
        for (qi, ((query_graph, true_class), qv)) in
            queries.iter().zip(&query_vectors).enumerate()
        {
            let mut order: Vec<usize> = (0..dataset.len()).collect();
            let dists: Vec<f64> = dataset_vectors
                .iter()
                .map(|v| spec.metric.distance(&qv.values, &v.values))
                .collect();
            order.sort_by(|&a, &b| dists[a].total_cmp(&dists[b]).then(a.cmp(&b)));

            let coarse_rank_of_truth = order
                .iter()
                .position(|&i| dataset[i].1 == *true_class)
                .map(|p| p + 1)
                .unwrap_or(0);

            let (predicted_index, fine_distance) = match spec.top_k {
                None => (order[0], None),
                Some(top_k) => {
                    let top_k = top_k.min(order.len());
                    let fine_cfg = OptimConfig {
                        n_iter: cfg.n_iter.min(300),
                        ..cfg.clone()
                    };
                    let mut best = (order[0], f64::INFINITY);
                    for &i in order.iter().take(top_k) {
                        let r = optimize_distance(query_graph, &dataset[i].0, &fine_cfg)?;
                        if r.distance < best.1 {
                            best = (i, r.distance);
                        }
                    }
                    (best.0, Some(best.1))
                }
            };
            let predicted_class = dataset[predicted_index].1;
            if predicted_class == *true_class {
                correct += 1;
            }
            rows.push(QueryRow {
                repeat,
                query_id: qi,
                true_class: *true_class,
                predicted_class,
                coarse_rank_of_truth,
                fine_distance,
            });
        }
        per_repeat.push(correct as f64 / queries.len() as f64);
    }

    let (mean_accuracy, std_accuracy) = mean_std(&per_repeat);
    Ok(RetrievalSummary {
        mean_accuracy,
        std_accuracy,
        per_repeat,
        rows,
    })
}

fn vectorize_all<'a>(
    graphs: impl Iterator<Item = &'a Graph>,
    spec: &RetrievalRunSpec,
    cfg: &OptimConfig,
    mut cache: Option<&mut VectorCache>,
) -> Result<Vec<GraphVector>> {
    let graphs: Vec<&Graph> = graphs.collect();
    let cfg_hash = vector_config_hash(spec.method, spec.size, cfg);
    let cached: Vec<Option<GraphVector>> = graphs
        .iter()
        .map(|g| {
            cache
                .as_deref()
                .and_then(|c| c.get(g.content_hash(), cfg_hash).cloned())
        })
        .collect();
    let computed: Vec<Option<GraphVector>> = graphs
        .par_iter()
        .zip(&cached)
        .map(|(g, hit)| match hit {
            Some(_) => Ok(None),
            None => vectorize(g, spec.method, spec.size, cfg).map(Some),
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(graphs.len());
    for ((g, hit), fresh) in graphs.iter().zip(cached).zip(computed) {
        let v = match (hit, fresh) {
            (Some(v), _) => v,
            (None, Some(v)) => {
                if let Some(c) = cache.as_deref_mut() {
                    c.insert(g.content_hash(), cfg_hash, &v)?;
                }
                v
            }
            (None, None) => unreachable!("either cached or computed"),
        };
        out.push(v);
    }
    Ok(out)
}

/// Hash identifying a vectorization configuration (method, size, optimizer).
pub fn vector_config_hash(method: VectorMethod, size: usize, cfg: &OptimConfig) -> u64 {
    let mut h = fnv1a_start();
    h = fnv1a_u64(h, method.tag() as u64);
    h = fnv1a_u64(h, size as u64);
    h = fnv1a_u64(h, cfg.content_hash());
    h
}

const CACHE_HEADER: &str = "{\"format\":\"copt-vector-cache\",\"version\":1}";

/// Disk-backed store of computed graph vectors keyed by (graph hash, config
/// hash). One JSON header line, then fixed-layout binary records
/// (little-endian): graph hash u64, config hash u64, method u8, dim u32,
/// dim f64 values.
#[derive(Debug)]
pub struct VectorCache {
    map: HashMap<(u64, u64), GraphVector>,
    path: Option<PathBuf>,
}

impl VectorCache {
    pub fn in_memory() -> Self {
        VectorCache {
            map: HashMap::new(),
            path: None,
        }
    }

    /// Opens (or creates) a cache file and loads every record.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut cache = VectorCache {
            map: HashMap::new(),
            path: Some(path.clone()),
        };
        if !path.exists() {
            let mut f = std::fs::File::create(&path)?;
            writeln!(f, "{}", CACHE_HEADER)?;
            return Ok(cache);
        }
        let mut reader = BufReader::new(std::fs::File::open(&path)?);
        let mut header = String::new();
        reader.read_line(&mut header)?;
        if header.trim_end() != CACHE_HEADER {
            return Err(Error::Parse(format!(
                "unexpected vector cache header: {}",
                header.trim_end()
            )));
        }
        loop {
            let mut fixed = [0u8; 8 + 8 + 1 + 4];
            match reader.read_exact(&mut fixed) {
                Ok(()) => {}
                Err(e) if e.kind() == std::io::ErrorKind::UnexpectedEof => break,
                Err(e) => return Err(e.into()),
            }
            let graph_hash = u64::from_le_bytes(fixed[0..8].try_into().unwrap());
            let cfg_hash = u64::from_le_bytes(fixed[8..16].try_into().unwrap());
            let method = VectorMethod::from_tag(fixed[16])?;
            let dim = u32::from_le_bytes(fixed[17..21].try_into().unwrap()) as usize;
            let mut raw = vec![0u8; dim * 8];
            reader.read_exact(&mut raw)?;
            let values: Vec<f64> = raw
                .chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
                .collect();
            cache
                .map
                .insert((graph_hash, cfg_hash), GraphVector { method, dim, values });
        }
        Ok(cache)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn get(&self, graph_hash: u64, cfg_hash: u64) -> Option<&GraphVector> {
        self.map.get(&(graph_hash, cfg_hash))
    }

    /// Inserts a vector, appending it to the backing file when one exists.
    pub fn insert(&mut self, graph_hash: u64, cfg_hash: u64, vector: &GraphVector) -> Result<()> {
        if self.map.contains_key(&(graph_hash, cfg_hash)) {
            return Ok(());
        }
        if let Some(path) = &self.path {
            let mut f = std::fs::OpenOptions::new().append(true).open(path)?;
            let mut record = Vec::with_capacity(21 + vector.values.len() * 8);
            record.extend_from_slice(&graph_hash.to_le_bytes());
            record.extend_from_slice(&cfg_hash.to_le_bytes());
            record.push(vector.method.tag());
            record.extend_from_slice(&(vector.dim as u32).to_le_bytes());
            for v in &vector.values {
                record.extend_from_slice(&v.to_le_bytes());
            }
            f.write_all(&record)?;
        }
        self.map.insert((graph_hash, cfg_hash), vector.clone());
        Ok(())
    }
}
