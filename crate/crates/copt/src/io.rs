//! File formats and run configuration: edge-list graph files, the sketch
//! file (JSON), experiment run configs, and CSV emission for results and
//! loss curves.

use crate::align::AlignmentRunSpec;
use crate::error::{Error, Result};
use crate::graph::{Graph, LaplacianMatrix};
use crate::objective::{copt_distance_value, TransportPlan};
use crate::optim::SketchResult;
use crate::retrieval::{QueryRow, RetrievalRunSpec};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::path::Path;

pub fn read_graph(path: impl AsRef<Path>) -> Result<Graph> {
    let text = std::fs::read_to_string(path)?;
    Graph::parse_edge_list(&text)
}

pub fn write_graph(path: impl AsRef<Path>, g: &Graph) -> Result<()> {
    std::fs::write(path, g.to_edge_list())?;
    Ok(())
}

/// On-disk form of a sketch result. JSON with a fixed field order, so
/// write -> read -> write is byte-identical.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SketchFile {
    pub original_n: usize,
    pub sketch_m: usize,
    pub config_hash: u64,
    pub distance: f64,
    pub hike_iterations: Vec<usize>,
    /// Row-major M x M sketched Laplacian.
    pub laplacian: Vec<Vec<f64>>,
    /// Row-major N x M transport plan.
    pub plan: Vec<Vec<f64>>,
    pub loss_history: Vec<f64>,
    pub lr_history: Vec<f64>,
}

fn matrix_rows(mat: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..mat.nrows())
        .map(|i| mat.row(i).iter().copied().collect())
        .collect()
}

fn rows_to_matrix(rows: &[Vec<f64>], what: &str) -> Result<DMatrix<f64>> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    if nrows == 0 || ncols == 0 || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Parse(format!("{} is not rectangular", what)));
    }
    Ok(DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

impl SketchFile {
    pub fn from_result(result: &SketchResult, original_n: usize, config_hash: u64) -> Self {
        SketchFile {
            original_n,
            sketch_m: result.laplacian.dim(),
            config_hash,
            distance: result.distance,
            hike_iterations: result.hike_iterations.clone(),
            laplacian: matrix_rows(result.laplacian.as_matrix()),
            plan: matrix_rows(result.plan.as_matrix()),
            loss_history: result.loss_history.clone(),
            lr_history: result.lr_history.clone(),
        }
    }

    /// Rebuilds a validated sketch result: the Laplacian and plan must pass
    /// their invariants and the stored distance must match the best loss.
    pub fn to_result(&self) -> Result<SketchResult> {
        let laplacian = LaplacianMatrix::from_matrix(rows_to_matrix(&self.laplacian, "laplacian")?)?;
        let plan = TransportPlan::from_matrix(rows_to_matrix(&self.plan, "plan")?)?;
        if plan.rows() != self.original_n || plan.cols() != self.sketch_m {
            return Err(Error::Parse(format!(
                "plan is {}x{}, header says {}x{}",
                plan.rows(),
                plan.cols(),
                self.original_n,
                self.sketch_m
            )));
        }
        let best = self
            .loss_history
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        let expect = copt_distance_value(best, self.original_n, self.sketch_m);
        if (expect - self.distance).abs() > 1e-10 {
            return Err(Error::Parse(format!(
                "stored distance {} does not match loss history ({})",
                self.distance, expect
            )));
        }
        let singular = laplacian.fiedler_value() < 1e-8;
        Ok(SketchResult {
            distance: self.distance,
            laplacian,
            plan,
            loss_history: self.loss_history.clone(),
            lr_history: self.lr_history.clone(),
            hike_iterations: self.hike_iterations.clone(),
            singular,
            max_marginal_residual: f64::NAN,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Parse(format!("serialize sketch: {}", e)))?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("sketch file: {}", e)))
    }
}

/// A run configuration file: one experiment, adjacently tagged so unknown
/// keys are rejected at both levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "experiment", content = "config", rename_all = "snake_case", deny_unknown_fields)]
pub enum RunConfig {
    Retrieval(RetrievalRunSpec),
    Alignment(AlignmentRunSpec),
}

impl RunConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("run config: {}", e)))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Config(format!("serialize run config: {}", e)))?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        let mut text = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Config(format!("serialize run config: {}", e)))?;
        text.push('\n');
        Ok(text)
    }
}

/// iteration,loss,lr,hiked rows for loss-curve plotting.
pub fn loss_csv(losses: &[f64], lrs: &[f64], hikes: &[usize]) -> String {
    let mut out = String::from("iteration,loss,lr,hiked\n");
    for (i, loss) in losses.iter().enumerate() {
        let lr = lrs.get(i).copied().unwrap_or(f64::NAN);
        let hiked = u8::from(hikes.contains(&i));
        out.push_str(&format!("{},{},{},{}\n", i, loss, lr, hiked));
    }
    out
}

/// Per-query retrieval rows.
pub fn retrieval_csv(rows: &[QueryRow]) -> String {
    let mut out = String::from(
        "repeat,query_id,true_class,predicted_class,coarse_rank_of_truth,fine_distance\n",
    );
    for r in rows {
        let fine = r
            .fine_distance
            .map(|d| d.to_string())
            .unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.repeat, r.query_id, r.true_class, r.predicted_class, r.coarse_rank_of_truth, fine
        ));
    }
    out
}

/// Per-trial alignment rows.
pub fn alignment_csv(scores: &[f64]) -> String {
    let mut out = String::from("trial,nmi\n");
    for (t, s) in scores.iter().enumerate() {
        out.push_str(&format!("{},{}\n", t, s));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optim::{optimize_sketch, OptimConfig};
    use crate::synthgen::{generate, Family, FamilySpec};

    fn tmp(name: &str) -> std::path::PathBuf {
        let dir = std::env::temp_dir().join(format!("copt-io-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        dir.join(name)
    }

    #[test]
    fn graph_file_round_trip_is_byte_identical() {
        let g = generate(&FamilySpec::new(Family::Wheel, 9, 0)).unwrap();
        let path = tmp("wheel.edges");
        write_graph(&path, &g).unwrap();
        let first = std::fs::read(&path).unwrap();
        let loaded = read_graph(&path).unwrap();
        write_graph(&path, &loaded).unwrap();
        let second = std::fs::read(&path).unwrap();
        assert_eq!(first, second);
        assert_eq!(g, loaded);
    }

    #[test]
    fn sketch_file_round_trip_is_byte_identical() {
        let g = generate(&FamilySpec::new(Family::Ring, 10, 0)).unwrap();
        let cfg = OptimConfig {
            n_iter: 50,
            ..OptimConfig::sketch(3)
        };
        let result = optimize_sketch(&g, 4, &cfg).unwrap();
        let file = SketchFile::from_result(&result, g.n(), cfg.content_hash());
        let path = tmp("ring.sketch.json");
        file.save(&path).unwrap();
        let first = std::fs::read(&path).unwrap();
        let loaded = SketchFile::load(&path).unwrap();
        assert_eq!(file, loaded);
        loaded.save(&path).unwrap();
        let second = std::fs::read(&path).unwrap();
        assert_eq!(first, second);

        // Deserialized result passes its invariants.
        let back = loaded.to_result().unwrap();
        assert!((back.distance - result.distance).abs() < 1e-15);
        assert!(back.plan.marginal_residual() <= 1e-6);
    }

    #[test]
    fn run_config_round_trip_and_unknown_keys() {
        let cfg = RunConfig::Alignment(AlignmentRunSpec {
            family: Family::Block {
                communities: 4,
                p_in: 0.8,
                p_out: 0.05,
            },
            n: 40,
            mode: crate::align::CorruptionMode::Edges,
            removed: 30,
            trials: 10,
            seed: 7,
            optim: Default::default(),
        });
        let path = tmp("align.json");
        cfg.save(&path).unwrap();
        let first = std::fs::read(&path).unwrap();
        let loaded = RunConfig::load(&path).unwrap();
        assert_eq!(cfg, loaded);
        loaded.save(&path).unwrap();
        assert_eq!(first, std::fs::read(&path).unwrap());

        // Unknown keys are rejected at top level and inside the config.
        let bad_top = r#"{"experiment":"alignment","config":{"family":"ring","n":5,"removed":0,"trials":1,"seed":0},"extra":1}"#;
        assert!(serde_json::from_str::<RunConfig>(bad_top).is_err());
        let bad_inner = r#"{"experiment":"alignment","config":{"family":"ring","n":5,"removed":0,"trials":1,"seed":0,"bogus":2}}"#;
        assert!(serde_json::from_str::<RunConfig>(bad_inner).is_err());
    }

    #[test]
    fn loading_a_disconnected_sketch_sets_the_singular_flag() {
        // Valid Laplacian of two disjoint weighted edges; a legal sketch
        // file can carry it, and loading reports it as singular.
        let file = SketchFile {
            original_n: 4,
            sketch_m: 4,
            config_hash: 0,
            distance: copt_distance_value(16.0, 4, 4),
            hike_iterations: vec![],
            laplacian: vec![
                vec![1.0, -1.0, 0.0, 0.0],
                vec![-1.0, 1.0, 0.0, 0.0],
                vec![0.0, 0.0, 2.0, -2.0],
                vec![0.0, 0.0, -2.0, 2.0],
            ],
            plan: vec![vec![1.0; 4]; 4],
            loss_history: vec![20.0, 16.0],
            lr_history: vec![0.4, 0.4],
        };
        let result = file.to_result().unwrap();
        assert!(result.singular);
    }

    #[test]
    fn loss_csv_marks_hikes() {
        let csv = loss_csv(&[3.0, 2.0, 1.9], &[0.4, 0.4, 2.0], &[1]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "iteration,loss,lr,hiked");
        assert_eq!(lines[1], "0,3,0.4,0");
        assert_eq!(lines[2], "1,2,0.4,1");
        assert_eq!(lines[3], "2,1.9,2,0");
    }
}
