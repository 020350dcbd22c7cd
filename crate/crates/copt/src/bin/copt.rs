//! Command-line surface: distance, sketch, retrieve, align, summarize, gen.
//!
//! Exit codes: 0 ok, 2 I/O or parse errors, 3 validation errors, 4 numerical
//! failures.

use clap::{Parser, Subcommand};
use copt::align::{run_alignment_experiment, summarize};
use copt::io::{self, RunConfig, SketchFile};
use copt::retrieval::{run_retrieval_experiment, VectorCache};
use copt::synthgen::{generate_with_labels, Family, FamilySpec};
use copt::{optimize_distance, optimize_sketch, Error, OptimConfig};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "copt",
    about = "Optimal-transport graph distance, sketching, and benchmark experiments",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Random seed.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Iteration budget (default: 300 for distance, 1000 for sketch).
    #[arg(long, global = true)]
    iters: Option<usize>,

    /// Optimizer restarts, best result kept.
    #[arg(long, global = true)]
    restarts: Option<usize>,

    /// Initial learning rate.
    #[arg(long, global = true, default_value_t = 0.4)]
    lr: f64,

    /// Output path (sketch file, edge list, DOT, or results directory,
    /// depending on the subcommand).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Distance between two edge-list graphs.
    Distance {
        graph_a: PathBuf,
        graph_b: PathBuf,
        /// Write the converged transport plan (JSON rows).
        #[arg(long)]
        plan: Option<PathBuf>,
        /// Write the loss curve (iteration,loss,lr,hiked CSV).
        #[arg(long)]
        loss: Option<PathBuf>,
    },
    /// Sketch a graph to a smaller weighted Laplacian and save it.
    Sketch {
        graph: PathBuf,
        /// Target sketch size m (>= 2).
        #[arg(long)]
        size: usize,
        /// Also write a thresholded DOT summary here.
        #[arg(long)]
        summarize: Option<PathBuf>,
        /// Edge threshold for the summary (default: half the median
        /// off-diagonal magnitude).
        #[arg(long)]
        threshold: Option<f64>,
        /// Source labels per summary node.
        #[arg(long, default_value_t = 2)]
        labels: usize,
        /// Write the loss curve CSV here.
        #[arg(long)]
        loss_csv: Option<PathBuf>,
    },
    /// Run a retrieval experiment from a run-config file.
    Retrieve {
        config: PathBuf,
        /// Persist sketch vectors here between runs.
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Run an alignment experiment from a run-config file.
    Align { config: PathBuf },
    /// Emit a DOT summary of a saved sketch.
    Summarize {
        sketch: PathBuf,
        #[arg(long)]
        threshold: Option<f64>,
        #[arg(long, default_value_t = 2)]
        labels: usize,
    },
    /// Generate a synthetic graph as edge-list text.
    Gen {
        /// One of: block, block_2, block_3, block_4, random_geometric,
        /// barabasi_albert, random_regular, powerlaw_tree, caveman, barbell,
        /// wheel, ladder, lollipop, star, grid, ring.
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.8)]
        p_in: f64,
        #[arg(long, default_value_t = 0.05)]
        p_out: f64,
        #[arg(long)]
        communities: Option<usize>,
        #[arg(long, default_value_t = 0.3)]
        radius: f64,
        #[arg(long, default_value_t = 2)]
        attach: usize,
        #[arg(long, default_value_t = 4)]
        degree: usize,
        #[arg(long, default_value_t = 4)]
        cliques: usize,
        #[arg(long)]
        rows: Option<usize>,
        #[arg(long)]
        cols: Option<usize>,
        /// Also write the planted community labels (one per line).
        #[arg(long)]
        labels_out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err);
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn apply_cli(cli: &Cli, mut cfg: OptimConfig) -> OptimConfig {
    cfg.seed = cli.seed;
    cfg.lr0 = cli.lr;
    if let Some(iters) = cli.iters {
        cfg.n_iter = iters;
    }
    if let Some(restarts) = cli.restarts {
        cfg.restarts = restarts;
    }
    cfg
}

fn run(cli: &Cli) -> copt::Result<()> {
    match &cli.command {
        Command::Distance {
            graph_a,
            graph_b,
            plan,
            loss,
        } => {
            let a = io::read_graph(graph_a)?;
            let b = io::read_graph(graph_b)?;
            let cfg = apply_cli(cli, OptimConfig::distance(0));
            let result = optimize_distance(&a, &b, &cfg)?;
            println!("distance: {}", result.distance);
            if let Some(path) = plan {
                let rows: Vec<Vec<f64>> = (0..result.plan.rows())
                    .map(|i| result.plan.as_matrix().row(i).iter().copied().collect())
                    .collect();
                let text = serde_json::to_string_pretty(&rows)
                    .map_err(|e| Error::Parse(format!("serialize plan: {}", e)))?;
                std::fs::write(path, text + "\n")?;
            }
            if let Some(path) = loss {
                std::fs::write(
                    path,
                    io::loss_csv(&result.loss_history, &result.lr_history, &result.hike_iterations),
                )?;
            }
            Ok(())
        }
        Command::Sketch {
            graph,
            size,
            summarize: summarize_path,
            threshold,
            labels,
            loss_csv,
        } => {
            let g = io::read_graph(graph)?;
            let cfg = apply_cli(cli, OptimConfig::sketch(0));
            let result = optimize_sketch(&g, *size, &cfg)?;
            if result.singular {
                eprintln!("warning: sketched Laplacian is effectively disconnected");
            }
            println!("distance: {}", result.distance);
            let out = cli.out.clone().unwrap_or_else(|| PathBuf::from("sketch.json"));
            SketchFile::from_result(&result, g.n(), cfg.content_hash()).save(&out)?;
            println!("sketch: {}", out.display());
            if let Some(path) = summarize_path {
                let summary = summarize(&result, *threshold, *labels)?;
                if summary.is_edgeless() {
                    eprintln!(
                        "warning: summary graph has no edges at threshold {}",
                        summary.threshold
                    );
                }
                std::fs::write(path, summary.to_dot())?;
            }
            if let Some(path) = loss_csv {
                std::fs::write(
                    path,
                    io::loss_csv(&result.loss_history, &result.lr_history, &result.hike_iterations),
                )?;
            }
            Ok(())
        }
        Command::Retrieve { config, cache } => {
            let spec = match RunConfig::load(config)? {
                RunConfig::Retrieval(spec) => spec,
                RunConfig::Alignment(_) => {
                    return Err(Error::Config(
                        "expected a retrieval config, found an alignment one".into(),
                    ))
                }
            };
            let mut cache_store = match cache {
                Some(path) => Some(VectorCache::open(path)?),
                None => None,
            };
            let summary = run_retrieval_experiment(&spec, cache_store.as_mut())?;
            let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
            std::fs::create_dir_all(&dir)?;
            std::fs::write(dir.join("retrieval.csv"), io::retrieval_csv(&summary.rows))?;
            println!(
                "accuracy: {:.4} ± {:.4}",
                summary.mean_accuracy, summary.std_accuracy
            );
            Ok(())
        }
        Command::Align { config } => {
            let spec = match RunConfig::load(config)? {
                RunConfig::Alignment(spec) => spec,
                RunConfig::Retrieval(_) => {
                    return Err(Error::Config(
                        "expected an alignment config, found a retrieval one".into(),
                    ))
                }
            };
            let summary = run_alignment_experiment(&spec)?;
            let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
            std::fs::create_dir_all(&dir)?;
            std::fs::write(dir.join("alignment.csv"), io::alignment_csv(&summary.scores))?;
            println!("nmi: {:.4} ± {:.4}", summary.mean_nmi, summary.std_nmi);
            Ok(())
        }
        Command::Summarize {
            sketch,
            threshold,
            labels,
        } => {
            let result = SketchFile::load(sketch)?.to_result()?;
            let summary = summarize(&result, *threshold, *labels)?;
            if summary.is_edgeless() {
                eprintln!(
                    "warning: summary graph has no edges at threshold {}",
                    summary.threshold
                );
            }
            match &cli.out {
                Some(path) => std::fs::write(path, summary.to_dot())?,
                None => print!("{}", summary.to_dot()),
            }
            Ok(())
        }
        Command::Gen {
            family,
            n,
            p_in,
            p_out,
            communities,
            radius,
            attach,
            degree,
            cliques,
            rows,
            cols,
            labels_out,
        } => {
            let family = parse_family(
                family,
                *n,
                *p_in,
                *p_out,
                *communities,
                *radius,
                *attach,
                *degree,
                *cliques,
                *rows,
                *cols,
            )?;
            let spec = FamilySpec::new(family, *n, cli.seed);
            let (g, labels) = generate_with_labels(&spec)?;
            match &cli.out {
                Some(path) => io::write_graph(path, &g)?,
                None => print!("{}", g.to_edge_list()),
            }
            if let Some(path) = labels_out {
                match labels {
                    Some(labels) => {
                        let mut text = String::new();
                        for l in labels {
                            text.push_str(&format!("{}\n", l));
                        }
                        std::fs::write(path, text)?;
                    }
                    None => {
                        return Err(Error::InvalidParameter(
                            "this family does not plant labels".into(),
                        ))
                    }
                }
            }
            Ok(())
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn parse_family(
    name: &str,
    n: usize,
    p_in: f64,
    p_out: f64,
    communities: Option<usize>,
    radius: f64,
    attach: usize,
    degree: usize,
    cliques: usize,
    rows: Option<usize>,
    cols: Option<usize>,
) -> copt::Result<Family> {
    let block = |k: usize| Family::Block {
        communities: k,
        p_in,
        p_out,
    };
    Ok(match name {
        "block" => block(communities.unwrap_or(2)),
        "block_2" => block(2),
        "block_3" => block(3),
        "block_4" => block(4),
        "random_geometric" => Family::RandomGeometric { radius },
        "barabasi_albert" => Family::BarabasiAlbert { attach },
        "random_regular" => Family::RandomRegular { degree },
        "powerlaw_tree" => Family::PowerlawTree,
        "caveman" => Family::Caveman { cliques },
        "barbell" => Family::Barbell,
        "wheel" => Family::Wheel,
        "ladder" => Family::Ladder,
        "lollipop" => Family::Lollipop,
        "star" => Family::Star,
        "grid" => {
            let (r, c) = match (rows, cols) {
                (Some(r), Some(c)) => (r, c),
                (None, None) => nearest_factor_pair(n),
                _ => {
                    return Err(Error::InvalidParameter(
                        "grid needs both --rows and --cols, or neither".into(),
                    ))
                }
            };
            Family::Grid { rows: r, cols: c }
        }
        "ring" => Family::Ring,
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown family '{}'",
                other
            )))
        }
    })
}

/// Factor pair of n closest to square (rows <= cols).
fn nearest_factor_pair(n: usize) -> (usize, usize) {
    let mut best = (1, n);
    let mut r = 1;
    while r * r <= n {
        if n.is_multiple_of(r) {
            best = (r, n / r);
        }
        r += 1;
    }
    best
}
