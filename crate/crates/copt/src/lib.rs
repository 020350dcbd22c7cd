//! # copt
//!
//! Coordinated optimal transport between graphs: a distance defined by
//! jointly optimizing a vertex transport plan against the Wasserstein
//! distance between the graphs' Laplacian-pseudoinverse Gaussian signals,
//! plus sketching (reduction of a graph to a smaller weighted Laplacian that
//! minimizes this distance) and benchmark harnesses for retrieval, alignment,
//! and summarization.
//!
//! ## Layout
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`graph`] | Graph type, validation, Laplacian, pseudoinverse, spectral projection |
//! | [`objective`] | The analytic objective, gradients, Sinkhorn normalization |
//! | [`optim`] | Adam loops for distance and sketching, LR schedule with hikes |
//! | [`synthgen`] | Seeded synthetic graph families |
//! | [`align`] | Summarization, corruption, NMI alignment scoring |
//! | [`retrieval`] | Vectorization, nearest neighbor, retrieval experiments |
//! | [`io`] | Edge-list / sketch / run-config files, CSV emission |
//!
//! ## Quick start
//!
//! ```rust
//! use copt::prelude::*;
//!
//! let x = synthgen::generate(&FamilySpec::new(Family::Ring, 8, 0)).unwrap();
//! let y = synthgen::generate(&FamilySpec::new(Family::Star, 6, 0)).unwrap();
//! let cfg = OptimConfig { n_iter: 60, ..OptimConfig::distance(7) };
//! let result = optimize_distance(&x, &y, &cfg).unwrap();
//! assert!(result.distance > 0.0);
//! ```

pub mod align;
mod assign;
mod eig;
pub mod error;
pub mod graph;
pub mod io;
pub mod objective;
pub mod optim;
pub mod retrieval;
pub mod synthgen;

pub use error::{Error, Result};
pub use graph::{
    laplacian, pseudoinverse, pseudoinverse_spectral, spectral_projection, Graph, LaplacianMatrix,
    PseudoInverse,
};
pub use objective::{
    copt_distance_value, copt_gradient_plan, copt_gradient_sketch, copt_objective,
    laplacian_from_params, sinkhorn_normalize, trace_sqrt, SketchParams, TransportPlan,
};
pub use optim::{
    optimize_distance, optimize_sketch, round_to_permutation, AdamState, DistanceResult,
    LrSchedule, OptimConfig, OptimOverrides, PermutationRounding, SketchResult,
};

/// Everything most callers need.
pub mod prelude {
    pub use crate::align::{
        self, align_and_score, corrupt, corrupt_nodes, nmi, run_alignment_experiment, summarize,
        AlignmentRunSpec, CommunityLabels, SummaryGraph,
    };
    pub use crate::error::{Error, Result};
    pub use crate::graph::{laplacian, pseudoinverse, spectral_projection, Graph};
    pub use crate::io;
    pub use crate::objective::{
        copt_distance_value, copt_objective, sinkhorn_normalize, SketchParams, TransportPlan,
    };
    pub use crate::optim::{
        optimize_distance, optimize_sketch, round_to_permutation, OptimConfig, OptimOverrides,
    };
    pub use crate::retrieval::{
        self, nearest, pipeline_retrieve, run_retrieval_experiment, vectorize, GraphVector,
        Metric, RetrievalRunSpec, VectorMethod,
    };
    pub use crate::synthgen::{self, Family, FamilySpec};
}
