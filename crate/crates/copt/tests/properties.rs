//! Cross-module invariants that go beyond single-module unit tests: route
//! agreement for the pseudoinverse, the lifted-map identities behind the
//! closed form, optimizer determinism and feasibility guarantees, and the
//! qualitative sketch checks.

mod common;

use copt::align::{align_and_score, CommunityLabels};
use copt::prelude::*;
use copt::{
    copt_distance_value, copt_gradient_plan, laplacian, pseudoinverse, pseudoinverse_spectral,
    round_to_permutation, OptimConfig, TransportPlan,
};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn pseudoinverse_routes_agree_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for i in 0..100 {
        let n = rng.random_range(2..=30);
        let g = common::random_connected_graph(n, 0.3, &mut rng);
        let l = laplacian(&g).unwrap();
        let projection = pseudoinverse(&l).unwrap();
        let spectral = pseudoinverse_spectral(&l).unwrap();
        let gap = (projection.as_matrix() - spectral.as_matrix()).norm();
        assert!(gap <= 1e-8, "graph {} (n={}): route gap {}", i, n, gap);
    }
}

#[test]
fn pseudoinverse_trace_equals_reciprocal_eigenvalue_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..20 {
        let n = rng.random_range(3..=20);
        let g = common::random_connected_graph(n, 0.4, &mut rng);
        let l = laplacian(&g).unwrap();
        let pinv = pseudoinverse(&l).unwrap();
        let eig = l.as_matrix().clone().symmetric_eigen();
        let max = eig.eigenvalues.iter().fold(0.0f64, |a, &b| a.max(b));
        let recip_sum: f64 = eig
            .eigenvalues
            .iter()
            .filter(|&&v| v > 1e-8 * max)
            .map(|&v| 1.0 / v)
            .sum();
        assert!(
            (pinv.trace() - recip_sum).abs() <= 1e-8 * recip_sum.max(1.0),
            "trace {} vs reciprocal sum {}",
            pinv.trace(),
            recip_sum
        );
    }
}

#[test]
fn lifted_maps_satisfy_proof_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for _ in 0..20 {
        let n = rng.random_range(2..=6);
        let m = rng.random_range(2..=6);
        let plan = common::random_feasible_plan(n, m, &mut rng);
        let (a, b) = common::lift_maps(plan.as_matrix());

        let ata = a.transpose() * &a;
        let btb = b.transpose() * &b;
        let bta = b.transpose() * &a;
        for i in 0..n {
            for j in 0..n {
                let expect = if i == j { m as f64 } else { 0.0 };
                assert!((ata[(i, j)] - expect).abs() < 1e-9, "A^T A at ({}, {})", i, j);
            }
        }
        for i in 0..m {
            for j in 0..m {
                let expect = if i == j { n as f64 } else { 0.0 };
                assert!((btb[(i, j)] - expect).abs() < 1e-9, "B^T B at ({}, {})", i, j);
            }
        }
        // B^T A recovers the plan (entry (y, x) = P(x, y)).
        for x in 0..n {
            for y in 0..m {
                assert!(
                    (bta[(y, x)] - plan.as_matrix()[(x, y)]).abs() < 1e-9,
                    "B^T A at ({}, {})",
                    y,
                    x
                );
            }
        }
    }
}

#[test]
fn optimizer_is_deterministic_per_seed() {
    let g = synthgen::generate(&FamilySpec::new(Family::Wheel, 12, 0)).unwrap();
    let h = synthgen::generate(&FamilySpec::new(Family::Ladder, 10, 0)).unwrap();
    let cfg = OptimConfig {
        n_iter: 120,
        ..OptimConfig::distance(99)
    };
    let a = optimize_distance(&g, &h, &cfg).unwrap();
    let b = optimize_distance(&g, &h, &cfg).unwrap();
    assert_eq!(a.loss_history, b.loss_history, "loss history not bit-identical");
    assert_eq!(a.distance, b.distance);
    assert_eq!(a.plan.as_matrix(), b.plan.as_matrix());

    let s1 = optimize_sketch(&g, 4, &cfg).unwrap();
    let s2 = optimize_sketch(&g, 4, &cfg).unwrap();
    assert_eq!(s1.loss_history, s2.loss_history);
}

#[test]
fn distance_is_exactly_symmetric() {
    let mut rng = ChaCha8Rng::seed_from_u64(45);
    for t in 0..5u64 {
        let g = common::random_connected_graph(8, 0.4, &mut rng);
        let h = common::random_connected_graph(6, 0.5, &mut rng);
        let cfg = OptimConfig {
            n_iter: 150,
            ..OptimConfig::distance(t)
        };
        let fwd = optimize_distance(&g, &h, &cfg).unwrap();
        let bwd = optimize_distance(&h, &g, &cfg).unwrap();
        assert_eq!(fwd.distance, bwd.distance);
        assert_eq!(
            fwd.plan.as_matrix(),
            &bwd.plan.as_matrix().transpose(),
            "plans are not transposes of each other"
        );
    }
}

#[test]
fn more_restarts_never_increase_the_distance() {
    let g = synthgen::generate(&FamilySpec::new(Family::Lollipop, 12, 3)).unwrap();
    let h = synthgen::generate(&FamilySpec::new(Family::Ring, 9, 3)).unwrap();
    let mut previous = f64::INFINITY;
    for restarts in [1usize, 2, 4] {
        let cfg = OptimConfig {
            n_iter: 200,
            restarts,
            ..OptimConfig::distance(5)
        };
        let r = optimize_distance(&g, &h, &cfg).unwrap();
        assert!(
            r.distance <= previous + 1e-15,
            "distance rose from {} to {} at {} restarts",
            previous,
            r.distance,
            restarts
        );
        previous = r.distance;
    }
}

#[test]
fn live_plan_stays_near_feasible_and_result_is_tight() {
    let g = synthgen::generate(&FamilySpec::new(Family::Barbell, 20, 1)).unwrap();
    let cfg = OptimConfig {
        n_iter: 400,
        ..OptimConfig::sketch(2)
    };
    let r = optimize_sketch(&g, 6, &cfg).unwrap();
    // Five sweeps keep the live plan loosely feasible; the worst iterations
    // (right after a learning-rate hike) land within a fraction of the
    // marginal targets, and the returned plan is re-normalized hard.
    assert!(
        r.max_marginal_residual <= 0.5 * 20.0,
        "live marginal residual {} out of bounds",
        r.max_marginal_residual
    );
    assert!(
        r.plan.marginal_residual() <= 1e-6,
        "returned plan residual {}",
        r.plan.marginal_residual()
    );
    // Distance ties to the best loss.
    let best = r.loss_history.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!((r.distance - copt_distance_value(best, 20, 6)).abs() <= 1e-10);
}

#[test]
fn alignment_recovers_exact_copies() {
    // Zero corruption, restarts >= 3: NMI >= 0.99 across seeds.
    let mut scores = Vec::new();
    for seed in 0..10u64 {
        let spec = FamilySpec::new(
            Family::Block {
                communities: 4,
                p_in: 0.9,
                p_out: 0.02,
            },
            40,
            1000 + seed,
        );
        let (g, labels) = synthgen::generate_with_labels(&spec).unwrap();
        let planted = CommunityLabels::new(labels.unwrap());
        let (h, perm) = corrupt(&g, 0, 2000 + seed).unwrap();
        let mut truth = vec![0usize; h.n()];
        for (old, &new) in perm.iter().enumerate() {
            truth[new] = planted.assignment()[old];
        }
        let cfg = OptimConfig {
            n_iter: 1000,
            restarts: 3,
            ..OptimConfig::distance(seed)
        };
        let score =
            align_and_score(&g, &planted, &h, &CommunityLabels::new(truth), &cfg).unwrap();
        scores.push(score);
    }
    let mean = scores.iter().sum::<f64>() / scores.len() as f64;
    assert!(mean >= 0.99, "mean NMI {} over 10 seeds: {:?}", mean, scores);
}

#[test]
fn barbell_sketch_has_two_dense_clusters() {
    // 50-node barbell to 15 nodes: the thresholded summary splits into two
    // dense groups (Fiedler sign pattern) joined by a sparse cut.
    let g = synthgen::generate(&FamilySpec::new(Family::Barbell, 50, 4)).unwrap();
    let cfg = OptimConfig::sketch(17);
    let result = optimize_sketch(&g, 15, &cfg).unwrap();
    let summary = summarize(&result, None, 2).unwrap();
    assert!(!summary.is_edgeless(), "summary lost all edges");

    let fiedler = result.laplacian.fiedler_vector().unwrap();
    let side: Vec<bool> = fiedler.iter().map(|&v| v >= 0.0).collect();
    let group_a: Vec<usize> = (0..15).filter(|&i| side[i]).collect();
    let group_b: Vec<usize> = (0..15).filter(|&i| !side[i]).collect();
    assert!(
        group_a.len() >= 3 && group_b.len() >= 3,
        "degenerate split {} / {}",
        group_a.len(),
        group_b.len()
    );

    // Compare within-group vs cross-group weight density in the sketch.
    let ly = result.laplacian.as_matrix();
    let mut within = 0.0;
    let mut within_pairs = 0usize;
    let mut across = 0.0;
    let mut across_pairs = 0usize;
    for i in 0..15 {
        for j in (i + 1)..15 {
            let w = ly[(i, j)].abs();
            if side[i] == side[j] {
                within += w;
                within_pairs += 1;
            } else {
                across += w;
                across_pairs += 1;
            }
        }
    }
    let within_density = within / within_pairs as f64;
    let across_density = across / across_pairs as f64;
    assert!(
        within_density > 2.0 * across_density,
        "no barbell structure: within {} vs across {}",
        within_density,
        across_density
    );
}

#[test]
fn low_dimensional_canonical_sketch_vectors() {
    // Sketch to 3 nodes, canonical (sorted) vectorization: 6 entries sorted
    // ascending, deterministic per (graph, seed).
    let g = synthgen::generate(&FamilySpec::new(Family::Caveman { cliques: 2 }, 10, 6)).unwrap();
    let cfg = OptimConfig {
        n_iter: 200,
        ..OptimConfig::sketch(12)
    };
    let v = retrieval::vectorize(&g, VectorMethod::CoptSketchCanonical, 3, &cfg).unwrap();
    assert_eq!(v.dim, 6);
    for w in v.values.windows(2) {
        assert!(w[0] <= w[1]);
    }
    let v2 = retrieval::vectorize(&g, VectorMethod::CoptSketchCanonical, 3, &cfg).unwrap();
    assert_eq!(v, v2);
}

#[test]
fn gradient_first_order_optimality_at_the_global_vertex() {
    // At the global minimum (L_X = L_Y, P = N I) the plan sits at a vertex
    // of the transport polytope, so the right stationarity statement is on
    // the tangent cone: no feasible edge direction (toward another vertex)
    // is a descent direction.
    let mut rng = ChaCha8Rng::seed_from_u64(46);
    let g = common::random_connected_graph(6, 0.5, &mut rng);
    let k = pseudoinverse(&laplacian(&g).unwrap()).unwrap();
    let n = g.n();
    let plan = TransportPlan::scaled_identity(n);
    let grad = copt_gradient_plan(&k, &k, &plan).unwrap();

    for a in 0..n {
        for b in (a + 1)..n {
            // Direction toward the transposition vertex (a b).
            let mut dir = DMatrix::zeros(n, n);
            dir[(a, a)] = -(n as f64);
            dir[(b, b)] = -(n as f64);
            dir[(a, b)] = n as f64;
            dir[(b, a)] = n as f64;
            let slope: f64 = grad
                .grad_plan
                .iter()
                .zip(dir.iter())
                .map(|(g, d)| g * d)
                .sum();
            assert!(
                slope >= -1e-5,
                "descent direction toward transposition ({}, {}): slope {}",
                a,
                b,
                slope
            );
        }
    }
}

#[test]
fn paper_scale_vector_dimensions() {
    // Sketch to 15 nodes: upper triangle including the diagonal is 120-dim.
    let g = synthgen::generate(&FamilySpec::new(Family::Wheel, 20, 0)).unwrap();
    let quick = OptimConfig {
        n_iter: 5,
        ..OptimConfig::sketch(1)
    };
    let v = retrieval::vectorize(&g, VectorMethod::CoptSketch, 15, &quick).unwrap();
    assert_eq!(v.dim, 120);

    // Spectral projection of a 50-vertex graph onto 3 eigenvectors: 150-dim.
    let big = synthgen::generate(&FamilySpec::new(Family::Barbell, 50, 0)).unwrap();
    let s = retrieval::vectorize(&big, VectorMethod::Spectral, 3, &quick).unwrap();
    assert_eq!(s.dim, 150);
}

#[test]
fn all_ones_plan_objective_matches_oracle_on_paths() {
    // path-2 vs path-3 with the all-ones plan (row sums 3, column sums 2).
    let p2 = Graph::new(2, vec![(0, 1)]).unwrap();
    let p3 = Graph::new(3, vec![(0, 1), (1, 2)]).unwrap();
    let kx = pseudoinverse(&laplacian(&p2).unwrap()).unwrap();
    let ky = pseudoinverse(&laplacian(&p3).unwrap()).unwrap();
    let plan = TransportPlan::uniform(2, 3);
    let formula = copt::copt_objective(&kx, &ky, &plan).unwrap();
    let oracle =
        common::gaussian_transport_oracle(kx.as_matrix(), ky.as_matrix(), plan.as_matrix());
    assert!(
        (formula - oracle).abs() <= 1e-8,
        "{} vs {}",
        formula,
        oracle
    );
}

#[test]
fn sketch_loss_is_nearly_monotone_outside_hike_windows() {
    let g = synthgen::generate(&FamilySpec::new(Family::Barbell, 30, 2)).unwrap();
    let cfg = OptimConfig {
        n_iter: 400,
        ..OptimConfig::sketch(6)
    };
    let r = optimize_sketch(&g, 8, &cfg).unwrap();
    let in_hike_window =
        |t: usize| r.hike_iterations.iter().any(|&h| t >= h && t < h + 20);
    let scale = r.loss_history[0].abs().max(1.0);
    let mut rises = 0usize;
    let mut counted = 0usize;
    for t in 1..r.loss_history.len() {
        if in_hike_window(t) {
            continue;
        }
        counted += 1;
        if r.loss_history[t] > r.loss_history[t - 1] + 0.02 * scale {
            rises += 1;
        }
    }
    // Adam dither wiggles the tail; substantial rises outside hike windows
    // must stay rare.
    assert!(
        (rises as f64) <= 0.05 * counted as f64,
        "{} of {} non-hike iterations rose by more than 2% of the initial loss",
        rises,
        counted
    );
}

#[test]
fn rounding_residual_reflects_plan_sharpness() {
    // A converged alignment plan rounds to a permutation with small
    // residual; blending it toward uniform raises the residual.
    let g = synthgen::generate(&FamilySpec::new(Family::Wheel, 9, 2)).unwrap();
    let (h, _) = corrupt(&g, 0, 3).unwrap();
    let cfg = OptimConfig {
        n_iter: 400,
        restarts: 3,
        ..OptimConfig::distance(8)
    };
    let r = optimize_distance(&g, &h, &cfg).unwrap();
    let sharp = round_to_permutation(&r.plan).unwrap();
    let blended = TransportPlan::from_matrix(
        0.5 * r.plan.as_matrix() + 0.5 * DMatrix::from_element(9, 9, 1.0),
    )
    .unwrap();
    let soft = round_to_permutation(&blended).unwrap();
    assert!(sharp.residual < soft.residual);
}
