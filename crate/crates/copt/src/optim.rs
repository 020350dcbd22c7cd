//! Adam-based minimization for the two problems: distance (optimize the plan
//! only) and sketch (optimize the plan and the Laplacian parameters jointly),
//! with a multiplicative learning-rate decay plus plateau-triggered hikes.
//!
//! Per iteration the loop applies abs to the plan, runs a fixed number of
//! Sinkhorn sweeps, rebuilds the sketch Laplacian from its free parameters
//! (sketch mode), evaluates the objective and its gradients, then takes one
//! Adam step. The best (lowest-loss) iterate across the run and across
//! restarts is returned, since the non-convex loss can rise after a hike.

use crate::assign;
use crate::error::{Error, Result};
use crate::graph::{self, fnv1a_start, fnv1a_u64, Graph, LaplacianMatrix};
use crate::objective::{
    self, copt_distance_value, laplacian_from_params, ObjectiveKernel, SketchParams, TransportPlan,
};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

/// Optimizer configuration. Defaults: learning rate 0.4, decayed by 0.7
/// every 100 iterations; on a loss plateau
/// (|change| < 0.002 at 10 iterations since the last hike) the rate is
/// hiked five-fold, capped at 4.0, with no hikes in the last 200 iterations.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimConfig {
    pub n_iter: usize,
    pub lr0: f64,
    pub decay_factor: f64,
    pub decay_every: usize,
    pub hike_factor: f64,
    pub lr_cap: f64,
    pub plateau_delta: f64,
    pub plateau_count: usize,
    /// No hikes fire within this many iterations of the end of the run.
    pub hike_cutoff: usize,
    /// Disable to run the pure decay schedule (used by the hike-benefit
    /// experiment).
    pub hikes_enabled: bool,
    pub sinkhorn_iters: usize,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_eps: f64,
    pub seed: u64,
    pub restarts: usize,
}

impl OptimConfig {
    fn base(seed: u64) -> Self {
        OptimConfig {
            n_iter: 300,
            lr0: 0.4,
            decay_factor: 0.7,
            decay_every: 100,
            hike_factor: 5.0,
            lr_cap: 4.0,
            plateau_delta: 0.002,
            plateau_count: 10,
            hike_cutoff: 200,
            hikes_enabled: true,
            sinkhorn_iters: 5,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_eps: 1e-8,
            seed,
            restarts: 1,
        }
    }

    /// Defaults for distance computation (300 iterations).
    pub fn distance(seed: u64) -> Self {
        Self::base(seed)
    }

    /// Defaults for sketching (1000 iterations).
    pub fn sketch(seed: u64) -> Self {
        OptimConfig {
            n_iter: 1000,
            ..Self::base(seed)
        }
    }

    /// Stable hash over every field, used to key caches and sketch files.
    pub fn content_hash(&self) -> u64 {
        let mut h = fnv1a_start();
        for v in [
            self.n_iter as u64,
            self.lr0.to_bits(),
            self.decay_factor.to_bits(),
            self.decay_every as u64,
            self.hike_factor.to_bits(),
            self.lr_cap.to_bits(),
            self.plateau_delta.to_bits(),
            self.plateau_count as u64,
            self.hike_cutoff as u64,
            self.hikes_enabled as u64,
            self.sinkhorn_iters as u64,
            self.adam_beta1.to_bits(),
            self.adam_beta2.to_bits(),
            self.adam_eps.to_bits(),
            self.seed,
            self.restarts as u64,
        ] {
            h = fnv1a_u64(h, v);
        }
        h
    }
}

/// Partial optimizer settings for run-configuration files; unset fields keep
/// the mode's defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OptimOverrides {
    pub n_iter: Option<usize>,
    pub lr0: Option<f64>,
    pub restarts: Option<usize>,
    pub sinkhorn_iters: Option<usize>,
    pub hikes_enabled: Option<bool>,
    /// Loss-change threshold for plateau detection; worth tuning per task.
    pub plateau_delta: Option<f64>,
    pub hike_cutoff: Option<usize>,
    pub seed: Option<u64>,
}

impl OptimOverrides {
    pub fn apply(&self, mut base: OptimConfig) -> OptimConfig {
        if let Some(v) = self.n_iter {
            base.n_iter = v;
        }
        if let Some(v) = self.lr0 {
            base.lr0 = v;
        }
        if let Some(v) = self.restarts {
            base.restarts = v;
        }
        if let Some(v) = self.sinkhorn_iters {
            base.sinkhorn_iters = v;
        }
        if let Some(v) = self.hikes_enabled {
            base.hikes_enabled = v;
        }
        if let Some(v) = self.plateau_delta {
            base.plateau_delta = v;
        }
        if let Some(v) = self.hike_cutoff {
            base.hike_cutoff = v;
        }
        if let Some(v) = self.seed {
            base.seed = v;
        }
        base
    }
}

/// First/second moment estimates for Adam, one slot per parameter.
#[derive(Debug, Clone)]
pub struct AdamState {
    m: Vec<f64>,
    v: Vec<f64>,
    t: u64,
}

impl AdamState {
    pub fn new(len: usize) -> Self {
        AdamState {
            m: vec![0.0; len],
            v: vec![0.0; len],
            t: 0,
        }
    }

    /// One bias-corrected Adam update of `params` against `grads`.
    pub fn step(&mut self, cfg: &OptimConfig, lr: f64, params: &mut [f64], grads: &[f64]) {
        assert_eq!(params.len(), self.m.len());
        assert_eq!(grads.len(), self.m.len());
        self.t += 1;
        let b1 = cfg.adam_beta1;
        let b2 = cfg.adam_beta2;
        let bc1 = 1.0 - b1.powi(self.t as i32);
        let bc2 = 1.0 - b2.powi(self.t as i32);
        for i in 0..params.len() {
            let g = grads[i];
            self.m[i] = b1 * self.m[i] + (1.0 - b1) * g;
            self.v[i] = b2 * self.v[i] + (1.0 - b2) * g * g;
            let m_hat = self.m[i] / bc1;
            let v_hat = self.v[i] / bc2;
            params[i] -= lr * m_hat / (v_hat.sqrt() + cfg.adam_eps);
        }
    }
}

/// Learning-rate state: multiplicative decay every `decay_every` iterations,
/// five-fold hikes (capped) when the loss change stays under `plateau_delta`
/// for `plateau_count` iterations since the last hike.
#[derive(Debug, Clone)]
pub struct LrSchedule {
    lr: f64,
    plateau_hits: usize,
    hikes: Vec<usize>,
    cfg_n_iter: usize,
    decay_factor: f64,
    decay_every: usize,
    hike_factor: f64,
    lr_cap: f64,
    plateau_delta: f64,
    plateau_count: usize,
    hike_cutoff: usize,
    hikes_enabled: bool,
}

impl LrSchedule {
    pub fn new(cfg: &OptimConfig) -> Self {
        LrSchedule {
            lr: cfg.lr0,
            plateau_hits: 0,
            hikes: Vec::new(),
            cfg_n_iter: cfg.n_iter,
            decay_factor: cfg.decay_factor,
            decay_every: cfg.decay_every,
            hike_factor: cfg.hike_factor,
            lr_cap: cfg.lr_cap,
            plateau_delta: cfg.plateau_delta,
            plateau_count: cfg.plateau_count,
            hike_cutoff: cfg.hike_cutoff,
            hikes_enabled: cfg.hikes_enabled,
        }
    }

    /// Learning rate for iteration `iter`, given the losses of iterations
    /// 0..=iter. Must be called once per iteration in order.
    pub fn advance(&mut self, iter: usize, losses: &[f64]) -> (f64, bool) {
        if iter > 0 && self.decay_every > 0 && iter.is_multiple_of(self.decay_every) {
            self.lr *= self.decay_factor;
        }
        let mut hiked = false;
        if self.hikes_enabled && losses.len() >= 2 {
            let l = losses.len();
            if (losses[l - 1] - losses[l - 2]).abs() < self.plateau_delta {
                self.plateau_hits += 1;
            }
            if self.plateau_hits >= self.plateau_count && iter + self.hike_cutoff < self.cfg_n_iter
            {
                self.lr = (self.lr * self.hike_factor).min(self.lr_cap);
                self.plateau_hits = 0;
                self.hikes.push(iter);
                hiked = true;
            }
        }
        (self.lr, hiked)
    }

    pub fn hike_iterations(&self) -> &[usize] {
        &self.hikes
    }
}

/// Outcome of a distance optimization.
#[derive(Debug, Clone)]
pub struct DistanceResult {
    pub distance: f64,
    pub plan: TransportPlan,
    /// Raw per-iteration objective values of the best restart.
    pub loss_history: Vec<f64>,
    pub lr_history: Vec<f64>,
    pub hike_iterations: Vec<usize>,
    /// Worst marginal residual of the live plan across iterations (the few
    /// Sinkhorn sweeps per iteration keep the plan only approximately
    /// feasible; the returned plan is re-normalized to 1e-6).
    pub max_marginal_residual: f64,
}

/// Outcome of a sketch optimization.
#[derive(Debug, Clone)]
pub struct SketchResult {
    /// Laplacian of the sketched graph (best iterate).
    pub laplacian: LaplacianMatrix,
    pub plan: TransportPlan,
    pub loss_history: Vec<f64>,
    pub distance: f64,
    pub hike_iterations: Vec<usize>,
    pub lr_history: Vec<f64>,
    /// True when the converged Laplacian is effectively disconnected
    /// (second-smallest eigenvalue below 1e-8). Reported, not fatal: a
    /// disconnected weighted sketch can still be a useful vector
    /// representation.
    pub singular: bool,
    pub max_marginal_residual: f64,
}

/// Rounding of a square plan to the nearest permutation.
#[derive(Debug, Clone)]
pub struct PermutationRounding {
    /// sigma: row (X vertex) -> column (Y vertex).
    pub permutation: Vec<usize>,
    /// ||P - N Pi||_1 / (N M).
    pub residual: f64,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

pub(crate) fn restart_seed(seed: u64, restart: usize) -> u64 {
    splitmix64(seed ^ (restart as u64).wrapping_mul(0xA24BAED4963EE407))
}

fn uniform_plan_init(rng: &mut ChaCha8Rng, n: usize, m: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, m, |_, _| rng.random_range(1.0..2.0))
}

struct RunOutcome {
    best_loss: f64,
    best_plan: DMatrix<f64>,
    best_values: Option<Vec<f64>>,
    losses: Vec<f64>,
    lrs: Vec<f64>,
    hikes: Vec<usize>,
    max_marginal_residual: f64,
}

/// The shared Algorithm-1 loop. `sketch_m` is Some(m) in sketch mode.
fn run_single(
    kernel: &ObjectiveKernel,
    fixed_ly: Option<(&DMatrix<f64>, f64)>,
    sketch_m: Option<usize>,
    cfg: &OptimConfig,
    seed: u64,
) -> Result<RunOutcome> {
    let n = kernel.n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Algorithm order: the Laplacian parameters are drawn (standard normal)
    // before the plan (Uniform(1,2)).
    let (m, mut params) = match sketch_m {
        Some(m) => {
            let count = m * (m - 1) / 2;
            let values: Vec<f64> = (0..count).map(|_| StandardNormal.sample(&mut rng)).collect();
            (m, Some(SketchParams::new(m, values)?))
        }
        None => (fixed_ly.expect("fixed L_Y in distance mode").0.nrows(), None),
    };
    let mut plan = uniform_plan_init(&mut rng, n, m);

    let mut adam_plan = AdamState::new(n * m);
    let mut adam_values = AdamState::new(params.as_ref().map_or(0, |p| p.values().len()));
    let mut schedule = LrSchedule::new(cfg);

    let mut losses = Vec::with_capacity(cfg.n_iter);
    let mut lrs = Vec::with_capacity(cfg.n_iter);
    let mut best_loss = f64::INFINITY;
    let mut best_plan = plan.clone();
    let mut best_values: Option<Vec<f64>> = params.as_ref().map(|p| p.values().to_vec());
    let mut max_resid = 0.0f64;

    for iter in 0..cfg.n_iter {
        // Forward: abs, Sinkhorn sweeps (taped), objective. The gradient is
        // taken through the whole chain back to the raw plan variable, the
        // way backpropagation sees Algorithm 1's per-iteration computation.
        let mut normalized = plan.map(f64::abs);
        let tape = objective::sinkhorn_forward(&mut normalized, cfg.sinkhorn_iters);
        max_resid = max_resid.max(objective::marginal_residual(&normalized));

        let (eval, grad_values) = match params.as_ref() {
            Some(p) => {
                let ly = laplacian_from_params(p);
                let ly_pinv = graph::pseudoinverse(&ly).map_err(|e| match e {
                    Error::SingularBeyondOnes => Error::Numerical(format!(
                        "sketch Laplacian became singular at iteration {}",
                        iter
                    )),
                    other => other,
                })?;
                let eval = kernel.evaluate(ly_pinv.as_matrix(), ly_pinv.trace(), &normalized);
                let gv = objective::chain_to_params(&eval.wt_h_w, ly_pinv.as_matrix(), n, p);
                (eval, Some(gv))
            }
            None => {
                let (ly_mat, tr_ly) = fixed_ly.unwrap();
                (kernel.evaluate(ly_mat, tr_ly, &normalized), None)
            }
        };
        losses.push(eval.value);
        if eval.value < best_loss {
            best_loss = eval.value;
            best_plan.copy_from(&normalized);
            if let (Some(bv), Some(p)) = (best_values.as_mut(), params.as_ref()) {
                bv.copy_from_slice(p.values());
            }
        }

        let (lr, _hiked) = schedule.advance(iter, &losses);
        lrs.push(lr);

        let mut grad_plan = objective::sinkhorn_backward(&tape, eval.grad_plan);
        for (g, raw) in grad_plan.iter_mut().zip(plan.iter()) {
            *g *= raw.signum();
        }
        adam_plan.step(cfg, lr, plan.as_mut_slice(), grad_plan.as_slice());
        if let (Some(p), Some(gv)) = (params.as_mut(), grad_values.as_ref()) {
            adam_values.step(cfg, lr, p.values_mut(), gv);
        }
    }

    Ok(RunOutcome {
        best_loss,
        best_plan,
        best_values,
        losses,
        lrs,
        hikes: schedule.hike_iterations().to_vec(),
        max_marginal_residual: max_resid,
    })
}

fn tighten_plan(mut plan: DMatrix<f64>) -> TransportPlan {
    plan.iter_mut().for_each(|v| *v = v.abs());
    // Sinkhorn converges slowly on sharply concentrated plans; the sweep cap
    // is generous because each sweep is cheap at these sizes.
    objective::sinkhorn_to_residual(&mut plan, 1e-6, 20_000);
    TransportPlan::from_normalization(plan)
}

/// Distance between two graphs: optimize the plan by Adam over the analytic
/// objective, best iterate across restarts.
///
/// The pair is canonicalized by content hash before optimizing, so
/// `optimize_distance(x, y)` and `optimize_distance(y, x)` run the identical
/// computation and return exactly equal distances (the plan is transposed
/// back into the caller's orientation).
pub fn optimize_distance(x: &Graph, y: &Graph, cfg: &OptimConfig) -> Result<DistanceResult> {
    let swap = x.content_hash() > y.content_hash();
    let (a, b) = if swap { (y, x) } else { (x, y) };

    let la = graph::pseudoinverse(&graph::laplacian(a)?)?;
    let lb = graph::pseudoinverse(&graph::laplacian(b)?)?;
    let kernel = ObjectiveKernel::new(&la);
    let tr_lb = lb.trace();

    let mut best: Option<RunOutcome> = None;
    for r in 0..cfg.restarts.max(1) {
        let outcome = run_single(
            &kernel,
            Some((lb.as_matrix(), tr_lb)),
            None,
            cfg,
            restart_seed(cfg.seed, r),
        )?;
        let better = match &best {
            None => true,
            Some(b) => outcome.best_loss < b.best_loss,
        };
        if better {
            best = Some(outcome);
        }
    }
    let best = best.expect("at least one restart");
    // Tighten in the canonical orientation, then transpose, so the two call
    // orders return exactly transposed plans.
    let tightened = tighten_plan(best.best_plan);
    let plan = if swap {
        TransportPlan::from_matrix_unchecked(tightened.as_matrix().transpose())
    } else {
        tightened
    };
    Ok(DistanceResult {
        distance: copt_distance_value(best.best_loss, x.n(), y.n()),
        plan,
        loss_history: best.losses,
        lr_history: best.lrs,
        hike_iterations: best.hikes,
        max_marginal_residual: best.max_marginal_residual,
    })
}

/// Sketches `x` to a weighted Laplacian on `m` vertices by joint Adam over
/// the plan and the Laplacian parameters.
pub fn optimize_sketch(x: &Graph, m: usize, cfg: &OptimConfig) -> Result<SketchResult> {
    if m < 2 {
        return Err(Error::SketchTooSmall(m));
    }
    let lx = graph::pseudoinverse(&graph::laplacian(x)?)?;
    let kernel = ObjectiveKernel::new(&lx);

    let mut best: Option<RunOutcome> = None;
    for r in 0..cfg.restarts.max(1) {
        let outcome = run_single(&kernel, None, Some(m), cfg, restart_seed(cfg.seed, r))?;
        let better = match &best {
            None => true,
            Some(b) => outcome.best_loss < b.best_loss,
        };
        if better {
            best = Some(outcome);
        }
    }
    let best = best.expect("at least one restart");

    let values = best.best_values.expect("sketch mode carries values");
    let laplacian = laplacian_from_params(&SketchParams::new(m, values)?);
    let singular = laplacian.fiedler_value() < 1e-8;

    Ok(SketchResult {
        distance: copt_distance_value(best.best_loss, x.n(), m),
        laplacian,
        plan: tighten_plan(best.best_plan),
        loss_history: best.losses,
        lr_history: best.lrs,
        hike_iterations: best.hikes,
        singular,
        max_marginal_residual: best.max_marginal_residual,
    })
}

/// Rounds a square plan to the permutation maximizing the captured mass
/// (Hungarian assignment) and reports the L1 rounding residual.
pub fn round_to_permutation(plan: &TransportPlan) -> Result<PermutationRounding> {
    let n = plan.rows();
    let m = plan.cols();
    if n != m {
        return Err(Error::NotSquare { rows: n, cols: m });
    }
    let permutation = assign::max_weight_assignment(plan.as_matrix());
    let scale = n as f64;
    let mut residual = 0.0;
    for (i, &sigma) in permutation.iter().enumerate() {
        for j in 0..m {
            let target = if sigma == j { scale } else { 0.0 };
            residual += (plan.as_matrix()[(i, j)] - target).abs();
        }
    }
    residual /= (n * m) as f64;
    Ok(PermutationRounding {
        permutation,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adam_zero_gradient_keeps_params() {
        let cfg = OptimConfig::distance(0);
        let mut state = AdamState::new(3);
        let mut params = vec![1.0, -2.0, 0.5];
        let before = params.clone();
        state.step(&cfg, 0.4, &mut params, &[0.0, 0.0, 0.0]);
        assert_eq!(params, before);
    }

    #[test]
    fn adam_first_step_is_lr_sized() {
        let cfg = OptimConfig::distance(0);
        let mut state = AdamState::new(1);
        let mut params = vec![3.0];
        state.step(&cfg, 0.4, &mut params, &[1.0]);
        // Bias-corrected first step is lr * g / (|g| + eps) ~ lr * sign(g).
        assert!((params[0] - (3.0 - 0.4)).abs() < 1e-6, "got {}", params[0]);
    }

    #[test]
    fn adam_antisymmetric_gradients() {
        let cfg = OptimConfig::distance(0);
        let mut state = AdamState::new(2);
        let mut params = vec![0.0, 0.0];
        state.step(&cfg, 0.1, &mut params, &[1.0, -1.0]);
        assert!((params[0] + params[1]).abs() < 1e-12);
        assert!(params[0] < 0.0 && params[1] > 0.0);
    }

    #[test]
    fn lr_schedule_initial_and_decay() {
        let cfg = OptimConfig::distance(0);
        let mut sched = LrSchedule::new(&cfg);
        let (lr0, hiked0) = sched.advance(0, &[]);
        assert_eq!(lr0, 0.4);
        assert!(!hiked0);
        // Feed steadily moving losses (no plateaus) through iteration 100.
        let mut losses = vec![1000.0];
        for iter in 1..=100 {
            losses.push(1000.0 - iter as f64);
            let (lr, hiked) = sched.advance(iter, &losses);
            assert!(!hiked);
            if iter == 100 {
                assert!((lr - 0.28).abs() < 1e-12, "lr at 100 = {}", lr);
            }
        }
    }

    #[test]
    fn lr_schedule_hike_sequence() {
        let mut cfg = OptimConfig::distance(0);
        cfg.n_iter = 1000; // leave room before the hike cutoff
        let mut sched = LrSchedule::new(&cfg);
        // Walk to iteration 100 with moving losses so the base decays to 0.28.
        let mut losses = vec![1000.0];
        sched.advance(0, &losses);
        for iter in 1..=100 {
            losses.push(1000.0 - iter as f64);
            sched.advance(iter, &losses);
        }
        // Now plateau: flat losses.
        let mut lr_after_first_hike = 0.0;
        let mut fired = 0;
        for iter in 101..=140 {
            let last = *losses.last().unwrap();
            losses.push(last);
            let (lr, hiked) = sched.advance(iter, &losses);
            if hiked {
                fired += 1;
                if fired == 1 {
                    lr_after_first_hike = lr;
                    assert!((lr - 1.4).abs() < 1e-12, "first hike from 0.28 should reach 1.4, got {}", lr);
                } else if fired == 2 {
                    assert!((lr - 4.0).abs() < 1e-12, "second hike should cap at 4.0, got {}", lr);
                    return;
                }
            }
        }
        assert!(fired >= 2, "expected two hikes, saw {} (first lr {})", fired, lr_after_first_hike);
    }

    #[test]
    fn lr_schedule_respects_cutoff() {
        let cfg = OptimConfig::distance(0); // n_iter 300, cutoff 200
        let mut sched = LrSchedule::new(&cfg);
        let mut losses = vec![1.0];
        sched.advance(0, &losses);
        let mut fired_before_cutoff = 0;
        for iter in 1..300 {
            losses.push(1.0); // always a plateau
            let (_, hiked) = sched.advance(iter, &losses);
            if iter + 200 >= 300 {
                assert!(!hiked, "hike fired at {} past the cutoff", iter);
            } else if hiked {
                fired_before_cutoff += 1;
            }
        }
        assert!(fired_before_cutoff > 0, "no hikes before the cutoff");
    }

    #[test]
    fn round_to_permutation_identity() {
        let plan = TransportPlan::scaled_identity(4);
        let r = round_to_permutation(&plan).unwrap();
        assert_eq!(r.permutation, vec![0, 1, 2, 3]);
        assert_eq!(r.residual, 0.0);
    }

    #[test]
    fn round_to_permutation_reversal() {
        let n = 4;
        let mut mat = DMatrix::zeros(n, n);
        for i in 0..n {
            mat[(i, n - 1 - i)] = n as f64;
        }
        let plan = TransportPlan::from_matrix(mat).unwrap();
        let r = round_to_permutation(&plan).unwrap();
        assert_eq!(r.permutation, vec![3, 2, 1, 0]);
        assert_eq!(r.residual, 0.0);
    }

    #[test]
    fn round_to_permutation_rejects_rectangular() {
        let plan = TransportPlan::uniform(2, 3);
        assert!(matches!(
            round_to_permutation(&plan),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn restart_seeds_are_stable() {
        assert_eq!(restart_seed(7, 0), restart_seed(7, 0));
        assert_ne!(restart_seed(7, 0), restart_seed(7, 1));
        assert_ne!(restart_seed(7, 1), restart_seed(8, 1));
    }
}

