//! C ABI for the graph optimal-transport toolkit: opaque handles, status
//! codes, and a thread-local last-error message. The matching header lives
//! in `include/copt.h` and is maintained by hand (keep the two in sync).
//!
//! Conventions:
//! - constructors return an owned pointer or null (check
//!   [`copt_last_error_message`] on null);
//! - operations on existing handles return a `CoptStatus` code and write
//!   results through out-pointers;
//! - every handle has exactly one `_free` function; passing null to a
//!   `_free` is a no-op;
//! - matrices are written row-major into caller-allocated buffers.
//!
//! Safety requirements are uniform across the surface (valid pointers from
//! the constructors, buffers of the documented sizes) and spelled out in the
//! header, so per-function `# Safety` sections are not repeated here.
#![allow(clippy::missing_safety_doc)]

use copt::{optimize_distance, optimize_sketch, Error, Graph, OptimConfig, SketchResult};
use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status codes mirrored in the header.
pub const COPT_OK: c_int = 0;
pub const COPT_ERR_ARGUMENT: c_int = 1;
pub const COPT_ERR_PARSE: c_int = 2;
pub const COPT_ERR_VALIDATION: c_int = 3;
pub const COPT_ERR_NUMERICAL: c_int = 4;
pub const COPT_ERR_PANIC: c_int = 5;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(message: &str) {
    let sanitized: String = message.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> c_int {
    match err.exit_code() {
        2 => COPT_ERR_PARSE,
        3 => COPT_ERR_VALIDATION,
        _ => COPT_ERR_NUMERICAL,
    }
}

fn fail(err: &Error) -> c_int {
    set_error(&err.to_string());
    status_of(err)
}

fn guard<T>(label: &str, body: impl FnOnce() -> T) -> Option<T> {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(v) => Some(v),
        Err(_) => {
            set_error(&format!("internal panic in {}", label));
            None
        }
    }
}

/// Opaque graph handle.
pub struct CoptGraph(Graph);

/// Opaque sketch-result handle.
pub struct CoptSketch(SketchResult);

/// Optimizer settings exposed over the ABI. Zero/negative fields are
/// replaced by the mode defaults when the config is built through
/// [`copt_config_distance`] / [`copt_config_sketch`].
#[repr(C)]
#[derive(Clone, Copy)]
pub struct CoptConfig {
    pub seed: u64,
    pub n_iter: usize,
    pub restarts: usize,
    pub lr0: f64,
    pub sinkhorn_iters: usize,
    /// Nonzero enables plateau-triggered learning-rate hikes.
    pub hikes_enabled: u8,
}

impl CoptConfig {
    fn to_optim(self, base: OptimConfig) -> OptimConfig {
        OptimConfig {
            seed: self.seed,
            n_iter: if self.n_iter == 0 { base.n_iter } else { self.n_iter },
            restarts: if self.restarts == 0 { base.restarts } else { self.restarts },
            lr0: if self.lr0 > 0.0 { self.lr0 } else { base.lr0 },
            sinkhorn_iters: if self.sinkhorn_iters == 0 {
                base.sinkhorn_iters
            } else {
                self.sinkhorn_iters
            },
            hikes_enabled: self.hikes_enabled != 0,
            ..base
        }
    }
}

fn config_from(cfg: &OptimConfig) -> CoptConfig {
    CoptConfig {
        seed: cfg.seed,
        n_iter: cfg.n_iter,
        restarts: cfg.restarts,
        lr0: cfg.lr0,
        sinkhorn_iters: cfg.sinkhorn_iters,
        hikes_enabled: u8::from(cfg.hikes_enabled),
    }
}

/// Default distance-mode configuration (300 iterations).
#[no_mangle]
pub extern "C" fn copt_config_distance(seed: u64) -> CoptConfig {
    config_from(&OptimConfig::distance(seed))
}

/// Default sketch-mode configuration (1000 iterations).
#[no_mangle]
pub extern "C" fn copt_config_sketch(seed: u64) -> CoptConfig {
    config_from(&OptimConfig::sketch(seed))
}

/// Copies the last error message (NUL-terminated) into `buf` and returns the
/// full length in bytes including the terminator. A null or too-small buffer
/// copies nothing.
#[no_mangle]
pub unsafe extern "C" fn copt_last_error_message(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let message = slot.borrow();
        let bytes = message.as_bytes_with_nul();
        if !buf.is_null() && cap >= bytes.len() {
            std::ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, bytes.len());
        }
        bytes.len()
    })
}

/// Parses the edge-list text format (`n <count>` header, `u v [w]` lines).
/// Returns null on failure.
#[no_mangle]
pub unsafe extern "C" fn copt_graph_parse(text: *const c_char) -> *mut CoptGraph {
    if text.is_null() {
        set_error("null text");
        return std::ptr::null_mut();
    }
    let Ok(text) = CStr::from_ptr(text).to_str() else {
        set_error("text is not valid UTF-8");
        return std::ptr::null_mut();
    };
    let out = guard("copt_graph_parse", || match Graph::parse_edge_list(text) {
        Ok(g) => Box::into_raw(Box::new(CoptGraph(g))),
        Err(e) => {
            set_error(&e.to_string());
            std::ptr::null_mut()
        }
    });
    out.unwrap_or(std::ptr::null_mut())
}

/// Reads an edge-list file. Returns null on failure.
#[no_mangle]
pub unsafe extern "C" fn copt_graph_read(path: *const c_char) -> *mut CoptGraph {
    if path.is_null() {
        set_error("null path");
        return std::ptr::null_mut();
    }
    let Ok(path) = CStr::from_ptr(path).to_str() else {
        set_error("path is not valid UTF-8");
        return std::ptr::null_mut();
    };
    let out = guard("copt_graph_read", || match copt::io::read_graph(path) {
        Ok(g) => Box::into_raw(Box::new(CoptGraph(g))),
        Err(e) => {
            set_error(&e.to_string());
            std::ptr::null_mut()
        }
    });
    out.unwrap_or(std::ptr::null_mut())
}

/// Builds a graph from `edge_count` endpoint pairs (u, v) and optional
/// per-edge weights (null means weight 1). Returns null on failure.
#[no_mangle]
pub unsafe extern "C" fn copt_graph_from_edges(
    vertex_count: usize,
    edge_count: usize,
    endpoints: *const u32,
    weights: *const f64,
) -> *mut CoptGraph {
    if endpoints.is_null() && edge_count > 0 {
        set_error("null endpoints");
        return std::ptr::null_mut();
    }
    let pairs = std::slice::from_raw_parts(endpoints, edge_count * 2);
    let w = if weights.is_null() {
        None
    } else {
        Some(std::slice::from_raw_parts(weights, edge_count))
    };
    let edges: Vec<(usize, usize, f64)> = (0..edge_count)
        .map(|e| {
            (
                pairs[2 * e] as usize,
                pairs[2 * e + 1] as usize,
                w.map_or(1.0, |w| w[e]),
            )
        })
        .collect();
    let out = guard("copt_graph_from_edges", || {
        match Graph::new_weighted(vertex_count, edges) {
            Ok(g) => Box::into_raw(Box::new(CoptGraph(g))),
            Err(e) => {
                set_error(&e.to_string());
                std::ptr::null_mut()
            }
        }
    });
    out.unwrap_or(std::ptr::null_mut())
}

#[no_mangle]
pub unsafe extern "C" fn copt_graph_vertex_count(g: *const CoptGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.n())
}

#[no_mangle]
pub unsafe extern "C" fn copt_graph_edge_count(g: *const CoptGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.edge_count())
}

/// Validates the graph invariants (simple, positive weights, connected).
#[no_mangle]
pub unsafe extern "C" fn copt_graph_validate(g: *const CoptGraph) -> c_int {
    let Some(g) = g.as_ref() else {
        set_error("null graph");
        return COPT_ERR_ARGUMENT;
    };
    match g.0.validate() {
        Ok(()) => COPT_OK,
        Err(e) => fail(&e),
    }
}

#[no_mangle]
pub unsafe extern "C" fn copt_graph_free(g: *mut CoptGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Coordinated-transport distance between two graphs. Writes the distance
/// through `out_distance`; when `out_plan` is non-null it must hold
/// `vertex_count(a) * vertex_count(b)` doubles and receives the converged
/// transport plan row-major.
#[no_mangle]
pub unsafe extern "C" fn copt_distance(
    a: *const CoptGraph,
    b: *const CoptGraph,
    config: *const CoptConfig,
    out_distance: *mut f64,
    out_plan: *mut f64,
) -> c_int {
    let (Some(a), Some(b)) = (a.as_ref(), b.as_ref()) else {
        set_error("null graph");
        return COPT_ERR_ARGUMENT;
    };
    if out_distance.is_null() {
        set_error("null out_distance");
        return COPT_ERR_ARGUMENT;
    }
    let cfg = match config.as_ref() {
        Some(c) => c.to_optim(OptimConfig::distance(0)),
        None => OptimConfig::distance(0),
    };
    let result = guard("copt_distance", || optimize_distance(&a.0, &b.0, &cfg));
    match result {
        Some(Ok(r)) => {
            *out_distance = r.distance;
            if !out_plan.is_null() {
                let p = r.plan.as_matrix();
                for i in 0..p.nrows() {
                    for j in 0..p.ncols() {
                        *out_plan.add(i * p.ncols() + j) = p[(i, j)];
                    }
                }
            }
            COPT_OK
        }
        Some(Err(e)) => fail(&e),
        None => COPT_ERR_PANIC,
    }
}

/// Sketches a graph to `size` vertices. Returns null on failure.
#[no_mangle]
pub unsafe extern "C" fn copt_sketch(
    g: *const CoptGraph,
    size: usize,
    config: *const CoptConfig,
) -> *mut CoptSketch {
    let Some(g) = g.as_ref() else {
        set_error("null graph");
        return std::ptr::null_mut();
    };
    let cfg = match config.as_ref() {
        Some(c) => c.to_optim(OptimConfig::sketch(0)),
        None => OptimConfig::sketch(0),
    };
    let out = guard("copt_sketch", || match optimize_sketch(&g.0, size, &cfg) {
        Ok(r) => Box::into_raw(Box::new(CoptSketch(r))),
        Err(e) => {
            set_error(&e.to_string());
            std::ptr::null_mut()
        }
    });
    out.unwrap_or(std::ptr::null_mut())
}

#[no_mangle]
pub unsafe extern "C" fn copt_sketch_size(s: *const CoptSketch) -> usize {
    s.as_ref().map_or(0, |s| s.0.laplacian.dim())
}

#[no_mangle]
pub unsafe extern "C" fn copt_sketch_distance(s: *const CoptSketch) -> f64 {
    s.as_ref().map_or(f64::NAN, |s| s.0.distance)
}

/// Nonzero when the converged sketch Laplacian is effectively disconnected.
#[no_mangle]
pub unsafe extern "C" fn copt_sketch_is_singular(s: *const CoptSketch) -> c_int {
    s.as_ref().map_or(0, |s| c_int::from(s.0.singular))
}

/// Writes the m x m sketched Laplacian row-major into `out` (m*m doubles).
#[no_mangle]
pub unsafe extern "C" fn copt_sketch_laplacian(s: *const CoptSketch, out: *mut f64) -> c_int {
    let Some(s) = s.as_ref() else {
        set_error("null sketch");
        return COPT_ERR_ARGUMENT;
    };
    if out.is_null() {
        set_error("null out buffer");
        return COPT_ERR_ARGUMENT;
    }
    let m = s.0.laplacian.dim();
    let mat = s.0.laplacian.as_matrix();
    for i in 0..m {
        for j in 0..m {
            *out.add(i * m + j) = mat[(i, j)];
        }
    }
    COPT_OK
}

#[no_mangle]
pub unsafe extern "C" fn copt_sketch_plan_rows(s: *const CoptSketch) -> usize {
    s.as_ref().map_or(0, |s| s.0.plan.rows())
}

/// Writes the N x m transport plan row-major into `out` (N*m doubles).
#[no_mangle]
pub unsafe extern "C" fn copt_sketch_plan(s: *const CoptSketch, out: *mut f64) -> c_int {
    let Some(s) = s.as_ref() else {
        set_error("null sketch");
        return COPT_ERR_ARGUMENT;
    };
    if out.is_null() {
        set_error("null out buffer");
        return COPT_ERR_ARGUMENT;
    }
    let p = s.0.plan.as_matrix();
    for i in 0..p.nrows() {
        for j in 0..p.ncols() {
            *out.add(i * p.ncols() + j) = p[(i, j)];
        }
    }
    COPT_OK
}

#[no_mangle]
pub unsafe extern "C" fn copt_sketch_loss_len(s: *const CoptSketch) -> usize {
    s.as_ref().map_or(0, |s| s.0.loss_history.len())
}

/// Writes the per-iteration loss history into `out` (`copt_sketch_loss_len`
/// doubles).
#[no_mangle]
pub unsafe extern "C" fn copt_sketch_loss(s: *const CoptSketch, out: *mut f64) -> c_int {
    let Some(s) = s.as_ref() else {
        set_error("null sketch");
        return COPT_ERR_ARGUMENT;
    };
    if out.is_null() {
        set_error("null out buffer");
        return COPT_ERR_ARGUMENT;
    }
    for (i, v) in s.0.loss_history.iter().enumerate() {
        *out.add(i) = *v;
    }
    COPT_OK
}

#[no_mangle]
pub unsafe extern "C" fn copt_sketch_free(s: *mut CoptSketch) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}
