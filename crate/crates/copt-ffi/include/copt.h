/* C interface for the copt graph optimal-transport toolkit.
 *
 * Maintained by hand alongside crates/copt-ffi/src/lib.rs; keep in sync.
 *
 * Conventions:
 *   - constructors return an owned pointer, or NULL on failure (read
 *     copt_last_error_message for the reason);
 *   - functions returning int use the CoptStatus codes below;
 *   - matrices are written row-major into caller-allocated buffers;
 *   - every handle is released with its matching *_free (NULL is a no-op).
 */

#ifndef COPT_H
#define COPT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum CoptStatus {
  COPT_OK = 0,
  COPT_ERR_ARGUMENT = 1,   /* null pointer / bad argument */
  COPT_ERR_PARSE = 2,      /* I/O or parse failure */
  COPT_ERR_VALIDATION = 3, /* graph or parameter validation failure */
  COPT_ERR_NUMERICAL = 4,  /* numerical failure */
  COPT_ERR_PANIC = 5       /* internal error */
};

/* Opaque handles. */
typedef struct CoptGraph CoptGraph;
typedef struct CoptSketch CoptSketch;

/* Optimizer settings. Zero-valued fields fall back to the mode defaults
 * when the struct came from copt_config_distance / copt_config_sketch. */
typedef struct CoptConfig {
  uint64_t seed;
  size_t n_iter;
  size_t restarts;
  double lr0;
  size_t sinkhorn_iters;
  uint8_t hikes_enabled;
} CoptConfig;

/* Default configurations: 300 iterations for distance, 1000 for sketch,
 * learning rate 0.4 decayed 0.7x per 100 iterations with plateau hikes. */
CoptConfig copt_config_distance(uint64_t seed);
CoptConfig copt_config_sketch(uint64_t seed);

/* Copies the last error message (NUL-terminated) into buf; returns the
 * required length in bytes including the terminator. */
size_t copt_last_error_message(char *buf, size_t cap);

/* Graph construction. Edge-list text format: first line "n <count>", then
 * one edge per line "u v [w]"; '#' starts a comment. */
CoptGraph *copt_graph_parse(const char *text);
CoptGraph *copt_graph_read(const char *path);
/* endpoints holds edge_count (u, v) pairs; weights may be NULL (weight 1). */
CoptGraph *copt_graph_from_edges(size_t vertex_count, size_t edge_count,
                                 const uint32_t *endpoints,
                                 const double *weights);
size_t copt_graph_vertex_count(const CoptGraph *g);
size_t copt_graph_edge_count(const CoptGraph *g);
int copt_graph_validate(const CoptGraph *g);
void copt_graph_free(CoptGraph *g);

/* Coordinated-transport distance between two graphs. out_plan may be NULL;
 * otherwise it must hold vertex_count(a) * vertex_count(b) doubles. */
int copt_distance(const CoptGraph *a, const CoptGraph *b,
                  const CoptConfig *config, double *out_distance,
                  double *out_plan);

/* Sketching: reduce a graph to a weighted Laplacian on `size` vertices. */
CoptSketch *copt_sketch(const CoptGraph *g, size_t size,
                        const CoptConfig *config);
size_t copt_sketch_size(const CoptSketch *s);
double copt_sketch_distance(const CoptSketch *s);
int copt_sketch_is_singular(const CoptSketch *s);
/* out must hold size*size doubles (row-major Laplacian). */
int copt_sketch_laplacian(const CoptSketch *s, double *out);
size_t copt_sketch_plan_rows(const CoptSketch *s);
/* out must hold plan_rows * size doubles (row-major transport plan). */
int copt_sketch_plan(const CoptSketch *s, double *out);
size_t copt_sketch_loss_len(const CoptSketch *s);
/* out must hold copt_sketch_loss_len doubles. */
int copt_sketch_loss(const CoptSketch *s, double *out);
void copt_sketch_free(CoptSketch *s);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* COPT_H */
