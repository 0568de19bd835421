/* C interface to the polycontain library.
 *
 * Every fallible call returns a pc_status. On failure the message is kept in
 * thread-local storage and read with pc_last_error(). Strings handed out by
 * the library are released with pc_string_free(). Matrices are row-major.
 */
#ifndef POLYCONTAIN_H
#define POLYCONTAIN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(POLYCONTAIN_BUILD)
#define PC_API __declspec(dllexport)
#else
#define PC_API __declspec(dllimport)
#endif
#else
#define PC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pc_status {
  PC_OK = 0,
  PC_INVALID_INPUT = 1,
  PC_DIMENSION_MISMATCH = 2,
  PC_UNSUPPORTED_CONVERSION = 3,
  PC_SOLVER_FAILURE = 4,
  PC_RESOURCE_LIMIT = 5,
  PC_INITIALIZATION_FAILURE = 6,
  PC_INVALID_CENTER = 7,
  PC_PARSE_ERROR = 8,
  PC_INTERNAL_ERROR = 100
} pc_status;

typedef enum pc_verdict {
  PC_CONTAINED_CERTIFIED = 0,
  PC_NOT_CERTIFIED = 1,
  PC_REFUTED = 2
} pc_verdict;

/* How a list of circumbody operands is combined. */
typedef enum pc_combine {
  PC_COMBINE_SINGLE = 0,
  PC_COMBINE_SUM = 1,
  PC_COMBINE_HULL = 2,
  PC_COMBINE_UNION = 3
} pc_combine;

typedef enum pc_reduce_mode { PC_REDUCE_OUTER = 0, PC_REDUCE_INNER = 1 } pc_reduce_mode;

typedef struct pc_polytope pc_polytope;
/* Result of a reduction or projection run: final set, trace, frames. */
typedef struct pc_approximation pc_approximation;

typedef struct pc_alternation_config {
  double max_entry_step;
  long max_iters;
  double stall_tolerance;
  long stall_window;
  uint64_t seed;
} pc_alternation_config;

typedef struct pc_loss_config {
  size_t n_min;
  size_t n_max;
  size_t cols_max;
  long trials;
  uint64_t seed;
  int random_centers;
} pc_loss_config;

PC_API const char* pc_version(void);
PC_API const char* pc_status_string(pc_status status);
PC_API const char* pc_last_error(void);
PC_API void pc_string_free(char* s);
PC_API uint64_t pc_default_seed(void);

/* Feasibility tolerance of the built-in LP solver; must be in (0, 1e-2]. */
PC_API pc_status pc_set_tolerance(double tol);

PC_API pc_status pc_polytope_from_json(const char* text, pc_polytope** out);
PC_API pc_status pc_polytope_read_file(const char* path, pc_polytope** out);
/* { x : H x <= h } with H of size rows x dim. */
PC_API pc_status pc_polytope_from_h(const double* H, const double* h, size_t rows, size_t dim,
                                    pc_polytope** out);
/* center + generator * [-1, 1]^cols with generator of size dim x cols. */
PC_API pc_status pc_polytope_from_zonotope(const double* center, const double* generator,
                                           size_t dim, size_t cols, pc_polytope** out);
PC_API void pc_polytope_free(pc_polytope* p);
PC_API size_t pc_polytope_dimension(const pc_polytope* p);
PC_API pc_status pc_polytope_to_json(const pc_polytope* p, char** out);

/* inbody: summands of the inner set (one entry for a plain set).
 * method: NULL or "auto" selects the encoding automatically.
 * report receives the verdict and certificate as JSON; may be NULL. */
PC_API pc_status pc_contain(const pc_polytope* const* inbody, size_t n_inbody,
                            const pc_polytope* const* circumbody, size_t n_circumbody,
                            pc_combine combine, const char* method, pc_verdict* verdict,
                            char** report);
/* Largest scaling of the inbody about its center that stays certified. */
PC_API pc_status pc_max_scaling(const pc_polytope* const* inbody, size_t n_inbody,
                                const pc_polytope* const* circumbody, size_t n_circumbody,
                                pc_combine combine, const char* method, double* lambda,
                                char** report);
/* Infinity-norm Hausdorff upper bounds. zonotope != 0 uses the zonotope LP;
 * samples > 0 adds a sampled lower bound. */
PC_API pc_status pc_hausdorff(const pc_polytope* a, const pc_polytope* b, int zonotope,
                              size_t samples, uint64_t seed, char** report);

PC_API pc_alternation_config pc_alternation_config_default(void);
PC_API pc_status pc_reduce(const pc_polytope* zonotope, size_t target_cols, pc_reduce_mode mode,
                           const pc_alternation_config* cfg, pc_approximation** out);
/* Inner approximation with `rows` hyperplanes of the projection of an
 * H-polytope onto its first n coordinates. center may be NULL (origin). */
PC_API pc_status pc_project(const pc_polytope* lifted, size_t n, size_t rows,
                            const double* center, const pc_alternation_config* cfg,
                            pc_approximation** out);
PC_API void pc_approximation_free(pc_approximation* a);
PC_API double pc_approximation_bound(const pc_approximation* a);
PC_API pc_status pc_approximation_result(const pc_approximation* a, pc_polytope** out);
/* JSON with the final set, convergence flags and every accepted iterate. */
PC_API pc_status pc_approximation_report(const pc_approximation* a, char** out);
/* iteration,bound */
PC_API pc_status pc_approximation_trace_csv(const pc_approximation* a, char** out);
PC_API size_t pc_approximation_frame_count(const pc_approximation* a);
/* The input set with accepted iterate k drawn on top; 2-D only. */
PC_API pc_status pc_approximation_frame_svg(const pc_approximation* a, size_t k, char** out);

/* Feasible set of the 2-state MPC example over (x0, u0..u_{N-1}). */
PC_API pc_status pc_mpc_example(size_t horizon, pc_polytope** out);

PC_API pc_loss_config pc_loss_config_default(void);
PC_API pc_status pc_loss_experiment(const pc_loss_config* cfg, char** csv, char** summary);

PC_API pc_status pc_render_svg(const pc_polytope* const* sets, size_t count, char** out);

#ifdef __cplusplus
}
#endif

#endif
