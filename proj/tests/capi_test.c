#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "polycontain.h"

static int failures = 0;

#define CHECK(cond)                                                   \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: check failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

static pc_polytope* zonotope(const double* c, const double* g, size_t dim, size_t cols) {
  pc_polytope* p = NULL;
  CHECK(pc_polytope_from_zonotope(c, g, dim, cols, &p) == PC_OK);
  return p;
}

static void skewed_pair(void) {
  const double cx[] = {0, 1};
  const double gx[] = {1, 0, 0, 1, 1, 0, -1, 0, -1, -3};
  const double cy[] = {1, 0};
  const double gy[] = {1, 0, 1, 1, 1, 2, 0, 1, 1, -1, 3, -2};
  const double gy5[] = {1, 0, 1, 1, 1, 0, 1, 1, -1, 3};
  pc_polytope* x = zonotope(cx, gx, 2, 5);
  pc_polytope* y = zonotope(cy, gy, 2, 6);
  pc_polytope* y5 = zonotope(cy, gy5, 2, 5);
  const pc_polytope* in[] = {x};
  const pc_polytope* out[] = {y};
  const pc_polytope* out5[] = {y5};
  pc_verdict v = PC_REFUTED;
  char* report = NULL;
  CHECK(pc_contain(in, 1, out, 1, PC_COMBINE_SINGLE, "auto", &v, &report) == PC_OK);
  CHECK(v == PC_CONTAINED_CERTIFIED);
  CHECK(report != NULL && strstr(report, "contained_certified") != NULL);
  pc_string_free(report);
  CHECK(pc_contain(in, 1, out5, 1, PC_COMBINE_SINGLE, "thm1", &v, NULL) == PC_OK);
  CHECK(v == PC_NOT_CERTIFIED);

  char* h = NULL;
  CHECK(pc_hausdorff(x, y5, 1, 0, 1, &h) == PC_OK);
  CHECK(h != NULL && strstr(h, "\"d21\":3.0") != NULL);
  pc_string_free(h);

  CHECK(pc_contain(in, 1, out, 1, PC_COMBINE_SINGLE, "nonsense", &v, NULL) == PC_INVALID_INPUT);
  CHECK(strstr(pc_last_error(), "nonsense") != NULL);
  pc_polytope_free(x);
  pc_polytope_free(y);
  pc_polytope_free(y5);
}

static void errors(void) {
  pc_polytope* p = NULL;
  CHECK(pc_polytope_from_json("{\"type\": \"H\",\n \"H\": [[1]],, \"h\": [1]}", &p) ==
        PC_PARSE_ERROR);
  CHECK(p == NULL);
  CHECK(strstr(pc_last_error(), "line 2") != NULL);
  CHECK(pc_polytope_read_file("/nonexistent/file.json", &p) == PC_INVALID_INPUT);

  const double H3[] = {1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1};
  const double h3[] = {1, 1, 1, 1, 1, 1};
  pc_polytope* box3 = NULL;
  CHECK(pc_polytope_from_h(H3, h3, 6, 3, &box3) == PC_OK);
  CHECK(pc_polytope_dimension(box3) == 3);
  const double c[] = {0, 0};
  const double g[] = {1, 0, 0, 1};
  pc_polytope* sq = zonotope(c, g, 2, 2);
  const pc_polytope* in[] = {sq};
  const pc_polytope* out[] = {box3};
  pc_verdict v;
  CHECK(pc_contain(in, 1, out, 1, PC_COMBINE_SINGLE, NULL, &v, NULL) == PC_DIMENSION_MISMATCH);
  const pc_polytope* sets[] = {box3};
  char* svg = NULL;
  CHECK(pc_render_svg(sets, 1, &svg) == PC_DIMENSION_MISMATCH);
  CHECK(pc_set_tolerance(-1) == PC_INVALID_INPUT);
  CHECK(pc_set_tolerance(1e-7) == PC_OK);
  CHECK(strcmp(pc_status_string(PC_PARSE_ERROR), "ok") != 0);
  pc_polytope_free(box3);
  pc_polytope_free(sq);
}

static void round_trip(void) {
  const char* text = "{\"type\":\"zonotope\",\"center\":[0.1,0.2],\"generator\":[[1,0.30000000000000004],[0,1]]}";
  pc_polytope* p = NULL;
  CHECK(pc_polytope_from_json(text, &p) == PC_OK);
  char* back = NULL;
  CHECK(pc_polytope_to_json(p, &back) == PC_OK);
  CHECK(strstr(back, "0.30000000000000004") != NULL);
  pc_polytope* q = NULL;
  CHECK(pc_polytope_from_json(back, &q) == PC_OK);
  char* again = NULL;
  CHECK(pc_polytope_to_json(q, &again) == PC_OK);
  CHECK(strcmp(back, again) == 0);
  pc_string_free(back);
  pc_string_free(again);
  pc_polytope_free(p);
  pc_polytope_free(q);
}

static void reduction(void) {
  const double c[] = {0, 0};
  const double g[] = {1, 0, 1, 0, 0, 1, 0, 1};
  pc_polytope* z = zonotope(c, g, 2, 4);
  pc_alternation_config cfg = pc_alternation_config_default();
  pc_approximation* a = NULL;
  CHECK(pc_reduce(z, 2, PC_REDUCE_OUTER, &cfg, &a) == PC_OK);
  CHECK(fabs(pc_approximation_bound(a)) <= 1e-6);
  const size_t frames = pc_approximation_frame_count(a);
  CHECK(frames >= 2);
  char* svg = NULL;
  CHECK(pc_approximation_frame_svg(a, frames - 1, &svg) == PC_OK);
  CHECK(strstr(svg, "<polygon") != NULL);
  pc_string_free(svg);
  CHECK(pc_approximation_frame_svg(a, frames, &svg) == PC_INVALID_INPUT);
  char* csv = NULL;
  CHECK(pc_approximation_trace_csv(a, &csv) == PC_OK);
  CHECK(strncmp(csv, "iteration,bound\n", 16) == 0);
  pc_string_free(csv);
  pc_polytope* r = NULL;
  CHECK(pc_approximation_result(a, &r) == PC_OK);
  CHECK(pc_polytope_dimension(r) == 2);
  pc_polytope_free(r);
  pc_approximation_free(a);
  CHECK(pc_reduce(z, 2, PC_REDUCE_OUTER, NULL, &a) == PC_OK);
  pc_approximation_free(a);
  pc_polytope_free(z);
}

static void projection(void) {
  pc_polytope* m = NULL;
  CHECK(pc_mpc_example(20, &m) == PC_OK);
  CHECK(pc_polytope_dimension(m) == 22);
  pc_polytope_free(m);

  /* Box in R^3 projected onto the first two coordinates. */
  const double H[] = {1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1, 1, 1, 1};
  const double h[] = {1, 1, 1, 1, 1, 1, 2};
  pc_polytope* lifted = NULL;
  CHECK(pc_polytope_from_h(H, h, 7, 3, &lifted) == PC_OK);
  pc_alternation_config cfg = pc_alternation_config_default();
  cfg.max_iters = 20;
  pc_approximation* a = NULL;
  CHECK(pc_project(lifted, 2, 5, NULL, &cfg, &a) == PC_OK);
  CHECK(pc_approximation_bound(a) >= 0);
  char* report = NULL;
  CHECK(pc_approximation_report(a, &report) == PC_OK);
  CHECK(strstr(report, "\"mode\":\"project\"") != NULL);
  pc_string_free(report);
  char* svg = NULL;
  CHECK(pc_approximation_frame_svg(a, 0, &svg) == PC_OK);
  pc_string_free(svg);
  pc_approximation_free(a);
  const double far[] = {5, 5};
  CHECK(pc_project(lifted, 2, 4, far, &cfg, &a) == PC_INVALID_CENTER);
  pc_polytope_free(lifted);
}

static void loss(void) {
  pc_loss_config cfg = pc_loss_config_default();
  CHECK(cfg.seed == pc_default_seed());
  cfg.trials = 4;
  char* csv = NULL;
  char* summary = NULL;
  CHECK(pc_loss_experiment(&cfg, &csv, &summary) == PC_OK);
  size_t lines = 0;
  for (const char* s = csv; *s; ++s) lines += *s == '\n';
  CHECK(lines == 5);
  CHECK(strstr(summary, "\"trials\": 4") != NULL);
  pc_string_free(csv);
  pc_string_free(summary);
  cfg.n_min = 5;
  cfg.n_max = 3;
  CHECK(pc_loss_experiment(&cfg, NULL, NULL) == PC_INVALID_INPUT);
}

int main(void) {
  skewed_pair();
  errors();
  round_trip();
  reduction();
  projection();
  loss();
  printf("%s (%d failures)\n", failures == 0 ? "passed" : "FAILED", failures);
  return failures == 0 ? 0 : 1;
}
