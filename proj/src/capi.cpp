#include "polycontain.h"

#include <cmath>
#include <cstring>
#include <functional>
#include <new>
#include <string>

#include "json.hpp"
#include "polycontain/approximate.hpp"
#include "polycontain/containment.hpp"
#include "polycontain/error.hpp"
#include "polycontain/io.hpp"
#include "polycontain/metrics.hpp"
#include "polycontain/optimize.hpp"
#include "polycontain/oracle.hpp"
#include "polycontain/random.hpp"
#include "polycontain/render.hpp"

using namespace polycontain;
using numerics::Index;
using numerics::Matrix;
using numerics::Vector;

struct pc_polytope {
  io::Shape shape;
};

struct pc_approximation {
  io::Shape result;
  double bound = 0.0;
  std::string mode;
  approx::AlternationTrace trace;
  geo::AHPolytope backdrop;
  std::function<geo::AHPolytope(const Matrix&)> frame;
};

namespace {

thread_local std::string g_last_error;

pc_status status_of(ErrorCode c) { return static_cast<pc_status>(static_cast<int>(c)); }

template <typename F>
pc_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return PC_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return PC_RESOURCE_LIMIT;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PC_INTERNAL_ERROR;
  } catch (...) {
    g_last_error = "unknown failure";
    return PC_INTERNAL_ERROR;
  }
}

void require(bool ok, const char* what) {
  if (!ok) fail(ErrorCode::kInvalidInput, what);
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

pc_polytope* wrap(io::Shape s) { return new pc_polytope{std::move(s)}; }

Matrix row_major(const double* data, size_t rows, size_t cols) {
  Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (size_t i = 0; i < rows; ++i) {
    for (size_t j = 0; j < cols; ++j) m(static_cast<Index>(i), static_cast<Index>(j)) = data[i * cols + j];
  }
  return m;
}

std::vector<geo::AHPolytope> operands(const pc_polytope* const* list, size_t count,
                                      const char* role) {
  require(list != nullptr || count == 0, "null operand list");
  std::vector<geo::AHPolytope> out;
  for (size_t i = 0; i < count; ++i) {
    if (list[i] == nullptr) {
      fail(ErrorCode::kInvalidInput, std::string(role) + "[" + std::to_string(i) + "] is null");
    }
    out.push_back(list[i]->shape.as_ah());
  }
  return out;
}

contain::ContainmentQuery query_of(const pc_polytope* const* inbody, size_t n_inbody,
                                   const pc_polytope* const* circumbody, size_t n_circumbody,
                                   pc_combine combine, const char* method) {
  require(n_inbody > 0, "at least one inbody operand is required");
  require(n_circumbody > 0, "at least one circumbody operand is required");
  contain::ContainmentQuery q;
  q.inbody = operands(inbody, n_inbody, "inbody");
  std::vector<geo::AHPolytope> outer = operands(circumbody, n_circumbody, "circumbody");
  const Index n = q.inbody[0].dim();
  for (size_t i = 0; i < q.inbody.size(); ++i) {
    if (q.inbody[i].dim() != n) {
      fail(ErrorCode::kDimensionMismatch,
           "dimension mismatch: inbody[0] is in R^" + std::to_string(n) + " but inbody[" +
               std::to_string(i) + "] is in R^" + std::to_string(q.inbody[i].dim()));
    }
  }
  for (size_t i = 0; i < outer.size(); ++i) {
    if (outer[i].dim() != n) {
      fail(ErrorCode::kDimensionMismatch,
           "dimension mismatch: inbody is in R^" + std::to_string(n) + " but circumbody[" +
               std::to_string(i) + "] is in R^" + std::to_string(outer[i].dim()));
    }
  }
  switch (combine) {
    case PC_COMBINE_SINGLE:
      require(n_circumbody == 1, "a single circumbody expects exactly one operand");
      q.circumbody = circumbody[0]->shape.kind == io::ShapeKind::kH
                         ? contain::Circumbody::h(circumbody[0]->shape.h)
                         : contain::Circumbody::ah(outer[0]);
      break;
    case PC_COMBINE_SUM: q.circumbody = contain::Circumbody::sum(std::move(outer)); break;
    case PC_COMBINE_HULL: q.circumbody = contain::Circumbody::hull(std::move(outer)); break;
    case PC_COMBINE_UNION:
      q.circumbody = contain::Circumbody::disjunction(std::move(outer));
      break;
    default: fail(ErrorCode::kInvalidInput, "unknown combine mode");
  }
  if (method != nullptr && std::strcmp(method, "auto") != 0) {
    q.method = contain::parse_encoding(method);
  }
  return q;
}

approx::AlternationConfig config_of(const pc_alternation_config* cfg) {
  approx::AlternationConfig c;
  if (cfg == nullptr) return c;
  require(std::isfinite(cfg->max_entry_step) && cfg->max_entry_step > 0,
          "max_entry_step must be positive");
  require(cfg->max_iters > 0, "max_iters must be positive");
  require(std::isfinite(cfg->stall_tolerance) && cfg->stall_tolerance >= 0,
          "stall_tolerance must be nonnegative");
  require(cfg->stall_window > 0, "stall_window must be positive");
  c.max_entry_step = cfg->max_entry_step;
  c.max_iters = cfg->max_iters;
  c.stall_tolerance = cfg->stall_tolerance;
  c.stall_window = cfg->stall_window;
  c.seed = cfg->seed;
  return c;
}

}  // namespace

extern "C" {

const char* pc_version(void) { return "1.0.0"; }

const char* pc_status_string(pc_status status) {
  switch (status) {
    case PC_OK: return "ok";
    case PC_INTERNAL_ERROR: return "internal error";
    default:
      if (status >= PC_INVALID_INPUT && status <= PC_PARSE_ERROR) {
        return to_string(static_cast<ErrorCode>(status));
      }
      return "unknown status";
  }
}

const char* pc_last_error(void) { return g_last_error.c_str(); }

void pc_string_free(char* s) { std::free(s); }

uint64_t pc_default_seed(void) { return kDefaultSeed; }

pc_status pc_set_tolerance(double tol) {
  return guarded([&] {
    require(std::isfinite(tol) && tol > 0 && tol <= 1e-2, "tolerance must lie in (0, 1e-2]");
    opt::SolverOptions o = opt::default_options();
    o.feasibility_tol = tol;
    opt::set_default_options(o);
  });
}

pc_status pc_polytope_from_json(const char* text, pc_polytope** out) {
  return guarded([&] {
    require(text != nullptr && out != nullptr, "null argument");
    *out = wrap(io::parse_shape(text));
  });
}

pc_status pc_polytope_read_file(const char* path, pc_polytope** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = wrap(io::read_shape(path));
  });
}

pc_status pc_polytope_from_h(const double* H, const double* h, size_t rows, size_t dim,
                             pc_polytope** out) {
  return guarded([&] {
    require(H != nullptr && h != nullptr && out != nullptr, "null argument");
    const Matrix hv = row_major(h, rows, 1);
    *out = wrap(io::Shape::of(geo::make_hpolytope(row_major(H, rows, dim), hv.col(0))));
  });
}

pc_status pc_polytope_from_zonotope(const double* center, const double* generator, size_t dim,
                                    size_t cols, pc_polytope** out) {
  return guarded([&] {
    require(center != nullptr && out != nullptr && (generator != nullptr || cols == 0),
            "null argument");
    const Matrix c = row_major(center, dim, 1);
    const Matrix g = cols == 0 ? Matrix(static_cast<Index>(dim), 0)
                               : row_major(generator, dim, cols);
    *out = wrap(io::Shape::of(geo::make_zonotope(c.col(0), g)));
  });
}

void pc_polytope_free(pc_polytope* p) { delete p; }

size_t pc_polytope_dimension(const pc_polytope* p) {
  return p == nullptr ? 0 : static_cast<size_t>(p->shape.dim());
}

pc_status pc_polytope_to_json(const pc_polytope* p, char** out) {
  return guarded([&] {
    require(p != nullptr && out != nullptr, "null argument");
    *out = dup(io::write_shape(p->shape));
  });
}

pc_status pc_contain(const pc_polytope* const* inbody, size_t n_inbody,
                     const pc_polytope* const* circumbody, size_t n_circumbody,
                     pc_combine combine, const char* method, pc_verdict* verdict,
                     char** report) {
  return guarded([&] {
    require(verdict != nullptr, "null verdict");
    const auto q = query_of(inbody, n_inbody, circumbody, n_circumbody, combine, method);
    const contain::CheckResult r = contain::check(q);
    switch (r.verdict) {
      case contain::Verdict::kContainedCertified: *verdict = PC_CONTAINED_CERTIFIED; break;
      case contain::Verdict::kNotCertified: *verdict = PC_NOT_CERTIFIED; break;
      case contain::Verdict::kRefuted: *verdict = PC_REFUTED; break;
    }
    if (report != nullptr) *report = dup(io::check_json(r));
  });
}

pc_status pc_max_scaling(const pc_polytope* const* inbody, size_t n_inbody,
                         const pc_polytope* const* circumbody, size_t n_circumbody,
                         pc_combine combine, const char* method, double* lambda, char** report) {
  return guarded([&] {
    require(lambda != nullptr, "null lambda");
    const auto q = query_of(inbody, n_inbody, circumbody, n_circumbody, combine, method);
    const contain::ScalingResult r = contain::max_scaling(q);
    *lambda = r.lambda;
    if (report != nullptr) *report = dup(io::scaling_json(r));
  });
}

pc_status pc_hausdorff(const pc_polytope* a, const pc_polytope* b, int zonotope, size_t samples,
                       uint64_t seed, char** report) {
  return guarded([&] {
    require(a != nullptr && b != nullptr && report != nullptr, "null argument");
    const geo::AHPolytope x1 = a->shape.as_ah();
    const geo::AHPolytope x2 = b->shape.as_ah();
    if (x1.dim() != x2.dim()) {
      fail(ErrorCode::kDimensionMismatch, "dimension mismatch: first set is in R^" +
                                              std::to_string(x1.dim()) + " but second is in R^" +
                                              std::to_string(x2.dim()));
    }
    metrics::HausdorffResult r;
    if (zonotope != 0) {
      if (!contain::is_zonotope(x1) || !contain::is_zonotope(x2)) {
        fail(ErrorCode::kInvalidInput, "the zonotope bound needs two zonotope operands");
      }
      r = metrics::zonotope_hausdorff_upper(contain::to_zonotope(x1), contain::to_zonotope(x2));
    } else {
      r = metrics::hausdorff_upper(x1, x2);
    }
    if (samples > 0) {
      r.d_lower = metrics::hausdorff_lower_sampling(x1, x2, static_cast<Index>(samples), seed);
    }
    *report = dup(io::hausdorff_json(r));
  });
}

pc_alternation_config pc_alternation_config_default(void) {
  const approx::AlternationConfig c;
  return {c.max_entry_step, c.max_iters, c.stall_tolerance, c.stall_window, c.seed};
}

pc_status pc_reduce(const pc_polytope* zonotope, size_t target_cols, pc_reduce_mode mode,
                    const pc_alternation_config* cfg, pc_approximation** out) {
  return guarded([&] {
    require(zonotope != nullptr && out != nullptr, "null argument");
    const geo::AHPolytope ah = zonotope->shape.as_ah();
    if (!contain::is_zonotope(ah)) fail(ErrorCode::kInvalidInput, "reduce expects a zonotope");
    const geo::Zonotope z = contain::to_zonotope(ah);
    const approx::AlternationConfig c = config_of(cfg);
    require(mode == PC_REDUCE_OUTER || mode == PC_REDUCE_INNER, "unknown reduction mode");
    const approx::ReductionResult r =
        mode == PC_REDUCE_OUTER ? approx::reduce_outer(z, static_cast<Index>(target_cols), c)
                                : approx::reduce_inner(z, static_cast<Index>(target_cols), c);
    auto* a = new pc_approximation;
    a->result = io::Shape::of(r.reduced.zonotope);
    a->bound = r.reduced.bound;
    a->mode = approx::to_string(r.reduced.mode);
    a->trace = r.trace;
    a->backdrop = ah;
    const Vector center = z.center;
    a->frame = [center](const Matrix& g) {
      return geo::as_ahpolytope(geo::Zonotope{center, g});
    };
    *out = a;
  });
}

pc_status pc_project(const pc_polytope* lifted, size_t n, size_t rows, const double* center,
                     const pc_alternation_config* cfg, pc_approximation** out) {
  return guarded([&] {
    require(lifted != nullptr && out != nullptr, "null argument");
    if (lifted->shape.kind != io::ShapeKind::kH) {
      fail(ErrorCode::kInvalidInput, "project expects an H-polytope in the lifted space");
    }
    const geo::HPolytope& p = lifted->shape.h;
    require(n > 0 && static_cast<Index>(n) <= p.dim(),
            "projection dimension must lie between 1 and the lifted dimension");
    const Vector c = center == nullptr ? Vector(Vector::Zero(static_cast<Index>(n)))
                                       : Vector(row_major(center, n, 1).col(0));
    const approx::ProjectionResult r =
        approx::project_inner(p, static_cast<Index>(n), static_cast<Index>(rows), c, config_of(cfg));
    auto* a = new pc_approximation;
    a->result = io::Shape::of(r.set);
    a->bound = r.epsilon;
    a->mode = "project";
    a->trace = r.trace;
    geo::AHPolytope shadow;
    shadow.center = Vector::Zero(static_cast<Index>(n));
    shadow.map = Matrix::Identity(static_cast<Index>(n), p.dim());
    shadow.base = p;
    a->backdrop = shadow;
    a->frame = [c](const Matrix& hx) {
      return geo::as_ahpolytope(
          geo::HPolytope{hx, Vector::Ones(hx.rows()) + hx * c});
    };
    *out = a;
  });
}

void pc_approximation_free(pc_approximation* a) { delete a; }

double pc_approximation_bound(const pc_approximation* a) {
  return a == nullptr ? std::nan("") : a->bound;
}

pc_status pc_approximation_result(const pc_approximation* a, pc_polytope** out) {
  return guarded([&] {
    require(a != nullptr && out != nullptr, "null argument");
    *out = wrap(a->result);
  });
}

pc_status pc_approximation_report(const pc_approximation* a, char** out) {
  return guarded([&] {
    require(a != nullptr && out != nullptr, "null argument");
    nlohmann::json j;
    j["mode"] = a->mode;
    j["bound"] = a->bound;
    j["result"] = nlohmann::json::parse(io::write_shape(a->result));
    j["trace"] = nlohmann::json::parse(io::trace_json(a->trace));
    *out = dup(j.dump() + "\n");
  });
}

pc_status pc_approximation_trace_csv(const pc_approximation* a, char** out) {
  return guarded([&] {
    require(a != nullptr && out != nullptr, "null argument");
    *out = dup(io::trace_csv(a->trace));
  });
}

size_t pc_approximation_frame_count(const pc_approximation* a) {
  return a == nullptr ? 0 : a->trace.iterates.size();
}

pc_status pc_approximation_frame_svg(const pc_approximation* a, size_t k, char** out) {
  return guarded([&] {
    require(a != nullptr && out != nullptr, "null argument");
    require(k < a->trace.iterates.size(), "frame index out of range");
    *out = dup(render::render_2d({a->backdrop, a->frame(a->trace.iterates[k].decision)}));
  });
}

pc_status pc_mpc_example(size_t horizon, pc_polytope** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    require(horizon > 0, "horizon must be positive");
    *out = wrap(io::Shape::of(approx::mpc_example(static_cast<Index>(horizon))));
  });
}

pc_loss_config pc_loss_config_default(void) {
  const oracle::LossExperimentConfig c;
  return {static_cast<size_t>(c.n_min), static_cast<size_t>(c.n_max),
          static_cast<size_t>(c.cols_max), c.trials, kDefaultSeed, c.random_centers ? 1 : 0};
}

pc_status pc_loss_experiment(const pc_loss_config* cfg, char** csv, char** summary) {
  return guarded([&] {
    require(cfg != nullptr, "null config");
    require(cfg->n_min >= 1 && cfg->n_min <= cfg->n_max, "need 1 <= n_min <= n_max");
    require(cfg->cols_max >= cfg->n_max, "cols_max must be at least n_max");
    require(cfg->trials >= 0, "trials must be nonnegative");
    oracle::LossExperimentConfig c;
    c.n_min = static_cast<Index>(cfg->n_min);
    c.n_max = static_cast<Index>(cfg->n_max);
    c.cols_max = static_cast<Index>(cfg->cols_max);
    c.trials = cfg->trials;
    c.seed = cfg->seed;
    c.random_centers = cfg->random_centers != 0;
    const oracle::LossSummary s = oracle::loss_experiment(c);
    if (csv != nullptr) *csv = dup(io::loss_csv(s.records));
    if (summary != nullptr) *summary = dup(io::loss_summary_json(s));
  });
}

pc_status pc_render_svg(const pc_polytope* const* sets, size_t count, char** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = dup(render::render_2d(operands(sets, count, "set")));
  });
}

}  // extern "C"
