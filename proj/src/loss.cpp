#include <algorithm>
#include <cmath>
#include <string>

#include "polycontain/containment.hpp"
#include "polycontain/error.hpp"
#include "polycontain/optimize.hpp"
#include "polycontain/oracle.hpp"
#include "polycontain/random.hpp"

namespace polycontain::oracle {

namespace {

constexpr double kHistogramWidth = 0.005;

// max s >= 0 with cx + s d in <cy, Y>; 0 when even s = 0 fails.
double ray_limit(const Vector& cx, const Vector& d, const Zonotope& y) {
  opt::LinearModel model;
  const opt::VarId s = model.add_variable(0.0, opt::kInf);
  std::vector<opt::VarId> zeta;
  for (Index j = 0; j < y.cols(); ++j) zeta.push_back(model.add_variable(-1.0, 1.0));
  for (Index i = 0; i < y.dim(); ++i) {
    opt::LinExpr lhs;
    for (Index j = 0; j < y.cols(); ++j) lhs.add_term(zeta[static_cast<size_t>(j)], y.generator(i, j));
    lhs.add_term(s, -d(i));
    model.add_constraint(lhs, opt::Relation::kEqual, cx(i) - y.center(i));
  }
  model.set_objective(opt::LinExpr::var(s), opt::Sense::kMaximize);
  const opt::Solution sol = opt::default_solver().solve(model);
  if (sol.status == opt::Status::kInfeasible) return 0.0;
  if (sol.status == opt::Status::kUnbounded) return opt::kInf;
  return sol.value(s);
}

}  // namespace

double lambda_lossless(const Zonotope& inbody, const Zonotope& circumbody) {
  geo::validate(inbody);
  geo::validate(circumbody);
  if (inbody.dim() != circumbody.dim()) {
    fail(ErrorCode::kDimensionMismatch, "lambda_lossless: inbody in R^" +
                                            std::to_string(inbody.dim()) + ", circumbody in R^" +
                                            std::to_string(circumbody.dim()));
  }
  const Index k = inbody.cols();
  if (k > kMaxZonotopeColumns) {
    fail(ErrorCode::kResourceLimit, "lambda_lossless: " + std::to_string(k) +
                                        " generators exceed the cap of " +
                                        std::to_string(kMaxZonotopeColumns));
  }
  // Shared centers make the problem symmetric under s -> -s.
  const bool symmetric = k > 0 && inbody.center == circumbody.center;
  const Index count = Index{1} << (symmetric ? k - 1 : k);
  double best = opt::kInf;
  Vector s(k);
  for (Index mask = 0; mask < count; ++mask) {
    for (Index j = 0; j < k; ++j) s(j) = ((mask >> j) & 1) ? 1.0 : -1.0;
    if (symmetric) s(k - 1) = 1.0;
    best = std::min(best, ray_limit(inbody.center, inbody.generator * s, circumbody));
    if (best == 0.0) break;
  }
  return best;
}

LossRecord loss_record(const Zonotope& inbody, const Zonotope& circumbody) {
  LossRecord r;
  r.dimension = inbody.dim();
  r.inbody_cols = inbody.cols();
  r.circumbody_cols = circumbody.cols();
  r.lambda_lossless = lambda_lossless(inbody, circumbody);
  contain::ContainmentQuery q{{geo::as_ahpolytope(inbody)},
                              contain::Circumbody::ah(geo::as_ahpolytope(circumbody)),
                              contain::Encoding::kThm3};
  const contain::ScalingResult sr = contain::max_scaling(q);
  r.lambda_encoding = sr.lambda;
  if (!std::isfinite(r.lambda_lossless) || r.lambda_lossless <= 0.0) {
    r.loss = 0.0;
  } else {
    r.loss = (r.lambda_lossless - r.lambda_encoding) / r.lambda_lossless;
  }
  return r;
}

LossSummary summarize(std::vector<LossRecord> records) {
  LossSummary out;
  out.records = std::move(records);
  if (out.records.empty()) return out;
  long below = 0;
  out.max_loss = -opt::kInf;
  out.min_loss = opt::kInf;
  for (const auto& r : out.records) {
    if (r.loss < 0.01) ++below;
    out.max_loss = std::max(out.max_loss, r.loss);
    out.min_loss = std::min(out.min_loss, r.loss);
    const auto bin = static_cast<size_t>(std::max(0.0, std::floor(r.loss / kHistogramWidth)));
    if (out.histogram.size() <= bin) out.histogram.resize(bin + 1, 0);
    ++out.histogram[bin];
  }
  out.fraction_below_001 = static_cast<double>(below) / static_cast<double>(out.records.size());
  return out;
}

LossSummary loss_experiment(const LossExperimentConfig& cfg) {
  if (cfg.n_min < 1 || cfg.n_max < cfg.n_min || cfg.cols_max < cfg.n_max || cfg.trials < 0) {
    fail(ErrorCode::kInvalidInput, "loss_experiment: need 1 <= n_min <= n_max <= cols_max and trials >= 0");
  }
  if (cfg.cols_max > kMaxZonotopeColumns) {
    fail(ErrorCode::kResourceLimit, "loss_experiment: cols_max exceeds the vertex cap");
  }
  Rng rng(cfg.seed);
  std::vector<LossRecord> records;
  records.reserve(static_cast<size_t>(cfg.trials));
  for (long t = 0; t < cfg.trials; ++t) {
    const Index n = rng.integer(cfg.n_min, cfg.n_max);
    const Index cols_x = rng.integer(n, cfg.cols_max);
    const Index cols_y = rng.integer(n, cfg.cols_max);
    const Matrix X = rng.matrix(n, cols_x, -1.0, 1.0);
    const Matrix Y = rng.matrix(n, cols_y, -1.0, 1.0);
    Vector cx = Vector::Zero(n);
    Vector cy = Vector::Zero(n);
    if (cfg.random_centers) {
      cx = rng.vector(n, -0.1, 0.1);
      cy = rng.vector(n, -0.1, 0.1);
    }
    records.push_back(loss_record(Zonotope{cx, X}, Zonotope{cy, Y}));
  }
  return summarize(std::move(records));
}

}  // namespace polycontain::oracle
