#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "polycontain.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerdict = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

// Thrown on any failed library call; carries the status for the exit code.
struct Failure {
  pc_status status;
  std::string message;
};

void check(pc_status s, const std::string& context = {}) {
  if (s == PC_OK) return;
  std::string msg = pc_last_error();
  if (!context.empty()) msg = context + ": " + msg;
  throw Failure{s, msg};
}

int exit_code(pc_status s) {
  switch (s) {
    case PC_INVALID_INPUT:
    case PC_DIMENSION_MISMATCH:
    case PC_UNSUPPORTED_CONVERSION:
    case PC_INVALID_CENTER:
    case PC_PARSE_ERROR:
      return kExitUsage;
    default:
      return kExitRuntime;
  }
}

struct PolytopeDeleter {
  void operator()(pc_polytope* p) const { pc_polytope_free(p); }
};
using Polytope = std::unique_ptr<pc_polytope, PolytopeDeleter>;

struct ApproximationDeleter {
  void operator()(pc_approximation* a) const { pc_approximation_free(a); }
};
using Approximation = std::unique_ptr<pc_approximation, ApproximationDeleter>;

std::string take(char* s) {
  std::string out = s == nullptr ? std::string() : std::string(s);
  pc_string_free(s);
  return out;
}

Polytope load(const std::string& path) {
  pc_polytope* p = nullptr;
  check(pc_polytope_read_file(path.c_str(), &p));
  return Polytope(p);
}

std::vector<Polytope> load_all(const std::vector<std::string>& paths) {
  std::vector<Polytope> out;
  for (const auto& p : paths) out.push_back(load(p));
  return out;
}

std::vector<const pc_polytope*> raw(const std::vector<Polytope>& v) {
  std::vector<const pc_polytope*> out;
  for (const auto& p : v) out.push_back(p.get());
  return out;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Failure{PC_INVALID_INPUT, "cannot write " + path};
}

void write_frames(const pc_approximation* a, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const size_t count = pc_approximation_frame_count(a);
  for (size_t k = 0; k < count; ++k) {
    char* svg = nullptr;
    check(pc_approximation_frame_svg(a, k, &svg), "frame " + std::to_string(k));
    char name[32];
    std::snprintf(name, sizeof name, "frame_%03zu.svg", k);
    emit((std::filesystem::path(dir) / name).string(), take(svg));
  }
}

// Dimension check up front so the message can name the files.
void same_dimension(const std::vector<Polytope>& sets, const std::vector<std::string>& names) {
  for (size_t i = 1; i < sets.size(); ++i) {
    const size_t a = pc_polytope_dimension(sets[0].get());
    const size_t b = pc_polytope_dimension(sets[i].get());
    if (a != b) {
      throw Failure{PC_DIMENSION_MISMATCH, "dimension mismatch: " + names[0] + " is in R^" +
                                               std::to_string(a) + " but " + names[i] +
                                               " is in R^" + std::to_string(b)};
    }
  }
}

struct ApproxOptions {
  double step = pc_alternation_config_default().max_entry_step;
  long max_iters = pc_alternation_config_default().max_iters;
  double stall_tolerance = pc_alternation_config_default().stall_tolerance;
  std::string out, trace, report, frames;

  void add(CLI::App* cmd) {
    cmd->add_option("--step", step, "Trust-region entry step")->check(CLI::PositiveNumber);
    cmd->add_option("--max-iters", max_iters, "LP subproblem budget")->check(CLI::PositiveNumber);
    cmd->add_option("--stall-tol", stall_tolerance, "Relative improvement stop threshold")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("-o,--out", out, "Result polytope JSON (default stdout)");
    cmd->add_option("--trace", trace, "Bound trace CSV");
    cmd->add_option("--report", report, "Run report JSON");
    cmd->add_option("--frames", frames, "Directory for one SVG per accepted iterate");
  }

  pc_alternation_config config(uint64_t seed) const {
    pc_alternation_config c = pc_alternation_config_default();
    c.max_entry_step = step;
    c.max_iters = max_iters;
    c.stall_tolerance = stall_tolerance;
    c.seed = seed;
    return c;
  }

  void write(const pc_approximation* a) const {
    pc_polytope* result = nullptr;
    check(pc_approximation_result(a, &result));
    Polytope owned(result);
    char* json = nullptr;
    check(pc_polytope_to_json(owned.get(), &json));
    emit(out, take(json));
    if (!trace.empty()) {
      char* csv = nullptr;
      check(pc_approximation_trace_csv(a, &csv));
      emit(trace, take(csv));
    }
    if (!report.empty()) {
      char* rep = nullptr;
      check(pc_approximation_report(a, &rep));
      emit(report, take(rep));
    }
    if (!frames.empty()) write_frames(a, frames);
    std::fprintf(stderr, "bound %.10g\n", pc_approximation_bound(a));
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polytope containment, Hausdorff bounds, order reduction and projection"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(pc_version()));

  std::optional<double> tol;
  app.add_option("--tol", tol, "LP feasibility tolerance")->check(CLI::Range(1e-14, 1e-2));
  uint64_t seed = pc_default_seed();

  // contain
  auto* contain = app.add_subcommand("contain", "Certify inbody inside circumbody");
  std::vector<std::string> inbody, circumbody;
  std::string combine = "single", method = "auto", contain_out;
  bool scaling = false;
  contain->add_option("--inbody", inbody, "Inbody JSON; repeat for a Minkowski sum")->required();
  contain->add_option("--circumbody", circumbody, "Circumbody JSON; repeat with --combine")
      ->required();
  contain->add_option("--combine", combine, "How circumbody files combine")
      ->check(CLI::IsMember({"single", "sum", "hull", "union"}));
  contain->add_option("--method", method, "Encoding")
      ->check(CLI::IsMember(
          {"auto", "lemma1", "cor2", "thm1", "thm3", "prop2", "prop3", "cor4", "prop5", "cor5",
           "cor6"}));
  contain->add_flag("--scaling", scaling, "Also report the largest certified scaling");
  contain->add_option("-o,--out", contain_out, "Report JSON (default stdout)");

  // hausdorff
  auto* hausdorff = app.add_subcommand("hausdorff", "Hausdorff distance bounds (infinity norm)");
  std::string h_a, h_b, h_out;
  bool h_zono = false;
  size_t h_samples = 0;
  hausdorff->add_option("first", h_a, "First set JSON")->required();
  hausdorff->add_option("second", h_b, "Second set JSON")->required();
  hausdorff->add_flag("--zonotope", h_zono, "Use the zonotope LP");
  hausdorff->add_option("--samples", h_samples, "Directions for a sampled lower bound");
  hausdorff->add_option("--seed", seed, "Sampling seed")->envname("POLYCONTAIN_SEED");
  hausdorff->add_option("-o,--out", h_out, "Report JSON (default stdout)");

  // reduce
  auto* reduce = app.add_subcommand("reduce", "Zonotope order reduction");
  std::string r_in, r_mode = "outer";
  size_t r_cols = 0;
  ApproxOptions r_opts;
  reduce->add_option("input", r_in, "Zonotope JSON")->required();
  reduce->add_option("--cols", r_cols, "Generator count of the result")->required();
  reduce->add_option("--mode", r_mode, "outer or inner")
      ->check(CLI::IsMember({"outer", "inner"}));
  reduce->add_option("--seed", seed, "Bootstrap seed")->envname("POLYCONTAIN_SEED");
  r_opts.add(reduce);

  // project
  auto* project = app.add_subcommand("project", "Inner approximation of a projection");
  std::string p_in;
  bool p_mpc = false;
  size_t p_dim = 2, p_rows = 4, p_horizon = 20;
  std::vector<double> p_center;
  ApproxOptions p_opts;
  auto* p_in_opt = project->add_option("input", p_in, "Lifted H-polytope JSON");
  auto* p_mpc_opt = project->add_flag("--mpc", p_mpc, "Use the built-in MPC feasible set");
  p_in_opt->excludes(p_mpc_opt);
  project->add_option("--dim", p_dim, "Projected dimension (leading coordinates)");
  project->add_option("--rows", p_rows, "Hyperplanes of the approximation");
  project->add_option("--horizon", p_horizon, "MPC horizon");
  project->add_option("--center", p_center, "Center in the projected space (default origin)");
  p_opts.add(project);

  // loss-experiment
  auto* loss = app.add_subcommand("loss-experiment", "Random encoding-loss statistics");
  pc_loss_config l_cfg = pc_loss_config_default();
  bool l_centers = false;
  std::string l_csv, l_summary;
  loss->add_option("--trials", l_cfg.trials, "Number of trials")->check(CLI::NonNegativeNumber);
  loss->add_option("--n-min", l_cfg.n_min, "Smallest dimension");
  loss->add_option("--n-max", l_cfg.n_max, "Largest dimension");
  loss->add_option("--cols-max", l_cfg.cols_max, "Largest generator count");
  loss->add_option("--seed", seed, "Experiment seed")->envname("POLYCONTAIN_SEED");
  loss->add_flag("--random-centers", l_centers, "Draw centers from U(-0.1, 0.1)");
  loss->add_option("--csv", l_csv, "Per-trial CSV");
  loss->add_option("--summary", l_summary, "Summary JSON (default stdout)");

  // render
  auto* render = app.add_subcommand("render", "SVG of 2-D sets, drawn in order");
  std::vector<std::string> r_sets;
  std::string svg_out;
  render->add_option("sets", r_sets, "Polytope JSON files");
  render->add_option("-o,--out", svg_out, "SVG path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (tol) check(pc_set_tolerance(*tol), "--tol");

    if (*contain) {
      auto in = load_all(inbody);
      auto out = load_all(circumbody);
      std::vector<Polytope> all;
      std::vector<std::string> names = inbody;
      names.insert(names.end(), circumbody.begin(), circumbody.end());
      for (auto& p : in) all.emplace_back(p.release());
      for (auto& p : out) all.emplace_back(p.release());
      same_dimension(all, names);
      const auto ptrs = raw(all);
      const pc_combine c = combine == "sum"    ? PC_COMBINE_SUM
                           : combine == "hull"  ? PC_COMBINE_HULL
                           : combine == "union" ? PC_COMBINE_UNION
                                                : PC_COMBINE_SINGLE;
      if (c == PC_COMBINE_SINGLE && circumbody.size() != 1) {
        throw Failure{PC_INVALID_INPUT, "several --circumbody files need --combine"};
      }
      pc_verdict verdict = PC_NOT_CERTIFIED;
      char* report = nullptr;
      check(pc_contain(ptrs.data(), inbody.size(), ptrs.data() + inbody.size(), circumbody.size(),
                       c, method.c_str(), &verdict, &report));
      std::string text = take(report);
      if (scaling) {
        double lambda = 0;
        char* rep = nullptr;
        check(pc_max_scaling(ptrs.data(), inbody.size(), ptrs.data() + inbody.size(),
                             circumbody.size(), c, method.c_str(), &lambda, &rep));
        text += take(rep);
      }
      emit(contain_out, text);
      return verdict == PC_CONTAINED_CERTIFIED ? kExitOk : kExitVerdict;
    }

    if (*hausdorff) {
      std::vector<Polytope> sets;
      sets.push_back(load(h_a));
      sets.push_back(load(h_b));
      same_dimension(sets, {h_a, h_b});
      char* report = nullptr;
      check(pc_hausdorff(sets[0].get(), sets[1].get(), h_zono ? 1 : 0, h_samples, seed, &report));
      emit(h_out, take(report));
      return kExitOk;
    }

    if (*reduce) {
      const Polytope z = load(r_in);
      const pc_alternation_config cfg = r_opts.config(seed);
      pc_approximation* a = nullptr;
      check(pc_reduce(z.get(), r_cols, r_mode == "inner" ? PC_REDUCE_INNER : PC_REDUCE_OUTER, &cfg,
                      &a));
      const Approximation owned(a);
      r_opts.write(owned.get());
      return kExitOk;
    }

    if (*project) {
      if (!p_mpc && p_in.empty()) throw Failure{PC_INVALID_INPUT, "give an input file or --mpc"};
      Polytope lifted;
      if (p_mpc) {
        pc_polytope* m = nullptr;
        check(pc_mpc_example(p_horizon, &m));
        lifted.reset(m);
      } else {
        lifted = load(p_in);
      }
      if (!p_center.empty() && p_center.size() != p_dim) {
        throw Failure{PC_DIMENSION_MISMATCH,
                      "dimension mismatch: --center has " + std::to_string(p_center.size()) +
                          " entries but --dim is " + std::to_string(p_dim)};
      }
      const pc_alternation_config cfg = p_opts.config(seed);
      pc_approximation* a = nullptr;
      check(pc_project(lifted.get(), p_dim, p_rows, p_center.empty() ? nullptr : p_center.data(),
                       &cfg, &a));
      const Approximation owned(a);
      p_opts.write(owned.get());
      return kExitOk;
    }

    if (*loss) {
      l_cfg.seed = seed;
      l_cfg.random_centers = l_centers ? 1 : 0;
      char* csv = nullptr;
      char* summary = nullptr;
      check(pc_loss_experiment(&l_cfg, &csv, &summary));
      const std::string csv_text = take(csv);
      if (!l_csv.empty()) emit(l_csv, csv_text);
      emit(l_summary, take(summary));
      return kExitOk;
    }

    if (*render) {
      const auto sets = load_all(r_sets);
      const auto ptrs = raw(sets);
      char* svg = nullptr;
      check(pc_render_svg(ptrs.data(), ptrs.size(), &svg));
      emit(svg_out, take(svg));
      return kExitOk;
    }
  } catch (const Failure& f) {
    std::fprintf(stderr, "error: %s\n", f.message.c_str());
    return exit_code(f.status);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitUsage;
}
