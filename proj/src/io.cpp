#include "polycontain/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "polycontain/error.hpp"

namespace polycontain::io {

namespace {

using nlohmann::json;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json to_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json to_json(const HPolytope& p) {
  return {{"type", "H"}, {"H", to_json(p.H)}, {"h", to_json(p.h)}};
}

[[noreturn]] void schema(const std::string& msg) { fail(ErrorCode::kInvalidInput, msg); }

const json& field(const json& j, const char* name, const std::string& where) {
  if (!j.is_object()) schema(where + ": expected an object");
  const auto it = j.find(name);
  if (it == j.end()) schema(where + ": missing field \"" + name + "\"");
  return *it;
}

double scalar(const json& j, const std::string& where) {
  if (!j.is_number()) schema(where + ": expected a number");
  return j.get<double>();
}

Vector vector_of(const json& j, const std::string& where) {
  if (!j.is_array()) schema(where + ": expected an array of numbers");
  Vector v(static_cast<Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Index>(i)) = scalar(j[i], where + "[" + std::to_string(i) + "]");
  }
  return v;
}

// cols is used when the array has no rows to infer it from.
Matrix matrix_of(const json& j, const std::string& where, Index cols_if_empty = 0) {
  if (!j.is_array()) schema(where + ": expected an array of rows");
  if (j.empty()) return Matrix(0, cols_if_empty);
  if (!j[0].is_array()) schema(where + ": expected an array of rows");
  const size_t cols = j[0].size();
  Matrix m(static_cast<Index>(j.size()), static_cast<Index>(cols));
  for (size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != cols) {
      schema(w + ": every row must have " + std::to_string(cols) + " entries");
    }
    for (size_t k = 0; k < cols; ++k) {
      m(static_cast<Index>(i), static_cast<Index>(k)) = scalar(j[i][k], w);
    }
  }
  return m;
}

HPolytope h_of(const json& j, const std::string& where) {
  if (!j.is_object()) schema(where + ": expected an object");
  if (const auto t = j.find("type"); t != j.end() && (!t->is_string() || t->get<std::string>() != "H")) {
    schema(where + ": expected \"type\": \"H\"");
  }
  const Vector h = vector_of(field(j, "h", where), where + ".h");
  Matrix H = matrix_of(field(j, "H", where), where + ".H");
  return geo::make_hpolytope(std::move(H), h);
}

json parse_text(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    size_t line = 1;
    size_t column = 1;
    const size_t stop = e.byte == 0 ? 0 : std::min(e.byte - 1, text.size());
    for (size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string what = e.what();
    const auto colon = what.rfind(": ");
    if (colon != std::string::npos) what = what.substr(colon + 2);
    fail(ErrorCode::kParseError, "JSON parse error at line " + std::to_string(line) +
                                     ", column " + std::to_string(column) + ": " + what);
  }
}

json certificate_to_json(const contain::Certificate& c) {
  json out;
  out["encoding"] = contain::to_string(c.encoding);
  out["lambdas"] = json::array();
  for (const auto& m : c.lambdas) out["lambdas"].push_back(to_json(m));
  out["gammas"] = json::array();
  for (const auto& m : c.gammas) out["gammas"].push_back(to_json(m));
  out["betas"] = json::array();
  for (const auto& v : c.betas) out["betas"].push_back(to_json(v));
  out["mixers"] = c.mixers;
  out["binary_mixers"] = c.binary_mixers;
  return out;
}

}  // namespace

Shape Shape::of(const HPolytope& p) {
  Shape s;
  s.kind = ShapeKind::kH;
  s.h = p;
  return s;
}

Shape Shape::of(const AHPolytope& p) {
  Shape s;
  s.kind = ShapeKind::kAH;
  s.ah = p;
  return s;
}

Shape Shape::of(const Zonotope& z) {
  Shape s;
  s.kind = ShapeKind::kZonotope;
  s.zonotope = z;
  return s;
}

Index Shape::dim() const {
  switch (kind) {
    case ShapeKind::kH: return h.dim();
    case ShapeKind::kAH: return ah.dim();
    case ShapeKind::kZonotope: return zonotope.dim();
  }
  return 0;
}

AHPolytope Shape::as_ah() const {
  switch (kind) {
    case ShapeKind::kH: return geo::as_ahpolytope(h);
    case ShapeKind::kAH: return ah;
    case ShapeKind::kZonotope: return geo::as_ahpolytope(zonotope);
  }
  return ah;
}

Shape parse_shape(std::string_view text) {
  const json j = parse_text(text);
  const std::string where = "polytope";
  const json& t = field(j, "type", where);
  if (!t.is_string()) schema("polytope.type: expected a string");
  const std::string type = t.get<std::string>();
  if (type == "H") return Shape::of(h_of(j, where));
  if (type == "AH") {
    const Vector c = vector_of(field(j, "center", where), "polytope.center");
    const HPolytope base = h_of(field(j, "base", where), "polytope.base");
    Matrix map = matrix_of(field(j, "map", where), "polytope.map", base.dim());
    return Shape::of(geo::make_ahpolytope(c, std::move(map), base));
  }
  if (type == "zonotope") {
    const Vector c = vector_of(field(j, "center", where), "polytope.center");
    Matrix g = matrix_of(field(j, "generator", where), "polytope.generator");
    if (g.rows() == 0 && c.size() > 0) g = Matrix(c.size(), 0);
    return Shape::of(geo::make_zonotope(c, std::move(g)));
  }
  schema("polytope.type: unknown type \"" + type + "\" (expected H, AH or zonotope)");
}

Shape read_shape(const std::string& path) {
  try {
    return parse_shape(read_file(path));
  } catch (const Error& e) {
    fail(e.code(), path + ": " + e.what());
  }
}

std::string write_shape(const Shape& s) {
  json j;
  switch (s.kind) {
    case ShapeKind::kH: j = to_json(s.h); break;
    case ShapeKind::kAH:
      j = {{"type", "AH"},
           {"center", to_json(s.ah.center)},
           {"map", to_json(s.ah.map)},
           {"base", to_json(s.ah.base)}};
      break;
    case ShapeKind::kZonotope:
      j = {{"type", "zonotope"},
           {"center", to_json(s.zonotope.center)},
           {"generator", to_json(s.zonotope.generator)}};
      break;
  }
  return j.dump() + "\n";
}

std::string certificate_json(const contain::Certificate& c) {
  return certificate_to_json(c).dump() + "\n";
}

contain::Certificate parse_certificate(std::string_view text) {
  const json j = parse_text(text);
  const std::string where = "certificate";
  contain::Certificate c;
  const json& enc = field(j, "encoding", where);
  if (!enc.is_string()) schema("certificate.encoding: expected a string");
  c.encoding = contain::parse_encoding(enc.get<std::string>());
  auto list = [&](const char* name) -> const json& {
    const json& v = field(j, name, where);
    if (!v.is_array()) schema(where + "." + name + ": expected an array");
    return v;
  };
  const json& lambdas = list("lambdas");
  for (size_t i = 0; i < lambdas.size(); ++i) {
    c.lambdas.push_back(matrix_of(lambdas[i], "certificate.lambdas[" + std::to_string(i) + "]"));
  }
  const json& gammas = list("gammas");
  for (size_t i = 0; i < gammas.size(); ++i) {
    c.gammas.push_back(matrix_of(gammas[i], "certificate.gammas[" + std::to_string(i) + "]"));
  }
  const json& betas = list("betas");
  for (size_t i = 0; i < betas.size(); ++i) {
    c.betas.push_back(vector_of(betas[i], "certificate.betas[" + std::to_string(i) + "]"));
  }
  const json& mixers = list("mixers");
  for (size_t i = 0; i < mixers.size(); ++i) {
    c.mixers.push_back(scalar(mixers[i], "certificate.mixers[" + std::to_string(i) + "]"));
  }
  if (const auto it = j.find("binary_mixers"); it != j.end()) {
    if (!it->is_boolean()) schema("certificate.binary_mixers: expected a boolean");
    c.binary_mixers = it->get<bool>();
  }
  return c;
}

std::string check_json(const contain::CheckResult& r) {
  json j;
  j["verdict"] = contain::to_string(r.verdict);
  j["encoding"] = contain::to_string(r.encoding);
  j["lossless"] = r.lossless;
  j["certificate"] = r.certificate ? certificate_to_json(*r.certificate) : json(nullptr);
  return j.dump() + "\n";
}

std::string scaling_json(const contain::ScalingResult& r) {
  json j;
  j["lambda"] = number(r.lambda);
  j["feasible"] = r.feasible;
  j["unbounded"] = r.unbounded;
  j["encoding"] = contain::to_string(r.encoding);
  j["certificate"] = r.certificate ? certificate_to_json(*r.certificate) : json(nullptr);
  return j.dump() + "\n";
}

std::string hausdorff_json(const metrics::HausdorffResult& r) {
  json j;
  j["d12"] = number(r.d12_upper);
  j["d21"] = number(r.d21_upper);
  j["d_upper"] = number(r.d_upper);
  j["d_joint"] = number(r.d_joint);
  j["d_lower"] = r.d_lower ? number(*r.d_lower) : json(nullptr);
  return j.dump() + "\n";
}

std::string trace_csv(const approx::AlternationTrace& t) {
  std::string out = "iteration,bound\n";
  for (size_t i = 0; i < t.iterates.size(); ++i) {
    out += std::to_string(i) + "," + num(t.iterates[i].bound) + "\n";
  }
  return out;
}

std::string trace_json(const approx::AlternationTrace& t) {
  json j;
  j["converged"] = t.converged;
  j["iterations"] = t.iterations;
  j["rejected"] = t.rejected;
  j["iterates"] = json::array();
  for (const auto& it : t.iterates) {
    j["iterates"].push_back({{"bound", number(it.bound)}, {"decision", to_json(it.decision)}});
  }
  return j.dump() + "\n";
}

std::string loss_csv(const std::vector<oracle::LossRecord>& records) {
  std::string out =
      "trial,dimension,inbody_cols,circumbody_cols,lambda_lossless,lambda_encoding,loss\n";
  for (size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    out += std::to_string(i) + "," + std::to_string(r.dimension) + "," +
           std::to_string(r.inbody_cols) + "," + std::to_string(r.circumbody_cols) + "," +
           num(r.lambda_lossless) + "," + num(r.lambda_encoding) + "," + num(r.loss) + "\n";
  }
  return out;
}

std::string loss_summary_json(const oracle::LossSummary& s) {
  json j;
  j["trials"] = s.records.size();
  j["fraction_below_0.01"] = s.fraction_below_001;
  j["max_loss"] = number(s.max_loss);
  j["min_loss"] = number(s.min_loss);
  j["histogram"] = {{"bin_width", 0.005}, {"counts", s.histogram}};
  return j.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kInvalidInput, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kInvalidInput, "cannot write " + path);
  out << text;
  if (!out) fail(ErrorCode::kInvalidInput, "write failed for " + path);
}

}  // namespace polycontain::io
