#include "ngd/io.hpp"

#include <fstream>
#include <limits>

namespace ngd::io {

namespace {

std::string at(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string at(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

const nlohmann::json& field(const nlohmann::json& j, const std::string& path, const std::string& key) {
  if (!j.is_object()) throw SchemaError(path.empty() ? "/" : path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(at(path, key), "missing");
  return *it;
}

const nlohmann::json& array(const nlohmann::json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array");
  return j;
}

std::size_t index(const nlohmann::json& j, const std::string& path, std::size_t bound) {
  if (!j.is_number_integer() || j.get<long long>() < 0 || static_cast<std::size_t>(j.get<long long>()) >= bound)
    throw SchemaError(path, "expected an index below " + std::to_string(bound));
  return j.get<std::size_t>();
}

std::string name_of(const nlohmann::json& j, const std::string& path) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number()) return j.dump();
  throw SchemaError(path, "expected a name or number");
}

std::vector<Rational> rationals(const nlohmann::json& j, const std::string& path) {
  std::vector<Rational> out;
  for (std::size_t i = 0; i < array(j, path).size(); ++i) out.push_back(rational_from_json(j[i], at(path, i)));
  return out;
}

RationalMatrix matrix(const nlohmann::json& j, const std::string& path, std::size_t n) {
  if (array(j, path).size() != n) throw SchemaError(path, "expected " + std::to_string(n) + " rows");
  RationalMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = rationals(j[i], at(path, i));
    if (row.size() != n) throw SchemaError(at(path, i), "expected " + std::to_string(n) + " entries");
    for (std::size_t k = 0; k < n; ++k) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = row[k];
  }
  return m;
}

Measure measure(const nlohmann::json& j, const std::string& path, std::size_t n) {
  auto w = rationals(j, path);
  if (w.size() != n) throw SchemaError(path, "expected " + std::to_string(n) + " weights");
  try {
    return make_measure(std::move(w));
  } catch (const PreconditionError& e) {
    throw SchemaError(path, e.what());
  }
}

}  // namespace

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw PreconditionError(path + ": " + e.what());
  }
}

Rational rational_from_json(const nlohmann::json& j, const std::string& path) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_number_float()) return parse_rational(j.dump());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(path, e.what());
  }
  throw SchemaError(path, "expected a rational");
}

nlohmann::json to_json(const Rational& r) { return to_string(r); }

FiniteMetricSpace metric_space_from_json(const nlohmann::json& j, const std::string& path) {
  FiniteMetricSpace X;
  const auto& pts = array(field(j, path, "points"), at(path, "points"));
  for (std::size_t i = 0; i < pts.size(); ++i) X.points.push_back(name_of(pts[i], at(at(path, "points"), i)));
  X.dist = matrix(field(j, path, "dist"), at(path, "dist"), X.size());
  return X;
}

GroupoidInput groupoid_from_json(const nlohmann::json& j, const std::string& path) {
  std::vector<std::string> names;
  const auto& arrows = array(field(j, path, "arrows"), at(path, "arrows"));
  for (std::size_t i = 0; i < arrows.size(); ++i) names.push_back(name_of(arrows[i], at(at(path, "arrows"), i)));

  std::vector<std::tuple<std::string, std::string, std::string>> products;
  const auto cpath = at(path, "compose");
  const auto& comp = array(field(j, path, "compose"), cpath);
  for (std::size_t i = 0; i < comp.size(); ++i) {
    const auto p = at(cpath, i);
    if (!comp[i].is_array() || comp[i].size() != 3) throw SchemaError(p, "expected [g, h, gh]");
    products.emplace_back(name_of(comp[i][0], p), name_of(comp[i][1], p), name_of(comp[i][2], p));
  }
  std::vector<std::pair<std::string, std::string>> inverse;
  const auto ipath = at(path, "inverse");
  const auto& inv = array(field(j, path, "inverse"), ipath);
  for (std::size_t i = 0; i < inv.size(); ++i) {
    const auto p = at(ipath, i);
    if (!inv[i].is_array() || inv[i].size() != 2) throw SchemaError(p, "expected [g, g^-1]");
    inverse.emplace_back(name_of(inv[i][0], p), name_of(inv[i][1], p));
  }
  GroupoidInput out{FiniteGroupoid::from_names(names, products, inverse), std::nullopt};
  if (j.contains("norm")) {
    const auto npath = at(path, "norm");
    const auto& n = j["norm"];
    if (!n.is_object()) throw SchemaError(npath, "expected {arrow: rational}");
    Norm d(names.size());
    std::vector<bool> seen(names.size(), false);
    for (const auto& [key, value] : n.items()) {
      auto id = out.groupoid.find(key);
      if (!id) throw SchemaError(at(npath, key), "unknown arrow");
      d[*id] = rational_from_json(value, at(npath, key));
      seen[*id] = true;
    }
    for (std::size_t i = 0; i < names.size(); ++i)
      if (!seen[i]) throw SchemaError(at(npath, names[i]), "missing");
    out.norm = std::move(d);
  }
  return out;
}

GroupAction group_action_from_json(const nlohmann::json& j, const std::string& path) {
  GroupAction a;
  const auto& el = array(field(j, path, "elements"), at(path, "elements"));
  for (std::size_t i = 0; i < el.size(); ++i) a.elements.push_back(name_of(el[i], at(at(path, "elements"), i)));
  const std::size_t n = a.elements.size();
  auto table = [&](const std::string& key, std::size_t cols, std::size_t bound) {
    std::vector<std::vector<std::size_t>> t;
    const auto p = at(path, key);
    const auto& rows = array(field(j, path, key), p);
    if (rows.size() != n) throw SchemaError(p, "expected " + std::to_string(n) + " rows");
    for (std::size_t r = 0; r < n; ++r) {
      const auto& row = array(rows[r], at(p, r));
      if (cols != 0 && row.size() != cols) throw SchemaError(at(p, r), "expected " + std::to_string(cols) + " entries");
      std::vector<std::size_t> v;
      for (std::size_t c = 0; c < row.size(); ++c) v.push_back(index(row[c], at(at(p, r), c), bound));
      t.push_back(std::move(v));
    }
    return t;
  };
  a.mul = table("mul", n, n);
  a.act = table("act", 0, std::numeric_limits<std::size_t>::max());
  return a;
}

TransportInput transport_from_json(const nlohmann::json& j) {
  TransportInput in;
  in.space = metric_space_from_json(field(j, "", "space"), "/space");
  const std::size_t n = in.space.size();
  if (j.contains("mu")) in.mu = measure(j["mu"], "/mu", n);
  if (j.contains("nu")) in.nu = measure(j["nu"], "/nu", n);
  auto plan = [&](const std::string& key) -> std::optional<Coupling> {
    if (!j.contains(key)) return std::nullopt;
    try {
      return Coupling(matrix(j[key], "/" + key, n));
    } catch (const SchemaError&) {
      throw;
    } catch (const PreconditionError& e) {
      throw SchemaError("/" + key, e.what());
    }
  };
  in.gamma = plan("gamma");
  in.gamma2 = plan("gamma2");
  if (in.gamma && in.mu && in.gamma->mu() != *in.mu)
    throw SchemaError("/gamma", "row sums " + to_string(in.gamma->mu()) + " differ from mu " + to_string(*in.mu));
  if (in.gamma && in.nu && in.gamma->nu() != *in.nu)
    throw SchemaError("/gamma", "column sums " + to_string(in.gamma->nu()) + " differ from nu " + to_string(*in.nu));
  if (j.contains("u")) {
    in.u = rationals(j["u"], "/u");
    if (in.u->size() != n) throw SchemaError("/u", "expected " + std::to_string(n) + " values");
  }
  return in;
}

nlohmann::json to_json(const Measure& m) {
  auto a = nlohmann::json::array();
  for (const auto& w : m.weights) a.push_back(to_string(w));
  return a;
}

nlohmann::json to_json(const Coupling& c) {
  auto rows = nlohmann::json::array();
  for (std::size_t i = 0; i < c.size(); ++i) {
    auto row = nlohmann::json::array();
    for (std::size_t k = 0; k < c.size(); ++k) row.push_back(to_string(c(i, k)));
    rows.push_back(row);
  }
  return rows;
}

SuiteConfig suite_config_from_json(const nlohmann::json& j, SuiteConfig c, std::vector<std::string>* suites) {
  if (!j.is_object()) throw SchemaError("/", "expected an object");
  try {
    if (j.contains("model")) c.model = j["model"].get<std::string>();
    if (j.contains("dim")) c.dim = j["dim"].get<int>();
    if (j.contains("radius")) c.radius = j["radius"].get<double>();
    if (j.contains("samples")) c.samples = j["samples"].get<std::size_t>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("eps_grid")) c.eps_grid = j["eps_grid"].get<std::vector<double>>();
    if (j.contains("tol")) c.tol = j["tol"].get<double>();
    if (suites && j.contains("suites")) *suites = j["suites"].get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("/", e.what());
  }
  if (c.eps_grid && c.eps_grid->empty()) throw SchemaError("/eps_grid", "grid must be nonempty");
  return c;
}

}  // namespace ngd::io
