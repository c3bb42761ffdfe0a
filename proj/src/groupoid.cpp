#include "ngd/groupoid.hpp"

#include <map>
#include <numeric>
#include <set>

namespace ngd {

FiniteGroupoid::FiniteGroupoid(std::vector<std::string> names, const std::vector<Triple>& products,
                               std::vector<ArrowId> inverse)
    : names_(std::move(names)), inverse_(std::move(inverse)) {
  const std::size_t n = names_.size();
  if (inverse_.size() != n)
    throw StructuralError("inverse map has " + std::to_string(inverse_.size()) +
                          " entries for " + std::to_string(n) + " arrows");
  for (std::size_t a = 0; a < n; ++a)
    if (inverse_[a] >= n)
      throw StructuralError("inverse of '" + names_[a] + "' lies outside the arrow set");
  table_.assign(n * n, kUndefined);
  partners_.assign(n, {});
  for (const auto& [g, h, gh] : products) {
    if (g >= n || h >= n || gh >= n)
      throw StructuralError("product entry refers to an arrow outside the arrow set");
    auto& slot = table_[g * n + h];
    if (slot != kUndefined && slot != gh)
      throw StructuralError("product of '" + names_[g] + "' and '" + names_[h] +
                            "' declared twice with different results");
    if (slot == kUndefined) partners_[g].push_back(h);
    slot = gh;
  }
  for (auto& p : partners_) std::sort(p.begin(), p.end());
}

FiniteGroupoid FiniteGroupoid::from_names(
    std::vector<std::string> names,
    const std::vector<std::tuple<std::string, std::string, std::string>>& products,
    const std::vector<std::pair<std::string, std::string>>& inverse) {
  std::map<std::string, ArrowId> index;
  for (std::size_t i = 0; i < names.size(); ++i)
    if (!index.emplace(names[i], i).second)
      throw StructuralError("duplicate arrow '" + names[i] + "'");
  auto lookup = [&](const std::string& s) {
    auto it = index.find(s);
    if (it == index.end()) throw StructuralError("unknown arrow '" + s + "'");
    return it->second;
  };
  std::vector<Triple> triples;
  triples.reserve(products.size());
  for (const auto& [g, h, gh] : products) triples.emplace_back(lookup(g), lookup(h), lookup(gh));
  constexpr ArrowId unset = static_cast<ArrowId>(-1);
  std::vector<ArrowId> inv(names.size(), unset);
  for (const auto& [a, b] : inverse) {
    ArrowId ia = lookup(a);
    ArrowId ib = lookup(b);
    if (inv[ia] != unset && inv[ia] != ib)
      throw StructuralError("inverse of '" + a + "' declared twice");
    inv[ia] = ib;
  }
  for (std::size_t i = 0; i < names.size(); ++i)
    if (inv[i] == unset) throw StructuralError("no inverse declared for '" + names[i] + "'");
  return FiniteGroupoid(std::move(names), triples, std::move(inv));
}

std::optional<ArrowId> FiniteGroupoid::find(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<ArrowId>(it - names_.begin());
}

std::optional<ArrowId> FiniteGroupoid::try_compose(ArrowId g, ArrowId h) const {
  auto v = table_.at(g * size() + h);
  if (v == kUndefined) return std::nullopt;
  return v;
}

ArrowId FiniteGroupoid::compose(ArrowId g, ArrowId h) const {
  auto v = try_compose(g, h);
  if (!v) throw PreconditionError("arrows '" + name(g) + "' and '" + name(h) + "' are not composable");
  return *v;
}

ArrowId FiniteGroupoid::alpha(ArrowId a) const {
  auto v = try_compose(inverse(a), a);
  if (!v) throw StructuralError("a^-1 a undefined for '" + name(a) + "'");
  return *v;
}

ArrowId FiniteGroupoid::omega(ArrowId a) const {
  auto v = try_compose(a, inverse(a));
  if (!v) throw StructuralError("a a^-1 undefined for '" + name(a) + "'");
  return *v;
}

bool FiniteGroupoid::is_identity(ArrowId a) const {
  auto v = try_compose(inverse(a), a);
  return v && *v == a;
}

std::vector<ArrowId> FiniteGroupoid::objects() const {
  std::set<ArrowId> out;
  for (ArrowId a = 0; a < size(); ++a) out.insert(alpha(a));
  return {out.begin(), out.end()};
}

std::vector<FiniteGroupoid::Triple> FiniteGroupoid::products() const {
  std::vector<Triple> out;
  for (ArrowId g = 0; g < size(); ++g)
    for (ArrowId h : partners_[g]) out.emplace_back(g, h, table_[g * size() + h]);
  return out;
}

std::string to_string(ConvergenceMode mode) {
  switch (mode) {
    case ConvergenceMode::left: return "left";
    case ConvergenceMode::right: return "right";
    case ConvergenceMode::simple: return "simple";
  }
  return "?";
}

ConvergenceMode parse_convergence_mode(const std::string& text) {
  if (text == "left") return ConvergenceMode::left;
  if (text == "right") return ConvergenceMode::right;
  if (text == "simple") return ConvergenceMode::simple;
  throw std::invalid_argument("unknown convergence mode '" + text + "'");
}

ValidationReport validate_groupoid(const FiniteGroupoid& g) {
  ValidationReport report("groupoid");
  const std::size_t n = g.size();
  auto nm = [&](ArrowId a) { return g.name(a); };

  bool inverses_compose = true;
  for (ArrowId a = 0; a < n; ++a) {
    const ArrowId ai = g.inverse(a);
    const bool ok = g.composable(a, ai) && g.composable(ai, a);
    inverses_compose = inverses_compose && ok;
    report.check_lazy(ok, "a a^-1 and a^-1 a are defined", [&] { return nm(a); });
    report.check_lazy(g.inverse(ai) == a, "inverse is an involution", [&] { return nm(a); });
  }

  for (ArrowId a = 0; a < n; ++a) {
    for (ArrowId b : g.right_partners(a)) {
      const ArrowId ab = g.compose(a, b);
      for (ArrowId c : g.right_partners(b)) {
        const ArrowId bc = g.compose(b, c);
        auto lhs = g.try_compose(a, bc);
        auto rhs = g.try_compose(ab, c);
        report.check_lazy(lhs && rhs, "composability closes under products",
                          [&] { return nm(a) + ", " + nm(b) + ", " + nm(c); });
        if (lhs && rhs)
          report.check_lazy(*lhs == *rhs, "associativity",
                            [&] { return nm(a) + ", " + nm(b) + ", " + nm(c); });
      }
      const ArrowId bi = g.inverse(b);
      auto abb = g.try_compose(ab, bi);
      report.check_lazy(abb && *abb == a, "right cancellation a b b^-1 = a",
                        [&] { return nm(a) + ", " + nm(b); });
      const ArrowId ai = g.inverse(a);
      auto aab = g.try_compose(ai, ab);
      report.check_lazy(aab && *aab == b, "left cancellation a^-1 a b = b",
                        [&] { return nm(a) + ", " + nm(b); });
    }
  }

  if (!inverses_compose) {
    report.note("objects not derived: some a^-1 a is undefined");
    return report;
  }

  // Derived source, target and identities.
  for (ArrowId a = 0; a < n; ++a) {
    const ArrowId s = g.alpha(a);
    const ArrowId t = g.omega(a);
    report.check_lazy(g.is_identity(s) && g.is_identity(t), "a^-1 a and a a^-1 are identities",
                      [&] { return nm(a); });
    auto right_unit = g.try_compose(a, s);
    auto left_unit = g.try_compose(t, a);
    report.check_lazy(right_unit && left_unit && *right_unit == a && *left_unit == a,
                      "identities are units", [&] { return nm(a); });
  }
  for (ArrowId a = 0; a < n; ++a) {
    for (ArrowId b = 0; b < n; ++b) {
      const bool declared = g.composable(a, b);
      const bool matching = g.alpha(a) == g.omega(b);
      report.check_lazy(declared == matching, "composable exactly when source meets target",
                        [&] { return nm(a) + ", " + nm(b); });
      if (declared) {
        const ArrowId ab = g.compose(a, b);
        report.check_lazy(g.omega(ab) == g.omega(a) && g.alpha(ab) == g.alpha(b),
                          "source and target of a product", [&] { return nm(a) + ", " + nm(b); });
      }
    }
  }
  std::string objs;
  for (ArrowId x : g.objects()) objs += (objs.empty() ? "" : ", ") + nm(x);
  report.note("objects: {" + objs + "}");
  return report;
}

ValidationReport check_norm(const FiniteGroupoid& g, const Norm& d) {
  ValidationReport report("norm");
  if (d.size() != g.size()) {
    report.set_structural("norm has " + std::to_string(d.size()) + " values for " +
                          std::to_string(g.size()) + " arrows");
    return report;
  }
  for (ArrowId a = 0; a < g.size(); ++a) {
    if (d[a] < 0) {
      report.set_structural("negative norm at '" + g.name(a) + "': " + to_string(d[a]));
      return report;
    }
  }
  for (ArrowId a = 0; a < g.size(); ++a) {
    const bool zero = d[a] == 0;
    report.check_lazy(zero == g.is_identity(a), "zero exactly on identities", [&] {
      return g.name(a) + " has norm " + to_string(d[a]);
    });
    report.check_lazy(d[g.inverse(a)] == d[a], "inversion invariant", [&] { return g.name(a); });
    for (ArrowId b : g.right_partners(a)) {
      const ArrowId ab = g.compose(a, b);
      report.check_lazy(d[ab] <= d[a] + d[b], "subadditive", [&] {
        return "d(" + g.name(a) + " " + g.name(b) + ") = " + to_string(d[ab]) + " > " +
               to_string(d[a]) + " + " + to_string(d[b]);
      });
    }
  }
  return report;
}

bool check_separability(const FiniteGroupoid& g, const Norm& d) {
  for (ArrowId a = 0; a < g.size(); ++a)
    if (d.at(a) == 0 && g.alpha(a) != g.omega(a)) return false;
  return true;
}

ObjectDistance object_distance(const FiniteGroupoid& g, const Norm& d) {
  const auto objs = g.objects();
  std::map<ArrowId, std::size_t> pos;
  for (std::size_t i = 0; i < objs.size(); ++i) pos[objs[i]] = i;
  const std::size_t m = objs.size();
  ObjectDistance dist(m, std::vector<std::optional<Rational>>(m));
  for (std::size_t i = 0; i < m; ++i) dist[i][i] = Rational(0);
  for (ArrowId a = 0; a < g.size(); ++a) {
    auto& cell = dist[pos[g.alpha(a)]][pos[g.omega(a)]];
    if (!cell || d.at(a) < *cell) cell = d.at(a);
  }
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t i = 0; i < m; ++i) {
      if (!dist[i][k]) continue;
      for (std::size_t j = 0; j < m; ++j) {
        if (!dist[k][j]) continue;
        Rational via = *dist[i][k] + *dist[k][j];
        if (!dist[i][j] || via < *dist[i][j]) dist[i][j] = via;
      }
    }
  return dist;
}

ArrowId dif(const FiniteGroupoid& g, ArrowId a, ArrowId b) {
  if (g.alpha(a) != g.alpha(b))
    throw PreconditionError("dif: '" + g.name(a) + "' and '" + g.name(b) +
                            "' have different sources");
  return g.compose(a, g.inverse(b));
}

ValidationReport check_seminorm_family(const FiniteGroupoid& g, const SeminormFamily& family) {
  ValidationReport report("seminorm family");
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& rho = family[i];
    if (rho.size() != g.size()) {
      report.set_structural("seminorm " + std::to_string(i) + " has wrong length");
      return report;
    }
    for (ArrowId a = 0; a < g.size(); ++a)
      if (rho[a] < 0) {
        report.set_structural("negative seminorm value at '" + g.name(a) + "'");
        return report;
      }
  }
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& rho = family[i];
    const std::string tag = "member " + std::to_string(i) + ": ";
    for (ArrowId a = 0; a < g.size(); ++a) {
      if (g.is_identity(a))
        report.check_lazy(rho[a] == 0, "vanishes on identities", [&] { return tag + g.name(a); });
      report.check_lazy(rho[g.inverse(a)] == rho[a], "inversion invariant",
                        [&] { return tag + g.name(a); });
      for (ArrowId b : g.right_partners(a))
        report.check_lazy(rho[g.compose(a, b)] <= rho[a] + rho[b], "subadditive",
                          [&] { return tag + g.name(a) + ", " + g.name(b); });
    }
  }
  for (ArrowId a = 0; a < g.size(); ++a) {
    if (g.is_identity(a)) continue;
    bool separated = std::any_of(family.begin(), family.end(),
                                 [&](const Norm& rho) { return rho[a] != 0; });
    report.check_lazy(separated, "joint kernel is the identities",
                      [&] { return g.name(a) + " is not separated"; });
  }
  return report;
}

ValidationReport check_morphism(const FiniteGroupoid& from, const FiniteGroupoid& to,
                                const GroupoidMorphism& f) {
  ValidationReport report("groupoid morphism");
  if (f.arrow_map.size() != from.size()) {
    report.set_structural("arrow map has wrong length");
    return report;
  }
  for (ArrowId a = 0; a < from.size(); ++a)
    if (f(a) >= to.size()) {
      report.set_structural("image of '" + from.name(a) + "' lies outside the target");
      return report;
    }
  for (ArrowId a = 0; a < from.size(); ++a) {
    const ArrowId fa = f(a);
    report.check_lazy(f(from.alpha(a)) == to.alpha(fa), "commutes with source",
                      [&] { return from.name(a); });
    report.check_lazy(f(from.omega(a)) == to.omega(fa), "commutes with target",
                      [&] { return from.name(a); });
    if (from.is_identity(a))
      report.check_lazy(to.is_identity(fa), "sends identities to identities",
                        [&] { return from.name(a); });
    report.check_lazy(f(from.inverse(a)) == to.inverse(fa), "commutes with inversion",
                      [&] { return from.name(a); });
    for (ArrowId b : from.right_partners(a)) {
      auto prod = to.try_compose(fa, f(b));
      report.check_lazy(prod && *prod == f(from.compose(a, b)), "preserves products",
                        [&] { return from.name(a) + ", " + from.name(b); });
    }
  }
  return report;
}

SeminormsFromMorphisms seminorms_from_morphisms(const FiniteGroupoid& g, const FiniteGroupoid& h,
                                                const Norm& d_h,
                                                const std::vector<GroupoidMorphism>& morphisms) {
  SeminormsFromMorphisms out{{}, ValidationReport("seminorms from morphisms")};
  for (std::size_t i = 0; i < morphisms.size(); ++i) {
    const auto& f = morphisms[i];
    out.report.merge(check_morphism(g, h, f), "morphism " + std::to_string(i));
    Norm rho(g.size());
    for (ArrowId a = 0; a < g.size(); ++a) rho[a] = d_h.at(f(a));
    out.family.push_back(std::move(rho));
  }
  if (out.report.structural()) return out;
  out.report.merge(check_seminorm_family(g, out.family));
  return out;
}

namespace detail {
bool eventually_small(const std::vector<double>& values, double tol) {
  if (values.empty()) return false;
  const std::size_t n = values.size();
  const std::size_t q = std::max<std::size_t>(1, (n + 3) / 4);
  double head = 0.0;
  double tail = 0.0;
  for (std::size_t i = 0; i < q; ++i) {
    head += values[i];
    tail += values[n - q + i];
    if (!(values[n - q + i] < tol)) return false;
  }
  return tail <= head;
}
}  // namespace detail

CategoryWithInverses<ArrowId, ArrowId> as_category(const FiniteGroupoid& g, const Norm* d) {
  CategoryWithInverses<ArrowId, ArrowId> c;
  c.arrows.resize(g.size());
  std::iota(c.arrows.begin(), c.arrows.end(), ArrowId{0});
  c.source = [&g](ArrowId a) { return g.alpha(a); };
  c.target = [&g](ArrowId a) { return g.omega(a); };
  c.compose = [&g](ArrowId a, ArrowId b) { return g.compose(a, b); };
  c.inverse = [&g](ArrowId a) { return g.inverse(a); };
  if (d) c.norm = [d](ArrowId a) { return d->at(a); };
  c.describe = [&g](ArrowId a) { return g.name(a); };
  return c;
}

}  // namespace ngd
