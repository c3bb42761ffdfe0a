#include "ngd/constructions.hpp"

#include <map>

namespace ngd {

bool exactly_equal(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (a(i, j) != b(i, j)) return false;
  return true;
}

ValidationReport check_metric(const FiniteMetricSpace& m) {
  ValidationReport report("metric space");
  const auto n = static_cast<Eigen::Index>(m.size());
  if (m.dist.rows() != n || m.dist.cols() != n) {
    report.set_structural("distance matrix is not " + std::to_string(n) + "x" + std::to_string(n));
    return report;
  }
  auto pt = [&](Eigen::Index i) { return m.points[static_cast<std::size_t>(i)]; };
  for (Eigen::Index i = 0; i < n; ++i) {
    report.check_lazy(m.dist(i, i) == 0, "zero on the diagonal", [&] { return pt(i); });
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j)
        report.check_lazy(m.dist(i, j) > 0, "positive off the diagonal",
                          [&] { return pt(i) + ", " + pt(j); });
      report.check_lazy(m.dist(i, j) == m.dist(j, i), "symmetric",
                        [&] { return pt(i) + ", " + pt(j); });
      for (Eigen::Index k = 0; k < n; ++k)
        report.check_lazy(m.dist(i, k) <= m.dist(i, j) + m.dist(j, k), "triangle inequality",
                          [&] { return pt(i) + ", " + pt(j) + ", " + pt(k); });
    }
  }
  return report;
}

FiniteMetricSpace random_metric_space(std::mt19937_64& rng, std::size_t n) {
  FiniteMetricSpace m;
  for (std::size_t i = 0; i < n; ++i) m.points.push_back("p" + std::to_string(i));
  const auto N = static_cast<Eigen::Index>(n);
  m.dist = RationalMatrix::Zero(N, N);
  std::uniform_int_distribution<int> den(1, 8);
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index j = i + 1; j < N; ++j) {
      const int q = den(rng);
      std::uniform_int_distribution<int> num((q + 3) / 4, 3 * q);
      m.dist(i, j) = m.dist(j, i) = Rational(num(rng), q);
    }
  for (Eigen::Index k = 0; k < N; ++k)
    for (Eigen::Index i = 0; i < N; ++i)
      for (Eigen::Index j = 0; j < N; ++j)
        if (m.dist(i, k) + m.dist(k, j) < m.dist(i, j)) m.dist(i, j) = m.dist(i, k) + m.dist(k, j);
  return m;
}

FiniteMetricSpace line_metric(const std::vector<Rational>& coords) {
  FiniteMetricSpace m;
  const auto n = static_cast<Eigen::Index>(coords.size());
  m.dist = RationalMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m.points.push_back(to_string(coords[static_cast<std::size_t>(i)]));
    for (Eigen::Index j = 0; j < n; ++j) {
      Rational diff = coords[static_cast<std::size_t>(i)] - coords[static_cast<std::size_t>(j)];
      m.dist(i, j) = diff < 0 ? Rational(-diff) : diff;
    }
  }
  return m;
}

NormedGroupoid pair_groupoid(const FiniteMetricSpace& m) {
  const std::size_t n = m.size();
  std::vector<std::string> names;
  std::vector<FiniteGroupoid::Triple> prods;
  std::vector<ArrowId> inv;
  Norm d;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      names.push_back("(" + m.points[i] + "," + m.points[j] + ")");
      inv.push_back(pair_arrow(n, j, i));
      d.push_back(m.dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
      for (std::size_t k = 0; k < n; ++k)
        prods.emplace_back(pair_arrow(n, i, j), pair_arrow(n, j, k), pair_arrow(n, i, k));
    }
  return {FiniteGroupoid(std::move(names), prods, std::move(inv)), std::move(d)};
}

DoubleGroupoid double_groupoid(const FiniteGroupoid& g, const Norm& d) {
  DoubleGroupoid out;
  std::map<std::pair<ArrowId, ArrowId>, ArrowId> index;
  std::vector<std::string> names;
  for (ArrowId a = 0; a < g.size(); ++a)
    for (ArrowId b = 0; b < g.size(); ++b)
      if (g.alpha(a) == g.alpha(b)) {
        index[{a, b}] = out.pairs.size();
        out.pairs.emplace_back(a, b);
        names.push_back("(" + g.name(a) + "|" + g.name(b) + ")");
      }
  std::vector<FiniteGroupoid::Triple> prods;
  std::vector<ArrowId> inv;
  Norm dt;
  for (const auto& [a, b] : out.pairs) {
    inv.push_back(index.at({b, a}));
    const ArrowId ab = g.compose(a, g.inverse(b));
    dt.push_back(d.at(ab));
    out.dif.arrow_map.push_back(ab);
    for (ArrowId c = 0; c < g.size(); ++c)
      if (g.alpha(c) == g.alpha(b)) prods.emplace_back(index.at({a, b}), index.at({b, c}), index.at({a, c}));
  }
  out.normed = {FiniteGroupoid(std::move(names), prods, std::move(inv)), std::move(dt)};
  return out;
}

ValidationReport check_dif_isometry(const FiniteGroupoid& g, const Norm& d,
                                    const DoubleGroupoid& dbl) {
  ValidationReport report("dif is a norm preserving morphism");
  report.merge(check_morphism(dbl.normed.groupoid, g, dbl.dif));
  for (ArrowId a = 0; a < dbl.normed.groupoid.size(); ++a)
    report.check_lazy(dbl.normed.norm[a] == d.at(dbl.dif(a)), "dif preserves norms",
                      [&] { return dbl.normed.groupoid.name(a); });
  return report;
}

std::size_t Fiber::index_of(ArrowId a) const {
  auto it = std::find(arrows.begin(), arrows.end(), a);
  if (it == arrows.end()) throw PreconditionError("arrow not in this fiber");
  return static_cast<std::size_t>(it - arrows.begin());
}

const Fiber& FiberDistanceFamily::fiber_of_object(ArrowId object) const {
  for (const auto& f : fibers)
    if (f.object == object) return f;
  throw PreconditionError("no fiber over the requested object");
}

Rational FiberDistanceFamily::distance(const FiniteGroupoid& g, ArrowId a, ArrowId b) const {
  if (g.alpha(a) != g.alpha(b)) throw PreconditionError("arrows lie in different fibers");
  const auto& f = fiber_of_object(g.alpha(a));
  return f.dist(static_cast<Eigen::Index>(f.index_of(a)), static_cast<Eigen::Index>(f.index_of(b)));
}

FiberDistanceFamily fiber_distances(const FiniteGroupoid& g, const Norm& d) {
  FiberDistanceFamily out;
  for (ArrowId x : g.objects()) {
    Fiber f;
    f.object = x;
    for (ArrowId a = 0; a < g.size(); ++a)
      if (g.alpha(a) == x) f.arrows.push_back(a);
    const auto k = static_cast<Eigen::Index>(f.arrows.size());
    f.dist = RationalMatrix::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j < k; ++j)
        f.dist(i, j) = d.at(g.compose(f.arrows[static_cast<std::size_t>(i)],
                                      g.inverse(f.arrows[static_cast<std::size_t>(j)])));
    out.fibers.push_back(std::move(f));
  }
  return out;
}

ValidationReport check_right_invariance(const FiniteGroupoid& g, const FiberDistanceFamily& fam) {
  ValidationReport report("right translations are fiber isometries");
  for (ArrowId u = 0; u < g.size(); ++u) {
    const auto& top = fam.fiber_of_object(g.omega(u));
    for (ArrowId a : top.arrows)
      for (ArrowId b : top.arrows) {
        const Rational lhs = fam.distance(g, a, b);
        const Rational rhs = fam.distance(g, g.compose(a, u), g.compose(b, u));
        report.check_lazy(lhs == rhs, "right invariance", [&] {
          return "u=" + g.name(u) + " g=" + g.name(a) + " h=" + g.name(b) + ": " + to_string(lhs) +
                 " vs " + to_string(rhs);
        });
      }
  }
  return report;
}

Norm norm_from_fiber_distances(const FiniteGroupoid& g, const FiberDistanceFamily& fam) {
  auto inv = check_right_invariance(g, fam);
  if (!inv.passed())
    throw PreconditionError("fiber distances are not right invariant: " +
                            (inv.witnesses().empty() ? inv.structural_message()
                                                     : inv.witnesses().front().witness));
  Norm d(g.size());
  for (ArrowId a = 0; a < g.size(); ++a) d[a] = fam.distance(g, a, g.alpha(a));
  return d;
}

std::size_t GroupAction::identity() const {
  for (std::size_t e = 0; e < elements.size(); ++e) {
    bool unit = true;
    for (std::size_t g = 0; g < elements.size() && unit; ++g)
      unit = mul[e][g] == g && mul[g][e] == g;
    if (unit) return e;
  }
  throw StructuralError("group has no identity element");
}

std::size_t GroupAction::inverse(std::size_t g) const {
  const std::size_t e = identity();
  for (std::size_t h = 0; h < elements.size(); ++h)
    if (mul[h][g] == e && mul[g][h] == e) return h;
  throw StructuralError("element '" + elements.at(g) + "' has no inverse");
}

ValidationReport check_group_action(const GroupAction& a) {
  ValidationReport report("group action");
  const std::size_t n = a.elements.size();
  if (a.mul.size() != n || a.act.size() != n) {
    report.set_structural("table sizes do not match the element count");
    return report;
  }
  for (const auto& row : a.mul)
    for (std::size_t v : row)
      if (row.size() != n || v >= n) {
        report.set_structural("multiplication table leaves the group");
        return report;
      }
  for (const auto& row : a.act)
    for (std::size_t v : row)
      if (row.size() != a.points() || v >= a.points()) {
        report.set_structural("action table leaves the point set");
        return report;
      }
  std::size_t e = 0;
  try {
    e = a.identity();
    for (std::size_t g = 0; g < n; ++g) (void)a.inverse(g);
  } catch (const StructuralError& err) {
    report.set_structural(err.what());
    return report;
  }
  for (std::size_t x = 0; x < a.points(); ++x)
    report.check(a.act[e][x] == x, "identity acts trivially", "point " + std::to_string(x));
  for (std::size_t h = 0; h < n; ++h)
    for (std::size_t g = 0; g < n; ++g) {
      for (std::size_t k = 0; k < n; ++k)
        report.check_lazy(a.mul[a.mul[h][g]][k] == a.mul[h][a.mul[g][k]], "associativity",
                          [&] { return a.elements[h] + ", " + a.elements[g] + ", " + a.elements[k]; });
      for (std::size_t x = 0; x < a.points(); ++x)
        report.check_lazy(a.act[a.mul[h][g]][x] == a.act[h][a.act[g][x]], "(hg)(x) = h(g(x))",
                          [&] { return a.elements[h] + ", " + a.elements[g] + ", " + std::to_string(x); });
    }
  return report;
}

bool is_free(const GroupAction& a) {
  const std::size_t e = a.identity();
  for (std::size_t g = 0; g < a.elements.size(); ++g)
    for (std::size_t x = 0; x < a.points(); ++x)
      if (g != e && a.act[g][x] == x) return false;
  return true;
}

ActionGroupoid action_groupoid(const GroupAction& a, const FiniteMetricSpace& base) {
  const std::size_t ng = a.elements.size();
  const std::size_t nx = a.points();
  if (base.size() != nx) throw PreconditionError("base metric space does not match the acted set");
  auto id = [&](std::size_t x, std::size_t g) { return x * ng + g; };
  ActionGroupoid out;
  std::vector<std::string> names;
  std::vector<FiniteGroupoid::Triple> prods;
  std::vector<ArrowId> inv;
  Norm d;
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t g = 0; g < ng; ++g) {
      const std::size_t gx = a.act[g][x];
      out.labels.emplace_back(x, g);
      names.push_back("(" + base.points[x] + "," + a.elements[g] + ")");
      inv.push_back(id(gx, a.inverse(g)));
      d.push_back(base.dist(static_cast<Eigen::Index>(gx), static_cast<Eigen::Index>(x)));
      for (std::size_t h = 0; h < ng; ++h) prods.emplace_back(id(gx, h), id(x, g), id(x, a.mul[h][g]));
    }
  out.normed = {FiniteGroupoid(std::move(names), prods, std::move(inv)), std::move(d)};
  return out;
}

DoubleActionGroupoid double_action_groupoid(const FiniteGroupoid& g, const Norm& d) {
  DoubleActionGroupoid out{{}, {}, ValidationReport("double action isometry")};
  std::map<std::tuple<ArrowId, ArrowId, ArrowId>, ArrowId> index;
  std::vector<std::string> names;
  for (ArrowId a = 0; a < g.size(); ++a)
    for (ArrowId b = 0; b < g.size(); ++b) {
      if (g.alpha(a) != g.alpha(b)) continue;
      for (ArrowId u = 0; u < g.size(); ++u) {
        if (g.alpha(u) != g.alpha(a)) continue;
        index[{a, b, u}] = out.labels.size();
        out.labels.push_back({a, b, u});
        names.push_back("(" + g.name(a) + "|" + g.name(b) + "|" + g.name(u) + ")");
      }
    }
  std::vector<FiniteGroupoid::Triple> prods;
  std::vector<ArrowId> inv;
  for (const auto& [a, b, u] : out.labels) {
    const ArrowId ui = g.inverse(u);
    const ArrowId au = g.compose(a, ui);
    const ArrowId bu = g.compose(b, ui);
    inv.push_back(index.at({au, bu, ui}));
    for (ArrowId v = 0; v < g.size(); ++v)
      if (g.alpha(v) == g.omega(u))
        prods.emplace_back(index.at({au, bu, v}), index.at({a, b, u}), index.at({a, b, g.compose(v, u)}));
    const Rational before = d.at(g.compose(a, g.inverse(b)));
    const Rational after = d.at(g.compose(au, g.inverse(bu)));
    out.isometry.check_lazy(before == after, "action by isometries",
                            [&] { return g.name(a) + ", " + g.name(b) + ", " + g.name(u); });
  }
  out.groupoid = FiniteGroupoid(std::move(names), prods, std::move(inv));
  return out;
}

}  // namespace ngd
