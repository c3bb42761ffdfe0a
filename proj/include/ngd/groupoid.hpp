#pragma once

#include "ngd/rational.hpp"
#include "ngd/report.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace ngd {

using ArrowId = std::size_t;

/// A groupoid given purely by its arrows: a partial composition table and an
/// inversion map. Objects are recovered as the products a^-1 a.
///
/// The table is stored densely; `compose(g, h)` is the product gh, defined
/// when the source of g equals the target of h.
class FiniteGroupoid {
 public:
  using Arrow = ArrowId;
  using Triple = std::tuple<ArrowId, ArrowId, ArrowId>;

  FiniteGroupoid() = default;
  /// Throws StructuralError if an index is out of range or a product is
  /// declared twice with different results.
  FiniteGroupoid(std::vector<std::string> names, const std::vector<Triple>& products,
                 std::vector<ArrowId> inverse);

  /// Same, with arrows referred to by name.
  static FiniteGroupoid from_names(
      std::vector<std::string> names,
      const std::vector<std::tuple<std::string, std::string, std::string>>& products,
      const std::vector<std::pair<std::string, std::string>>& inverse);

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(ArrowId a) const { return names_.at(a); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::optional<ArrowId> find(const std::string& name) const;

  bool composable(ArrowId g, ArrowId h) const { return table_[g * size() + h] != kUndefined; }
  std::optional<ArrowId> try_compose(ArrowId g, ArrowId h) const;
  /// Throws PreconditionError when (g, h) is not composable.
  ArrowId compose(ArrowId g, ArrowId h) const;
  ArrowId inverse(ArrowId a) const { return inverse_.at(a); }

  /// a^-1 a and a a^-1, as identity arrows. Throw StructuralError when the
  /// table lacks the product.
  ArrowId alpha(ArrowId a) const;
  ArrowId omega(ArrowId a) const;
  bool is_identity(ArrowId a) const;
  /// Identity arrows in increasing id order.
  std::vector<ArrowId> objects() const;
  /// Arrows h with (g, h) composable.
  const std::vector<ArrowId>& right_partners(ArrowId g) const { return partners_.at(g); }

  std::vector<Triple> products() const;

 private:
  static constexpr std::size_t kUndefined = static_cast<std::size_t>(-1);
  std::vector<std::string> names_;
  std::vector<std::size_t> table_;
  std::vector<ArrowId> inverse_;
  std::vector<std::vector<ArrowId>> partners_;
};

/// Exact norm on a finite groupoid, indexed by arrow id.
using Norm = std::vector<Rational>;
using SeminormFamily = std::vector<Norm>;

/// Arrow map between two finite groupoids; the object map is its restriction
/// to identity arrows.
struct GroupoidMorphism {
  std::vector<ArrowId> arrow_map;
  ArrowId operator()(ArrowId a) const { return arrow_map.at(a); }
};

enum class ConvergenceMode { left, right, simple };
std::string to_string(ConvergenceMode mode);
ConvergenceMode parse_convergence_mode(const std::string& text);

/// Exhaustive check of the arrow-only groupoid laws: associativity with
/// closure of composability, existence of a a^-1 and a^-1 a, the
/// cancellation laws, involutive inversion, and the derived source/target
/// laws. Out-of-range data surfaces as a structural error in the report.
ValidationReport validate_groupoid(const FiniteGroupoid& g);

/// Exhaustive check of a norm: zero exactly on identities, subadditive on
/// composable pairs, invariant under inversion. Negative values are a
/// structural error.
ValidationReport check_norm(const FiniteGroupoid& g, const Norm& d);

/// Distinct objects cannot be joined by norm-zero arrows. Over a finite
/// arrow set the infimum is a minimum, so this is exact.
bool check_separability(const FiniteGroupoid& g, const Norm& d);

/// Objects in the order of `g.objects()`; entries are nullopt where no arrow
/// connects the two objects.
using ObjectDistance = std::vector<std::vector<std::optional<Rational>>>;
ObjectDistance object_distance(const FiniteGroupoid& g, const Norm& d);

/// g h^-1 for arrows with a common source.
ArrowId dif(const FiniteGroupoid& g, ArrowId a, ArrowId b);

/// Every member vanishes on identities, the joint kernel is exactly the
/// identities, and each member is subadditive and inversion invariant.
ValidationReport check_seminorm_family(const FiniteGroupoid& g, const SeminormFamily& family);

/// Checks that F commutes with source, target, identities, inversion and
/// products.
ValidationReport check_morphism(const FiniteGroupoid& from, const FiniteGroupoid& to,
                                const GroupoidMorphism& f);

struct SeminormsFromMorphisms {
  SeminormFamily family;
  ValidationReport report;
};
/// Pulls the norm of (H, d) back along each morphism. The report carries the
/// seminorm family checks, including a separation failure when some
/// non-identity arrow is sent to identities by every morphism.
SeminormsFromMorphisms seminorms_from_morphisms(const FiniteGroupoid& g, const FiniteGroupoid& h,
                                                const Norm& d_h,
                                                const std::vector<GroupoidMorphism>& morphisms);

namespace detail {
/// "Eventually below tol" means every entry of the last quarter (at least
/// one entry) is below tol, and the sequence does not trend upwards: the
/// last-quarter mean does not exceed the first-quarter mean.
bool eventually_small(const std::vector<double>& values, double tol);
}  // namespace detail

/// Groupoid adapter used by `converges`: FiniteGroupoid together with a norm.
struct NormedFiniteGroupoid {
  using Arrow = ArrowId;
  const FiniteGroupoid& g;
  const Norm& d;

  bool composable(Arrow a, Arrow b) const { return g.composable(a, b); }
  Arrow compose(Arrow a, Arrow b) const { return g.compose(a, b); }
  Arrow inverse(Arrow a) const { return g.inverse(a); }
  double norm(Arrow a) const { return to_double(d.at(a)); }
  /// Pairs (p, q) with q a_n p = a. Enumerates p from alpha(a) to alpha(a_n).
  std::vector<std::pair<Arrow, Arrow>> simple_factors(Arrow an, Arrow a) const {
    std::vector<std::pair<Arrow, Arrow>> out;
    for (Arrow p = 0; p < g.size(); ++p) {
      if (!g.composable(an, p) || g.alpha(p) != g.alpha(a)) continue;
      Arrow q = g.compose(g.compose(a, g.inverse(p)), g.inverse(an));
      out.emplace_back(p, q);
    }
    return out;
  }
};

/// Convergence of a sequence of arrows to `a` in one of the three modes.
/// Left: d(a_n^-1 a) eventually below tol. Right: d(a_n a^-1) likewise.
/// Simple: the cheapest factorization q a_n p = a has d(p) + d(q) eventually
/// below tol. Throws PreconditionError if a required product is undefined.
template <typename G>
bool converges(const G& grp, const std::vector<typename G::Arrow>& seq,
               const typename G::Arrow& a, ConvergenceMode mode, double tol) {
  std::vector<double> values;
  values.reserve(seq.size());
  for (std::size_t n = 0; n < seq.size(); ++n) {
    const auto& an = seq[n];
    switch (mode) {
      case ConvergenceMode::left: {
        auto inv = grp.inverse(an);
        if (!grp.composable(inv, a))
          throw PreconditionError("left convergence: a_n^-1 a undefined at index " +
                                  std::to_string(n));
        values.push_back(grp.norm(grp.compose(inv, a)));
        break;
      }
      case ConvergenceMode::right: {
        auto inv = grp.inverse(a);
        if (!grp.composable(an, inv))
          throw PreconditionError("right convergence: a_n a^-1 undefined at index " +
                                  std::to_string(n));
        values.push_back(grp.norm(grp.compose(an, inv)));
        break;
      }
      case ConvergenceMode::simple: {
        auto factors = grp.simple_factors(an, a);
        if (factors.empty()) {
          values.push_back(std::numeric_limits<double>::infinity());
          break;
        }
        double best = std::numeric_limits<double>::infinity();
        for (const auto& [p, q] : factors) best = std::min(best, grp.norm(p) + grp.norm(q));
        values.push_back(best);
        break;
      }
    }
  }
  return detail::eventually_small(values, tol);
}

/// A small category with an involutive antimorphism, given by a sample of
/// arrows and its structure maps. Objects are compared with operator==.
template <typename Arrow, typename Object>
struct CategoryWithInverses {
  std::vector<Arrow> arrows;
  std::function<Object(const Arrow&)> source;
  std::function<Object(const Arrow&)> target;
  /// compose(g, h) = gh, defined when source(g) == target(h).
  std::function<Arrow(const Arrow&, const Arrow&)> compose;
  std::function<Arrow(const Arrow&)> inverse;
  std::function<Rational(const Arrow&)> norm;                 // optional
  std::vector<std::function<Rational(const Arrow&)>> seminorms;  // optional
  std::function<std::string(const Arrow&)> describe;          // optional
};

namespace detail {
template <typename Arrow>
bool among_units(const std::vector<Arrow>& units, const Arrow& g) {
  return std::find(units.begin(), units.end(), g) != units.end();
}
}  // namespace detail

/// Checks the algebraic clauses (source/target of products, associativity,
/// involutive antimorphism) over all composable pairs and triples of the
/// arrow sample, then the norm clauses when a norm is present and the
/// seminorm clauses when seminorms are present. The zero-set clauses compare
/// against the products h^-1 h of sampled arrows.
template <typename Arrow, typename Object>
ValidationReport check_category_with_inverses(const CategoryWithInverses<Arrow, Object>& c) {
  ValidationReport report("category with inverses");
  const auto& arrows = c.arrows;
  auto show = [&](const Arrow& a) { return c.describe ? c.describe(a) : std::string("<arrow>"); };
  auto composable = [&](const Arrow& g, const Arrow& h) { return c.source(g) == c.target(h); };

  for (const auto& g : arrows) {
    const Arrow gi = c.inverse(g);
    report.check_lazy(c.inverse(gi) == g, "inverse is an involution", [&] { return show(g); });
    report.check_lazy(c.source(gi) == c.target(g) && c.target(gi) == c.source(g),
                      "inverse swaps source and target", [&] { return show(g); });
  }
  for (const auto& g : arrows) {
    for (const auto& h : arrows) {
      if (!composable(g, h)) continue;
      const Arrow gh = c.compose(g, h);
      report.check_lazy(c.source(gh) == c.source(h) && c.target(gh) == c.target(g),
                        "source and target of a product",
                        [&] { return show(g) + " ; " + show(h); });
      report.check_lazy(c.inverse(gh) == c.compose(c.inverse(h), c.inverse(g)),
                        "inverse reverses products", [&] { return show(g) + " ; " + show(h); });
      for (const auto& k : arrows) {
        if (!composable(h, k)) continue;
        report.check_lazy(c.compose(gh, k) == c.compose(g, c.compose(h, k)), "associativity",
                          [&] { return show(g) + " ; " + show(h) + " ; " + show(k); });
      }
    }
  }

  std::vector<Arrow> units;
  if (c.norm || !c.seminorms.empty())
    for (const auto& h : arrows) units.push_back(c.compose(c.inverse(h), h));

  if (c.norm) {
    for (const auto& u : units)
      report.check_lazy(c.norm(u) == 0, "norm vanishes on every h^-1 h", [&] { return show(u); });
    for (const auto& g : arrows) {
      const Rational dg = c.norm(g);
      if (dg < 0) {
        report.set_structural("negative norm at " + show(g));
        return report;
      }
      if (dg == 0)
        report.check_lazy(detail::among_units(units, g), "norm zero only on h^-1 h",
                          [&] { return show(g); });
      report.check_lazy(c.norm(c.inverse(g)) == dg, "norm inversion invariant",
                        [&] { return show(g); });
      for (const auto& h : arrows) {
        if (!composable(g, h)) continue;
        report.check_lazy(c.norm(c.compose(g, h)) <= dg + c.norm(h), "norm subadditive",
                          [&] { return show(g) + " ; " + show(h); });
      }
    }
  }

  for (std::size_t i = 0; i < c.seminorms.size(); ++i) {
    const auto& rho = c.seminorms[i];
    const std::string tag = "seminorm " + std::to_string(i) + ": ";
    for (const auto& u : units)
      report.check_lazy(rho(u) == 0, tag + "vanishes on every h^-1 h", [&] { return show(u); });
    for (const auto& g : arrows) {
      report.check_lazy(rho(c.inverse(g)) == rho(g), tag + "inversion invariant",
                        [&] { return show(g); });
      for (const auto& h : arrows) {
        if (!composable(g, h)) continue;
        report.check_lazy(rho(c.compose(g, h)) <= rho(g) + rho(h), tag + "subadditive",
                          [&] { return show(g) + " ; " + show(h); });
      }
    }
  }
  if (!c.seminorms.empty()) {
    for (const auto& g : arrows) {
      bool all_zero = std::all_of(c.seminorms.begin(), c.seminorms.end(),
                                  [&](const auto& rho) { return rho(g) == 0; });
      if (all_zero)
        report.check_lazy(detail::among_units(units, g), "joint seminorm kernel within h^-1 h",
                          [&] { return show(g); });
    }
  }
  return report;
}

/// A finite groupoid viewed as a category with inverses; objects are the
/// identity arrows.
CategoryWithInverses<ArrowId, ArrowId> as_category(const FiniteGroupoid& g,
                                                   const Norm* d = nullptr);

}  // namespace ngd
