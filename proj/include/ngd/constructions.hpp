#pragma once

#include "ngd/groupoid.hpp"

#include <Eigen/Core>

#include <random>
#include <string>
#include <utility>
#include <vector>

namespace ngd {

using RationalMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using RationalVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

/// Entrywise equality. Matrix operator== does not compile for the rational
/// scalar under this Boost version.
bool exactly_equal(const RationalMatrix& a, const RationalMatrix& b);

struct FiniteMetricSpace {
  std::vector<std::string> points;
  RationalMatrix dist;

  std::size_t size() const { return points.size(); }
};

/// Zero diagonal, positive off the diagonal, symmetric, triangle inequality.
ValidationReport check_metric(const FiniteMetricSpace& m);

/// Shortest-path closure of random rational edge weights in [1/4, 3], so the
/// result is always a metric. Points are named p0, p1, ...
FiniteMetricSpace random_metric_space(std::mt19937_64& rng, std::size_t n);

/// Points on a line at the given rational coordinates.
FiniteMetricSpace line_metric(const std::vector<Rational>& coords);

struct NormedGroupoid {
  FiniteGroupoid groupoid;
  Norm norm;
};

/// Arrows X x X with (x,y)(y,z) = (x,z) and norm d(x,y). Arrow (x_i, x_j)
/// has id i * n + j.
NormedGroupoid pair_groupoid(const FiniteMetricSpace& m);
inline ArrowId pair_arrow(std::size_t n, std::size_t i, std::size_t j) { return i * n + j; }

struct DoubleGroupoid {
  NormedGroupoid normed;
  /// The pair (g, h) behind each arrow of the double groupoid.
  std::vector<std::pair<ArrowId, ArrowId>> pairs;
  /// (g, h) -> g h^-1 into the base groupoid.
  GroupoidMorphism dif;
};

/// Arrows {(g,h) : alpha(g) = alpha(h)}, (g,h)(h,l) = (g,l), (g,h)^-1 = (h,g),
/// norm d(g h^-1).
DoubleGroupoid double_groupoid(const FiniteGroupoid& g, const Norm& d);

/// Checks that `dbl.dif` is a groupoid morphism that preserves norms.
ValidationReport check_dif_isometry(const FiniteGroupoid& g, const Norm& d,
                                    const DoubleGroupoid& dbl);

struct Fiber {
  ArrowId object;                // identity arrow of the base object x
  std::vector<ArrowId> arrows;   // alpha^-1(x)
  RationalMatrix dist;           // indexed like `arrows`
  std::size_t index_of(ArrowId a) const;
};

struct FiberDistanceFamily {
  std::vector<Fiber> fibers;
  const Fiber& fiber_of_object(ArrowId object) const;
  Rational distance(const FiniteGroupoid& g, ArrowId a, ArrowId b) const;
};

/// d_x(g, h) = d(g h^-1) on each source fiber.
FiberDistanceFamily fiber_distances(const FiniteGroupoid& g, const Norm& d);

/// Right translations are isometries between fibers:
/// d_{omega(u)}(g, h) = d_{alpha(u)}(g u, h u).
ValidationReport check_right_invariance(const FiniteGroupoid& g, const FiberDistanceFamily& f);

/// d(g) = d_{alpha(g)}(g, alpha(g)). Throws PreconditionError naming a
/// witness when the family is not right invariant.
Norm norm_from_fiber_distances(const FiniteGroupoid& g, const FiberDistanceFamily& f);

/// A finite group acting on a finite set of points.
struct GroupAction {
  std::vector<std::string> elements;
  std::vector<std::vector<std::size_t>> mul;  // mul[h][g] = hg
  std::vector<std::vector<std::size_t>> act;  // act[g][x] = g(x)

  std::size_t identity() const;
  std::size_t inverse(std::size_t g) const;
  std::size_t points() const { return act.empty() ? 0 : act.front().size(); }
};

/// Group laws, e acting trivially, compatibility (hg)(x) = h(g(x)).
ValidationReport check_group_action(const GroupAction& a);
bool is_free(const GroupAction& a);

struct ActionGroupoid {
  NormedGroupoid normed;
  /// (x, g) behind each arrow; id = x * |G| + g.
  std::vector<std::pair<std::size_t, std::size_t>> labels;
};

/// Arrows X x G with source x, target g(x), (g(x),h)(x,g) = (x,hg), and norm
/// dist(g(x), x).
ActionGroupoid action_groupoid(const GroupAction& a, const FiniteMetricSpace& base);

struct DoubleActionGroupoid {
  FiniteGroupoid groupoid;
  struct Label {
    ArrowId g, h, u;
  };
  std::vector<Label> labels;
  /// d~(g u^-1, h u^-1) = d~(g, h) over all admissible triples.
  ValidationReport isometry;
};

/// Arrows (g,h,u) with a common source; (g u^-1, h u^-1, v)(g,h,u) = (g,h,vu).
DoubleActionGroupoid double_action_groupoid(const FiniteGroupoid& g, const Norm& d);

}  // namespace ngd
