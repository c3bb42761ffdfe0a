#pragma once

#include "ngd/rational.hpp"
#include "ngd/report.hpp"

#include <Eigen/Core>

#include <cmath>
#include <optional>
#include <sstream>
#include <string>

namespace ngd {

template <typename S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

template <typename S>
Vec<S> vec(std::initializer_list<S> values) {
  Vec<S> v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (const auto& x : values) v(i++) = x;
  return v;
}

/// (R^n, +) with the linear dilations v -> eps v.
template <typename S>
struct EuclideanGroup {
  int dim = 1;
  static constexpr const char* name = "euclidean";

  Vec<S> identity() const { return Vec<S>::Zero(dim); }
  Vec<S> mul(const Vec<S>& a, const Vec<S>& b) const { return a + b; }
  Vec<S> inv(const Vec<S>& a) const { return -a; }
  Vec<S> dilate(const S& eps, const Vec<S>& a) const { return eps * a; }
  /// Half-widths of a box containing the gauge ball of radius r.
  Vec<S> box(const S& r) const { return Vec<S>::Constant(dim, r); }
};

/// The first Heisenberg group on R^3 with
/// (x1,y1,t1)(x2,y2,t2) = (x1+x2, y1+y2, t1+t2 + (x1 y2 - y1 x2)/2)
/// and the anisotropic dilations (eps x, eps y, eps^2 t).
template <typename S>
struct HeisenbergGroup {
  int dim = 3;
  static constexpr const char* name = "heisenberg";

  Vec<S> identity() const { return Vec<S>::Zero(3); }
  Vec<S> mul(const Vec<S>& a, const Vec<S>& b) const {
    Vec<S> r(3);
    r(0) = a(0) + b(0);
    r(1) = a(1) + b(1);
    r(2) = a(2) + b(2) + (a(0) * b(1) - a(1) * b(0)) / S(2);
    return r;
  }
  Vec<S> inv(const Vec<S>& a) const { return -a; }
  Vec<S> dilate(const S& eps, const Vec<S>& a) const {
    Vec<S> r(3);
    r(0) = eps * a(0);
    r(1) = eps * a(1);
    r(2) = eps * eps * a(2);
    return r;
  }
  Vec<S> box(const S& r) const {
    using std::max;
    Vec<S> b(3);
    b(0) = r;
    b(1) = r;
    b(2) = max(r, S(r * r / S(4)));
    return b;
  }
};

/// |v|, the Euclidean length of the coordinate vector.
struct EuclideanGauge {
  static constexpr const char* name = "euclidean norm";
  template <typename S>
  S operator()(const Vec<S>& v) const {
    if constexpr (std::is_same_v<S, Rational>) {
      // Exact on the line; elsewhere the square root goes through double.
      if (v.size() == 1) return abs(v(0));
      Rational sq = 0;
      for (Eigen::Index i = 0; i < v.size(); ++i) sq += v(i) * v(i);
      return Rational(std::sqrt(to_double(sq)));
    } else {
      using std::sqrt;
      return sqrt(S(v.squaredNorm()));
    }
  }
};

/// ((x^2 + y^2)^2 + 16 t^2)^(1/4), homogeneous for the Heisenberg dilations
/// and inducing a left-invariant metric.
struct CyganGauge {
  static constexpr const char* name = "cygan";
  template <typename S>
  S operator()(const Vec<S>& v) const {
    using std::sqrt;
    const S r2 = v(0) * v(0) + v(1) * v(1);
    return sqrt(sqrt(S(r2 * r2 + S(16) * v(2) * v(2))));
  }
};

/// g + c g^2 on top of a base gauge. Not homogeneous, so rescaled distances
/// converge only at rate eps; the quadratic term also breaks the triangle
/// inequality at large scale, so this is a limit fixture, not a metric.
template <typename Base>
struct BumpedGauge {
  Base base{};
  double c = 0.5;
  static constexpr const char* name = "bumped";
  template <typename S>
  S operator()(const Vec<S>& v) const {
    const S g = base(v);
    return g + S(c) * g * g;
  }
};

/// An arrow of the pair groupoid of a group: (target, source).
template <typename S>
struct PairArrow {
  Vec<S> target;
  Vec<S> source;
};

template <typename S>
std::string format_point(const Vec<S>& v) {
  std::ostringstream out;
  out.precision(17);
  out << "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out << ", ";
    if constexpr (std::is_same_v<S, Rational>)
      out << to_string(v(i));
    else
      out << static_cast<double>(v(i));
  }
  out << ")";
  return out.str();
}

template <typename S>
std::string format_arrow(const PairArrow<S>& a) {
  return "[" + format_point(a.target) + " <- " + format_point(a.source) + "]";
}

/// Declared domains of the dilations. Global unless a bound is set, in which
/// case dom(eps) = { g : d(g) <= bound / |eps| } (or `<` when strict).
struct DomainSpec {
  std::optional<double> bound;
  bool strict = false;
};

/// Pair groupoid of a group G with the left-invariant distance
/// d(p, q) = gauge(q^-1 p), dilated by delta_eps(p, q) = (q D_eps(q^-1 p), q)
/// where D_eps are the group dilations. Source alpha(p, q) = q.
template <typename S, template <typename> class GroupT, typename Gauge>
class PairDilationModel {
 public:
  using Scalar = S;
  using Point = Vec<S>;
  using Arrow = PairArrow<S>;
  using Group = GroupT<S>;

  PairDilationModel() = default;
  PairDilationModel(Group group, Gauge gauge, DomainSpec domain = {})
      : group_(std::move(group)), gauge_(std::move(gauge)), domain_(domain) {}

  const Group& group() const { return group_; }
  const Gauge& gauge() const { return gauge_; }
  const DomainSpec& domain() const { return domain_; }
  int dim() const { return group_.dim; }
  std::string name() const { return std::string(Group::name) + "/" + Gauge::name; }

  Arrow identity(const Point& x) const { return {x, x}; }
  Arrow alpha(const Arrow& g) const { return {g.source, g.source}; }
  Arrow omega(const Arrow& g) const { return {g.target, g.target}; }
  /// gh for alpha(g) = omega(h); composability is the caller's contract.
  Arrow compose(const Arrow& g, const Arrow& h) const { return {g.target, h.source}; }
  Arrow inverse(const Arrow& g) const { return {g.source, g.target}; }

  S distance(const Point& p, const Point& q) const { return gauge_(group_.mul(group_.inv(q), p)); }
  S norm(const Arrow& g) const { return distance(g.target, g.source); }

  Arrow delta(const S& eps, const Arrow& g) const {
    return {group_.mul(g.source, group_.dilate(eps, group_.mul(group_.inv(g.source), g.target))),
            g.source};
  }

  bool in_domain(const S& eps, const Arrow& g) const {
    if (!domain_.bound) return true;
    using std::abs;
    const double lim = *domain_.bound / static_cast<double>(abs(eps));
    const double d = static_cast<double>(norm(g));
    return domain_.strict ? d < lim : d <= lim;
  }
  /// im(eps) = delta_eps(dom(eps)).
  bool in_image(const S& eps, const Arrow& g) const {
    if (!domain_.bound) return true;
    return in_domain(eps, delta(S(1) / eps, g));
  }
  /// delta_eps with a domain check; `stage` names the step for diagnostics.
  Arrow delta_checked(const S& eps, const Arrow& g, const char* stage) const {
    if (!in_domain(eps, g))
      throw DomainError(stage, "arrow " + format_arrow(g) + " outside dom(" +
                                   std::to_string(static_cast<double>(eps)) + ")");
    return delta(eps, g);
  }

 private:
  Group group_{};
  Gauge gauge_{};
  DomainSpec domain_{};
};

template <typename S>
using EuclideanModel = PairDilationModel<S, EuclideanGroup, EuclideanGauge>;
template <typename S>
using HeisenbergModel = PairDilationModel<S, HeisenbergGroup, CyganGauge>;

template <typename S>
EuclideanModel<S> make_euclidean(int dim = 1, DomainSpec domain = {}) {
  return EuclideanModel<S>(EuclideanGroup<S>{dim}, EuclideanGauge{}, domain);
}
template <typename S>
HeisenbergModel<S> make_heisenberg() {
  return HeisenbergModel<S>(HeisenbergGroup<S>{}, CyganGauge{});
}
/// Heisenberg dilations measured with the Euclidean length of coordinates.
template <typename S>
PairDilationModel<S, HeisenbergGroup, EuclideanGauge> make_heisenberg_euclidean_norm() {
  return {HeisenbergGroup<S>{}, EuclideanGauge{}};
}
template <typename S>
PairDilationModel<S, HeisenbergGroup, BumpedGauge<CyganGauge>> make_heisenberg_bumped(double c = 0.5) {
  return {HeisenbergGroup<S>{}, BumpedGauge<CyganGauge>{CyganGauge{}, c}};
}
template <typename S>
PairDilationModel<S, EuclideanGroup, BumpedGauge<EuclideanGauge>> make_euclidean_bumped(int dim = 1,
                                                                                        double c = 0.5) {
  return {EuclideanGroup<S>{dim}, BumpedGauge<EuclideanGauge>{EuclideanGauge{}, c}};
}

/// Largest coordinate difference, relative to magnitude above 1.
template <typename S>
double point_gap(const Vec<S>& a, const Vec<S>& b) {
  using std::abs;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double diff = static_cast<double>(abs(S(a(i) - b(i))));
    const double scale = std::max({1.0, static_cast<double>(abs(a(i))), static_cast<double>(abs(b(i)))});
    worst = std::max(worst, diff / scale);
  }
  return worst;
}

template <typename S>
double arrow_gap(const PairArrow<S>& a, const PairArrow<S>& b) {
  return std::max(point_gap(a.target, b.target), point_gap(a.source, b.source));
}

template <typename S>
bool same_arrow(const PairArrow<S>& a, const PairArrow<S>& b, double tol) {
  if constexpr (std::is_same_v<S, Rational>)
    return a.target == b.target && a.source == b.source;
  else
    return arrow_gap(a, b) <= tol;
}

template <typename S, typename T>
Vec<T> cast_point(const Vec<S>& v) {
  Vec<T> r(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) r(i) = T(v(i));
  return r;
}

}  // namespace ngd
