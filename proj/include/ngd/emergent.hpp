#pragma once

#include "ngd/dilation.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace ngd {

namespace detail {
template <typename Model>
void require_same_source(const Model& m, const typename Model::Arrow& g, const typename Model::Arrow& h,
                         const char* op) {
  (void)m;
  if (point_gap(g.source, h.source) > 1e-12)
    throw PreconditionError(std::string(op) + ": arrows in different fibers " + format_arrow(g) + ", " +
                            format_arrow(h));
}
template <typename S>
S reciprocal(const S& eps) {
  return S(S(1) / eps);
}
}  // namespace detail

/// delta^h_eps g = delta_eps(g h^-1) h, the contraction of g toward h inside
/// the fiber of their common source.
template <typename Model>
typename Model::Arrow dilatation(const Model& m, const typename Model::Scalar& eps, const typename Model::Arrow& h,
                                 const typename Model::Arrow& g) {
  detail::require_same_source(m, g, h, "dilatation");
  return m.compose(m.delta_checked(eps, dif(m, g, h), "dilatation: delta_eps(g h^-1)"), h);
}

/// dif_eps(g, h) = delta_{1/eps} dif(delta_eps g, delta_eps h).
template <typename Model>
typename Model::Arrow approx_dif(const Model& m, const typename Model::Scalar& eps, const typename Model::Arrow& g,
                                 const typename Model::Arrow& h) {
  detail::require_same_source(m, g, h, "dif_eps");
  auto a = m.delta_checked(eps, g, "dif_eps: delta_eps g");
  auto b = m.delta_checked(eps, h, "dif_eps: delta_eps h");
  return m.delta_checked(detail::reciprocal(eps), dif(m, a, b), "dif_eps: delta_{1/eps} of the difference");
}

/// Delta_eps(g, h) = dif_eps(g, h) delta_eps h; keeps the source of g.
template <typename Model>
typename Model::Arrow approx_difference(const Model& m, const typename Model::Scalar& eps,
                                        const typename Model::Arrow& g, const typename Model::Arrow& h) {
  auto d = approx_dif(m, eps, g, h);
  return m.compose(d, m.delta_checked(eps, h, "composition: delta_eps h"));
}

/// inv_eps(g) = Delta_eps(e(alpha g), g).
template <typename Model>
typename Model::Arrow approx_inverse(const Model& m, const typename Model::Scalar& eps,
                                     const typename Model::Arrow& g) {
  return approx_difference(m, eps, m.alpha(g), g);
}

/// Sigma_eps(g, h) = delta_{1/eps}[delta_eps(g (delta_eps h)^-1) delta_eps h].
template <typename Model>
typename Model::Arrow approx_sum(const Model& m, const typename Model::Scalar& eps, const typename Model::Arrow& g,
                                 const typename Model::Arrow& h) {
  detail::require_same_source(m, g, h, "Sigma_eps");
  auto dh = m.delta_checked(eps, h, "Sigma_eps: delta_eps h");
  auto inner = m.delta_checked(eps, dif(m, g, dh), "Sigma_eps: delta_eps(g (delta_eps h)^-1)");
  return m.delta_checked(detail::reciprocal(eps), m.compose(inner, dh), "Sigma_eps: delta_{1/eps} of the product");
}

/// Delta^u_eps(g, h) = delta^{delta^u_eps g}_{1/eps} delta^u_eps h.
template <typename Model>
typename Model::Arrow approx_difference3(const Model& m, const typename Model::Scalar& eps,
                                         const typename Model::Arrow& u, const typename Model::Arrow& g,
                                         const typename Model::Arrow& h) {
  return dilatation(m, detail::reciprocal(eps), dilatation(m, eps, u, g), dilatation(m, eps, u, h));
}

/// inv^u_eps(g) = Delta^u_eps(g, u).
template <typename Model>
typename Model::Arrow approx_inverse3(const Model& m, const typename Model::Scalar& eps,
                                      const typename Model::Arrow& u, const typename Model::Arrow& g) {
  return approx_difference3(m, eps, u, g, u);
}

/// Sigma^u_eps(g, h) = delta^u_{1/eps} delta^{delta^u_eps g}_eps h.
template <typename Model>
typename Model::Arrow approx_sum3(const Model& m, const typename Model::Scalar& eps, const typename Model::Arrow& u,
                                  const typename Model::Arrow& g, const typename Model::Arrow& h) {
  return dilatation(m, detail::reciprocal(eps), u, dilatation(m, eps, dilatation(m, eps, u, g), h));
}

/// Right translation by u^-1 intertwines the two- and three-argument forms:
/// Delta_eps(h u^-1, g u^-1) = Delta^u_eps(g, h) u^-1 and likewise for Sigma.
/// Also checks that both two-argument operations keep the source and that
/// delta~_eps(g, h) = (delta^h_eps g, h).
template <typename Model>
ValidationReport check_emergent_compatibility(const Model& m, const std::vector<FiberSample<Model>>& samples,
                                              const std::vector<double>& grid = {0.5, 0.1, 0.01},
                                              double tol = 1e-10) {
  using S = typename Model::Scalar;
  ValidationReport r("two- and three-argument operations agree on " + m.name());
  for (const auto& s : samples) {
    const auto& g = s.u;
    const auto& h = s.v;
    const auto& u = s.w;
    const auto ui = m.inverse(u);
    auto w = [&](double e) {
      return format_arrow(g) + ", " + format_arrow(h) + ", u=" + format_arrow(u) + " " + detail::eps_str(e);
    };
    for (double e : grid) {
      const S eps(e);
      r.check_lazy(same_arrow(approx_difference(m, eps, m.compose(h, ui), m.compose(g, ui)),
                              m.compose(approx_difference3(m, eps, u, g, h), ui), tol),
                   "difference intertwines with right translation", [&] { return w(e); });
      r.check_lazy(same_arrow(approx_sum(m, eps, m.compose(h, ui), m.compose(g, ui)),
                              m.compose(approx_sum3(m, eps, u, g, h), ui), tol),
                   "sum intertwines with right translation", [&] { return w(e); });
      r.check_lazy(same_arrow(m.alpha(approx_difference(m, eps, g, h)), m.alpha(g), tol) &&
                       same_arrow(m.alpha(approx_sum(m, eps, g, h)), m.alpha(g), tol),
                   "source is kept", [&] { return w(e); });
      r.check_lazy(same_arrow(induced_double_delta(m, eps, g, h).first, dilatation(m, eps, h, g), tol),
                   "double dilation is the dilatation", [&] { return w(e); });
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Idempotent right quasigroups

/// Equality and printing for a carrier type.
template <typename T>
struct Carrier {
  std::function<bool(const T&, const T&)> equal;
  std::function<std::string(const T&)> show;
};

template <typename S>
Carrier<Vec<S>> point_carrier(double tol) {
  return {[tol](const Vec<S>& a, const Vec<S>& b) {
            if constexpr (std::is_same_v<S, Rational>) {
              for (Eigen::Index i = 0; i < a.size(); ++i)
                if (a(i) != b(i)) return false;
              return true;
            } else {
              return point_gap(a, b) <= tol;
            }
          },
          [](const Vec<S>& a) { return format_point(a); }};
}

inline Carrier<long> integer_carrier() {
  return {[](long a, long b) { return a == b; }, [](long a) { return std::to_string(a); }};
}

template <typename T>
struct Irq {
  std::function<T(const T&, const T&)> circ;
  std::function<T(const T&, const T&)> bullet;
};

/// (x o u) . (x o v)
template <typename T>
T irq_difference(const Irq<T>& q, const T& x, const T& u, const T& v) {
  return q.bullet(q.circ(x, u), q.circ(x, v));
}
/// x . ((x o u) o v)
template <typename T>
T irq_sum(const Irq<T>& q, const T& x, const T& u, const T& v) {
  return q.bullet(x, q.circ(q.circ(x, u), v));
}
/// (x o u) . x
template <typename T>
T irq_inverse(const Irq<T>& q, const T& x, const T& u) {
  return q.bullet(q.circ(x, u), x);
}

/// k-fold iterate: x o_k y with o_0 y = y, o_{k+1} = x o (x o_k y) and
/// negative k using the bullet.
template <typename T>
T irq_iterate(const Irq<T>& q, int k, const T& x, const T& y) {
  T r = y;
  for (int i = 0; i < k; ++i) r = q.circ(x, r);
  for (int i = 0; i > k; --i) r = q.bullet(x, r);
  return r;
}

/// A scale-indexed family of irq operations; the bullet at eps is the circ
/// at the inverse scale.
template <typename T, typename E>
struct GammaIrq {
  std::function<T(const E&, const T&, const T&)> circ;
  std::function<E(const E&, const E&)> compose;
  std::function<E(const E&)> inverse;
  std::function<std::string(const E&)> show_scale;

  Irq<T> at(const E& eps) const {
    auto c = circ;
    auto inv = inverse(eps);
    return {[c, eps](const T& x, const T& y) { return c(eps, x, y); },
            [c, inv](const T& x, const T& y) { return c(inv, x, y); }};
  }
};

namespace detail {
/// Index pairs: all pairs for small samples, otherwise each element with a
/// few fixed partners.
inline std::vector<std::pair<std::size_t, std::size_t>> sample_pairs(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (n <= 64) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out.emplace_back(i, j);
  } else {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t s : {std::size_t{0}, std::size_t{1}, n / 2}) out.emplace_back(i, (i + s) % n);
  }
  return out;
}
}  // namespace detail

/// x o (x . y) = x . (x o y) = y and x o x = x . x = x.
template <typename T>
ValidationReport check_irq(const Irq<T>& q, const std::vector<T>& samples, const Carrier<T>& c,
                           const std::string& subject = "irq") {
  ValidationReport r(subject);
  for (const auto& x : samples) {
    r.check_lazy(c.equal(q.circ(x, x), x) && c.equal(q.bullet(x, x), x), "P2 idempotence",
                 [&] { return "x=" + c.show(x); });
  }
  for (auto [i, j] : detail::sample_pairs(samples.size())) {
    const T& x = samples[i];
    const T& y = samples[j];
    r.check_lazy(c.equal(q.circ(x, q.bullet(x, y)), y) && c.equal(q.bullet(x, q.circ(x, y)), y),
                 "P1 right quasigroup", [&] { return "x=" + c.show(x) + " y=" + c.show(y); });
  }
  return r;
}

/// Each o_eps is an irq and x o_eps (x o_mu y) = x o_{eps mu} y.
template <typename T, typename E>
ValidationReport check_gamma_irq(const GammaIrq<T, E>& Q, const std::vector<T>& samples, const std::vector<E>& scales,
                                 const Carrier<T>& c, const std::string& subject = "gamma irq") {
  ValidationReport r(subject);
  for (const auto& e : scales) r.merge(check_irq(Q.at(e), samples, c, subject));
  const auto pairs = detail::sample_pairs(samples.size());
  for (const auto& e : scales)
    for (const auto& mu : scales)
      for (auto [i, j] : pairs) {
        const T& x = samples[i];
        const T& y = samples[j];
        r.check_lazy(c.equal(Q.circ(e, x, Q.circ(mu, x, y)), Q.circ(Q.compose(e, mu), x, y)), "scale composition law",
                     [&] {
                       return "x=" + c.show(x) + " y=" + c.show(y) + " eps=" + Q.show_scale(e) +
                              " mu=" + Q.show_scale(mu);
                     });
      }
  return r;
}

/// Iterates of o_eps are the operations at powers of eps:
/// (o_eps)_k = o_{eps^k}.
template <typename T, typename E>
ValidationReport check_iterates(const GammaIrq<T, E>& Q, const E& eps, const std::vector<int>& ks,
                                const std::vector<T>& samples, const Carrier<T>& c) {
  ValidationReport r("iterates at eps=" + Q.show_scale(eps));
  const auto q = Q.at(eps);
  for (int k : ks) {
    E power = Q.compose(eps, Q.inverse(eps));
    for (int i = 0; i < std::abs(k); ++i) power = Q.compose(power, k > 0 ? eps : Q.inverse(eps));
    for (auto [i, j] : detail::sample_pairs(samples.size())) {
      const T& x = samples[i];
      const T& y = samples[j];
      r.check_lazy(c.equal(irq_iterate(q, k, x, y), Q.circ(power, x, y)), "iterate matches power",
                   [&] { return "k=" + std::to_string(k) + " x=" + c.show(x) + " y=" + c.show(y); });
    }
  }
  return r;
}

/// Clause names of the identity suite, in order (a)-(g), (k).
inline const std::vector<std::string>& identity_suite_clauses() {
  static const std::vector<std::string> names{
      "(a) difference undoes sum",
      "(b) sum undoes difference",
      "(c) difference is sum with the inverse",
      "(d) inverse of the inverse",
      "(e) sum is associative with moving base",
      "(f) inverse is difference to the base",
      "(g) base is neutral for the sum",
      "(k) difference distributes over dilations",
  };
  return names;
}

/// The based identities of an irq at each scale on samples (x, u, v, w), and
/// the distributivity identity
///   diff_eps(x, x o_mu u, x o_mu v) = (x o_{eps mu} u) o_mu diff_{eps mu}(x, u, v)
/// over all scale pairs.
template <typename T, typename E>
ValidationReport check_identity_suite(const GammaIrq<T, E>& Q, const std::vector<std::array<T, 4>>& samples,
                                      const std::vector<E>& scales, const Carrier<T>& c,
                                      const std::string& subject = "identity suite") {
  ValidationReport r(subject);
  const auto& n = identity_suite_clauses();
  for (const auto& e : scales) {
    const auto q = Q.at(e);
    for (const auto& s : samples) {
      const T &x = s[0], &u = s[1], &v = s[2], &w = s[3];
      auto wit = [&] {
        return "x=" + c.show(x) + " u=" + c.show(u) + " v=" + c.show(v) + " w=" + c.show(w) +
               " eps=" + Q.show_scale(e);
      };
      const T xu = q.circ(x, u);
      const T inv = irq_inverse(q, x, u);
      r.check_lazy(c.equal(irq_difference(q, x, u, irq_sum(q, x, u, v)), v), n[0], wit);
      r.check_lazy(c.equal(irq_sum(q, x, u, irq_difference(q, x, u, v)), v), n[1], wit);
      r.check_lazy(c.equal(irq_difference(q, x, u, v), irq_sum(q, xu, inv, v)), n[2], wit);
      r.check_lazy(c.equal(irq_inverse(q, xu, inv), u), n[3], wit);
      r.check_lazy(c.equal(irq_sum(q, x, u, irq_sum(q, xu, v, w)), irq_sum(q, x, irq_sum(q, x, u, v), w)), n[4], wit);
      r.check_lazy(c.equal(inv, irq_difference(q, x, u, x)), n[5], wit);
      r.check_lazy(c.equal(irq_sum(q, x, x, u), u), n[6], wit);
    }
  }
  for (const auto& e : scales)
    for (const auto& mu : scales) {
      const E em = Q.compose(e, mu);
      const auto qe = Q.at(e);
      const auto qem = Q.at(em);
      for (const auto& s : samples) {
        const T &x = s[0], &u = s[1], &v = s[2];
        const T lhs = irq_difference(qe, x, Q.circ(mu, x, u), Q.circ(mu, x, v));
        const T rhs = Q.circ(mu, qem.circ(x, u), irq_difference(qem, x, u, v));
        r.check_lazy(c.equal(lhs, rhs), n[7], [&] {
          return "x=" + c.show(x) + " u=" + c.show(u) + " v=" + c.show(v) + " eps=" + Q.show_scale(e) +
                 " mu=" + Q.show_scale(mu);
        });
      }
    }
  return r;
}

/// The fiber irq g o_eps h = delta^g_eps h over the object x, on target
/// coordinates of the fiber. The model is copied into the operations.
template <typename Model>
Irq<typename Model::Point> irq_from_dilation(const Model& m, const typename Model::Scalar& eps,
                                              const typename Model::Point& x) {
  using S = typename Model::Scalar;
  using P = typename Model::Point;
  auto circ_at = [m, x](const S& e) {
    return [m, x, e](const P& a, const P& b) {
      return dilatation(m, e, typename Model::Arrow{a, x}, typename Model::Arrow{b, x}).target;
    };
  };
  return {circ_at(eps), circ_at(detail::reciprocal(eps))};
}

/// Fiber samples as (x, u, v, w) target coordinates.
template <typename Model>
std::vector<std::array<typename Model::Point, 4>> fiber_points(const std::vector<FiberSample<Model>>& samples) {
  std::vector<std::array<typename Model::Point, 4>> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back({s.x, s.u.target, s.v.target, s.w.target});
  return out;
}

/// The whole family eps -> o_eps on the fiber over x.
template <typename Model>
GammaIrq<typename Model::Point, typename Model::Scalar> dilatation_gamma_irq(const Model& m,
                                                                              const typename Model::Point& x) {
  using S = typename Model::Scalar;
  using P = typename Model::Point;
  GammaIrq<P, S> Q;
  Q.circ = [m, x](const S& e, const P& a, const P& b) {
    return dilatation(m, e, typename Model::Arrow{a, x}, typename Model::Arrow{b, x}).target;
  };
  Q.compose = [](const S& a, const S& b) { return S(a * b); };
  Q.inverse = [](const S& a) { return detail::reciprocal(a); };
  Q.show_scale = [](const S& a) {
    if constexpr (std::is_same_v<S, Rational>)
      return to_string(a);
    else
      return std::to_string(static_cast<double>(a));
  };
  return Q;
}

/// Z-irq on Z/n from x o y = x + a (y - x) with a a unit mod n; the scale
/// k acts through a^k.
GammaIrq<long, long> cyclic_gamma_irq(long n, long a);

/// A single irq on Z/n from the same formula.
Irq<long> cyclic_irq(long n, long a);

/// x o y = x . y = x, which is idempotent but not a right quasigroup.
Irq<long> left_projection_irq();

/// x o y = x . y = y.
Irq<long> right_zero_irq();

}  // namespace ngd
