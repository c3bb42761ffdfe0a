#pragma once

#include "ngd/estimate.hpp"
#include "ngd/models.hpp"
#include "ngd/sampling.hpp"
#include "ngd/scale.hpp"

#include <functional>
#include <sstream>
#include <utility>
#include <vector>

namespace ngd {

namespace detail {
inline std::string eps_str(double e) {
  std::ostringstream out;
  out.precision(6);
  out << "eps=" << e;
  return out.str();
}
template <typename S>
double as_double(const S& x) {
  return static_cast<double>(x);
}
}  // namespace detail

/// Action laws: alpha delta_eps = alpha, delta_eps delta_mu = delta_{eps mu},
/// delta_{1/eps} delta_eps = id, delta_1 = id.
template <typename Model>
ValidationReport check_A1(const Model& m, const std::vector<typename Model::Arrow>& arrows,
                          const std::vector<double>& grid = action_grid(), double tol = 1e-12) {
  using S = typename Model::Scalar;
  ValidationReport r("A1 action of the scale group on " + m.name());
  for (const auto& g : arrows) {
    r.check_lazy(same_arrow(m.delta(S(1), g), g, tol), "delta_1 is the identity",
                 [&] { return format_arrow(g); });
    for (double e : grid) {
      const S eps(e);
      const auto dg = m.delta(eps, g);
      r.check_lazy(same_arrow(m.alpha(dg), m.alpha(g), tol), "source is preserved",
                   [&] { return format_arrow(g) + " " + detail::eps_str(e); });
      r.check_lazy(same_arrow(m.delta(S(1) / eps, dg), g, tol), "delta_{1/eps} inverts delta_eps",
                   [&] { return format_arrow(g) + " " + detail::eps_str(e); });
      for (double u : grid) {
        const S mu(u);
        r.check_lazy(same_arrow(m.delta(eps, m.delta(mu, g)), m.delta(S(eps * mu), g), tol),
                     "delta_eps delta_mu = delta_{eps mu}", [&] {
                       return format_arrow(g) + " " + detail::eps_str(e) + " mu=" + std::to_string(u);
                     });
      }
    }
  }
  return r;
}

/// d(delta_eps g) = eps d(g).
template <typename Model>
ValidationReport check_homogeneity(const Model& m, const std::vector<typename Model::Arrow>& arrows,
                                   const std::vector<double>& grid = action_grid(), double tol = 1e-12) {
  using S = typename Model::Scalar;
  ValidationReport r("norm homogeneity on " + m.name());
  for (const auto& g : arrows) {
    const double d = detail::as_double(m.norm(g));
    for (double e : grid) {
      const double lhs = detail::as_double(m.norm(m.delta(S(e), g)));
      r.check_lazy(std::abs(lhs - e * d) <= tol * std::max(1.0, e * d), "d(delta_eps g) = eps d(g)",
                   [&] { return format_arrow(g) + " " + detail::eps_str(e); });
    }
  }
  return r;
}

/// sup over the sample of d(delta_eps g) along the grid.
template <typename Model>
LimitEstimate contraction_profile(const Model& m, const std::vector<typename Model::Arrow>& arrows,
                                  const std::vector<double>& grid = dyadic_grid(), double tol = 1e-4) {
  using S = typename Model::Scalar;
  LimitEstimate est;
  est.axiom = "A2 contraction";
  est.samples = arrows.size();
  for (double e : grid) {
    double sup = 0;
    for (const auto& g : arrows) sup = std::max(sup, detail::as_double(m.norm(m.delta(S(e), g))));
    est.eps.push_back(e);
    est.residual.push_back(sup);
  }
  fit_order(est);
  decide(est, tol);
  return est;
}

/// Identities are fixed by every dilation and sup d(delta_eps g) -> 0 on the
/// bounded sample. The fitted order is recorded in a note.
template <typename Model>
ValidationReport check_A2(const Model& m, const std::vector<typename Model::Arrow>& arrows,
                          const std::vector<double>& grid = dyadic_grid(), double tol = 1e-4) {
  using S = typename Model::Scalar;
  ValidationReport r("A2 contraction to objects on " + m.name());
  for (const auto& g : arrows) {
    const auto x = m.alpha(g);
    for (double e : grid)
      r.check_lazy(same_arrow(m.delta(S(e), x), x, 1e-12), "identities are fixed",
                   [&] { return format_arrow(x) + " " + detail::eps_str(e); });
  }
  const auto est = contraction_profile(m, arrows, grid, tol);
  r.check_lazy(est.pass, "sup d(delta_eps g) tends to zero", [&] { return est.summary(); });
  std::ostringstream note;
  note << "sup d(delta_eps g) at eps=" << est.eps.back() << " is " << est.residual.back();
  if (est.order) note << ", fitted order " << *est.order;
  note << " over " << arrows.size() << " samples";
  r.note(note.str());
  return r;
}

/// Witness constants for the domain axiom.
struct DomainConstants {
  double A = 2.0;
  double B = 4.0;
  double R = 2.0;
  double eps0 = 1.0;
};

/// Domain axiom on arrows with sources in the sampled bounded set K:
/// (i) objects lie in dom(eps) and dom(eps) is closed under inversion;
/// (ii) the chain
///   {d <= |eps|} in delta_eps({d <= A}) in dom(1/eps) in delta_eps({d <= B})
///   in delta_eps(dom(eps)), using g in delta_eps(S) iff delta_{1/eps} g in S
///   and dom(eps);
/// (iii) dif(delta_eps g, delta_eps h) in dom(1/eps) for d(g), d(h) <= R,
///   |eps| <= eps0.
/// An object outside some dom(eps) is a structural error.
template <typename Model>
ValidationReport check_A0(const Model& m, const BoundedSampler& sampler, const DomainConstants& c = {},
                          const std::vector<double>& grid = dyadic_grid(0, 10)) {
  using S = typename Model::Scalar;
  using Arrow = typename Model::Arrow;
  ValidationReport r("A0 domains on " + m.name());
  if (!m.domain().bound) {
    r.note("global domains: every clause holds vacuously");
    return r;
  }
  {
    std::ostringstream n;
    n << "witnesses A=" << c.A << " B=" << c.B << " R=" << c.R << " eps0=" << c.eps0 << ", K = ball of radius "
      << sampler.radius << ", " << sampler.samples << " samples per clause and scale";
    r.note(n.str());
  }
  if (!(1 < c.A && c.A < c.B)) {
    r.fail("1 < A < B", "A=" + std::to_string(c.A) + " B=" + std::to_string(c.B));
    return r;
  }
  std::mt19937_64 rng(sampler.seed);
  const auto e = m.group().identity();
  auto arrow_in = [&](double radius) {
    auto q = detail::sample_ball(m, rng, sampler.radius, e);
    auto p = detail::sample_ball(m, rng, radius, q);
    return Arrow{p, q};
  };
  for (double ed : grid) {
    const S eps(ed), inv_eps = S(1) / S(ed);
    for (std::size_t i = 0; i < sampler.samples; ++i) {
      auto x = m.identity(detail::sample_ball(m, rng, sampler.radius, e));
      if (!m.in_domain(eps, x) || !m.in_domain(inv_eps, x)) {
        r.set_structural("object " + format_arrow(x) + " outside the declared domain at " + detail::eps_str(ed));
        return r;
      }
      auto g = arrow_in(std::max(c.B, c.A) / ed);
      r.check_lazy(m.in_domain(eps, g) == m.in_domain(eps, m.inverse(g)), "domain closed under inversion",
                   [&] { return format_arrow(g) + " " + detail::eps_str(ed); });

      auto g1 = arrow_in(ed);
      auto pre1 = m.delta(inv_eps, g1);
      r.check_lazy(detail::as_double(m.norm(pre1)) <= c.A * (1 + 1e-12) && m.in_domain(eps, pre1),
                   "{d <= |eps|} inside delta_eps({d <= A})",
                   [&] { return format_arrow(g1) + " " + detail::eps_str(ed); });

      auto h2 = arrow_in(c.A);
      if (m.in_domain(eps, h2))
        r.check_lazy(m.in_domain(inv_eps, m.delta(eps, h2)), "delta_eps({d <= A}) inside dom(1/eps)",
                     [&] { return format_arrow(h2) + " " + detail::eps_str(ed); });

      auto g3 = arrow_in(c.B * ed);
      if (m.in_domain(inv_eps, g3)) {
        auto pre3 = m.delta(inv_eps, g3);
        r.check_lazy(detail::as_double(m.norm(pre3)) <= c.B * (1 + 1e-12) && m.in_domain(eps, pre3),
                     "dom(1/eps) inside delta_eps({d <= B})",
                     [&] { return format_arrow(g3) + " " + detail::eps_str(ed); });
      }

      auto h4 = arrow_in(c.B);
      r.check_lazy(m.in_domain(eps, h4), "{d <= B} inside dom(eps)",
                   [&] { return format_arrow(h4) + " " + detail::eps_str(ed); });

      if (ed <= c.eps0) {
        auto q = detail::sample_ball(m, rng, sampler.radius, e);
        Arrow a{detail::sample_ball(m, rng, c.R, q), q};
        Arrow b{detail::sample_ball(m, rng, c.R, q), q};
        auto da = m.delta(eps, a), db = m.delta(eps, b);
        auto dif = m.compose(da, m.inverse(db));
        r.check_lazy(m.in_domain(inv_eps, dif), "dif(delta_eps g, delta_eps h) inside dom(1/eps)",
                     [&] { return format_arrow(a) + ", " + format_arrow(b) + " " + detail::eps_str(ed); });
      }
    }
  }
  return r;
}

/// Pairs (g, h) with a common source: the arrows of G x_alpha G.
template <typename Model>
using DoubleArrow = std::pair<typename Model::Arrow, typename Model::Arrow>;

/// g h^-1 for alpha(g) = alpha(h).
template <typename Model>
typename Model::Arrow dif(const Model& m, const typename Model::Arrow& g, const typename Model::Arrow& h) {
  return m.compose(g, m.inverse(h));
}

/// delta~_eps(g, h) = (delta_eps(g h^-1) h, h).
template <typename Model>
DoubleArrow<Model> induced_double_delta(const Model& m, const typename Model::Scalar& eps,
                                        const typename Model::Arrow& g, const typename Model::Arrow& h) {
  return {m.compose(m.delta(eps, dif(m, g, h)), h), h};
}

/// d~(g, h) = d(g h^-1).
template <typename Model>
typename Model::Scalar double_norm(const Model& m, const typename Model::Arrow& g,
                                   const typename Model::Arrow& h) {
  return m.norm(dif(m, g, h));
}

/// dif o delta~_eps = delta_eps o dif, delta~_eps(h, h) = (h, h) and the action
/// laws for delta~ on fiber samples.
template <typename Model>
ValidationReport check_double_dilation(const Model& m, const std::vector<FiberSample<Model>>& samples,
                                       const std::vector<double>& grid = action_grid(), double tol = 1e-12) {
  using S = typename Model::Scalar;
  ValidationReport r("induced dilation of the double groupoid on " + m.name());
  for (const auto& s : samples) {
    for (double e : grid) {
      const S eps(e);
      const auto dd = induced_double_delta(m, eps, s.u, s.v);
      r.check_lazy(same_arrow(dif(m, dd.first, dd.second), m.delta(eps, dif(m, s.u, s.v)), tol),
                   "dif commutes with dilations",
                   [&] { return format_arrow(s.u) + ", " + format_arrow(s.v) + " " + detail::eps_str(e); });
      const auto hh = induced_double_delta(m, eps, s.v, s.v);
      r.check_lazy(same_arrow(hh.first, s.v, tol) && same_arrow(hh.second, s.v, tol), "diagonal is fixed",
                   [&] { return format_arrow(s.v) + " " + detail::eps_str(e); });
      const auto back = induced_double_delta(m, S(S(1) / eps), dd.first, dd.second);
      r.check_lazy(same_arrow(back.first, s.u, tol), "delta~_{1/eps} inverts delta~_eps",
                   [&] { return format_arrow(s.u) + ", " + format_arrow(s.v) + " " + detail::eps_str(e); });
    }
  }
  return r;
}

/// The structure transported by delta_mu: G_mu with m_mu, inv_mu, dif_mu,
/// d_mu, and the transported double dilation. Every dilation application is
/// domain-checked, so a composition leaving a declared domain throws a
/// DomainError naming the step.
template <typename Model>
class Deformation {
 public:
  using S = typename Model::Scalar;
  using Arrow = typename Model::Arrow;

  Deformation(const Model& m, S mu) : m_(m), mu_(mu) {}

  const Model& model() const { return m_; }
  const S& mu() const { return mu_; }

  Arrow alpha(const Arrow& g) const { return m_.alpha(g); }
  Arrow omega(const Arrow& g) const { return m_.omega(push(g, "deformed target")); }
  /// g h in G_mu, defined when alpha(g) = omega_mu(h).
  Arrow compose(const Arrow& g, const Arrow& h) const {
    auto a = push(g, "deformed composition: push left factor");
    auto b = push(h, "deformed composition: push right factor");
    return pull(m_.compose(a, b), "deformed composition: pull back product");
  }
  Arrow inverse(const Arrow& g) const {
    return pull(m_.inverse(push(g, "deformed inverse: push")), "deformed inverse: pull back");
  }
  Arrow dif(const Arrow& g, const Arrow& h) const {
    auto a = push(g, "deformed difference: push first");
    auto b = push(h, "deformed difference: push second");
    return pull(ngd::dif(m_, a, b), "deformed difference: pull back");
  }
  S norm(const Arrow& g) const { return m_.norm(push(g, "deformed norm")) / mu_; }
  S double_norm(const Arrow& g, const Arrow& h) const {
    return ngd::double_norm(m_, push(g, "deformed double norm"), push(h, "deformed double norm")) / mu_;
  }
  /// delta_{mu,eps} = delta_mu^-1 delta_eps delta_mu.
  Arrow delta(const S& eps, const Arrow& g) const {
    return pull(m_.delta_checked(eps, push(g, "transported dilation: push"), "transported dilation: delta_eps"),
                "transported dilation: pull back");
  }
  /// The displayed formula
  /// (delta_{1/mu}(delta_eps(delta_mu g (delta_mu h)^-1) delta_mu h), h).
  DoubleArrow<Model> double_delta(const S& eps, const Arrow& g, const Arrow& h) const {
    auto a = push(g, "transported double dilation: push first");
    auto b = push(h, "transported double dilation: push second");
    auto inner = m_.delta_checked(eps, ngd::dif(m_, a, b), "transported double dilation: delta_eps");
    return {pull(m_.compose(inner, b), "transported double dilation: pull back"), h};
  }
  /// (delta_mu x delta_mu)^-1 o delta~_eps o (delta_mu x delta_mu).
  DoubleArrow<Model> double_delta_direct(const S& eps, const Arrow& g, const Arrow& h) const {
    auto pushed = induced_double_delta(m_, eps, push(g, "direct transport: push"), push(h, "direct transport: push"));
    return {pull(pushed.first, "direct transport: pull back"), pull(pushed.second, "direct transport: pull back")};
  }

 private:
  Arrow push(const Arrow& g, const char* stage) const { return m_.delta_checked(mu_, g, stage); }
  Arrow pull(const Arrow& g, const char* stage) const { return m_.delta_checked(S(S(1) / mu_), g, stage); }

  const Model& m_;
  S mu_;
};

template <typename Model>
Deformation<Model> deform(const Model& m, const typename Model::Scalar& mu) {
  return Deformation<Model>(m, mu);
}

/// Checks the deformed structure on samples:
/// groupoid laws and norm axioms for (G_mu, d_mu), delta_{mu,eps} = delta_eps,
/// dif_mu = delta_mu^-1 dif(delta_mu g, delta_mu h) as a norm-preserving
/// morphism from the deformed double groupoid, and the displayed formula for
/// the transported double dilation against the direct transport.
template <typename Model>
ValidationReport check_deformation(const Deformation<Model>& D, const std::vector<FiberSample<Model>>& samples,
                                   const std::vector<double>& grid = {0.5, 0.1, 0.01}, double tol = 1e-12) {
  using S = typename Model::Scalar;
  using Arrow = typename Model::Arrow;
  const auto& m = D.model();
  ValidationReport r("deformation at mu=" + std::to_string(detail::as_double(D.mu())) + " of " + m.name());
  auto w2 = [](const Arrow& a, const Arrow& b) { return format_arrow(a) + ", " + format_arrow(b); };
  auto ntol = [tol](double a, double b) { return tol * std::max({1.0, std::abs(a), std::abs(b)}); };
  for (const auto& s : samples) {
    // A composable chain a, b, c in G_mu: alpha(a) = omega_mu(b), alpha(b) = omega_mu(c).
    const Arrow c = s.u;
    const Arrow b{s.v.target, D.omega(c).target};
    const Arrow a{s.w.target, D.omega(b).target};
    const auto ab = D.compose(a, b);
    r.check_lazy(same_arrow(D.compose(ab, c), D.compose(a, D.compose(b, c)), tol), "deformed associativity",
                 [&] { return w2(a, b) + ", " + format_arrow(c); });
    r.check_lazy(same_arrow(D.alpha(ab), D.alpha(b), tol) && same_arrow(D.omega(ab), D.omega(a), tol),
                 "deformed source and target of a product", [&] { return w2(a, b); });
    const auto ia = D.inverse(a);
    r.check_lazy(same_arrow(D.inverse(ia), a, tol), "deformed inverse is an involution",
                 [&] { return format_arrow(a); });
    r.check_lazy(same_arrow(D.compose(a, ia), D.omega(a), tol) && same_arrow(D.compose(ia, a), D.alpha(a), tol),
                 "deformed inverse laws", [&] { return format_arrow(a); });
    r.check_lazy(same_arrow(D.compose(a, D.alpha(a)), a, tol) && same_arrow(D.compose(D.omega(a), a), a, tol),
                 "deformed identities are units", [&] { return format_arrow(a); });

    const double na = detail::as_double(D.norm(a)), nb = detail::as_double(D.norm(b));
    r.check_lazy(detail::as_double(D.norm(D.alpha(a))) <= tol, "deformed norm vanishes on identities",
                 [&] { return format_arrow(a); });
    r.check_lazy(std::abs(detail::as_double(D.norm(ia)) - na) <= ntol(na, na), "deformed norm inversion invariant",
                 [&] { return format_arrow(a); });
    r.check_lazy(detail::as_double(D.norm(ab)) <= na + nb + ntol(na, nb), "deformed norm subadditive",
                 [&] { return w2(a, b); });

    // dif_mu on the double groupoid: a pair (g, h) with alpha(g) = alpha(h).
    const Arrow& g = s.u;
    const Arrow& h = s.v;
    const Arrow& l = s.w;
    const auto gh = D.dif(g, h);
    r.check_lazy(same_arrow(gh, m.delta(S(S(1) / D.mu()), dif(m, m.delta(D.mu(), g), m.delta(D.mu(), h))), tol),
                 "dif_mu = delta_mu^-1 dif(delta_mu g, delta_mu h)", [&] { return w2(g, h); });
    const double lhs = detail::as_double(D.norm(gh)), rhs = detail::as_double(D.double_norm(g, h));
    r.check_lazy(std::abs(lhs - rhs) <= ntol(lhs, rhs), "dif_mu preserves norms", [&] { return w2(g, h); });
    // (g, h)(h, l) = (g, l) maps to dif_mu(g, h) dif_mu(h, l).
    r.check_lazy(same_arrow(D.dif(g, l), D.compose(gh, D.dif(h, l)), tol), "dif_mu preserves products",
                 [&] { return w2(g, h) + ", " + format_arrow(l); });

    for (double e : grid) {
      const S eps(e);
      r.check_lazy(same_arrow(D.delta(eps, g), m.delta(eps, g), tol), "delta_{mu,eps} = delta_eps",
                   [&] { return format_arrow(g) + " " + detail::eps_str(e); });
      const auto f = D.double_delta(eps, g, h);
      const auto t = D.double_delta_direct(eps, g, h);
      r.check_lazy(same_arrow(f.first, t.first, tol) && same_arrow(f.second, t.second, tol),
                   "transported double dilation matches the direct transport",
                   [&] { return w2(g, h) + " " + detail::eps_str(e); });
    }
  }
  return r;
}

/// F is an isometry d2(F g) = d1(g) that commutes with dilations.
template <typename M1, typename M2>
ValidationReport check_dilation_morphism(const std::function<typename M2::Arrow(const typename M1::Arrow&)>& F,
                                         const M1& d1, const M2& d2,
                                         const std::vector<typename M1::Arrow>& arrows,
                                         const std::vector<double>& grid = action_grid(), double tol = 1e-12) {
  ValidationReport r("dilation morphism " + d1.name() + " -> " + d2.name());
  for (const auto& g : arrows) {
    const auto fg = F(g);
    const double a = detail::as_double(d2.norm(fg)), b = detail::as_double(d1.norm(g));
    r.check_lazy(std::abs(a - b) <= tol * std::max({1.0, a, b}), "isometry",
                 [&] { return format_arrow(g) + " d1=" + std::to_string(b) + " d2=" + std::to_string(a); });
    r.check_lazy(same_arrow(F(d1.alpha(g)), d2.alpha(fg), tol), "commutes with source",
                 [&] { return format_arrow(g); });
    for (double e : grid)
      r.check_lazy(same_arrow(F(d1.delta(typename M1::Scalar(e), g)), d2.delta(typename M2::Scalar(e), fg), tol),
                   "commutes with dilations", [&] { return format_arrow(g) + " " + detail::eps_str(e); });
  }
  return r;
}

}  // namespace ngd
