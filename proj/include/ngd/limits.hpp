#pragma once

#include "ngd/emergent.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace ngd {

/// Residuals below this count as zero for the scalar type. Rescaling by
/// 1/eps down to eps = 2^-20 amplifies rounding by about 1/eps (1/eps^2 for
/// the Heisenberg centre), so the floor sits well above machine precision.
/// Heisenberg limits in double are unreliable below eps ~ 1e-4; use float128.
template <typename S>
double residual_floor() {
  if constexpr (std::is_same_v<S, Quad>)
    return 1e-18;
  else
    return 1e-9;
}

/// Value at eps = 0 of the polynomial through the last (up to) three grid
/// points. Exact when the family is a polynomial of degree <= 2 in eps.
template <typename S, typename T>
T extrapolate_to_zero(const std::vector<double>& eps, const std::vector<T>& values) {
  const std::size_t n = std::min<std::size_t>(3, std::min(eps.size(), values.size()));
  if (n == 0) throw PreconditionError("extrapolation needs at least one grid point");
  const std::size_t first = std::min(eps.size(), values.size()) - n;
  T acc = values[first] * S(0);
  for (std::size_t i = first; i < first + n; ++i) {
    S w(1);
    for (std::size_t j = first; j < first + n; ++j)
      if (j != i) w *= S(-eps[j]) / S(S(eps[i]) - S(eps[j]));
    acc = acc + values[i] * w;
  }
  return acc;
}

template <typename S>
PairArrow<S> extrapolate_arrow(const std::vector<double>& eps, const std::vector<PairArrow<S>>& values) {
  std::vector<Vec<S>> t, s;
  for (const auto& a : values) t.push_back(a.target), s.push_back(a.source);
  return {extrapolate_to_zero<S>(eps, t), extrapolate_to_zero<S>(eps, s)};
}

/// Largest absolute coordinate difference.
template <typename S>
double coordinate_residual(const PairArrow<S>& a, const PairArrow<S>& b) {
  using std::abs;
  double worst = 0;
  for (Eigen::Index i = 0; i < a.target.size(); ++i) {
    worst = std::max(worst, static_cast<double>(abs(S(a.target(i) - b.target(i)))));
    worst = std::max(worst, static_cast<double>(abs(S(a.source(i) - b.source(i)))));
  }
  return worst;
}

/// Groupoid residual: d(f_eps f^-1) when the sources agree, otherwise the
/// larger of the target and source distances.
template <typename Model>
std::function<double(const typename Model::Arrow&, const typename Model::Arrow&)> norm_residual(const Model& m) {
  return [m](const typename Model::Arrow& a, const typename Model::Arrow& b) {
    return std::max(static_cast<double>(m.distance(a.target, b.target)),
                    static_cast<double>(m.distance(a.source, b.source)));
  };
}

/// sup over samples of residual(f_eps(s), f(s)) along the grid. A domain
/// exit stops the sweep and marks the estimate partial.
template <typename Sample, typename Value>
LimitEstimate uniform_limit(const std::string& name, const std::function<Value(double, const Sample&)>& family,
                            const std::function<Value(const Sample&)>& candidate, const std::vector<Sample>& samples,
                            const std::vector<double>& grid,
                            const std::function<double(const Value&, const Value&)>& residual, double tol,
                            double floor = 1e-13) {
  LimitEstimate est;
  est.axiom = name;
  est.samples = samples.size();
  std::vector<Value> limits;
  limits.reserve(samples.size());
  for (const auto& s : samples) limits.push_back(candidate(s));
  for (double e : grid) {
    double sup = 0;
    try {
      for (std::size_t i = 0; i < samples.size(); ++i) sup = std::max(sup, residual(family(e, samples[i]), limits[i]));
    } catch (const DomainError& err) {
      est.partial = err.stage() + " at " + detail::eps_str(e);
      est.trace.push_back(err.what());
      break;
    }
    est.eps.push_back(e);
    est.residual.push_back(sup);
  }
  fit_order(est, floor);
  decide(est, tol);
  return est;
}

/// Candidate limit by extrapolation of the family along the grid.
template <typename S, typename Sample, typename Value>
std::function<Value(const Sample&)> extrapolated(const std::function<Value(double, const Sample&)>& family,
                                                 const std::vector<double>& grid) {
  return [family, grid](const Sample& s) {
    std::vector<Value> vals;
    for (double e : grid) vals.push_back(family(e, s));
    if constexpr (std::is_same_v<Value, PairArrow<S>>)
      return extrapolate_arrow<S>(grid, vals);
    else
      return extrapolate_to_zero<S>(grid, vals);
  };
}

// ---------------------------------------------------------------------------
// Limit axioms

/// (1/eps) d(dif(delta_eps g, delta_eps h)).
template <typename Model>
typename Model::Scalar rescaled_double_distance(const Model& m, double eps, const typename Model::Arrow& g,
                                                const typename Model::Arrow& h) {
  using S = typename Model::Scalar;
  const S e(eps);
  return m.norm(dif(m, m.delta(e, g), m.delta(e, h))) / e;
}

/// (1/eps) d(delta_eps g).
template <typename Model>
typename Model::Scalar rescaled_norm(const Model& m, double eps, const typename Model::Arrow& g) {
  using S = typename Model::Scalar;
  const S e(eps);
  return m.norm(m.delta(e, g)) / e;
}

struct LimitCheck {
  LimitEstimate estimate;
  ValidationReport report;
  bool passed() const { return estimate.pass && report.passed(); }
};

/// Unit coordinate perturbations of the target inside the same fiber:
/// (p e_i, x) for each axis.
template <typename Model>
std::vector<typename Model::Arrow> axis_neighbours(const Model& m, const typename Model::Arrow& g) {
  std::vector<typename Model::Arrow> out;
  for (int i = 0; i < m.dim(); ++i) {
    typename Model::Point e = m.group().identity();
    e(i) = typename Model::Scalar(1);
    out.push_back({m.group().mul(g.target, e), g.source});
  }
  return out;
}

/// Rescaled double distance d~_0(g, h) = lim (1/eps) d(dif(delta_eps g,
/// delta_eps h)) on pairs (u, v) of each fiber sample, the distance
/// properties of the limit (zero exactly on the diagonal, bounded by
/// d_bar(g) + d_bar(h), symmetric), and a nondegeneracy probe along the
/// coordinate axes. A limit below `zero_tol` for distinct arrows is
/// reported with the pair as witness.
template <typename Model>
LimitCheck check_A3(const Model& m, const std::vector<FiberSample<Model>>& samples,
                    const std::vector<double>& grid = dyadic_grid(), double tol = 1e-5, double zero_tol = 1e-5) {
  using S = typename Model::Scalar;
  using Arrow = typename Model::Arrow;
  using Pair = std::pair<Arrow, Arrow>;
  std::function<S(double, const Pair&)> fam = [m](double e, const Pair& p) {
    return rescaled_double_distance(m, e, p.first, p.second);
  };
  std::function<double(const S&, const S&)> res = [](const S& a, const S& b) {
    using std::abs;
    return static_cast<double>(abs(S(a - b)));
  };
  std::vector<Pair> pairs;
  for (const auto& s : samples) pairs.emplace_back(s.u, s.v);
  auto limit = extrapolated<S, Pair, S>(fam, grid);
  LimitCheck out{uniform_limit<Pair, S>("A3 rescaled double distance", fam, limit, pairs, grid, res, tol,
                                        residual_floor<S>()),
                 ValidationReport("A3 distance properties of the limit on " + m.name())};
  auto& r = out.report;
  std::function<S(double, const Arrow&)> nfam = [m](double e, const Arrow& g) { return rescaled_norm(m, e, g); };
  auto nlimit = extrapolated<S, Arrow, S>(nfam, grid);
  for (const auto& s : samples) {
    const double d_uv = static_cast<double>(limit({s.u, s.v}));
    const double d_vu = static_cast<double>(limit({s.v, s.u}));
    auto w = [&] { return format_arrow(s.u) + ", " + format_arrow(s.v); };
    r.check_lazy(std::abs(static_cast<double>(limit({s.u, s.u}))) <= zero_tol, "limit vanishes on the diagonal",
                 [&] { return format_arrow(s.u); });
    r.check_lazy(std::abs(d_uv - d_vu) <= tol * std::max(1.0, d_uv), "limit is symmetric", w);
    const double bound = static_cast<double>(nlimit(s.u)) + static_cast<double>(nlimit(s.v));
    r.check_lazy(d_uv <= bound + tol * std::max(1.0, bound), "limit bounded by d_bar(g) + d_bar(h)", w);
    const bool distinct = point_gap(s.u.target, s.v.target) > 1e-12;
    r.check_lazy(!distinct || d_uv > zero_tol, "zero limit distance only on the diagonal", w);
    for (const auto& n : axis_neighbours(m, s.u)) {
      const double d0 = static_cast<double>(limit({s.u, n}));
      r.check_lazy(d0 > zero_tol, "zero limit distance only on the diagonal", [&] {
        std::ostringstream o;
        o << format_arrow(s.u) << ", " << format_arrow(n) << " limit " << (d0 < 1e-15 ? 0.0 : d0);
        return o.str();
      });
    }
  }
  r.note("sampled region: " + std::to_string(samples.size()) + " fiber samples");
  return out;
}

/// delta^x_{1/eps} delta^{delta^x_eps u}_mu delta^x_eps v.
template <typename Model>
typename Model::Arrow weak_limit_family(const Model& m, const typename Model::Scalar& eps,
                                        const typename Model::Scalar& mu, const typename Model::Arrow& x,
                                        const typename Model::Arrow& u, const typename Model::Arrow& v) {
  auto a = dilatation(m, eps, x, u);
  auto b = dilatation(m, eps, x, v);
  return dilatation(m, detail::reciprocal(eps), x, dilatation(m, mu, a, b));
}

/// The metric form of the weak limit dilation: for each mu,
/// delta^x_{1/eps} delta^{delta^x_eps u}_mu delta^x_eps v converges as
/// eps -> 0, with x the identity arrow of the fiber. Candidates come from
/// extrapolation; `limit_table` receives the estimated limits per mu.
template <typename Model>
std::vector<LimitEstimate> check_A4weak(const Model& m, const std::vector<FiberSample<Model>>& samples,
                                        const std::vector<double>& mu_grid,
                                        const std::vector<double>& grid = dyadic_grid(), double tol = 1e-5,
                                        std::vector<std::vector<typename Model::Arrow>>* limit_table = nullptr) {
  using S = typename Model::Scalar;
  using Arrow = typename Model::Arrow;
  std::vector<LimitEstimate> out;
  for (double mu : mu_grid) {
    std::function<Arrow(double, const FiberSample<Model>&)> fam = [m, mu](double e, const FiberSample<Model>& s) {
      return weak_limit_family(m, S(e), S(mu), m.identity(s.x), s.u, s.v);
    };
    auto cand = extrapolated<S, FiberSample<Model>, Arrow>(fam, grid);
    // Coordinates, not d: the Cygan gauge turns 1e-22 central noise into 1e-11.
    std::function<double(const Arrow&, const Arrow&)> cres = [](const Arrow& a, const Arrow& b) {
      return coordinate_residual(a, b);
    };
    auto est = uniform_limit<FiberSample<Model>, Arrow>("A4weak mu=" + detail::eps_str(mu), fam, cand, samples, grid,
                                                        cres, tol, residual_floor<S>());
    if (limit_table) {
      std::vector<Arrow> row;
      for (const auto& s : samples) row.push_back(cand(s));
      limit_table->push_back(std::move(row));
    }
    out.push_back(std::move(est));
  }
  return out;
}

struct StrongCheck {
  LimitEstimate a3mod;         // (1/eps) d(delta_eps g) -> d_bar(g)
  LimitEstimate a4;            // Delta_eps -> Delta
  LimitEstimate dif_to_delta;  // dif_eps -> Delta
  LimitEstimate identity;      // |d~_eps(g,h) - d_bar_eps(dif_eps(g,h))| along the grid
  ValidationReport report;
  bool passed() const { return a3mod.pass && a4.pass && dif_to_delta.pass && identity.pass && report.passed(); }
};

/// Strong limit axioms and the passage from them to the weak ones: d_bar
/// exists and vanishes only on identities, Delta_eps converges, dif_eps
/// converges to the same limit, and d~_0(g, h) = d_bar(Delta(g, h)). The last
/// equality is checked along the grid in the form
/// (1/eps) d(dif(delta_eps g, delta_eps h)) = (1/eps) d(delta_eps dif_eps(g, h))
/// and at the limit with extrapolated d~_0, Delta and d_bar.
template <typename Model>
StrongCheck check_A3mod_A4(const Model& m, const std::vector<FiberSample<Model>>& samples,
                           const std::vector<double>& grid = dyadic_grid(), double tol = 1e-5,
                           double zero_tol = 1e-5) {
  using S = typename Model::Scalar;
  using Arrow = typename Model::Arrow;
  using Pair = std::pair<Arrow, Arrow>;
  const double floor = residual_floor<S>();
  std::vector<Pair> pairs;
  std::vector<Arrow> singles;
  for (const auto& s : samples) pairs.emplace_back(s.u, s.v), singles.push_back(s.u);

  std::function<S(double, const Arrow&)> nfam = [m](double e, const Arrow& g) { return rescaled_norm(m, e, g); };
  auto dbar = extrapolated<S, Arrow, S>(nfam, grid);
  std::function<double(const S&, const S&)> sres = [](const S& a, const S& b) {
    using std::abs;
    return static_cast<double>(abs(S(a - b)));
  };
  StrongCheck out{uniform_limit<Arrow, S>("A3mod rescaled norm", nfam, dbar, singles, grid, sres, tol, floor),
                  {}, {}, {}, ValidationReport("strong limit axioms on " + m.name())};

  std::function<Arrow(double, const Pair&)> dfam = [m](double e, const Pair& p) {
    return approx_difference(m, S(e), p.first, p.second);
  };
  auto delta_lim = extrapolated<S, Pair, Arrow>(dfam, grid);
  std::function<double(const Arrow&, const Arrow&)> cres = [](const Arrow& a, const Arrow& b) {
    return coordinate_residual(a, b);
  };
  out.a4 = uniform_limit<Pair, Arrow>("A4 approximate difference", dfam, delta_lim, pairs, grid, cres, tol, floor);

  std::function<Arrow(double, const Pair&)> ffam = [m](double e, const Pair& p) {
    return approx_dif(m, S(e), p.first, p.second);
  };
  out.dif_to_delta = uniform_limit<Pair, Arrow>("dif_eps tends to Delta", ffam, delta_lim, pairs, grid, cres, tol, floor);

  std::function<S(double, const Pair&)> lhs = [m](double e, const Pair& p) {
    return rescaled_double_distance(m, e, p.first, p.second);
  };
  std::function<S(double, const Pair&)> rhs = [m](double e, const Pair& p) {
    return rescaled_norm(m, e, approx_dif(m, S(e), p.first, p.second));
  };
  {
    LimitEstimate& id = out.identity;
    id.axiom = "rescaled double distance equals rescaled norm of dif_eps";
    id.samples = pairs.size();
    for (double e : grid) {
      double sup = 0;
      for (const auto& p : pairs) {
        using std::abs;
        sup = std::max(sup, static_cast<double>(abs(S(lhs(e, p) - rhs(e, p)))));
      }
      id.eps.push_back(e);
      id.residual.push_back(sup);
    }
    fit_order(id, floor);
    decide(id, tol);
  }

  auto& r = out.report;
  auto d0 = extrapolated<S, Pair, S>(lhs, grid);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& p = pairs[i];
    const double a = static_cast<double>(d0(p));
    const double b = static_cast<double>(dbar(delta_lim(p)));
    r.check_lazy(std::abs(a - b) <= tol * std::max(1.0, a), "d~_0(g,h) = d_bar(Delta(g,h))", [&] {
      std::ostringstream o;
      o << format_arrow(p.first) << ", " << format_arrow(p.second) << ": " << a << " vs " << b;
      return o.str();
    });
    r.check_lazy(static_cast<double>(dbar(m.alpha(p.first))) <= zero_tol, "d_bar vanishes on identities",
                 [&] { return format_arrow(p.first); });
    for (const auto& n : axis_neighbours(m, m.alpha(p.first)))
      r.check_lazy(static_cast<double>(dbar(n)) > zero_tol, "d_bar zero only on identities",
                   [&] { return format_arrow(n); });
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fiber dilatation structures

/// (1/eps) d~(delta^y_eps u, delta^y_eps v) in the fiber.
template <typename Model>
typename Model::Scalar rescaled_fiber_distance(const Model& m, double eps, const typename Model::Arrow& y,
                                               const typename Model::Arrow& u, const typename Model::Arrow& v) {
  using S = typename Model::Scalar;
  const S e(eps);
  return double_norm(m, dilatation(m, e, y, u), dilatation(m, e, y, v)) / e;
}

/// The metric-space dilatation structure on a fiber: base y = u, points v, w
/// of each sample (all in alpha^-1(x)). Checks the action laws, contraction
/// toward the base, the rescaled distance limit with nondegeneracy, and
/// existence of the weak limit dilation.
template <typename Model>
LimitCheck fiber_dilatation_structure(const Model& m, const std::vector<FiberSample<Model>>& samples,
                                      const std::vector<double>& grid = dyadic_grid(),
                                      const std::vector<double>& action = {0.5, 0.25, 2.0}, double tol = 1e-5,
                                      double zero_tol = 1e-5) {
  using S = typename Model::Scalar;
  using Arrow = typename Model::Arrow;
  using Triple = std::array<Arrow, 3>;
  const double floor = residual_floor<S>();
  std::vector<Triple> triples;
  for (const auto& s : samples) triples.push_back({s.u, s.v, s.w});

  std::function<S(double, const Triple&)> fam = [m](double e, const Triple& t) {
    return rescaled_fiber_distance(m, e, t[0], t[1], t[2]);
  };
  auto dx = extrapolated<S, Triple, S>(fam, grid);
  std::function<double(const S&, const S&)> sres = [](const S& a, const S& b) {
    using std::abs;
    return static_cast<double>(abs(S(a - b)));
  };
  LimitCheck out{uniform_limit<Triple, S>("fiber A3 rescaled distance", fam, dx, triples, grid, sres, tol, floor),
                 ValidationReport("fiber dilatation structure on " + m.name())};
  auto& r = out.report;
  const double atol = std::is_same_v<S, Quad> ? 1e-20 : 1e-12;
  for (const auto& t : triples) {
    const auto &y = t[0], &u = t[1], &v = t[2];
    auto w = [&] { return format_arrow(y) + ", " + format_arrow(u); };
    r.check_lazy(same_arrow(dilatation(m, S(1), y, u), u, atol), "fiber A1 delta^y_1 is the identity", w);
    for (double e : action) {
      r.check_lazy(same_arrow(dilatation(m, S(e), y, y), y, atol), "fiber A1 base is fixed", w);
      for (double mu : action)
        r.check_lazy(same_arrow(dilatation(m, S(e), y, dilatation(m, S(mu), y, u)),
                                dilatation(m, S(S(e) * S(mu)), y, u), atol),
                     "fiber A1 action law", w);
    }
    const double d = static_cast<double>(dx(t));
    const double dvu = static_cast<double>(dx({y, v, u}));
    r.check_lazy(std::abs(d - dvu) <= tol * std::max(1.0, d), "fiber A3 limit distance is symmetric", w);
    r.check_lazy(point_gap(u.target, v.target) <= 1e-12 || d > zero_tol, "fiber A3 nondegenerate",
                 [&] { return format_arrow(u) + ", " + format_arrow(v); });
  }
  // A2: sup d~(delta^y_eps u, y) -> 0
  std::function<S(double, const Triple&)> contr = [m](double e, const Triple& t) {
    return double_norm(m, dilatation(m, S(e), t[0], t[1]), t[0]);
  };
  std::function<S(const Triple&)> zero = [](const Triple&) { return S(0); };
  auto a2 = uniform_limit<Triple, S>("fiber A2 contraction", contr, zero, triples, grid, sres, tol, floor);
  r.check_lazy(a2.pass, "fiber A2 contraction to the base", [&] { return a2.summary(); });
  // A4weak: the limit exists for a few mu, base y.
  for (double mu : {0.5, 0.25}) {
    std::function<Arrow(double, const Triple&)> wk = [m, mu](double e, const Triple& t) {
      return weak_limit_family(m, S(e), S(mu), t[0], t[1], t[2]);
    };
    std::function<double(const Arrow&, const Arrow&)> cres = [](const Arrow& a, const Arrow& b) {
      return coordinate_residual(a, b);
    };
    auto est = uniform_limit<Triple, Arrow>("fiber A4weak", wk, extrapolated<S, Triple, Arrow>(wk, grid), triples,
                                            grid, cres, tol, floor);
    r.check_lazy(est.pass, "fiber A4weak limit exists", [&] { return est.summary(); });
  }
  r.note("uniformity over the base certified on " + std::to_string(triples.size()) + " sampled triples only");
  return out;
}

/// Metric cone laws of the tangent distance: d^y(delta^y_mu u, delta^y_mu v)
/// = mu d^y(u, v), and the weak limit with u = y is delta^y_mu.
template <typename Model>
ValidationReport cone_check(const Model& m, const std::vector<FiberSample<Model>>& samples,
                            const std::vector<double>& mu_grid, const std::vector<double>& grid = dyadic_grid(),
                            double tol = 1e-10) {
  using S = typename Model::Scalar;
  using Arrow = typename Model::Arrow;
  using Triple = std::array<Arrow, 3>;
  ValidationReport r("metric cone on " + m.name());
  std::function<S(double, const Triple&)> fam = [m](double e, const Triple& t) {
    return rescaled_fiber_distance(m, e, t[0], t[1], t[2]);
  };
  auto dx = extrapolated<S, Triple, S>(fam, grid);
  for (const auto& s : samples) {
    const auto &y = s.u, &u = s.v, &v = s.w;
    const double base = static_cast<double>(dx({y, u, v}));
    for (double mu : mu_grid) {
      auto w = [&] { return format_arrow(y) + ", " + format_arrow(u) + ", " + format_arrow(v) + " mu=" + std::to_string(mu); };
      const double scaled =
          static_cast<double>(dx({y, dilatation(m, S(mu), y, u), dilatation(m, S(mu), y, v)}));
      r.check_lazy(std::abs(scaled - mu * base) <= tol * std::max(1.0, base), "tangent distance is homogeneous", w);
      std::function<Arrow(double, const Triple&)> wk = [m, mu](double e, const Triple& t) {
        return weak_limit_family(m, S(e), S(mu), t[0], t[0], t[2]);
      };
      const auto lim = extrapolated<S, Triple, Arrow>(wk, grid)({y, y, u});
      r.check_lazy(coordinate_residual(lim, dilatation(m, S(mu), y, u)) <= tol, "weak limit at the base is delta^y_mu",
                   w);
    }
  }
  return r;
}

/// Distortion of the identity correspondence between the rescaled ball
/// (B(y, A), (1/eps) d(delta^y_eps ., delta^y_eps .)) and (B(y, A), d^y) over
/// sampled pairs; half the distortion bounds the Gromov-Hausdorff distance
/// from above.
template <typename Model>
LimitEstimate gh_estimate(const Model& m, const typename Model::Point& y, double A, const BoundedSampler& sampler,
                          const std::vector<double>& grid = dyadic_grid(), double tol = 1e-5) {
  using S = typename Model::Scalar;
  using Arrow = typename Model::Arrow;
  using Triple = std::array<Arrow, 3>;
  std::mt19937_64 rng(sampler.seed);
  const Arrow base = m.identity(y);
  std::vector<Triple> pairs;
  for (std::size_t i = 0; i < sampler.samples; ++i)
    pairs.push_back({base, Arrow{detail::sample_ball(m, rng, A, y), y}, Arrow{detail::sample_ball(m, rng, A, y), y}});
  std::function<S(double, const Triple&)> fam = [m](double e, const Triple& t) {
    return rescaled_fiber_distance(m, e, t[0], t[1], t[2]);
  };
  std::function<double(const S&, const S&)> sres = [](const S& a, const S& b) {
    using std::abs;
    return static_cast<double>(abs(S(a - b)));
  };
  auto est = uniform_limit<Triple, S>("Gromov-Hausdorff distortion", fam, extrapolated<S, Triple, S>(fam, grid), pairs,
                                      grid, sres, tol, residual_floor<S>());
  est.trace.push_back("distortion is an upper bound for twice the Gromov-Hausdorff distance");
  return est;
}

// ---------------------------------------------------------------------------
// Translation groupoid

/// Arrows Sigma^x_eps(u, .) of one fiber at a fixed scale. The arrow for u
/// goes from the rescaled distance based at x o_eps u to the one based at x.
template <typename Model>
class TranslationGroupoid {
 public:
  using S = typename Model::Scalar;
  using Point = typename Model::Point;

  TranslationGroupoid(const Model& m, const Point& object, S eps)
      : m_(m), object_(object), eps_(eps), q_(irq_from_dilation(m, eps, object)) {}

  /// Sigma^x_eps(u, v) on target coordinates.
  Point apply(const Point& x, const Point& u, const Point& v) const { return irq_sum(q_, x, u, v); }
  /// Base point of the source distance of the arrow (x, u).
  Point source_base(const Point& x, const Point& u) const { return q_.circ(x, u); }
  /// The inverse arrow of (x, u) is (x o u, inv(x, u)).
  std::pair<Point, Point> inverse(const Point& x, const Point& u) const {
    return {q_.circ(x, u), irq_inverse(q_, x, u)};
  }
  /// (x, u) after (x o u, v) is (x, Sigma^x(u, v)).
  std::pair<Point, Point> compose(const Point& x, const Point& u, const Point& v) const {
    return {x, apply(x, u, v)};
  }
  /// d^y_eps(a, b) = (1/eps) d~(delta^y_eps a, delta^y_eps b).
  S distance(const Point& y, const Point& a, const Point& b) const {
    typename Model::Arrow Y{y, object_}, A{a, object_}, B{b, object_};
    return double_norm(m_, dilatation(m_, eps_, Y, A), dilatation(m_, eps_, Y, B)) / eps_;
  }
  const Irq<Point>& irq() const { return q_; }
  const S& eps() const { return eps_; }

 private:
  Model m_;
  Point object_;
  S eps_;
  Irq<Point> q_;
};

/// Composition closure, inverses, isometry of every arrow and associativity
/// of composition on sampled (x, u, v, w).
template <typename Model>
ValidationReport check_translation_groupoid(const TranslationGroupoid<Model>& T,
                                            const std::vector<std::array<typename Model::Point, 4>>& samples,
                                            double tol = 1e-12) {
  using P = typename Model::Point;
  ValidationReport r("translation groupoid at eps=" + std::to_string(static_cast<double>(T.eps())));
  auto close = [tol](const P& a, const P& b) { return point_gap(a, b) <= tol; };
  for (const auto& s : samples) {
    const P &x = s[0], &u = s[1], &v = s[2], &w = s[3];
    auto wit = [&] {
      return "x=" + format_point(x) + " u=" + format_point(u) + " v=" + format_point(v) + " w=" + format_point(w);
    };
    // Sigma^x(u, .) after Sigma^{x o u}(v, .) is Sigma^x(Sigma^x(u, v), .).
    const P xu = T.source_base(x, u);
    const P uv = T.apply(x, u, v);
    r.check_lazy(close(T.apply(x, u, T.apply(xu, v, w)), T.apply(x, uv, w)), "composition closure", wit);
    r.check_lazy(close(T.source_base(xu, v), T.source_base(x, uv)), "composite has the expected source", wit);
    const auto [ib, iu] = T.inverse(x, u);
    r.check_lazy(close(T.apply(x, u, T.apply(ib, iu, v)), v) && close(T.apply(ib, iu, T.apply(x, u, v)), v),
                 "inverse arrow", wit);
    r.check_lazy(close(T.source_base(ib, iu), x), "inverse swaps source and target", wit);
    const double lhs = static_cast<double>(T.distance(x, T.apply(x, u, v), T.apply(x, u, w)));
    const double rhs = static_cast<double>(T.distance(xu, v, w));
    r.check_lazy(std::abs(lhs - rhs) <= tol * std::max({1.0, lhs, rhs}), "arrows are isometries", wit);
    // ((x,u) (xu,v)) (x u v-base, w) = (x,u) ((xu,v) (.., w))
    const P xuv = T.source_base(xu, v);
    const P left = T.apply(x, uv, w);
    const P right = T.apply(x, u, T.apply(xu, v, w));
    r.check_lazy(close(left, right), "composition is associative", wit);
    (void)xuv;
  }
  return r;
}

}  // namespace ngd
