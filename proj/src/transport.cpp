#include "ngd/transport.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace ngd {

namespace {

using Index = Eigen::Index;

Index ix(std::size_t i) { return static_cast<Index>(i); }

std::string join(const std::vector<Rational>& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + to_string(v[i]);
  return out + ")";
}

Rational abs_r(const Rational& r) { return r < 0 ? Rational(-r) : r; }

}  // namespace

Measure make_measure(std::vector<Rational> weights) {
  Rational total = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] < 0)
      throw PreconditionError("measure weight " + std::to_string(i) + " is negative: " + to_string(weights[i]));
    total += weights[i];
  }
  if (total != 1) throw PreconditionError("measure weights sum to " + to_string(total) + ", not 1");
  return Measure{std::move(weights)};
}

Measure point_mass(std::size_t n, std::size_t at) {
  std::vector<Rational> w(n, Rational(0));
  w.at(at) = 1;
  return Measure{std::move(w)};
}

std::string to_string(const Measure& m) { return join(m.weights); }

Coupling::Coupling(RationalMatrix gamma) : gamma_(std::move(gamma)) {
  if (gamma_.rows() != gamma_.cols()) throw PreconditionError("plan matrix is not square");
  const std::size_t n = static_cast<std::size_t>(gamma_.rows());
  std::vector<Rational> rows(n, Rational(0)), cols(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Rational& g = gamma_(ix(i), ix(j));
      if (g < 0)
        throw PreconditionError("plan entry (" + std::to_string(i) + ", " + std::to_string(j) +
                                ") is negative: " + to_string(g));
      rows[i] += g;
      cols[j] += g;
    }
  mu_ = make_measure(std::move(rows));
  nu_ = make_measure(std::move(cols));
}

Coupling::Coupling(RationalMatrix gamma, const Measure& mu, const Measure& nu) : Coupling(std::move(gamma)) {
  for (std::size_t i = 0; i < mu_.size(); ++i) {
    if (i >= mu.size() || mu_[i] != mu[i])
      throw PreconditionError("row sum " + std::to_string(i) + " is " + to_string(mu_[i]) + ", declared " +
                              (i < mu.size() ? to_string(mu[i]) : std::string("nothing")));
    if (i >= nu.size() || nu_[i] != nu[i])
      throw PreconditionError("column sum " + std::to_string(i) + " is " + to_string(nu_[i]) + ", declared " +
                              (i < nu.size() ? to_string(nu[i]) : std::string("nothing")));
  }
  if (mu.size() != mu_.size() || nu.size() != nu_.size())
    throw PreconditionError("declared marginals have the wrong length");
}

std::string to_string(const Coupling& c) {
  std::string out = "[";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += "; ";
    for (std::size_t j = 0; j < c.size(); ++j) out += (j ? " " : "") + to_string(c(i, j));
  }
  return out + "]";
}

Coupling diagonal_plan(const Measure& mu) {
  RationalMatrix g = RationalMatrix::Constant(ix(mu.size()), ix(mu.size()), Rational(0));
  for (std::size_t i = 0; i < mu.size(); ++i) g(ix(i), ix(i)) = mu[i];
  return Coupling(std::move(g));
}

Coupling product_plan(const Measure& mu, const Measure& nu) {
  if (mu.size() != nu.size()) throw PreconditionError("measures live on different spaces");
  RationalMatrix g(ix(mu.size()), ix(nu.size()));
  for (std::size_t i = 0; i < mu.size(); ++i)
    for (std::size_t j = 0; j < nu.size(); ++j) g(ix(i), ix(j)) = mu[i] * nu[j];
  return Coupling(std::move(g));
}

Coupling compose_plans(const Coupling& gamma, const Coupling& gamma2) {
  if (gamma.size() != gamma2.size()) throw PreconditionError("plans live on different spaces");
  const Measure& nu = gamma.nu();
  for (std::size_t i = 0; i < nu.size(); ++i)
    if (nu[i] != gamma2.mu()[i])
      throw PreconditionError("middle marginals differ at point " + std::to_string(i) + ": " + to_string(nu[i]) +
                              " vs " + to_string(gamma2.mu()[i]));
  const std::size_t n = gamma.size();
  RationalMatrix out = RationalMatrix::Constant(ix(n), ix(n), Rational(0));
  for (std::size_t x2 = 0; x2 < n; ++x2) {
    if (nu[x2] == 0) continue;
    for (std::size_t x1 = 0; x1 < n; ++x1) {
      if (gamma(x1, x2) == 0) continue;
      const Rational w = gamma(x1, x2) / nu[x2];
      for (std::size_t x3 = 0; x3 < n; ++x3) out(ix(x1), ix(x3)) += w * gamma2(x2, x3);
    }
  }
  return Coupling(std::move(out), gamma.mu(), gamma2.nu());
}

Coupling inverse_plan(const Coupling& gamma) {
  const std::size_t n = gamma.size();
  RationalMatrix t(ix(n), ix(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) t(ix(j), ix(i)) = gamma(i, j);
  return Coupling(std::move(t), gamma.nu(), gamma.mu());
}

Rational norm_d(const FiniteMetricSpace& X, const Coupling& gamma) {
  if (X.size() != gamma.size()) throw PreconditionError("plan and space sizes differ");
  Rational total = 0;
  for (std::size_t i = 0; i < X.size(); ++i)
    for (std::size_t j = 0; j < X.size(); ++j) total += X.dist(ix(i), ix(j)) * gamma(i, j);
  return total;
}

std::optional<std::pair<std::size_t, std::size_t>> lipschitz_violation(const FiniteMetricSpace& X,
                                                                        const std::vector<Rational>& u) {
  if (u.size() != X.size()) throw PreconditionError("function and space sizes differ");
  for (std::size_t i = 0; i < X.size(); ++i)
    for (std::size_t j = i + 1; j < X.size(); ++j)
      if (abs_r(u[i] - u[j]) > X.dist(ix(i), ix(j))) return std::make_pair(i, j);
  return std::nullopt;
}

Rational seminorm_rho(const FiniteMetricSpace& X, const std::vector<Rational>& u, const Coupling& gamma) {
  if (auto bad = lipschitz_violation(X, u)) {
    const auto [i, j] = *bad;
    throw PreconditionError("u is not 1-Lipschitz at (" + X.points[i] + ", " + X.points[j] + "): |" +
                            to_string(u[i]) + " - " + to_string(u[j]) + "| > " + to_string(X.dist(ix(i), ix(j))));
  }
  Rational total = 0;
  for (std::size_t i = 0; i < X.size(); ++i)
    for (std::size_t j = 0; j < X.size(); ++j) total += (u[i] - u[j]) * gamma(i, j);
  return abs_r(total);
}

std::vector<std::vector<Rational>> lip1_vertices(const FiniteMetricSpace& X) {
  const std::size_t n = X.size();
  if (n == 0) return {};
  std::set<std::vector<Rational>> found;
  std::vector<Rational> u(n, Rational(0));
  std::vector<bool> assigned(n, false);
  assigned[0] = true;
  // Grow a tree of tight constraints one point at a time.
  std::function<void(std::size_t)> grow = [&](std::size_t count) {
    if (count == n) {
      if (!lipschitz_violation(X, u)) found.insert(u);
      return;
    }
    for (std::size_t x = 0; x < n; ++x) {
      if (assigned[x]) continue;
      assigned[x] = true;
      for (std::size_t y = 0; y < n; ++y) {
        if (y == x || !assigned[y]) continue;
        for (int sign : {1, -1}) {
          u[x] = u[y] + Rational(sign) * X.dist(ix(x), ix(y));
          grow(count + 1);
        }
      }
      assigned[x] = false;
    }
  };
  grow(1);
  return {found.begin(), found.end()};
}

// ---------------------------------------------------------------------------

LpResult solve_lp(const RationalMatrix& A, const std::vector<Rational>& b, const std::vector<Rational>& c) {
  const std::size_t m = static_cast<std::size_t>(A.rows());
  const std::size_t n = static_cast<std::size_t>(A.cols());
  if (b.size() != m || c.size() != n) throw PreconditionError("LP dimensions do not match");
  const std::size_t width = n + m + 1;  // originals, artificials, rhs
  const std::size_t rhs = n + m;
  std::vector<std::vector<Rational>> T(m, std::vector<Rational>(width, Rational(0)));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    const bool flip = b[i] < 0;
    for (std::size_t j = 0; j < n; ++j) T[i][j] = flip ? Rational(-A(ix(i), ix(j))) : A(ix(i), ix(j));
    T[i][rhs] = flip ? Rational(-b[i]) : b[i];
    T[i][n + i] = 1;
    basis[i] = n + i;
  }
  LpResult result;
  std::vector<Rational> z(width, Rational(0));

  auto pivot = [&](std::size_t r, std::size_t col) {
    const Rational p = T[r][col];
    for (auto& v : T[r]) v /= p;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || T[i][col] == 0) continue;
      const Rational f = T[i][col];
      for (std::size_t j = 0; j < width; ++j)
        if (T[r][j] != 0) T[i][j] -= f * T[r][j];
    }
    if (z[col] != 0) {
      const Rational f = z[col];
      for (std::size_t j = 0; j < width; ++j)
        if (T[r][j] != 0) z[j] -= f * T[r][j];
    }
    basis[r] = col;
    ++result.pivots;
  };
  // Bland's rule: lowest eligible entering column, lowest basis index among
  // tied ratios. Returns false when unbounded.
  auto iterate = [&](std::size_t allowed) {
    for (;;) {
      std::size_t enter = allowed;
      for (std::size_t j = 0; j < allowed; ++j)
        if (z[j] < 0) {
          enter = j;
          break;
        }
      if (enter == allowed) return true;
      std::optional<std::size_t> leave;
      Rational best;
      for (std::size_t i = 0; i < m; ++i) {
        if (T[i][enter] <= 0) continue;
        const Rational ratio = T[i][rhs] / T[i][enter];
        if (!leave || ratio < best || (ratio == best && basis[i] < basis[*leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (!leave) return false;
      pivot(*leave, enter);
    }
  };

  // Phase 1: minimise the sum of artificials.
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < width; ++j)
      if (j < n || j == rhs) z[j] -= T[i][j];
  iterate(n + m);
  if (z[rhs] != 0) {
    result.status = LpResult::Status::infeasible;
    return result;
  }
  // Drive artificials out of the basis; rows with no original entry are redundant.
  std::vector<bool> redundant(m, false);
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) continue;
    std::optional<std::size_t> col;
    for (std::size_t j = 0; j < n; ++j)
      if (T[i][j] != 0) {
        col = j;
        break;
      }
    if (col)
      pivot(i, *col);
    else
      redundant[i] = true;
  }

  // Phase 2 on the original columns.
  std::fill(z.begin(), z.end(), Rational(0));
  for (std::size_t j = 0; j < n; ++j) z[j] = c[j];
  for (std::size_t i = 0; i < m; ++i) {
    if (redundant[i] || basis[i] >= n) continue;
    const Rational cb = c[basis[i]];
    if (cb == 0) continue;
    for (std::size_t j = 0; j < width; ++j)
      if (T[i][j] != 0) z[j] -= cb * T[i][j];
  }
  for (std::size_t j = n; j < n + m; ++j) z[j] = 0;
  if (!iterate(n)) {
    result.status = LpResult::Status::unbounded;
    return result;
  }
  result.status = LpResult::Status::optimal;
  result.x.assign(n, Rational(0));
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) result.x[basis[i]] = T[i][rhs];
  result.value = 0;
  for (std::size_t j = 0; j < n; ++j) result.value += c[j] * result.x[j];
  return result;
}

KantorovichResult kantorovich(const FiniteMetricSpace& X, const Measure& mu, const Measure& nu) {
  const std::size_t n = X.size();
  if (mu.size() != n || nu.size() != n) throw PreconditionError("measures and space sizes differ");
  if (n == 0) throw PreconditionError("empty space");

  // Primal over gamma(i, j), variable i * n + j.
  RationalMatrix A = RationalMatrix::Constant(ix(2 * n), ix(n * n), Rational(0));
  std::vector<Rational> b(2 * n), c(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    b[i] = mu[i];
    b[n + i] = nu[i];
    for (std::size_t j = 0; j < n; ++j) {
      A(ix(i), ix(i * n + j)) = 1;
      A(ix(n + j), ix(i * n + j)) = 1;
      c[i * n + j] = X.dist(ix(i), ix(j));
    }
  }
  const LpResult primal = solve_lp(A, b, c);
  if (primal.status != LpResult::Status::optimal)
    throw std::logic_error("transport LP not optimal for valid measures");
  RationalMatrix g(ix(n), ix(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(ix(i), ix(j)) = primal.x[i * n + j];

  // Dual with u(0) = 0: u(x) = p_x - q_x for x >= 1, slack s_xy per ordered pair,
  // u(x) - u(y) + s_xy = d(x, y); maximise sum u (mu - nu).
  const std::size_t free = n - 1;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (x != y) pairs.emplace_back(x, y);
  const std::size_t vars = 2 * free + pairs.size();
  RationalMatrix D = RationalMatrix::Constant(ix(pairs.size()), ix(vars), Rational(0));
  std::vector<Rational> db(pairs.size()), dc(vars, Rational(0));
  auto add_u = [&](std::size_t row, std::size_t x, int sign) {
    if (x == 0) return;
    D(ix(row), ix(x - 1)) += Rational(sign);
    D(ix(row), ix(free + x - 1)) -= Rational(sign);
  };
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [x, y] = pairs[k];
    add_u(k, x, 1);
    add_u(k, y, -1);
    D(ix(k), ix(2 * free + k)) = 1;
    db[k] = X.dist(ix(x), ix(y));
  }
  for (std::size_t x = 1; x < n; ++x) {
    dc[x - 1] = -(mu[x] - nu[x]);
    dc[free + x - 1] = mu[x] - nu[x];
  }
  const LpResult dual = solve_lp(D, db, dc);
  if (dual.status != LpResult::Status::optimal)
    throw std::logic_error("Kantorovich dual LP not optimal for valid measures");
  std::vector<Rational> u(n, Rational(0));
  for (std::size_t x = 1; x < n; ++x) u[x] = dual.x[x - 1] - dual.x[free + x - 1];
  Rational dual_value = 0;
  for (std::size_t x = 0; x < n; ++x) dual_value += u[x] * (mu[x] - nu[x]);

  Coupling plan(std::move(g), mu, nu);
  Rational primal_value = norm_d(X, plan);
  return {std::move(plan), std::move(u), std::move(primal_value), std::move(dual_value)};
}

// ---------------------------------------------------------------------------

Measure push_forward(const std::vector<std::size_t>& f, const Measure& mu) {
  if (f.size() != mu.size()) throw PreconditionError("map and measure sizes differ");
  std::vector<Rational> w(mu.size(), Rational(0));
  for (std::size_t x = 0; x < f.size(); ++x) {
    if (mu[x] == 0) continue;
    if (f[x] >= mu.size()) throw PreconditionError("map leaves the space at point " + std::to_string(x));
    w[f[x]] += mu[x];
  }
  return Measure{std::move(w)};
}

Coupling map_plan(const std::vector<std::size_t>& f, const Measure& mu) {
  const Measure target = push_forward(f, mu);
  RationalMatrix g = RationalMatrix::Constant(ix(mu.size()), ix(mu.size()), Rational(0));
  for (std::size_t x = 0; x < f.size(); ++x)
    if (mu[x] != 0) g(ix(x), ix(f[x])) = mu[x];
  return Coupling(std::move(g), mu, target);
}

bool equal_almost_everywhere(const std::vector<std::size_t>& f, const std::vector<std::size_t>& g,
                             const Measure& mu) {
  for (std::size_t x = 0; x < mu.size(); ++x)
    if (mu[x] != 0 && f.at(x) != g.at(x)) return false;
  return true;
}

std::optional<InvtransWitness> is_invtrans(const Coupling& gamma) {
  const std::size_t n = gamma.size();
  InvtransWitness w;
  w.f.resize(n);
  w.g.resize(n);
  for (std::size_t x = 0; x < n; ++x) {
    w.f[x] = x;
    w.g[x] = x;
  }
  for (std::size_t x = 0; x < n; ++x) {
    if (gamma.mu()[x] == 0) continue;
    std::size_t count = 0;
    for (std::size_t y = 0; y < n; ++y)
      if (gamma(x, y) != 0) ++count, w.f[x] = y;
    if (count != 1) return std::nullopt;
  }
  for (std::size_t y = 0; y < n; ++y) {
    if (gamma.nu()[y] == 0) continue;
    std::size_t count = 0;
    for (std::size_t x = 0; x < n; ++x)
      if (gamma(x, y) != 0) ++count, w.g[y] = x;
    if (count != 1) return std::nullopt;
  }
  return w;
}

// ---------------------------------------------------------------------------

CategoryWithInverses<Coupling, Measure> trans_category(const FiniteMetricSpace& X, std::vector<Coupling> plans,
                                                       bool with_norm) {
  CategoryWithInverses<Coupling, Measure> c;
  c.arrows = std::move(plans);
  c.source = [](const Coupling& g) { return g.mu(); };
  c.target = [](const Coupling& g) { return g.nu(); };
  c.compose = [](const Coupling& g, const Coupling& h) { return compose_plans(h, g); };
  c.inverse = [](const Coupling& g) { return inverse_plan(g); };
  c.describe = [](const Coupling& g) { return to_string(g); };
  if (with_norm) {
    c.norm = [X](const Coupling& g) { return norm_d(X, g); };
    for (auto& u : lip1_vertices(X))
      c.seminorms.push_back([X, u](const Coupling& g) { return seminorm_rho(X, u, g); });
  }
  return c;
}

namespace {

bool is_diagonal(const Coupling& g) {
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j)
      if (i != j && g(i, j) != 0) return false;
  return true;
}

}  // namespace

ValidationReport check_trans_norms(const FiniteMetricSpace& X, const std::vector<Coupling>& plans) {
  ValidationReport r("transport norms on " + std::to_string(X.size()) + " points");
  const auto vertices = lip1_vertices(X);
  for (const auto& g : plans) {
    auto w = [&] { return to_string(g); };
    const Rational dg = norm_d(X, g);
    r.check_lazy(dg >= 0, "norm is nonnegative", w);
    r.check_lazy((dg == 0) == is_diagonal(g), "norm zero exactly on diagonal plans", w);
    r.check_lazy(norm_d(X, diagonal_plan(g.mu())) == 0, "identity plans have norm zero", w);
    r.check_lazy(norm_d(X, inverse_plan(g)) == dg, "norm inversion invariant", w);
    const Coupling loop = compose_plans(g, inverse_plan(g));
    const Coupling coloop = compose_plans(inverse_plan(g), g);
    r.check_lazy(norm_d(X, loop) <= 2 * dg, "d(gamma^-1 o gamma) <= 2 d(gamma)", w);
    // One loop being diagonal only says the columns (or rows) are single.
    r.check_lazy((is_diagonal(loop) && is_diagonal(coloop)) == is_invtrans(g).has_value(),
                 "both loops are diagonal exactly on Invtrans", w);
    bool separated = false;
    for (const auto& u : vertices) {
      const Rational rho = seminorm_rho(X, u, g);
      r.check_lazy(rho <= dg, "d dominates rho_u", [&] { return w() + " u=" + join(u); });
      r.check_lazy(seminorm_rho(X, u, inverse_plan(g)) == rho, "rho_u inversion invariant", w);
      if (rho != 0) separated = true;
    }
    r.check_lazy(separated == (g.mu() != g.nu()), "rho_u separate distinct marginals", w);
    for (const auto& h : plans) {
      if (h.mu() != g.nu()) continue;
      const Coupling hg = compose_plans(g, h);
      r.check_lazy(norm_d(X, hg) <= dg + norm_d(X, h), "norm subadditive", [&] { return w() + " ; " + to_string(h); });
    }
  }
  r.note("Lipschitz polytope vertices: " + std::to_string(vertices.size()));
  return r;
}

Measure random_measure(std::mt19937_64& rng, std::size_t n, bool full_support) {
  std::uniform_int_distribution<int> pick(full_support ? 1 : 0, 9);
  std::vector<Rational> w(n);
  Rational total = 0;
  do {
    total = 0;
    for (auto& x : w) total += (x = pick(rng));
  } while (total == 0);
  for (auto& x : w) x /= total;
  return Measure{std::move(w)};
}

Coupling random_plan_from(std::mt19937_64& rng, const Measure& mu, bool full_support) {
  const std::size_t n = mu.size();
  std::uniform_int_distribution<int> pick(full_support ? 1 : 0, 9);
  RationalMatrix g = RationalMatrix::Constant(ix(n), ix(n), Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Rational> row(n);
    Rational total = 0;
    do {
      total = 0;
      for (auto& x : row) total += (x = pick(rng));
    } while (total == 0);
    for (std::size_t j = 0; j < n; ++j) g(ix(i), ix(j)) = mu[i] * row[j] / total;
  }
  return Coupling(std::move(g));
}

}  // namespace ngd
