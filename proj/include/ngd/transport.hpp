#pragma once

#include "ngd/constructions.hpp"
#include "ngd/groupoid.hpp"

#include <optional>
#include <random>
#include <vector>

namespace ngd {

/// A probability on the points of a finite metric space.
struct Measure {
  std::vector<Rational> weights;

  std::size_t size() const { return weights.size(); }
  const Rational& operator[](std::size_t i) const { return weights[i]; }
  bool operator==(const Measure& o) const { return weights == o.weights; }
  bool operator!=(const Measure& o) const { return !(*this == o); }
};

/// Nonnegative weights summing to one; throws PreconditionError otherwise.
Measure make_measure(std::vector<Rational> weights);
Measure point_mass(std::size_t n, std::size_t at);
std::string to_string(const Measure& m);

/// A transport plan gamma in Pi(mu, nu): gamma(x, y) is the mass sent from x
/// to y, rows sum to mu and columns to nu.
class Coupling {
 public:
  /// Marginals are read off the matrix. Throws on negative entries or a total
  /// mass other than one.
  explicit Coupling(RationalMatrix gamma);
  /// Rejects the plan unless its marginals equal the declared ones exactly.
  Coupling(RationalMatrix gamma, const Measure& mu, const Measure& nu);

  const RationalMatrix& matrix() const { return gamma_; }
  const Rational& operator()(std::size_t x, std::size_t y) const {
    return gamma_(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
  }
  const Measure& mu() const { return mu_; }
  const Measure& nu() const { return nu_; }
  std::size_t size() const { return mu_.size(); }

  bool operator==(const Coupling& o) const { return exactly_equal(gamma_, o.gamma_); }
  bool operator!=(const Coupling& o) const { return !(*this == o); }

 private:
  RationalMatrix gamma_;
  Measure mu_, nu_;
};

std::string to_string(const Coupling& c);

/// diag(mu), the identity plan at mu.
Coupling diagonal_plan(const Measure& mu);
/// mu (x) nu.
Coupling product_plan(const Measure& mu, const Measure& nu);

/// gamma' o gamma for gamma in Pi(mu, nu), gamma' in Pi(nu, mu'):
/// sum over x2 with nu(x2) > 0 of gamma(x1, x2) gamma'(x2, x3) / nu(x2).
/// Throws PreconditionError naming the first coordinate where the middle
/// marginals differ.
Coupling compose_plans(const Coupling& gamma, const Coupling& gamma2);
Coupling inverse_plan(const Coupling& gamma);

/// sum d(x, y) gamma(x, y).
Rational norm_d(const FiniteMetricSpace& X, const Coupling& gamma);

/// First pair (x, y) with |u(x) - u(y)| > d(x, y), if any.
std::optional<std::pair<std::size_t, std::size_t>> lipschitz_violation(const FiniteMetricSpace& X,
                                                                        const std::vector<Rational>& u);
/// |sum (u(x) - u(y)) gamma(x, y)|. Throws PreconditionError with the
/// offending pair when u is not 1-Lipschitz.
Rational seminorm_rho(const FiniteMetricSpace& X, const std::vector<Rational>& u, const Coupling& gamma);

/// Vertices of the 1-Lipschitz polytope normalised by u(first point) = 0.
/// Each vertex is grown from a tree of tight constraints u(x) = u(y) +- d(x, y).
std::vector<std::vector<Rational>> lip1_vertices(const FiniteMetricSpace& X);

// ---------------------------------------------------------------------------
// Exact linear programming

struct LpResult {
  enum class Status { optimal, infeasible, unbounded };
  Status status = Status::infeasible;
  std::vector<Rational> x;
  Rational value;
  std::size_t pivots = 0;
};

/// min c.x subject to A x = b, x >= 0, by the two-phase simplex method with
/// Bland's rule over exact rationals.
LpResult solve_lp(const RationalMatrix& A, const std::vector<Rational>& b, const std::vector<Rational>& c);

struct KantorovichResult {
  Coupling plan;                    // optimal gamma*
  std::vector<Rational> potential;  // optimal u*, u*(first point) = 0
  Rational primal;                  // d(gamma*)
  Rational dual;                    // sum u* (mu - nu)
  Rational gap() const { return primal - dual; }
};

/// Primal: min d(gamma) over Pi(mu, nu). Dual: max sum u (mu - nu) subject to
/// u(x) - u(y) <= d(x, y). The two programs are solved independently.
KantorovichResult kantorovich(const FiniteMetricSpace& X, const Measure& mu, const Measure& nu);

// ---------------------------------------------------------------------------
// Plans induced by maps

/// (id x f) pushed forward by mu: gamma(x, y) = mu(x) [y = f(x)].
Coupling map_plan(const std::vector<std::size_t>& f, const Measure& mu);
Measure push_forward(const std::vector<std::size_t>& f, const Measure& mu);
/// f = g mu-almost everywhere.
bool equal_almost_everywhere(const std::vector<std::size_t>& f, const std::vector<std::size_t>& g,
                             const Measure& mu);

struct InvtransWitness {
  std::vector<std::size_t> f;  // forward map on supp(mu); identity elsewhere
  std::vector<std::size_t> g;  // backward map on supp(nu); identity elsewhere
};

/// gamma = (f, mu) with (f, mu)^-1 = (g, f#mu) exactly when every row and
/// every column in the support holds a single nonzero entry.
std::optional<InvtransWitness> is_invtrans(const Coupling& gamma);

// ---------------------------------------------------------------------------
// Trans(X) as a category with inverses

/// Objects are measures, gamma in Pi(mu, nu) goes from mu to nu, and
/// compose(g, h) = g o h. With `with_norm` the norm d is attached, together
/// with rho_u for every Lipschitz polytope vertex.
CategoryWithInverses<Coupling, Measure> trans_category(const FiniteMetricSpace& X, std::vector<Coupling> plans,
                                                       bool with_norm);

/// Norm and seminorm clauses of Trans(X) with the identity plans diag(mu)
/// as units: d vanishes exactly on diagonal plans, is subadditive and
/// inversion invariant, dominates every rho_u, d(gamma^-1 o gamma) <=
/// 2 d(gamma), gamma^-1 o gamma and gamma o gamma^-1 are both diagonal iff
/// gamma is in Invtrans, and the rho_u separate distinct marginals.
ValidationReport check_trans_norms(const FiniteMetricSpace& X, const std::vector<Coupling>& plans);

// ---------------------------------------------------------------------------
// Random instances

/// Weights drawn as integers in [1, 9] (or [0, 9] without full support) and
/// normalised.
Measure random_measure(std::mt19937_64& rng, std::size_t n, bool full_support = true);
/// A plan with first marginal mu and random rows.
Coupling random_plan_from(std::mt19937_64& rng, const Measure& mu, bool full_support = true);

}  // namespace ngd
