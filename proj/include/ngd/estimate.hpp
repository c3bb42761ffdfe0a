#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace ngd {

/// Sup-residuals of a family against its candidate limit along a scale grid.
struct LimitEstimate {
  std::string axiom;
  std::vector<double> eps;
  std::vector<double> residual;
  /// Least-squares slope of log residual against log eps; empty when the
  /// residuals sit at the floor (exact at every grid point).
  std::optional<double> order;
  bool exact = false;
  /// Residuals grow along the grid beyond noise.
  bool nonmonotone = false;
  bool pass = false;
  double tol = 0.0;
  std::size_t samples = 0;
  /// Set when evaluation left a declared domain; holds the failing stage.
  std::string partial;
  std::vector<std::string> trace;

  nlohmann::json to_json() const;
  std::string summary() const;
};

/// Fills order, exact and nonmonotone from eps/residual. Residuals below
/// `floor` count as zero; the order is fitted over the last `window` points
/// above the floor.
void fit_order(LimitEstimate& est, double floor = 1e-13, std::size_t window = 8);

/// Standard verdict: final residual below tol and no growth along the grid.
void decide(LimitEstimate& est, double tol);

}  // namespace ngd
