#pragma once

#include "ngd/estimate.hpp"
#include "ngd/report.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ngd {

/// Settings shared by the named verification suites.
struct SuiteConfig {
  std::string model = "euclidean";  // euclidean | heisenberg
  int dim = 1;                      // Euclidean dimension
  std::uint64_t seed = 42;
  double radius = 4.0;
  std::size_t samples = 1000;
  std::optional<std::vector<double>> eps_grid;  // limit grid; dyadic 2^-1..2^-20 when unset
  std::optional<double> tol;                    // limit tolerance; per-check defaults when unset
};

struct SuiteResult {
  std::string name;
  std::vector<ValidationReport> reports;
  std::vector<LimitEstimate> estimates;

  bool passed() const;
  nlohmann::json to_json() const;
  std::string summary() const;
};

/// Names accepted by run_suite, in the order `all` runs them.
const std::vector<std::string>& suite_names();

/// axioms | irq | limits | transport | planted; `all` expands to the first
/// four. Throws PreconditionError for an unknown name or model.
std::vector<SuiteResult> run_suite(const std::string& name, const SuiteConfig& config);

}  // namespace ngd
