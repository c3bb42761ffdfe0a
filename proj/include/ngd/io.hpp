#pragma once

#include "ngd/constructions.hpp"
#include "ngd/suites.hpp"
#include "ngd/transport.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace ngd::io {

/// Malformed input: `path` is a JSON pointer to the offending value.
class SchemaError : public PreconditionError {
 public:
  SchemaError(std::string path, const std::string& message)
      : PreconditionError(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

nlohmann::json read_json_file(const std::string& path);

/// A rational from "p/q", a decimal string or a JSON number (read through its
/// shortest decimal form, so 0.1 is 1/10).
Rational rational_from_json(const nlohmann::json& j, const std::string& path);
nlohmann::json to_json(const Rational& r);

/// {"points":[...], "dist":[[...]]}; points may be names or numbers.
FiniteMetricSpace metric_space_from_json(const nlohmann::json& j, const std::string& path = "");

struct GroupoidInput {
  FiniteGroupoid groupoid;
  std::optional<Norm> norm;
};

/// {"arrows":[ids], "compose":[[g,h,gh],...], "inverse":[[g,ginv],...],
///  "norm":{id: rational}}; ids may be strings or integers.
GroupoidInput groupoid_from_json(const nlohmann::json& j, const std::string& path = "");

/// {"elements":[...], "mul":[[...]], "act":[[...]]}.
GroupAction group_action_from_json(const nlohmann::json& j, const std::string& path = "");

struct TransportInput {
  FiniteMetricSpace space;
  std::optional<Measure> mu, nu;
  std::optional<Coupling> gamma, gamma2;
  std::optional<std::vector<Rational>> u;
};

/// {"space":{...}, "mu":[...], "nu":[...], "gamma":[[...]], "gamma2":[[...]],
///  "u":[...]}; everything but the space is optional. Declared marginals
/// must match the plans exactly.
TransportInput transport_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Measure& m);
nlohmann::json to_json(const Coupling& c);

/// {"model", "dim", "radius", "samples", "seed", "eps_grid", "tol",
///  "suites":[...]}; absent keys keep the defaults of `base`. The suite list
/// is returned separately and stays empty when absent.
SuiteConfig suite_config_from_json(const nlohmann::json& j, SuiteConfig base, std::vector<std::string>* suites);

}  // namespace ngd::io
