#pragma once

#include <nlohmann/json.hpp>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ngd {

/// Table or schema is malformed (result outside the arrow set, negative norm, ...).
/// Distinct from an axiom failure, which is reported, not thrown.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was called outside its precondition (fiber mismatch, marginal
/// mismatch, non-Lipschitz potential, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A composition left the declared domain of a dilation. `stage` names the
/// inner step that failed.
class DomainError : public std::domain_error {
 public:
  DomainError(std::string stage, const std::string& what)
      : std::domain_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

struct Violation {
  std::string clause;
  std::string witness;
};

/// Outcome of an axiom check. Keeps the first `max_witnesses` counterexamples
/// and the total count per run.
class ValidationReport {
 public:
  static constexpr std::size_t kDefaultWitnesses = 10;

  explicit ValidationReport(std::string subject = {},
                            std::size_t max_witnesses = kDefaultWitnesses);

  /// Records one evaluated instance of `clause`; on failure the witness
  /// string is stored if there is room.
  void check(bool ok, std::string_view clause, const std::string& witness = {});
  template <typename WitnessFn>
  void check_lazy(bool ok, std::string_view clause, WitnessFn&& witness) {
    ++checks_;
    if (!ok) record(clause, witness());
  }
  void fail(std::string_view clause, std::string witness);
  void note(std::string text);
  void set_structural(std::string message);

  /// Appends all checks, violations and notes of `other`, prefixing clauses.
  void merge(const ValidationReport& other, std::string_view prefix = {});

  bool passed() const noexcept { return !structural_ && violation_count_ == 0; }
  bool structural() const noexcept { return structural_; }
  const std::string& structural_message() const noexcept { return structural_message_; }
  bool has_violation(std::string_view clause) const;

  const std::string& subject() const noexcept { return subject_; }
  std::size_t checks() const noexcept { return checks_; }
  std::size_t violation_count() const noexcept { return violation_count_; }
  const std::vector<Violation>& witnesses() const noexcept { return witnesses_; }
  const std::vector<std::string>& notes() const noexcept { return notes_; }
  const std::vector<std::string>& failed_clauses() const noexcept { return failed_clauses_; }

  nlohmann::json to_json() const;
  std::string summary() const;

 private:
  void record(std::string_view clause, std::string witness);

  std::string subject_;
  std::size_t max_witnesses_;
  std::size_t checks_ = 0;
  std::size_t violation_count_ = 0;
  bool structural_ = false;
  std::string structural_message_;
  std::vector<Violation> witnesses_;
  std::vector<std::string> failed_clauses_;
  std::vector<std::string> notes_;
};

}  // namespace ngd
