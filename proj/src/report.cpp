#include "ngd/report.hpp"

#include <algorithm>
#include <sstream>

namespace ngd {

ValidationReport::ValidationReport(std::string subject, std::size_t max_witnesses)
    : subject_(std::move(subject)), max_witnesses_(max_witnesses) {}

void ValidationReport::check(bool ok, std::string_view clause, const std::string& witness) {
  ++checks_;
  if (!ok) record(clause, witness);
}

void ValidationReport::fail(std::string_view clause, std::string witness) {
  ++checks_;
  record(clause, std::move(witness));
}

void ValidationReport::record(std::string_view clause, std::string witness) {
  ++violation_count_;
  if (std::find(failed_clauses_.begin(), failed_clauses_.end(), clause) == failed_clauses_.end())
    failed_clauses_.emplace_back(clause);
  if (witnesses_.size() < max_witnesses_) witnesses_.push_back({std::string(clause), std::move(witness)});
}

void ValidationReport::note(std::string text) { notes_.push_back(std::move(text)); }

void ValidationReport::set_structural(std::string message) {
  structural_ = true;
  structural_message_ = std::move(message);
}

void ValidationReport::merge(const ValidationReport& other, std::string_view prefix) {
  const std::string pre = prefix.empty() ? std::string{} : std::string(prefix) + "/";
  checks_ += other.checks_;
  violation_count_ += other.violation_count_;
  for (const auto& c : other.failed_clauses_) {
    std::string name = pre + c;
    if (std::find(failed_clauses_.begin(), failed_clauses_.end(), name) == failed_clauses_.end())
      failed_clauses_.push_back(std::move(name));
  }
  for (const auto& w : other.witnesses_) {
    if (witnesses_.size() >= max_witnesses_) break;
    witnesses_.push_back({pre + w.clause, w.witness});
  }
  for (const auto& n : other.notes_) notes_.push_back(pre + n);
  if (other.structural_ && !structural_) set_structural(pre + other.structural_message_);
}

bool ValidationReport::has_violation(std::string_view clause) const {
  return std::find(failed_clauses_.begin(), failed_clauses_.end(), clause) != failed_clauses_.end();
}

nlohmann::json ValidationReport::to_json() const {
  nlohmann::json j;
  j["subject"] = subject_;
  j["pass"] = passed();
  j["checks"] = checks_;
  j["violations"] = violation_count_;
  if (structural_) j["structural_error"] = structural_message_;
  j["failed_clauses"] = failed_clauses_;
  auto& w = j["witnesses"] = nlohmann::json::array();
  for (const auto& v : witnesses_) w.push_back({{"clause", v.clause}, {"witness", v.witness}});
  j["notes"] = notes_;
  return j;
}

std::string ValidationReport::summary() const {
  std::ostringstream out;
  out << (passed() ? "PASS" : "FAIL") << "  " << subject_ << "  (" << checks_ << " checks";
  if (violation_count_ > 0) out << ", " << violation_count_ << " violations";
  out << ")";
  if (structural_) out << "\n    structural error: " << structural_message_;
  for (const auto& v : witnesses_) out << "\n    [" << v.clause << "] " << v.witness;
  for (const auto& n : notes_) out << "\n    note: " << n;
  return out.str();
}

}  // namespace ngd
