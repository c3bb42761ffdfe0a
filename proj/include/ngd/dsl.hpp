#pragma once

#include "ngd/estimate.hpp"
#include "ngd/models.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ngd::dsl {

/// 1-based source position of a term or token; `length` counts characters.
struct Span {
  int line = 1;
  int column = 1;
  int length = 0;
};

/// term := ident | number | tuple | app, app := name '(' term {',' term} ')'.
/// `lim(eps->0, t)` is its own node kind with the bound variable in `text`.
struct Term {
  enum class Kind { number, ident, tuple, app, lim };
  Kind kind = Kind::number;
  std::string text;  // literal digits, identifier, operation name or limit variable
  std::vector<Term> children;
  Span span;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(Span at, std::string message, std::vector<std::string> expected = {});
  const Span& span() const noexcept { return at_; }
  const std::string& message() const noexcept { return message_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  Span at_;
  std::string message_;
  std::vector<std::string> expected_;
};

/// Type errors, unbound names and domain exits during evaluation, located at
/// the failing subterm. `domain` is set for domain exits.
class EvalError : public std::runtime_error {
 public:
  EvalError(Span at, const std::string& message, bool domain = false);
  const Span& span() const noexcept { return at_; }
  bool domain() const noexcept { return domain_; }

 private:
  Span at_;
  bool domain_;
};

/// Operation names with their accepted arities and the library operation
/// that runs. `let` and `lim` are binders. The short forms are the groupoid
/// operations, run through the based forms at the unit u over the common
/// source: Delta(e, g, h) = Delta^u_e(h, g) = Delta_e(g, h), likewise Sigma,
/// inv(e, g) = inv^u_e(g) and d(g) = d(g u^-1).
struct OpInfo {
  std::string name;
  std::vector<std::size_t> arities;
  std::string library_op;
};
const std::vector<OpInfo>& operations();
const OpInfo* find_operation(const std::string& name);

Term parse(const std::string& src);
/// Canonical form: ", " between arguments, literals as written.
std::string print(const Term& t);

/// Points are tuples of length dim; arrows are tuples of length 2 dim
/// (target coordinates, then source). A point p used where an arrow is
/// expected stands for the arrow p <- base, with base the group identity, and
/// an operation whose arrow arguments were all points returns a point.
struct Value {
  enum class Kind { real, point, arrow };
  Kind kind = Kind::real;
  Quad real = 0;
  PairArrow<Quad> arrow;  // a point is stored as its arrow from the base

  static Value scalar(Quad x);
  static Value of_point(Vec<Quad> p, Vec<Quad> base);
  static Value of_arrow(PairArrow<Quad> a);
};

std::string format_value(const Value& v, int digits = 15);

struct EvalContext {
  std::string model = "euclidean";  // euclidean | heisenberg
  int dim = 1;
  std::vector<double> eps_grid;     // dyadic 2^-1..2^-20 when empty
  double tol = 1e-5;
  std::optional<double> domain_bound;
  std::map<std::string, Value> bindings;
};

struct EvalResult {
  Value value;
  /// One estimate per lim node evaluated outside any other lim, in
  /// evaluation order. Grid points where the body leaves the domain are
  /// skipped and listed in the estimate's trace; a skip after the first
  /// successful point marks the estimate partial.
  std::vector<LimitEstimate> limits;
};

EvalResult eval(const Term& t, const EvalContext& ctx);
EvalResult eval(const std::string& src, const EvalContext& ctx);

}  // namespace ngd::dsl
