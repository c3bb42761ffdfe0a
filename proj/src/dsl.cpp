#include "ngd/dsl.hpp"

#include "ngd/dilation.hpp"
#include "ngd/emergent.hpp"
#include "ngd/limits.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <sstream>

namespace ngd::dsl {

namespace {

std::string join_expected(const std::vector<std::string>& e) {
  std::string out;
  for (std::size_t i = 0; i < e.size(); ++i) out += (i ? ", " : "") + e[i];
  return out;
}

std::string position(const Span& s) { return std::to_string(s.line) + ":" + std::to_string(s.column); }

}  // namespace

ParseError::ParseError(Span at, std::string message, std::vector<std::string> expected)
    : std::runtime_error(position(at) + ": " + message +
                         (expected.empty() ? "" : " (expected " + join_expected(expected) + ")")),
      at_(at),
      message_(std::move(message)),
      expected_(std::move(expected)) {}

EvalError::EvalError(Span at, const std::string& message, bool domain)
    : std::runtime_error(position(at) + ": " + message), at_(at), domain_(domain) {}

const std::vector<OpInfo>& operations() {
  static const std::vector<OpInfo> ops{
      {"delta", {2}, "delta_checked"},
      {"dilat", {3}, "dilatation"},
      {"circ", {3}, "irq_from_dilation"},
      {"Delta", {3, 4}, "approx_difference3"},
      {"Sigma", {3, 4}, "approx_sum3"},
      {"inv", {2, 3}, "approx_inverse3"},
      {"d", {1, 2}, "double_norm"},
      {"lim", {1}, "extrapolate_to_zero"},
      {"let", {3}, "binding"},
  };
  return ops;
}

const OpInfo* find_operation(const std::string& name) {
  for (const auto& op : operations())
    if (op.name == name) return &op;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

struct Token {
  enum class Kind { ident, number, lparen, rparen, comma, arrow, end };
  Kind kind;
  std::string text;
  Span span;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Token::Kind::end:
      return "end of input";
    case Token::Kind::number:
      return "number " + t.text;
    case Token::Kind::ident:
      return "identifier '" + t.text + "'";
    default:
      return "'" + t.text + "'";
  }
}

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto digit = [&](std::size_t k) { return k < src.size() && std::isdigit(static_cast<unsigned char>(src[k])); };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Span at{line, col, 1};
    if (c == '(' || c == ')' || c == ',') {
      out.push_back({c == '(' ? Token::Kind::lparen : c == ')' ? Token::Kind::rparen : Token::Kind::comma,
                     std::string(1, c), at});
      advance(1);
    } else if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      at.length = 2;
      out.push_back({Token::Kind::arrow, "->", at});
      advance(2);
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      at.length = static_cast<int>(j - i);
      out.push_back({Token::Kind::ident, src.substr(i, j - i), at});
      advance(j - i);
    } else if (digit(i) || ((c == '-' || c == '.') && (digit(i + 1) || (i + 1 < src.size() && src[i + 1] == '.' && digit(i + 2))))) {
      std::size_t j = i;
      if (src[j] == '-') ++j;
      while (digit(j)) ++j;
      if (j < src.size() && src[j] == '.') {
        ++j;
        while (digit(j)) ++j;
      }
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (digit(k)) {
          j = k;
          while (digit(j)) ++j;
        }
      }
      at.length = static_cast<int>(j - i);
      out.push_back({Token::Kind::number, src.substr(i, j - i), at});
      advance(j - i);
    } else {
      throw ParseError(at, std::string("unexpected character '") + c + "'",
                       {"number", "identifier", "'('", "')'", "','", "'->'"});
    }
  }
  out.push_back({Token::Kind::end, "", {line, col, 0}});
  return out;
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Term parse_all() {
    Term t = term();
    expect(Token::Kind::end, {"end of input"});
    return t;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  Token take() { return toks_[pos_ == toks_.size() - 1 ? pos_ : pos_++]; }

  Token expect(Token::Kind k, const std::vector<std::string>& expected) {
    if (peek().kind != k) throw ParseError(peek().span, "unexpected " + describe(peek()), expected);
    return take();
  }

  Term term() {
    const Token& t = peek();
    switch (t.kind) {
      case Token::Kind::number: {
        Token n = take();
        return {Term::Kind::number, n.text, {}, n.span};
      }
      case Token::Kind::ident: {
        Token id = take();
        if (peek().kind == Token::Kind::lparen) return application(id);
        if (find_operation(id.text))
          throw ParseError(peek().span, "operation '" + id.text + "' needs arguments", {"'('"});
        return {Term::Kind::ident, id.text, {}, id.span};
      }
      case Token::Kind::lparen: {
        Token open = take();
        Term tuple{Term::Kind::tuple, "", {}, open.span};
        tuple.children.push_back(term());
        while (peek().kind == Token::Kind::comma) {
          take();
          tuple.children.push_back(term());
        }
        expect(Token::Kind::rparen, {"','", "')'"});
        return tuple;
      }
      default:
        throw ParseError(t.span, "unexpected " + describe(t), {"number", "identifier", "'('"});
    }
  }

  Term application(const Token& name) {
    const OpInfo* op = find_operation(name.text);
    if (!op) {
      std::vector<std::string> known;
      for (const auto& o : operations()) known.push_back(o.name);
      throw ParseError(name.span, "unknown operation '" + name.text + "'", known);
    }
    take();  // '('
    if (name.text == "lim") return limit(name);
    Term app{Term::Kind::app, name.text, {}, name.span};
    app.children.push_back(term());
    while (peek().kind == Token::Kind::comma) {
      take();
      app.children.push_back(term());
    }
    expect(Token::Kind::rparen, {"','", "')'"});
    const auto n = app.children.size();
    if (std::find(op->arities.begin(), op->arities.end(), n) == op->arities.end()) {
      std::string want;
      for (std::size_t i = 0; i < op->arities.size(); ++i)
        want += (i ? " or " : "") + std::to_string(op->arities[i]);
      throw ParseError(name.span, name.text + " takes " + want + " arguments, got " + std::to_string(n));
    }
    if (name.text == "let" && app.children[0].kind != Term::Kind::ident)
      throw ParseError(app.children[0].span, "let binds a name", {"identifier"});
    return app;
  }

  Term limit(const Token& name) {
    Token var = expect(Token::Kind::ident, {"identifier"});
    expect(Token::Kind::arrow, {"'->'"});
    Token zero = expect(Token::Kind::number, {"0"});
    if (std::stod(zero.text) != 0.0) throw ParseError(zero.span, "limits are taken at 0", {"0"});
    expect(Token::Kind::comma, {"','"});
    Term lim{Term::Kind::lim, var.text, {}, name.span};
    lim.children.push_back(term());
    expect(Token::Kind::rparen, {"')'"});
    return lim;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Term parse(const std::string& src) { return Parser(lex(src)).parse_all(); }

std::string print(const Term& t) {
  switch (t.kind) {
    case Term::Kind::number:
    case Term::Kind::ident:
      return t.text;
    case Term::Kind::lim:
      return "lim(" + t.text + "->0, " + print(t.children[0]) + ")";
    case Term::Kind::tuple:
    case Term::Kind::app: {
      std::string out = t.kind == Term::Kind::app ? t.text + "(" : "(";
      for (std::size_t i = 0; i < t.children.size(); ++i) out += (i ? ", " : "") + print(t.children[i]);
      return out + ")";
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Values

Value Value::scalar(Quad x) {
  Value v;
  v.real = x;
  return v;
}

Value Value::of_point(Vec<Quad> p, Vec<Quad> base) {
  Value v;
  v.kind = Kind::point;
  v.arrow = {std::move(p), std::move(base)};
  return v;
}

Value Value::of_arrow(PairArrow<Quad> a) {
  Value v;
  v.kind = Kind::arrow;
  v.arrow = std::move(a);
  return v;
}

namespace {

std::string format_number(const Quad& x, int digits) {
  double d = static_cast<double>(x);
  if (std::abs(d) < 1e-14) d = 0.0;
  std::ostringstream out;
  out.precision(digits);
  out << d;
  return out.str();
}

}  // namespace

std::string format_value(const Value& v, int digits) {
  if (v.kind == Value::Kind::real) return format_number(v.real, digits);
  std::string out = "(";
  auto add = [&](const Vec<Quad>& p) {
    for (Eigen::Index i = 0; i < p.size(); ++i) out += (out.size() > 1 ? ", " : "") + format_number(p(i), digits);
  };
  add(v.arrow.target);
  if (v.kind == Value::Kind::arrow) add(v.arrow.source);
  return out + ")";
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

using Env = std::map<std::string, Value>;

template <typename Model>
class Evaluator {
 public:
  Evaluator(const Model& m, const EvalContext& ctx)
      : m_(m), ctx_(ctx), base_(m.group().identity()), grid_(ctx.eps_grid.empty() ? dyadic_grid() : ctx.eps_grid) {}

  EvalResult run(const Term& t) {
    Env env = ctx_.bindings;
    Value v = eval(t, env);
    return {std::move(v), std::move(limits_)};
  }

 private:
  using Arrow = PairArrow<Quad>;

  Value eval(const Term& t, Env& env) {
    switch (t.kind) {
      case Term::Kind::number:
        return Value::scalar(Quad(t.text));
      case Term::Kind::ident: {
        auto it = env.find(t.text);
        if (it == env.end()) throw EvalError(t.span, "unbound name '" + t.text + "'");
        return it->second;
      }
      case Term::Kind::tuple:
        return tuple(t, env);
      case Term::Kind::lim:
        return limit(t, env);
      case Term::Kind::app:
        break;
    }
    if (t.text == "let") {
      Env inner = env;
      inner[t.children[0].text] = eval(t.children[1], env);
      return eval(t.children[2], inner);
    }
    std::vector<Value> args;
    for (const auto& c : t.children) args.push_back(eval(c, env));
    try {
      return apply(t, args);
    } catch (const DomainError& e) {
      throw EvalError(t.span, e.what(), true);
    } catch (const PreconditionError& e) {
      throw EvalError(t.span, e.what());
    }
  }

  Value tuple(const Term& t, Env& env) {
    const auto n = static_cast<int>(t.children.size());
    const int dim = m_.dim();
    if (n != dim && n != 2 * dim)
      throw EvalError(t.span, "tuple of length " + std::to_string(n) + " is neither a point (" + std::to_string(dim) +
                                  " coordinates) nor an arrow (" + std::to_string(2 * dim) + ")");
    Vec<Quad> coords(n);
    for (int i = 0; i < n; ++i) {
      Value c = eval(t.children[static_cast<std::size_t>(i)], env);
      if (c.kind != Value::Kind::real)
        throw EvalError(t.children[static_cast<std::size_t>(i)].span, "tuple coordinates must be numbers");
      coords(i) = c.real;
    }
    if (n == dim) return Value::of_point(coords, base_);
    return Value::of_arrow({coords.head(dim), coords.tail(dim)});
  }

  Quad scale(const Term& t, const Value& v) const {
    if (v.kind != Value::Kind::real) throw EvalError(t.span, "expected a scale, got " + format_value(v));
    if (v.real == 0) throw EvalError(t.span, "scale must be nonzero");
    return v.real;
  }

  const Arrow& arrow(const Term& t, const Value& v) const {
    if (v.kind == Value::Kind::real) throw EvalError(t.span, "expected a point or arrow, got the number " + format_value(v));
    return v.arrow;
  }

  Value apply(const Term& t, const std::vector<Value>& a) {
    const auto& c = t.children;
    const auto n = a.size();
    bool points = true;
    auto A = [&](std::size_t i) -> const Arrow& {
      const Arrow& r = arrow(c[i], a[i]);
      points = points && a[i].kind == Value::Kind::point;
      return r;
    };
    auto result = [&](Arrow r) { return points ? Value::of_point(std::move(r.target), base_) : Value::of_arrow(std::move(r)); };
    const std::string& op = t.text;
    // Base point u of the based forms: explicit, or the unit over the source
    // of the first arrow argument.
    auto based = [&](std::size_t arity) -> Arrow { return n == arity ? A(1) : m_.alpha(A(1)); };
    if (op == "d") {
      const Arrow& g = A(0);
      const Arrow h = n == 2 ? A(1) : m_.alpha(g);
      detail::require_same_source(m_, g, h, "d");
      return Value::scalar(double_norm(m_, g, h));
    }
    const Quad eps = scale(c[0], a[0]);
    const std::size_t k = n == 4 || (op == "inv" && n == 3) ? 2 : 1;  // first non-base argument
    if (op == "delta") return result(m_.delta_checked(eps, A(1), "delta"));
    if (op == "dilat") {
      const Arrow& h = A(1);
      return result(dilatation(m_, eps, h, A(2)));
    }
    if (op == "circ") {
      const Arrow& x = A(1);
      const Arrow& y = A(2);
      detail::require_same_source(m_, x, y, "circ");
      return result({irq_from_dilation(m_, eps, x.source).circ(x.target, y.target), x.source});
    }
    if (op == "Delta" || op == "Sigma") {
      const Arrow u = based(4);
      Arrow g = A(k);
      Arrow h = A(k + 1);
      if (n == 3) std::swap(g, h);
      return result(op == "Delta" ? approx_difference3(m_, eps, u, g, h) : approx_sum3(m_, eps, u, g, h));
    }
    if (op == "inv") {
      const Arrow u = based(3);
      return result(approx_inverse3(m_, eps, u, A(k)));
    }
    throw EvalError(t.span, "no evaluation rule for '" + op + "'");
  }

  Value limit(const Term& t, Env& env) {
    const Term& body = t.children[0];
    Env inner = env;
    std::vector<double> eps;
    std::vector<Value> vals;
    LimitEstimate est;
    est.axiom = "lim " + print(body);
    est.samples = 1;
    ++depth_;
    for (double e : grid_) {
      inner[t.text] = Value::scalar(Quad(e));
      try {
        vals.push_back(eval(body, inner));
      } catch (const EvalError& err) {
        if (!err.domain()) {
          --depth_;
          throw;
        }
        // Large scales may start outside the domain; losing points on the way
        // to 0 makes the sweep partial.
        if (!vals.empty() && est.partial.empty()) est.partial = "domain exit at " + detail::eps_str(e);
        est.trace.push_back(detail::eps_str(e) + ": " + err.what());
        continue;
      }
      eps.push_back(e);
    }
    --depth_;
    if (vals.empty()) throw EvalError(t.span, "limit body leaves the domain at every grid point", true);

    Value lim = vals.front();
    if (lim.kind == Value::Kind::real) {
      std::vector<Quad> r;
      for (const auto& v : vals) r.push_back(v.real);
      lim.real = extrapolate_to_zero<Quad>(eps, r);
    } else {
      std::vector<Arrow> r;
      for (const auto& v : vals) r.push_back(v.arrow);
      lim.arrow = extrapolate_arrow<Quad>(eps, r);
    }
    using std::abs;
    for (std::size_t i = 0; i < vals.size(); ++i) {
      est.eps.push_back(eps[i]);
      est.residual.push_back(lim.kind == Value::Kind::real ? static_cast<double>(abs(Quad(vals[i].real - lim.real)))
                                                           : coordinate_residual(vals[i].arrow, lim.arrow));
    }
    fit_order(est, residual_floor<Quad>());
    decide(est, ctx_.tol);
    if (depth_ == 0) limits_.push_back(std::move(est));
    return lim;
  }

  Model m_;
  const EvalContext& ctx_;
  Vec<Quad> base_;
  std::vector<double> grid_;
  int depth_ = 0;
  std::vector<LimitEstimate> limits_;
};

}  // namespace

EvalResult eval(const Term& t, const EvalContext& ctx) {
  const DomainSpec domain{ctx.domain_bound, false};
  if (ctx.model == "euclidean") {
    if (ctx.dim < 0) throw PreconditionError("dimension must be nonnegative");
    return Evaluator(make_euclidean<Quad>(ctx.dim, domain), ctx).run(t);
  }
  if (ctx.model == "heisenberg")
    return Evaluator(HeisenbergModel<Quad>(HeisenbergGroup<Quad>{}, CyganGauge{}, domain), ctx).run(t);
  throw PreconditionError("unknown model '" + ctx.model + "' (expected euclidean or heisenberg)");
}

EvalResult eval(const std::string& src, const EvalContext& ctx) { return eval(parse(src), ctx); }

}  // namespace ngd::dsl
